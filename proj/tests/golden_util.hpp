#pragma once

#include <string>

#include "apdyn/config.hpp"

// Golden files live in the source tree and are produced by golden_gen; the
// test binaries get the directory via a compile definition.
inline apdyn::KvConfig load_golden(const std::string& name) {
    return apdyn::KvConfig::parse_file(std::string(APDYN_GOLDEN_DIR) + "/" + name);
}

inline std::string golden_path(const std::string& name) {
    return std::string(APDYN_GOLDEN_DIR) + "/" + name;
}
