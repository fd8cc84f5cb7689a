#include "apdyn/torus.hpp"

#include <cstdio>
#include <stdexcept>

namespace apdyn {

double torus_dist(const TorusPoint& x, const TorusPoint& y) { return torus_gap(x, y).to_double(); }

FixedAngle torus_gap(const TorusPoint& x, const TorusPoint& y) {
    if (x.dim() != y.dim()) throw std::invalid_argument("torus_gap: dimension mismatch");
    FixedAngle best;
    for (int i = 0; i < x.dim(); ++i) {
        FixedAngle g = circle_gap(x[i], y[i]);
        if (g > best) best = g;
    }
    return best;
}

std::string to_string(const TorusPoint& p) {
    char buf[64];
    std::string out;
    for (int i = 0; i < p.dim(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", p[i].to_double());
        if (i) out += ',';
        out += buf;
    }
    return out;
}

std::string to_hex(const TorusPoint& p) {
    std::string out;
    for (int i = 0; i < p.dim(); ++i) {
        if (i) out += ',';
        out += p[i].to_hex();
    }
    return out;
}

TorusPoint torus_point_from_hex(const std::string& text) {
    auto comma = text.find(',');
    if (comma == std::string::npos) return TorusPoint(FixedAngle::from_hex(text));
    return TorusPoint(FixedAngle::from_hex(text.substr(0, comma)),
                      FixedAngle::from_hex(text.substr(comma + 1)));
}

}  // namespace apdyn
