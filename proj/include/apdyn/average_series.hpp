#pragma once

#include <cstdint>
#include <vector>

namespace apdyn {

/// Partial Birkhoff-type averages A_N at increasing checkpoints N.
struct AverageSeries {
    struct Checkpoint {
        long long n = 0;
        double sum = 0.0;    // running compensated sum at this N
        double value = 0.0;  // sum / n
    };

    std::vector<Checkpoint> checkpoints;

    /// max - min of the values over the tail half of the checkpoints.
    double oscillation = 0.0;

    /// Value at the largest N.
    double final_value = 0.0;

    void finish();  // fills oscillation and final_value from checkpoints
};

}  // namespace apdyn
