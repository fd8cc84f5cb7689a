#include "apdyn/average_series.hpp"

#include <algorithm>

namespace apdyn {

void AverageSeries::finish() {
    if (checkpoints.empty()) {
        oscillation = 0.0;
        final_value = 0.0;
        return;
    }
    final_value = checkpoints.back().value;
    std::size_t start = checkpoints.size() / 2;
    double lo = checkpoints[start].value;
    double hi = lo;
    for (std::size_t i = start; i < checkpoints.size(); ++i) {
        lo = std::min(lo, checkpoints[i].value);
        hi = std::max(hi, checkpoints[i].value);
    }
    oscillation = hi - lo;
}

}  // namespace apdyn
