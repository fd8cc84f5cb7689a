#pragma once

namespace apdyn {

// Kahan compensated summation; drop-in for a plain double accumulator.
class KahanSum {
public:
    KahanSum() = default;
    explicit KahanSum(double init) : sum_(init) {}

    KahanSum& operator+=(double v) {
        double y = v - c_;
        double t = sum_ + y;
        c_ = (t - sum_) - y;
        sum_ = t;
        return *this;
    }

    double value() const { return sum_; }
    void reset() {
        sum_ = 0.0;
        c_ = 0.0;
    }

private:
    double sum_ = 0.0;
    double c_ = 0.0;
};

}  // namespace apdyn
