#pragma once

#include <array>
#include <string>

#include "apdyn/fixed_angle.hpp"

namespace apdyn {

/// Point of the k-torus, k = 1 or 2. Coordinates always lie in [0,1)
/// because FixedAngle wraps.
class TorusPoint {
public:
    TorusPoint() = default;
    explicit TorusPoint(FixedAngle x) : dim_(1) { c_[0] = x; }
    TorusPoint(FixedAngle x, FixedAngle y) : dim_(2) {
        c_[0] = x;
        c_[1] = y;
    }

    static TorusPoint circle(double x) { return TorusPoint(FixedAngle::from_double(x)); }
    static TorusPoint torus2(double x, double y) {
        return TorusPoint(FixedAngle::from_double(x), FixedAngle::from_double(y));
    }

    int dim() const { return dim_; }
    FixedAngle operator[](int i) const { return c_[static_cast<std::size_t>(i)]; }
    FixedAngle& operator[](int i) { return c_[static_cast<std::size_t>(i)]; }

    friend bool operator==(const TorusPoint& a, const TorusPoint& b) {
        if (a.dim_ != b.dim_) return false;
        for (int i = 0; i < a.dim_; ++i)
            if (a.c_[static_cast<std::size_t>(i)] != b.c_[static_cast<std::size_t>(i)]) return false;
        return true;
    }

private:
    std::array<FixedAngle, 2> c_{};
    int dim_ = 1;
};

/// Max over coordinates of the circle distance. Throws std::invalid_argument
/// on dimension mismatch. Each coordinate term is at most 1/2.
double torus_dist(const TorusPoint& x, const TorusPoint& y);

/// Same metric evaluated exactly in fixed point (usable for strict
/// threshold comparisons with no rounding).
FixedAngle torus_gap(const TorusPoint& x, const TorusPoint& y);

/// "0.25,0.5" style, for logs; lossy (17 significant digits).
std::string to_string(const TorusPoint& p);

/// "deadbeef...,0123..." full-precision form.
std::string to_hex(const TorusPoint& p);
TorusPoint torus_point_from_hex(const std::string& text);

}  // namespace apdyn
