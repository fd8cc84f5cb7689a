#pragma once

#include <string>
#include <vector>

#include "apdyn/average_series.hpp"
#include "apdyn/system.hpp"
#include "apdyn/torus.hpp"

namespace apdyn {

/// A closed little algebra of test functions, all bounded by 1: coordinate
/// cosines, box indicators, and finite products of those.
class Observable {
public:
    /// w -> cos(2 pi freq w_axis)
    static Observable coordinate_cosine(int axis, long long freq);

    /// w -> 1 if lo_i <= w_i < hi_i for every coordinate. Bounds are plain
    /// intervals with 0 <= lo < hi <= 1 and positive volume.
    static Observable indicator_box(std::vector<std::pair<double, double>> bounds);

    static Observable product(std::vector<Observable> factors);

    /// Always 1 (the constant observable is the empty product).
    static Observable one();

    double eval(const TorusPoint& p) const;
    bool is_box() const { return kind_ == Kind::Box; }
    double box_volume() const;
    int box_dim() const { return static_cast<int>(box_lo_.size()); }
    /// Raw bounds of coordinate i; hi is all-ones when the bound is 1.0.
    FixedAngle box_lo(int i) const { return box_lo_[static_cast<std::size_t>(i)]; }
    FixedAngle box_hi(int i) const { return box_hi_[static_cast<std::size_t>(i)]; }
    std::string describe() const;

private:
    enum class Kind { Cosine, Box, Product };
    Kind kind_ = Kind::Product;
    int axis_ = 0;
    long long freq_ = 1;
    std::vector<FixedAngle> box_lo_, box_hi_;
    std::vector<double> box_lo_d_, box_hi_d_;
    std::vector<Observable> factors_;
};

/// Partial averages (1/N) sum_{n<N} f(T^n x) at the checkpoints in n_list
/// (strictly increasing), compensated summation, sequential fixed order.
AverageSeries birkhoff_average(const SystemSpec& sys, const Observable& f, const TorusPoint& x,
                               const std::vector<long long>& n_list);

/// Averages along arithmetic progressions: (1/N) sum_{n<N} prod_i f_i(T^{(i+1) n} x) for
/// d = fs.size() observables, 1 <= d <= 4. With d = 1 this takes the exact
/// code path of birkhoff_average, so the two agree bit for bit.
AverageSeries multiple_ergodic_average(const SystemSpec& sys, const std::vector<Observable>& fs,
                                       const TorusPoint& x, const std::vector<long long>& n_list);

/// Running average over n < n_steps of the grid estimate of
/// mu(A and T^{-n}A and ... and T^{-kn}A), where mu is Lebesgue measure
/// estimated as the fraction of the uniform grid (grid_size points per
/// axis) lying in the intersection. Checkpoints at powers of two and at
/// n_steps. Throws if the box volume is below 0.01.
AverageSeries multiple_recurrence_frequency(const SystemSpec& sys, const Observable& box, int k,
                                            long long n_steps, long long grid_size,
                                            int workers = 1);

/// The grid estimate of mu(A and T^{-n}A and ... and T^{-kn}A) for a single
/// n; exposed for oracle cross-checks. For rotations with a power-of-two
/// grid this uses exact arc counting, which equals the brute-force count
/// bit for bit.
double recurrence_intersection_measure(const SystemSpec& sys, const Observable& box, int k,
                                       long long n, long long grid_size);

/// The same measure by direct enumeration of every grid point (the slow
/// reference path).
double recurrence_intersection_measure_brute(const SystemSpec& sys, const Observable& box, int k,
                                             long long n, long long grid_size);

}  // namespace apdyn
