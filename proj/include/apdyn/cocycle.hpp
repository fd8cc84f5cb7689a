#pragma once

#include <cstdint>
#include <vector>

#include "apdyn/average_series.hpp"
#include "apdyn/fixed_angle.hpp"
#include "apdyn/torus.hpp"

namespace apdyn {

/// Truncated Fourier cocycle u(x) = lambda*h(x) + beta over the rotation by
/// alpha, where
///
///   h(theta) = sum_{k != 0} (1/|k|) (e^{2 pi i n_k alpha} - 1) e^{2 pi i n_k theta},
///   H(theta) = sum_{k != 0} (1/|k|) e^{2 pi i n_k theta},
///
/// truncated to |k| <= K with n_{-k} = -n_k, so both sums are real and
/// h = H(.+alpha) - H termwise.
struct CocycleParams {
    FixedAngle alpha;
    double lambda = 1.0;
    FixedAngle beta;
    std::vector<long long> freqs;  // n_1 < n_2 < ... < n_K, all positive

    int order() const { return static_cast<int>(freqs.size()); }  // K

    /// Throws std::invalid_argument unless freqs is strictly increasing,
    /// positive, and small enough for exact phase arithmetic.
    void validate() const;

    static CocycleParams defaults();
};

/// Truncation of sum_{m=1..6} 10^{-m!}; the terms 10^{-120} and 10^{-720}
/// are below the 2^-128 resolution, so four digits survive.
FixedAngle liouville_alpha();

/// n_k = 10, 100, 10^6 for k <= 3; doubled from there for larger K. The
/// default order is 3: the padded tail no longer has decreasing
/// coefficient magnitudes, it exists only for stress experiments.
std::vector<long long> default_frequencies(int k_order);

/// H(theta) = 2 sum_{k=1..K} (1/k) cos(2 pi n_k theta). Phases n_k*theta are
/// reduced mod 1 in exact fixed point, so no accuracy is lost to large n_k.
double eval_H(const CocycleParams& params, FixedAngle theta);
double eval_H(const CocycleParams& params, double theta);

/// h via the direct coefficient sum (independent of eval_H):
/// h(theta) = sum_k (2/k) [ (cos psi_k - 1) cos phi_k - sin psi_k sin phi_k ],
/// psi_k = 2 pi n_k alpha, phi_k = 2 pi n_k theta.
double eval_h(const CocycleParams& params, FixedAngle theta);
double eval_h(const CocycleParams& params, double theta);

/// Deviation sums S_n = sum_{j<n} lambda h(x + j alpha) for n = 1..N,
/// compensated summation, rotation orbit evaluated in exact fixed point.
std::vector<double> birkhoff_deviation(const CocycleParams& params, FixedAngle x, long long n_steps);

struct DeviationPointStats {
    double x = 0.0;
    double sup = 0.0;            // max over n of S_n (signed)
    double inf = 0.0;            // min over n of S_n (signed)
    long long argmax_abs = 0;    // n attaining max |S_n| (first such n)
    double max_abs = 0.0;        // max over n of |S_n|
};

struct DeviationReport {
    long long grid_size = 0;
    long long n_steps = 0;
    double threshold = 0.0;
    double lambda = 0.0;
    std::vector<DeviationPointStats> points;  // grid order, x = i/grid_size

    long long evidence_index = -1;     // first grid point with max_abs > threshold
    long long global_max_index = 0;    // argmax of max_abs over the grid
    double global_max_abs = 0.0;
    long long min_sup_index = 0;       // grid point minimizing the signed sup
    double min_over_grid_sup = 0.0;
    long long max_inf_index = 0;       // grid point maximizing the signed inf
    double max_over_grid_inf = 0.0;
    long long min_max_abs_index = 0;   // grid point with the smallest max |S_n|
    double min_over_grid_max_abs = 0.0;
};

/// Per-point sup/inf of S_n over n <= n_steps on the uniform grid
/// {i/grid_size}. Deterministic: identical output for any worker count.
DeviationReport unbounded_motion_scan(const CocycleParams& params, long long grid_size,
                                      long long n_steps, double threshold, int workers = 1);

/// Partial averages of f(w1,w2) = cos(2 pi w2) along the skew orbit
/// U(w1,w2) = (w1 + alpha, w2 + lambda h(w1)), sampled at the requested N
/// values (strictly increasing).
AverageSeries circle_extension_average(const CocycleParams& params,
                                       const std::vector<long long>& n_list, const TorusPoint& w);

}  // namespace apdyn
