#include "apdyn/cocycle.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "apdyn/kahan.hpp"

namespace apdyn {
namespace {

constexpr long double kTwoPiL = 2.0L * std::numbers::pi_v<long double>;

long double phase_of(long long freq, FixedAngle theta) {
    // frac(freq * theta) with no rounding, then one conversion.
    return (int128(freq) * theta).to_long_double();
}

// alpha-dependent coefficients of the direct sum for h.
struct HEvaluator {
    FixedAngle alpha;
    std::vector<long long> freqs;
    std::vector<double> a_coef;  // (2/k)(cos psi_k - 1)
    std::vector<double> b_coef;  // -(2/k) sin psi_k
    std::vector<FixedAngle> alpha_step;  // n_k * alpha, for exact phase advance

    explicit HEvaluator(const CocycleParams& p) {
        p.validate();
        alpha = p.alpha;
        freqs = p.freqs;
        a_coef.reserve(freqs.size());
        b_coef.reserve(freqs.size());
        alpha_step.reserve(freqs.size());
        for (std::size_t k = 0; k < freqs.size(); ++k) {
            FixedAngle na = int128(freqs[k]) * p.alpha;
            long double psi = kTwoPiL * na.to_long_double();
            long double scale = 2.0L / static_cast<long double>(k + 1);
            a_coef.push_back(static_cast<double>(scale * (std::cos(psi) - 1.0L)));
            b_coef.push_back(static_cast<double>(-scale * std::sin(psi)));
            alpha_step.push_back(na);
        }
    }

    double eval(FixedAngle theta) const {
        long double acc = 0.0L;
        for (std::size_t k = 0; k < freqs.size(); ++k) {
            long double phi = kTwoPiL * phase_of(freqs[k], theta);
            acc += static_cast<long double>(a_coef[k]) * std::cos(phi) +
                   static_cast<long double>(b_coef[k]) * std::sin(phi);
        }
        return static_cast<double>(acc);
    }
};

}  // namespace

void CocycleParams::validate() const {
    if (freqs.empty()) return;  // K = 0 is the empty cocycle, h = H = 0
    long long prev = 0;
    for (long long n : freqs) {
        if (n <= prev) throw std::invalid_argument("CocycleParams: freqs must be strictly increasing and positive");
        prev = n;
    }
    if (freqs.size() > 60) throw std::invalid_argument("CocycleParams: truncation order too large");
}

CocycleParams CocycleParams::defaults() {
    CocycleParams p;
    p.alpha = liouville_alpha();
    p.lambda = 1.0;
    p.beta = sqrt2_minus_one();
    p.freqs = default_frequencies(3);
    return p;
}

FixedAngle liouville_alpha() {
    std::string digits(40, '0');
    for (int factorial : {1, 2, 6, 24}) digits[static_cast<std::size_t>(factorial - 1)] = '1';
    return FixedAngle::from_decimal("0." + digits);
}

std::vector<long long> default_frequencies(int k_order) {
    if (k_order < 0 || k_order > 40) throw std::invalid_argument("default_frequencies: order out of range");
    std::vector<long long> f;
    f.reserve(static_cast<std::size_t>(k_order));
    for (int k = 1; k <= k_order; ++k) {
        if (k == 1)
            f.push_back(10);
        else if (k == 2)
            f.push_back(100);
        else
            f.push_back(1000000LL << (k - 3));
    }
    return f;
}

double eval_H(const CocycleParams& params, FixedAngle theta) {
    params.validate();
    long double acc = 0.0L;
    for (std::size_t k = 0; k < params.freqs.size(); ++k) {
        long double phi = kTwoPiL * phase_of(params.freqs[k], theta);
        acc += (2.0L / static_cast<long double>(k + 1)) * std::cos(phi);
    }
    return static_cast<double>(acc);
}

double eval_H(const CocycleParams& params, double theta) {
    return eval_H(params, FixedAngle::from_double(theta));
}

double eval_h(const CocycleParams& params, FixedAngle theta) {
    return HEvaluator(params).eval(theta);
}

double eval_h(const CocycleParams& params, double theta) {
    return eval_h(params, FixedAngle::from_double(theta));
}

std::vector<double> birkhoff_deviation(const CocycleParams& params, FixedAngle x, long long n_steps) {
    if (n_steps < 1) throw std::invalid_argument("birkhoff_deviation: n_steps must be >= 1");
    HEvaluator ev(params);
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(n_steps));
    KahanSum acc;
    FixedAngle xj = x;
    for (long long j = 0; j < n_steps; ++j) {
        acc += params.lambda * ev.eval(xj);
        out.push_back(acc.value());
        xj += params.alpha;
    }
    return out;
}

namespace {

// Rotating-phasor kernel for one grid point: advances e^{2 pi i n_k theta}
// by complex multiplication and resynchronizes from the exact fixed-point
// phase every kResync steps to stop drift.
DeviationPointStats scan_point(const HEvaluator& ev, double lambda, FixedAngle x0,
                               long long n_steps) {
    constexpr long long kResync = 1024;
    const std::size_t order = ev.freqs.size();
    std::vector<double> zr(order), zi(order), wr(order), wi(order);
    for (std::size_t k = 0; k < order; ++k) {
        long double psi = kTwoPiL * ev.alpha_step[k].to_long_double();
        wr[k] = static_cast<double>(std::cos(psi));
        wi[k] = static_cast<double>(std::sin(psi));
    }
    auto sync = [&](FixedAngle xj) {
        for (std::size_t k = 0; k < order; ++k) {
            long double phi = kTwoPiL * phase_of(ev.freqs[k], xj);
            zr[k] = static_cast<double>(std::cos(phi));
            zi[k] = static_cast<double>(std::sin(phi));
        }
    };

    DeviationPointStats st;
    st.x = x0.to_double();
    KahanSum acc;
    FixedAngle xj = x0;
    bool first = true;
    for (long long j = 0; j < n_steps; ++j) {
        if (j % kResync == 0) sync(xj);
        double h = 0.0;
        for (std::size_t k = 0; k < order; ++k) h += ev.a_coef[k] * zr[k] + ev.b_coef[k] * zi[k];
        acc += lambda * h;
        double s = acc.value();
        if (first || s > st.sup) st.sup = s;
        if (first || s < st.inf) st.inf = s;
        double a = std::fabs(s);
        if (first || a > st.max_abs) {
            st.max_abs = a;
            st.argmax_abs = j + 1;  // S_{j+1}
        }
        first = false;
        for (std::size_t k = 0; k < order; ++k) {
            double r = zr[k] * wr[k] - zi[k] * wi[k];
            zi[k] = zr[k] * wi[k] + zi[k] * wr[k];
            zr[k] = r;
        }
        xj += ev.alpha;
    }
    return st;
}

}  // namespace

DeviationReport unbounded_motion_scan(const CocycleParams& params, long long grid_size,
                                      long long n_steps, double threshold, int workers) {
    if (grid_size < 2) throw std::invalid_argument("unbounded_motion_scan: grid_size must be >= 2");
    if (n_steps < 1) throw std::invalid_argument("unbounded_motion_scan: n_steps must be >= 1");
    if (workers < 1) workers = 1;

    HEvaluator ev(params);
    DeviationReport rep;
    rep.grid_size = grid_size;
    rep.n_steps = n_steps;
    rep.threshold = threshold;
    rep.lambda = params.lambda;
    rep.points.resize(static_cast<std::size_t>(grid_size));

    std::atomic<long long> next{0};
    constexpr long long kBlock = 16;
    auto worker = [&] {
        for (;;) {
            long long begin = next.fetch_add(kBlock);
            if (begin >= grid_size) return;
            long long end = std::min(begin + kBlock, grid_size);
            for (long long i = begin; i < end; ++i) {
                FixedAngle x0 = FixedAngle::from_rational(i, grid_size);
                rep.points[static_cast<std::size_t>(i)] = scan_point(ev, params.lambda, x0, n_steps);
            }
        }
    };
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(workers));
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }

    // Reduction in fixed grid order, so results do not depend on scheduling.
    for (long long i = 0; i < grid_size; ++i) {
        const auto& st = rep.points[static_cast<std::size_t>(i)];
        if (rep.evidence_index < 0 && st.max_abs > threshold) rep.evidence_index = i;
        if (i == 0 || st.max_abs > rep.global_max_abs) {
            rep.global_max_abs = st.max_abs;
            rep.global_max_index = i;
        }
        if (i == 0 || st.sup < rep.min_over_grid_sup) {
            rep.min_over_grid_sup = st.sup;
            rep.min_sup_index = i;
        }
        if (i == 0 || st.inf > rep.max_over_grid_inf) {
            rep.max_over_grid_inf = st.inf;
            rep.max_inf_index = i;
        }
        if (i == 0 || st.max_abs < rep.min_over_grid_max_abs) {
            rep.min_over_grid_max_abs = st.max_abs;
            rep.min_max_abs_index = i;
        }
    }
    return rep;
}

AverageSeries circle_extension_average(const CocycleParams& params,
                                       const std::vector<long long>& n_list, const TorusPoint& w) {
    if (w.dim() != 2) throw std::invalid_argument("circle_extension_average: w must lie on the 2-torus");
    if (n_list.empty()) throw std::invalid_argument("circle_extension_average: empty N list");
    long long prev = 0;
    for (long long n : n_list) {
        if (n <= prev) throw std::invalid_argument("circle_extension_average: N list must be strictly increasing");
        prev = n;
    }

    HEvaluator ev(params);
    const double w2_start = w[1].to_double();
    AverageSeries series;
    series.checkpoints.reserve(n_list.size());

    KahanSum havg;   // running sum of f along the orbit
    KahanSum hsum;   // running sum of h(w1 + j alpha)
    FixedAngle w1 = w[0];
    std::size_t next_cp = 0;
    const long long n_total = n_list.back();
    for (long long n = 0; n < n_total; ++n) {
        double w2 = w2_start + params.lambda * hsum.value();
        havg += std::cos(2.0 * std::numbers::pi * (w2 - std::floor(w2)));
        hsum += ev.eval(w1);
        w1 += params.alpha;
        if (n + 1 == n_list[next_cp]) {
            double sum = havg.value();
            series.checkpoints.push_back({n + 1, sum, sum / static_cast<double>(n + 1)});
            ++next_cp;
        }
    }
    series.finish();
    return series;
}

}  // namespace apdyn
