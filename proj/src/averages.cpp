#include "apdyn/averages.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "apdyn/kahan.hpp"

namespace apdyn {

Observable Observable::coordinate_cosine(int axis, long long freq) {
    if (axis < 0 || axis > 1) throw std::invalid_argument("Observable: axis must be 0 or 1");
    if (freq == 0) throw std::invalid_argument("Observable: frequency must be nonzero");
    Observable o;
    o.kind_ = Kind::Cosine;
    o.axis_ = axis;
    o.freq_ = freq;
    return o;
}

Observable Observable::indicator_box(std::vector<std::pair<double, double>> bounds) {
    if (bounds.empty() || bounds.size() > 2)
        throw std::invalid_argument("Observable: box needs 1 or 2 coordinate ranges");
    Observable o;
    o.kind_ = Kind::Box;
    for (auto [lo, hi] : bounds) {
        if (!(0.0 <= lo && lo < hi && hi <= 1.0))
            throw std::invalid_argument("Observable: box bounds must satisfy 0 <= lo < hi <= 1");
        o.box_lo_.push_back(FixedAngle::from_double(lo));
        o.box_hi_.push_back(hi == 1.0 ? FixedAngle::from_raw(~uint128(0)) : FixedAngle::from_double(hi));
        o.box_lo_d_.push_back(lo);
        o.box_hi_d_.push_back(hi);
    }
    return o;
}

Observable Observable::product(std::vector<Observable> factors) {
    Observable o;
    o.kind_ = Kind::Product;
    o.factors_ = std::move(factors);
    return o;
}

Observable Observable::one() { return product({}); }

double Observable::eval(const TorusPoint& p) const {
    switch (kind_) {
        case Kind::Cosine: {
            if (axis_ >= p.dim()) throw std::invalid_argument("Observable: axis out of range");
            double phase = (int128(freq_) * p[axis_]).to_double();
            return std::cos(2.0 * std::numbers::pi * phase);
        }
        case Kind::Box: {
            if (static_cast<int>(box_lo_.size()) != p.dim())
                throw std::invalid_argument("Observable: box dimension mismatch");
            for (std::size_t i = 0; i < box_lo_.size(); ++i) {
                uint128 c = p[static_cast<int>(i)].raw();
                if (c < box_lo_[i].raw()) return 0.0;
                uint128 hi = box_hi_[i].raw();
                // all-ones marks an upper bound of exactly 1.0
                if (hi != ~uint128(0) && c >= hi) return 0.0;
            }
            return 1.0;
        }
        case Kind::Product: {
            double v = 1.0;
            for (const auto& f : factors_) v *= f.eval(p);
            return v;
        }
    }
    return 0.0;
}

double Observable::box_volume() const {
    if (kind_ != Kind::Box) throw std::logic_error("Observable: not a box");
    double v = 1.0;
    for (std::size_t i = 0; i < box_lo_d_.size(); ++i) v *= box_hi_d_[i] - box_lo_d_[i];
    return v;
}

std::string Observable::describe() const {
    char buf[96];
    switch (kind_) {
        case Kind::Cosine:
            std::snprintf(buf, sizeof buf, "cos(2pi*%lld*w%d)", freq_, axis_);
            return buf;
        case Kind::Box: {
            std::string s = "box";
            for (std::size_t i = 0; i < box_lo_d_.size(); ++i) {
                std::snprintf(buf, sizeof buf, "[%g,%g)", box_lo_d_[i], box_hi_d_[i]);
                s += buf;
            }
            return s;
        }
        case Kind::Product: {
            if (factors_.empty()) return "1";
            std::string s;
            for (std::size_t i = 0; i < factors_.size(); ++i) {
                if (i) s += "*";
                s += factors_[i].describe();
            }
            return s;
        }
    }
    return "?";
}

namespace {

void validate_n_list(const std::vector<long long>& n_list) {
    if (n_list.empty()) throw std::invalid_argument("averages: empty N list");
    long long prev = 0;
    for (long long n : n_list) {
        if (n <= prev) throw std::invalid_argument("averages: N list must be strictly increasing and positive");
        prev = n;
    }
}

AverageSeries run_progression_average(const SystemSpec& sys, const std::vector<Observable>& fs,
                                      const TorusPoint& x, const std::vector<long long>& n_list) {
    validate_n_list(n_list);
    const int d = static_cast<int>(fs.size());
    if (d < 1 || d > 4) throw std::invalid_argument("averages: need between 1 and 4 observables");

    // Cursor i tracks T^{(i+1) n} x; advancing n by one costs i+1 steps.
    std::vector<TorusPoint> cursor(static_cast<std::size_t>(d), x);
    AverageSeries series;
    series.checkpoints.reserve(n_list.size());
    KahanSum acc;
    std::size_t next_cp = 0;
    const long long n_total = n_list.back();
    for (long long n = 0; n < n_total; ++n) {
        double prod = 1.0;
        for (int i = 0; i < d; ++i) prod *= fs[static_cast<std::size_t>(i)].eval(cursor[static_cast<std::size_t>(i)]);
        acc += prod;
        for (int i = 0; i < d; ++i)
            for (int s = 0; s <= i; ++s)
                cursor[static_cast<std::size_t>(i)] = sys.apply(cursor[static_cast<std::size_t>(i)]);
        if (n + 1 == n_list[next_cp]) {
            double sum = acc.value();
            series.checkpoints.push_back({n + 1, sum, sum / static_cast<double>(n + 1)});
            ++next_cp;
        }
    }
    series.finish();
    return series;
}

}  // namespace

AverageSeries birkhoff_average(const SystemSpec& sys, const Observable& f, const TorusPoint& x,
                               const std::vector<long long>& n_list) {
    return run_progression_average(sys, {f}, x, n_list);
}

AverageSeries multiple_ergodic_average(const SystemSpec& sys, const std::vector<Observable>& fs,
                                       const TorusPoint& x, const std::vector<long long>& n_list) {
    return run_progression_average(sys, fs, x, n_list);
}

namespace {

// One half-open raw interval, stored with inclusive end to dodge 2^128.
struct RawPiece {
    uint128 a = 0;
    uint128 e = 0;  // inclusive
};

// Split the circle arc [start, start+len) into non-wrapping pieces.
void arc_pieces(uint128 start, uint128 len, std::vector<RawPiece>& out) {
    uint128 end = start + len;  // may wrap
    if (end > start) {
        out.push_back({start, end - 1});
    } else {
        out.push_back({start, ~uint128(0)});
        if (end != 0) out.push_back({0, end - 1});
    }
}

}  // namespace

double recurrence_intersection_measure_brute(const SystemSpec& sys, const Observable& box, int k,
                                             long long n, long long grid_size) {
    const int dim = sys.dimension();
    long long hits = 0;
    if (dim == 1) {
        for (long long i = 0; i < grid_size; ++i) {
            TorusPoint z(FixedAngle::from_rational(i, grid_size));
            bool in = true;
            for (int j = 0; j <= k && in; ++j)
                in = box.eval(sys.orbit_point(z, static_cast<long long>(j) * n)) > 0.5;
            hits += in;
        }
        return static_cast<double>(hits) / static_cast<double>(grid_size);
    }
    for (long long i = 0; i < grid_size; ++i) {
        for (long long j2 = 0; j2 < grid_size; ++j2) {
            TorusPoint z(FixedAngle::from_rational(i, grid_size),
                         FixedAngle::from_rational(j2, grid_size));
            bool in = true;
            for (int j = 0; j <= k && in; ++j)
                in = box.eval(sys.orbit_point(z, static_cast<long long>(j) * n)) > 0.5;
            hits += in;
        }
    }
    return static_cast<double>(hits) / static_cast<double>(grid_size * grid_size);
}

double recurrence_intersection_measure(const SystemSpec& sys, const Observable& box, int k,
                                       long long n, long long grid_size) {
    const bool pow2 = grid_size > 1 && (grid_size & (grid_size - 1)) == 0;
    if (sys.kind() == SystemKind::Rotation && pow2 && box.is_box() && box.box_dim() == 1) {
        const uint128 lo = box.box_lo(0).raw();
        const uint128 hi = box.box_hi(0).raw();
        if (lo == 0 && hi == ~uint128(0)) return 1.0;  // whole circle
        // [lo, hi) with the sentinel meaning hi = 1.0 exactly.
        const uint128 len = (hi == ~uint128(0) ? uint128(0) : hi) - lo;

        // z in intersection of the shifted arcs [lo - j n alpha, ...): build
        // the piece list and count grid points i * 2^(128 - log2 G) exactly.
        int shift = 0;
        while ((1LL << shift) != grid_size) ++shift;
        const int sbits = 128 - shift;

        std::vector<RawPiece> pieces;
        arc_pieces(lo, len, pieces);
        for (int j = 1; j <= k && !pieces.empty(); ++j) {
            FixedAngle off = (int128(j) * int128(n)) * sys.alpha();
            std::vector<RawPiece> shifted;
            arc_pieces(lo - off.raw(), len, shifted);
            std::vector<RawPiece> merged;
            for (const auto& p : pieces)
                for (const auto& q : shifted) {
                    uint128 a = std::max(p.a, q.a);
                    uint128 e = std::min(p.e, q.e);
                    if (a <= e) merged.push_back({a, e});
                }
            pieces = std::move(merged);
        }
        uint128 count = 0;
        for (const auto& p : pieces) {
            uint128 imin = p.a == 0 ? 0 : ((p.a - 1) >> sbits) + 1;
            uint128 imax = p.e >> sbits;
            if (imax >= imin) count += imax - imin + 1;
        }
        return static_cast<double>(static_cast<long double>(count) / static_cast<long double>(grid_size));
    }
    return recurrence_intersection_measure_brute(sys, box, k, n, grid_size);
}

AverageSeries multiple_recurrence_frequency(const SystemSpec& sys, const Observable& box, int k,
                                            long long n_steps, long long grid_size, int workers) {
    if (!box.is_box()) throw std::invalid_argument("multiple_recurrence_frequency: observable must be a box");
    if (box.box_dim() != sys.dimension())
        throw std::invalid_argument("multiple_recurrence_frequency: box dimension mismatch");
    if (k < 1 || k > 4) throw std::invalid_argument("multiple_recurrence_frequency: k must be in [1,4]");
    if (n_steps < 1) throw std::invalid_argument("multiple_recurrence_frequency: n_steps must be >= 1");
    if (grid_size < 2) throw std::invalid_argument("multiple_recurrence_frequency: grid_size must be >= 2");
    if (box.box_volume() < 0.01)
        throw std::invalid_argument("multiple_recurrence_frequency: box volume below 0.01, estimate unreliable");

    std::vector<double> measures(static_cast<std::size_t>(n_steps));
    if (workers <= 1) {
        for (long long n = 0; n < n_steps; ++n)
            measures[static_cast<std::size_t>(n)] =
                recurrence_intersection_measure(sys, box, k, n, grid_size);
    } else {
        std::atomic<long long> next{0};
        constexpr long long kBlock = 64;
        auto work = [&] {
            for (;;) {
                long long b = next.fetch_add(kBlock);
                if (b >= n_steps) return;
                long long e = std::min(n_steps, b + kBlock);
                for (long long n = b; n < e; ++n)
                    measures[static_cast<std::size_t>(n)] =
                        recurrence_intersection_measure(sys, box, k, n, grid_size);
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }

    AverageSeries series;
    KahanSum acc;
    for (long long n = 0; n < n_steps; ++n) {
        acc += measures[static_cast<std::size_t>(n)];
        long long count = n + 1;
        bool is_pow2 = (count & (count - 1)) == 0;
        if (is_pow2 || count == n_steps) {
            double sum = acc.value();
            series.checkpoints.push_back({count, sum, sum / static_cast<double>(count)});
        }
    }
    series.finish();
    return series;
}

}  // namespace apdyn
