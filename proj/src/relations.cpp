#include "apdyn/relations.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "apdyn/parallel.hpp"

namespace apdyn {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Time orders. AP skips n = 0 (it would witness trivially at the query's
// own resolution); the independence scan includes it.
long long ap_time(long long rank) { return rank % 2 == 0 ? rank / 2 + 1 : -(rank + 1) / 2; }
long long ind_time(long long rank) { return rank == 0 ? 0 : (rank % 2 == 1 ? (rank + 1) / 2 : -rank / 2); }

// Digit order for RP vectors: 0, 1, -1, 2, -2, ...
long long signed_value(long long rank) { return ind_time(rank); }
long long signed_rank(long long v) { return v == 0 ? 0 : (v > 0 ? 2 * v - 1 : -2 * v); }

void validate_query(const SystemSpec& sys, const RelationQuery& q) {
    if (q.x.dim() != sys.dimension() || q.y.dim() != sys.dimension())
        throw std::invalid_argument("relation query: point dimension mismatch");
    if (q.d < 1 || q.d > 8) throw std::invalid_argument("relation query: d must be in [1,8]");
    if (!(q.delta > 0.0)) throw std::invalid_argument("relation query: delta must be positive");
    if (q.n_max < 1) throw std::invalid_argument("relation query: n_max must be >= 1");
    if (q.ball_grid < 1) throw std::invalid_argument("relation query: ball_grid must be >= 1");
}

// Candidate perturbation pairs: the grid product first (x-major,
// lexicographic), then optional seeded random pairs. Both detectors that
// perturb use the same list, so their candidate orders agree.
struct PairSet {
    std::vector<TorusPoint> xs;  // grid points then extra x's
    std::vector<TorusPoint> ys;
    long long grid_count = 0;    // points per side from the grid
    long long extra_count = 0;   // coupled random pairs appended at the end

    long long total_pairs() const { return grid_count * grid_count + extra_count; }
    // pair t -> (index into xs, index into ys)
    std::pair<long long, long long> pair_at(long long t) const {
        if (t < grid_count * grid_count) return {t / grid_count, t % grid_count};
        long long r = t - grid_count * grid_count;
        return {grid_count + r, grid_count + r};
    }
};

PairSet make_pairs(const RelationQuery& q, const SearchOptions& opts) {
    PairSet ps;
    ps.xs = ball_grid_points(q.x, q.delta, q.ball_grid);
    ps.ys = ball_grid_points(q.y, q.delta, q.ball_grid);
    ps.grid_count = static_cast<long long>(ps.xs.size());
    ps.extra_count = opts.random_restarts;
    if (opts.random_restarts > 0) {
        std::mt19937_64 rng(opts.seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double scale = q.delta * (1.0 - 1e-9);  // stay strictly inside the ball
        int dim = q.x.dim();
        for (long long r = 0; r < opts.random_restarts; ++r) {
            TorusPoint xp = q.x, yp = q.y;
            for (int a = 0; a < dim; ++a)
                xp[a] = xp[a] + FixedAngle::from_double(scale * (2.0 * unit(rng) - 1.0));
            for (int a = 0; a < dim; ++a)
                yp[a] = yp[a] + FixedAngle::from_double(scale * (2.0 * unit(rng) - 1.0));
            ps.xs.push_back(xp);
            ps.ys.push_back(yp);
        }
    }
    return ps;
}

// Orbit cursor bank: points[i][p] = T^{(i+1) * n} of base point p, advanced
// in lockstep as n moves by +-1.
struct CursorBank {
    std::vector<std::vector<TorusPoint>> rows;  // one row per i = 1..d

    void init(const SystemSpec& sys, const std::vector<TorusPoint>& base, int d, long long n) {
        rows.assign(static_cast<std::size_t>(d), {});
        for (int i = 1; i <= d; ++i) {
            auto& row = rows[static_cast<std::size_t>(i - 1)];
            row.reserve(base.size());
            for (const auto& p : base) row.push_back(sys.orbit_point(p, i * n));
        }
    }
    void advance(const SystemSpec& sys, bool forward) {
        for (std::size_t i = 0; i < rows.size(); ++i) {
            for (auto& p : rows[i]) {
                for (std::size_t step = 0; step <= i; ++step)
                    p = forward ? sys.apply(p) : sys.apply_inverse(p);
            }
        }
    }
};

struct SearchHit {
    bool witnessed = false;
    RelationWitness w;
    double value = kInf;       // witness value when witnessed

    double min_value = kInf;   // best residual seen (exact chunk minimum)
    long long min_rank = 0;

    bool found() const { return witnessed; }
};

}  // namespace

std::vector<TorusPoint> ball_grid_points(const TorusPoint& center, double delta, int ball_grid) {
    if (ball_grid < 1) throw std::invalid_argument("ball_grid_points: ball_grid must be >= 1");
    std::vector<double> offsets;
    offsets.reserve(static_cast<std::size_t>(ball_grid));
    for (int t = 0; t < ball_grid; ++t)
        offsets.push_back(delta * static_cast<double>(2 * t + 1 - ball_grid) / ball_grid);
    std::vector<TorusPoint> out;
    int dim = center.dim();
    if (dim == 1) {
        out.reserve(offsets.size());
        for (double o : offsets) out.emplace_back(center[0] + FixedAngle::from_double(o));
    } else {
        out.reserve(offsets.size() * offsets.size());
        for (double o0 : offsets)
            for (double o1 : offsets)
                out.emplace_back(center[0] + FixedAngle::from_double(o0),
                                 center[1] + FixedAngle::from_double(o1));
    }
    return out;
}

RelationVerdict detect_proximal(const SystemSpec& sys, const RelationQuery& q,
                                const SearchOptions& opts) {
    validate_query(sys, q);
    const long long total = 2 * q.n_max + 1;
    constexpr long long kChunk = 4096;

    auto slots = run_ordered_chunks<SearchHit>(
        total, kChunk, opts.workers, [&](long long begin, long long end, long long) {
            SearchHit res;
            // Positive and negative cursors; ranks alternate between them.
            long long pos_n = 0, neg_n = 0;
            bool pos_found = false, neg_found = false;
            for (long long r = begin; r < end && !(pos_found && neg_found); ++r) {
                long long t = ind_time(r);
                if (t >= 0 && !pos_found) {
                    pos_n = t;
                    pos_found = true;
                }
                if (t < 0 && !neg_found) {
                    neg_n = t;
                    neg_found = true;
                }
            }
            TorusPoint px = q.x, py = q.y, nx = q.x, ny = q.y;
            if (pos_found) {
                px = sys.orbit_point(q.x, pos_n);
                py = sys.orbit_point(q.y, pos_n);
            }
            if (neg_found) {
                nx = sys.orbit_point(q.x, neg_n);
                ny = sys.orbit_point(q.y, neg_n);
            }
            for (long long r = begin; r < end; ++r) {
                bool positive = ind_time(r) >= 0;
                double v = positive ? torus_dist(px, py) : torus_dist(nx, ny);
                if (v < res.min_value) {
                    res.min_value = v;
                    res.min_rank = r;
                }
                if (v < q.delta) {
                    res.witnessed = true;
                    res.w = RelationWitness{q.x, q.y, {ind_time(r)}, {}};
                    res.value = v;
                    return res;
                }
                if (positive) {
                    px = sys.apply(px);
                    py = sys.apply(py);
                } else {
                    nx = sys.apply_inverse(nx);
                    ny = sys.apply_inverse(ny);
                }
            }
            return res;
        });

    RelationVerdict verdict;
    double best = kInf;
    long long best_rank = 0;
    for (const auto& s : slots) {
        if (!s) break;  // only chunks after a witness are skipped
        if (s->witnessed) {
            if (!verify_proximal_witness(sys, q, s->w))
                throw std::logic_error("detect_proximal: witness failed re-verification");
            verdict.status = RelationStatus::Witnessed;
            verdict.witness = s->w;
            verdict.residual = s->value;
            verdict.best_times = s->w.times;
            return verdict;
        }
        if (s->min_value < best) {
            best = s->min_value;
            best_rank = s->min_rank;
        }
    }
    verdict.status = RelationStatus::RefutedAtBudget;
    verdict.residual = best;
    verdict.best_times = {ind_time(best_rank)};
    return verdict;
}

RelationVerdict detect_ap(const SystemSpec& sys, const RelationQuery& q,
                          const SearchOptions& opts) {
    validate_query(sys, q);
    const PairSet ps = make_pairs(q, opts);
    const long long n_pairs = ps.total_pairs();
    const long long total = 2 * q.n_max;
    constexpr long long kChunk = 512;

    auto slots = run_ordered_chunks<SearchHit>(
        total, kChunk, opts.workers, [&](long long begin, long long end, long long) {
            SearchHit res;
            long long pos_n = 0, neg_n = 0;
            bool pos_found = false, neg_found = false;
            for (long long r = begin; r < end && !(pos_found && neg_found); ++r) {
                long long t = ap_time(r);
                if (t > 0 && !pos_found) {
                    pos_n = t;
                    pos_found = true;
                }
                if (t < 0 && !neg_found) {
                    neg_n = t;
                    neg_found = true;
                }
            }
            CursorBank pos_x, pos_y, neg_x, neg_y;
            if (pos_found) {
                pos_x.init(sys, ps.xs, q.d, pos_n);
                pos_y.init(sys, ps.ys, q.d, pos_n);
            }
            if (neg_found) {
                neg_x.init(sys, ps.xs, q.d, neg_n);
                neg_y.init(sys, ps.ys, q.d, neg_n);
            }
            double bound = kInf;  // chunk-local branch-and-bound threshold
            for (long long r = begin; r < end; ++r) {
                bool positive = r % 2 == 0;
                CursorBank& bx = positive ? pos_x : neg_x;
                CursorBank& by = positive ? pos_y : neg_y;
                for (long long t = 0; t < n_pairs; ++t) {
                    auto [a, b] = ps.pair_at(t);
                    double v = 0.0;
                    bool pruned = false;
                    for (int i = 0; i < q.d; ++i) {
                        double dist = torus_dist(bx.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(a)],
                                                 by.rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(b)]);
                        if (dist > v) v = dist;
                        if (v >= bound) {
                            pruned = true;
                            break;
                        }
                    }
                    if (pruned) continue;
                    if (v < res.min_value) {
                        res.min_value = v;
                        res.min_rank = r;
                        bound = v;
                    }
                    if (v < q.delta) {
                        res.witnessed = true;
                        res.w = RelationWitness{ps.xs[static_cast<std::size_t>(a)],
                                                ps.ys[static_cast<std::size_t>(b)],
                                                {ap_time(r)},
                                                {}};
                        res.value = v;
                        return res;
                    }
                }
                if (positive) {
                    pos_x.advance(sys, true);
                    pos_y.advance(sys, true);
                } else {
                    neg_x.advance(sys, false);
                    neg_y.advance(sys, false);
                }
            }
            return res;
        });

    RelationVerdict verdict;
    double best = kInf;
    long long best_rank = 0;
    for (const auto& s : slots) {
        if (!s) break;
        if (s->witnessed) {
            if (!verify_ap_witness(sys, q, s->w))
                throw std::logic_error("detect_ap: witness failed re-verification");
            verdict.status = RelationStatus::Witnessed;
            verdict.witness = s->w;
            verdict.residual = s->value;
            verdict.best_times = s->w.times;
            return verdict;
        }
        if (s->min_value < best) {
            best = s->min_value;
            best_rank = s->min_rank;
        }
    }
    verdict.status = RelationStatus::RefutedAtBudget;
    verdict.residual = best;
    verdict.best_times = {ap_time(best_rank)};
    return verdict;
}

namespace {

long long cube_side(long long n_max, int d) {
    // n_cube = floor(n_max^(1/d)); at d = 1 this is n_max itself, so the
    // AP and RP searches coincide there.
    if (d == 1) return n_max;
    auto pow_leq = [&](long long c) {
        long long v = 1;
        for (int i = 0; i < d; ++i) {
            if (c != 0 && v > n_max / c + 1) return false;
            v *= c;
            if (v > n_max) return false;
        }
        return true;
    };
    long long c = static_cast<long long>(std::floor(std::pow(static_cast<double>(n_max), 1.0 / d)));
    c = std::max<long long>(c, 1);
    while (!pow_leq(c)) --c;
    while (pow_leq(c + 1)) ++c;
    return std::max<long long>(c, 1);
}

// Everything detect_rp needs about one perturbation pair.
struct RpPairScan {
    bool witnessed = false;
    std::vector<long long> times;
    double value = kInf;
    long long vec_rank = 0;  // rank of the witness vector in the global order

    double min_value = kInf;
    std::vector<long long> min_times;

    bool found() const { return false; }  // pair chunks are never skipped
};

// Distances D(s) = rho(T^s x', T^s y') for s in [-span, span].
std::vector<double> sweep_distances(const SystemSpec& sys, const TorusPoint& xp,
                                    const TorusPoint& yp, long long span) {
    std::vector<double> dist(static_cast<std::size_t>(2 * span + 1));
    TorusPoint cx = sys.orbit_point(xp, -span);
    TorusPoint cy = sys.orbit_point(yp, -span);
    for (long long s = -span; s <= span; ++s) {
        dist[static_cast<std::size_t>(s + span)] = torus_dist(cx, cy);
        if (s < span) {
            cx = sys.apply(cx);
            cy = sys.apply(cy);
        }
    }
    return dist;
}

// Nonempty subset masks with two or more elements, for the leaf checks.
std::vector<unsigned> multi_masks(int d) {
    std::vector<unsigned> masks;
    for (unsigned m = 1; m < (1u << d); ++m)
        if (__builtin_popcount(m) >= 2) masks.push_back(m);
    return masks;
}

RpPairScan scan_rp_pair(const SystemSpec& sys, const RelationQuery& q, const TorusPoint& xp,
                        const TorusPoint& yp, long long c, bool need_residual) {
    const int d = q.d;
    const long long span = static_cast<long long>(d) * c;
    const std::vector<double> dist = sweep_distances(sys, xp, yp, span);
    auto dist_at = [&](long long s) { return dist[static_cast<std::size_t>(s + span)]; };
    const std::vector<unsigned> masks = multi_masks(d);

    RpPairScan out;

    // Witness scan in global vector order: every digit of a witness vector
    // must itself satisfy D(v_j) < delta, so it is enough to walk the
    // delta-admissible digits in signed order.
    std::vector<long long> admissible;
    for (long long rank = 0; rank <= 2 * c; ++rank) {
        long long m = signed_value(rank);
        if (dist_at(m) < q.delta) admissible.push_back(m);
    }
    std::vector<long long> digits(static_cast<std::size_t>(d), 0);
    auto leaf_value = [&](const std::vector<long long>& v) {
        double worst = 0.0;
        for (int j = 0; j < d; ++j) worst = std::max(worst, dist_at(v[static_cast<std::size_t>(j)]));
        for (unsigned m : masks) {
            long long s = 0;
            for (int j = 0; j < d; ++j)
                if (m & (1u << j)) s += v[static_cast<std::size_t>(j)];
            worst = std::max(worst, dist_at(s));
        }
        return worst;
    };
    std::function<bool(int)> walk = [&](int depth) -> bool {
        if (depth == d) {
            bool all_zero = std::all_of(digits.begin(), digits.end(), [](long long v) { return v == 0; });
            if (all_zero) return false;
            for (unsigned m : masks) {
                long long s = 0;
                for (int j = 0; j < d; ++j)
                    if (m & (1u << j)) s += digits[static_cast<std::size_t>(j)];
                if (!(dist_at(s) < q.delta)) return false;
            }
            out.witnessed = true;
            out.times = digits;
            out.value = leaf_value(digits);
            long long rank = 0;
            for (int j = 0; j < d; ++j) rank = rank * (2 * c + 1) + signed_rank(digits[static_cast<std::size_t>(j)]);
            out.vec_rank = rank;
            return true;
        }
        for (long long m : admissible) {
            digits[static_cast<std::size_t>(depth)] = m;
            if (walk(depth + 1)) return true;
        }
        return false;
    };
    if (!admissible.empty()) walk(0);
    if (out.witnessed || !need_residual) return out;

    // Residual: branch and bound over digits sorted by D ascending.
    std::vector<long long> order(dist.size());
    std::iota(order.begin(), order.end(), 0);
    // Only offsets in [-c, c] are valid digits.
    order.erase(std::remove_if(order.begin(), order.end(),
                               [&](long long idx) { return std::llabs(idx - span) > c; }),
                order.end());
    std::stable_sort(order.begin(), order.end(), [&](long long a, long long b) {
        return dist[static_cast<std::size_t>(a)] < dist[static_cast<std::size_t>(b)];
    });
    std::function<void(int, double)> descend = [&](int depth, double running) {
        if (depth == d) {
            bool all_zero = std::all_of(digits.begin(), digits.end(), [](long long v) { return v == 0; });
            if (all_zero) return;
            double v = running;
            for (unsigned m : masks) {
                long long s = 0;
                for (int j = 0; j < d; ++j)
                    if (m & (1u << j)) s += digits[static_cast<std::size_t>(j)];
                v = std::max(v, dist_at(s));
                if (v >= out.min_value) return;
            }
            if (v < out.min_value) {
                out.min_value = v;
                out.min_times = digits;
            }
            return;
        }
        for (long long idx : order) {
            double dv = dist[static_cast<std::size_t>(idx)];
            double next = std::max(running, dv);
            if (next >= out.min_value) break;  // sorted: no later digit can help
            digits[static_cast<std::size_t>(depth)] = idx - span;
            descend(depth + 1, next);
        }
    };
    descend(0, 0.0);
    return out;
}

}  // namespace

RelationVerdict detect_rp(const SystemSpec& sys, const RelationQuery& q,
                          const SearchOptions& opts) {
    validate_query(sys, q);
    const PairSet ps = make_pairs(q, opts);
    const long long n_pairs = ps.total_pairs();
    const long long c = cube_side(q.n_max, q.d);
    constexpr long long kChunk = 4;

    struct RpChunk {
        std::vector<RpPairScan> scans;
        bool found() const { return false; }  // pair chunks are never skipped
    };
    auto run_pass = [&](bool need_residual) {
        return run_ordered_chunks<RpChunk>(
            n_pairs, kChunk, opts.workers, [&](long long begin, long long end, long long) {
                RpChunk part;
                part.scans.reserve(static_cast<std::size_t>(end - begin));
                for (long long t = begin; t < end; ++t) {
                    auto [a, b] = ps.pair_at(t);
                    part.scans.push_back(scan_rp_pair(sys, q, ps.xs[static_cast<std::size_t>(a)],
                                                      ps.ys[static_cast<std::size_t>(b)], c,
                                                      need_residual));
                }
                return part;
            });
    };

    // Pass 1: witness scans only (cheap). The global witness is the minimum
    // under (vector rank, pair index), matching the time-major search order.
    auto pass1 = run_pass(false);
    bool have_witness = false;
    long long best_rank = 0, best_pair = 0;
    double best_value = kInf;
    std::vector<long long> best_times;
    long long pair_index = 0;
    for (auto& slot : pass1) {
        for (const auto& scan : slot->scans) {
            if (scan.witnessed && (!have_witness || scan.vec_rank < best_rank)) {
                have_witness = true;
                best_rank = scan.vec_rank;
                best_pair = pair_index;
                best_value = scan.value;
                best_times = scan.times;
            }
            ++pair_index;
        }
    }
    RelationVerdict verdict;
    if (have_witness) {
        auto [a, b] = ps.pair_at(best_pair);
        RelationWitness w{ps.xs[static_cast<std::size_t>(a)], ps.ys[static_cast<std::size_t>(b)],
                          best_times, {}};
        if (!verify_rp_witness(sys, q, w))
            throw std::logic_error("detect_rp: witness failed re-verification");
        verdict.status = RelationStatus::Witnessed;
        verdict.witness = w;
        verdict.residual = best_value;
        verdict.best_times = best_times;
        return verdict;
    }

    // Pass 2: residual minima.
    auto pass2 = run_pass(true);
    double best = kInf;
    std::vector<long long> times;
    for (auto& slot : pass2) {
        for (const auto& scan : slot->scans) {
            if (scan.min_value < best) {
                best = scan.min_value;
                times = scan.min_times;
            }
        }
    }
    verdict.status = RelationStatus::RefutedAtBudget;
    verdict.residual = best;
    verdict.best_times = times;
    return verdict;
}

RelationVerdict detect_ind_ap(const SystemSpec& sys, const RelationQuery& q,
                              long long sample_grid, const SearchOptions& opts) {
    validate_query(sys, q);
    if (sample_grid < 2) throw std::invalid_argument("detect_ind_ap: sample_grid must be >= 2");
    if (q.d > 8) throw std::invalid_argument("detect_ind_ap: d too large");

    // Uniform samples over the phase space, lexicographic.
    std::vector<TorusPoint> samples;
    if (sys.dimension() == 1) {
        samples.reserve(static_cast<std::size_t>(sample_grid));
        for (long long i = 0; i < sample_grid; ++i)
            samples.emplace_back(FixedAngle::from_rational(i, sample_grid));
    } else {
        samples.reserve(static_cast<std::size_t>(sample_grid * sample_grid));
        for (long long i = 0; i < sample_grid; ++i)
            for (long long j = 0; j < sample_grid; ++j)
                samples.emplace_back(FixedAngle::from_rational(i, sample_grid),
                                     FixedAngle::from_rational(j, sample_grid));
    }
    const std::size_t n_samples = samples.size();
    const unsigned n_tuples = 1u << q.d;
    const long long total = 2 * q.n_max + 1;
    constexpr long long kChunk = 256;

    auto slots = run_ordered_chunks<SearchHit>(
        total, kChunk, opts.workers, [&](long long begin, long long end, long long) {
            SearchHit res;
            long long pos_n = 0, neg_n = 0;
            bool pos_found = false, neg_found = false;
            for (long long r = begin; r < end && !(pos_found && neg_found); ++r) {
                long long t = ind_time(r);
                if (t >= 0 && !pos_found) {
                    pos_n = t;
                    pos_found = true;
                }
                if (t < 0 && !neg_found) {
                    neg_n = t;
                    neg_found = true;
                }
            }
            CursorBank pos_z, neg_z;
            if (pos_found) pos_z.init(sys, samples, q.d, pos_n);
            if (neg_found) neg_z.init(sys, samples, q.d, neg_n);

            std::vector<double> tuple_min(n_tuples);
            std::vector<long long> tuple_hit(n_tuples);
            for (long long r = begin; r < end; ++r) {
                long long n = ind_time(r);
                bool positive = n >= 0;
                CursorBank& bank = positive ? pos_z : neg_z;
                std::fill(tuple_min.begin(), tuple_min.end(), kInf);
                std::fill(tuple_hit.begin(), tuple_hit.end(), -1);
                unsigned unhit = n_tuples;
                for (std::size_t s = 0; s < n_samples && unhit > 0; ++s) {
                    double g1[8] = {0}, g2[8] = {0};
                    for (int j = 0; j < q.d; ++j) {
                        const TorusPoint& img = bank.rows[static_cast<std::size_t>(j)][s];
                        g1[j] = torus_dist(img, q.x);
                        g2[j] = torus_dist(img, q.y);
                    }
                    for (unsigned t = 0; t < n_tuples; ++t) {
                        double v = 0.0;
                        for (int j = 0; j < q.d; ++j) {
                            double g = (t & (1u << j)) ? g2[j] : g1[j];
                            if (g > v) v = g;
                        }
                        if (v < tuple_min[t]) tuple_min[t] = v;
                        if (tuple_hit[t] < 0 && v < q.delta) {
                            tuple_hit[t] = static_cast<long long>(s);
                            --unhit;
                        }
                    }
                }
                if (unhit == 0) {
                    RelationWitness w;
                    w.xp = q.x;
                    w.yp = q.y;
                    w.times = {n};
                    w.hits.reserve(n_tuples);
                    for (unsigned t = 0; t < n_tuples; ++t)
                        w.hits.push_back(samples[static_cast<std::size_t>(tuple_hit[t])]);
                    res.witnessed = true;
                    res.w = std::move(w);
                    double worst = 0.0;
                    for (unsigned t = 0; t < n_tuples; ++t) worst = std::max(worst, tuple_min[t]);
                    res.value = worst;
                    return res;
                }
                double worst = 0.0;
                for (unsigned t = 0; t < n_tuples; ++t) worst = std::max(worst, tuple_min[t]);
                if (worst < res.min_value) {
                    res.min_value = worst;
                    res.min_rank = r;
                }
                if (positive)
                    bank.advance(sys, true);
                else
                    bank.advance(sys, false);
            }
            return res;
        });

    RelationVerdict verdict;
    double best = kInf;
    long long best_rank = 0;
    for (const auto& s : slots) {
        if (!s) break;
        if (s->witnessed) {
            if (!verify_ind_ap_witness(sys, q, s->w))
                throw std::logic_error("detect_ind_ap: witness failed re-verification");
            verdict.status = RelationStatus::Witnessed;
            verdict.witness = s->w;
            verdict.residual = s->value;
            verdict.best_times = s->w.times;
            return verdict;
        }
        if (s->min_value < best) {
            best = s->min_value;
            best_rank = s->min_rank;
        }
    }
    verdict.status = RelationStatus::RefutedAtBudget;
    verdict.residual = best;
    verdict.best_times = {ind_time(best_rank)};
    return verdict;
}

namespace {

struct Ap1State {
    FixedAngle na;    // n * alpha
    FixedAngle n2a;   // 2n * alpha
    FixedAngle an_a;  // a(n) * alpha
    FixedAngle a2n_a; // a(2n) * alpha

    static Ap1State at(FixedAngle alpha, long long n) {
        Ap1State s;
        s.na = int128(n) * alpha;
        s.n2a = int128(2 * n) * alpha;
        s.an_a = TriangularCoeff::of(n).a_of_n * alpha;
        s.a2n_a = TriangularCoeff::of(2 * n).a_of_n * alpha;
        return s;
    }
    // n -> n+1 : a(n+1) = a(n) + n, a(2n+2) = a(2n) + 4n + 1.
    void step(FixedAngle alpha) {
        an_a += na;
        FixedAngle four_na = na + na;
        four_na += four_na;
        a2n_a += four_na + alpha;
        na += alpha;
        n2a += alpha + alpha;
    }
};

struct Ap1Chunk {
    bool witnessed = false;
    long long witness_n = 0;
    uint128 witness_value = 0;
    uint128 min_value = ~uint128(0);
    long long min_n = 0;
    bool found() const { return witnessed; }
};

}  // namespace

RelationVerdict weyl_ap1_orbit_check(FixedAngle alpha, FixedAngle y, double epsilon,
                                     long long n_max, const SearchOptions& opts) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("weyl_ap1_orbit_check: epsilon must be positive");
    if (n_max < 1) throw std::invalid_argument("weyl_ap1_orbit_check: n_max must be >= 1");
    if (n_max > (1LL << 61))
        throw std::overflow_error("weyl_ap1_orbit_check: n_max above 2^61, a(2n) would overflow");

    const uint128 eps_raw = epsilon >= 1.0 ? ~uint128(0) : FixedAngle::from_double(epsilon).raw();
    const FixedAngle zero;
    constexpr long long kChunk = 1 << 16;

    auto slots = run_ordered_chunks<Ap1Chunk>(
        n_max, kChunk, opts.workers, [&](long long begin, long long end, long long) {
            Ap1Chunk res;
            Ap1State st = Ap1State::at(alpha, begin + 1);
            for (long long n = begin + 1; n <= end; ++n) {
                uint128 g1 = circle_gap(st.na, zero).raw();
                uint128 worst = g1;
                if (g1 < res.min_value || g1 < eps_raw) {
                    uint128 g2 = circle_gap(st.n2a, zero).raw();
                    if (g2 > worst) worst = g2;
                    uint128 g3 = circle_gap(y, st.an_a).raw();
                    if (g3 > worst) worst = g3;
                    uint128 g4 = circle_gap(y, st.a2n_a).raw();
                    if (g4 > worst) worst = g4;
                    if (worst < res.min_value) {
                        res.min_value = worst;
                        res.min_n = n;
                    }
                    if (g1 < eps_raw && g2 < eps_raw && g3 < eps_raw && g4 < eps_raw) {
                        res.witnessed = true;
                        res.witness_n = n;
                        res.witness_value = worst;
                        return res;
                    }
                }
                st.step(alpha);
            }
            return res;
        });

    RelationVerdict verdict;
    uint128 best = ~uint128(0);
    long long best_n = 1;
    for (const auto& s : slots) {
        if (!s) break;
        if (s->witnessed) {
            if (!verify_ap1_witness(alpha, y, epsilon, s->witness_n))
                throw std::logic_error("weyl_ap1_orbit_check: witness failed re-verification");
            verdict.status = RelationStatus::Witnessed;
            RelationWitness w;
            w.xp = TorusPoint(FixedAngle(), FixedAngle());
            w.yp = TorusPoint(FixedAngle(), y);
            w.times = {s->witness_n};
            verdict.witness = w;
            verdict.residual = FixedAngle::from_raw(s->witness_value).to_double();
            verdict.best_times = {s->witness_n};
            return verdict;
        }
        if (s->min_value < best) {
            best = s->min_value;
            best_n = s->min_n;
        }
    }
    verdict.status = RelationStatus::RefutedAtBudget;
    verdict.residual = FixedAngle::from_raw(best).to_double();
    verdict.best_times = {best_n};
    return verdict;
}

bool verify_proximal_witness(const SystemSpec& sys, const RelationQuery& q,
                             const RelationWitness& w) {
    if (w.times.size() != 1) return false;
    if (!(w.xp == q.x) || !(w.yp == q.y)) return false;
    return torus_dist(sys.orbit_point(w.xp, w.times[0]), sys.orbit_point(w.yp, w.times[0])) < q.delta;
}

bool verify_ap_witness(const SystemSpec& sys, const RelationQuery& q, const RelationWitness& w) {
    if (w.times.size() != 1) return false;
    if (!(torus_dist(q.x, w.xp) < q.delta) || !(torus_dist(q.y, w.yp) < q.delta)) return false;
    long long n = w.times[0];
    for (int i = 1; i <= q.d; ++i) {
        TorusPoint ix = sys.orbit_point(w.xp, static_cast<long long>(i) * n);
        TorusPoint iy = sys.orbit_point(w.yp, static_cast<long long>(i) * n);
        if (!(torus_dist(ix, iy) < q.delta)) return false;
    }
    return true;
}

bool verify_rp_witness(const SystemSpec& sys, const RelationQuery& q, const RelationWitness& w) {
    if (w.times.size() != static_cast<std::size_t>(q.d)) return false;
    if (!(torus_dist(q.x, w.xp) < q.delta) || !(torus_dist(q.y, w.yp) < q.delta)) return false;
    for (unsigned m = 1; m < (1u << q.d); ++m) {
        long long s = 0;
        for (int j = 0; j < q.d; ++j)
            if (m & (1u << j)) s += w.times[static_cast<std::size_t>(j)];
        TorusPoint ix = sys.orbit_point(w.xp, s);
        TorusPoint iy = sys.orbit_point(w.yp, s);
        if (!(torus_dist(ix, iy) < q.delta)) return false;
    }
    return true;
}

bool verify_ind_ap_witness(const SystemSpec& sys, const RelationQuery& q,
                           const RelationWitness& w) {
    if (w.times.size() != 1) return false;
    if (w.hits.size() != (1u << q.d)) return false;
    long long n = w.times[0];
    for (unsigned t = 0; t < (1u << q.d); ++t) {
        const TorusPoint& z = w.hits[t];
        for (int j = 1; j <= q.d; ++j) {
            TorusPoint img = sys.orbit_point(z, static_cast<long long>(j) * n);
            const TorusPoint& center = (t & (1u << (j - 1))) ? q.y : q.x;
            if (!(torus_dist(img, center) < q.delta)) return false;
        }
    }
    return true;
}

bool verify_ap1_witness(FixedAngle alpha, FixedAngle y, double epsilon, long long n) {
    if (n < 1) return false;
    Ap1State st = Ap1State::at(alpha, n);
    const uint128 eps_raw = epsilon >= 1.0 ? ~uint128(0) : FixedAngle::from_double(epsilon).raw();
    const FixedAngle zero;
    return circle_gap(st.na, zero).raw() < eps_raw && circle_gap(st.n2a, zero).raw() < eps_raw &&
           circle_gap(y, st.an_a).raw() < eps_raw && circle_gap(y, st.a2n_a).raw() < eps_raw;
}

}  // namespace apdyn
