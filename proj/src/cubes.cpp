#include "apdyn/cubes.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <thread>
#include <vector>

#include "apdyn/reports.hpp"

namespace apdyn {
namespace {

void check_order(int d) {
    if (d < 1 || d > 4) throw std::invalid_argument("cubes: d must be in [1,4]");
}

long long dot_with_vertex(const std::vector<long long>& n, unsigned vertex) {
    long long s = 0;
    for (std::size_t j = 0; j < n.size(); ++j)
        if (vertex & (1u << j)) s += n[j];
    return s;
}

// Lock-free shared upper bound for the branch-and-bound; only improves.
void relax_bound(std::atomic<double>& bound, double v) {
    double cur = bound.load(std::memory_order_relaxed);
    while (v < cur && !bound.compare_exchange_weak(cur, v)) {
    }
}

}  // namespace

CubePoint cube_point(const SystemSpec& sys, const TorusPoint& x, const FaceElement& nvec) {
    check_order(nvec.order());
    CubePoint cp;
    cp.d = nvec.order();
    unsigned n_vertices = 1u << cp.d;
    cp.coords.reserve(n_vertices);
    for (unsigned v = 0; v < n_vertices; ++v)
        cp.coords.push_back(sys.orbit_point(x, dot_with_vertex(nvec.n, v)));
    return cp;
}

CubePoint apply_face(const SystemSpec& sys, const CubePoint& cp, const FaceElement& f) {
    check_order(cp.d);
    if (f.order() != cp.d) throw std::invalid_argument("apply_face: dimension mismatch");
    CubePoint out;
    out.d = cp.d;
    out.coords.reserve(cp.coords.size());
    for (unsigned v = 0; v < cp.coords.size(); ++v)
        out.coords.push_back(sys.orbit_point(cp.coords[v], dot_with_vertex(f.n, v)));
    return out;
}

void write_cube_csv(const CubePoint& cp, const std::string& path) {
    check_order(cp.d);
    std::vector<std::string> header{"epsilon"};
    int dim = cp.coords.empty() ? 1 : cp.coords[0].dim();
    for (int i = 0; i < dim; ++i) {
        header.push_back("c" + std::to_string(i) + "_hex");
        header.push_back("c" + std::to_string(i));
    }
    CsvWriter csv(path, header);
    for (unsigned v = 0; v < cp.coords.size(); ++v) {
        std::vector<std::string> row;
        std::string eps(static_cast<std::size_t>(cp.d), '0');
        for (int j = 0; j < cp.d; ++j)
            if (v & (1u << j)) eps[static_cast<std::size_t>(j)] = '1';
        row.push_back(eps);
        for (int i = 0; i < dim; ++i) {
            row.push_back(cp.coords[v][i].to_hex());
            row.push_back(fmt_g17(cp.coords[v][i].to_double()));
        }
        csv.row(row);
    }
    csv.close();
}

double cube_degeneracy_residual(const SystemSpec& sys, int d, const TorusPoint& x,
                                const TorusPoint& y, const DegeneracyBudget& budget) {
    if (d < 2 || d > 3) throw std::invalid_argument("cube_degeneracy_residual: d must be 2 or 3");
    if (budget.face_bound < 0) throw std::invalid_argument("cube_degeneracy_residual: negative budget");
    if (budget.zgrid < 1) throw std::invalid_argument("cube_degeneracy_residual: zgrid must be >= 1");
    if (x.dim() != sys.dimension() || y.dim() != sys.dimension())
        throw std::invalid_argument("cube_degeneracy_residual: dimension mismatch");

    const long long bound_n = budget.face_bound;
    const long long span = static_cast<long long>(d) * bound_n;
    const long long zcount =
        sys.dimension() == 1 ? budget.zgrid : budget.zgrid * budget.zgrid;

    // Masks of vertex subsets with >= 2 face directions; singles are the
    // sorted candidates themselves.
    std::vector<unsigned> multi;
    for (unsigned m = 1; m < (1u << d); ++m)
        if (__builtin_popcount(m) >= 2) multi.push_back(m);

    std::atomic<double> best{std::numeric_limits<double>::infinity()};

    auto scan_z = [&](const TorusPoint& z) {
        double zterm = torus_dist(x, z);
        if (zterm >= best.load(std::memory_order_relaxed)) return;  // cannot improve

        // D(m) = rho(y, T^m z) for m in [-span, span], by exact cursor sweep.
        std::vector<double> dist(static_cast<std::size_t>(2 * span + 1));
        TorusPoint c = sys.orbit_point(z, -span);
        for (long long s = -span; s <= span; ++s) {
            dist[static_cast<std::size_t>(s + span)] = torus_dist(y, c);
            if (s < span) c = sys.apply(c);
        }
        auto dist_at = [&](long long s) { return dist[static_cast<std::size_t>(s + span)]; };

        // Digits sorted by their own distance; bounded depth-first search.
        std::vector<long long> order(static_cast<std::size_t>(2 * bound_n + 1));
        std::iota(order.begin(), order.end(), -bound_n);
        std::stable_sort(order.begin(), order.end(),
                         [&](long long a, long long b) { return dist_at(a) < dist_at(b); });

        std::vector<long long> digits(static_cast<std::size_t>(d), 0);
        std::function<void(int, double)> descend = [&](int depth, double running) {
            if (depth == d) {
                double v = running;
                for (unsigned m : multi) {
                    long long s = 0;
                    for (int j = 0; j < d; ++j)
                        if (m & (1u << j)) s += digits[static_cast<std::size_t>(j)];
                    v = std::max(v, dist_at(s));
                    if (v >= best.load(std::memory_order_relaxed)) return;
                }
                relax_bound(best, v);
                return;
            }
            for (long long m : order) {
                double next = std::max(running, dist_at(m));
                if (next >= best.load(std::memory_order_relaxed)) break;  // sorted
                digits[static_cast<std::size_t>(depth)] = m;
                descend(depth + 1, next);
            }
        };
        descend(0, zterm);
    };

    auto z_at = [&](long long idx) {
        if (sys.dimension() == 1) return TorusPoint(FixedAngle::from_rational(idx, budget.zgrid));
        return TorusPoint(FixedAngle::from_rational(idx / budget.zgrid, budget.zgrid),
                          FixedAngle::from_rational(idx % budget.zgrid, budget.zgrid));
    };

    int workers = std::max(budget.workers, 1);
    if (workers == 1) {
        for (long long i = 0; i < zcount; ++i) scan_z(z_at(i));
    } else {
        std::atomic<long long> next{0};
        constexpr long long kBlock = 8;
        auto work = [&] {
            for (;;) {
                long long b = next.fetch_add(kBlock);
                if (b >= zcount) return;
                long long e = std::min(zcount, b + kBlock);
                for (long long i = b; i < e; ++i) scan_z(z_at(i));
            }
        };
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(work);
        for (auto& t : pool) t.join();
    }
    return best.load();
}

}  // namespace apdyn
