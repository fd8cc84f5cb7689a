#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "apdyn/system.hpp"
#include "apdyn/torus.hpp"

namespace apdyn {

/// A pair of points plus the search budget for the relation detectors.
struct RelationQuery {
    TorusPoint x;
    TorusPoint y;
    int d = 1;             // order of the relation
    double delta = 0.01;   // resolution; all bounds are strict "< delta"
    long long n_max = 1000;
    int ball_grid = 1;     // perturbation grid points per delta-ball axis (1 = no perturbation)
};

enum class RelationStatus { Witnessed, RefutedAtBudget };

struct RelationWitness {
    TorusPoint xp;                 // x' with rho(x, x') < delta
    TorusPoint yp;                 // y' with rho(y, y') < delta
    std::vector<long long> times;  // n (AP, proximal, Ind_ap) or (n_1..n_d) (RP)
    std::vector<TorusPoint> hits;  // Ind_ap only: one hitting point per tuple in {1,2}^d
};

/// Three-valued outcome: a witness certifies membership at this resolution;
/// refutation is only "refuted at this search budget", never a disproof.
struct RelationVerdict {
    RelationStatus status = RelationStatus::RefutedAtBudget;
    std::optional<RelationWitness> witness;
    double residual = 0.0;              // witness value, or best achieved max-distance
    std::vector<long long> best_times;  // time(s) attaining the residual
};

struct SearchOptions {
    int workers = 1;
    long long random_restarts = 0;  // extra seeded random perturbation pairs
    std::uint64_t seed = 0;
};

/// Proximality scan: Witnessed iff some |n| <= n_max has
/// rho(T^n x, T^n y) < delta. No perturbation. Reports the minimizing n.
RelationVerdict detect_proximal(const SystemSpec& sys, const RelationQuery& q,
                                const SearchOptions& opts = {});

/// Order-d relation along arithmetic progressions: searches perturbations
/// x', y' on ball grids and times n = 1, -1, 2, -2, ... for
/// rho(T^{i n} x', T^{i n} y') < delta, i = 1..d. Deterministic search
/// order: n first, then x' grid, then y' grid, lexicographic.
RelationVerdict detect_ap(const SystemSpec& sys, const RelationQuery& q,
                          const SearchOptions& opts = {});

/// Order-d regionally proximal relation: time vectors n in
/// [-n_cube, n_cube]^d with n_cube = floor(n_max^(1/d)), requiring all
/// 2^d - 1 nonempty subset sums to stay delta-close. At d = 1 this is the
/// same search space and order as detect_ap.
RelationVerdict detect_rp(const SystemSpec& sys, const RelationQuery& q,
                          const SearchOptions& opts = {});

/// Arithmetic-progression independence: Witnessed iff some |n| <= n_max has,
/// for every tuple t in {1,2}^d, a phase-space sample z with
/// T^{j n} z in U_{t_j} for j = 1..d, where U_1, U_2 are the delta-balls
/// around the query pair. The hitting points are stored per tuple.
RelationVerdict detect_ind_ap(const SystemSpec& sys, const RelationQuery& q,
                              long long sample_grid, const SearchOptions& opts = {});

/// Orbit check for the skew product (x,y) -> (x+alpha, x+y): searches
/// 1 <= n <= n_max with ||n a|| < eps, ||2n a|| < eps, ||y - a(n) a|| < eps,
/// ||y - a(2n) a|| < eps, evaluated in exact fixed point (a(n) = n(n-1)/2).
/// Witnesses can only exist when ||3y|| is small (residual >= ||3y||/6).
RelationVerdict weyl_ap1_orbit_check(FixedAngle alpha, FixedAngle y, double epsilon,
                                     long long n_max, const SearchOptions& opts = {});

// Witness re-verification (strict < delta, no tolerance). Every detector
// re-checks its own witness through these before returning it.
bool verify_proximal_witness(const SystemSpec& sys, const RelationQuery& q,
                             const RelationWitness& w);
bool verify_ap_witness(const SystemSpec& sys, const RelationQuery& q, const RelationWitness& w);
bool verify_rp_witness(const SystemSpec& sys, const RelationQuery& q, const RelationWitness& w);
bool verify_ind_ap_witness(const SystemSpec& sys, const RelationQuery& q,
                           const RelationWitness& w);
bool verify_ap1_witness(FixedAngle alpha, FixedAngle y, double epsilon, long long n);

/// The perturbation grid around a point: ball_grid points per axis at
/// offsets delta*(2t+1-g)/g, all strictly inside the open ball.
std::vector<TorusPoint> ball_grid_points(const TorusPoint& center, double delta, int ball_grid);

}  // namespace apdyn
