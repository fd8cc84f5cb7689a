#pragma once

#include <string>
#include <vector>

#include "apdyn/system.hpp"
#include "apdyn/torus.hpp"

namespace apdyn {

/// Element of the face group acting on d-dimensional parallelepipeds.
/// All generators are powers of the single commuting map T, so an element
/// is determined by one integer per face direction: vertex epsilon moves by
/// T^{n . epsilon} with n . epsilon = sum_j n_j epsilon_j; the vertex
/// epsilon = 0...0 never moves.
struct FaceElement {
    std::vector<long long> n;

    int order() const { return static_cast<int>(n.size()); }
};

/// 2^d-tuple of torus points indexed by epsilon in {0,1}^d. Bit j of the
/// vertex index is epsilon_{j+1}, so coords[0] is the base vertex.
struct CubePoint {
    int d = 0;
    std::vector<TorusPoint> coords;
};

/// The parallelepiped (T^{n . epsilon} x : epsilon), exactly. Vertex 0
/// equals x; vertex 1...1 equals T^{n_1 + ... + n_d} x. d <= 4.
CubePoint cube_point(const SystemSpec& sys, const TorusPoint& x, const FaceElement& nvec);

/// Moves vertex epsilon by T^{f . epsilon}. Composes additively:
/// apply_face(f) then apply_face(g) equals apply_face(f + g).
CubePoint apply_face(const SystemSpec& sys, const CubePoint& cp, const FaceElement& f);

struct DegeneracyBudget {
    long long face_bound = 100;  // |n_j| <= face_bound
    long long zgrid = 256;       // base points per axis
    int workers = 1;
};

/// CSV export of a parallelepiped sample, one row per vertex epsilon:
/// columns epsilon (bit string, lowest direction first), then one hex and
/// one numeric column per coordinate.
void write_cube_csv(const CubePoint& cp, const std::string& path);

/// Best approximation of the degenerate tuple (x, y, ..., y) by a generated
/// parallelepiped:
///
///   min over grid z, |n_j| <= face_bound of
///       max( rho(x, z), max over nonempty epsilon of rho(y, T^{n.eps} z) )
///
/// A small residual with x != y is evidence against degeneracy at order d-1.
/// Nonincreasing in face_bound. d in {2, 3}.
double cube_degeneracy_residual(const SystemSpec& sys, int d, const TorusPoint& x,
                                const TorusPoint& y, const DegeneracyBudget& budget);

}  // namespace apdyn
