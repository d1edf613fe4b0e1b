#pragma once

// Algebra of quantum boundary conditions on the unit interval.
//
// A self-adjoint realization of -d^2/dx^2 on [0,1] is labeled by a 2x2
// unitary U through the boundary equation
//
//     i (I + U) phi' = (I - U) phi,   phi = (psi(0), psi(1)),
//                                     phi' = (-psi'(0), psi'(1)).
//
// Unitaries with no eigenvalue at -1 ("regular") leave the endpoint values
// free and correspond under the Cayley transform
//
//     C(K) = (I - iK)(I + iK)^{-1},   C^{-1}(U) = -i (I - U)(I + U)^{-1}
//
// to a Hermitian matrix K with phi' = K phi. Each eigenvalue at -1 instead
// pins one linear combination of the endpoint values to zero; U = -I pins
// both (Dirichlet).
//
// Rapid alternation between two boundary conditions converges to the
// dynamics of a single composed condition
//
//     U * V = C( (C^{-1}(U) + C^{-1}(V)) / 2 )
//
// on the regular set, extended to all of U(2) by keeping every -1
// eigenvector of either factor: constraints accumulate, so the -1
// eigenspaces are absorbing and two independent constraints collapse the
// product to -I. star() below implements every branch of that extension.

#include <complex>
#include <variant>

#include "qbc/errors.hpp"
#include "qbc/mat2.hpp"

namespace qbc {

// An eigenvalue of U counts as -1 when |lambda + 1| < kSingularTol. The
// branch structure of star() is discontinuous across the singular set, so
// the threshold is fixed and documented rather than adaptive; inputs within
// ~kSingularTol of the set are the caller's responsibility.
inline constexpr double kSingularTol = 1e-9;

// Eigenvectors of two singular conditions count as parallel when
// |<xi_u, xi_v>| > 1 - kParallelTol.
inline constexpr double kParallelTol = 1e-9;

// 2x2 unitary labeling a self-adjoint extension. Validated on construction.
class BoundaryCondition {
public:
    explicit BoundaryCondition(const Mat2& u) : u_(u) {
        if (unitarity_defect(u) > 1e-12) {
            throw std::invalid_argument("BoundaryCondition: matrix is not unitary (defect > 1e-12)");
        }
    }

    const Mat2& matrix() const { return u_; }

private:
    Mat2 u_;
};

// Hermitian K with phi' = K phi; the Cayley preimage of a regular condition.
// Physically an inverse length in units of the interval.
class HermitianBoundaryMatrix {
public:
    explicit HermitianBoundaryMatrix(const Mat2& k) : k_(k) {
        if (hermiticity_defect(k) > 1e-12 * std::max(1.0, k.max_abs())) {
            throw std::invalid_argument("HermitianBoundaryMatrix: matrix is not Hermitian");
        }
    }

    const Mat2& matrix() const { return k_; }

private:
    Mat2 k_;
};

struct SpectralDecomp2 {
    Complex u1, u2; // unimodular eigenvalues; any eigenvalue at -1 comes first
    Vec2 xi;        // eigenvector of u1
    Vec2 xi_perp;   // eigenvector of u2, orthonormal to xi
};

enum class Family { Dirichlet, Neumann, Robin, MixedDirichletRobin, PseudoPeriodic };

// Classification of U by the number of eigenvalues at -1.
struct Regular {
    HermitianBoundaryMatrix k;
};
struct OneSingular {
    Vec2 xi;    // unit eigenvector with eigenvalue -1; <xi|phi> = 0 is the constraint
    Complex u2; // the other (non -1) eigenvalue
};
struct FullDirichlet {};

using BCClass = std::variant<Regular, OneSingular, FullDirichlet>;

// Named families:
//   Dirichlet            -I
//   Neumann               I
//   Robin(alpha)          e^{-i alpha} I
//   MixedDirichletRobin   diag(-1, e^{-i alpha})   (Dirichlet left, Robin right)
//   PseudoPeriodic        cos(alpha) sigma_x + sin(alpha) sigma_y
// alpha must be finite. Robin is the two-sided condition
// psi'(0) = -tan(alpha/2) psi(0), psi'(1) = tan(alpha/2) psi(1).
BoundaryCondition make_named(Family family, double alpha = 0.0);

// Cayley transform of a Hermitian matrix; always lands in the regular set.
BoundaryCondition cayley(const HermitianBoundaryMatrix& k);

// Inverse Cayley transform. Throws SingularBoundaryCondition when an
// eigenvalue of u lies within tol of -1 (u outside the Cayley range): the
// caller must go through classify() and the singular star() branches
// instead of receiving an enormous, inaccurate K.
HermitianBoundaryMatrix inverse_cayley(const BoundaryCondition& u, double tol = kSingularTol);

// Spectral decomposition with the -1 (or nearest to -1) eigenvalue first.
SpectralDecomp2 spectral_decomp(const BoundaryCondition& u);

// Regular / OneSingular / FullDirichlet split, carrying the Cayley data.
BCClass classify(const BoundaryCondition& u, double tol = kSingularTol);

// The composition law. Branches:
//   both regular                          K_W = (K_U + K_V)/2
//   one singular, other regular           -1 eigenvector kept; scalar Cayley
//                                         average on the orthogonal direction
//   both singular, eigenvectors parallel  same form, two scalar preimages
//   both singular, not parallel           two independent constraints: -I
//   either factor -I                      -I (absorbing, no arithmetic)
// tol is used both for the -1 test and the parallelism test.
// The result is commutative and idempotent; it is *not* associative for
// three or more distinct regular factors (midpoint averages re-weight), but
// satisfies the medial identity (a*b)*(c*d) = (a*c)*(b*d).
BoundaryCondition star(const BoundaryCondition& u, const BoundaryCondition& v,
                       double tol = kSingularTol);

} // namespace qbc
