#include "qbc/bc_algebra.hpp"

#include <cmath>

namespace qbc {

namespace {

const Complex kI{0.0, 1.0};

// distance of an eigenvalue from -1
double dist_minus_one(Complex lambda) { return std::abs(lambda + 1.0); }

// scalar inverse Cayley: -i (1 - u)/(1 + u), real for unimodular u != -1
double scalar_inverse_cayley(Complex u) {
    const Complex k = -kI * (1.0 - u) / (1.0 + u);
    return k.real();
}

// scalar Cayley: (1 - ik)/(1 + ik), unimodular for real k
Complex scalar_cayley(double k) {
    return (1.0 - kI * k) / (1.0 + kI * k);
}

// -|xi><xi| + w2 |xi_perp><xi_perp| for an orthonormal pair
Mat2 singular_form(const Vec2& xi, const Vec2& xi_perp, Complex w2) {
    return Mat2::projector(xi) * Complex(-1.0, 0.0) + Mat2::projector(xi_perp) * w2;
}

} // namespace

BoundaryCondition make_named(Family family, double alpha) {
    if (!std::isfinite(alpha)) {
        throw std::invalid_argument("make_named: alpha must be finite");
    }
    const Complex phase = std::exp(-kI * alpha);
    switch (family) {
        case Family::Dirichlet:
            return BoundaryCondition{Mat2{-1.0, 0.0, 0.0, -1.0}};
        case Family::Neumann:
            return BoundaryCondition{Mat2::identity()};
        case Family::Robin:
            return BoundaryCondition{Mat2{phase, 0.0, 0.0, phase}};
        case Family::MixedDirichletRobin:
            return BoundaryCondition{Mat2{-1.0, 0.0, 0.0, phase}};
        case Family::PseudoPeriodic:
            return BoundaryCondition{Mat2{0.0, phase, std::exp(kI * alpha), 0.0}};
    }
    throw std::invalid_argument("make_named: unknown family");
}

BoundaryCondition cayley(const HermitianBoundaryMatrix& k) {
    const Mat2& km = k.matrix();
    const Mat2 num = Mat2::identity() - kI * km;
    const Mat2 den = Mat2::identity() + kI * km;
    Mat2 u = num * den.inverse(); // den.inverse throws for non-Hermitian garbage
    if (unitarity_defect(u) > 1e-13) {
        u = polar_unitary(u); // large ||K||: clean up inversion round-off
    }
    return BoundaryCondition{u};
}

HermitianBoundaryMatrix inverse_cayley(const BoundaryCondition& u, double tol) {
    const Mat2& um = u.matrix();
    const EigenPair2 e = eigen_normal(um);
    if (dist_minus_one(e.lambda1) <= tol || dist_minus_one(e.lambda2) <= tol) {
        throw SingularBoundaryCondition(
            "inverse_cayley: eigenvalue at -1; boundary condition outside the Cayley range");
    }
    const Mat2 num = Mat2::identity() - um;
    const Mat2 den = Mat2::identity() + um;
    const Mat2 k = (num * den.inverse()) * Complex(0.0, -1.0);
    // exact arithmetic gives k Hermitian; symmetrize away the round-off
    const Mat2 herm = (k + k.adjoint()) * Complex(0.5, 0.0);
    return HermitianBoundaryMatrix{herm};
}

SpectralDecomp2 spectral_decomp(const BoundaryCondition& u) {
    EigenPair2 e = eigen_normal(u.matrix());
    // unimodular cleanup: eigenvalues of a unitary lie on the circle
    const auto unimodular = [](Complex z) {
        const double m = std::abs(z);
        return m > 0.0 ? z / m : Complex{1.0, 0.0};
    };
    e.lambda1 = unimodular(e.lambda1);
    e.lambda2 = unimodular(e.lambda2);
    if (dist_minus_one(e.lambda2) < dist_minus_one(e.lambda1)) {
        std::swap(e.lambda1, e.lambda2);
        std::swap(e.v1, e.v2);
    }
    return SpectralDecomp2{e.lambda1, e.lambda2, e.v1, e.v2};
}

BCClass classify(const BoundaryCondition& u, double tol) {
    const SpectralDecomp2 d = spectral_decomp(u);
    const bool s1 = dist_minus_one(d.u1) < tol;
    const bool s2 = dist_minus_one(d.u2) < tol;
    if (s1 && s2) return FullDirichlet{};
    if (s1) return OneSingular{d.xi, d.u2};
    return Regular{inverse_cayley(u, tol)};
}

BoundaryCondition star(const BoundaryCondition& u, const BoundaryCondition& v, double tol) {
    const BCClass cu = classify(u, tol);
    const BCClass cv = classify(v, tol);

    // either factor Dirichlet: absorbing, no arithmetic
    if (std::holds_alternative<FullDirichlet>(cu) || std::holds_alternative<FullDirichlet>(cv)) {
        return make_named(Family::Dirichlet);
    }

    if (std::holds_alternative<Regular>(cu) && std::holds_alternative<Regular>(cv)) {
        const Mat2& ku = std::get<Regular>(cu).k.matrix();
        const Mat2& kv = std::get<Regular>(cv).k.matrix();
        const Mat2 kw = (ku + kv) * Complex(0.5, 0.0);
        return cayley(HermitianBoundaryMatrix{kw});
    }

    if (std::holds_alternative<OneSingular>(cu) && std::holds_alternative<OneSingular>(cv)) {
        const auto& su = std::get<OneSingular>(cu);
        const auto& sv = std::get<OneSingular>(cv);
        if (std::abs(inner(su.xi, sv.xi)) > 1.0 - kParallelTol) {
            // parallel constraints: scalar Cayley average on the free direction
            const double kbar =
                0.5 * (scalar_inverse_cayley(su.u2) + scalar_inverse_cayley(sv.u2));
            const Vec2 xi_perp{-std::conj(su.xi.b), std::conj(su.xi.a)};
            return BoundaryCondition{singular_form(su.xi, xi_perp, scalar_cayley(kbar))};
        }
        // independent constraints pin both endpoint values: Dirichlet
        return make_named(Family::Dirichlet);
    }

    // one singular, one regular (either order)
    const auto& s = std::holds_alternative<OneSingular>(cu) ? std::get<OneSingular>(cu)
                                                            : std::get<OneSingular>(cv);
    const auto& r = std::holds_alternative<Regular>(cu) ? std::get<Regular>(cu)
                                                        : std::get<Regular>(cv);
    const Vec2 xi_perp{-std::conj(s.xi.b), std::conj(s.xi.a)};
    // <xi_perp | K_V xi_perp> is real; averaging it with the scalar preimage
    // of u2 keeps w2 exactly unimodular
    const double kv_perp = inner(xi_perp, r.k.matrix() * xi_perp).real();
    const double kbar = 0.5 * (scalar_inverse_cayley(s.u2) + kv_perp);
    return BoundaryCondition{singular_form(s.xi, xi_perp, scalar_cayley(kbar))};
}

} // namespace qbc
