#pragma once

// Spectrum and eigenfunctions of T_U = -d^2/dx^2 on [0,1] under
// i (I + U) phi' = (I - U) phi, plus the quadratic forms
//
//     t_U(psi) = ||psi'||^2 - Gamma_U(phi)
//
// of the boundary data. Units: interval length 1, hbar = 1, 2m = 1;
// energies are dimensionless.
//
// Eigenvalues are located as zeros of the secular determinant built from the
// two fundamental solutions at each trial energy (cos/sin, cosh/sinh, or
// {1, x} at E = 0). The search scans a uniform grid in k = sqrt(E) (spacing
// pi/20, well below the asymptotic pi spacing of the roots), brackets by the
// phase flip of the complex determinant, and polishes with a
// multiplicity-aware Newton step so that doubly degenerate levels (periodic
// conditions) are refined to full precision as well.

#include <iosfwd>
#include <vector>

#include "qbc/bc_algebra.hpp"
#include "qbc/grid.hpp"

namespace qbc {

// Endpoint data of a wavefunction, in the sign convention
// phi = (psi(0), psi(1)), phi' = (-psi'(0), psi'(1)).
struct BoundaryVector {
    Vec2 phi;
    Vec2 phi_prime;
};

enum class ModeKind { Evanescent, Zero, Oscillatory };

// One eigenpair. The represented function is
//   coeff_a * f1 + coeff_b * f2
// with (f1, f2) = (cos kx, sin kx), (cosh Kx, sinh Kx) or (1, x) by kind;
// coefficients are stored L2-normalized, with the largest one rotated to be
// real positive. `norm` is the L2 norm of the stored function (== 1 up to
// round-off; kept as a self-check value).
struct Mode {
    double energy = 0.0;
    ModeKind kind = ModeKind::Zero;
    double param = 0.0; // k (oscillatory) or kappa (evanescent), 0 for zero modes
    Complex coeff_a{0.0, 0.0};
    Complex coeff_b{0.0, 0.0};
    double norm = 1.0;

    BoundaryVector boundary() const;
};

// Evaluate the normalized eigenfunction from its analytic form.
// Throws std::domain_error outside [0,1].
Complex mode_eval(const Mode& m, double x);

struct SpectralBasis {
    BoundaryCondition bc;
    double cutoff_energy = 0.0;
    std::vector<Mode> modes; // ascending energy
};

struct SolverOptions {
    double k_grid_step = 0.15707963267948966; // pi/20
    double det_tol = 1e-12;                   // acceptance: |det| <= det_tol * scan scale
    int max_iter = 100;
    double degeneracy_tol = 1e-8;
    double singular_tol = kSingularTol;
};

struct FormValue {
    double value = 0.0;
};

// Matrix whose columns are i(I+U) phi' - (I-U) phi on the two fundamental
// solutions at the given energy; singular exactly at the eigenvalues.
Mat2 secular_matrix(const BoundaryCondition& u, double energy);

// All eigenvalues in [E_lo, e_max], E_lo = -4 (||K||+1)^2 for regular U and
// the scalar analogue for one-singular U. Degenerate levels yield two
// orthonormal modes. Throws ConvergenceFailure if a bracketed root will not
// refine.
SpectralBasis find_spectrum(const BoundaryCondition& u, double e_max,
                            const SolverOptions& opts = {});

// Boundary quadratic form Gamma_U:
//   regular        <phi | K_U phi>
//   one singular   k(u2) |<xi_perp|phi>|^2   on the constraint <xi|phi> = 0
//   Dirichlet      0                          on the constraint phi = 0
// Throws ConstraintViolation when phi breaks the constraint beyond tol.
FormValue gamma_form(const BoundaryCondition& u, const Vec2& phi, double tol = 1e-8);

// Kinetic forms t_U = ||psi'||^2 - Gamma_U(phi); the Mode overload is fully
// closed-form and equals the eigenvalue for an eigenmode.
FormValue kinetic_form(const BoundaryCondition& u, const Mode& m);
FormValue kinetic_form(const BoundaryCondition& u, const StateGrid& psi);

// || i(I+U) phi' - (I-U) phi ||_2; zero iff the boundary condition holds.
double bc_residual(const BoundaryCondition& u, const BoundaryVector& bv);

// L2 inner product of two modes, in closed form.
Complex mode_inner(const Mode& x, const Mode& y);

// CSV columns: index,energy,kind,re_a,im_a,re_b,im_b,bc_residual
// (ascending energy; floats at 17 significant digits). The JSON-lines
// variant emits one object per mode with the same keys.
void write_spectrum_csv(std::ostream& out, const SpectralBasis& basis);
void write_spectrum_jsonl(std::ostream& out, const SpectralBasis& basis);

} // namespace qbc
