#include "qbc/spectral.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include <json.hpp>

namespace qbc {

namespace {

const Complex kI{0.0, 1.0};

Complex cross(const Vec2& x, const Vec2& y) { return x.a * y.b - x.b * y.a; }

// Boundary data of the two fundamental solutions at parameter p (k or kappa),
// together with first and second p-derivatives. Columns of the secular matrix
// are A phi' - B phi with A = i(I+U), B = I-U.
struct SecularColumns {
    Vec2 c1, c2;     // secular columns
    Vec2 d1, d2;     // d/dp
    Vec2 e1, e2;     // d^2/dp^2
};

SecularColumns secular_columns(const Mat2& a, const Mat2& b, ModeKind kind, double p) {
    Vec2 phi1, phip1, dphi1, dphip1, ddphi1, ddphip1;
    Vec2 phi2, phip2, dphi2, dphip2, ddphi2, ddphip2;
    switch (kind) {
        case ModeKind::Oscillatory: {
            const double ck = std::cos(p), sk = std::sin(p);
            phi1 = {1.0, ck};
            phip1 = {0.0, -p * sk};
            dphi1 = {0.0, -sk};
            dphip1 = {0.0, -sk - p * ck};
            ddphi1 = {0.0, -ck};
            ddphip1 = {0.0, -2.0 * ck + p * sk};
            phi2 = {0.0, sk};
            phip2 = {-p, p * ck};
            dphi2 = {0.0, ck};
            dphip2 = {-1.0, ck - p * sk};
            ddphi2 = {0.0, -sk};
            ddphip2 = {0.0, -2.0 * sk - p * ck};
            break;
        }
        case ModeKind::Evanescent: {
            const double ch = std::cosh(p), sh = std::sinh(p);
            phi1 = {1.0, ch};
            phip1 = {0.0, p * sh};
            dphi1 = {0.0, sh};
            dphip1 = {0.0, sh + p * ch};
            ddphi1 = {0.0, ch};
            ddphip1 = {0.0, 2.0 * ch + p * sh};
            phi2 = {0.0, sh};
            phip2 = {-p, p * ch};
            dphi2 = {0.0, ch};
            dphip2 = {-1.0, ch + p * sh};
            ddphi2 = {0.0, sh};
            ddphip2 = {0.0, 2.0 * sh + p * ch};
            break;
        }
        case ModeKind::Zero: {
            phi1 = {1.0, 1.0};
            phip1 = {0.0, 0.0};
            phi2 = {0.0, 1.0};
            phip2 = {-1.0, 1.0};
            break;
        }
    }
    SecularColumns sc;
    sc.c1 = a * phip1 - b * phi1;
    sc.c2 = a * phip2 - b * phi2;
    sc.d1 = a * dphip1 - b * dphi1;
    sc.d2 = a * dphip2 - b * dphi2;
    sc.e1 = a * ddphip1 - b * ddphi1;
    sc.e2 = a * ddphip2 - b * ddphi2;
    return sc;
}

struct DetEval {
    Complex d, dp, dpp;
};

DetEval det_eval(const Mat2& a, const Mat2& b, ModeKind kind, double p) {
    const SecularColumns sc = secular_columns(a, b, kind, p);
    DetEval de;
    de.d = cross(sc.c1, sc.c2);
    de.dp = cross(sc.d1, sc.c2) + cross(sc.c1, sc.d2);
    de.dpp = cross(sc.e1, sc.c2) + 2.0 * cross(sc.d1, sc.d2) + cross(sc.c1, sc.e2);
    return de;
}

// normalized magnitude used for thresholds; columns grow like (1+p)
double dhat(const DetEval& de, double p) { return std::abs(de.d) / ((1.0 + p) * (1.0 + p)); }

// Multiplicity-aware Newton: w = d d' / (d'^2 - d d'') has a simple zero at a
// root of any order; the step is real on the real axis up to round-off.
double newton_polish(const Mat2& a, const Mat2& b, ModeKind kind, double p0, double lo,
                     double hi, int max_iter) {
    double p = p0;
    for (int it = 0; it < max_iter; ++it) {
        const DetEval de = det_eval(a, b, kind, p);
        const Complex denom = de.dp * de.dp - de.d * de.dpp;
        const double dscale = std::abs(de.dp) * std::abs(de.dp) + std::abs(de.d) * std::abs(de.dpp);
        if (std::abs(denom) <= 1e-30 + 1e-14 * dscale) break;
        const double step = ((de.d * de.dp) / denom).real();
        double pn = p - step;
        if (pn < lo) pn = lo;
        if (pn > hi) pn = hi;
        const bool done = std::abs(pn - p) <= 1e-16 * (1.0 + std::abs(p));
        p = pn;
        if (done) break;
    }
    return p;
}

struct ScanHit {
    double p;
    bool from_bracket; // sign-flip bracket (must refine) vs. local-min probe
};

// Roots of the secular determinant for one solution kind over [p_floor, p_max].
// Brackets by the phase flip of the complex determinant between grid points;
// even-order roots (degenerate levels) do not flip the phase and are picked up
// as small local minima refined by golden section before the Newton polish.
std::vector<double> scan_roots(const Mat2& a, const Mat2& b, ModeKind kind, double p_floor,
                               double p_max, const SolverOptions& opts) {
    std::vector<double> roots;
    if (p_max <= p_floor) return roots;

    std::vector<double> grid;
    grid.push_back(p_floor);
    const double step = opts.k_grid_step;
    for (double p = step; p < p_max; p += step) {
        if (p > p_floor) grid.push_back(p);
    }
    grid.push_back(p_max);
    const int n = static_cast<int>(grid.size());
    if (n < 2) return roots;

    std::vector<Complex> det(n);
    std::vector<double> mag(n);
    double scale = 0.0;
    for (int i = 0; i < n; ++i) {
        const DetEval de = det_eval(a, b, kind, grid[i]);
        det[i] = de.d;
        mag[i] = dhat(de, grid[i]);
        scale = std::max(scale, mag[i]);
    }
    scale = std::max(scale, 1e-300);
    const double accept = opts.det_tol * scale;

    std::vector<bool> grid_root(n, false);
    std::vector<ScanHit> hits;
    for (int i = 0; i < n; ++i) {
        if (mag[i] <= 1e3 * accept) {
            grid_root[i] = true;
            hits.push_back({grid[i], false});
        }
    }

    std::vector<bool> flipped(n - 1, false);
    for (int i = 0; i + 1 < n; ++i) {
        if (grid_root[i] || grid_root[i + 1]) continue;
        if ((det[i] * std::conj(det[i + 1])).real() < 0.0) {
            flipped[i] = true;
            // phase-fixed bisection: the root is between x and y iff the
            // determinant phases at x and y differ by more than pi/2
            double lo = grid[i], hi = grid[i + 1];
            Complex dlo = det[i];
            for (int it = 0; it < 100 && hi - lo > 1e-16 * (1.0 + hi); ++it) {
                const double mid = 0.5 * (lo + hi);
                const Complex dm = det_eval(a, b, kind, mid).d;
                if ((dlo * std::conj(dm)).real() < 0.0) {
                    hi = mid;
                } else {
                    lo = mid;
                    dlo = dm;
                }
            }
            hits.push_back({0.5 * (lo + hi), true});
        }
    }

    // small interior local minima with no adjacent flip: even-order candidates
    for (int i = 1; i + 1 < n; ++i) {
        if (grid_root[i] || grid_root[i - 1] || grid_root[i + 1]) continue;
        if (flipped[i - 1] || flipped[i]) continue;
        if (mag[i] > 0.02 * scale) continue;
        if (mag[i] >= mag[i - 1] || mag[i] >= mag[i + 1]) continue;
        double lo = grid[i - 1], hi = grid[i + 1];
        const double gr = 0.5 * (std::sqrt(5.0) - 1.0);
        double x1 = hi - gr * (hi - lo), x2 = lo + gr * (hi - lo);
        double f1 = std::abs(det_eval(a, b, kind, x1).d);
        double f2 = std::abs(det_eval(a, b, kind, x2).d);
        for (int it = 0; it < 120 && hi - lo > 1e-13 * (1.0 + hi); ++it) {
            if (f1 < f2) {
                hi = x2;
                x2 = x1;
                f2 = f1;
                x1 = hi - gr * (hi - lo);
                f1 = std::abs(det_eval(a, b, kind, x1).d);
            } else {
                lo = x1;
                x1 = x2;
                f1 = f2;
                x2 = lo + gr * (hi - lo);
                f2 = std::abs(det_eval(a, b, kind, x2).d);
            }
        }
        hits.push_back({0.5 * (lo + hi), false});
    }

    for (const ScanHit& hit : hits) {
        const double lo = std::max(p_floor, hit.p - 2.0 * step);
        const double hi = std::min(p_max, hit.p + 2.0 * step);
        const double p = newton_polish(a, b, kind, hit.p, lo, hi, opts.max_iter);
        const DetEval de = det_eval(a, b, kind, p);
        if (dhat(de, p) <= accept) {
            roots.push_back(p);
        } else if (hit.from_bracket) {
            throw ConvergenceFailure("find_spectrum: bracketed root at parameter " +
                                     std::to_string(hit.p) + " did not refine below tolerance");
        }
    }

    std::sort(roots.begin(), roots.end());
    std::vector<double> unique;
    for (double p : roots) {
        if (unique.empty() || p - unique.back() > 1e-8 * (1.0 + p)) {
            unique.push_back(p);
        }
    }
    return unique;
}

// singular values (s1 >= s2) and right singular vectors of a 2x2 matrix
struct Svd2 {
    double s1, s2;
    Vec2 v1, v2;
};

Svd2 svd2(const Mat2& m) {
    const EigenPair2 e = eigen_normal(m.adjoint() * m); // Hermitian PSD
    double l1 = std::max(e.lambda1.real(), 0.0);
    double l2 = std::max(e.lambda2.real(), 0.0);
    Vec2 v1 = e.v1, v2 = e.v2;
    if (l2 > l1) {
        std::swap(l1, l2);
        std::swap(v1, v2);
    }
    return {std::sqrt(l1), std::sqrt(l2), v1, v2};
}

// closed-form integrals of fundamental-solution products on [0,1]
struct Gram {
    double g11, g12, g22; // <f1,f1>, <f1,f2>, <f2,f2>
};

Gram basis_gram(ModeKind kind, double p) {
    switch (kind) {
        case ModeKind::Oscillatory: {
            const double s2 = std::sin(2.0 * p) / (4.0 * p);
            const double sk = std::sin(p);
            return {0.5 + s2, sk * sk / (2.0 * p), 0.5 - s2};
        }
        case ModeKind::Evanescent: {
            const double s2 = std::sinh(2.0 * p) / (4.0 * p);
            const double sh = std::sinh(p);
            return {0.5 + s2, sh * sh / (2.0 * p), s2 - 0.5};
        }
        case ModeKind::Zero:
            return {1.0, 0.5, 1.0 / 3.0};
    }
    return {1.0, 0.0, 1.0};
}

// same, for the derivatives of the fundamental solutions
Gram derivative_gram(ModeKind kind, double p) {
    const Gram g = basis_gram(kind, p);
    switch (kind) {
        case ModeKind::Oscillatory:
            // f1' = -p sin, f2' = p cos
            return {p * p * g.g22, -p * p * g.g12, p * p * g.g11};
        case ModeKind::Evanescent:
            // f1' = p sinh, f2' = p cosh
            return {p * p * g.g22, p * p * g.g12, p * p * g.g11};
        case ModeKind::Zero:
            // f1' = 0, f2' = 1
            return {0.0, 0.0, 1.0};
    }
    return {0.0, 0.0, 0.0};
}

double coeff_quadratic(const Gram& g, Complex a, Complex b) {
    return g.g11 * std::norm(a) + g.g22 * std::norm(b) +
           2.0 * g.g12 * (std::conj(a) * b).real();
}

Complex coeff_bilinear(const Gram& g, Complex ax, Complex bx, Complex ay, Complex by) {
    return g.g11 * std::conj(ax) * ay + g.g22 * std::conj(bx) * by +
           g.g12 * (std::conj(ax) * by + std::conj(bx) * ay);
}

Mode build_mode(ModeKind kind, double p, Complex a, Complex b) {
    Mode m;
    m.kind = kind;
    m.param = (kind == ModeKind::Zero) ? 0.0 : p;
    switch (kind) {
        case ModeKind::Oscillatory: m.energy = p * p; break;
        case ModeKind::Evanescent: m.energy = -p * p; break;
        case ModeKind::Zero: m.energy = 0.0; break;
    }
    const Gram g = basis_gram(kind, p);
    const double n2 = coeff_quadratic(g, a, b);
    const double n = std::sqrt(std::max(n2, 0.0));
    if (!(n > 0.0)) {
        throw ConvergenceFailure("find_spectrum: degenerate null vector in mode construction");
    }
    const Vec2 fixed = fix_phase(Vec2{a / n, b / n});
    m.coeff_a = fixed.a;
    m.coeff_b = fixed.b;
    m.norm = std::sqrt(coeff_quadratic(g, m.coeff_a, m.coeff_b));
    return m;
}

bool mode_order(const Mode& x, const Mode& y) {
    if (x.energy != y.energy) return x.energy < y.energy;
    if (x.kind != y.kind) return static_cast<int>(x.kind) < static_cast<int>(y.kind);
    const auto key = [](const Mode& m) {
        return std::array<double, 4>{m.coeff_a.real(), m.coeff_a.imag(), m.coeff_b.real(),
                                     m.coeff_b.imag()};
    };
    return key(x) < key(y);
}

} // namespace

BoundaryVector Mode::boundary() const {
    switch (kind) {
        case ModeKind::Oscillatory: {
            const double ck = std::cos(param), sk = std::sin(param);
            const Complex psi1 = coeff_a * ck + coeff_b * sk;
            const Complex dpsi0 = coeff_b * param;
            const Complex dpsi1 = param * (-coeff_a * sk + coeff_b * ck);
            return {Vec2{coeff_a, psi1}, Vec2{-dpsi0, dpsi1}};
        }
        case ModeKind::Evanescent: {
            const double ch = std::cosh(param), sh = std::sinh(param);
            const Complex psi1 = coeff_a * ch + coeff_b * sh;
            const Complex dpsi0 = coeff_b * param;
            const Complex dpsi1 = param * (coeff_a * sh + coeff_b * ch);
            return {Vec2{coeff_a, psi1}, Vec2{-dpsi0, dpsi1}};
        }
        case ModeKind::Zero:
            return {Vec2{coeff_a, coeff_a + coeff_b}, Vec2{-coeff_b, coeff_b}};
    }
    return {};
}

Complex mode_eval(const Mode& m, double x) {
    if (x < 0.0 || x > 1.0) {
        throw std::domain_error("mode_eval: x outside [0,1]");
    }
    switch (m.kind) {
        case ModeKind::Oscillatory:
            return m.coeff_a * std::cos(m.param * x) + m.coeff_b * std::sin(m.param * x);
        case ModeKind::Evanescent:
            return m.coeff_a * std::cosh(m.param * x) + m.coeff_b * std::sinh(m.param * x);
        case ModeKind::Zero:
            return m.coeff_a + m.coeff_b * x;
    }
    return {};
}

Mat2 secular_matrix(const BoundaryCondition& u, double energy) {
    const Mat2 a = kI * (Mat2::identity() + u.matrix());
    const Mat2 b = Mat2::identity() - u.matrix();
    ModeKind kind = ModeKind::Zero;
    double p = 0.0;
    if (energy > 0.0) {
        kind = ModeKind::Oscillatory;
        p = std::sqrt(energy);
    } else if (energy < 0.0) {
        kind = ModeKind::Evanescent;
        p = std::sqrt(-energy);
    }
    const SecularColumns sc = secular_columns(a, b, kind, p);
    return Mat2{sc.c1.a, sc.c2.a, sc.c1.b, sc.c2.b};
}

SpectralBasis find_spectrum(const BoundaryCondition& u, double e_max, const SolverOptions& opts) {
    if (!(e_max > 0.0)) {
        throw std::invalid_argument("find_spectrum: e_max must be positive");
    }
    const Mat2 a = kI * (Mat2::identity() + u.matrix());
    const Mat2 b = Mat2::identity() - u.matrix();
    const BCClass cls = classify(u, opts.singular_tol);

    // evanescent window from the boundary-form strength
    double kappa_max = 0.0;
    if (std::holds_alternative<Regular>(cls)) {
        kappa_max = 2.0 * (hermitian_opnorm(std::get<Regular>(cls).k.matrix()) + 1.0);
    } else if (std::holds_alternative<OneSingular>(cls)) {
        const Complex u2 = std::get<OneSingular>(cls).u2;
        const double k2 = (-kI * (1.0 - u2) / (1.0 + u2)).real();
        kappa_max = 2.0 * (std::abs(k2) + 1.0);
    }

    const double p_floor = 1e-5; // |E| < 1e-10 is handled by the zero candidate
    std::vector<Mode> modes;

    // zero-energy candidate on the {1, x} pair
    {
        const SecularColumns sc = secular_columns(a, b, ModeKind::Zero, 0.0);
        const Mat2 s0{sc.c1.a, sc.c2.a, sc.c1.b, sc.c2.b};
        const Svd2 sv = svd2(s0);
        const double nscale = std::max(1.0, s0.max_abs());
        if (sv.s2 <= 1e-10 * std::max(sv.s1, nscale)) {
            if (sv.s1 <= opts.degeneracy_tol * nscale) {
                Mode m1 = build_mode(ModeKind::Zero, 0.0, sv.v1.a, sv.v1.b);
                Mode m2raw = build_mode(ModeKind::Zero, 0.0, sv.v2.a, sv.v2.b);
                const Gram g = basis_gram(ModeKind::Zero, 0.0);
                const Complex overlap =
                    coeff_bilinear(g, m1.coeff_a, m1.coeff_b, m2raw.coeff_a, m2raw.coeff_b);
                const Complex a2 = m2raw.coeff_a - overlap * m1.coeff_a;
                const Complex b2 = m2raw.coeff_b - overlap * m1.coeff_b;
                modes.push_back(m1);
                modes.push_back(build_mode(ModeKind::Zero, 0.0, a2, b2));
            } else {
                modes.push_back(build_mode(ModeKind::Zero, 0.0, sv.v2.a, sv.v2.b));
            }
        }
    }

    const auto emit = [&](ModeKind kind, double p) {
        const SecularColumns sc = secular_columns(a, b, kind, p);
        const double colscale = 1.0 + p;
        const Mat2 s{sc.c1.a / colscale, sc.c2.a / colscale, sc.c1.b / colscale,
                     sc.c2.b / colscale};
        const Svd2 sv = svd2(s);
        const double nscale = std::max(1.0, s.max_abs());
        if (sv.s1 <= opts.degeneracy_tol * nscale) {
            // two-dimensional kernel: two orthonormal modes
            Mode m1 = build_mode(kind, p, sv.v1.a, sv.v1.b);
            Mode m2raw = build_mode(kind, p, sv.v2.a, sv.v2.b);
            const Gram g = basis_gram(kind, p);
            const Complex overlap =
                coeff_bilinear(g, m1.coeff_a, m1.coeff_b, m2raw.coeff_a, m2raw.coeff_b);
            const Complex a2 = m2raw.coeff_a - overlap * m1.coeff_a;
            const Complex b2 = m2raw.coeff_b - overlap * m1.coeff_b;
            modes.push_back(m1);
            modes.push_back(build_mode(kind, p, a2, b2));
        } else {
            modes.push_back(build_mode(kind, p, sv.v2.a, sv.v2.b));
        }
    };

    for (double p : scan_roots(a, b, ModeKind::Oscillatory, p_floor, std::sqrt(e_max), opts)) {
        emit(ModeKind::Oscillatory, p);
    }
    if (kappa_max > p_floor) {
        for (double p : scan_roots(a, b, ModeKind::Evanescent, p_floor, kappa_max, opts)) {
            emit(ModeKind::Evanescent, p);
        }
    }

    std::sort(modes.begin(), modes.end(), mode_order);
    return SpectralBasis{u, e_max, std::move(modes)};
}

FormValue gamma_form(const BoundaryCondition& u, const Vec2& phi, double tol) {
    const BCClass cls = classify(u);
    if (std::holds_alternative<Regular>(cls)) {
        const Mat2& k = std::get<Regular>(cls).k.matrix();
        return FormValue{inner(phi, k * phi).real()};
    }
    if (std::holds_alternative<OneSingular>(cls)) {
        const auto& s = std::get<OneSingular>(cls);
        const double scale = std::max(1.0, phi.norm());
        if (std::abs(inner(s.xi, phi)) > tol * scale) {
            throw ConstraintViolation("gamma_form: <xi|phi> != 0 for a one-singular condition");
        }
        const Vec2 xi_perp{-std::conj(s.xi.b), std::conj(s.xi.a)};
        const double k2 = (-kI * (1.0 - s.u2) / (1.0 + s.u2)).real();
        return FormValue{k2 * std::norm(inner(xi_perp, phi))};
    }
    if (phi.norm() > tol) {
        throw ConstraintViolation("gamma_form: phi != 0 for the Dirichlet condition");
    }
    return FormValue{0.0};
}

FormValue kinetic_form(const BoundaryCondition& u, const Mode& m) {
    const Gram dg = derivative_gram(m.kind, m.param);
    const double dnorm2 = coeff_quadratic(dg, m.coeff_a, m.coeff_b);
    const FormValue g = gamma_form(u, m.boundary().phi);
    return FormValue{dnorm2 - g.value};
}

FormValue kinetic_form(const BoundaryCondition& u, const StateGrid& psi) {
    const double dnorm2 = derivative_norm_sq(psi);
    const Vec2 phi{psi.samples.front(), psi.samples.back()};
    const FormValue g = gamma_form(u, phi);
    return FormValue{dnorm2 - g.value};
}

double bc_residual(const BoundaryCondition& u, const BoundaryVector& bv) {
    const Mat2 a = kI * (Mat2::identity() + u.matrix());
    const Mat2 b = Mat2::identity() - u.matrix();
    return (a * bv.phi_prime - b * bv.phi).norm();
}

Complex mode_inner(const Mode& x, const Mode& y) {
    if (x.kind == y.kind && x.param == y.param) {
        const Gram g = basis_gram(x.kind, x.param);
        return coeff_bilinear(g, x.coeff_a, x.coeff_b, y.coeff_a, y.coeff_b);
    }
    // cross-kind / cross-parameter products via <x,y> = integral of the
    // closed forms; use Simpson on a fine grid only for this rare path
    const int m = 8192;
    Complex s{0.0, 0.0};
    const double h = 1.0 / m;
    for (int j = 0; j <= m; ++j) {
        const double w = (j == 0 || j == m) ? h / 3.0 : ((j % 2) ? 4.0 * h / 3.0 : 2.0 * h / 3.0);
        const double t = h * j;
        s += w * std::conj(mode_eval(x, t)) * mode_eval(y, t);
    }
    return s;
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

const char* kind_name(ModeKind k) {
    switch (k) {
        case ModeKind::Oscillatory: return "oscillatory";
        case ModeKind::Evanescent: return "evanescent";
        case ModeKind::Zero: return "zero";
    }
    return "?";
}

} // namespace

void write_spectrum_csv(std::ostream& out, const SpectralBasis& basis) {
    out << "index,energy,kind,re_a,im_a,re_b,im_b,bc_residual\n";
    int i = 0;
    for (const Mode& m : basis.modes) {
        const double r = bc_residual(basis.bc, m.boundary());
        out << i++ << ',' << fmt17(m.energy) << ',' << kind_name(m.kind) << ','
            << fmt17(m.coeff_a.real()) << ',' << fmt17(m.coeff_a.imag()) << ','
            << fmt17(m.coeff_b.real()) << ',' << fmt17(m.coeff_b.imag()) << ','
            << fmt17(r) << '\n';
    }
}

void write_spectrum_jsonl(std::ostream& out, const SpectralBasis& basis) {
    int i = 0;
    for (const Mode& m : basis.modes) {
        nlohmann::json row{{"index", i++},
                           {"energy", m.energy},
                           {"kind", kind_name(m.kind)},
                           {"re_a", m.coeff_a.real()},
                           {"im_a", m.coeff_a.imag()},
                           {"re_b", m.coeff_b.real()},
                           {"im_b", m.coeff_b.imag()},
                           {"bc_residual", bc_residual(basis.bc, m.boundary())}};
        out << row.dump() << '\n';
    }
}

} // namespace qbc
