#pragma once

// Spectral propagators and the alternating (Trotter) evolution
//
//     (e^{-i t T_U / N} e^{-i t T_V / N})^N  ->  e^{-i 2 t T_{U*V}}.
//
// The grid is the interchange representation: one propagator application is
// project -> phase -> reconstruct in the basis of its own boundary
// condition. Projection silently enforces the target condition's
// constraints; that is the mechanism of the limit, and the discarded
// truncation residual is measured and reported rather than hidden.

#include <iosfwd>
#include <vector>

#include "qbc/bc_algebra.hpp"
#include "qbc/grid.hpp"
#include "qbc/spectral.hpp"

namespace qbc {

inline constexpr int kDefaultGridSize = 1024;
// 64 oscillatory modes: E <= (64 pi)^2
inline constexpr double kDefaultCutoffEnergy = 40423.665859240…;

struct ProjectionResult {
    std::vector<Complex> coeffs;
    double residual = 0.0; // L2 norm of the state component outside the basis span
};

// Sampled spectral basis bound to a fixed grid; the workhorse behind
// propagate()/trotter_evolve(). Construction checks the sampling criterion
// grid_size >= 8 sqrt(cutoff_energy) / pi (8 points per shortest wavelength)
// and throws ResolutionMismatch when violated.
class Propagator {
public:
    Propagator(SpectralBasis basis, int grid_segments);

    ProjectionResult project(const StateGrid& psi) const;
    StateGrid reconstruct(const std::vector<Complex>& coeffs) const;
    StateGrid apply(const StateGrid& psi, double tau) const;

    const SpectralBasis& basis() const { return basis_; }
    int grid_segments() const { return segments_; }

private:
    SpectralBasis basis_;
    int segments_;
    std::vector<std::vector<Complex>> samples_; // mode-major values on the grid
};

// Spec-level conveniences (each builds a Propagator internally).
ProjectionResult project(const StateGrid& psi, const SpectralBasis& basis);
StateGrid propagate(const SpectralBasis& basis, const StateGrid& psi, double tau);

struct TrotterConfig {
    BoundaryCondition u, v;
    double t = 0.05; // the half time: total duration is 2t
    int n_steps = 16;
    double cutoff_energy = kDefaultCutoffEnergy;
    int grid_size = kDefaultGridSize;
};

// N alternating pairs, V first within each pair (the rightmost factor acts
// first), each factor evolving for t/N.
StateGrid trotter_evolve(const TrotterConfig& cfg, const StateGrid& psi0);

// e^{-i 2 t T_W} psi0 with W = star(u, v).
StateGrid limit_evolve(const BoundaryCondition& u, const BoundaryCondition& v, double t,
                       const StateGrid& psi0, double cutoff_energy = kDefaultCutoffEnergy);

struct TrotterRow {
    int n_steps = 0;
    double l2_error = 0.0;            // || trotter(2t) - limit(2t) ||
    double time_averaged_error = 0.0; // mean over 16 equispaced times in (0, t]
    double unitarity_defect = 0.0;    // | ||psi_N|| - ||psi_0|| |
    double boundary_mag_0 = 0.0;      // |psi_N(0)|
    double boundary_mag_1 = 0.0;      // |psi_N(1)|
};

struct TrotterReport {
    std::vector<TrotterRow> per_n;     // ascending N
    double time_averaged_error = 0.0;  // value at the largest N
};

struct SweepConfig {
    BoundaryCondition u, v;
    double t = 0.05;
    std::vector<int> n_list;
    double cutoff_energy = kDefaultCutoffEnergy;
    int n_threads = 0; // 0: hardware concurrency
};

// Runs the alternating evolution for every N in n_list (ascending) against
// the composed limit dynamics. Rows for different N are computed
// independently (optionally in parallel) and merged by ascending N, so the
// output is deterministic regardless of scheduling.
TrotterReport trotter_error_sweep(const SweepConfig& cfg, const StateGrid& psi0);

// Independent finite-difference oracle: implicit midpoint (Cayley) stepping
// of the grid Laplacian, with the boundary condition imposed on each new
// state through one-sided second-order stencils for the endpoint
// derivatives. Supports regular U and diagonal singular U; throws
// UnsupportedBoundaryCondition for nondiagonal singular U (the stencil rows
// cannot carry an endpoint-mixing constraint together with a Dirichlet one).
StateGrid cranknicolson_oracle(const BoundaryCondition& u, double tau, int steps,
                               const StateGrid& psi0);

// CSV columns: N,l2_error,time_averaged_error,unitarity_defect,
// boundary_mag_0,boundary_mag_1 (17 significant digits; JSON-lines variant
// mirrors the keys).
void write_sweep_csv(std::ostream& out, const TrotterReport& report);
void write_sweep_jsonl(std::ostream& out, const TrotterReport& report);

} // namespace qbc
