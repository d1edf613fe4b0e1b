#pragma once

// Wavefunction sampled on the uniform grid x_j = j/M with composite Simpson
// quadrature weights. The grid is the interchange format between propagators
// built from different spectral bases.

#include <complex>
#include <functional>
#include <vector>

#include "qbc/mat2.hpp"

namespace qbc {

struct StateGrid {
    std::vector<Complex> samples; // psi(x_j), j = 0..M
    std::vector<double> weights;  // Simpson weights, sum to 1

    static StateGrid zeros(int segments);
    static StateGrid from_function(int segments, const std::function<Complex(double)>& f);

    int segments() const { return static_cast<int>(samples.size()) - 1; }
    double x(int j) const { return static_cast<double>(j) / segments(); }

    double norm() const;
    Complex inner(const StateGrid& other) const; // antilinear in *this
    void normalize();
};

// ||psi'||^2 by second-order finite differences under the grid quadrature.
double derivative_norm_sq(const StateGrid& psi);

} // namespace qbc
