#include "qbc/grid.hpp"

#include <cmath>
#include <stdexcept>

namespace qbc {

namespace {

std::vector<double> simpson_weights(int m) {
    if (m < 2 || m % 2 != 0) {
        throw std::invalid_argument("StateGrid: grid size must be even and >= 2");
    }
    const double h = 1.0 / m;
    std::vector<double> w(m + 1, 0.0);
    w[0] = w[m] = h / 3.0;
    for (int j = 1; j < m; ++j) {
        w[j] = (j % 2 == 1) ? 4.0 * h / 3.0 : 2.0 * h / 3.0;
    }
    return w;
}

} // namespace

StateGrid StateGrid::zeros(int segments) {
    StateGrid g;
    g.samples.assign(segments + 1, Complex{0.0, 0.0});
    g.weights = simpson_weights(segments);
    return g;
}

StateGrid StateGrid::from_function(int segments, const std::function<Complex(double)>& f) {
    StateGrid g = zeros(segments);
    for (int j = 0; j <= segments; ++j) {
        g.samples[j] = f(g.x(j));
    }
    return g;
}

double StateGrid::norm() const {
    double s = 0.0;
    for (std::size_t j = 0; j < samples.size(); ++j) {
        s += weights[j] * std::norm(samples[j]);
    }
    return std::sqrt(s);
}

Complex StateGrid::inner(const StateGrid& other) const {
    if (other.samples.size() != samples.size()) {
        throw std::invalid_argument("StateGrid::inner: size mismatch");
    }
    Complex s{0.0, 0.0};
    for (std::size_t j = 0; j < samples.size(); ++j) {
        s += weights[j] * std::conj(samples[j]) * other.samples[j];
    }
    return s;
}

void StateGrid::normalize() {
    const double n = norm();
    if (n == 0.0) {
        throw std::invalid_argument("StateGrid::normalize: zero state");
    }
    for (auto& v : samples) v /= n;
}

double derivative_norm_sq(const StateGrid& psi) {
    const int m = psi.segments();
    const double h = 1.0 / m;
    std::vector<Complex> d(m + 1);
    d[0] = (-3.0 * psi.samples[0] + 4.0 * psi.samples[1] - psi.samples[2]) / (2.0 * h);
    d[m] = (3.0 * psi.samples[m] - 4.0 * psi.samples[m - 1] + psi.samples[m - 2]) / (2.0 * h);
    for (int j = 1; j < m; ++j) {
        d[j] = (psi.samples[j + 1] - psi.samples[j - 1]) / (2.0 * h);
    }
    double s = 0.0;
    for (int j = 0; j <= m; ++j) {
        s += psi.weights[j] * std::norm(d[j]);
    }
    return s;
}

} // namespace qbc
