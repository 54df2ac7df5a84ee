// test_support.hpp — Seeded random matrices and small helpers shared by the suites

#pragma once

#include <random>

#include "zenolind/operator_core.hpp"

namespace testsup {

using zenolind::Complex;
using zenolind::ops::Matrix;

inline Matrix random_matrix(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = Complex(gauss(rng), gauss(rng));
    return m;
}

inline Matrix random_hermitian(int n, std::mt19937_64& rng) {
    const Matrix m = random_matrix(n, rng);
    return 0.5 * (m + Matrix(m.adjoint()));
}

inline Matrix random_density(int n, std::mt19937_64& rng) {
    const Matrix m = random_matrix(n, rng);
    Matrix rho = m * m.adjoint();
    rho /= rho.trace().real();
    return rho;
}

} // namespace testsup
