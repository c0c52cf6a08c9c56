#pragma once

#include <Eigen/Dense>
#include <complex>
#include <random>

namespace qlatt::testing {

inline Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64 &rng, double scale = 1.0) {
    std::normal_distribution<double> dist(0.0, 1.0);
    Eigen::MatrixXcd a(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            a(i, j) = std::complex<double>(dist(rng), dist(rng));
    return 0.5 * scale * (a + a.adjoint()).eval();
}

} // namespace qlatt::testing
