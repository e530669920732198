#pragma once

#include "lawbench/linalg.hpp"
#include "lawbench/rng.hpp"

#include <cmath>

namespace testutil {

inline lawbench::Matrix random_symmetric(std::size_t n, std::uint64_t seed) {
    lawbench::Rng rng(seed);
    lawbench::Matrix a(n, n);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j <= i; ++j) a(i, j) = a(j, i) = rng.normal();
    return a;
}

inline lawbench::Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
    lawbench::Rng rng(seed);
    lawbench::Matrix a(r, c);
    for (std::size_t i = 0; i < r * c; ++i) a.data()[i] = rng.normal();
    return a;
}

inline double max_abs_diff(const lawbench::Matrix& a, const lawbench::Matrix& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.rows() * a.cols(); ++i) m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
    return m;
}

inline double rel_err(double got, double want) {
    return std::abs(got - want) / std::max(1e-300, std::abs(want));
}

}  // namespace testutil
