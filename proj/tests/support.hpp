#pragma once

#include <cstdlib>
#include <random>
#include <string>

#include "bec/numerics.hpp"

namespace testing {

// Property suites draw from one generator; BEC_TEST_SEED overrides the fixed seed.
inline std::mt19937_64& rng() {
    static std::mt19937_64 gen([] {
        const char* s = std::getenv("BEC_TEST_SEED");
        return s ? std::stoull(s) : 20261016ull;
    }());
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

inline bec::CMatrix random_matrix(int r, int c) {
    bec::CMatrix m(r, c);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < c; ++j) m(i, j) = {uniform(-1, 1), uniform(-1, 1)};
    return m;
}

inline bec::CMatrix random_hermitian(int n) {
    const bec::CMatrix a = random_matrix(n, n);
    return (a + a.adjoint()) / 2.0;
}

inline double max_abs(const bec::CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace testing
