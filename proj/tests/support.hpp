#pragma once

#include <vector>

#include "pradius/radius.hpp"
#include "pradius/rng.hpp"

namespace testsupport {

using pradius::Matrix;
using pradius::MatrixFamily;
using pradius::SplitMix64;

inline Matrix rotation90() {
    Matrix r(2, 2);
    r << 0.0, -1.0, 1.0, 0.0;
    return r;
}

inline Matrix scalar1x1(double v) {
    Matrix m(1, 1);
    m(0, 0) = v;
    return m;
}

inline Matrix random_matrix(int n, SplitMix64& rng, double scale = 1.0) {
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) m(r, c) = rng.next_range(-scale, scale);
    }
    return m;
}

inline Matrix random_nonneg_matrix(int n, SplitMix64& rng, double scale = 1.0) {
    Matrix m(n, n);
    for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) m(r, c) = rng.next_range(0.0, scale);
    }
    return m;
}

inline MatrixFamily random_family(int count, int n, SplitMix64& rng, double scale = 1.0) {
    std::vector<Matrix> members;
    members.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) members.push_back(random_matrix(n, rng, scale));
    return MatrixFamily(std::move(members));
}

inline MatrixFamily random_nonneg_family(int count, int n, SplitMix64& rng, double scale = 1.0) {
    std::vector<Matrix> members;
    members.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) members.push_back(random_nonneg_matrix(n, rng, scale));
    return MatrixFamily(std::move(members));
}

// Example 3: two random-looking 2x2 matrices with rho_1 > 1.
inline MatrixFamily example3_family() {
    Matrix a1(2, 2), a2(2, 2);
    a1 << -0.87, -0.77, 1.17, -1.09;
    a2 << 0.14, 0.40, 0.89, -0.73;
    return MatrixFamily({a1, a2});
}

// Reference weights for Example 3: a rotation and a reflection, both
// orthogonal, reproducing the reference value lambda = 1.07. (The
// non-orthogonal sign variant of W_2 gives only 0.96 and lies outside the
// diag-times-orthogonal class.)
inline std::vector<Matrix> example3_weights() {
    Matrix w1(2, 2), w2(2, 2);
    w1 << -0.71, -0.70, 0.70, -0.71;
    w2 << 0.85, 0.53, 0.53, -0.85;
    return {w1, w2};
}

// Example 4: Markov jump system data.
inline MatrixFamily example4_family() {
    Matrix a1(2, 2), a2(2, 2);
    a1 << 0.77, 0.80, -0.60, 0.87;
    a2 << -0.77, 0.83, -0.70, -0.70;
    return MatrixFamily({a1, a2});
}

inline Matrix example4_transition() {
    Matrix q(2, 2);
    q << 0.70, 0.30, 0.43, 0.57;
    return q;
}

// Reference 2x2 weight grid for Example 4: all four entries rotations,
// reproducing the reference value rho(A_W) = 1.067.
inline std::vector<Matrix> example4_weights() {
    Matrix w11(2, 2), w12(2, 2), w21(2, 2), w22(2, 2);
    w11 << -0.412, -0.911, 0.911, -0.412;
    w12 << 0.839, -0.544, 0.544, 0.839;
    w21 << -0.204, -0.979, 0.979, -0.204;
    w22 << 0.937, -0.349, 0.349, 0.937;
    return {w11, w12, w21, w22};
}

}  // namespace testsupport
