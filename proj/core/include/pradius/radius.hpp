#pragma once

#include <cstdint>
#include <vector>

#include "pradius/linalg.hpp"

namespace pradius {

/// Indexed family {A_1, ..., A_N} of n x n real matrices.
class MatrixFamily {
public:
    explicit MatrixFamily(std::vector<Matrix> members);

    int dimension() const { return n_; }
    int count() const { return static_cast<int>(members_.size()); }
    const std::vector<Matrix>& members() const { return members_; }
    const Matrix& operator[](int i) const { return members_[static_cast<std::size_t>(i)]; }

private:
    std::vector<Matrix> members_;
    int n_ = 0;
};

/// Two-sided estimate of the joint spectral radius at a given product depth.
struct RadiusBracket {
    double lower = 0.0;
    double upper = 0.0;
    int depth = 1;
};

/// Enumeration cost limit for the N^k product sweeps.
struct EnumerationBudget {
    std::uint64_t max_products = 1'000'000;
};

/// Finite-depth averaged-norm upper bound on the p-radius:
/// h_k = ( N^{-k} sum ||A_{i_k} ... A_{i_1}||^p )^{1/(pk)}.
/// Exhaustive over all N^k index sequences; decreasing in k.
double h_k(const MatrixFamily& family, int p, int k, EnumerationBudget budget = {});

/// Exact p-radius for even p: rho( N^{-1} sum A_i^{(x)p} )^{1/p}.
double exact_even_p(const MatrixFamily& family, int p);

/// Exact p-radius for families leaving the positive orthant invariant
/// (every member entrywise nonnegative); same averaged-lift formula as the
/// even case but valid for all integer p >= 1. Throws std::invalid_argument
/// when a member has a negative entry: the formula is then not certified.
double exact_invariant_cone(const MatrixFamily& family, int p);

/// Kronecker lift {A_1^{(x)p}, ..., A_N^{(x)p}}; satisfies
/// rho_p(family) = rho_1(lifted)^{1/p}.
MatrixFamily lift_p_to_1(const MatrixFamily& family, int p);

/// Exhaustive joint-spectral-radius bracket over products of length <= depth:
/// lower = max rho(P)^{1/k}, upper = min over k of max ||P||^{1/k}.
RadiusBracket jsr_bracket(const MatrixFamily& family, int depth, EnumerationBudget budget = {});

}  // namespace pradius
