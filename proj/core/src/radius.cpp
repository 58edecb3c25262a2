#include "pradius/radius.hpp"

#include <cmath>
#include <limits>
#include <string>

namespace pradius {

namespace {

// N^k, or max_products + 1 on overflow past the budget.
std::uint64_t product_count(int count, int k, std::uint64_t limit) {
    std::uint64_t total = 1;
    for (int i = 0; i < k; ++i) {
        if (total > limit / static_cast<std::uint64_t>(count)) return limit + 1;
        total *= static_cast<std::uint64_t>(count);
    }
    return total;
}

void check_budget(const MatrixFamily& family, int k, const EnumerationBudget& budget,
                  const char* op) {
    const std::uint64_t total = product_count(family.count(), k, budget.max_products);
    if (total > budget.max_products) {
        throw BudgetError(std::string(op) + ": N^k = " + std::to_string(family.count()) + "^" +
                          std::to_string(k) + " exceeds product budget " +
                          std::to_string(budget.max_products));
    }
}

// Depth-first sweep over all index sequences (i_1, ..., i_k), reusing
// length-(d-1) prefixes. visit(depth, product) sees A_{i_d} ... A_{i_1} at
// every interior depth d >= 1; sequences are visited in lexicographic order
// so reductions over them are deterministic.
template <typename Visitor>
void for_each_left_product(const MatrixFamily& family, int k, Visitor&& visit) {
    const int N = family.count();
    const int n = family.dimension();
    std::vector<Matrix> stack(static_cast<std::size_t>(k) + 1);
    for (auto& m : stack) m.resize(n, n);
    stack[0] = Matrix::Identity(n, n);

    std::vector<int> idx(static_cast<std::size_t>(k), 0);
    // Fill the initial branch (all indices 0).
    for (int d = 0; d < k; ++d) {
        stack[d + 1].noalias() = family[idx[d]] * stack[d];
        visit(d + 1, stack[d + 1]);
    }
    while (true) {
        int d = k - 1;
        while (d >= 0 && idx[d] == N - 1) idx[d--] = 0;
        if (d < 0) break;
        ++idx[d];
        for (int t = d; t < k; ++t) {
            stack[t + 1].noalias() = family[idx[t]] * stack[t];
            visit(t + 1, stack[t + 1]);
        }
    }
}

}  // namespace

MatrixFamily::MatrixFamily(std::vector<Matrix> members) : members_(std::move(members)) {
    if (members_.empty()) throw std::invalid_argument("MatrixFamily: at least one member required");
    n_ = static_cast<int>(members_.front().rows());
    for (std::size_t i = 0; i < members_.size(); ++i) {
        const Matrix& m = members_[i];
        if (m.rows() != m.cols()) {
            throw std::invalid_argument("MatrixFamily: member " + std::to_string(i) +
                                        " is not square");
        }
        if (m.rows() != n_) {
            throw std::invalid_argument("MatrixFamily: member " + std::to_string(i) +
                                        " has dimension " + std::to_string(m.rows()) +
                                        ", expected " + std::to_string(n_));
        }
        if (!entries_finite(m)) {
            throw std::invalid_argument("MatrixFamily: member " + std::to_string(i) +
                                        " has non-finite entries");
        }
    }
}

double h_k(const MatrixFamily& family, int p, int k, EnumerationBudget budget) {
    if (p < 1) throw std::invalid_argument("h_k: p must be >= 1");
    if (k < 1) throw std::invalid_argument("h_k: k must be >= 1");
    check_budget(family, k, budget, "h_k");

    double sum = 0.0;
    for_each_left_product(family, k, [&](int depth, const Matrix& prod) {
        if (depth == k) sum += std::pow(operator_norm(prod), p);
    });
    const double mean = sum / std::pow(static_cast<double>(family.count()), k);
    return std::pow(mean, 1.0 / (static_cast<double>(p) * k));
}

double exact_even_p(const MatrixFamily& family, int p) {
    if (p < 2 || p % 2 != 0) throw std::invalid_argument("exact_even_p: p must be even");
    Matrix avg = kron_power(family[0], p);
    for (int i = 1; i < family.count(); ++i) avg += kron_power(family[i], p);
    avg /= static_cast<double>(family.count());
    return std::pow(spectral_radius(avg), 1.0 / p);
}

double exact_invariant_cone(const MatrixFamily& family, int p) {
    if (p < 1) throw std::invalid_argument("exact_invariant_cone: p must be >= 1");
    for (int i = 0; i < family.count(); ++i) {
        if ((family[i].array() < 0.0).any()) {
            throw std::invalid_argument(
                "exact_invariant_cone: member " + std::to_string(i) +
                " has a negative entry; positive-orthant invariance not certified");
        }
    }
    Matrix avg = kron_power(family[0], p);
    for (int i = 1; i < family.count(); ++i) avg += kron_power(family[i], p);
    avg /= static_cast<double>(family.count());
    return std::pow(spectral_radius(avg), 1.0 / p);
}

MatrixFamily lift_p_to_1(const MatrixFamily& family, int p) {
    if (p < 1) throw std::invalid_argument("lift_p_to_1: p must be >= 1");
    std::vector<Matrix> lifted;
    lifted.reserve(static_cast<std::size_t>(family.count()));
    for (int i = 0; i < family.count(); ++i) lifted.push_back(kron_power(family[i], p));
    return MatrixFamily(std::move(lifted));
}

RadiusBracket jsr_bracket(const MatrixFamily& family, int depth, EnumerationBudget budget) {
    if (depth < 1) throw std::invalid_argument("jsr_bracket: depth must be >= 1");
    check_budget(family, depth, budget, "jsr_bracket");

    double lower = 0.0;
    std::vector<double> norm_max(static_cast<std::size_t>(depth), 0.0);
    for_each_left_product(family, depth, [&](int d, const Matrix& prod) {
        lower = std::max(lower, std::pow(spectral_radius(prod), 1.0 / d));
        auto& nm = norm_max[static_cast<std::size_t>(d) - 1];
        nm = std::max(nm, operator_norm(prod));
    });
    double upper = std::numeric_limits<double>::infinity();
    for (int d = 1; d <= depth; ++d) {
        upper = std::min(upper, std::pow(norm_max[static_cast<std::size_t>(d) - 1], 1.0 / d));
    }
    // lower <= upper holds mathematically; guard the invariant against
    // last-ulp rounding when the two coincide.
    lower = std::min(lower, upper);
    return RadiusBracket{lower, upper, depth};
}

}  // namespace pradius
