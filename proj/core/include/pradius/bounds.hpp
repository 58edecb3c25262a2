#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pradius/radius.hpp"

namespace pradius {

/// How the rho_infty(W) <= 1 requirement on a weight set was established.
enum class Certificate {
    norm_bounded,     ///< each ||W_i|| <= 1 (+1e-9); implies rho_infty <= 1
    bracket_checked,  ///< jsr_bracket(weights).upper <= 1 + tol
    unchecked,        ///< no certificate; lambda_w is then just a value
};

/// Family {W_1, ..., W_N} of m x m weight matrices.
struct WeightSet {
    std::vector<Matrix> weights;
    Certificate certificate = Certificate::unchecked;

    int count() const { return static_cast<int>(weights.size()); }
    int dimension() const { return weights.empty() ? 0 : static_cast<int>(weights.front().rows()); }
};

/// Builds a WeightSet after verifying ||W_i|| <= 1 + 1e-9 for every member.
WeightSet make_norm_bounded(std::vector<Matrix> weights);

/// Builds a WeightSet after verifying jsr_bracket(weights, depth).upper <= 1 + 1e-9.
WeightSet make_bracket_checked(std::vector<Matrix> weights, int depth = 8,
                               EnumerationBudget budget = {});

WeightSet make_unchecked(std::vector<Matrix> weights);

/// A named bound value with provenance. "certified" refers to validity of
/// the bound (the weight certificate holds), never to optimality.
struct BoundReport {
    enum class Validity { certified, heuristic };

    std::string name;
    double value = 0.0;
    Validity validity = Validity::heuristic;
    std::optional<WeightSet> weight_witness;
    std::optional<std::vector<double>> scalar_witness;
    double tolerance = kSpectralTol;
    std::string notes;
    /// Optimizer reports: best value so far after each restart (non-decreasing).
    std::vector<double> restart_trace;

    bool certified() const { return validity == Validity::certified; }
};

/// Kronecker-weighted average value
///   lambda_W = rho( N^{-1} sum_i W_i (x) A_i ).
/// A certified lower bound on rho_1(family) whenever the weight
/// certificate holds.
double lambda_w(const MatrixFamily& family, const WeightSet& weights);

/// Zhou's bound ell_Z = rho( sum_i A_i (x) A_i ) / (N * jsr_upper).
/// jsr_upper must over-estimate rho_infty(family); an upper estimate keeps
/// the reported value a valid lower bound.
BoundReport zhou_bound(const MatrixFamily& family, double jsr_upper);

/// Best rho( N^{-1} sum w_i A_i ) over scalar weights w in [-1, 1]^N.
/// Exhaustive grid (w_1 >= 0 by symmetry) plus coordinate-ascent polish for
/// N <= 4; multi-start coordinate ascent above that.
BoundReport scalar_weight_bound(const MatrixFamily& family, int grid_resolution = 41,
                                std::uint64_t grid_budget = 50'000'000);

/// Family of all N^q products of length q, in lexicographic index order:
/// member (i_1, ..., i_q) is A_{i_1} A_{i_2} ... A_{i_q}.
MatrixFamily product_family(const MatrixFamily& family, int q, EnumerationBudget budget = {});

/// Product-family refinement: ell^{(q)} = (bound on family^q)^{1/q}.
/// weight_source evaluates the inner bound on the lifted family.
BoundReport refined_bound(const MatrixFamily& family, int q,
                          const std::function<BoundReport(const MatrixFamily&)>& weight_source,
                          EnumerationBudget budget = {});

/// Real 2m x 2m embedding [[Re W, -Im W], [Im W, Re W]] of a complex matrix;
/// preserves spectral radius, operator norm, and products.
Matrix complex_embed(const Matrix& real_part, const Matrix& imag_part);

}  // namespace pradius
