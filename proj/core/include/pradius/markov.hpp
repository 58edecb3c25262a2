#pragma once

#include "pradius/optimizer.hpp"

namespace pradius {

/// Matrix family plus a row-stochastic transition matrix Q.
class MarkovModel {
public:
    MarkovModel(MatrixFamily family, Matrix transition);

    const MatrixFamily& family() const { return family_; }
    const Matrix& transition() const { return transition_; }
    int states() const { return family_.count(); }

private:
    MatrixFamily family_;
    Matrix transition_;
};

/// N x N grid of m x m weights W_ij, stored row-major by (i, j).
struct MarkovWeightSet {
    int states = 0;
    std::vector<Matrix> weights;  ///< size states^2; entry (i, j) at i * states + j
    Certificate certificate = Certificate::unchecked;

    const Matrix& at(int i, int j) const {
        return weights[static_cast<std::size_t>(i) * static_cast<std::size_t>(states) +
                       static_cast<std::size_t>(j)];
    }
    int dimension() const { return weights.empty() ? 0 : static_cast<int>(weights.front().rows()); }
};

MarkovWeightSet make_markov_norm_bounded(int states, std::vector<Matrix> weights);
MarkovWeightSet make_markov_unchecked(int states, std::vector<Matrix> weights);

/// Chain-weighted averaged-norm upper bound
///   h_k(M, Q) = ( sum q_{i1,i2} ... q_{i(k-1),ik} ||A_{ik} ... A_{i1}||^p )^{1/(pk)};
/// decreasing in k with limit rho_p(M, Q). Chains of zero probability are
/// pruned.
double markov_h_k(const MarkovModel& model, int p, int k, EnumerationBudget budget = {});

/// Omega-lift to an i.i.d. family of N^2 matrices
///   B_ij = N^{2/p} q_ij^{1/p} A_i (x) (e_j e_i^T)
/// in lexicographic (i, j) order; rho_p(model) = rho_p(lifted family).
MatrixFamily omega_lift(const MarkovModel& model, int p);

/// The N x N block matrix A_Wbar with block row j, block column i holding
/// q_ij W_ij (x) A_i. Exposed separately because the orientation is easy to
/// get wrong and silent to get wrong.
Matrix markov_block_matrix(const MarkovModel& model, const MarkovWeightSet& weights);

/// rho(A_Wbar); certified lower bound on rho_1(model) when the weight
/// certificate holds.
double markov_lambda(const MarkovModel& model, const MarkovWeightSet& weights);

/// Local maximization of rho(A_Wbar) over N^2 independently parametrized
/// O_m weights; for m = 1 a coarse scalar grid seeds the ascent.
BoundReport markov_optimize(const MarkovModel& model, int m, const OptimizerConfig& config = {});

enum class Stability { stable, unstable, undetermined };

/// Budget knobs for stability_verdict.
struct EffortConfig {
    int k_max = 8;
    int bracket_depth = 8;
    int m = 2;
    int grid_resolution = 41;
    bool run_optimizer = true;
    OptimizerConfig optimizer{};
    EnumerationBudget budget{};
};

struct VerdictRecord {
    Stability status = Stability::undetermined;
    std::string witness_name;
    double witness_value = 0.0;
    std::vector<BoundReport> evidence;
};

/// p-th mean stability verdict: stable when some upper bound drops below 1,
/// unstable when some certified lower bound exceeds 1, undetermined when
/// the computed bounds straddle 1.
VerdictRecord stability_verdict(const MatrixFamily& family, int p, const EffortConfig& effort = {});
VerdictRecord stability_verdict(const MarkovModel& model, int p, const EffortConfig& effort = {});

}  // namespace pradius
