#pragma once

#include <cstdint>
#include <functional>

#include "pradius/bounds.hpp"

namespace pradius {

/// Parameter-space point for one weight set in the class O_m: each weight is
/// diag(scale) * diag(sign) * (I - S)(I + S)^{-1} with S skew-symmetric, so
/// ||W_i|| <= 1 holds at every iterate by construction.
struct CayleyPoint {
    int m = 1;
    std::vector<std::vector<double>> skew;        ///< per weight: m(m-1)/2 strict-upper-triangle entries
    std::vector<std::vector<double>> scale_diag;  ///< per weight: m entries in [-1, 1]
    std::vector<std::vector<int>> sign_diag;      ///< per weight: m entries in {-1, +1}

    int count() const { return static_cast<int>(skew.size()); }

    /// All-identity point (skew 0, signs +1, scales 1) for `count` weights.
    static CayleyPoint identity(int count, int m);
};

struct OptimizerConfig {
    int restarts = 32;
    int samples_per_iter = 0;  ///< 0 resolves to 2 * (continuous parameter count)
    double step_init = 0.1;
    double step_shrink = 0.5;
    int max_iters = 200;
    double stall_tol = 1e-7;
    std::uint64_t rng_seed = 0;
};

/// Realizes the weight set described by a CayleyPoint. The certificate is
/// norm_bounded by construction; each orthogonal factor satisfies
/// ||L^T L - I|| <= 1e-9.
WeightSet materialize(const CayleyPoint& point);

/// Local maximization of lambda_W over the class O_m via sampled-gradient
/// ascent with deterministic restarts (identity, scalar-embed and
/// normalized-family seeds, then random). `extra_seeds` are evaluated
/// directly and folded into the final maximum; their certificates are kept
/// as given.
BoundReport optimize(const MatrixFamily& family, int m, const OptimizerConfig& config = {},
                     const std::vector<WeightSet>& extra_seeds = {});

namespace detail {

/// Objective for the shared ascent core: maps materialized weights to the
/// value being maximized (lambda_W for the i.i.d. case, rho(A_Wbar) for the
/// Markovian one).
using WeightObjective = std::function<double(const std::vector<Matrix>&)>;

struct AscentResult {
    CayleyPoint point;
    double value = 0.0;
};

/// One restart of sampled-gradient ascent + discrete sign/scale toggling
/// from `start`. Deterministic given sub_seed.
AscentResult ascend(const WeightObjective& objective, CayleyPoint start,
                    const OptimizerConfig& config, std::uint64_t sub_seed);

/// Random CayleyPoint: skew ~ U[-2, 2], signs uniform, scales ~ U[-1, 1].
CayleyPoint random_point(int count, int m, std::uint64_t seed);

/// Projects an arbitrary square matrix onto the class O_m: orthogonal polar
/// factor plus the clamped diagonal of the symmetric factor, refit through
/// the Cayley map. Heuristic start point, not an exact representation.
CayleyPoint project_to_cayley(const std::vector<Matrix>& weights);

}  // namespace detail

}  // namespace pradius
