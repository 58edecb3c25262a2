#include "pradius/markov.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pradius/rng.hpp"

namespace pradius {

namespace {

constexpr double kRowSumTol = 1e-12;

void check_grid(const MarkovModel& model, const MarkovWeightSet& weights) {
    const int N = model.states();
    if (weights.states != N ||
        weights.weights.size() != static_cast<std::size_t>(N) * static_cast<std::size_t>(N)) {
        throw std::invalid_argument("markov weights: grid size does not match " +
                                    std::to_string(N) + " states");
    }
    const Eigen::Index m = weights.weights.front().rows();
    for (const Matrix& w : weights.weights) {
        if (w.rows() != w.cols() || w.rows() != m) {
            throw std::invalid_argument("markov weights: inconsistent weight dimensions");
        }
    }
}

}  // namespace

MarkovModel::MarkovModel(MatrixFamily family, Matrix transition)
    : family_(std::move(family)), transition_(std::move(transition)) {
    const int N = family_.count();
    if (transition_.rows() != N || transition_.cols() != N) {
        throw std::invalid_argument("MarkovModel: transition matrix must be " + std::to_string(N) +
                                    "x" + std::to_string(N));
    }
    for (int i = 0; i < N; ++i) {
        double row_sum = 0.0;
        for (int j = 0; j < N; ++j) {
            const double q = transition_(i, j);
            if (!(q >= 0.0 && q <= 1.0)) {
                throw std::invalid_argument("MarkovModel: transition entry (" + std::to_string(i) +
                                            "," + std::to_string(j) + ") = " + std::to_string(q) +
                                            " outside [0, 1]");
            }
            row_sum += q;
        }
        if (std::abs(row_sum - 1.0) > kRowSumTol) {
            throw std::invalid_argument("MarkovModel: transition row " + std::to_string(i) +
                                        " sums to " + std::to_string(row_sum));
        }
    }
}

MarkovWeightSet make_markov_norm_bounded(int states, std::vector<Matrix> weights) {
    MarkovWeightSet out{states, std::move(weights), Certificate::norm_bounded};
    for (std::size_t i = 0; i < out.weights.size(); ++i) {
        const double nrm = operator_norm(out.weights[i]);
        if (nrm > 1.0 + 1e-9) {
            throw std::invalid_argument("make_markov_norm_bounded: ||W_" + std::to_string(i) +
                                        "|| = " + std::to_string(nrm) + " exceeds 1");
        }
    }
    return out;
}

MarkovWeightSet make_markov_unchecked(int states, std::vector<Matrix> weights) {
    return MarkovWeightSet{states, std::move(weights), Certificate::unchecked};
}

double markov_h_k(const MarkovModel& model, int p, int k, EnumerationBudget budget) {
    if (p < 1) throw std::invalid_argument("markov_h_k: p must be >= 1");
    if (k < 1) throw std::invalid_argument("markov_h_k: k must be >= 1");
    const int N = model.states();
    std::uint64_t total = 1;
    for (int i = 0; i < k; ++i) {
        if (total > budget.max_products / static_cast<std::uint64_t>(N)) {
            throw BudgetError("markov_h_k: N^k exceeds product budget " +
                              std::to_string(budget.max_products));
        }
        total *= static_cast<std::uint64_t>(N);
    }

    const MatrixFamily& fam = model.family();
    const Matrix& q = model.transition();
    const int n = fam.dimension();
    std::vector<Matrix> stack(static_cast<std::size_t>(k) + 1);
    for (auto& m : stack) m.resize(n, n);
    stack[0] = Matrix::Identity(n, n);

    double sum = 0.0;
    // DFS over chains (i_1, ..., i_k); zero-probability subtrees are pruned.
    auto rec = [&](auto&& self, int depth, int prev, double chain_prob) -> void {
        if (depth == k) {
            sum += chain_prob * std::pow(operator_norm(stack[static_cast<std::size_t>(k)]), p);
            return;
        }
        for (int i = 0; i < N; ++i) {
            const double prob = (depth == 0) ? 1.0 : chain_prob * q(prev, i);
            if (prob == 0.0) continue;
            stack[static_cast<std::size_t>(depth) + 1].noalias() =
                fam[i] * stack[static_cast<std::size_t>(depth)];
            self(self, depth + 1, i, prob);
        }
    };
    rec(rec, 0, -1, 1.0);
    return std::pow(sum, 1.0 / (static_cast<double>(p) * k));
}

MatrixFamily omega_lift(const MarkovModel& model, int p) {
    if (p < 1) throw std::invalid_argument("omega_lift: p must be >= 1");
    const int N = model.states();
    const int n = model.family().dimension();
    const long long dim = static_cast<long long>(N) * n;
    if (dim > dimension_cap()) {
        throw DimensionCapError("omega_lift: lift dimension " + std::to_string(dim) +
                                " exceeds dimension cap " + std::to_string(dimension_cap()));
    }
    const double scale = std::pow(static_cast<double>(N), 2.0 / p);
    std::vector<Matrix> lifted;
    lifted.reserve(static_cast<std::size_t>(N) * static_cast<std::size_t>(N));
    for (int i = 0; i < N; ++i) {
        for (int j = 0; j < N; ++j) {
            Matrix unit = Matrix::Zero(N, N);
            unit(j, i) = 1.0;  // e_j e_i^T
            const double coeff = scale * std::pow(model.transition()(i, j), 1.0 / p);
            lifted.push_back(coeff * kron(model.family()[i], unit));
        }
    }
    return MatrixFamily(std::move(lifted));
}

Matrix markov_block_matrix(const MarkovModel& model, const MarkovWeightSet& weights) {
    check_grid(model, weights);
    const int N = model.states();
    std::vector<std::vector<Matrix>> blocks(static_cast<std::size_t>(N));
    for (int j = 0; j < N; ++j) {
        auto& row = blocks[static_cast<std::size_t>(j)];
        row.reserve(static_cast<std::size_t>(N));
        for (int i = 0; i < N; ++i) {
            row.push_back(model.transition()(i, j) * kron(weights.at(i, j), model.family()[i]));
        }
    }
    return block_matrix(blocks);
}

double markov_lambda(const MarkovModel& model, const MarkovWeightSet& weights) {
    return spectral_radius(markov_block_matrix(model, weights));
}

BoundReport markov_optimize(const MarkovModel& model, int m, const OptimizerConfig& config) {
    if (m < 1) throw std::invalid_argument("markov_optimize: m must be >= 1");
    const int N = model.states();
    const long long dim = static_cast<long long>(m) * model.family().dimension() * N;
    if (dim > dimension_cap()) {
        throw DimensionCapError("markov_optimize: block dimension " + std::to_string(dim) +
                                " exceeds dimension cap " + std::to_string(dimension_cap()));
    }

    auto objective = [&](const std::vector<Matrix>& weights) {
        MarkovWeightSet grid{N, weights, Certificate::unchecked};
        return spectral_radius(markov_block_matrix(model, grid));
    };

    std::vector<CayleyPoint> starts;
    starts.push_back(CayleyPoint::identity(N * N, m));

    // Scalar-grid seed: coarse sweep over [-1, 1]^{N^2}, embedded diagonally
    // for m > 1. Doubles as the brute-force fallback for m = 1.
    std::vector<double> best_scalars(static_cast<std::size_t>(N) * static_cast<std::size_t>(N), 1.0);
    {
        const int dims = N * N;
        int res = 2;
        for (int candidate : {21, 11, 7, 5, 3}) {
            double points = std::pow(static_cast<double>(candidate), dims);
            if (points <= 250'000.0) {
                res = candidate;
                break;
            }
        }
        std::vector<double> w(static_cast<std::size_t>(dims), -1.0);
        std::vector<Matrix> mats(static_cast<std::size_t>(dims));
        double best = -1.0;
        auto rec = [&](auto&& self, int level) -> void {
            // w[0] >= 0 by the global sign symmetry of the block matrix.
            const int start_j = (level == 0) ? (res - 1) / 2 : 0;
            for (int j = start_j; j < res; ++j) {
                w[static_cast<std::size_t>(level)] = -1.0 + 2.0 * j / (res - 1);
                if (level == dims - 1) {
                    for (int t = 0; t < dims; ++t) {
                        Matrix one(1, 1);
                        one(0, 0) = w[static_cast<std::size_t>(t)];
                        mats[static_cast<std::size_t>(t)] = one;
                    }
                    MarkovWeightSet grid{N, mats, Certificate::unchecked};
                    const double v = spectral_radius(markov_block_matrix(model, grid));
                    if (v > best) {
                        best = v;
                        best_scalars = w;
                    }
                } else {
                    self(self, level + 1);
                }
            }
        };
        rec(rec, 0);

        CayleyPoint embed = CayleyPoint::identity(N * N, m);
        for (int t = 0; t < dims; ++t) {
            std::fill(embed.scale_diag[static_cast<std::size_t>(t)].begin(),
                      embed.scale_diag[static_cast<std::size_t>(t)].end(),
                      best_scalars[static_cast<std::size_t>(t)]);
        }
        starts.push_back(std::move(embed));
    }

    double best = -1.0;
    CayleyPoint best_point = starts.front();
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(config.restarts));
    for (int r = 0; r < config.restarts; ++r) {
        const std::uint64_t sub_seed = config.rng_seed ^ static_cast<std::uint64_t>(r);
        CayleyPoint start = (static_cast<std::size_t>(r) < starts.size())
                                ? starts[static_cast<std::size_t>(r)]
                                : detail::random_point(N * N, m, mix_seed(sub_seed, 1));
        detail::AscentResult res = detail::ascend(objective, std::move(start), config, sub_seed);
        if (res.value > best) {
            best = res.value;
            best_point = std::move(res.point);
        }
        trace.push_back(best);
    }

    const WeightSet flat = materialize(best_point);
    BoundReport report;
    report.name = "markov_optimized(m=" + std::to_string(m) + ")";
    report.value = best;
    report.validity = BoundReport::Validity::certified;
    report.weight_witness = flat;
    report.restart_trace = std::move(trace);
    report.notes = "local search over O_m per grid entry; value certified, optimality heuristic; "
                   "restarts=" + std::to_string(config.restarts) +
                   " seed=" + std::to_string(config.rng_seed);
    return report;
}

namespace {

void classify(VerdictRecord& verdict, double min_upper, int best_lower_idx) {
    if (best_lower_idx >= 0) {
        const BoundReport& lower = verdict.evidence[static_cast<std::size_t>(best_lower_idx)];
        if (lower.certified() && lower.value > 1.0) {
            verdict.status = Stability::unstable;
            verdict.witness_name = lower.name;
            verdict.witness_value = lower.value;
            return;
        }
    }
    verdict.status = Stability::undetermined;
    verdict.witness_name = "bounds straddle 1";
    verdict.witness_value = min_upper;
}

}  // namespace

VerdictRecord stability_verdict(const MatrixFamily& family, int p, const EffortConfig& effort) {
    VerdictRecord verdict;

    // Exact routes decide outright when they apply.
    bool nonneg = true;
    for (int i = 0; i < family.count() && nonneg; ++i) {
        nonneg = !(family[i].array() < 0.0).any();
    }
    try {
        if (p % 2 == 0 || nonneg) {
            const double exact =
                (p % 2 == 0) ? exact_even_p(family, p) : exact_invariant_cone(family, p);
            BoundReport rep;
            rep.name = (p % 2 == 0) ? "exact_even_p" : "exact_invariant_cone";
            rep.value = exact;
            rep.validity = BoundReport::Validity::certified;
            verdict.evidence.push_back(rep);
            if (std::abs(exact - 1.0) > 1e-9) {
                verdict.status = exact < 1.0 ? Stability::stable : Stability::unstable;
                verdict.witness_name = rep.name;
                verdict.witness_value = exact;
                return verdict;
            }
        }
    } catch (const std::exception&) {
        // Exact formula unavailable at this size; fall through to bounds.
    }

    double min_upper = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= effort.k_max; ++k) {
        double upper;
        try {
            upper = h_k(family, p, k, effort.budget);
        } catch (const BudgetError&) {
            break;
        }
        min_upper = std::min(min_upper, upper);
        BoundReport rep;
        rep.name = "h_" + std::to_string(k);
        rep.value = upper;
        rep.validity = BoundReport::Validity::certified;
        verdict.evidence.push_back(rep);
        if (upper < 1.0) {
            verdict.status = Stability::stable;
            verdict.witness_name = rep.name;
            verdict.witness_value = upper;
            return verdict;
        }
    }

    // Certified lower bounds; for p > 1 they act on the Kronecker lift and
    // come back through the 1/p root.
    int best_lower_idx = -1;
    auto consider = [&](BoundReport rep) {
        verdict.evidence.push_back(std::move(rep));
        const BoundReport& stored = verdict.evidence.back();
        if (stored.certified() &&
            (best_lower_idx < 0 ||
             stored.value > verdict.evidence[static_cast<std::size_t>(best_lower_idx)].value)) {
            best_lower_idx = static_cast<int>(verdict.evidence.size()) - 1;
        }
    };

    try {
        const MatrixFamily* target = &family;
        MatrixFamily lifted = family;
        if (p > 1) {
            lifted = lift_p_to_1(family, p);
            target = &lifted;
        }
        auto root = [&](BoundReport rep) {
            if (p > 1) {
                rep.value = std::pow(rep.value, 1.0 / p);
                rep.notes += "; value is the 1/p root of the lifted-family bound";
            }
            return rep;
        };

        try {
            const RadiusBracket bracket = jsr_bracket(*target, effort.bracket_depth, effort.budget);
            consider(root(zhou_bound(*target, bracket.upper)));
        } catch (const std::exception&) {
        }
        try {
            consider(root(scalar_weight_bound(*target, effort.grid_resolution)));
        } catch (const std::exception&) {
        }
        const bool decided =
            best_lower_idx >= 0 &&
            verdict.evidence[static_cast<std::size_t>(best_lower_idx)].value > 1.0;
        if (effort.run_optimizer && !decided) {
            try {
                consider(root(optimize(*target, effort.m, effort.optimizer)));
            } catch (const std::exception&) {
            }
        }
    } catch (const std::exception&) {
        // Lift infeasible; verdict rests on the upper bounds alone.
    }

    classify(verdict, min_upper, best_lower_idx);
    return verdict;
}

VerdictRecord stability_verdict(const MarkovModel& model, int p, const EffortConfig& effort) {
    VerdictRecord verdict;

    double min_upper = std::numeric_limits<double>::infinity();
    for (int k = 1; k <= effort.k_max; ++k) {
        double upper;
        try {
            upper = markov_h_k(model, p, k, effort.budget);
        } catch (const BudgetError&) {
            break;
        }
        min_upper = std::min(min_upper, upper);
        BoundReport rep;
        rep.name = "markov_h_" + std::to_string(k);
        rep.value = upper;
        rep.validity = BoundReport::Validity::certified;
        verdict.evidence.push_back(rep);
        if (upper < 1.0) {
            verdict.status = Stability::stable;
            verdict.witness_name = rep.name;
            verdict.witness_value = upper;
            return verdict;
        }
    }

    int best_lower_idx = -1;
    auto consider = [&](BoundReport rep) {
        verdict.evidence.push_back(std::move(rep));
        const BoundReport& stored = verdict.evidence.back();
        if (stored.certified() &&
            (best_lower_idx < 0 ||
             stored.value > verdict.evidence[static_cast<std::size_t>(best_lower_idx)].value)) {
            best_lower_idx = static_cast<int>(verdict.evidence.size()) - 1;
        }
    };

    if (effort.run_optimizer) {
        if (p == 1) {
            try {
                consider(markov_optimize(model, effort.m, effort.optimizer));
            } catch (const std::exception&) {
            }
        } else {
            // rho_p(M, Q) = rho_p(omega lift); bound the lift through p -> 1.
            try {
                const MatrixFamily lifted = lift_p_to_1(omega_lift(model, p), p);
                BoundReport rep = optimize(lifted, effort.m, effort.optimizer);
                rep.value = std::pow(rep.value, 1.0 / p);
                rep.notes += "; value is the 1/p root of the omega-lift bound";
                consider(std::move(rep));
            } catch (const std::exception&) {
            }
        }
    }

    classify(verdict, min_upper, best_lower_idx);
    return verdict;
}

}  // namespace pradius
