// pradius: bounds, exact values, stability verdicts and Monte Carlo checks
// for the L^p-norm joint spectral radius of a matrix family, in both the
// i.i.d. and Markov switching settings.
//
// Exit codes: verdict reports 0 = stable, 1 = unstable, 2 = undetermined;
// data/domain errors return 65, internal errors 70; CLI11 usage errors
// return its own codes (>= 100).

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pradius/problem.hpp"
#include "pradius/simulate.hpp"

namespace {

using namespace pradius;
using nlohmann::json;

constexpr int kExitData = 65;
constexpr int kExitInternal = 70;

json weight_set_json(const WeightSet& w) {
    json weights = json::array();
    for (const Matrix& m : w.weights) {
        json rows = json::array();
        for (Eigen::Index r = 0; r < m.rows(); ++r) {
            json row = json::array();
            for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
            rows.push_back(std::move(row));
        }
        weights.push_back(std::move(rows));
    }
    const char* cert = w.certificate == Certificate::norm_bounded     ? "norm_bounded"
                       : w.certificate == Certificate::bracket_checked ? "bracket_checked"
                                                                       : "unchecked";
    return json{{"weights", std::move(weights)}, {"certificate", cert}};
}

json report_json(const BoundReport& rep) {
    json out{{"name", rep.name},
             {"value", rep.value},
             {"certified", rep.certified()},
             {"tolerance", rep.tolerance}};
    if (!rep.notes.empty()) out["notes"] = rep.notes;
    json witness = json::object();
    if (rep.scalar_witness) witness["scalars"] = *rep.scalar_witness;
    if (rep.weight_witness) witness["weight_set"] = weight_set_json(*rep.weight_witness);
    if (!witness.empty()) out["witness"] = std::move(witness);
    return out;
}

json error_json(const std::string& name, const std::string& message) {
    return json{{"name", name}, {"error", message}};
}

void print_report_line(const BoundReport& rep) {
    std::cout << "  " << rep.name << " = " << rep.value
              << (rep.certified() ? "  [certified lower bound]" : "  [heuristic]") << "\n";
    if (rep.scalar_witness) {
        std::cout << "    weights:";
        for (double v : *rep.scalar_witness) std::cout << " " << v;
        std::cout << "\n";
    }
    if (!rep.notes.empty()) std::cout << "    " << rep.notes << "\n";
}

struct CommonFlags {
    std::string file;
    int p_override = 0;
    bool as_json = false;
    std::uint64_t budget = 1'000'000;
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("file", flags.file, "problem file (JSON)")->required();
    cmd->add_option("--p", flags.p_override, "moment order (overrides the file's p)");
    cmd->add_flag("--json", flags.as_json, "machine-readable JSON output");
    cmd->add_option("--budget", flags.budget, "product enumeration budget (default 1e6)");
}

ProblemFile load(const CommonFlags& flags) {
    ProblemFile problem = load_problem(flags.file);
    if (flags.p_override > 0) problem.p = flags.p_override;
    return problem;
}

int run_upper(const CommonFlags& flags, int k_max) {
    const ProblemFile problem = load(flags);
    const EnumerationBudget budget{flags.budget};
    json reports = json::array();
    bool divisor_violation = false;

    std::vector<double> values;
    for (int k = 1; k <= k_max; ++k) {
        double value;
        try {
            value = problem.is_markov() ? markov_h_k(problem.model(), problem.p, k, budget)
                                        : h_k(problem.family(), problem.p, k, budget);
        } catch (const BudgetError& e) {
            if (flags.as_json) {
                reports.push_back(error_json("h_" + std::to_string(k), e.what()));
            } else {
                std::cout << "  h_" << k << ": " << e.what() << "\n";
            }
            break;
        }
        values.push_back(value);
        // h_{2k} <= h_k always holds (submultiplicativity); violations
        // indicate an internal error.
        if (k % 2 == 0 && value > values[static_cast<std::size_t>(k / 2) - 1] + 1e-9) {
            divisor_violation = true;
        }
        if (flags.as_json) {
            reports.push_back(json{{"name", "h_" + std::to_string(k)}, {"value", value}});
        }
    }

    if (flags.as_json) {
        std::cout << json{{"kind", problem.is_markov() ? "markov_upper" : "upper"},
                          {"p", problem.p},
                          {"bounds", reports}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << (problem.is_markov() ? "Markov upper bounds h_k(M, Q)" : "Upper bounds h_k")
                  << " for p = " << problem.p << ":\n";
        for (std::size_t i = 0; i < values.size(); ++i) {
            std::cout << "  h_" << (i + 1) << " = " << values[i] << "\n";
        }
    }
    if (divisor_violation) {
        std::cerr << "internal error: divisor monotonicity h_{2k} <= h_k violated\n";
        return kExitInternal;
    }
    return 0;
}

int run_lower(const CommonFlags& flags, bool zhou, bool scalar, bool optimize_flag, int m, int q,
              std::uint64_t seed, int depth, int grid, int restarts) {
    const ProblemFile problem = load(flags);
    const EnumerationBudget budget{flags.budget};
    const bool all = !zhou && !scalar && !optimize_flag;

    OptimizerConfig config;
    config.rng_seed = seed;
    if (restarts > 0) config.restarts = restarts;

    json reports = json::array();
    std::vector<BoundReport> printed;
    auto emit = [&](const BoundReport& rep) {
        printed.push_back(rep);
        reports.push_back(report_json(rep));
    };
    auto emit_error = [&](const std::string& name, const std::exception& e) {
        reports.push_back(error_json(name, e.what()));
        if (!flags.as_json) std::cout << "  " << name << ": error: " << e.what() << "\n";
    };

    if (problem.is_markov()) {
        const MarkovModel model = problem.model();
        if (problem.p != 1) {
            std::cerr << "lower bounds for Markov problems are computed at p = 1\n";
        }
        if (zhou) {
            std::cerr << "the Zhou bound applies to i.i.d. problems; "
                         "running the Markov weight bounds instead\n";
        }
        if (all || optimize_flag || scalar || zhou) {
            // m = 1 doubles as the scalar-weight route in the Markov case.
            try {
                emit(markov_optimize(model, 1, config));
            } catch (const std::exception& e) {
                emit_error("markov_optimized(m=1)", e);
            }
        }
        if ((all || optimize_flag) && m > 1) {
            try {
                emit(markov_optimize(model, m, config));
            } catch (const std::exception& e) {
                emit_error("markov_optimized(m=" + std::to_string(m) + ")", e);
            }
        }
    } else {
        MatrixFamily target = problem.family();
        const bool lifted = problem.p > 1;
        std::string suffix;
        if (lifted) {
            target = lift_p_to_1(target, problem.p);
            suffix = "; value is the 1/p root of the lifted-family bound";
        }
        auto root = [&](BoundReport rep) {
            if (lifted) {
                rep.value = std::pow(rep.value, 1.0 / problem.p);
                rep.notes += suffix;
            }
            return rep;
        };

        if (all || zhou) {
            try {
                const RadiusBracket bracket = jsr_bracket(target, depth, budget);
                BoundReport rep = root(zhou_bound(target, bracket.upper));
                rep.notes += "; jsr bracket depth " + std::to_string(depth) + " upper " +
                             std::to_string(bracket.upper);
                emit(rep);
            } catch (const std::exception& e) {
                emit_error("zhou", e);
            }
        }
        if (all || scalar) {
            try {
                emit(root(scalar_weight_bound(target, grid)));
            } catch (const std::exception& e) {
                emit_error("scalar", e);
            }
        }
        if (all || optimize_flag) {
            try {
                if (q > 1) {
                    auto source = [&](const MatrixFamily& f) { return optimize(f, m, config); };
                    emit(root(refined_bound(target, q, source, budget)));
                } else {
                    emit(root(optimize(target, m, config)));
                }
            } catch (const std::exception& e) {
                emit_error("optimized", e);
            }
        }
    }

    if (flags.as_json) {
        std::cout << json{{"kind", "lower"}, {"p", problem.p}, {"bounds", reports}}.dump(2)
                  << "\n";
    } else {
        std::cout << "Lower bounds for p = " << problem.p << ":\n";
        for (const BoundReport& rep : printed) print_report_line(rep);
    }
    return 0;
}

int run_exact(const CommonFlags& flags) {
    const ProblemFile problem = load(flags);
    if (problem.is_markov()) {
        std::cerr << "exact: no closed formula for Markov models; use upper/lower\n";
        return kExitData;
    }
    const MatrixFamily family = problem.family();
    std::string method;
    double value = 0.0;
    try {
        if (problem.p % 2 == 0) {
            value = exact_even_p(family, problem.p);
            method = "exact_even_p";
        } else {
            value = exact_invariant_cone(family, problem.p);
            method = "exact_invariant_cone";
        }
    } catch (const std::exception& e) {
        std::cerr << "exact: " << e.what() << "\n";
        return kExitData;
    }
    if (flags.as_json) {
        std::cout << json{{"kind", "exact"},
                          {"p", problem.p},
                          {"method", method},
                          {"value", value},
                          {"tolerance", kSpectralTol}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "rho_p = " << value << "  (" << method << ", p = " << problem.p
                  << ", eigen tolerance " << kSpectralTol << ")\n";
    }
    return 0;
}

int run_verdict(const CommonFlags& flags, int k_max, int m, std::uint64_t seed, int depth,
                const std::string& effort_name) {
    const ProblemFile problem = load(flags);
    EffortConfig effort;
    effort.k_max = k_max;
    effort.m = m;
    effort.bracket_depth = depth;
    effort.budget = EnumerationBudget{flags.budget};
    effort.optimizer.rng_seed = seed;
    if (effort_name == "quick") {
        effort.optimizer.restarts = 8;
        effort.optimizer.max_iters = 60;
    } else if (effort_name == "thorough") {
        effort.k_max = std::max(k_max, 10);
        effort.optimizer.restarts = 64;
    }

    const VerdictRecord verdict = problem.is_markov()
                                      ? stability_verdict(problem.model(), problem.p, effort)
                                      : stability_verdict(problem.family(), problem.p, effort);
    const char* name = verdict.status == Stability::stable     ? "stable"
                       : verdict.status == Stability::unstable ? "unstable"
                                                               : "undetermined";
    if (flags.as_json) {
        json bounds = json::array();
        for (const BoundReport& rep : verdict.evidence) bounds.push_back(report_json(rep));
        std::cout << json{{"kind", "verdict"},
                          {"p", problem.p},
                          {"verdict", name},
                          {"witness", verdict.witness_name},
                          {"witness_value", verdict.witness_value},
                          {"bounds", bounds}}
                         .dump(2)
                  << "\n";
    } else {
        std::cout << "verdict: " << name << " (p = " << problem.p << ")\n"
                  << "  witness: " << verdict.witness_name << " = " << verdict.witness_value
                  << "\n";
    }
    switch (verdict.status) {
        case Stability::stable: return 0;
        case Stability::unstable: return 1;
        case Stability::undetermined: return 2;
    }
    return kExitInternal;
}

int run_simulate(const CommonFlags& flags, int horizon, int samples, std::uint64_t seed,
                 double tail) {
    const ProblemFile problem = load(flags);
    const TrajectoryEnsemble ens =
        problem.is_markov() ? simulate(problem.model(), problem.p, horizon, samples, seed)
                            : simulate(problem.family(), problem.p, horizon, samples, seed);
    const RateEstimate est = empirical_rate(ens, tail);

    if (flags.as_json) {
        std::cout << json{{"kind", "simulate"},
                          {"p", ens.p},
                          {"horizon", ens.horizon},
                          {"samples", ens.samples},
                          {"seed", ens.rng_seed},
                          {"moments", ens.per_step_moment},
                          {"rate", est.rate},
                          {"stderr", est.stderr_}}
                         .dump(2)
                  << "\n";
        return 0;
    }
    std::cout << "k,moment,rate_to_date\n";
    for (int k = 0; k <= ens.horizon; ++k) {
        const double moment = ens.per_step_moment[static_cast<std::size_t>(k)];
        const double rate_to_date =
            (k == 0) ? 1.0
                     : std::exp(ens.per_step_log_moment[static_cast<std::size_t>(k)] /
                                (static_cast<double>(ens.p) * k));
        std::cout << k << "," << moment << "," << rate_to_date << "\n";
    }
    std::cout << "rate = " << est.rate << " +- " << est.stderr_ << " (tail fraction " << tail
              << ")\n";
    return 0;
}

int run_optimize_cmd(const CommonFlags& flags, int m, int q, std::uint64_t seed, int restarts) {
    const ProblemFile problem = load(flags);
    OptimizerConfig config;
    config.rng_seed = seed;
    if (restarts > 0) config.restarts = restarts;

    BoundReport rep;
    if (problem.is_markov()) {
        rep = markov_optimize(problem.model(), m, config);
    } else {
        MatrixFamily target = problem.family();
        const bool lifted = problem.p > 1;
        if (lifted) target = lift_p_to_1(target, problem.p);
        if (q > 1) {
            auto source = [&](const MatrixFamily& f) { return optimize(f, m, config); };
            rep = refined_bound(target, q, source, EnumerationBudget{flags.budget});
        } else {
            rep = optimize(target, m, config);
        }
        if (lifted) {
            rep.value = std::pow(rep.value, 1.0 / problem.p);
            rep.notes += "; value is the 1/p root of the lifted-family bound";
        }
    }

    if (flags.as_json) {
        json out = report_json(rep);
        out["restart_trace"] = rep.restart_trace;
        std::cout << out.dump(2) << "\n";
    } else {
        std::cout << "Best certified lower bound (p = " << problem.p << "):\n";
        print_report_line(rep);
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    if (const char* cap = std::getenv("PRADIUS_DIM_CAP")) {
        try {
            set_dimension_cap(std::stoi(cap));
        } catch (const std::exception&) {
            std::cerr << "invalid PRADIUS_DIM_CAP: " << cap << "\n";
            return kExitData;
        }
    }

    CLI::App app{"p-radius bounds and mean-square stability for switched linear systems"};
    app.require_subcommand(1);

    CommonFlags upper_flags;
    int k_max = 8;
    CLI::App* upper = app.add_subcommand("upper", "averaged-norm upper bounds h_1..h_k");
    add_common(upper, upper_flags);
    upper->add_option("--k-max", k_max, "largest product length (default 8)");

    CommonFlags lower_flags;
    bool zhou = false, scalar = false, opt = false;
    int lower_m = 2, lower_q = 1, lower_depth = 8, lower_grid = 41, lower_restarts = 0;
    std::uint64_t lower_seed = 0;
    CLI::App* lower = app.add_subcommand("lower", "certified lower bounds (all by default)");
    add_common(lower, lower_flags);
    lower->add_flag("--zhou", zhou, "Zhou bound ell_Z");
    lower->add_flag("--scalar", scalar, "scalar-weight bound ell_[-1,1]");
    lower->add_flag("--optimize", opt, "Kronecker-weight optimizer bound");
    lower->add_option("--m", lower_m, "weight dimension (default 2)");
    lower->add_option("--q", lower_q, "product-family refinement order (default 1)");
    lower->add_option("--seed", lower_seed, "optimizer seed");
    lower->add_option("--depth", lower_depth, "jsr bracket depth for the Zhou bound (default 8)");
    lower->add_option("--grid", lower_grid, "scalar grid resolution (default 41)");
    lower->add_option("--restarts", lower_restarts, "optimizer restarts (default 32)");

    CommonFlags exact_flags;
    CLI::App* exact = app.add_subcommand("exact", "exact p-radius where a formula applies");
    add_common(exact, exact_flags);

    CommonFlags verdict_flags;
    int verdict_k = 8, verdict_m = 2, verdict_depth = 8;
    std::uint64_t verdict_seed = 0;
    std::string effort = "default";
    CLI::App* verdict = app.add_subcommand("verdict", "p-th mean stability verdict (exit 0/1/2)");
    add_common(verdict, verdict_flags);
    verdict->add_option("--k-max", verdict_k, "largest product length (default 8)");
    verdict->add_option("--m", verdict_m, "weight dimension (default 2)");
    verdict->add_option("--seed", verdict_seed, "optimizer seed");
    verdict->add_option("--depth", verdict_depth, "jsr bracket depth (default 8)");
    verdict->add_option("--effort", effort, "quick | default | thorough")
        ->check(CLI::IsMember({"quick", "default", "thorough"}));

    CommonFlags sim_flags;
    int horizon = 30, samples = 10000;
    std::uint64_t sim_seed = 0;
    double tail = 0.5;
    CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo p-th moment estimates (CSV)");
    add_common(sim, sim_flags);
    sim->add_option("--horizon", horizon, "trajectory length (default 30)");
    sim->add_option("--samples", samples, "trajectory count (default 10000)");
    sim->add_option("--seed", sim_seed, "RNG seed");
    sim->add_option("--tail", tail, "tail fraction for the rate regression (default 0.5)");

    CommonFlags opt_flags;
    int opt_m = 2, opt_q = 1, opt_restarts = 0;
    std::uint64_t opt_seed = 0;
    CLI::App* optimize_cmd =
        app.add_subcommand("optimize", "maximize the Kronecker-weight lower bound");
    add_common(optimize_cmd, opt_flags);
    optimize_cmd->add_option("--m", opt_m, "weight dimension (default 2)");
    optimize_cmd->add_option("--q", opt_q, "product-family refinement order (default 1)");
    optimize_cmd->add_option("--seed", opt_seed, "optimizer seed");
    optimize_cmd->add_option("--restarts", opt_restarts, "optimizer restarts (default 32)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (upper->parsed()) return run_upper(upper_flags, k_max);
        if (lower->parsed()) {
            return run_lower(lower_flags, zhou, scalar, opt, lower_m, lower_q, lower_seed,
                             lower_depth, lower_grid, lower_restarts);
        }
        if (exact->parsed()) return run_exact(exact_flags);
        if (verdict->parsed()) {
            return run_verdict(verdict_flags, verdict_k, verdict_m, verdict_seed, verdict_depth,
                               effort);
        }
        if (sim->parsed()) return run_simulate(sim_flags, horizon, samples, sim_seed, tail);
        if (optimize_cmd->parsed()) {
            return run_optimize_cmd(opt_flags, opt_m, opt_q, opt_seed, opt_restarts);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const DimensionCapError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const BudgetError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitData;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return kExitInternal;
    }
    return kExitInternal;
}
