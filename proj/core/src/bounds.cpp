#include "pradius/bounds.hpp"

#include <algorithm>
#include <cmath>

#include "pradius/rng.hpp"

namespace pradius {

namespace {

constexpr double kCertTol = 1e-9;

void check_weight_shapes(const std::vector<Matrix>& weights) {
    if (weights.empty()) throw std::invalid_argument("WeightSet: at least one weight required");
    const Eigen::Index m = weights.front().rows();
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (weights[i].rows() != weights[i].cols() || weights[i].rows() != m) {
            throw std::invalid_argument("WeightSet: weight " + std::to_string(i) +
                                        " is not " + std::to_string(m) + "x" + std::to_string(m));
        }
        if (!entries_finite(weights[i])) {
            throw std::invalid_argument("WeightSet: weight " + std::to_string(i) +
                                        " has non-finite entries");
        }
    }
}

double weighted_average_rho(const MatrixFamily& family, const std::vector<double>& w) {
    Matrix sum = w[0] * family[0];
    for (int i = 1; i < family.count(); ++i) sum += w[static_cast<std::size_t>(i)] * family[i];
    return spectral_radius(sum) / family.count();
}

// One coordinate-ascent pass over w (in place). Coordinate 0 stays in
// [0, 1]: the w -> -w symmetry lets the search fix its sign.
bool ascent_sweep(const MatrixFamily& family, std::vector<double>& w, double& best,
                  int line_points) {
    bool improved = false;
    const int N = family.count();
    for (int c = 0; c < N; ++c) {
        const double lo = (c == 0) ? 0.0 : -1.0;
        double best_t = w[static_cast<std::size_t>(c)];
        for (int j = 0; j < line_points; ++j) {
            const double t = lo + (1.0 - lo) * j / (line_points - 1);
            std::vector<double> cand = w;
            cand[static_cast<std::size_t>(c)] = t;
            const double v = weighted_average_rho(family, cand);
            if (v > best) {
                best = v;
                best_t = t;
                improved = true;
            }
        }
        w[static_cast<std::size_t>(c)] = best_t;
    }
    return improved;
}

}  // namespace

WeightSet make_norm_bounded(std::vector<Matrix> weights) {
    check_weight_shapes(weights);
    for (std::size_t i = 0; i < weights.size(); ++i) {
        const double nrm = operator_norm(weights[i]);
        if (nrm > 1.0 + kCertTol) {
            throw std::invalid_argument("make_norm_bounded: ||W_" + std::to_string(i) +
                                        "|| = " + std::to_string(nrm) + " exceeds 1");
        }
    }
    return WeightSet{std::move(weights), Certificate::norm_bounded};
}

WeightSet make_bracket_checked(std::vector<Matrix> weights, int depth, EnumerationBudget budget) {
    check_weight_shapes(weights);
    const RadiusBracket bracket = jsr_bracket(MatrixFamily(weights), depth, budget);
    if (bracket.upper > 1.0 + kCertTol) {
        throw std::invalid_argument("make_bracket_checked: jsr bracket upper " +
                                    std::to_string(bracket.upper) + " exceeds 1 at depth " +
                                    std::to_string(depth));
    }
    return WeightSet{std::move(weights), Certificate::bracket_checked};
}

WeightSet make_unchecked(std::vector<Matrix> weights) {
    check_weight_shapes(weights);
    return WeightSet{std::move(weights), Certificate::unchecked};
}

double lambda_w(const MatrixFamily& family, const WeightSet& weights) {
    if (weights.count() != family.count()) {
        throw std::invalid_argument("lambda_w: weight count " + std::to_string(weights.count()) +
                                    " does not match family count " +
                                    std::to_string(family.count()));
    }
    check_weight_shapes(weights.weights);
    Matrix avg = kron(weights.weights[0], family[0]);
    for (int i = 1; i < family.count(); ++i) {
        avg += kron(weights.weights[static_cast<std::size_t>(i)], family[i]);
    }
    avg /= static_cast<double>(family.count());
    return spectral_radius(avg);
}

BoundReport zhou_bound(const MatrixFamily& family, double jsr_upper) {
    if (!(jsr_upper > 0.0)) throw std::invalid_argument("zhou_bound: jsr_upper must be positive");

    Matrix sum = kron(family[0], family[0]);
    for (int i = 1; i < family.count(); ++i) sum += kron(family[i], family[i]);
    const double value = spectral_radius(sum) / (family.count() * jsr_upper);

    // Witness: the normalized family {A_i / jsr_upper} as weights. Certify
    // them by bracketing their own joint spectral radius.
    std::vector<Matrix> scaled;
    scaled.reserve(static_cast<std::size_t>(family.count()));
    for (int i = 0; i < family.count(); ++i) scaled.push_back(family[i] / jsr_upper);

    BoundReport report;
    report.name = "zhou";
    report.value = value;
    for (int depth : {8, 10, 12}) {
        try {
            report.weight_witness = make_bracket_checked(scaled, depth);
            report.validity = BoundReport::Validity::certified;
            report.notes = "jsr_upper=" + std::to_string(jsr_upper) +
                           "; witness bracket checked at depth " + std::to_string(depth);
            return report;
        } catch (const std::invalid_argument&) {
            continue;  // deepen the check
        } catch (const BudgetError&) {
            break;
        }
    }
    report.weight_witness = make_unchecked(scaled);
    report.validity = BoundReport::Validity::heuristic;
    report.notes = "jsr_upper=" + std::to_string(jsr_upper) +
                   "; witness jsr certificate not established";
    return report;
}

BoundReport scalar_weight_bound(const MatrixFamily& family, int grid_resolution,
                                std::uint64_t grid_budget) {
    if (grid_resolution < 2) {
        throw std::invalid_argument("scalar_weight_bound: grid_resolution must be >= 2");
    }
    const int N = family.count();

    // First-axis values are restricted to [0, 1] by the w -> -w symmetry.
    std::vector<double> axis(static_cast<std::size_t>(grid_resolution));
    for (int j = 0; j < grid_resolution; ++j) {
        axis[static_cast<std::size_t>(j)] = -1.0 + 2.0 * j / (grid_resolution - 1);
    }
    std::vector<double> first_axis;
    for (double v : axis) {
        if (v >= 0.0) first_axis.push_back(v);
    }

    std::uint64_t grid_points = first_axis.size();
    for (int i = 1; i < N; ++i) {
        if (grid_points > grid_budget / axis.size()) {
            grid_points = grid_budget + 1;
            break;
        }
        grid_points *= axis.size();
    }
    const bool use_grid = (N <= 4) && grid_points <= grid_budget;

    double best = -1.0;
    std::vector<double> best_w(static_cast<std::size_t>(N), 0.0);

    if (use_grid) {
        // Depth-first sweep with cached partial sums; leaves cost one
        // spectral radius each. Lexicographic order makes the first strict
        // maximum the lexicographically smallest maximizer.
        std::vector<Matrix> partial(static_cast<std::size_t>(N) + 1);
        const int n = family.dimension();
        for (auto& m : partial) m = Matrix::Zero(n, n);
        std::vector<double> w(static_cast<std::size_t>(N), 0.0);

        auto rec = [&](auto&& self, int level) -> void {
            const auto& values = (level == 0) ? first_axis : axis;
            for (double t : values) {
                w[static_cast<std::size_t>(level)] = t;
                partial[static_cast<std::size_t>(level) + 1] =
                    partial[static_cast<std::size_t>(level)] + t * family[level];
                if (level == N - 1) {
                    const double v =
                        spectral_radius(partial[static_cast<std::size_t>(N)]) / N;
                    if (v > best) {
                        best = v;
                        best_w = w;
                    }
                } else {
                    self(self, level + 1);
                }
            }
        };
        rec(rec, 0);
        // Polish until the sweep stalls.
        for (int sweep = 0; sweep < 100; ++sweep) {
            if (!ascent_sweep(family, best_w, best, 401)) break;
        }
    } else {
        // Multi-start coordinate ascent; deterministic start list.
        std::vector<std::vector<double>> starts;
        starts.emplace_back(static_cast<std::size_t>(N), 1.0);
        std::vector<double> alt(static_cast<std::size_t>(N), 1.0);
        for (int i = 1; i < N; i += 2) alt[static_cast<std::size_t>(i)] = -1.0;
        starts.push_back(alt);
        SplitMix64 rng(0x5ca1ab1eULL);
        for (int s = 0; s < 14; ++s) {
            std::vector<double> w(static_cast<std::size_t>(N));
            for (auto& v : w) v = rng.next_range(-1.0, 1.0);
            w[0] = std::abs(w[0]);
            starts.push_back(std::move(w));
        }
        for (auto& w : starts) {
            double v = weighted_average_rho(family, w);
            for (int sweep = 0; sweep < 100; ++sweep) {
                if (!ascent_sweep(family, w, v, 401)) break;
            }
            if (v > best) {
                best = v;
                best_w = w;
            }
        }
    }

    BoundReport report;
    report.name = "scalar";
    report.value = best;
    report.scalar_witness = best_w;
    std::vector<Matrix> embed;
    embed.reserve(best_w.size());
    for (double v : best_w) {
        Matrix w1(1, 1);
        w1(0, 0) = v;
        embed.push_back(w1);
    }
    report.weight_witness = make_norm_bounded(std::move(embed));
    report.validity = BoundReport::Validity::certified;
    report.notes = use_grid ? ("grid resolution " + std::to_string(grid_resolution) + " + polish")
                            : "multi-start coordinate ascent";
    return report;
}

MatrixFamily product_family(const MatrixFamily& family, int q, EnumerationBudget budget) {
    if (q < 1) throw std::invalid_argument("product_family: q must be >= 1");
    const int N = family.count();
    std::uint64_t total = 1;
    for (int i = 0; i < q; ++i) {
        if (total > budget.max_products / static_cast<std::uint64_t>(N)) {
            throw BudgetError("product_family: N^q exceeds product budget " +
                              std::to_string(budget.max_products));
        }
        total *= static_cast<std::uint64_t>(N);
    }

    // Lexicographic in (i_1, ..., i_q); member = A_{i_1} A_{i_2} ... A_{i_q}.
    std::vector<Matrix> out;
    out.reserve(total);
    const int n = family.dimension();
    std::vector<Matrix> stack(static_cast<std::size_t>(q) + 1);
    for (auto& m : stack) m.resize(n, n);
    stack[0] = Matrix::Identity(n, n);
    std::vector<int> idx(static_cast<std::size_t>(q), 0);
    for (int t = 0; t < q; ++t) stack[t + 1].noalias() = stack[t] * family[idx[t]];
    while (true) {
        out.push_back(stack[static_cast<std::size_t>(q)]);
        int d = q - 1;
        while (d >= 0 && idx[d] == N - 1) idx[d--] = 0;
        if (d < 0) break;
        ++idx[d];
        for (int t = d; t < q; ++t) stack[t + 1].noalias() = stack[t] * family[idx[t]];
    }
    return MatrixFamily(std::move(out));
}

BoundReport refined_bound(const MatrixFamily& family, int q,
                          const std::function<BoundReport(const MatrixFamily&)>& weight_source,
                          EnumerationBudget budget) {
    if (!weight_source) throw std::invalid_argument("refined_bound: missing weight source");
    const MatrixFamily lifted = product_family(family, q, budget);
    BoundReport inner = weight_source(lifted);
    BoundReport report = inner;
    report.name = "refined(q=" + std::to_string(q) + ")";
    report.value = std::pow(inner.value, 1.0 / q);
    report.notes = "inner bound '" + inner.name + "' on the length-" + std::to_string(q) +
                   " product family" + (inner.notes.empty() ? "" : "; " + inner.notes);
    return report;
}

Matrix complex_embed(const Matrix& real_part, const Matrix& imag_part) {
    if (real_part.rows() != real_part.cols() || imag_part.rows() != imag_part.cols() ||
        real_part.rows() != imag_part.rows()) {
        throw std::invalid_argument("complex_embed: real and imaginary parts must share m x m");
    }
    return block_matrix({{real_part, Matrix(-imag_part)}, {imag_part, real_part}});
}

}  // namespace pradius
