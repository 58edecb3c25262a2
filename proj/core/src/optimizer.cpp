#include "pradius/optimizer.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SVD>

#include "pradius/rng.hpp"

namespace pradius {

namespace {

int skew_dim(int m) { return m * (m - 1) / 2; }

Matrix skew_from_params(const std::vector<double>& params, int m) {
    Matrix s = Matrix::Zero(m, m);
    int t = 0;
    for (int i = 0; i < m; ++i) {
        for (int j = i + 1; j < m; ++j, ++t) {
            s(i, j) = params[static_cast<std::size_t>(t)];
            s(j, i) = -params[static_cast<std::size_t>(t)];
        }
    }
    return s;
}

// L = diag(sign) * (I - S)(I + S)^{-1}; orthogonal for any skew S.
Matrix signed_cayley(const std::vector<double>& skew, const std::vector<int>& signs, int m) {
    const Matrix s = skew_from_params(skew, m);
    const Matrix eye = Matrix::Identity(m, m);
    Matrix l = (eye - s) * (eye + s).inverse();
    for (int j = 0; j < m; ++j) l.row(j) *= signs[static_cast<std::size_t>(j)];
    return l;
}

std::vector<Matrix> materialize_raw(const CayleyPoint& point) {
    std::vector<Matrix> weights;
    weights.reserve(static_cast<std::size_t>(point.count()));
    for (int i = 0; i < point.count(); ++i) {
        Matrix w = signed_cayley(point.skew[static_cast<std::size_t>(i)],
                                 point.sign_diag[static_cast<std::size_t>(i)], point.m);
        for (int j = 0; j < point.m; ++j) {
            w.row(j) *= point.scale_diag[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
        }
        weights.push_back(std::move(w));
    }
    return weights;
}

// Continuous parameters, flattened per weight as (skew..., scales...).
std::vector<double> flatten(const CayleyPoint& point) {
    std::vector<double> theta;
    theta.reserve(static_cast<std::size_t>(point.count() * (skew_dim(point.m) + point.m)));
    for (int i = 0; i < point.count(); ++i) {
        const auto& sk = point.skew[static_cast<std::size_t>(i)];
        const auto& sc = point.scale_diag[static_cast<std::size_t>(i)];
        theta.insert(theta.end(), sk.begin(), sk.end());
        theta.insert(theta.end(), sc.begin(), sc.end());
    }
    return theta;
}

void unflatten(const std::vector<double>& theta, CayleyPoint& point) {
    std::size_t t = 0;
    const int ds = skew_dim(point.m);
    for (int i = 0; i < point.count(); ++i) {
        auto& sk = point.skew[static_cast<std::size_t>(i)];
        auto& sc = point.scale_diag[static_cast<std::size_t>(i)];
        for (int j = 0; j < ds; ++j) sk[static_cast<std::size_t>(j)] = theta[t++];
        for (int j = 0; j < point.m; ++j) {
            sc[static_cast<std::size_t>(j)] = std::clamp(theta[t++], -1.0, 1.0);
        }
    }
}

void clamp_scales(const CayleyPoint& point, std::vector<double>& theta) {
    const int ds = skew_dim(point.m);
    std::size_t t = 0;
    for (int i = 0; i < point.count(); ++i) {
        t += static_cast<std::size_t>(ds);
        for (int j = 0; j < point.m; ++j, ++t) theta[t] = std::clamp(theta[t], -1.0, 1.0);
    }
}

}  // namespace

CayleyPoint CayleyPoint::identity(int count, int m) {
    CayleyPoint p;
    p.m = m;
    p.skew.assign(static_cast<std::size_t>(count),
                  std::vector<double>(static_cast<std::size_t>(skew_dim(m)), 0.0));
    p.scale_diag.assign(static_cast<std::size_t>(count),
                        std::vector<double>(static_cast<std::size_t>(m), 1.0));
    p.sign_diag.assign(static_cast<std::size_t>(count),
                       std::vector<int>(static_cast<std::size_t>(m), 1));
    return p;
}

WeightSet materialize(const CayleyPoint& point) {
    if (point.m < 1) throw std::invalid_argument("materialize: m must be >= 1");
    if (point.count() == 0) throw std::invalid_argument("materialize: empty point");
    return make_norm_bounded(materialize_raw(point));
}

namespace detail {

CayleyPoint random_point(int count, int m, std::uint64_t seed) {
    SplitMix64 rng(seed);
    CayleyPoint p = CayleyPoint::identity(count, m);
    for (int i = 0; i < count; ++i) {
        for (auto& v : p.skew[static_cast<std::size_t>(i)]) v = rng.next_range(-2.0, 2.0);
        for (auto& v : p.scale_diag[static_cast<std::size_t>(i)]) v = rng.next_range(-1.0, 1.0);
        for (auto& v : p.sign_diag[static_cast<std::size_t>(i)]) {
            v = rng.next_below(2) == 0 ? 1 : -1;
        }
    }
    return p;
}

CayleyPoint project_to_cayley(const std::vector<Matrix>& weights) {
    const int m = static_cast<int>(weights.front().rows());
    CayleyPoint point = CayleyPoint::identity(static_cast<int>(weights.size()), m);
    if (m > 16) return point;  // 2^m sign scan infeasible; identity start instead
    for (std::size_t i = 0; i < weights.size(); ++i) {
        Eigen::JacobiSVD<Eigen::MatrixXd> svd(Eigen::MatrixXd(weights[i]),
                                              Eigen::ComputeFullU | Eigen::ComputeFullV);
        const Eigen::MatrixXd l = svd.matrixU() * svd.matrixV().transpose();
        const Eigen::MatrixXd p =
            svd.matrixU() * svd.singularValues().asDiagonal() * svd.matrixU().transpose();
        for (int j = 0; j < m; ++j) {
            point.scale_diag[i][static_cast<std::size_t>(j)] = std::clamp(p(j, j), -1.0, 1.0);
        }
        // Find a sign diagonal d with diag(d) * l in Cayley range.
        double best_det = 0.0;
        std::vector<int> best_signs(static_cast<std::size_t>(m), 1);
        for (std::uint64_t mask = 0; mask < (1ULL << m); ++mask) {
            Eigen::MatrixXd cand = l;
            for (int j = 0; j < m; ++j) {
                if (mask & (1ULL << j)) cand.row(j) *= -1.0;
            }
            const double d = std::abs((Eigen::MatrixXd::Identity(m, m) + cand).determinant());
            if (d > best_det) {
                best_det = d;
                for (int j = 0; j < m; ++j) {
                    best_signs[static_cast<std::size_t>(j)] = (mask & (1ULL << j)) ? -1 : 1;
                }
            }
        }
        if (best_det < 1e-9) continue;  // keep identity skew for this weight
        Eigen::MatrixXd cand = l;
        for (int j = 0; j < m; ++j) cand.row(j) *= best_signs[static_cast<std::size_t>(j)];
        const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(m, m);
        Eigen::MatrixXd s = (eye - cand) * (eye + cand).inverse();
        s = 0.5 * (s - s.transpose().eval());
        int t = 0;
        for (int r = 0; r < m; ++r) {
            for (int c = r + 1; c < m; ++c, ++t) {
                point.skew[i][static_cast<std::size_t>(t)] = s(r, c);
            }
        }
        point.sign_diag[i] = best_signs;
    }
    return point;
}

AscentResult ascend(const WeightObjective& objective, CayleyPoint start,
                    const OptimizerConfig& config, std::uint64_t sub_seed) {
    SplitMix64 rng(mix_seed(sub_seed, 0));
    CayleyPoint point = std::move(start);
    CayleyPoint scratch = point;  // sign_diag kept in sync with point

    auto eval_theta = [&](const std::vector<double>& theta) {
        unflatten(theta, scratch);
        return objective(materialize_raw(scratch));
    };

    std::vector<double> theta = flatten(point);
    clamp_scales(point, theta);
    const int dim = static_cast<int>(theta.size());
    const int samples = config.samples_per_iter > 0 ? config.samples_per_iter : 2 * dim;

    double best = eval_theta(theta);
    double step = config.step_init;
    int no_gain = 0;

    for (int iter = 0; iter < config.max_iters; ++iter) {
        const double before = best;

        // Discrete phase: toggle sign entries and snap scales to the +-1
        // extremes, greedily and in a fixed order.
        for (int i = 0; i < point.count(); ++i) {
            for (int j = 0; j < point.m; ++j) {
                auto& sign = point.sign_diag[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                auto& shadow =
                    scratch.sign_diag[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
                sign = -sign;
                shadow = sign;
                double v = eval_theta(theta);
                if (v > best) {
                    best = v;
                } else {
                    sign = -sign;
                    shadow = sign;
                }
                const std::size_t at = static_cast<std::size_t>(i) *
                                           static_cast<std::size_t>(skew_dim(point.m) + point.m) +
                                       static_cast<std::size_t>(skew_dim(point.m) + j);
                const double saved = theta[at];
                for (double target : {1.0, -1.0}) {
                    if (theta[at] == target) continue;
                    theta[at] = target;
                    v = eval_theta(theta);
                    if (v > best) {
                        best = v;
                        break;
                    }
                    theta[at] = saved;
                }
            }
        }

        // Sampled gradient: average central-difference gradients taken at
        // the iterate and at perturbed points within the current step
        // radius; the averaging smooths the nonsmooth spectral objective.
        if (dim > 0) {
            std::vector<double> grad(static_cast<std::size_t>(dim), 0.0);
            std::vector<double> base(static_cast<std::size_t>(dim));
            std::vector<double> probe(static_cast<std::size_t>(dim));
            for (int s = 0; s < samples; ++s) {
                base = theta;
                if (s > 0) {
                    for (auto& v : base) v += step * rng.next_range(-1.0, 1.0);
                    clamp_scales(point, base);
                }
                for (int j = 0; j < dim; ++j) {
                    const double h = 1e-6 * std::max(1.0, std::abs(base[static_cast<std::size_t>(j)]));
                    probe = base;
                    probe[static_cast<std::size_t>(j)] += h;
                    const double fp = eval_theta(probe);
                    probe[static_cast<std::size_t>(j)] = base[static_cast<std::size_t>(j)] - h;
                    const double fm = eval_theta(probe);
                    grad[static_cast<std::size_t>(j)] += (fp - fm) / (2.0 * h);
                }
            }
            double norm = 0.0;
            for (auto& g : grad) {
                g /= samples;
                norm += g * g;
            }
            norm = std::sqrt(norm);

            if (norm > 1e-14) {
                double alpha = step;
                bool accepted = false;
                std::vector<double> cand(static_cast<std::size_t>(dim));
                for (int bt = 0; bt < 40 && alpha > 1e-14; ++bt) {
                    for (int j = 0; j < dim; ++j) {
                        cand[static_cast<std::size_t>(j)] =
                            theta[static_cast<std::size_t>(j)] +
                            alpha * grad[static_cast<std::size_t>(j)] / norm;
                    }
                    clamp_scales(point, cand);
                    const double v = eval_theta(cand);
                    if (v > best) {
                        theta = cand;
                        best = v;
                        accepted = true;
                        step = std::min(config.step_init, 2.0 * alpha);
                        break;
                    }
                    alpha *= config.step_shrink;
                }
                if (!accepted) step = std::max(step * config.step_shrink, 1e-14);
            }
        }

        if (best - before < config.stall_tol) {
            if (++no_gain >= 4) break;
        } else {
            no_gain = 0;
        }
    }

    unflatten(theta, point);
    return AscentResult{std::move(point), best};
}

}  // namespace detail

namespace {

Matrix pad_to(const Matrix& w, int m) {
    if (w.rows() == m) return w;
    Matrix out = Matrix::Zero(m, m);
    out.topLeftCorner(w.rows(), w.cols()) = w;
    return out;
}

}  // namespace

BoundReport optimize(const MatrixFamily& family, int m, const OptimizerConfig& config,
                     const std::vector<WeightSet>& extra_seeds) {
    if (m < 1) throw std::invalid_argument("optimize: m must be >= 1");
    const long long lifted = static_cast<long long>(m) * family.dimension();
    if (lifted > dimension_cap()) {
        throw DimensionCapError("optimize: lift dimension " + std::to_string(lifted) +
                                " exceeds dimension cap " + std::to_string(dimension_cap()));
    }
    const int N = family.count();

    auto objective = [&](const std::vector<Matrix>& weights) {
        Matrix avg = kron(weights[0], family[0]);
        for (int i = 1; i < N; ++i) avg += kron(weights[static_cast<std::size_t>(i)], family[i]);
        avg /= static_cast<double>(N);
        return spectral_radius(avg);
    };

    // Seed plan: identity, scalar-embed, projected normalized family, then
    // random Cayley points.
    std::vector<CayleyPoint> starts;
    starts.push_back(CayleyPoint::identity(N, m));

    std::vector<std::pair<WeightSet, std::string>> raw_candidates;

    try {
        const BoundReport scalar = scalar_weight_bound(family);
        CayleyPoint embed = CayleyPoint::identity(N, m);
        for (int i = 0; i < N; ++i) {
            std::fill(embed.scale_diag[static_cast<std::size_t>(i)].begin(),
                      embed.scale_diag[static_cast<std::size_t>(i)].end(),
                      (*scalar.scalar_witness)[static_cast<std::size_t>(i)]);
        }
        starts.push_back(std::move(embed));
    } catch (const std::exception&) {
        // Scalar seeding is best-effort; random restarts cover its absence.
    }

    if (m >= family.dimension()) {
        try {
            const RadiusBracket bracket = jsr_bracket(family, 8);
            if (bracket.upper > 0.0) {
                std::vector<Matrix> scaled;
                scaled.reserve(static_cast<std::size_t>(N));
                for (int i = 0; i < N; ++i) scaled.push_back(pad_to(family[i] / bracket.upper, m));
                starts.push_back(detail::project_to_cayley(scaled));
                try {
                    raw_candidates.emplace_back(make_bracket_checked(scaled, 8),
                                                "normalized-family seed {A_i / jsr_upper}");
                } catch (const std::exception&) {
                    raw_candidates.emplace_back(make_unchecked(scaled),
                                                "normalized-family seed {A_i / jsr_upper}");
                }
            }
        } catch (const std::exception&) {
        }
    }

    for (const WeightSet& seed : extra_seeds) raw_candidates.emplace_back(seed, "caller seed");

    double best = -1.0;
    CayleyPoint best_point = starts.front();
    std::vector<double> trace;
    trace.reserve(static_cast<std::size_t>(config.restarts));

    for (int r = 0; r < config.restarts; ++r) {
        const std::uint64_t sub_seed = config.rng_seed ^ static_cast<std::uint64_t>(r);
        CayleyPoint start = (static_cast<std::size_t>(r) < starts.size())
                                ? starts[static_cast<std::size_t>(r)]
                                : detail::random_point(N, m, mix_seed(sub_seed, 1));
        detail::AscentResult res = detail::ascend(objective, std::move(start), config, sub_seed);
        if (res.value > best) {
            best = res.value;
            best_point = std::move(res.point);
        }
        trace.push_back(best);
    }

    BoundReport report;
    report.name = "optimized(m=" + std::to_string(m) + ")";
    report.weight_witness = materialize(best_point);
    report.value = best;
    report.validity = BoundReport::Validity::certified;
    report.restart_trace = trace;
    std::string winner_note;

    for (const auto& [seed, label] : raw_candidates) {
        const double v = objective(seed.weights);
        if (v > best) {
            best = v;
            report.value = v;
            report.weight_witness = seed;
            report.validity = seed.certificate == Certificate::unchecked
                                  ? BoundReport::Validity::heuristic
                                  : BoundReport::Validity::certified;
            winner_note = "; winner: " + label;
        }
    }

    report.notes = "local search over O_m; value certified, optimality heuristic; restarts=" +
                   std::to_string(config.restarts) + " seed=" + std::to_string(config.rng_seed) +
                   winner_note;
    return report;
}

}  // namespace pradius
