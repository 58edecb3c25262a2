#include "pradius/simulate.hpp"

#include <cmath>
#include <limits>

#include "pradius/rng.hpp"

namespace pradius {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Shared driver. pick_index(rng, step, prev) returns the switching index for
// step k (prev = -1 at the first step). Each trajectory owns a counter-based
// stream derived from (seed, trajectory), so results do not depend on
// execution order or thread count.
template <typename PickIndex>
TrajectoryEnsemble run(const MatrixFamily& family, int p, int horizon, int samples,
                       std::uint64_t seed, PickIndex&& pick_index) {
    if (p < 1) throw std::invalid_argument("simulate: p must be >= 1");
    if (horizon < 1) throw std::invalid_argument("simulate: horizon must be >= 1");
    if (samples < 1) throw std::invalid_argument("simulate: samples must be >= 1");

    const int n = family.dimension();
    // log ||X(k)||^p per trajectory, accumulated per step; the per-step mean
    // is taken with log-sum-exp so unstable systems cannot overflow.
    std::vector<std::vector<double>> logs(static_cast<std::size_t>(horizon),
                                          std::vector<double>(static_cast<std::size_t>(samples)));

    Matrix state(n, n);
    Matrix next(n, n);
    for (int t = 0; t < samples; ++t) {
        SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(t)));
        state = Matrix::Identity(n, n);
        double log_scale = 0.0;
        int prev = -1;
        for (int k = 1; k <= horizon; ++k) {
            const int idx = pick_index(rng, k, prev);
            prev = idx;
            next.noalias() = family[idx] * state;
            const double scale = next.cwiseAbs().maxCoeff();
            double log_norm;
            if (scale == 0.0) {
                state.setZero();
                log_scale = kNegInf;
                log_norm = kNegInf;
            } else {
                state = next / scale;
                log_scale += std::log(scale);
                log_norm = std::log(operator_norm(state)) + log_scale;
            }
            logs[static_cast<std::size_t>(k) - 1][static_cast<std::size_t>(t)] = p * log_norm;
        }
    }

    TrajectoryEnsemble out;
    out.p = p;
    out.horizon = horizon;
    out.samples = samples;
    out.rng_seed = seed;
    out.per_step_moment.resize(static_cast<std::size_t>(horizon) + 1);
    out.per_step_log_moment.resize(static_cast<std::size_t>(horizon) + 1);
    out.per_step_moment[0] = 1.0;  // ||X(0)|| = ||I|| = 1 exactly
    out.per_step_log_moment[0] = 0.0;
    for (int k = 1; k <= horizon; ++k) {
        const auto& row = logs[static_cast<std::size_t>(k) - 1];
        double peak = kNegInf;
        for (double v : row) peak = std::max(peak, v);
        double log_mean;
        if (peak == kNegInf) {
            log_mean = kNegInf;
        } else {
            double acc = 0.0;
            for (double v : row) acc += std::exp(v - peak);
            log_mean = peak + std::log(acc) - std::log(static_cast<double>(samples));
        }
        out.per_step_log_moment[static_cast<std::size_t>(k)] = log_mean;
        out.per_step_moment[static_cast<std::size_t>(k)] = std::exp(log_mean);
    }
    return out;
}

}  // namespace

TrajectoryEnsemble simulate(const MatrixFamily& family, int p, int horizon, int samples,
                            std::uint64_t seed) {
    const std::uint64_t N = static_cast<std::uint64_t>(family.count());
    return run(family, p, horizon, samples, seed,
               [N](SplitMix64& rng, int, int) { return static_cast<int>(rng.next_below(N)); });
}

TrajectoryEnsemble simulate(const MarkovModel& model, int p, int horizon, int samples,
                            std::uint64_t seed, std::span<const double> initial_distribution) {
    const int N = model.states();
    std::vector<double> initial(initial_distribution.begin(), initial_distribution.end());
    if (initial.empty()) {
        initial.assign(static_cast<std::size_t>(N), 1.0 / N);
    }
    if (static_cast<int>(initial.size()) != N) {
        throw std::invalid_argument("simulate: initial distribution length " +
                                    std::to_string(initial.size()) + ", expected " +
                                    std::to_string(N));
    }
    double sum = 0.0;
    for (double v : initial) {
        if (v < 0.0) throw std::invalid_argument("simulate: negative initial probability");
        sum += v;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
        throw std::invalid_argument("simulate: initial distribution sums to " +
                                    std::to_string(sum));
    }

    const Matrix& q = model.transition();
    auto pick = [&initial, &q, N](SplitMix64& rng, int step, int prev) {
        const double u = rng.next_unit();
        double acc = 0.0;
        if (step == 1) {
            for (int i = 0; i < N; ++i) {
                acc += initial[static_cast<std::size_t>(i)];
                if (u < acc) return i;
            }
            return N - 1;
        }
        for (int i = 0; i < N; ++i) {
            acc += q(prev, i);
            if (u < acc) return i;
        }
        return N - 1;
    };
    return run(model.family(), p, horizon, samples, seed, pick);
}

RateEstimate empirical_rate(const TrajectoryEnsemble& ensemble, double tail_fraction) {
    if (!(tail_fraction > 0.0 && tail_fraction <= 1.0)) {
        throw std::invalid_argument("empirical_rate: tail_fraction must be in (0, 1]");
    }
    const int K = ensemble.horizon;
    const int window = std::max(2, static_cast<int>(std::floor(K * tail_fraction)) + 1);
    const int k0 = std::max(0, K + 1 - window);
    if (K - k0 + 1 < 2) throw std::invalid_argument("empirical_rate: needs at least 2 tail points");

    for (int k = k0; k <= K; ++k) {
        if (ensemble.per_step_log_moment[static_cast<std::size_t>(k)] == kNegInf) {
            throw std::invalid_argument("empirical_rate: degenerate (all-zero) moments in window");
        }
    }

    // Least squares y = a + b k on the log moments.
    const int count = K - k0 + 1;
    double mean_k = 0.0, mean_y = 0.0;
    for (int k = k0; k <= K; ++k) {
        mean_k += k;
        mean_y += ensemble.per_step_log_moment[static_cast<std::size_t>(k)];
    }
    mean_k /= count;
    mean_y /= count;
    double sxx = 0.0, sxy = 0.0;
    for (int k = k0; k <= K; ++k) {
        const double dk = k - mean_k;
        sxx += dk * dk;
        sxy += dk * (ensemble.per_step_log_moment[static_cast<std::size_t>(k)] - mean_y);
    }
    const double slope = sxy / sxx;
    const double intercept = mean_y - slope * mean_k;

    double rss = 0.0;
    for (int k = k0; k <= K; ++k) {
        const double r =
            ensemble.per_step_log_moment[static_cast<std::size_t>(k)] - (intercept + slope * k);
        rss += r * r;
    }
    const double slope_se = (count > 2) ? std::sqrt(rss / (count - 2) / sxx) : 0.0;

    RateEstimate est;
    est.rate = std::exp(slope / ensemble.p);
    est.stderr_ = est.rate * slope_se / ensemble.p;
    return est;
}

}  // namespace pradius
