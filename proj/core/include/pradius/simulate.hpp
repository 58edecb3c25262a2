#pragma once

#include <span>

#include "pradius/markov.hpp"

namespace pradius {

/// Monte Carlo sample of switched-system trajectories X(k+1) = A_{s(k+1)} X(k),
/// X(0) = I, with per-step empirical p-th moments of ||X(k)||.
struct TrajectoryEnsemble {
    int p = 1;
    int horizon = 0;
    int samples = 0;
    std::uint64_t rng_seed = 0;
    /// horizon + 1 entries; index k holds the sample mean of ||X(k)||^p.
    /// Entry 0 is exactly 1 (X(0) = I).
    std::vector<double> per_step_moment;
    /// log of per_step_moment, kept alongside because unstable systems
    /// overflow the plain moments at long horizons.
    std::vector<double> per_step_log_moment;
};

/// i.i.d. switching, uniform over the family.
TrajectoryEnsemble simulate(const MatrixFamily& family, int p, int horizon, int samples,
                            std::uint64_t seed);

/// Markov switching; initial_distribution defaults to uniform when empty.
TrajectoryEnsemble simulate(const MarkovModel& model, int p, int horizon, int samples,
                            std::uint64_t seed, std::span<const double> initial_distribution = {});

struct RateEstimate {
    double rate = 0.0;    ///< geometric growth rate per step of E[||X||^p]^{1/p}
    double stderr_ = 0.0; ///< regression standard error mapped to the rate
};

/// Least-squares slope of log per-step moment over the trailing window
/// (tail_fraction of the horizon), divided by p and exponentiated.
RateEstimate empirical_rate(const TrajectoryEnsemble& ensemble, double tail_fraction = 0.5);

}  // namespace pradius
