#pragma once

#include <cmath>
#include <functional>
#include <iosfwd>
#include <numbers>
#include <span>
#include <vector>

#include "banditlab/distributions.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

// Learner memory: cumulative gain estimates and the round counter.
struct BanditState {
    std::vector<double> lhat;
    long t = 0;

    int n_arms() const { return static_cast<int>(lhat.size()); }
    static BanditState zeros(int n) {
        BanditState s;
        s.lhat.assign(static_cast<std::size_t>(n), 0.0);
        return s;
    }
};

struct RoundLog {
    long t = 0;
    int arm = 0;
    double gain = 0.0;
    double p_estimate = 0.0;       // computed p for exact steps, 1/K for resampled steps
    double estimator_value = 0.0;  // gain / p_estimate
    long gr_iterations = -1;       // -1 when no resampling was used
    bool gr_cap_hit = false;
};

void write_round_log_csv(std::ostream& os, std::span<const RoundLog> rounds);

// Cap on geometric-resampling iterations. The truncation adds at most
// N*T/(e*M) expected regret over a horizon T.
struct GRConfig {
    long cap = 1;

    static GRConfig default_for(int n_arms, long horizon) {
        GRConfig c;
        c.cap = static_cast<long>(std::ceil(std::sqrt(static_cast<double>(n_arms) *
                                                      static_cast<double>(horizon))));
        if (c.cap < 1) c.cap = 1;
        return c;
    }
    double bias_budget(int n_arms, long horizon) const {
        return static_cast<double>(n_arms) * static_cast<double>(horizon) /
               (std::numbers::e * static_cast<double>(cap));
    }
};

// Plays argmax_i(lhat_i + Z_i) with one fresh perturbation vector; ties
// break toward the lowest index.
int ftpl_sample(const BanditState& state, const DistributionSpec& d, Rng& rng);

// Redraws perturbations until the argmax repeats `arm`, returning the trial
// count K capped at cfg.cap. E[K] = (1 - (1-p)^M)/p where p is the arm's win
// probability.
long geometric_resampling(const BanditState& state, const DistributionSpec& d, int arm,
                          const GRConfig& cfg, Rng& rng, bool* cap_hit = nullptr);

using GradFn = std::function<std::vector<double>(std::span<const double>)>;

// One exact-gradient round: p = grad_fn(lhat), sample i ~ p, estimate
// (gain_i / p_i) e_i, accumulate. Gains outside [-1,0] are rejected.
std::pair<RoundLog, BanditState> gbpa_step_exact(const BanditState& state,
                                                 std::span<const double> gains,
                                                 const DistributionSpec& d,
                                                 const GradFn& grad_fn, Rng& rng);

// One perturbed-leader round: sample by argmax, estimate 1/p by geometric
// resampling, accumulate K * gain_i * e_i.
std::pair<RoundLog, BanditState> gbpa_step_ftpl(const BanditState& state,
                                                std::span<const double> gains,
                                                const DistributionSpec& d, const GRConfig& cfg,
                                                Rng& rng);

}  // namespace banditlab
