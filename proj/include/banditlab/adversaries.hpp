#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace banditlab {

// Oblivious gain matrix: T rows of N gains in [-1,0], fully materialized
// before play so the sequence cannot depend on the learner's actions.
struct GainSequence {
    long horizon = 0;
    int n_arms = 0;
    std::vector<double> gains;  // row-major, horizon * n_arms
    std::string generator_id;
    std::uint64_t seed = 0;

    std::span<const double> row(long t) const {
        return {gains.data() + t * n_arms, static_cast<std::size_t>(n_arms)};
    }
    double best_fixed_arm_total() const;
    void write_csv(std::ostream& os) const;
    nlohmann::json header_json() const;
};

// Best arm collects 0 each round, every other arm collects -gap.
GainSequence gen_constant_gap(int n_arms, long horizon, double gap, int best_arm);

// Bernoulli losses: gain_{t,i} = -B_{t,i} with B ~ Bernoulli(means_i),
// pre-drawn from the seed.
GainSequence gen_stochastic(int n_arms, long horizon, std::span<const double> means,
                            std::uint64_t seed);

// The best arm (gain 0, others -1) rotates every `period` rounds.
GainSequence gen_switching(int n_arms, long horizon, long period);

}  // namespace banditlab
