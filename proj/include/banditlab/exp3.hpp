#pragma once

#include <span>
#include <vector>

#include "banditlab/gbpa.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

// Exponential-weights baseline. Gains in [-1,0] are flipped to losses in
// [0,1] internally; weights live in log space and only decrease, so there is
// no overflow over long horizons. An optional uniform mixing term is kept
// for the classical parameterization (default 0).
struct Exp3State {
    std::vector<double> log_weights;
    double learning_rate = 0.0;
    double mix = 0.0;

    static Exp3State init(int n_arms, double learning_rate, double mix = 0.0);
    std::vector<double> probabilities() const;
};

// Learning rate sqrt(2 ln N / (N T)) for a known horizon.
double exp3_default_rate(int n_arms, long horizon);

std::pair<RoundLog, Exp3State> exp3_step(const Exp3State& state, std::span<const double> gains,
                                         Rng& rng);

}  // namespace banditlab
