#include "banditlab/exp3.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace banditlab {

Exp3State Exp3State::init(int n_arms, double learning_rate, double mix) {
    if (n_arms < 1) throw std::invalid_argument("exp3: need at least one arm");
    if (!(learning_rate > 0.0)) throw std::invalid_argument("exp3: learning rate must be positive");
    if (!(mix >= 0.0 && mix < 1.0)) throw std::invalid_argument("exp3: mix outside [0,1)");
    Exp3State s;
    s.log_weights.assign(static_cast<std::size_t>(n_arms), 0.0);
    s.learning_rate = learning_rate;
    s.mix = mix;
    return s;
}

std::vector<double> Exp3State::probabilities() const {
    const std::size_t n = log_weights.size();
    std::vector<double> p(n);
    const double m = *std::max_element(log_weights.begin(), log_weights.end());
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = std::exp(log_weights[i] - m);
        total += p[i];
    }
    const double unif = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
        p[i] = (1.0 - mix) * (p[i] / total) + mix * unif;
    }
    return p;
}

double exp3_default_rate(int n_arms, long horizon) {
    if (n_arms < 2 || horizon < 1) throw std::invalid_argument("exp3_default_rate: need N >= 2, T >= 1");
    return std::sqrt(2.0 * std::log(static_cast<double>(n_arms)) /
                     (static_cast<double>(n_arms) * static_cast<double>(horizon)));
}

std::pair<RoundLog, Exp3State> exp3_step(const Exp3State& state, std::span<const double> gains,
                                         Rng& rng) {
    const std::size_t n = state.log_weights.size();
    if (gains.size() != n) throw std::invalid_argument("exp3_step: gain vector size mismatch");
    for (const double g : gains) {
        if (!(g >= -1.0 && g <= 0.0)) throw std::invalid_argument("exp3_step: gains must lie in [-1,0]");
    }
    const std::vector<double> p = state.probabilities();

    const double u = rng.uniform01();
    double acc = 0.0;
    int arm = static_cast<int>(n) - 1;
    for (std::size_t i = 0; i < n; ++i) {
        acc += p[i];
        if (u < acc) {
            arm = static_cast<int>(i);
            break;
        }
    }

    Exp3State next = state;
    const double p_arm = p[static_cast<std::size_t>(arm)];
    const double gain = gains[static_cast<std::size_t>(arm)];
    const double loss_estimate = -gain / p_arm;  // importance-weighted loss in [0, 1/p]
    next.log_weights[static_cast<std::size_t>(arm)] -= state.learning_rate * loss_estimate;

    RoundLog log;
    log.arm = arm;
    log.gain = gain;
    log.p_estimate = p_arm;
    log.estimator_value = gain / p_arm;
    return {log, std::move(next)};
}

}  // namespace banditlab
