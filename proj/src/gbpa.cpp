#include "banditlab/gbpa.hpp"

#include <limits>
#include <ostream>
#include <stdexcept>

namespace banditlab {

namespace {

void validate_gains(std::span<const double> gains, int n_arms) {
    if (static_cast<int>(gains.size()) != n_arms) {
        throw std::invalid_argument("gain vector size does not match the number of arms");
    }
    for (const double g : gains) {
        if (!(g >= -1.0 && g <= 0.0)) {
            throw std::invalid_argument("gains must lie in [-1,0]");
        }
    }
}

int sample_discrete(std::span<const double> p, Rng& rng) {
    const double u = rng.uniform01();
    double acc = 0.0;
    int last_positive = -1;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] <= 0.0) continue;
        last_positive = static_cast<int>(i);
        acc += p[i];
        if (u < acc) return static_cast<int>(i);
    }
    if (last_positive < 0) throw std::runtime_error("sample_discrete: no positive mass");
    return last_positive;  // guard against rounding in the cumulative sum
}

}  // namespace

void write_round_log_csv(std::ostream& os, std::span<const RoundLog> rounds) {
    os << "t,arm,gain,p_estimate,estimator_value,gr_iterations\n";
    for (const RoundLog& r : rounds) {
        os << r.t << ',' << r.arm << ',' << r.gain << ',' << r.p_estimate << ','
           << r.estimator_value << ',';
        if (r.gr_iterations >= 0) os << r.gr_iterations;
        os << '\n';
    }
}

int ftpl_sample(const BanditState& state, const DistributionSpec& d, Rng& rng) {
    if (state.lhat.empty()) throw std::invalid_argument("ftpl_sample: empty state");
    int best = 0;
    double best_v = -std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < state.lhat.size(); ++i) {
        const double v = state.lhat[i] + d.sample(rng);
        if (v > best_v) {
            best_v = v;
            best = static_cast<int>(i);
        }
    }
    return best;
}

long geometric_resampling(const BanditState& state, const DistributionSpec& d, int arm,
                          const GRConfig& cfg, Rng& rng, bool* cap_hit) {
    if (cfg.cap < 1) throw std::invalid_argument("geometric_resampling: cap must be >= 1");
    if (arm < 0 || arm >= state.n_arms()) throw std::out_of_range("geometric_resampling: bad arm");
    if (cap_hit) *cap_hit = false;
    for (long k = 1; k <= cfg.cap; ++k) {
        if (ftpl_sample(state, d, rng) == arm) return k;
    }
    if (cap_hit) *cap_hit = true;
    return cfg.cap;
}

std::pair<RoundLog, BanditState> gbpa_step_exact(const BanditState& state,
                                                 std::span<const double> gains,
                                                 const DistributionSpec& d,
                                                 const GradFn& grad_fn, Rng& rng) {
    validate_gains(gains, state.n_arms());
    const std::vector<double> p = grad_fn(state.lhat);
    if (static_cast<int>(p.size()) != state.n_arms()) {
        throw std::runtime_error("gbpa_step_exact: gradient size mismatch");
    }
    const int arm = sample_discrete(p, rng);

    BanditState next = state;
    next.t = state.t + 1;
    RoundLog log;
    log.t = next.t;
    log.arm = arm;
    log.gain = gains[static_cast<std::size_t>(arm)];
    log.p_estimate = p[static_cast<std::size_t>(arm)];
    // The sampled arm always has positive probability, so the importance
    // estimate is well defined.
    log.estimator_value = log.gain / log.p_estimate;
    next.lhat[static_cast<std::size_t>(arm)] += log.estimator_value;
    return {log, std::move(next)};
}

std::pair<RoundLog, BanditState> gbpa_step_ftpl(const BanditState& state,
                                                std::span<const double> gains,
                                                const DistributionSpec& d, const GRConfig& cfg,
                                                Rng& rng) {
    validate_gains(gains, state.n_arms());
    const int arm = ftpl_sample(state, d, rng);
    bool cap_hit = false;
    const long k = geometric_resampling(state, d, arm, cfg, rng, &cap_hit);

    BanditState next = state;
    next.t = state.t + 1;
    RoundLog log;
    log.t = next.t;
    log.arm = arm;
    log.gain = gains[static_cast<std::size_t>(arm)];
    log.gr_iterations = k;
    log.gr_cap_hit = cap_hit;
    log.p_estimate = 1.0 / static_cast<double>(k);
    log.estimator_value = static_cast<double>(k) * log.gain;
    next.lhat[static_cast<std::size_t>(arm)] += log.estimator_value;
    return {log, std::move(next)};
}

}  // namespace banditlab
