#include "banditlab/adversaries.hpp"

#include <algorithm>
#include <ostream>
#include <stdexcept>

#include "banditlab/rng.hpp"

namespace banditlab {

namespace {

GainSequence make_blank(int n_arms, long horizon, std::string id, std::uint64_t seed) {
    if (n_arms < 1) throw std::invalid_argument("adversary: need at least one arm");
    if (horizon < 1) throw std::invalid_argument("adversary: need horizon >= 1");
    GainSequence g;
    g.n_arms = n_arms;
    g.horizon = horizon;
    g.generator_id = std::move(id);
    g.seed = seed;
    g.gains.assign(static_cast<std::size_t>(horizon) * static_cast<std::size_t>(n_arms), 0.0);
    return g;
}

}  // namespace

double GainSequence::best_fixed_arm_total() const {
    double best = -static_cast<double>(horizon) - 1.0;
    for (int i = 0; i < n_arms; ++i) {
        double total = 0.0;
        for (long t = 0; t < horizon; ++t) total += gains[static_cast<std::size_t>(t * n_arms + i)];
        best = std::max(best, total);
    }
    return best;
}

void GainSequence::write_csv(std::ostream& os) const {
    for (long t = 0; t < horizon; ++t) {
        const auto r = row(t);
        for (int i = 0; i < n_arms; ++i) {
            if (i) os << ',';
            os << r[static_cast<std::size_t>(i)];
        }
        os << '\n';
    }
}

nlohmann::json GainSequence::header_json() const {
    return {{"generator_id", generator_id}, {"seed", seed}, {"N", n_arms}, {"T", horizon}};
}

GainSequence gen_constant_gap(int n_arms, long horizon, double gap, int best_arm) {
    if (!(gap >= 0.0 && gap <= 1.0)) throw std::invalid_argument("constant_gap: gap outside [0,1]");
    if (best_arm < 0 || best_arm >= n_arms) throw std::invalid_argument("constant_gap: bad best arm");
    GainSequence g = make_blank(n_arms, horizon, "constant_gap", 0);
    for (long t = 0; t < horizon; ++t) {
        for (int i = 0; i < n_arms; ++i) {
            g.gains[static_cast<std::size_t>(t * n_arms + i)] = (i == best_arm) ? 0.0 : -gap;
        }
    }
    return g;
}

GainSequence gen_stochastic(int n_arms, long horizon, std::span<const double> means,
                            std::uint64_t seed) {
    if (static_cast<int>(means.size()) != n_arms) {
        throw std::invalid_argument("stochastic: means size mismatch");
    }
    for (const double m : means) {
        if (!(m >= 0.0 && m <= 1.0)) throw std::invalid_argument("stochastic: means outside [0,1]");
    }
    GainSequence g = make_blank(n_arms, horizon, "stochastic", seed);
    Rng rng(Rng::derive({seed, 0x61647665ULL}));
    for (long t = 0; t < horizon; ++t) {
        for (int i = 0; i < n_arms; ++i) {
            const bool hit = rng.uniform01() < means[static_cast<std::size_t>(i)];
            g.gains[static_cast<std::size_t>(t * n_arms + i)] = hit ? -1.0 : 0.0;
        }
    }
    return g;
}

GainSequence gen_switching(int n_arms, long horizon, long period) {
    if (period < 1) throw std::invalid_argument("switching: period must be >= 1");
    GainSequence g = make_blank(n_arms, horizon, "switching", 0);
    for (long t = 0; t < horizon; ++t) {
        const int best = static_cast<int>((t / period) % n_arms);
        for (int i = 0; i < n_arms; ++i) {
            g.gains[static_cast<std::size_t>(t * n_arms + i)] = (i == best) ? 0.0 : -1.0;
        }
    }
    return g;
}

}  // namespace banditlab
