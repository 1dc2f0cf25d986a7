#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "banditlab/adversaries.hpp"
#include "banditlab/exp3.hpp"

using namespace banditlab;

TEST_CASE("initial probabilities are uniform") {
    const Exp3State s = Exp3State::init(5, 0.01);
    for (const double p : s.probabilities()) CHECK(p == doctest::Approx(0.2));
    const Exp3State mixed = Exp3State::init(4, 0.01, 0.1);
    for (const double p : mixed.probabilities()) CHECK(p == doctest::Approx(0.25));
    CHECK_THROWS_AS(Exp3State::init(3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(Exp3State::init(3, 0.1, 1.0), std::invalid_argument);
}

TEST_CASE("probabilities stay on the simplex and updates reject bad gains") {
    Rng rng(9);
    Exp3State s = Exp3State::init(3, 0.05);
    const std::vector<double> gains{-0.5, 0.0, -1.0};
    for (int t = 0; t < 2000; ++t) {
        auto [log, next] = exp3_step(s, gains, rng);
        CHECK(log.estimator_value <= 0.0);
        CHECK(log.p_estimate > 0.0);
        s = std::move(next);
        double sum = 0.0;
        for (const double p : s.probabilities()) {
            CHECK(p >= 0.0);
            sum += p;
        }
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
    CHECK_THROWS_AS(exp3_step(s, std::vector<double>{0.1, 0.0, 0.0}, rng), std::invalid_argument);
    CHECK_THROWS_AS(exp3_step(s, std::vector<double>{0.0, 0.0}, rng), std::invalid_argument);
}

TEST_CASE("equal gains keep the arm frequencies symmetric") {
    const std::vector<double> gains{-0.5, -0.5};
    long first = 0;
    const int trials = 10000;
    Rng rng(33);
    for (int rep = 0; rep < trials; ++rep) {
        Exp3State s = Exp3State::init(2, 0.05);
        for (int t = 0; t < 10; ++t) {
            auto [log, next] = exp3_step(s, gains, rng);
            if (t == 9 && log.arm == 0) ++first;
            s = std::move(next);
        }
    }
    const double freq = static_cast<double>(first) / trials;
    CHECK(std::fabs(freq - 0.5) <= 3.0 * 0.5 / std::sqrt(static_cast<double>(trials)));
}

TEST_CASE("no overflow over long horizons") {
    Rng rng(44);
    Exp3State s = Exp3State::init(2, 0.3);
    const std::vector<double> gains{0.0, -1.0};
    for (int t = 0; t < 200000; ++t) {
        auto [log, next] = exp3_step(s, gains, rng);
        s = std::move(next);
    }
    for (const double w : s.log_weights) CHECK(std::isfinite(w));
    for (const double p : s.probabilities()) CHECK(std::isfinite(p));
}

TEST_CASE("constant-gap regret stays under the classical guarantee") {
    const int n_arms = 2;
    const long horizon = 10000;
    const GainSequence gains = gen_constant_gap(n_arms, horizon, 1.0, 0);
    const double rate = exp3_default_rate(n_arms, horizon);
    const int n_seeds = 10;
    double total_regret = 0.0;
    for (int seed = 0; seed < n_seeds; ++seed) {
        Rng rng(Rng::derive({1000, static_cast<std::uint64_t>(seed)}));
        Exp3State s = Exp3State::init(n_arms, rate);
        double learner = 0.0;
        for (long t = 0; t < horizon; ++t) {
            auto [log, next] = exp3_step(s, gains.row(t), rng);
            learner += log.gain;
            s = std::move(next);
        }
        total_regret += gains.best_fixed_arm_total() - learner;
    }
    const double mean_regret = total_regret / n_seeds;
    const double guarantee =
        4.0 * std::sqrt(static_cast<double>(n_arms * horizon) * std::log(n_arms));
    CHECK(mean_regret <= guarantee);
    CHECK(mean_regret > 0.0);
}
