#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <sstream>
#include <vector>

#include "banditlab/adversaries.hpp"
#include "banditlab/rng.hpp"

using namespace banditlab;

TEST_CASE("constant gap: values and degenerate cases") {
    const GainSequence flat = gen_constant_gap(3, 10, 0.0, 1);
    for (long t = 0; t < 10; ++t) {
        for (const double g : flat.row(t)) CHECK(g == 0.0);
    }

    const GainSequence hard = gen_constant_gap(2, 100, 1.0, 0);
    double best = 0.0, other = 0.0;
    for (long t = 0; t < 100; ++t) {
        best += hard.row(t)[0];
        other += hard.row(t)[1];
    }
    CHECK(best == 0.0);
    CHECK(other == -100.0);
    // the max cumulative gain is zero when the best arm collects zeros
    CHECK(hard.best_fixed_arm_total() == 0.0);

    CHECK_THROWS_AS(gen_constant_gap(2, 10, 1.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(gen_constant_gap(2, 10, 0.5, 2), std::invalid_argument);
}

TEST_CASE("stochastic: extremes and empirical means") {
    const std::vector<double> ones{1.0, 1.0};
    const GainSequence all_ones = gen_stochastic(2, 50, ones, 1);
    for (long t = 0; t < 50; ++t) {
        for (const double g : all_ones.row(t)) CHECK(g == -1.0);
    }
    const std::vector<double> zeros{0.0, 0.0};
    const GainSequence all_zero = gen_stochastic(2, 50, zeros, 1);
    for (long t = 0; t < 50; ++t) {
        for (const double g : all_zero.row(t)) CHECK(g == 0.0);
    }

    const std::vector<double> means{0.3, 0.8};
    const long horizon = 10000;
    const GainSequence seq = gen_stochastic(2, horizon, means, 321);
    for (int i = 0; i < 2; ++i) {
        double total = 0.0;
        for (long t = 0; t < horizon; ++t) total += -seq.row(t)[static_cast<std::size_t>(i)];
        const double phat = total / static_cast<double>(horizon);
        const double se = std::sqrt(means[static_cast<std::size_t>(i)] *
                                    (1.0 - means[static_cast<std::size_t>(i)]) /
                                    static_cast<double>(horizon));
        CHECK(std::fabs(phat - means[static_cast<std::size_t>(i)]) <= 3.0 * se);
    }
}

TEST_CASE("switching: rotation schedule") {
    // period = T is the single-best-arm sequence with full gap
    const GainSequence fixed = gen_switching(2, 20, 20);
    const GainSequence gap = gen_constant_gap(2, 20, 1.0, 0);
    CHECK(fixed.gains == gap.gains);

    // period = 1 alternates; a fixed arm collects -T/2
    const GainSequence alt = gen_switching(2, 100, 1);
    double arm0 = 0.0;
    for (long t = 0; t < 100; ++t) arm0 += alt.row(t)[0];
    CHECK(arm0 == -50.0);
    CHECK(alt.best_fixed_arm_total() == -50.0);

    CHECK_THROWS_AS(gen_switching(2, 10, 0), std::invalid_argument);
}

TEST_CASE("validity fuzz: every entry in [-1,0]") {
    Rng rng(555);
    for (int rep = 0; rep < 30; ++rep) {
        const int n = 2 + static_cast<int>(rng.uniform01() * 6.0);
        const long horizon = 1 + static_cast<long>(rng.uniform01() * 200.0);
        std::vector<double> means(static_cast<std::size_t>(n));
        for (double& m : means) m = rng.uniform01();
        const GainSequence seqs[] = {
            gen_constant_gap(n, horizon, rng.uniform01(), static_cast<int>(rng.uniform01() * n)),
            gen_stochastic(n, horizon, means, rng.next_u64()),
            gen_switching(n, horizon, 1 + static_cast<long>(rng.uniform01() * 20.0)),
        };
        for (const auto& s : seqs) {
            for (long t = 0; t < horizon; ++t) {
                for (const double g : s.row(t)) {
                    CHECK(g <= 0.0);
                    CHECK(g >= -1.0);
                }
            }
        }
    }
}

TEST_CASE("regeneration is bit-identical for a fixed seed") {
    const std::vector<double> means{0.2, 0.5, 0.9};
    const GainSequence a = gen_stochastic(3, 500, means, 777);
    const GainSequence b = gen_stochastic(3, 500, means, 777);
    CHECK(a.gains == b.gains);
    const GainSequence c = gen_stochastic(3, 500, means, 778);
    CHECK(a.gains != c.gains);
}

TEST_CASE("serialization: csv body and json header") {
    const GainSequence g = gen_constant_gap(2, 2, 0.5, 0);
    std::ostringstream os;
    g.write_csv(os);
    CHECK(os.str() == "0,-0.5\n0,-0.5\n");
    const auto h = g.header_json();
    CHECK(h.at("generator_id") == "constant_gap");
    CHECK(h.at("N") == 2);
    CHECK(h.at("T") == 2);
}
