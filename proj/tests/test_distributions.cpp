#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "banditlab/distributions.hpp"
#include "banditlab/quadrature.hpp"
#include "banditlab/rng.hpp"

using namespace banditlab;

namespace {

std::vector<DistributionSpec> catalog() {
    return {
        DistributionSpec::uniform01(),
        DistributionSpec::bounded_table({0.0, 0.25, 1.0}, {0.0, 0.6, 1.0}),
        DistributionSpec::gaussian(),
        DistributionSpec::gumbel(),
        DistributionSpec::exponential(1.0),
        DistributionSpec::exponential(2.5),
        DistributionSpec::pareto(2.0),
        DistributionSpec::weibull(2.0),
        DistributionSpec::frechet(2.0),
        DistributionSpec::exp_power(1.5),
        DistributionSpec::exp_power(2.0),
        DistributionSpec::exp_power(3.0),
    };
}

// Integrates the pdf over (effectively) the whole support.
double pdf_mass(const DistributionSpec& d) {
    const double lo = d.quantile(1e-13);
    const double hi = d.quantile(1.0 - 1e-13);
    auto f = [&](double z) { return d.pdf(z); };
    return quad::integrate(f, lo, hi, 1e-9, 1e-9, 20000).value;
}

double ks_statistic(const DistributionSpec& d, int n, Rng& rng) {
    std::vector<double> xs(static_cast<std::size_t>(n));
    for (double& x : xs) x = d.sample(rng);
    std::sort(xs.begin(), xs.end());
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        const double f = d.cdf(xs[static_cast<std::size_t>(i)]);
        worst = std::fmax(worst, std::fabs(f - static_cast<double>(i + 1) / n));
        worst = std::fmax(worst, std::fabs(f - static_cast<double>(i) / n));
    }
    return worst;
}

}  // namespace

TEST_CASE("uniform pdf point values") {
    const auto u = DistributionSpec::uniform01();
    CHECK(u.pdf(0.5) == doctest::Approx(1.0));
    CHECK(u.pdf(2.0) == 0.0);
    CHECK(u.pdf(-0.1) == 0.0);
}

TEST_CASE("exp_power normalizer matches the gamma-function value") {
    // Independent oracle: integral_0^inf exp(-t^b) dt = Gamma(1 + 1/b),
    // so the density at zero is 1/Gamma(1 + 1/b); for b = 2 that is 2/sqrt(pi).
    const auto d2 = DistributionSpec::exp_power(2.0);
    CHECK(d2.pdf(0.0) == doctest::Approx(2.0 / std::sqrt(std::numbers::pi)).epsilon(1e-10));
    for (const double beta : {1.5, 2.0, 3.0}) {
        const auto d = DistributionSpec::exp_power(beta);
        CHECK(d.pdf(0.0) == doctest::Approx(1.0 / std::tgamma(1.0 + 1.0 / beta)).epsilon(1e-10));
    }
}

TEST_CASE("cdf point values") {
    CHECK(DistributionSpec::uniform01().scale(2.0).cdf(1.0) == doctest::Approx(0.5));
    CHECK(DistributionSpec::gaussian().cdf(0.0) == doctest::Approx(0.5));
    CHECK(DistributionSpec::exponential(1.0).cdf(1.0) ==
          doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-12));
}

TEST_CASE("quantile point values and domain") {
    CHECK(DistributionSpec::uniform01().quantile(0.3) == doctest::Approx(0.3));
    CHECK(DistributionSpec::uniform01().scale(5.0).quantile(1.0) == doctest::Approx(5.0));
    CHECK(DistributionSpec::gaussian().quantile(0.5) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(DistributionSpec::gaussian().quantile(-0.1), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::gaussian().quantile(1.5), std::invalid_argument);
}

TEST_CASE("sampling: support, determinism, CLT mean") {
    Rng a(7), b(7);
    const auto u = DistributionSpec::uniform01();
    for (int i = 0; i < 100; ++i) {
        const double x = u.sample(a);
        CHECK(x >= 0.0);
        CHECK(x <= 1.0);
        CHECK(x == u.sample(b));  // identical stream for identical seeds
    }
    const auto g = DistributionSpec::gaussian();
    Rng rng(1234);
    double sum = 0.0;
    const int n = 1000000;
    for (int i = 0; i < n; ++i) sum += g.sample(rng);
    CHECK(std::fabs(sum / n) < 4e-3);  // 4/sqrt(n)
}

TEST_CASE("mean values") {
    CHECK(DistributionSpec::gaussian().mean() == doctest::Approx(0.0));
    CHECK(DistributionSpec::uniform01().scale(2.0).mean() == doctest::Approx(1.0));
    CHECK(DistributionSpec::exp_power(2.0).mean() ==
          doctest::Approx(1.0 / std::sqrt(std::numbers::pi)).epsilon(1e-10));
    CHECK(DistributionSpec::gumbel().mean() == doctest::Approx(std::numbers::egamma));
    CHECK(DistributionSpec::pareto(2.0).mean() == doctest::Approx(2.0));
}

TEST_CASE("kinds with non-finite mean are rejected at construction") {
    CHECK_THROWS_AS(DistributionSpec::pareto(1.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::pareto(0.8), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::frechet(1.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::exp_power(1.0), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::exponential(0.0), std::invalid_argument);
}

TEST_CASE("emax bound: formula points") {
    const auto g = DistributionSpec::gaussian();
    CHECK(g.emax_bound(std::exp(2.0)) == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(g.emax_bound(10.0) == doctest::Approx(std::sqrt(2.0 * std::log(10.0))));
    CHECK(DistributionSpec::uniform01().emax_bound(3.0) == doctest::Approx(1.0));
    CHECK(DistributionSpec::uniform01().emax_bound(1000.0) == doctest::Approx(1.0));
    CHECK_THROWS_AS(DistributionSpec::pareto(2.0).emax_bound(10.0), std::domain_error);
    CHECK_THROWS_AS(DistributionSpec::frechet(2.0).emax_bound(10.0), std::domain_error);
    CHECK_THROWS_AS(DistributionSpec::weibull(0.5).emax_bound(10.0), std::domain_error);
    CHECK_FALSE(DistributionSpec::pareto(2.0).has_emax_bound());
    CHECK(DistributionSpec::weibull(2.0).has_emax_bound());
}

TEST_CASE("emax bound dominates the Monte-Carlo maximum") {
    const int trials = 100000;
    for (const auto& d : catalog()) {
        if (!d.has_emax_bound()) continue;
        for (const int n : {2, 10, 100}) {
            Rng rng(Rng::derive({99, static_cast<std::uint64_t>(n)}));
            double sum = 0.0, sumsq = 0.0;
            for (int t = 0; t < trials; ++t) {
                double m = -1e300;
                for (int i = 0; i < n; ++i) m = std::fmax(m, d.sample(rng));
                sum += m;
                sumsq += m * m;
            }
            const double mean = sum / trials;
            const double se = std::sqrt(std::fmax(0.0, sumsq / trials - mean * mean) / trials);
            INFO(d.name(), " n=", n, " mc=", mean, " bound=", d.emax_bound(n));
            CHECK(mean <= d.emax_bound(n) + 3.0 * se);
        }
    }
}

TEST_CASE("scaling identities") {
    const auto u3 = DistributionSpec::uniform01().scale(3.0);
    CHECK(u3.cdf(1.5) == doctest::Approx(0.5));
    const auto d6a = DistributionSpec::gaussian().scale(2.0).scale(3.0);
    const auto d6b = DistributionSpec::gaussian().scale(6.0);
    for (double z = -10.0; z <= 10.0; z += 0.7) {
        CHECK(d6a.cdf(z) == doctest::Approx(d6b.cdf(z)).epsilon(1e-14));
    }
    const double eta = 4.2;
    const auto g_eta = DistributionSpec::gaussian().scale(eta);
    CHECK(g_eta.pdf(0.0) ==
          doctest::Approx((1.0 / eta) / std::sqrt(2.0 * std::numbers::pi)).epsilon(1e-12));
    // pointwise F_eta(z) = F(z/eta), f_eta(z) = f(z/eta)/eta, quantile scales
    const auto base = DistributionSpec::exp_power(2.0);
    const auto scaled = base.scale(eta);
    for (double z = 0.05; z < 3.0; z += 0.21) {
        CHECK(scaled.cdf(z * eta) == doctest::Approx(base.cdf(z)).epsilon(1e-12));
        CHECK(scaled.pdf(z * eta) == doctest::Approx(base.pdf(z) / eta).epsilon(1e-12));
    }
    for (double q = 0.1; q < 1.0; q += 0.2) {
        CHECK(scaled.quantile(q) == doctest::Approx(eta * base.quantile(q)).epsilon(1e-12));
    }
    CHECK_THROWS_AS(base.scale(0.0), std::invalid_argument);
    CHECK_THROWS_AS(base.scale(-1.0), std::invalid_argument);
}

TEST_CASE("pdf integrates to one") {
    for (const auto& d : catalog()) {
        INFO(d.name());
        CHECK(pdf_mass(d) == doctest::Approx(1.0).epsilon(1e-6));
    }
}

TEST_CASE("inverse-transform consistency on a dense grid") {
    for (const auto& d : catalog()) {
        double worst = 0.0;
        for (int i = 1; i < 10000; ++i) {
            const double u = static_cast<double>(i) / 10000.0;
            worst = std::fmax(worst, std::fabs(d.cdf(d.quantile(u)) - u));
        }
        INFO(d.name(), " worst=", worst);
        CHECK(worst <= 1e-9);
    }
}

TEST_CASE("cdf is nondecreasing") {
    for (const auto& d : catalog()) {
        const double lo = d.quantile(1e-6) - 1.0;
        const double hi = d.quantile(1.0 - 1e-6) + 1.0;
        double prev = -1.0;
        for (int i = 0; i <= 2000; ++i) {
            const double z = lo + (hi - lo) * i / 2000.0;
            const double f = d.cdf(z);
            CHECK(f >= prev);
            prev = f;
        }
    }
}

TEST_CASE("sampling consistency: Kolmogorov-Smirnov") {
    const int n = 100000;
    const double crit = 1.628 / std::sqrt(static_cast<double>(n));  // 1% critical value
    for (const auto& d : catalog()) {
        Rng rng(Rng::derive({2024, static_cast<std::uint64_t>(d.kind())}));
        const double ks = ks_statistic(d, n, rng);
        INFO(d.name(), " ks=", ks, " crit=", crit);
        CHECK(ks < crit);
    }
}

TEST_CASE("bounded-support normalization") {
    for (const auto& d : {DistributionSpec::uniform01(),
                          DistributionSpec::bounded_table({0.5, 2.0, 3.0}, {0.0, 0.25, 1.0})}) {
        CHECK(d.cdf(0.0) == 0.0);
        CHECK(d.cdf(-1e-9) == 0.0);
        CHECK(d.cdf(1.0) == 1.0);
        CHECK(d.cdf(1.0 - 1e-9) < 1.0);
        CHECK(d.cdf(1e-9) > 0.0);
        CHECK(d.mean() >= 0.0);
        CHECK(d.support().bounded_right);
        CHECK(d.support().lower == 0.0);
        CHECK(d.support().upper == 1.0);
    }
}

TEST_CASE("bounded table: density bound is the max slope") {
    const auto d = DistributionSpec::bounded_table({0.0, 0.25, 1.0}, {0.0, 0.6, 1.0});
    REQUIRE(d.density_bound().has_value());
    CHECK(*d.density_bound() == doctest::Approx(0.6 / 0.25));
    CHECK(d.pdf(0.1) == doctest::Approx(2.4));
    CHECK(d.pdf(0.5) == doctest::Approx(0.4 / 0.75));
    CHECK_THROWS_AS(DistributionSpec::bounded_table({0.0, 1.0}, {0.0, 0.5}), std::invalid_argument);
    CHECK_THROWS_AS(DistributionSpec::bounded_table({0.0, 0.0}, {0.0, 1.0}), std::invalid_argument);
}

TEST_CASE("json round trip") {
    for (const auto& d : catalog()) {
        const auto scaled = d.scale(3.7);
        const auto back = DistributionSpec::from_json(scaled.to_json());
        CHECK(back.kind() == scaled.kind());
        CHECK(back.eta() == doctest::Approx(scaled.eta()).epsilon(1e-15));
        for (double q = 0.05; q < 1.0; q += 0.1) {
            CHECK(back.quantile(q) == doctest::Approx(scaled.quantile(q)).epsilon(1e-12));
        }
    }
    const auto j = DistributionSpec::exponential(2.0).scale(1.5).to_json();
    CHECK(j.at("kind") == "exponential");
    CHECK(j.at("params").at("rate") == doctest::Approx(2.0));
    CHECK(j.at("eta") == doctest::Approx(1.5));
}

TEST_CASE("survival matches cdf and stays accurate in the tail") {
    for (const auto& d : catalog()) {
        for (double q = 0.05; q < 1.0; q += 0.1) {
            const double z = d.quantile(q);
            CHECK(d.survival(z) == doctest::Approx(1.0 - d.cdf(z)).epsilon(1e-10));
            CHECK(d.log_survival(z) == doctest::Approx(std::log(d.survival(z))).epsilon(1e-8));
        }
    }
    // deep Gaussian tail: log survival stays finite and smooth
    const auto g = DistributionSpec::gaussian();
    CHECK(g.log_survival(40.0) == doctest::Approx(-804.60844).epsilon(1e-6));
    CHECK(g.log_survival(8.0) == doctest::Approx(std::log(g.survival(8.0))).epsilon(1e-10));
}

TEST_CASE("survival integral against quadrature") {
    for (const auto& d : catalog()) {
        auto f = [&](double z) { return d.survival(z); };
        for (const auto& [a, b] : std::vector<std::pair<double, double>>{
                 {-2.0, 0.5}, {0.1, 1.7}, {-5.0, 8.0}}) {
            const double direct = quad::integrate(f, a, b, 1e-11, 1e-11, 20000).value;
            INFO(d.name(), " [", a, ",", b, "]");
            CHECK(d.survival_integral(a, b) == doctest::Approx(direct).epsilon(1e-7));
        }
    }
}
