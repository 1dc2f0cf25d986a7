#include "banditlab/smoothing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "banditlab/quadrature.hpp"

namespace banditlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr int kMaxQuadratureArms = 16;

void check_n_samples(long n) {
    if (n < 1) throw std::invalid_argument("n_samples must be >= 1");
}

void check_arms(std::span<const double> gains) {
    if (gains.empty()) throw std::invalid_argument("need at least one arm");
}

// Draws one perturbation vector and keeps the top two values, so that
// max_{j != i} is available for every i in O(N).
struct PerturbedDraw {
    int argmax = 0;
    double best = -kInf;
    double second = -kInf;

    double max_excluding(int i) const { return i == argmax ? second : best; }
};

PerturbedDraw draw_perturbed(std::span<const double> gains, const DistributionSpec& d,
                             Rng& rng, std::vector<double>* scratch = nullptr) {
    PerturbedDraw out;
    const int n = static_cast<int>(gains.size());
    for (int i = 0; i < n; ++i) {
        const double v = gains[i] + d.sample(rng);
        if (scratch) (*scratch)[static_cast<std::size_t>(i)] = v;
        if (v > out.best) {
            out.second = out.best;
            out.best = v;
            out.argmax = i;
        } else if (v > out.second) {
            out.second = v;
        }
    }
    return out;
}

// Truncated integration window of the scaled distribution.
std::pair<double, double> quad_window(const DistributionSpec& d) {
    return {d.quantile(1e-13), d.quantile(1.0 - 1e-13)};
}

thread_local long g_bregman_clamps = 0;

}  // namespace

long bregman_clamp_count() { return g_bregman_clamps; }

McEstimate potential_mc(std::span<const double> gains, const DistributionSpec& d,
                        long n_samples, Rng& rng) {
    check_arms(gains);
    check_n_samples(n_samples);
    double sum = 0.0, sumsq = 0.0;
    for (long k = 0; k < n_samples; ++k) {
        const double m = draw_perturbed(gains, d, rng).best;
        sum += m;
        sumsq += m * m;
    }
    const double nd = static_cast<double>(n_samples);
    McEstimate est;
    est.value = sum / nd;
    const double var = std::fmax(0.0, sumsq / nd - est.value * est.value);
    est.std_error = std::sqrt(var / nd);
    est.n_samples = n_samples;
    return est;
}

GradientEstimate grad_mc(std::span<const double> gains, const DistributionSpec& d,
                         long n_samples, Rng& rng) {
    check_arms(gains);
    check_n_samples(n_samples);
    const std::size_t n = gains.size();
    std::vector<long> counts(n, 0);
    for (long k = 0; k < n_samples; ++k) {
        ++counts[static_cast<std::size_t>(draw_perturbed(gains, d, rng).argmax)];
    }
    GradientEstimate est;
    est.n_samples = n_samples;
    est.probabilities.resize(n);
    est.std_errors.resize(n);
    const double nd = static_cast<double>(n_samples);
    for (std::size_t i = 0; i < n; ++i) {
        const double p = static_cast<double>(counts[i]) / nd;
        est.probabilities[i] = p;
        est.std_errors[i] = std::sqrt(std::fmax(0.0, p * (1.0 - p)) / nd);
    }
    return est;
}

GradientEstimate grad_cdf_form(std::span<const double> gains, const DistributionSpec& d,
                               long n_samples, Rng& rng) {
    check_arms(gains);
    check_n_samples(n_samples);
    const std::size_t n = gains.size();
    if (n == 1) {
        GradientEstimate e;
        e.probabilities = {1.0};
        e.std_errors = {0.0};
        e.n_samples = n_samples;
        return e;
    }
    std::vector<double> sum(n, 0.0), sumsq(n, 0.0);
    for (long k = 0; k < n_samples; ++k) {
        const PerturbedDraw draw = draw_perturbed(gains, d, rng);
        for (std::size_t i = 0; i < n; ++i) {
            const double s = d.survival(draw.max_excluding(static_cast<int>(i)) - gains[i]);
            sum[i] += s;
            sumsq[i] += s * s;
        }
    }
    GradientEstimate est;
    est.n_samples = n_samples;
    est.probabilities.resize(n);
    est.std_errors.resize(n);
    const double nd = static_cast<double>(n_samples);
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        est.probabilities[i] = sum[i] / nd;
        const double var = std::fmax(0.0, sumsq[i] / nd - est.probabilities[i] * est.probabilities[i]);
        est.std_errors[i] = std::sqrt(var / nd);
        total += est.probabilities[i];
    }
    // The raw averages sum to 1 only in expectation; project back onto the
    // simplex so downstream consumers can rely on it.
    if (total > 0.0) {
        for (std::size_t i = 0; i < n; ++i) est.probabilities[i] /= total;
    }
    return est;
}

std::vector<double> grad_quadrature(std::span<const double> gains, const DistributionSpec& d,
                                    double abs_tol) {
    check_arms(gains);
    if (gains.size() > kMaxQuadratureArms) {
        throw std::invalid_argument("grad_quadrature: too many arms for quadrature");
    }
    if (!(abs_tol > 0.0)) throw std::invalid_argument("grad_quadrature: abs_tol must be positive");
    const std::size_t n = gains.size();
    if (n == 1) return {1.0};
    const auto [zlo, zhi] = quad_window(d);
    std::vector<double> p(n, 0.0);
    for (std::size_t i = 0; i < n; ++i) {
        auto integrand = [&](double z) {
            double prod = d.pdf(z);
            if (prod == 0.0) return 0.0;
            for (std::size_t j = 0; j < n && prod > 0.0; ++j) {
                if (j == i) continue;
                prod *= d.cdf(gains[i] - gains[j] + z);
            }
            return prod;
        };
        const auto r = quad::integrate(integrand, zlo, zhi, abs_tol * 0.1, 1e-12);
        if (!r.converged) throw std::runtime_error("grad_quadrature: quadrature did not converge");
        p[i] = std::fmax(0.0, r.value);
    }
    const double total = std::accumulate(p.begin(), p.end(), 0.0);
    if (std::fabs(total - 1.0) > 10.0 * abs_tol) {
        throw std::runtime_error("grad_quadrature: component sum deviates from 1");
    }
    for (double& v : p) v /= total;
    return p;
}

double potential_quadrature(std::span<const double> gains, const DistributionSpec& d,
                            double abs_tol) {
    check_arms(gains);
    if (gains.size() > kMaxQuadratureArms) {
        throw std::invalid_argument("potential_quadrature: too many arms for quadrature");
    }
    const std::size_t n = gains.size();
    const auto [zlo, zhi] = quad_window(d);
    if (n == 1) return gains[0] + d.mean();
    const double glo = *std::min_element(gains.begin(), gains.end());
    const double ghi = *std::max_element(gains.begin(), gains.end());
    // density of the maximum: sum_i f(x - G_i) prod_{j != i} F(x - G_j)
    auto dmax = [&](double x) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double term = d.pdf(x - gains[i]);
            if (term == 0.0) continue;
            for (std::size_t j = 0; j < n && term > 0.0; ++j) {
                if (j == i) continue;
                term *= d.cdf(x - gains[j]);
            }
            total += term;
        }
        return total;
    };
    auto integrand = [&](double x) { return x * dmax(x); };
    const auto r = quad::integrate(integrand, glo + zlo, ghi + zhi, abs_tol * 0.1, 1e-12, 8000);
    if (!r.converged) throw std::runtime_error("potential_quadrature: quadrature did not converge");
    return r.value;
}

std::vector<double> hessian_diag_mc(std::span<const double> gains, const DistributionSpec& d,
                                    long n_samples, Rng& rng) {
    check_arms(gains);
    check_n_samples(n_samples);
    const std::size_t n = gains.size();
    std::vector<double> acc(n, 0.0);
    if (n == 1) return acc;  // potential is linear in a single gain
    for (long k = 0; k < n_samples; ++k) {
        const PerturbedDraw draw = draw_perturbed(gains, d, rng);
        for (std::size_t i = 0; i < n; ++i) {
            acc[i] += d.pdf(draw.max_excluding(static_cast<int>(i)) - gains[i]);
        }
    }
    for (double& v : acc) v /= static_cast<double>(n_samples);
    return acc;
}

double bregman_divergence(std::span<const double> g1, std::span<const double> g0,
                          const DistributionSpec& d, double abs_tol) {
    if (g1.size() != g0.size()) throw std::invalid_argument("bregman_divergence: size mismatch");
    check_arms(g0);
    const std::vector<double> grad0 = grad_quadrature(g0, d, abs_tol);
    double div = potential_quadrature(g1, d, abs_tol) - potential_quadrature(g0, d, abs_tol);
    for (std::size_t i = 0; i < g0.size(); ++i) div -= grad0[i] * (g1[i] - g0[i]);
    if (div < 0.0) {
        if (div < -abs_tol) {
            throw std::runtime_error("bregman_divergence: negative beyond tolerance");
        }
        ++g_bregman_clamps;
        div = 0.0;
    }
    return div;
}

DivergencePenaltyEstimate divergence_penalty_mc(std::span<const double> lhat,
                                                std::span<const double> gains,
                                                const DistributionSpec& d, long n_samples,
                                                Rng& rng) {
    if (lhat.size() != gains.size()) throw std::invalid_argument("divergence_penalty_mc: size mismatch");
    check_arms(lhat);
    check_n_samples(n_samples);
    for (const double g : gains) {
        if (!(g >= -1.0 && g <= 0.0)) {
            throw std::invalid_argument("divergence_penalty_mc: gains must lie in [-1,0]");
        }
    }
    const std::size_t n = lhat.size();
    DivergencePenaltyEstimate out;
    out.n_samples = n_samples;

    const std::vector<double> p = grad_quadrature(lhat, d, 1e-9);
    std::vector<double> s_max(n, 0.0);
    std::vector<bool> active(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (p[i] <= 0.0 || gains[i] == 0.0) continue;
        active[i] = true;
        if (p[i] < 1e-12) {
            s_max[i] = -gains[i] / 1e-12;
            ++out.capped_arms;
        } else {
            s_max[i] = -gains[i] / p[i];
        }
    }

    if (n == 1) {
        // Single arm: the potential is linear, the divergence vanishes.
        return out;
    }

    double sum = 0.0, sumsq = 0.0;
    for (long k = 0; k < n_samples; ++k) {
        const PerturbedDraw draw = draw_perturbed(lhat, d, rng);
        double y = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!active[i]) continue;
            const double a = draw.max_excluding(static_cast<int>(i)) - lhat[i];
            // int_0^{s_max} [F(a+s) - F(a)] ds = survival(a)*s_max - int_a^{a+s_max} survival
            const double inner = d.survival(a) * s_max[i] - d.survival_integral(a, a + s_max[i]);
            y += p[i] * std::fmax(0.0, inner);
        }
        sum += y;
        sumsq += y * y;
    }
    const double nd = static_cast<double>(n_samples);
    out.value = sum / nd;
    const double var = std::fmax(0.0, sumsq / nd - out.value * out.value);
    out.std_error = std::sqrt(var / nd);
    return out;
}

}  // namespace banditlab
