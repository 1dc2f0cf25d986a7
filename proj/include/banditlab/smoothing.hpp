#pragma once

#include <span>
#include <vector>

#include "banditlab/distributions.hpp"
#include "banditlab/rng.hpp"

namespace banditlab {

// Smoothed-max machinery: Phi(G) = max_i G_i is smoothed by adding i.i.d.
// perturbations, Phi~(G) = E[max_i(G_i + Z_i)]. The gradient of Phi~ is the
// vector of arm win probabilities; three estimators of it live here along
// with the Hessian diagonal, Bregman divergence and the per-round divergence
// penalty evaluator.

struct McEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long n_samples = 0;
};

struct GradientEstimate {
    std::vector<double> probabilities;  // on the simplex, sum == 1 (+-1e-9)
    std::vector<double> std_errors;
    long n_samples = 0;
};

// Monte-Carlo estimate of Phi~(G).
McEstimate potential_mc(std::span<const double> gains, const DistributionSpec& d,
                        long n_samples, Rng& rng);

// Empirical argmax frequencies; ties (probability zero for continuous d)
// break toward the lowest index.
GradientEstimate grad_mc(std::span<const double> gains, const DistributionSpec& d,
                         long n_samples, Rng& rng);

// Conditional-expectation form: component i averages survival(M_{-i} - G_i)
// where M_{-i} = max_{j != i}(G_j + Z_j). Lower variance than grad_mc;
// renormalized onto the simplex.
GradientEstimate grad_cdf_form(std::span<const double> gains, const DistributionSpec& d,
                               long n_samples, Rng& rng);

// Deterministic per-arm quadrature p_i = int f(z) prod_{j!=i} F(G_i - G_j + z) dz.
// Requires N <= 16. Throws on quadrature non-convergence or if the raw
// components sum away from 1 by more than 10*abs_tol.
std::vector<double> grad_quadrature(std::span<const double> gains, const DistributionSpec& d,
                                    double abs_tol);

// Deterministic quadrature of Phi~(G) through the density of the maximum.
double potential_quadrature(std::span<const double> gains, const DistributionSpec& d,
                            double abs_tol);

// Component i averages pdf(M_{-i} - G_i); the diagonal of the Hessian.
std::vector<double> hessian_diag_mc(std::span<const double> gains, const DistributionSpec& d,
                                    long n_samples, Rng& rng);

// D(G1, G0) = Phi~(G1) - Phi~(G0) - <grad Phi~(G0), G1 - G0> via quadrature.
// Small negative values (within abs_tol) are clamped to zero and counted.
double bregman_divergence(std::span<const double> g1, std::span<const double> g0,
                          const DistributionSpec& d, double abs_tol);

// Number of Bregman evaluations clamped from slightly negative to zero in
// this thread (quadrature noise accounting, exposed for tests).
long bregman_clamp_count();

struct DivergencePenaltyEstimate {
    double value = 0.0;
    double std_error = 0.0;
    long n_samples = 0;
    int capped_arms = 0;  // arms where the outer integral cap was applied
};

// Expected one-step Bregman divergence E[D(Lhat_t, Lhat_{t-1})] for gain
// vector g at state lhat: sum_i p_i int_0^{|g_i|/p_i} E[ F(A_i+s) - F(A_i) ] ds
// with A_i = max_{j != i}(lhat_j + Z_j) - lhat_i. Outer expectation by MC,
// inner integrals in closed form through the survival integral. The outer
// range is capped at |g_i|/max(p_i, 1e-12).
DivergencePenaltyEstimate divergence_penalty_mc(std::span<const double> lhat,
                                                std::span<const double> gains,
                                                const DistributionSpec& d, long n_samples,
                                                Rng& rng);

}  // namespace banditlab
