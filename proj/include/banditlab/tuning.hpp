#pragma once

#include <optional>
#include <string>

#include <json.hpp>

namespace banditlab {

// Closed-form scale schedules with their regret certificates. The certificate
// is an a-priori bound, often far above realized regret at desk scales; the
// harness records min(bound, T) alongside.
struct TuningResult {
    double eta = 1.0;
    double predicted_bound = 0.0;
    std::optional<double> alpha;
    std::optional<double> epsilon;
    std::string rule;
    nlohmann::json to_json() const;
};

// Uniform perturbation on [0,1]: eta = (NT)^{2/3}, bound 3 (NT)^{2/3},
// epsilon = 1/sqrt(2 eta).
TuningResult eta_uniform(double n_arms, double horizon);

// Generalized-hazard schedule: given sup h_alpha <= C and
// E[max] - E[Z_1] <= Q, eta = (2 C N T / ((1-alpha) Q))^{1/(2-alpha)} with
// bound 2 (2C/(1-alpha))^{1/(2-alpha)} (NT)^{1/(2-alpha)} Q^{(1-alpha)/(2-alpha)}.
TuningResult eta_master(double C, double alpha, double n_arms, double horizon, double q_n);

// Gaussian schedule: alpha = 1/ln T, eta from the generalized-hazard formula
// with C = 2/alpha and Q = sqrt(2 ln N). Requires horizon > 4 and N >= 2.
TuningResult eta_gaussian(double n_arms, double horizon);

// Total regret certificate for a bounded-support perturbation with density
// bound L: T * N L (1/(2 eta eps) + 1 - Finv(1-eps)) + eta, where
// quantile_one_minus_eps = Finv(1-eps) of the normalized base distribution.
double bounded_support_bound(double density_bound, double eta, double epsilon, double n_arms,
                             double horizon, double quantile_one_minus_eps);

}  // namespace banditlab
