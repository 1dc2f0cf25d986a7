#include "banditlab/tuning.hpp"

#include <cmath>
#include <stdexcept>

namespace banditlab {

nlohmann::json TuningResult::to_json() const {
    nlohmann::json j{{"eta", eta}, {"predicted_bound", predicted_bound}, {"rule", rule}};
    j["alpha"] = alpha ? nlohmann::json(*alpha) : nlohmann::json(nullptr);
    j["epsilon"] = epsilon ? nlohmann::json(*epsilon) : nlohmann::json(nullptr);
    return j;
}

TuningResult eta_uniform(double n_arms, double horizon) {
    if (!(n_arms >= 1.0) || !(horizon >= 1.0)) {
        throw std::invalid_argument("eta_uniform: need N, T >= 1");
    }
    TuningResult r;
    r.rule = "uniform_cuberoot";
    const double nt = n_arms * horizon;
    r.eta = std::pow(nt, 2.0 / 3.0);
    r.predicted_bound = 3.0 * r.eta;
    r.epsilon = 1.0 / std::sqrt(2.0 * r.eta);
    return r;
}

TuningResult eta_master(double C, double alpha, double n_arms, double horizon, double q_n) {
    if (!(C > 0.0)) throw std::invalid_argument("eta_master: C must be positive");
    if (!(alpha >= 0.0 && alpha < 1.0)) throw std::invalid_argument("eta_master: alpha outside [0,1)");
    if (!(q_n > 0.0)) throw std::invalid_argument("eta_master: Q(N) must be positive");
    if (!(n_arms >= 1.0) || !(horizon >= 1.0)) throw std::invalid_argument("eta_master: need N, T >= 1");
    TuningResult r;
    r.rule = "hazard_master";
    r.alpha = alpha;
    const double nt = n_arms * horizon;
    const double expo = 1.0 / (2.0 - alpha);
    const double c_term = 2.0 * C / (1.0 - alpha);
    r.eta = std::pow(c_term * nt / q_n, expo);
    r.predicted_bound =
        2.0 * std::pow(c_term, expo) * std::pow(nt, expo) * std::pow(q_n, (1.0 - alpha) * expo);
    return r;
}

TuningResult eta_gaussian(double n_arms, double horizon) {
    if (!(horizon > 4.0)) throw std::invalid_argument("eta_gaussian: horizon must exceed 4");
    if (!(n_arms >= 2.0)) throw std::invalid_argument("eta_gaussian: need N >= 2");
    const double alpha = 1.0 / std::log(horizon);
    const double q_n = std::sqrt(2.0 * std::log(n_arms));
    TuningResult r = eta_master(2.0 / alpha, alpha, n_arms, horizon, q_n);
    r.rule = "gaussian_tuned";
    const double nt = n_arms * horizon;
    const double log_n = std::log(n_arms);
    const double log_t = std::log(horizon);
    const double bound96 =
        96.0 * std::sqrt(nt) * std::pow(n_arms, 1.0 / log_t) * std::sqrt(log_n) * log_t;
    double bound = bound96;
    if (horizon > n_arms) {
        const double bound278 = 278.0 * std::sqrt(nt) * std::sqrt(log_n) * log_t;
        bound = std::fmin(bound, bound278);
    }
    r.predicted_bound = bound;
    r.alpha = alpha;
    return r;
}

double bounded_support_bound(double density_bound, double eta, double epsilon, double n_arms,
                             double horizon, double quantile_one_minus_eps) {
    if (!(density_bound > 0.0)) throw std::invalid_argument("bounded_support_bound: L must be positive");
    if (!(eta > 0.0)) throw std::invalid_argument("bounded_support_bound: eta must be positive");
    if (!(epsilon > 0.0 && epsilon < 1.0)) {
        throw std::invalid_argument("bounded_support_bound: epsilon outside (0,1)");
    }
    const double per_round = n_arms * density_bound *
                             (1.0 / (2.0 * eta * epsilon) + 1.0 - quantile_one_minus_eps);
    // divergence accumulated over the horizon plus the overestimation term;
    // the underestimation term is non-positive after normalization.
    return horizon * per_round + eta;
}

}  // namespace banditlab
