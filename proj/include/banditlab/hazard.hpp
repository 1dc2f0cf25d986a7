#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "banditlab/distributions.hpp"

namespace banditlab {

// Grid evaluation of the generalized hazard rate with an estimated supremum.
struct HazardReport {
    double alpha = 0.0;
    std::vector<std::pair<double, double>> grid;  // (z, h_alpha(z))
    double sup_estimate = 0.0;
    std::optional<double> certified_bound;  // >= sup_estimate when present
    std::pair<double, double> grid_range{0.0, 0.0};
    bool inconclusive = false;  // still rising at the right grid edge
    nlohmann::json to_json() const;
};

enum class Direction { increasing, decreasing, constant, inconclusive };
enum class EventualSign { non_negative, non_positive, mixed };

std::string direction_name(Direction d);
std::string eventual_sign_name(EventualSign s);

struct MonotonicityVerdict {
    Direction direction = Direction::inconclusive;
    double threshold_z0 = 0.0;  // onset of the monotone suffix
    std::pair<double, double> grid_range{0.0, 0.0};
    // Sign of the function values over the trailing window, with onset.
    EventualSign eventual_sign = EventualSign::mixed;
    double sign_onset_z0 = 0.0;
};

enum class TailKind { heavy, light, inconclusive };

struct TailClass {
    TailKind klass = TailKind::inconclusive;
    std::optional<double> lambda_star;
    // per lambda: (lambda, log survival(z) + lambda z at the right edge, growing?)
    struct Evidence {
        double lambda;
        double edge_log_value;
        bool growing;
    };
    std::vector<Evidence> evidence;
};

// f(z) / (1 - F(z)) of the scaled distribution. Throws std::domain_error at
// the support edge (survival underflows to zero); callers choose truncation.
double hazard_rate(const DistributionSpec& d, double z);

// f(z)|z|^alpha / (1-F(z))^{1-alpha}; equals hazard_rate at alpha = 0.
double generalized_hazard(const DistributionSpec& d, double z, double alpha);

// R(z) = -log(1 - F(z)); R' equals the hazard rate.
double cumulative_hazard(const DistributionSpec& d, double z);

// Dense-grid maximum of h_alpha with local refinement around the argmax.
// Attaches the certified bound eta^{alpha-1} * 2/alpha for the Gaussian.
HazardReport sup_generalized_hazard(const DistributionSpec& d, double alpha,
                                    std::pair<double, double> grid_range, int n_points);

// Scans the sign of successive differences from the right; the trailing 20%
// of differences must share one sign for a monotone verdict. Also records
// the eventual sign of the values themselves.
MonotonicityVerdict eventual_monotonicity_check(const std::function<double(double)>& fn,
                                                std::pair<double, double> grid_range,
                                                int n_points);

// Classifies the tail by the growth of survival(z)*exp(lambda z) (evaluated
// in log space) over a ladder of lambdas: heavy if growing at the right edge
// for every lambda, light if bounded for some lambda (the largest is kept).
TailClass tail_classify(const DistributionSpec& d, std::span<const double> lambdas,
                        std::pair<double, double> grid_range, int n_points = 400);
TailClass tail_classify(const DistributionSpec& d, std::pair<double, double> grid_range);

// m(z) = (1-delta) e^{-z^beta} - beta z^{beta-1} * integral_z^inf e^{-t^beta} dt.
// The tail integral uses adaptive quadrature at relative tolerance 1e-10.
double m_delta_beta(double delta, double beta, double z);
// Same expression scaled by e^{z^beta}: keeps the sign information where the
// raw value underflows, and is monotone through zero on typical grids.
double m_delta_beta_scaled(double delta, double beta, double z);

}  // namespace banditlab
