#include "banditlab/hazard.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "banditlab/quadrature.hpp"

namespace banditlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Evaluates h_alpha in log space; returns -inf where the numerator vanishes
// and throws at the support edge where survival is identically zero.
double log_generalized_hazard(const DistributionSpec& d, double z, double alpha) {
    const double ls = d.log_survival(z);
    if (ls == -kInf) {
        throw std::domain_error("hazard: survival underflows at the support edge");
    }
    const double lf = d.log_pdf(z);
    if (lf == -kInf) return -kInf;
    double num = lf;
    if (alpha != 0.0) {
        if (z == 0.0) return -kInf;
        num += alpha * std::log(std::fabs(z));
    }
    return num - (1.0 - alpha) * ls;
}

}  // namespace

std::string direction_name(Direction d) {
    switch (d) {
        case Direction::increasing: return "increasing";
        case Direction::decreasing: return "decreasing";
        case Direction::constant: return "constant";
        case Direction::inconclusive: return "inconclusive";
    }
    return "inconclusive";
}

std::string eventual_sign_name(EventualSign s) {
    switch (s) {
        case EventualSign::non_negative: return "non_negative";
        case EventualSign::non_positive: return "non_positive";
        case EventualSign::mixed: return "mixed";
    }
    return "mixed";
}

double hazard_rate(const DistributionSpec& d, double z) {
    return std::exp(log_generalized_hazard(d, z, 0.0));
}

double generalized_hazard(const DistributionSpec& d, double z, double alpha) {
    if (alpha < 0.0 || alpha >= 1.0) throw std::invalid_argument("generalized_hazard: alpha outside [0,1)");
    return std::exp(log_generalized_hazard(d, z, alpha));
}

double cumulative_hazard(const DistributionSpec& d, double z) {
    const double ls = d.log_survival(z);
    if (ls == -kInf) throw std::domain_error("cumulative_hazard: survival underflows at the support edge");
    return -ls;
}

HazardReport sup_generalized_hazard(const DistributionSpec& d, double alpha,
                                    std::pair<double, double> grid_range, int n_points) {
    if (n_points < 100) throw std::invalid_argument("sup_generalized_hazard: need n_points >= 100");
    if (!(grid_range.second > grid_range.first)) {
        throw std::invalid_argument("sup_generalized_hazard: empty grid range");
    }
    HazardReport report;
    report.alpha = alpha;
    report.grid_range = grid_range;

    // Keep a safety margin away from a bounded right support edge.
    double lo = grid_range.first;
    double hi = grid_range.second;
    const SupportDescriptor sup = d.support();
    if (sup.bounded_right) hi = std::fmin(hi, sup.upper * (1.0 - 1e-9));
    if (!(hi > lo)) throw std::invalid_argument("sup_generalized_hazard: range beyond the support");

    auto eval = [&](double z) -> double {
        try {
            return generalized_hazard(d, z, alpha);
        } catch (const std::domain_error&) {
            return std::numeric_limits<double>::quiet_NaN();
        }
    };

    report.grid.reserve(static_cast<std::size_t>(n_points));
    const double step = (hi - lo) / static_cast<double>(n_points - 1);
    std::size_t best = 0;
    for (int i = 0; i < n_points; ++i) {
        const double z = lo + step * static_cast<double>(i);
        const double h = eval(z);
        if (std::isnan(h)) continue;
        report.grid.emplace_back(z, h);
        if (h > report.grid[best].second) best = report.grid.size() - 1;
    }
    if (report.grid.empty()) throw std::domain_error("sup_generalized_hazard: no evaluable grid points");

    // Local refinement: golden-section style shrink around the best point.
    double a = (best > 0) ? report.grid[best - 1].first : report.grid[best].first;
    double b = (best + 1 < report.grid.size()) ? report.grid[best + 1].first : report.grid[best].first;
    double best_z = report.grid[best].first;
    double best_h = report.grid[best].second;
    for (int it = 0; it < 60 && b - a > 1e-12 * (1.0 + std::fabs(best_z)); ++it) {
        const double m1 = a + (b - a) / 3.0;
        const double m2 = b - (b - a) / 3.0;
        const double h1 = eval(m1);
        const double h2 = eval(m2);
        if (!std::isnan(h1) && h1 > best_h) { best_h = h1; best_z = m1; }
        if (!std::isnan(h2) && h2 > best_h) { best_h = h2; best_z = m2; }
        if (std::isnan(h1) || std::isnan(h2) || h1 >= h2) b = m2; else a = m1;
    }
    report.sup_estimate = best_h;

    // Still rising at the right edge => the grid max is not trustworthy.
    const std::size_t n = report.grid.size();
    if (n >= 3) {
        const bool rising_edge = report.grid[n - 1].second > report.grid[n - 2].second &&
                                 report.grid[n - 2].second > report.grid[n - 3].second;
        const bool max_at_edge = best + 2 >= n;
        report.inconclusive = rising_edge && max_at_edge;
    }

    if (d.kind() == DistKind::gaussian && alpha > 0.0) {
        report.certified_bound = std::pow(d.eta(), alpha - 1.0) * 2.0 / alpha;
    }
    return report;
}

nlohmann::json HazardReport::to_json() const {
    nlohmann::json g = nlohmann::json::array();
    for (const auto& [z, h] : grid) g.push_back({z, h});
    nlohmann::json j{{"alpha", alpha},
                     {"grid", std::move(g)},
                     {"sup_estimate", sup_estimate},
                     {"grid_range", {grid_range.first, grid_range.second}},
                     {"inconclusive", inconclusive}};
    if (certified_bound)
        j["certified_bound"] = *certified_bound;
    else
        j["certified_bound"] = nullptr;
    return j;
}

MonotonicityVerdict eventual_monotonicity_check(const std::function<double(double)>& fn,
                                                std::pair<double, double> grid_range,
                                                int n_points) {
    if (n_points < 3) throw std::invalid_argument("eventual_monotonicity_check: need n_points >= 3");
    if (!(grid_range.second > grid_range.first)) {
        throw std::invalid_argument("eventual_monotonicity_check: empty grid range");
    }
    MonotonicityVerdict v;
    v.grid_range = grid_range;

    const int n = n_points;
    std::vector<double> zs(static_cast<std::size_t>(n)), vals(static_cast<std::size_t>(n));
    const double step = (grid_range.second - grid_range.first) / static_cast<double>(n - 1);
    double vmax = 0.0;
    for (int i = 0; i < n; ++i) {
        zs[static_cast<std::size_t>(i)] = grid_range.first + step * static_cast<double>(i);
        vals[static_cast<std::size_t>(i)] = fn(zs[static_cast<std::size_t>(i)]);
        vmax = std::fmax(vmax, std::fabs(vals[static_cast<std::size_t>(i)]));
    }
    const double zero_tol = 1e-9 * vmax;

    auto diff_sign = [&](int i) -> int {
        const double diff = vals[static_cast<std::size_t>(i + 1)] - vals[static_cast<std::size_t>(i)];
        if (std::fabs(diff) <= zero_tol) return 0;
        return diff > 0.0 ? 1 : -1;
    };

    // Trailing 20% of differences decide the direction.
    const int n_diffs = n - 1;
    const int window = std::max(1, n_diffs / 5);
    int sign = 0;
    bool unanimous = true;
    bool all_zero = true;
    for (int i = n_diffs - window; i < n_diffs; ++i) {
        const int s = diff_sign(i);
        if (s != 0) {
            all_zero = false;
            if (sign == 0)
                sign = s;
            else if (s != sign)
                unanimous = false;
        }
    }
    if (!unanimous) {
        v.direction = Direction::inconclusive;
        v.threshold_z0 = grid_range.second;
    } else if (all_zero) {
        v.direction = Direction::constant;
        int i = n_diffs - 1;
        while (i >= 0 && diff_sign(i) == 0) --i;
        v.threshold_z0 = zs[static_cast<std::size_t>(i + 1)];
    } else {
        v.direction = sign > 0 ? Direction::increasing : Direction::decreasing;
        int i = n_diffs - 1;
        while (i >= 0) {
            const int s = diff_sign(i);
            if (s != 0 && s != sign) break;
            --i;
        }
        v.threshold_z0 = zs[static_cast<std::size_t>(i + 1)];
    }

    // Eventual sign of the values over the same trailing window (exact sign,
    // so that magnitudes near underflow still count).
    bool any_pos = false, any_neg = false;
    for (int i = n - 1 - window; i < n; ++i) {
        const double x = vals[static_cast<std::size_t>(i)];
        if (x > 0.0) any_pos = true;
        if (x < 0.0) any_neg = true;
    }
    if (any_pos && any_neg) {
        v.eventual_sign = EventualSign::mixed;
        v.sign_onset_z0 = grid_range.second;
    } else {
        v.eventual_sign = any_neg ? EventualSign::non_positive : EventualSign::non_negative;
        int i = n - 1;
        while (i >= 0) {
            const double x = vals[static_cast<std::size_t>(i)];
            if ((v.eventual_sign == EventualSign::non_positive && x > 0.0) ||
                (v.eventual_sign == EventualSign::non_negative && x < 0.0))
                break;
            --i;
        }
        v.sign_onset_z0 = zs[static_cast<std::size_t>(std::min(i + 1, n - 1))];
    }
    return v;
}

TailClass tail_classify(const DistributionSpec& d, std::span<const double> lambdas,
                        std::pair<double, double> grid_range, int n_points) {
    if (lambdas.empty()) throw std::invalid_argument("tail_classify: empty lambda ladder");
    if (n_points < 16) throw std::invalid_argument("tail_classify: need n_points >= 16");
    const double edge_surv = d.survival(grid_range.second);
    if (!(edge_surv < 1e-6)) {
        throw std::invalid_argument("tail_classify: right grid edge not deep enough into the tail");
    }

    TailClass out;
    bool all_growing = true;
    std::optional<double> best_lambda;

    const double step = (grid_range.second - grid_range.first) / static_cast<double>(n_points - 1);
    std::vector<double> logv(static_cast<std::size_t>(n_points));
    for (const double lam : lambdas) {
        if (!(lam > 0.0)) throw std::invalid_argument("tail_classify: lambdas must be positive");
        for (int i = 0; i < n_points; ++i) {
            const double z = grid_range.first + step * static_cast<double>(i);
            logv[static_cast<std::size_t>(i)] = lam * z + d.log_survival(z);
        }
        // growth test over the last fifth of the grid; flat counts as bounded
        const int w = std::max(2, n_points / 5);
        const double head = logv[static_cast<std::size_t>(n_points - w)];
        const double edge = logv[static_cast<std::size_t>(n_points - 1)];
        const bool growing = edge > head + 1e-9 * (std::fabs(head) + 1.0);
        if (!growing) {
            all_growing = false;
            if (!best_lambda || lam > *best_lambda) best_lambda = lam;
        }
        out.evidence.push_back({lam, edge, growing});
    }

    if (best_lambda) {
        out.klass = TailKind::light;
        out.lambda_star = best_lambda;
    } else if (all_growing) {
        out.klass = TailKind::heavy;
    } else {
        out.klass = TailKind::inconclusive;
    }
    return out;
}

TailClass tail_classify(const DistributionSpec& d, std::pair<double, double> grid_range) {
    // Default ladder 2^-6 .. 2^4.
    std::vector<double> ladder;
    for (int k = -6; k <= 4; ++k) ladder.push_back(std::pow(2.0, k));
    return tail_classify(d, ladder, grid_range);
}

double m_delta_beta_scaled(double delta, double beta, double z) {
    if (delta < 0.0 || delta >= 1.0) throw std::invalid_argument("m_delta_beta: delta outside [0,1)");
    if (!(beta > 1.0)) throw std::invalid_argument("m_delta_beta: beta must exceed 1");
    if (z < 0.0) throw std::invalid_argument("m_delta_beta: z must be nonnegative");
    if (z == 0.0) return 1.0 - delta;
    const double zb = std::pow(z, beta);
    // integral_z^inf e^{-t^beta} dt = e^{-z^beta} integral_0^inf e^{z^beta-(z+s)^beta} ds
    auto g = [&](double s) {
        const double e = std::pow(z + s, beta) - zb;
        return e > 745.0 ? 0.0 : std::exp(-e);
    };
    // By convexity (z+S)^beta - z^beta >= beta z^{beta-1} S, so the integrand
    // is below exp(-746) beyond this S.
    const double slope = beta * std::pow(z, beta - 1.0);
    const double s_hi = std::fmin(746.0 / slope, std::pow(zb + 746.0, 1.0 / beta) - z + 1.0);
    const auto r = quad::integrate(g, 0.0, s_hi, 0.0, 1e-10);
    if (!r.converged) throw std::runtime_error("m_delta_beta: tail quadrature failed");
    return (1.0 - delta) - slope * r.value;
}

double m_delta_beta(double delta, double beta, double z) {
    const double scaled = m_delta_beta_scaled(delta, beta, z);
    const double zb = z > 0.0 ? std::pow(z, beta) : 0.0;
    return std::exp(-zb) * scaled;
}

}  // namespace banditlab
