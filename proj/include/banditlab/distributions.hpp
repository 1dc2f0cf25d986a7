#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "banditlab/rng.hpp"

namespace banditlab {

enum class DistKind {
    uniform01,
    bounded_table,
    gaussian,
    gumbel,
    exponential,
    pareto,
    weibull,
    frechet,
    exp_power,
};

std::string dist_kind_name(DistKind kind);
DistKind dist_kind_from_name(const std::string& name);

struct SupportDescriptor {
    double lower;
    double upper;
    bool bounded_right;
};

// Immutable perturbation distribution: a base shape plus a positive scale
// eta applied multiplicatively (the perturbation is eta*Z). All evaluation
// methods refer to the scaled variable:
//   cdf(z) = F(z/eta), pdf(z) = f(z/eta)/eta, quantile(u) = eta*Finv(u).
class DistributionSpec {
public:
    static DistributionSpec uniform01();
    // Piecewise-linear CDF through (z_k, u_k); u strictly increasing from 0
    // to 1. Knot positions are affinely normalized onto [0,1].
    static DistributionSpec bounded_table(std::vector<double> z, std::vector<double> u);
    static DistributionSpec gaussian();
    static DistributionSpec gumbel();
    static DistributionSpec exponential(double rate);
    static DistributionSpec pareto(double shape);   // support [1,inf), shape > 1
    static DistributionSpec weibull(double shape);  // shape > 0
    static DistributionSpec frechet(double shape);  // shape > 1
    static DistributionSpec exp_power(double beta); // density C_b exp(-z^b), z >= 0, beta > 1

    DistKind kind() const { return kind_; }
    double eta() const { return eta_; }
    std::string name() const { return dist_kind_name(kind_); }

    // Returns a copy with scale eta()*factor; scaling composes.
    DistributionSpec scale(double factor) const;

    double pdf(double z) const;
    double log_pdf(double z) const;
    double cdf(double z) const;
    double survival(double z) const;      // 1 - cdf, tail-accurate
    double log_survival(double z) const;  // log survival, tail-safe
    double quantile(double u) const;      // u in [0,1]
    double sample(Rng& rng) const;
    double mean() const;
    SupportDescriptor support() const;

    // Certified upper bound on E[max of n i.i.d. draws]. n may be any real
    // >= 1 (the bound formulas are defined for real n). Throws when the kind
    // has no registered tail envelope (heavy-tailed kinds).
    double emax_bound(double n_arms) const;
    bool has_emax_bound() const;

    // Density bound L of the normalized base distribution, for bounded kinds.
    std::optional<double> density_bound() const;

    // Integral of the scaled survival function over [a,b]; closed form where
    // available, adaptive quadrature otherwise.
    double survival_integral(double a, double b) const;

    nlohmann::json to_json() const;
    static DistributionSpec from_json(const nlohmann::json& j);

private:
    DistributionSpec(DistKind kind, double eta) : kind_(kind), eta_(eta) {}

    double base_pdf(double z) const;
    double base_log_pdf(double z) const;
    double base_cdf(double z) const;
    double base_survival(double z) const;
    double base_log_survival(double z) const;
    double base_quantile(double u) const;
    double base_mean() const;
    SupportDescriptor base_support() const;
    double base_survival_integral(double lo, double hi) const;

    DistKind kind_;
    double eta_ = 1.0;
    // shape-style parameter: rate (exponential), shape (pareto/weibull/frechet),
    // beta (exp_power); unused otherwise.
    double param_ = 0.0;
    double exp_power_norm_ = 0.0;  // cached C_beta
    // bounded_table knots (normalized z in [0,1], u in [0,1]) and cached stats
    std::vector<double> knots_z_;
    std::vector<double> knots_u_;
    double table_mean_ = 0.0;
    double table_density_bound_ = 0.0;
};

}  // namespace banditlab
