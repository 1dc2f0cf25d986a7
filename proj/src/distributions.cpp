#include "banditlab/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "banditlab/quadrature.hpp"
#include "banditlab/special.hpp"

namespace banditlab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double require_positive(double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        throw std::invalid_argument(std::string(what) + " must be positive and finite");
    }
    return v;
}

}  // namespace

std::string dist_kind_name(DistKind kind) {
    switch (kind) {
        case DistKind::uniform01: return "uniform01";
        case DistKind::bounded_table: return "bounded_table";
        case DistKind::gaussian: return "gaussian";
        case DistKind::gumbel: return "gumbel";
        case DistKind::exponential: return "exponential";
        case DistKind::pareto: return "pareto";
        case DistKind::weibull: return "weibull";
        case DistKind::frechet: return "frechet";
        case DistKind::exp_power: return "exp_power";
    }
    throw std::logic_error("unknown DistKind");
}

DistKind dist_kind_from_name(const std::string& name) {
    if (name == "uniform01") return DistKind::uniform01;
    if (name == "bounded_table") return DistKind::bounded_table;
    if (name == "gaussian") return DistKind::gaussian;
    if (name == "gumbel") return DistKind::gumbel;
    if (name == "exponential") return DistKind::exponential;
    if (name == "pareto") return DistKind::pareto;
    if (name == "weibull") return DistKind::weibull;
    if (name == "frechet") return DistKind::frechet;
    if (name == "exp_power") return DistKind::exp_power;
    throw std::invalid_argument("unknown distribution kind: " + name);
}

DistributionSpec DistributionSpec::uniform01() { return DistributionSpec(DistKind::uniform01, 1.0); }

DistributionSpec DistributionSpec::bounded_table(std::vector<double> z, std::vector<double> u) {
    if (z.size() != u.size() || z.size() < 2) {
        throw std::invalid_argument("bounded_table: need matching z/u arrays with >= 2 knots");
    }
    if (u.front() != 0.0 || u.back() != 1.0) {
        throw std::invalid_argument("bounded_table: u must run from 0 to 1");
    }
    for (std::size_t i = 1; i < z.size(); ++i) {
        if (!(z[i] > z[i - 1])) throw std::invalid_argument("bounded_table: z must be strictly increasing");
        if (!(u[i] > u[i - 1])) throw std::invalid_argument("bounded_table: u must be strictly increasing");
    }
    // Normalize the support onto [0,1] so that F(0)=0 and F(1)=1.
    const double lo = z.front();
    const double width = z.back() - z.front();
    DistributionSpec d(DistKind::bounded_table, 1.0);
    d.knots_z_.resize(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) d.knots_z_[i] = (z[i] - lo) / width;
    d.knots_z_.front() = 0.0;
    d.knots_z_.back() = 1.0;
    d.knots_u_ = std::move(u);
    double mean = 0.0, lbound = 0.0;
    for (std::size_t i = 0; i + 1 < d.knots_z_.size(); ++i) {
        const double dz = d.knots_z_[i + 1] - d.knots_z_[i];
        const double slope = (d.knots_u_[i + 1] - d.knots_u_[i]) / dz;
        mean += slope * 0.5 * (d.knots_z_[i + 1] * d.knots_z_[i + 1] - d.knots_z_[i] * d.knots_z_[i]);
        lbound = std::fmax(lbound, slope);
    }
    d.table_mean_ = mean;
    d.table_density_bound_ = lbound;
    return d;
}

DistributionSpec DistributionSpec::gaussian() { return DistributionSpec(DistKind::gaussian, 1.0); }

DistributionSpec DistributionSpec::gumbel() { return DistributionSpec(DistKind::gumbel, 1.0); }

DistributionSpec DistributionSpec::exponential(double rate) {
    DistributionSpec d(DistKind::exponential, 1.0);
    d.param_ = require_positive(rate, "exponential rate");
    return d;
}

DistributionSpec DistributionSpec::pareto(double shape) {
    if (!(shape > 1.0)) {
        throw std::invalid_argument("pareto: shape must exceed 1 (finite mean required)");
    }
    DistributionSpec d(DistKind::pareto, 1.0);
    d.param_ = shape;
    return d;
}

DistributionSpec DistributionSpec::weibull(double shape) {
    DistributionSpec d(DistKind::weibull, 1.0);
    d.param_ = require_positive(shape, "weibull shape");
    return d;
}

DistributionSpec DistributionSpec::frechet(double shape) {
    if (!(shape > 1.0)) {
        throw std::invalid_argument("frechet: shape must exceed 1 (finite mean required)");
    }
    DistributionSpec d(DistKind::frechet, 1.0);
    d.param_ = shape;
    return d;
}

DistributionSpec DistributionSpec::exp_power(double beta) {
    if (!(beta > 1.0)) throw std::invalid_argument("exp_power: beta must exceed 1");
    DistributionSpec d(DistKind::exp_power, 1.0);
    d.param_ = beta;
    // Normalizer 1/integral_0^inf exp(-t^beta) dt, computed once and cached.
    const double cutoff = std::pow(746.0, 1.0 / beta);
    auto integrand = [beta](double t) { return std::exp(-std::pow(t, beta)); };
    const auto r = quad::integrate(integrand, 0.0, cutoff, 0.0, 1e-13);
    if (!r.converged) throw std::runtime_error("exp_power: normalizer quadrature failed");
    d.exp_power_norm_ = 1.0 / r.value;
    return d;
}

DistributionSpec DistributionSpec::scale(double factor) const {
    require_positive(factor, "scale factor");
    DistributionSpec d = *this;
    d.eta_ *= factor;
    return d;
}

// ---- scaled wrappers ------------------------------------------------------

double DistributionSpec::pdf(double z) const { return base_pdf(z / eta_) / eta_; }

double DistributionSpec::log_pdf(double z) const { return base_log_pdf(z / eta_) - std::log(eta_); }

double DistributionSpec::cdf(double z) const { return base_cdf(z / eta_); }

double DistributionSpec::survival(double z) const { return base_survival(z / eta_); }

double DistributionSpec::log_survival(double z) const { return base_log_survival(z / eta_); }

double DistributionSpec::quantile(double u) const {
    if (u < 0.0 || u > 1.0) throw std::invalid_argument("quantile: u outside [0,1]");
    return eta_ * base_quantile(u);
}

double DistributionSpec::sample(Rng& rng) const { return eta_ * base_quantile(rng.uniform01()); }

double DistributionSpec::mean() const { return eta_ * base_mean(); }

SupportDescriptor DistributionSpec::support() const {
    SupportDescriptor s = base_support();
    s.lower = (std::isfinite(s.lower)) ? s.lower * eta_ : s.lower;
    s.upper = (std::isfinite(s.upper)) ? s.upper * eta_ : s.upper;
    return s;
}

double DistributionSpec::survival_integral(double a, double b) const {
    if (!(b > a)) return 0.0;
    return eta_ * base_survival_integral(a / eta_, b / eta_);
}

// ---- base (unscaled) evaluations ------------------------------------------

double DistributionSpec::base_pdf(double z) const {
    switch (kind_) {
        case DistKind::uniform01:
            return (z >= 0.0 && z <= 1.0) ? 1.0 : 0.0;
        case DistKind::bounded_table: {
            if (z < 0.0 || z > 1.0) return 0.0;
            auto it = std::upper_bound(knots_z_.begin(), knots_z_.end(), z);
            std::size_t i = static_cast<std::size_t>(std::distance(knots_z_.begin(), it));
            if (i == 0) i = 1;
            if (i >= knots_z_.size()) i = knots_z_.size() - 1;
            return (knots_u_[i] - knots_u_[i - 1]) / (knots_z_[i] - knots_z_[i - 1]);
        }
        case DistKind::gaussian:
            return special::normal_pdf(z);
        case DistKind::gumbel:
            return std::exp(-z - std::exp(-z));
        case DistKind::exponential:
            return z >= 0.0 ? param_ * std::exp(-param_ * z) : 0.0;
        case DistKind::pareto:
            return z >= 1.0 ? param_ * std::pow(z, -param_ - 1.0) : 0.0;
        case DistKind::weibull:
            if (z < 0.0) return 0.0;
            if (z == 0.0) return param_ == 1.0 ? 1.0 : (param_ < 1.0 ? kInf : 0.0);
            return param_ * std::pow(z, param_ - 1.0) * std::exp(-std::pow(z, param_));
        case DistKind::frechet:
            return z > 0.0 ? param_ * std::pow(z, -param_ - 1.0) * std::exp(-std::pow(z, -param_)) : 0.0;
        case DistKind::exp_power:
            return z >= 0.0 ? exp_power_norm_ * std::exp(-std::pow(z, param_)) : 0.0;
    }
    throw std::logic_error("unreachable");
}

double DistributionSpec::base_log_pdf(double z) const {
    switch (kind_) {
        case DistKind::gaussian:
            return special::normal_log_pdf(z);
        case DistKind::gumbel:
            return -z - std::exp(-z);
        case DistKind::exponential:
            return z >= 0.0 ? std::log(param_) - param_ * z : -kInf;
        case DistKind::pareto:
            return z >= 1.0 ? std::log(param_) - (param_ + 1.0) * std::log(z) : -kInf;
        case DistKind::weibull:
            if (z <= 0.0) return base_pdf(z) > 0.0 ? std::log(base_pdf(z)) : -kInf;
            return std::log(param_) + (param_ - 1.0) * std::log(z) - std::pow(z, param_);
        case DistKind::frechet:
            return z > 0.0 ? std::log(param_) - (param_ + 1.0) * std::log(z) - std::pow(z, -param_) : -kInf;
        case DistKind::exp_power:
            return z >= 0.0 ? std::log(exp_power_norm_) - std::pow(z, param_) : -kInf;
        default: {
            const double f = base_pdf(z);
            return f > 0.0 ? std::log(f) : -kInf;
        }
    }
}

double DistributionSpec::base_cdf(double z) const {
    switch (kind_) {
        case DistKind::uniform01:
            return std::clamp(z, 0.0, 1.0);
        case DistKind::bounded_table: {
            if (z <= 0.0) return 0.0;
            if (z >= 1.0) return 1.0;
            auto it = std::upper_bound(knots_z_.begin(), knots_z_.end(), z);
            std::size_t i = static_cast<std::size_t>(std::distance(knots_z_.begin(), it));
            if (i == 0) i = 1;
            if (i >= knots_z_.size()) i = knots_z_.size() - 1;
            const double t = (z - knots_z_[i - 1]) / (knots_z_[i] - knots_z_[i - 1]);
            return knots_u_[i - 1] + t * (knots_u_[i] - knots_u_[i - 1]);
        }
        case DistKind::gaussian:
            return special::normal_cdf(z);
        case DistKind::gumbel:
            return std::exp(-std::exp(-z));
        case DistKind::exponential:
            return z > 0.0 ? -std::expm1(-param_ * z) : 0.0;
        case DistKind::pareto:
            return z > 1.0 ? 1.0 - std::pow(z, -param_) : 0.0;
        case DistKind::weibull:
            return z > 0.0 ? -std::expm1(-std::pow(z, param_)) : 0.0;
        case DistKind::frechet:
            return z > 0.0 ? std::exp(-std::pow(z, -param_)) : 0.0;
        case DistKind::exp_power:
            return z > 0.0 ? special::gamma_p(1.0 / param_, std::pow(z, param_)) : 0.0;
    }
    throw std::logic_error("unreachable");
}

double DistributionSpec::base_survival(double z) const {
    switch (kind_) {
        case DistKind::gaussian:
            return special::normal_survival(z);
        case DistKind::gumbel:
            return -std::expm1(-std::exp(-z));
        case DistKind::exponential:
            return z > 0.0 ? std::exp(-param_ * z) : 1.0;
        case DistKind::pareto:
            return z > 1.0 ? std::pow(z, -param_) : 1.0;
        case DistKind::weibull:
            return z > 0.0 ? std::exp(-std::pow(z, param_)) : 1.0;
        case DistKind::frechet:
            return z > 0.0 ? -std::expm1(-std::pow(z, -param_)) : 1.0;
        case DistKind::exp_power:
            return z > 0.0 ? special::gamma_q(1.0 / param_, std::pow(z, param_)) : 1.0;
        default:
            return 1.0 - base_cdf(z);
    }
}

double DistributionSpec::base_log_survival(double z) const {
    switch (kind_) {
        case DistKind::gaussian:
            return special::normal_log_survival(z);
        case DistKind::gumbel: {
            if (z <= 0.0) return std::log(base_survival(z));
            // survival = -expm1(-e^{-z}); for large z this is e^{-z}(1 - e^{-z}/2 + ...)
            const double x = std::exp(-z);
            return std::log(-std::expm1(-x));
        }
        case DistKind::exponential:
            return z > 0.0 ? -param_ * z : 0.0;
        case DistKind::pareto:
            return z > 1.0 ? -param_ * std::log(z) : 0.0;
        case DistKind::weibull:
            return z > 0.0 ? -std::pow(z, param_) : 0.0;
        case DistKind::frechet:
            return z > 0.0 ? std::log(-std::expm1(-std::pow(z, -param_))) : 0.0;
        case DistKind::exp_power:
            return z > 0.0 ? special::log_gamma_q(1.0 / param_, std::pow(z, param_)) : 0.0;
        default: {
            const double s = base_survival(z);
            return s > 0.0 ? std::log(s) : -kInf;
        }
    }
}

double DistributionSpec::base_quantile(double u) const {
    switch (kind_) {
        case DistKind::uniform01:
            return u;
        case DistKind::bounded_table: {
            if (u <= 0.0) return 0.0;
            if (u >= 1.0) return 1.0;
            auto it = std::upper_bound(knots_u_.begin(), knots_u_.end(), u);
            std::size_t i = static_cast<std::size_t>(std::distance(knots_u_.begin(), it));
            if (i == 0) i = 1;
            if (i >= knots_u_.size()) i = knots_u_.size() - 1;
            const double t = (u - knots_u_[i - 1]) / (knots_u_[i] - knots_u_[i - 1]);
            return knots_z_[i - 1] + t * (knots_z_[i] - knots_z_[i - 1]);
        }
        case DistKind::gaussian:
            return special::normal_quantile(u);
        case DistKind::gumbel:
            if (u <= 0.0) return -kInf;
            if (u >= 1.0) return kInf;
            return -std::log(-std::log(u));
        case DistKind::exponential:
            if (u >= 1.0) return kInf;
            return -std::log1p(-u) / param_;
        case DistKind::pareto:
            if (u >= 1.0) return kInf;
            return std::pow(1.0 - u, -1.0 / param_);
        case DistKind::weibull:
            if (u >= 1.0) return kInf;
            return std::pow(-std::log1p(-u), 1.0 / param_);
        case DistKind::frechet:
            if (u <= 0.0) return 0.0;
            if (u >= 1.0) return kInf;
            return std::pow(-std::log(u), -1.0 / param_);
        case DistKind::exp_power:
            if (u >= 1.0) return kInf;
            return std::pow(special::gamma_p_inv(1.0 / param_, u), 1.0 / param_);
    }
    throw std::logic_error("unreachable");
}

double DistributionSpec::base_mean() const {
    switch (kind_) {
        case DistKind::uniform01:
            return 0.5;
        case DistKind::bounded_table:
            return table_mean_;
        case DistKind::gaussian:
            return 0.0;
        case DistKind::gumbel:
            return std::numbers::egamma;
        case DistKind::exponential:
            return 1.0 / param_;
        case DistKind::pareto:
            return param_ / (param_ - 1.0);
        case DistKind::weibull:
            return std::tgamma(1.0 + 1.0 / param_);
        case DistKind::frechet:
            return std::tgamma(1.0 - 1.0 / param_);
        case DistKind::exp_power:
            // integral z*C*exp(-z^b) dz = C*Gamma(2/b)/b
            return exp_power_norm_ * std::tgamma(2.0 / param_) / param_;
    }
    throw std::logic_error("unreachable");
}

SupportDescriptor DistributionSpec::base_support() const {
    switch (kind_) {
        case DistKind::uniform01:
        case DistKind::bounded_table:
            return {0.0, 1.0, true};
        case DistKind::gaussian:
        case DistKind::gumbel:
            return {-kInf, kInf, false};
        case DistKind::exponential:
        case DistKind::weibull:
        case DistKind::frechet:
        case DistKind::exp_power:
            return {0.0, kInf, false};
        case DistKind::pareto:
            return {1.0, kInf, false};
    }
    throw std::logic_error("unreachable");
}

bool DistributionSpec::has_emax_bound() const {
    switch (kind_) {
        case DistKind::pareto:
        case DistKind::frechet:
            return false;
        case DistKind::weibull:
            return param_ >= 1.0;
        default:
            return true;
    }
}

double DistributionSpec::emax_bound(double n_arms) const {
    if (!(n_arms >= 1.0)) throw std::invalid_argument("emax_bound: need n >= 1");
    const double log_n = std::log(n_arms);
    switch (kind_) {
        case DistKind::uniform01:
        case DistKind::bounded_table:
            // support normalized to [0,1]
            return eta_;
        case DistKind::gaussian:
            return eta_ * std::sqrt(2.0 * log_n);
        case DistKind::exponential:
            // survival(z) = exp(-rate z): envelope (C'=1, lambda=rate)
            return eta_ * (log_n + 1.0) / param_;
        case DistKind::gumbel: {
            // survival(z) <= exp(-z); restricted to the nonnegative part the
            // envelope constant picks up 1/P(Z>=0) = 1/(1 - 1/e).
            const double c_prime = 1.0 / (1.0 - std::exp(-1.0));
            return eta_ * (log_n + c_prime);
        }
        case DistKind::weibull:
            if (param_ < 1.0) {
                throw std::domain_error("emax_bound: weibull shape < 1 has no exponential tail envelope");
            }
            // exp(-z^k) <= e * exp(-z) for z >= 0 when k >= 1
            return eta_ * (log_n + std::numbers::e);
        case DistKind::exp_power:
            // survival(z) <= C_beta * e * exp(-z)
            return eta_ * (log_n + std::numbers::e * exp_power_norm_);
        case DistKind::pareto:
        case DistKind::frechet:
            throw std::domain_error("emax_bound: no sub-exponential tail envelope registered for " + name());
    }
    throw std::logic_error("unreachable");
}

std::optional<double> DistributionSpec::density_bound() const {
    switch (kind_) {
        case DistKind::uniform01:
            return 1.0;
        case DistKind::bounded_table:
            return table_density_bound_;
        default:
            return std::nullopt;
    }
}

double DistributionSpec::base_survival_integral(double lo, double hi) const {
    if (!(hi > lo)) return 0.0;
    const SupportDescriptor sup = base_support();
    double acc = 0.0;
    // Below the support the survival function is identically 1.
    if (lo < sup.lower) {
        acc += std::fmin(hi, sup.lower) - lo;
        lo = sup.lower;
        if (!(hi > lo)) return acc;
    }
    switch (kind_) {
        case DistKind::uniform01: {
            const double a = std::fmin(lo, 1.0), b = std::fmin(hi, 1.0);
            acc += (b - a) - 0.5 * (b * b - a * a);
            return acc;
        }
        case DistKind::gaussian: {
            // antiderivative of survival: z*survival(z) - pdf(z)
            auto anti = [](double z) {
                return z * special::normal_survival(z) - special::normal_pdf(z);
            };
            // large |z| guards: survival ~ 1 below, ~0 above
            if (hi > 40.0) {
                acc += (lo < 40.0) ? anti(40.0) - anti(lo) : 0.0;
                return acc;
            }
            acc += anti(hi) - anti(lo);
            return acc;
        }
        case DistKind::exponential: {
            acc += (std::exp(-param_ * lo) - std::exp(-param_ * hi)) / param_;
            return acc;
        }
        case DistKind::pareto: {
            // integral of z^{-a} from lo to hi, lo >= 1
            acc += (std::pow(lo, 1.0 - param_) - std::pow(hi, 1.0 - param_)) / (param_ - 1.0);
            return acc;
        }
        case DistKind::bounded_table: {
            // piecewise linear survival; integrate segment by segment
            const double b = std::fmin(hi, 1.0);
            double z0 = lo;
            for (std::size_t i = 1; i < knots_z_.size() && z0 < b; ++i) {
                const double z1 = std::fmin(knots_z_[i], b);
                if (z1 <= z0) continue;
                const double s0 = 1.0 - base_cdf(z0);
                const double s1 = 1.0 - base_cdf(z1);
                acc += 0.5 * (s0 + s1) * (z1 - z0);
                z0 = z1;
            }
            return acc;
        }
        default: {
            // generic: adaptive quadrature up to the effective tail cutoff
            const double cutoff = base_quantile(1.0 - 1e-14);
            const double b = std::fmin(hi, std::fmax(cutoff, lo));
            if (b > lo) {
                auto f = [this](double z) { return base_survival(z); };
                const auto r = quad::integrate(f, lo, b, 1e-12, 1e-10);
                acc += r.value;
            }
            return acc;
        }
    }
}

nlohmann::json DistributionSpec::to_json() const {
    nlohmann::json params = nlohmann::json::object();
    switch (kind_) {
        case DistKind::exponential: params["rate"] = param_; break;
        case DistKind::pareto:
        case DistKind::weibull:
        case DistKind::frechet: params["shape"] = param_; break;
        case DistKind::exp_power: params["beta"] = param_; break;
        case DistKind::bounded_table:
            params["knots_z"] = knots_z_;
            params["knots_u"] = knots_u_;
            break;
        default: break;
    }
    return nlohmann::json{{"kind", name()}, {"params", params}, {"eta", eta_}};
}

DistributionSpec DistributionSpec::from_json(const nlohmann::json& j) {
    const DistKind kind = dist_kind_from_name(j.at("kind").get<std::string>());
    const nlohmann::json params = j.value("params", nlohmann::json::object());
    DistributionSpec d = [&]() {
        switch (kind) {
            case DistKind::uniform01: return uniform01();
            case DistKind::bounded_table:
                return bounded_table(params.at("knots_z").get<std::vector<double>>(),
                                     params.at("knots_u").get<std::vector<double>>());
            case DistKind::gaussian: return gaussian();
            case DistKind::gumbel: return gumbel();
            case DistKind::exponential: return exponential(params.at("rate").get<double>());
            case DistKind::pareto: return pareto(params.at("shape").get<double>());
            case DistKind::weibull: return weibull(params.at("shape").get<double>());
            case DistKind::frechet: return frechet(params.at("shape").get<double>());
            case DistKind::exp_power: return exp_power(params.at("beta").get<double>());
        }
        throw std::logic_error("unreachable");
    }();
    const double eta = j.value("eta", 1.0);
    return d.scale(eta);
}

}  // namespace banditlab
