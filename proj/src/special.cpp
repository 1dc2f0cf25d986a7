#include "banditlab/special.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace banditlab::special {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kSqrt2 = std::numbers::sqrt2;
const double kLogSqrt2Pi = 0.5 * std::log(2.0 * std::numbers::pi);

// Acklam's rational approximation to the standard normal quantile,
// ~1.15e-9 relative accuracy; refined below by Newton steps.
double acklam(double p) {
    static const double a[6] = {-3.969683028665376e+01, 2.209460984245205e+02,
                                -2.759285104469687e+02, 1.383577518672690e+02,
                                -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[5] = {-5.447609879822406e+01, 1.615858368580409e+02,
                                -1.556989798598866e+02, 6.680131188771972e+01,
                                -1.328068155288572e+01};
    static const double c[6] = {-7.784894002430293e-03, -3.223964580411365e-01,
                                -2.400758277161838e+00, -2.549732539343734e+00,
                                4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[4] = {7.784695709041462e-03, 3.224671290700398e-01,
                                2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        const double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

// Mills ratio R(z) = survival(z)/pdf(z) via the Laplace continued fraction
// R = 1/(z + 1/(z + 2/(z + 3/(...)))), accurate for large z.
double mills_ratio_cf(double z) {
    double t = 0.0;
    for (int k = 64; k >= 1; --k) t = static_cast<double>(k) / (z + t);
    return 1.0 / (z + t);
}

}  // namespace

double normal_pdf(double z) { return std::exp(-0.5 * z * z - kLogSqrt2Pi); }

double normal_log_pdf(double z) { return -0.5 * z * z - kLogSqrt2Pi; }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / kSqrt2); }

double normal_survival(double z) { return 0.5 * std::erfc(z / kSqrt2); }

double normal_log_survival(double z) {
    if (z < 8.0) return std::log(0.5 * std::erfc(z / kSqrt2));
    return normal_log_pdf(z) + std::log(mills_ratio_cf(z));
}

double normal_quantile(double u) {
    if (u < 0.0 || u > 1.0) throw std::invalid_argument("normal_quantile: u outside [0,1]");
    if (u == 0.0) return -kInf;
    if (u == 1.0) return kInf;
    double x = acklam(u);
    for (int it = 0; it < 2; ++it) {
        const double pdf = normal_pdf(x);
        if (!(pdf > 1e-290)) break;
        // Evaluate the CDF error on the numerically small side: for x < 0,
        // cdf(x) equals survival(-x).
        const double err = (x < 0.0) ? (normal_survival(-x) - u) : (normal_cdf(x) - u);
        x -= err / pdf;
    }
    return x;
}

namespace {

constexpr int kGammaMaxIter = 500;
constexpr double kGammaEps = 1e-16;

// Series for P(a,x), valid (and fast) for x < a+1. Returns log of the
// series sum; the caller applies the exp(-x + a log x - lgamma(a)) prefix.
double gamma_p_series_log(double a, double x) {
    double ap = a;
    double sum = 1.0 / a;
    double term = sum;
    for (int i = 0; i < kGammaMaxIter; ++i) {
        ap += 1.0;
        term *= x / ap;
        sum += term;
        if (std::fabs(term) < std::fabs(sum) * kGammaEps) break;
    }
    return std::log(sum);
}

// Modified-Lentz continued fraction for Q(a,x), valid for x >= a+1.
// Returns log of the continued-fraction factor.
double gamma_q_cf_log(double a, double x) {
    const double fpmin = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / fpmin;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= kGammaMaxIter; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < fpmin) d = fpmin;
        c = b + an / c;
        if (std::fabs(c) < fpmin) c = fpmin;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < kGammaEps) break;
    }
    return std::log(h);
}

double gamma_prefix_log(double a, double x) {
    return -x + a * std::log(x) - std::lgamma(a);
}

}  // namespace

double gamma_p(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("gamma_p: a must be positive");
    if (x < 0.0) throw std::invalid_argument("gamma_p: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) return std::exp(gamma_prefix_log(a, x) + gamma_p_series_log(a, x));
    return 1.0 - std::exp(gamma_prefix_log(a, x) + gamma_q_cf_log(a, x));
}

double gamma_q(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("gamma_q: a must be positive");
    if (x < 0.0) throw std::invalid_argument("gamma_q: x must be nonnegative");
    if (x == 0.0) return 1.0;
    if (x < a + 1.0) return 1.0 - std::exp(gamma_prefix_log(a, x) + gamma_p_series_log(a, x));
    return std::exp(gamma_prefix_log(a, x) + gamma_q_cf_log(a, x));
}

double log_gamma_q(double a, double x) {
    if (!(a > 0.0)) throw std::invalid_argument("log_gamma_q: a must be positive");
    if (x < 0.0) throw std::invalid_argument("log_gamma_q: x must be nonnegative");
    if (x == 0.0) return 0.0;
    if (x < a + 1.0) {
        // Q is not small in this branch; the direct form is accurate enough.
        const double p = std::exp(gamma_prefix_log(a, x) + gamma_p_series_log(a, x));
        return std::log1p(-p);
    }
    return gamma_prefix_log(a, x) + gamma_q_cf_log(a, x);
}

double gamma_p_inv(double a, double p) {
    if (!(a > 0.0)) throw std::invalid_argument("gamma_p_inv: a must be positive");
    if (p < 0.0 || p >= 1.0) {
        if (p == 1.0) return kInf;
        throw std::invalid_argument("gamma_p_inv: p outside [0,1]");
    }
    if (p == 0.0) return 0.0;

    // Bracket the root, then safeguarded Newton.
    double lo = 0.0;
    double hi = std::fmax(a, 1.0);
    while (gamma_p(a, hi) < p) {
        lo = hi;
        hi *= 2.0;
        if (hi > 1e300) return hi;
    }
    // Initial guess: small-x series inversion for small p, else midpoint.
    double x;
    if (p < 0.1) {
        x = std::exp((std::log(p) + std::lgamma(a + 1.0)) / a);
        if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    } else {
        x = 0.5 * (lo + hi);
    }
    for (int it = 0; it < 100; ++it) {
        const double err = gamma_p(a, x) - p;
        if (err > 0.0)
            hi = x;
        else
            lo = x;
        const double logf = gamma_prefix_log(a, x) - std::log(x);  // log pdf of Gamma(a,1)
        double step = err / std::exp(logf);
        double xn = x - step;
        if (!(xn > lo && xn < hi)) xn = 0.5 * (lo + hi);
        if (std::fabs(xn - x) < 1e-15 * (1.0 + std::fabs(x))) {
            x = xn;
            break;
        }
        x = xn;
    }
    return x;
}

}  // namespace banditlab::special
