#pragma once

// Scalar special functions backing the distribution catalog: standard normal
// helpers (including tail-safe log survival and a refined quantile) and the
// regularized incomplete gamma functions.

namespace banditlab::special {

double normal_pdf(double z);
double normal_cdf(double z);
double normal_survival(double z);
double normal_log_pdf(double z);
// log(1 - Phi(z)); switches to a Mills-ratio continued fraction deep in the
// upper tail where erfc underflows.
double normal_log_survival(double z);
double normal_quantile(double u);

// Regularized lower/upper incomplete gamma P(a,x), Q(a,x), a > 0, x >= 0.
double gamma_p(double a, double x);
double gamma_q(double a, double x);
// log Q(a,x), valid far into the tail where Q underflows.
double log_gamma_q(double a, double x);
// Inverse of P(a,.) on [0,1); bracketed Newton iteration.
double gamma_p_inv(double a, double p);

}  // namespace banditlab::special
