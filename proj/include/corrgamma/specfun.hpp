#pragma once

// Special-function kernel shared by every distribution evaluation.
// All functions are pure and throw DomainError on arguments outside
// their stated domain.

namespace corrgamma::specfun {

/// ln Gamma(x) for x > 0.
double log_gamma(double x);

/// Regularized lower incomplete gamma P(k, x) = gamma(k, x) / Gamma(k).
double reg_inc_gamma_p(double k, double x);

/// Regularized upper incomplete gamma Q(k, x) = 1 - P(k, x), accurate in the upper tail.
double reg_inc_gamma_q(double k, double x);

/// x >= 0 with P(k, x) = p, for 0 <= p < 1.
double inv_reg_inc_gamma_p(double k, double p);

/// x >= 0 with Q(k, x) = q, for 0 < q <= 1.
double inv_reg_inc_gamma_q(double k, double q);

double std_normal_pdf(double z);
double std_normal_cdf(double z);
double std_normal_quantile(double p);

/// Modified Bessel function of the second kind K_order(x), real order.
/// Underflows to 0 for large x and overflows to +inf for huge order / tiny x.
double bessel_k(double order, double x);

/// ln K_order(x); finite wherever K itself would over- or underflow.
double log_bessel_k(double order, double x);

}  // namespace corrgamma::specfun
