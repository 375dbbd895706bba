#include "corrgamma/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "corrgamma/errors.hpp"

namespace corrgamma::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon() / 2.0;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 100000;

void require(bool ok, const char* what) {
  if (!ok) throw DomainError(what);
}

// ln(x^k e^{-x} / Gamma(k))
double log_gamma_kernel(double k, double x) { return k * std::log(x) - x - log_gamma(k); }

// Series for P(k, x); converges quickly for x < k + 1.
double series_p(double k, double x) {
  double ap = k;
  double term = 1.0 / k;
  double sum = term;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) {
      return sum * std::exp(log_gamma_kernel(k, x));
    }
  }
  throw NumericError("incomplete gamma series did not converge");
}

// Modified Lentz continued fraction for Q(k, x); converges quickly for x >= k + 1.
double continued_fraction_q(double k, double x) {
  double b = x + 1.0 - k;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - k);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) {
      return std::exp(log_gamma_kernel(k, x)) * h;
    }
  }
  throw NumericError("incomplete gamma continued fraction did not converge");
}

struct TailPair {
  double p;
  double q;
};

TailPair inc_gamma(double k, double x) {
  require(std::isfinite(k) && k > 0.0, "incomplete gamma: shape must be positive and finite");
  require(!std::isnan(x) && x >= 0.0, "incomplete gamma: x must be nonnegative");
  if (x == 0.0) return {0.0, 1.0};
  if (std::isinf(x)) return {1.0, 0.0};
  if (x < k + 1.0) {
    const double p = series_p(k, x);
    return {p, 1.0 - p};
  }
  const double q = continued_fraction_q(k, x);
  return {1.0 - q, q};
}

// Solves P(k, x) = p (lower == true) or Q(k, x) = q (lower == false).
// Halley steps inside a maintained bracket, bisection when a step leaves it.
double invert_inc_gamma(double k, double target, bool lower) {
  const double lgk = log_gamma(k);

  // Residual that increases in x.
  auto residual = [&](double x) {
    const TailPair t = inc_gamma(k, x);
    return lower ? t.p - target : target - t.q;
  };

  // Initial guess: small-x power law for the lower tail, Wilson-Hilferty otherwise.
  double x;
  const double p_lower = lower ? target : 1.0 - target;
  const double small_x = std::exp((std::log(p_lower) + log_gamma(k + 1.0)) / k);
  if (lower && small_x < 0.5 * k) {
    x = small_x;
  } else {
    const double z = lower ? std_normal_quantile(target) : -std_normal_quantile(target);
    const double c = 1.0 / (9.0 * k);
    const double base = 1.0 - c + z * std::sqrt(c);
    x = base > 0.0 ? k * base * base * base : small_x;
  }
  if (!(x > 0.0) || !std::isfinite(x)) x = k;

  double lo = 0.0;
  double hi = x;
  while (residual(hi) < 0.0) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi)) throw NumericError("inverse incomplete gamma: bracket overflow");
  }

  for (int i = 0; i < 400; ++i) {
    const double f = residual(x);
    if (f == 0.0) return x;
    if (f < 0.0) {
      lo = std::max(lo, x);
    } else {
      hi = std::min(hi, x);
    }
    const double log_pdf = (k - 1.0) * std::log(x) - x - lgk;
    double step = f / std::exp(log_pdf);
    const double curvature = (k - 1.0) / x - 1.0;
    const double halley = 1.0 - 0.5 * step * curvature;
    if (halley > 0.5 && halley < 2.0) step /= halley;
    double next = x - step;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (std::abs(next - x) <= 4.0 * kEps * x || hi - lo <= 4.0 * kEps * hi) return next;
    x = next;
  }
  throw NumericError("inverse incomplete gamma did not converge");
}

// Lower-tail standard normal quantile for 0 < p <= 0.5.
double normal_quantile_lower(double p) {
  // Rational approximation (relative error ~1e-9) followed by Halley polishing.
  static constexpr std::array<double, 6> a{-3.969683028665376e+01, 2.209460984245205e+02,
                                           -2.759285104469687e+02, 1.383577518672690e+02,
                                           -3.066479806614716e+01, 2.506628277459239e+00};
  static constexpr std::array<double, 5> b{-5.447609879822406e+01, 1.615858368580409e+02,
                                           -1.556989798598866e+02, 6.680131188771972e+01,
                                           -1.328068155288572e+01};
  static constexpr std::array<double, 6> c{-7.784894002430293e-03, -3.223964580411365e-01,
                                           -2.400758277161838e+00, -2.549732539343734e+00,
                                           4.374664141464968e+00,  2.938163982698783e+00};
  static constexpr std::array<double, 4> d{7.784695709041462e-03, 3.224671290700398e-01,
                                           2.445134137142996e+00, 3.754408661907416e+00};
  constexpr double p_low = 0.02425;

  double z;
  if (p < p_low) {
    const double q = std::sqrt(-2.0 * std::log(p));
    z = (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
        ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
  } else {
    const double q = p - 0.5;
    const double r = q * q;
    z = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
        (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
  }

  for (int i = 0; i < 3; ++i) {
    const double e = std_normal_cdf(z) - p;
    const double u = e * std::sqrt(2.0 * std::numbers::pi) * std::exp(0.5 * z * z);
    const double next = z - u / (1.0 + 0.5 * z * u);
    if (!std::isfinite(next)) break;
    if (next == z) break;
    z = next;
  }

  // Guaranteed-bracket fallback when polishing did not land within tolerance.
  if (!(std::abs(std_normal_cdf(z) - p) <= 1e-15 * std::max(p, 1e-300) + 1e-300)) {
    double lo = -40.0;
    double hi = 0.0;
    for (int i = 0; i < 200 && hi - lo > 1e-15; ++i) {
      const double mid = 0.5 * (lo + hi);
      (std_normal_cdf(mid) < p ? lo : hi) = mid;
    }
    z = 0.5 * (lo + hi);
  }
  return z;
}

// Reciprocal gamma Taylor coefficients: 1/Gamma(z) = sum_{k>=1} kRecipGamma[k-1] z^k.
constexpr std::array<double, 28> kRecipGamma{
    1.0,
    0.57721566490153286061,
    -0.65587807152025388108,
    -0.042002635034095235529,
    0.1665386113822914895,
    -0.042197734555544336748,
    -0.0096219715278769735621,
    0.0072189432466630995424,
    -0.0011651675918590651121,
    -0.00021524167411495097282,
    0.00012805028238811618615,
    -0.000020134854780788238656,
    -1.2504934821426706573e-6,
    1.1330272319816958824e-6,
    -2.0563384169776071035e-7,
    6.1160951044814158179e-9,
    5.0020076444692229301e-9,
    -1.1812745704870201446e-9,
    1.0434267116911005105e-10,
    7.782263439905071254e-12,
    -3.6968056186422057082e-12,
    5.100370287454475979e-13,
    -2.0583260535665067832e-14,
    -5.3481225394230179824e-15,
    1.2267786282382607902e-15,
    -1.1812593016974587695e-16,
    1.1866922547516003326e-18,
    1.4123806553180317816e-18,
};

// Temme's auxiliary gamma combinations for |mu| <= 1/2:
//   gam1 = (1/Gamma(1-mu) - 1/Gamma(1+mu)) / (2 mu),  gam2 = (1/Gamma(1-mu) + 1/Gamma(1+mu)) / 2.
void temme_gammas(double mu, double& gam1, double& gam2) {
  const double mu2 = mu * mu;
  gam1 = 0.0;
  gam2 = 0.0;
  // Horner from the highest even/odd coefficient down.
  for (int k = static_cast<int>(kRecipGamma.size()); k >= 1; --k) {
    const double ck = kRecipGamma[k - 1];
    if (k % 2 == 0) {
      gam1 = gam1 * mu2 + ck;
    } else {
      gam2 = gam2 * mu2 + ck;
    }
  }
  gam1 = -gam1;
}

// Value represented as mantissa * exp(log_scale) so recurrences cannot overflow.
struct Scaled {
  double value;
  double log_scale;
};

// K_mu(x) and K_{mu+1}(x) for |mu| <= 1/2, each with its own log scale.
void bessel_k_pair(double mu, double x, Scaled& k_mu, Scaled& k_mu1) {
  const double mu2 = mu * mu;
  const double xi = 1.0 / x;
  if (x < 2.0) {
    // Temme's series.
    const double x2 = 0.5 * x;
    const double pimu = std::numbers::pi * mu;
    const double fact = std::abs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2);
    double e = mu * d;
    const double fact2 = std::abs(e) < kEps ? 1.0 : std::sinh(e) / e;
    double gam1, gam2;
    temme_gammas(mu, gam1, gam2);
    const double gampl = gam2 - mu * gam1;  // 1/Gamma(1+mu)
    const double gammi = gam2 + mu * gam1;  // 1/Gamma(1-mu)
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl;
    double q = 0.5 / (e * gammi);
    double c = 1.0;
    d = x2 * x2;
    double sum1 = p;
    int i = 1;
    for (; i < kMaxIter; ++i) {
      ff = (i * ff + p + q) / (i * static_cast<double>(i) - mu2);
      c *= d / i;
      p /= i - mu;
      q /= i + mu;
      const double del = c * ff;
      sum += del;
      sum1 += c * (p - i * ff);
      if (std::abs(del) < std::abs(sum) * kEps) break;
    }
    if (i == kMaxIter) throw NumericError("bessel_k: Temme series did not converge");
    k_mu = {sum, 0.0};
    // 1/x alone overflows for subnormal x; keep it in the scale.
    k_mu1 = {sum1 * 2.0, -std::log(x)};
    return;
  }

  // Steed's continued fraction, exponentially scaled by e^{x}.
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25 - mu2;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  int i = 2;
  for (; i < kMaxIter; ++i) {
    a -= 2 * (i - 1);
    c = -a * c / i;
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  if (i == kMaxIter) throw NumericError("bessel_k: continued fraction did not converge");
  h *= a1;
  const double scaled = std::sqrt(std::numbers::pi / (2.0 * x)) / s;
  k_mu = {scaled, -x};
  k_mu1 = {scaled * (mu + x + 0.5 - h) * xi, -x};
}

}  // namespace

double log_gamma(double x) {
  require(std::isfinite(x) && x > 0.0, "log_gamma: argument must be positive and finite");
#if defined(__GLIBC__)
  int sign = 0;
  return ::lgamma_r(x, &sign);
#else
  return std::lgamma(x);
#endif
}

double reg_inc_gamma_p(double k, double x) { return inc_gamma(k, x).p; }

double reg_inc_gamma_q(double k, double x) { return inc_gamma(k, x).q; }

double inv_reg_inc_gamma_p(double k, double p) {
  require(std::isfinite(k) && k > 0.0, "inv_reg_inc_gamma_p: shape must be positive");
  require(p >= 0.0 && p < 1.0, "inv_reg_inc_gamma_p: probability must lie in [0, 1)");
  if (p == 0.0) return 0.0;
  if (p > 0.5) return invert_inc_gamma(k, 1.0 - p, false);
  return invert_inc_gamma(k, p, true);
}

double inv_reg_inc_gamma_q(double k, double q) {
  require(std::isfinite(k) && k > 0.0, "inv_reg_inc_gamma_q: shape must be positive");
  require(q > 0.0 && q <= 1.0, "inv_reg_inc_gamma_q: probability must lie in (0, 1]");
  if (q == 1.0) return 0.0;
  if (q > 0.5) return invert_inc_gamma(k, 1.0 - q, true);
  return invert_inc_gamma(k, q, false);
}

double std_normal_pdf(double z) {
  return std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi);
}

double std_normal_cdf(double z) {
  require(!std::isnan(z), "std_normal_cdf: argument is NaN");
  return 0.5 * std::erfc(-z / std::numbers::sqrt2);
}

double std_normal_quantile(double p) {
  require(p > 0.0 && p < 1.0, "std_normal_quantile: probability must lie in (0, 1)");
  if (p == 0.5) return 0.0;
  if (p < 0.5) return normal_quantile_lower(p);
  return -normal_quantile_lower(1.0 - p);
}

double log_bessel_k(double order, double x) {
  require(!std::isnan(order), "bessel_k: order is NaN");
  require(!std::isnan(x) && x > 0.0, "bessel_k: argument must be positive");
  if (std::isinf(x)) return -std::numeric_limits<double>::infinity();
  order = std::abs(order);  // K_{-v} = K_v
  const double nl = std::floor(order + 0.5);
  const double mu = order - nl;

  Scaled k_cur, k_next;
  bessel_k_pair(mu, x, k_cur, k_next);

  // Upward recurrence K_{v+1} = K_{v-1} + (2v/x) K_v, run on r = K_{v+1} / K_v
  // so that nothing overflows when x is tiny.
  double log_k = std::log(k_cur.value) + k_cur.log_scale;
  if (nl == 0.0) return log_k;
  double log_r = std::log(k_next.value) + k_next.log_scale - log_k;
  log_k += log_r;
  const double log_x = std::log(x);
  const long steps = static_cast<long>(nl);
  for (long i = 1; i < steps; ++i) {
    const double inv_r = std::exp(-log_r);
    const double log_a = std::log(2.0 * (mu + static_cast<double>(i))) - log_x;
    log_r = log_a < 700.0 ? std::log(std::exp(log_a) + inv_r)
                          : log_a + std::log1p(inv_r * std::exp(-log_a));
    log_k += log_r;
  }
  return log_k;
}

double bessel_k(double order, double x) { return std::exp(log_bessel_k(order, x)); }

}  // namespace corrgamma::specfun
