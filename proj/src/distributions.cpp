#include "corrgamma/distributions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include "corrgamma/errors.hpp"
#include "corrgamma/quadrature.hpp"
#include "corrgamma/specfun.hpp"

namespace corrgamma {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool positive_finite(double v) { return std::isfinite(v) && v > 0.0; }

void require_symmetric(const VGSeneta& p, const char* op) {
  if (!p.symmetric()) {
    throw DomainError(std::string(op) + ": only the symmetric case (skew = 0) is supported");
  }
}

// ln f at offset |x - location| = t for the symmetric VG.
double vg_log_pdf_offset(const VGSeneta& p, double t) {
  const double nu = p.shape_inv();
  const double sigma = p.spread();
  const double shape = 1.0 / nu;
  const double order = shape - 0.5;
  const double z = t * std::sqrt(2.0 / nu) / sigma;
  if (t == 0.0 || z == 0.0) {
    if (order <= 0.0) return kInf;
    // Limit of the Bessel form: Gamma(1/nu - 1/2) / (sqrt(2 pi nu) sigma Gamma(1/nu)).
    return specfun::log_gamma(order) - specfun::log_gamma(shape) -
           0.5 * std::log(2.0 * std::numbers::pi * nu) - std::log(sigma);
  }
  if (std::isinf(z)) return -kInf;
  // (t^2 nu / (2 sigma^2))^{order/2} == (z nu / 2)^{order}
  return std::numbers::ln2 - 0.5 * std::log(2.0 * std::numbers::pi) - std::log(sigma) -
         specfun::log_gamma(shape) - shape * std::log(nu) +
         order * (std::log(0.5 * nu) + std::log(z)) + specfun::log_bessel_k(order, z);
}

double vg_pdf_offset(const VGSeneta& p, double t) { return std::exp(vg_log_pdf_offset(p, t)); }

// Length scale of the exponential tail decay.
double vg_decay_length(const VGSeneta& p) {
  return p.spread() * std::sqrt(0.5 * p.shape_inv());
}

// Probability mass below location - d, for d > 0.
double vg_lower_mass(const VGSeneta& p, double d) {
  const double decay = vg_decay_length(p);
  double mass;
  if (d <= std::min(p.spread(), decay)) {
    const auto head = quad::tanh_sinh([&](double t) { return vg_pdf_offset(p, t); }, d, 1e-14);
    mass = 0.5 - head.value;
  } else {
    const auto tail = quad::exp_sinh(
        [&](double r) { return decay * vg_pdf_offset(p, d + decay * r); }, 1e-14);
    mass = tail.value;
  }
  return std::clamp(mass, 0.0, 0.5);
}

// Ten-point Gauss-Legendre rule on [-1, 1].
constexpr std::array<double, 5> kGlNodes{0.14887433898163122, 0.43339539412924721,
                                         0.67940956829902444, 0.86506336668898454,
                                         0.97390652851717174};
constexpr std::array<double, 5> kGlWeights{0.29552422471475298, 0.26926671930999652,
                                           0.21908636251598201, 0.14945134915058036,
                                           0.066671344308688069};

// Integral of the symmetric VG density over offsets [a, b], 0 < a < b.
double vg_segment_mass(const VGSeneta& p, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < kGlNodes.size(); ++i) {
    const double dx = half * kGlNodes[i];
    sum += kGlWeights[i] * (vg_pdf_offset(p, mid - dx) + vg_pdf_offset(p, mid + dx));
  }
  return sum * half;
}

}  // namespace

GammaParams::GammaParams(double shape, double scale) : shape_(shape), scale_(scale) {
  if (!positive_finite(shape)) throw DomainError("gamma: shape must be positive and finite");
  if (!positive_finite(scale)) throw DomainError("gamma: scale must be positive and finite");
}

VGSeneta::VGSeneta(double location, double spread, double skew, double shape_inv)
    : location_(location), spread_(spread), skew_(skew), shape_inv_(shape_inv) {
  if (!std::isfinite(location)) throw DomainError("variance-gamma: location must be finite");
  if (!positive_finite(spread)) throw DomainError("variance-gamma: spread must be positive");
  if (!std::isfinite(skew)) throw DomainError("variance-gamma: skew must be finite");
  if (!positive_finite(shape_inv)) throw DomainError("variance-gamma: shape_inv must be positive");
}

VGGenHyp::VGGenHyp(double location, double tail, double asym, double index)
    : location_(location), tail_(tail), asym_(asym), index_(index) {
  if (!std::isfinite(location)) throw DomainError("generalized hyperbolic: location must be finite");
  if (!std::isfinite(asym)) throw DomainError("generalized hyperbolic: beta must be finite");
  if (!(std::isfinite(tail) && tail > std::abs(asym))) {
    throw DomainError("generalized hyperbolic: alpha must exceed |beta|");
  }
  if (!positive_finite(index)) throw DomainError("generalized hyperbolic: lambda must be positive");
}

VGSeneta gh_to_seneta(const VGGenHyp& g) {
  const double gap = g.tail() * g.tail() - g.asym() * g.asym();
  const double spread = std::sqrt(2.0 * g.index() / gap);
  // skew = beta * spread^2, which reduces to skew = beta = 0 in the symmetric case.
  const double skew = g.asym() == 0.0 ? 0.0 : g.asym() * spread * spread;
  return {g.location(), spread, skew, 1.0 / g.index()};
}

VGGenHyp seneta_to_gh(const VGSeneta& s) {
  const double index = 1.0 / s.shape_inv();
  const double var = s.spread() * s.spread();
  const double asym = s.skew() == 0.0 ? 0.0 : s.skew() / var;
  return {s.location(), std::sqrt(2.0 * index / var + asym * asym), asym, index};
}

double gamma_log_pdf(const GammaParams& p, double x) {
  const double k = p.shape();
  if (x < 0.0 || std::isinf(x)) return -kInf;
  if (x == 0.0) {
    if (k > 1.0) return -kInf;
    if (k == 1.0) return -std::log(p.scale());
    return kInf;
  }
  return (k - 1.0) * std::log(x) - x / p.scale() - specfun::log_gamma(k) - k * std::log(p.scale());
}

double gamma_pdf(const GammaParams& p, double x) { return std::exp(gamma_log_pdf(p, x)); }

double gamma_cdf(const GammaParams& p, double x) {
  if (x <= 0.0) return 0.0;
  return specfun::reg_inc_gamma_p(p.shape(), x / p.scale());
}

double gamma_sf(const GammaParams& p, double x) {
  if (x <= 0.0) return 1.0;
  return specfun::reg_inc_gamma_q(p.shape(), x / p.scale());
}

double gamma_quantile(const GammaParams& p, double prob) {
  return p.scale() * specfun::inv_reg_inc_gamma_p(p.shape(), prob);
}

double gamma_isf(const GammaParams& p, double upper_prob) {
  return p.scale() * specfun::inv_reg_inc_gamma_q(p.shape(), upper_prob);
}

double gamma_mgf(const GammaParams& p, double t) {
  if (!(t * p.scale() < 1.0)) throw DomainError("gamma_mgf: t must be below 1/scale");
  return std::pow(1.0 - p.scale() * t, -p.shape());
}

double sample_gamma(const GammaParams& p, CounterRng& rng) {
  double k = p.shape();
  double boost = 1.0;
  if (k < 1.0) {
    // X_k = X_{k+1} * U^{1/k}
    boost = std::pow(rng.uniform(), 1.0 / k);
    k += 1.0;
  }
  const double d = k - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    const double z = rng.normal();
    double v = 1.0 + c * z;
    if (v <= 0.0) continue;
    v = v * v * v;
    const double u = rng.uniform();
    const double z2 = z * z;
    if (u < 1.0 - 0.0331 * z2 * z2 || std::log(u) < 0.5 * z2 + d * (1.0 - v + std::log(v))) {
      return d * v * boost * p.scale();
    }
  }
}

double vg_log_pdf(const VGSeneta& p, double x) {
  require_symmetric(p, "vg_pdf");
  if (std::isinf(x)) return -kInf;
  return vg_log_pdf_offset(p, std::abs(x - p.location()));
}

double vg_pdf(const VGSeneta& p, double x) { return std::exp(vg_log_pdf(p, x)); }

double vg_cdf(const VGSeneta& p, double x) {
  require_symmetric(p, "vg_cdf");
  if (std::isnan(x)) throw DomainError("vg_cdf: argument is NaN");
  const double t = x - p.location();
  if (t == 0.0) return 0.5;
  if (std::isinf(t)) return t < 0.0 ? 0.0 : 1.0;
  const double lower = vg_lower_mass(p, std::abs(t));
  return t < 0.0 ? lower : 1.0 - lower;
}

std::vector<double> vg_cdf_sorted(const VGSeneta& p, std::span<const double> ascending) {
  require_symmetric(p, "vg_cdf_sorted");
  const std::size_t n = ascending.size();
  std::vector<double> out(n);
  const double c = p.location();
  const double max_step = 0.1 * std::min(p.spread(), vg_decay_length(p));
  constexpr int kAnchorEvery = 1024;

  const auto first_right =
      static_cast<std::size_t>(std::upper_bound(ascending.begin(), ascending.end(), c) -
                               ascending.begin());
  const auto first_center =
      static_cast<std::size_t>(std::lower_bound(ascending.begin(), ascending.end(), c) -
                               ascending.begin());
  for (std::size_t i = first_center; i < first_right; ++i) out[i] = 0.5;

  // Walks outward from the center on one side; offsets grow monotonically.
  auto walk = [&](auto index_of, std::size_t count, double sign) {
    double prev_offset = 0.0;
    double prev_lower = 0.5;  // mass beyond the previous offset, on this side
    int since_anchor = kAnchorEvery;
    for (std::size_t j = 0; j < count; ++j) {
      const std::size_t i = index_of(j);
      const double offset = sign * (ascending[i] - c);
      const double width = offset - prev_offset;
      double lower;
      if (width == 0.0) {
        lower = prev_lower;
      } else if (since_anchor >= kAnchorEvery || prev_offset == 0.0 ||
                 width > 0.25 * prev_offset || width > max_step) {
        lower = vg_lower_mass(p, offset);
        since_anchor = 0;
      } else {
        lower = std::max(0.0, prev_lower - vg_segment_mass(p, prev_offset, offset));
        ++since_anchor;
      }
      out[i] = sign > 0.0 ? 1.0 - lower : lower;
      prev_offset = offset;
      prev_lower = lower;
    }
  };

  walk([&](std::size_t j) { return first_right + j; }, n - first_right, 1.0);
  walk([&](std::size_t j) { return first_center - 1 - j; }, first_center, -1.0);
  return out;
}

double vg_mgf(const VGSeneta& p, double t) {
  const double nu = p.shape_inv();
  const double base =
      1.0 - p.skew() * nu * t - 0.5 * p.spread() * p.spread() * nu * t * t;
  if (!(base > 0.0)) throw DomainError("vg_mgf: t outside the region where the MGF is finite");
  return std::exp(p.location() * t) * std::pow(base, -1.0 / nu);
}

double vg_mgf_radius(const VGSeneta& p) {
  require_symmetric(p, "vg_mgf_radius");
  return std::sqrt(2.0 / p.shape_inv()) / p.spread();
}

double sample_vg(const VGSeneta& p, CounterRng& rng) {
  const double nu = p.shape_inv();
  const double g = sample_gamma(GammaParams(1.0 / nu, nu), rng);
  return p.location() + p.skew() * g + p.spread() * std::sqrt(g) * rng.normal();
}

}  // namespace corrgamma
