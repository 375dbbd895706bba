#pragma once

#include <span>
#include <vector>

#include "corrgamma/random.hpp"

namespace corrgamma {

/// Gamma distribution in shape/scale form. A chi-squared with m degrees of
/// freedom is GammaParams(m / 2, 2).
class GammaParams {
 public:
  GammaParams(double shape, double scale);

  static GammaParams chi_squared(double dof) { return {0.5 * dof, 2.0}; }

  double shape() const { return shape_; }
  double scale() const { return scale_; }
  double mean() const { return shape_ * scale_; }
  double variance() const { return shape_ * scale_ * scale_; }

  bool operator==(const GammaParams&) const = default;

 private:
  double shape_;
  double scale_;
};

/// Variance-Gamma in the location / spread / skew / inverse-shape form:
/// X = location + skew * G + spread * sqrt(G) * Z with G ~ Gamma(1/shape_inv, shape_inv).
class VGSeneta {
 public:
  VGSeneta(double location, double spread, double skew, double shape_inv);

  double location() const { return location_; }
  double spread() const { return spread_; }
  double skew() const { return skew_; }
  double shape_inv() const { return shape_inv_; }

  double mean() const { return location_ + skew_; }
  double variance() const { return spread_ * spread_ + skew_ * skew_ * shape_inv_; }
  bool symmetric() const { return skew_ == 0.0; }

  bool operator==(const VGSeneta&) const = default;

 private:
  double location_;
  double spread_;
  double skew_;
  double shape_inv_;
};

/// Variance-Gamma as the lambda-indexed limit of the generalized hyperbolic
/// family: MGF e^{mu t} ((alpha^2 - beta^2) / (alpha^2 - (beta + t)^2))^lambda.
class VGGenHyp {
 public:
  VGGenHyp(double location, double tail, double asym, double index);

  double location() const { return location_; }
  double tail() const { return tail_; }
  double asym() const { return asym_; }
  double index() const { return index_; }

  bool operator==(const VGGenHyp&) const = default;

 private:
  double location_;
  double tail_;
  double asym_;
  double index_;
};

VGSeneta gh_to_seneta(const VGGenHyp& g);
VGGenHyp seneta_to_gh(const VGSeneta& s);

// Gamma

/// Density; at x = 0 returns 0 (shape > 1), 1/scale (shape = 1) or +inf (shape < 1).
double gamma_pdf(const GammaParams& p, double x);
double gamma_log_pdf(const GammaParams& p, double x);
double gamma_cdf(const GammaParams& p, double x);
/// Upper tail 1 - F(x), accurate when F(x) is close to 1.
double gamma_sf(const GammaParams& p, double x);
double gamma_quantile(const GammaParams& p, double prob);
/// Inverse of gamma_sf.
double gamma_isf(const GammaParams& p, double upper_prob);
/// (1 - scale t)^{-shape}; requires t < 1 / scale.
double gamma_mgf(const GammaParams& p, double t);
/// Marsaglia-Tsang squeeze/rejection, boosted for shape < 1.
double sample_gamma(const GammaParams& p, CounterRng& rng);

// Symmetric Variance-Gamma. Density and CDF require skew == 0.

/// Closed-form Bessel-K density; +inf at the center when 1/shape_inv <= 1/2.
double vg_pdf(const VGSeneta& p, double x);
double vg_log_pdf(const VGSeneta& p, double x);
/// CDF by double-exponential quadrature of vg_pdf, split at the center.
double vg_cdf(const VGSeneta& p, double x);
/// vg_cdf at every point of an ascending sequence. Integrates between
/// neighbouring points and re-anchors with vg_cdf, which is much cheaper
/// than independent evaluation for large samples.
std::vector<double> vg_cdf_sorted(const VGSeneta& p, std::span<const double> ascending);
/// (1 - t^2 spread^2 shape_inv / 2)^{-1/shape_inv} inside the finiteness region.
double vg_mgf(const VGSeneta& p, double t);
/// Half-width of the open interval of t on which vg_mgf is finite.
double vg_mgf_radius(const VGSeneta& p);
/// location + spread * sqrt(G) * Z, G ~ Gamma(1/shape_inv, shape_inv).
double sample_vg(const VGSeneta& p, CounterRng& rng);

}  // namespace corrgamma
