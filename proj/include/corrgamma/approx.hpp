#pragma once

// Moment-matched approximants for sums and differences of linearly
// correlated chi-squared / gamma variables.
//
// Sums map to a gamma distribution whose mean and variance equal those of
// the correlated sum. Differences of identically distributed pairs map to a
// symmetric Variance-Gamma whose spread is shrunk by sqrt(1 - rho).

#include <optional>

#include <Eigen/Dense>

#include "corrgamma/distributions.hpp"

namespace corrgamma {

/// Component distributions and pairwise Pearson correlations of a sum.
///
/// Chi-squared form: `values` are degrees of freedom m_i, `common_scale` is
/// empty. Gamma form: `values` are shapes k_i with a shared scale theta.
class CorrelatedSumSpec {
 public:
  static CorrelatedSumSpec chi_squared(Eigen::VectorXd dofs, Eigen::MatrixXd corr);
  static CorrelatedSumSpec gamma(Eigen::VectorXd shapes, double common_scale, Eigen::MatrixXd corr);

  const Eigen::VectorXd& values() const { return values_; }
  const Eigen::MatrixXd& corr() const { return corr_; }
  std::optional<double> common_scale() const { return common_scale_; }
  Eigen::Index size() const { return values_.size(); }
  bool is_chi_squared() const { return !common_scale_.has_value(); }

 private:
  CorrelatedSumSpec(Eigen::VectorXd values, std::optional<double> scale, Eigen::MatrixXd corr);

  Eigen::VectorXd values_;
  std::optional<double> common_scale_;
  Eigen::MatrixXd corr_;
};

/// Target moments of a sum and its variance-inflation factor u.
struct MomentSummary {
  double mean;
  double variance;
  double u_factor;
};

struct SumApproximation {
  GammaParams gamma;
  MomentSummary moments;
};

/// X1 + X2 with X1, X2 ~ chi2(m) and correlation rho: Gamma(m / (1 + rho), 2 (1 + rho)).
GammaParams approx_sum_chisq_equal(double m, double rho);

/// X1 + X2 with X_i ~ chi2(m_i) and correlation rho.
GammaParams approx_sum_chisq_pair(double m1, double m2, double rho);

/// Sum of N correlated chi-squared variables: Gamma(sum m / u, u),
/// u = 2 (1 + 2 sum_{i<j} rho_ij sqrt(m_i m_j) / sum m).
SumApproximation approx_sum_chisq_n(const CorrelatedSumSpec& spec);

/// Sum of N correlated gammas with common scale theta: Gamma(sum k / u, theta u),
/// u = 1 + 2 sum_{i<j} rho_ij sqrt(k_i k_j) / sum k.
SumApproximation approx_sum_gamma_n(const CorrelatedSumSpec& spec);

/// Dispatches on the spec's form.
SumApproximation approx_sum(const CorrelatedSumSpec& spec);

/// X1 - X2 with X1, X2 ~ chi2(m) and correlation rho in [0, 1):
/// VG(0, 2 sqrt(m (1 - rho)), 0, 2 / m). Throws DegenerateError at rho = 1.
VGSeneta approx_diff_chisq(double m, double rho);

/// X1 - X2 with X1, X2 ~ Gamma(k, theta) and correlation rho in [0, 1):
/// VG(0, theta sqrt(2 k (1 - rho)), 0, 1 / k).
VGSeneta approx_diff_gamma(double k, double theta, double rho);

}  // namespace corrgamma
