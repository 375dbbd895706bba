#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "corrgamma/distributions.hpp"
#include "corrgamma/random.hpp"

namespace corrgamma {

enum class SampleMethod {
  Normal,           // plain multivariate normal draws
  SquaredNormal,    // sums of squared, pairwise-correlated normals
  CopulaNominal,    // Gaussian copula, normal-scale correlation = target
  CopulaCalibrated  // Gaussian copula, normal-scale correlation solved for the target
};

std::string_view to_string(SampleMethod m);
SampleMethod parse_sample_method(std::string_view text);

/// Symmetric PSD matrix with unit diagonal.
class CorrelationMatrix {
 public:
  explicit CorrelationMatrix(Eigen::MatrixXd entries);

  /// 2x2 matrix with off-diagonal rho.
  static CorrelationMatrix pair(double rho);
  static CorrelationMatrix identity(Eigen::Index n);

  const Eigen::MatrixXd& matrix() const { return entries_; }
  Eigen::Index size() const { return entries_.rows(); }
  double operator()(Eigen::Index i, Eigen::Index j) const { return entries_(i, j); }
  double min_eigenvalue() const;

 private:
  Eigen::MatrixXd entries_;
};

/// n draws of N variables, stored row-per-draw.
struct SampleBatch {
  std::vector<std::string> names;
  Eigen::MatrixXd values;  // n x N
  std::uint64_t seed = 0;
  SampleMethod method = SampleMethod::Normal;

  Eigen::Index n() const { return values.rows(); }
  Eigen::Index columns() const { return values.cols(); }
};

/// Lower Cholesky factor; throws DecompositionError when the smallest
/// eigenvalue is below 1e-10.
Eigen::MatrixXd cholesky_factor(const CorrelationMatrix& corr);

SampleBatch mvn_sample(const CorrelationMatrix& corr, Eigen::Index n, CounterRng& rng);

/// X_1 = sum_{i<=m} Z_i^2, X_2 = sum_{i<=m} W_i^2 with corr(Z_i, W_i) = sqrt(rho_target),
/// so that corr(X_1, X_2) = rho_target. m must be a positive integer.
SampleBatch bivariate_chisq_sample(double m, double rho_target, Eigen::Index n, CounterRng& rng);

/// N-variable squared-normal construction with common integer dof m. `chisq_corr`
/// holds the target chi-squared correlations; the normals use their square roots.
SampleBatch squared_normal_chisq_sample(double m, const CorrelationMatrix& chisq_corr,
                                        Eigen::Index n, CounterRng& rng);

/// Column i is F_i^{-1}(Phi(Z_i)), Z ~ MVN(0, corr_normal). Variables with
/// normal-scale correlation exactly 1 share one normal draw (comonotone).
SampleBatch copula_gamma_sample(const std::vector<GammaParams>& marginals,
                                const CorrelationMatrix& corr_normal, Eigen::Index n,
                                CounterRng& rng, SampleMethod tag = SampleMethod::CopulaNominal);

/// Pearson correlation of (F_a^{-1}(Phi(Z_1)), F_b^{-1}(Phi(Z_2))) at normal
/// correlation rho_normal, by tensor Gauss-Hermite quadrature.
double copula_pearson_correlation(const GammaParams& a, const GammaParams& b, double rho_normal,
                                  int nodes = 96);

/// Normal-scale correlation whose copula output has Pearson correlation
/// rho_pearson_target (to 1e-4). Bisection on [target, 1).
double calibrate_copula_correlation(const GammaParams& a, const GammaParams& b,
                                    double rho_pearson_target);

/// Gauss-Hermite rule for E[f(Z)], Z ~ N(0, 1). Weights sum to one.
struct GaussHermiteRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};
GaussHermiteRule gauss_hermite_normal(int n);

/// Pearson correlation matrix of the batch columns.
Eigen::MatrixXd sample_correlation(const SampleBatch& batch);

}  // namespace corrgamma
