#include "corrgamma/approx.hpp"

#include <cmath>
#include <string>
#include <utility>

#include "corrgamma/errors.hpp"

namespace corrgamma {

namespace {

void require_positive(double v, const char* what) {
  if (!(std::isfinite(v) && v > 0.0)) throw DomainError(std::string(what) + " must be positive");
}

void require_sum_rho(double rho) {
  if (!(rho >= 0.0 && rho <= 1.0)) throw DomainError("rho must lie in [0, 1] for sums");
}

void require_diff_rho(double rho) {
  if (rho == 1.0) {
    throw DegenerateError("rho = 1: the difference is degenerate (point mass at zero)");
  }
  if (!(rho >= 0.0 && rho < 1.0)) throw DomainError("rho must lie in [0, 1) for differences");
}

// sum_{i<j} rho_ij sqrt(v_i v_j); each unordered pair counted once.
double correlated_pair_sum(const Eigen::VectorXd& values, const Eigen::MatrixXd& corr) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    for (Eigen::Index j = i + 1; j < values.size(); ++j) {
      sum += corr(i, j) * std::sqrt(values[i] * values[j]);
    }
  }
  return sum;
}

// Shared by the pair and N-variable chi-squared forms so they agree bit for bit.
SumApproximation chisq_sum(double total_dof, double pair_sum) {
  const double u = 2.0 * (1.0 + 2.0 * pair_sum / total_dof);
  if (!(u > 0.0)) throw DomainError("u factor must be positive");
  return {GammaParams(total_dof / u, u), {total_dof, u * total_dof, u}};
}

}  // namespace

CorrelatedSumSpec::CorrelatedSumSpec(Eigen::VectorXd values, std::optional<double> scale,
                                     Eigen::MatrixXd corr)
    : values_(std::move(values)), common_scale_(scale), corr_(std::move(corr)) {
  const Eigen::Index n = values_.size();
  if (n < 2) throw DomainError("a correlated sum needs at least two components");
  if (corr_.rows() != n || corr_.cols() != n) {
    throw DomainError("correlation matrix dimension must match the number of components");
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    require_positive(values_[i], is_chi_squared() ? "degrees of freedom" : "shape");
    if (corr_(i, i) != 1.0) throw DomainError("correlation matrix must have a unit diagonal");
    for (Eigen::Index j = 0; j < n; ++j) {
      if (corr_(i, j) != corr_(j, i)) throw DomainError("correlation matrix must be symmetric");
      if (!(corr_(i, j) >= 0.0 && corr_(i, j) <= 1.0)) {
        throw DomainError("correlations must lie in [0, 1]");
      }
    }
  }
  if (common_scale_) require_positive(*common_scale_, "common scale");
}

CorrelatedSumSpec CorrelatedSumSpec::chi_squared(Eigen::VectorXd dofs, Eigen::MatrixXd corr) {
  return {std::move(dofs), std::nullopt, std::move(corr)};
}

CorrelatedSumSpec CorrelatedSumSpec::gamma(Eigen::VectorXd shapes, double common_scale,
                                           Eigen::MatrixXd corr) {
  return {std::move(shapes), common_scale, std::move(corr)};
}

GammaParams approx_sum_chisq_equal(double m, double rho) {
  require_positive(m, "degrees of freedom");
  require_sum_rho(rho);
  return {m / (1.0 + rho), 2.0 * (1.0 + rho)};
}

GammaParams approx_sum_chisq_pair(double m1, double m2, double rho) {
  require_positive(m1, "m1");
  require_positive(m2, "m2");
  require_sum_rho(rho);
  double pair = 0.0;
  pair += rho * std::sqrt(m1 * m2);
  return chisq_sum(m1 + m2, pair).gamma;
}

SumApproximation approx_sum_chisq_n(const CorrelatedSumSpec& spec) {
  if (!spec.is_chi_squared()) throw DomainError("approx_sum_chisq_n expects degrees of freedom");
  return chisq_sum(spec.values().sum(), correlated_pair_sum(spec.values(), spec.corr()));
}

SumApproximation approx_sum_gamma_n(const CorrelatedSumSpec& spec) {
  if (spec.is_chi_squared()) throw DomainError("approx_sum_gamma_n expects shapes and a scale");
  const double theta = *spec.common_scale();
  const double total_shape = spec.values().sum();
  const double u = 1.0 + 2.0 * correlated_pair_sum(spec.values(), spec.corr()) / total_shape;
  if (!(u > 0.0)) throw DomainError("u factor must be positive");
  return {GammaParams(total_shape / u, theta * u),
          {theta * total_shape, theta * theta * u * total_shape, u}};
}

SumApproximation approx_sum(const CorrelatedSumSpec& spec) {
  return spec.is_chi_squared() ? approx_sum_chisq_n(spec) : approx_sum_gamma_n(spec);
}

VGSeneta approx_diff_chisq(double m, double rho) {
  require_positive(m, "degrees of freedom");
  require_diff_rho(rho);
  return {0.0, 2.0 * std::sqrt(m * (1.0 - rho)), 0.0, 2.0 / m};
}

VGSeneta approx_diff_gamma(double k, double theta, double rho) {
  require_positive(k, "shape");
  require_positive(theta, "scale");
  require_diff_rho(rho);
  return {0.0, theta * std::sqrt(2.0 * k * (1.0 - rho)), 0.0, 1.0 / k};
}

}  // namespace corrgamma
