#include "corrgamma/samplers.hpp"

#include <cmath>
#include <numeric>
#include <string>
#include <utility>

#include "corrgamma/errors.hpp"
#include "corrgamma/specfun.hpp"

namespace corrgamma {

namespace {

constexpr double kMinEigenvalue = 1e-10;

std::vector<std::string> column_names(const char* prefix, Eigen::Index count) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(count));
  for (Eigen::Index i = 0; i < count; ++i) names.push_back(prefix + std::to_string(i + 1));
  return names;
}

void require_count(Eigen::Index n) {
  if (n < 0) throw DomainError("sample count must be nonnegative");
}

// Variables joined by correlation exactly 1 draw the same normal. `group[i]`
// indexes the reduced matrix, which must be positive definite.
struct ComonotoneGroups {
  std::vector<Eigen::Index> group;
  Eigen::MatrixXd reduced;
};

ComonotoneGroups comonotone_groups(const CorrelationMatrix& corr) {
  const Eigen::Index n = corr.size();
  std::vector<Eigen::Index> rep(static_cast<std::size_t>(n));
  std::iota(rep.begin(), rep.end(), Eigen::Index{0});
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      if (corr(i, j) == 1.0 && rep[i] == i) rep[i] = rep[j];
    }
  }
  std::vector<Eigen::Index> reps;
  ComonotoneGroups out;
  out.group.resize(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    if (rep[i] == i) {
      out.group[i] = static_cast<Eigen::Index>(reps.size());
      reps.push_back(i);
    } else {
      out.group[i] = out.group[rep[i]];
    }
  }
  const auto r = static_cast<Eigen::Index>(reps.size());
  out.reduced.resize(r, r);
  for (Eigen::Index a = 0; a < r; ++a) {
    for (Eigen::Index b = 0; b < r; ++b) out.reduced(a, b) = corr(reps[a], reps[b]);
  }
  return out;
}

// n x cols matrix of standard normals drawn row by row.
Eigen::MatrixXd standard_normals(Eigen::Index n, Eigen::Index cols, CounterRng& rng) {
  Eigen::MatrixXd e(n, cols);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index c = 0; c < cols; ++c) e(j, c) = rng.normal();
  }
  return e;
}

// F^{-1}(Phi(z)), switching to the upper tail for z > 0 so Phi(z) never rounds to 1.
double copula_transform(const GammaParams& marginal, double z) {
  if (z <= 0.0) return gamma_quantile(marginal, specfun::std_normal_cdf(z));
  return gamma_isf(marginal, specfun::std_normal_cdf(-z));
}

}  // namespace

std::string_view to_string(SampleMethod m) {
  switch (m) {
    case SampleMethod::Normal:
      return "normal";
    case SampleMethod::SquaredNormal:
      return "squared-normal";
    case SampleMethod::CopulaNominal:
      return "copula-nominal";
    case SampleMethod::CopulaCalibrated:
      return "copula-calibrated";
  }
  return "unknown";
}

SampleMethod parse_sample_method(std::string_view text) {
  for (auto m : {SampleMethod::Normal, SampleMethod::SquaredNormal, SampleMethod::CopulaNominal,
                 SampleMethod::CopulaCalibrated}) {
    if (to_string(m) == text) return m;
  }
  throw DomainError("unknown sampling method: " + std::string(text));
}

CorrelationMatrix::CorrelationMatrix(Eigen::MatrixXd entries) : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0) {
    throw DomainError("correlation matrix must be square and nonempty");
  }
  for (Eigen::Index i = 0; i < entries_.rows(); ++i) {
    if (entries_(i, i) != 1.0) throw DomainError("correlation matrix must have a unit diagonal");
    for (Eigen::Index j = 0; j < i; ++j) {
      if (!(std::abs(entries_(i, j) - entries_(j, i)) <= 1e-15)) {
        throw DomainError("correlation matrix must be symmetric");
      }
      if (!(std::abs(entries_(i, j)) <= 1.0)) {
        throw DomainError("correlations must lie in [-1, 1]");
      }
    }
  }
  if (min_eigenvalue() < -kMinEigenvalue) {
    throw DomainError("correlation matrix must be positive semi-definite");
  }
}

CorrelationMatrix CorrelationMatrix::pair(double rho) {
  Eigen::Matrix2d m;
  m << 1.0, rho, rho, 1.0;
  return CorrelationMatrix(m);
}

CorrelationMatrix CorrelationMatrix::identity(Eigen::Index n) {
  return CorrelationMatrix(Eigen::MatrixXd::Identity(n, n));
}

double CorrelationMatrix::min_eigenvalue() const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(entries_, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Eigen::MatrixXd cholesky_factor(const CorrelationMatrix& corr) {
  if (corr.min_eigenvalue() < kMinEigenvalue) {
    throw DecompositionError("correlation matrix is singular or not positive definite");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(corr.matrix());
  if (llt.info() != Eigen::Success) throw DecompositionError("Cholesky factorization failed");
  return llt.matrixL();
}

SampleBatch mvn_sample(const CorrelationMatrix& corr, Eigen::Index n, CounterRng& rng) {
  require_count(n);
  const Eigen::MatrixXd lower = cholesky_factor(corr);
  SampleBatch batch;
  batch.names = column_names("z", corr.size());
  batch.values = standard_normals(n, corr.size(), rng) * lower.transpose();
  batch.seed = rng.seed();
  batch.method = SampleMethod::Normal;
  return batch;
}

SampleBatch squared_normal_chisq_sample(double m, const CorrelationMatrix& chisq_corr,
                                        Eigen::Index n, CounterRng& rng) {
  require_count(n);
  if (!(std::isfinite(m) && m >= 1.0 && m == std::floor(m))) {
    throw DomainError("squared-normal construction needs a positive integer degrees of freedom");
  }
  if ((chisq_corr.matrix().array() < 0.0).any()) {
    throw DomainError("squared-normal construction cannot produce negative correlations");
  }
  const CorrelationMatrix normal_corr(chisq_corr.matrix().cwiseSqrt());
  const ComonotoneGroups groups = comonotone_groups(normal_corr);
  const Eigen::MatrixXd lower = cholesky_factor(CorrelationMatrix(groups.reduced));

  const auto dof = static_cast<Eigen::Index>(m);
  const Eigen::Index vars = chisq_corr.size();
  const Eigen::MatrixXd z = standard_normals(n * dof, lower.rows(), rng) * lower.transpose();

  SampleBatch batch;
  batch.names = column_names("x", vars);
  batch.values = Eigen::MatrixXd::Zero(n, vars);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index l = 0; l < dof; ++l) {
      const auto row = z.row(j * dof + l);
      for (Eigen::Index i = 0; i < vars; ++i) {
        const double v = row(groups.group[i]);
        batch.values(j, i) += v * v;
      }
    }
  }
  batch.seed = rng.seed();
  batch.method = SampleMethod::SquaredNormal;
  return batch;
}

SampleBatch bivariate_chisq_sample(double m, double rho_target, Eigen::Index n, CounterRng& rng) {
  if (rho_target < 0.0) {
    throw DomainError("squared-normal construction cannot produce negative correlations");
  }
  if (!(rho_target <= 1.0)) throw DomainError("rho must lie in [0, 1]");
  return squared_normal_chisq_sample(m, CorrelationMatrix::pair(rho_target), n, rng);
}

SampleBatch copula_gamma_sample(const std::vector<GammaParams>& marginals,
                                const CorrelationMatrix& corr_normal, Eigen::Index n,
                                CounterRng& rng, SampleMethod tag) {
  require_count(n);
  const auto vars = static_cast<Eigen::Index>(marginals.size());
  if (corr_normal.size() != vars) {
    throw DomainError("correlation matrix dimension must match the number of marginals");
  }
  const ComonotoneGroups groups = comonotone_groups(corr_normal);
  const Eigen::MatrixXd lower = cholesky_factor(CorrelationMatrix(groups.reduced));
  const Eigen::MatrixXd z = standard_normals(n, lower.rows(), rng) * lower.transpose();

  SampleBatch batch;
  batch.names = column_names("x", vars);
  batch.values.resize(n, vars);
  for (Eigen::Index j = 0; j < n; ++j) {
    for (Eigen::Index i = 0; i < vars; ++i) {
      batch.values(j, i) = copula_transform(marginals[i], z(j, groups.group[i]));
    }
  }
  batch.seed = rng.seed();
  batch.method = tag;
  return batch;
}

GaussHermiteRule gauss_hermite_normal(int n) {
  if (n < 1) throw DomainError("Gauss-Hermite rule needs at least one node");
  // Golub-Welsch on the Jacobi matrix of the probabilists' Hermite polynomials.
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(n, n);
  for (int k = 1; k < n; ++k) {
    jacobi(k, k - 1) = jacobi(k - 1, k) = std::sqrt(static_cast<double>(k));
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  GaussHermiteRule rule;
  rule.nodes = solver.eigenvalues();
  rule.weights = solver.eigenvectors().row(0).transpose().array().square();
  rule.weights /= rule.weights.sum();
  return rule;
}

namespace {

double copula_pearson_with_rule(const GammaParams& b, double rho,
                                const GaussHermiteRule& rule, const Eigen::VectorXd& qa,
                                const Eigen::VectorXd& qb) {
  const Eigen::VectorXd& w = rule.weights;
  const double mean_a = w.dot(qa);
  const double mean_b = w.dot(qb);
  const double var_a = w.dot((qa.array() - mean_a).square().matrix());
  const double var_b = w.dot((qb.array() - mean_b).square().matrix());

  const double s = std::sqrt(std::max(0.0, 1.0 - rho * rho));
  double cross = 0.0;
  for (Eigen::Index i = 0; i < rule.nodes.size(); ++i) {
    double inner = 0.0;
    if (s == 0.0) {
      inner = copula_transform(b, rule.nodes[i]) - mean_b;
    } else {
      for (Eigen::Index j = 0; j < rule.nodes.size(); ++j) {
        inner += w[j] * (copula_transform(b, rho * rule.nodes[i] + s * rule.nodes[j]) - mean_b);
      }
    }
    cross += w[i] * (qa[i] - mean_a) * inner;
  }
  return cross / std::sqrt(var_a * var_b);
}

Eigen::VectorXd transformed_nodes(const GammaParams& g, const GaussHermiteRule& rule) {
  Eigen::VectorXd q(rule.nodes.size());
  for (Eigen::Index i = 0; i < q.size(); ++i) q[i] = copula_transform(g, rule.nodes[i]);
  return q;
}

}  // namespace

double copula_pearson_correlation(const GammaParams& a, const GammaParams& b, double rho_normal,
                                  int nodes) {
  if (!(rho_normal >= -1.0 && rho_normal <= 1.0)) {
    throw DomainError("normal-scale correlation must lie in [-1, 1]");
  }
  const GaussHermiteRule rule = gauss_hermite_normal(nodes);
  return copula_pearson_with_rule(b, rho_normal, rule, transformed_nodes(a, rule),
                                  transformed_nodes(b, rule));
}

double calibrate_copula_correlation(const GammaParams& a, const GammaParams& b,
                                    double rho_pearson_target) {
  if (!(rho_pearson_target >= 0.0 && rho_pearson_target < 1.0)) {
    throw DomainError("target correlation must lie in [0, 1)");
  }
  if (rho_pearson_target == 0.0) return 0.0;

  const GaussHermiteRule rule = gauss_hermite_normal(96);
  const Eigen::VectorXd qa = transformed_nodes(a, rule);
  const Eigen::VectorXd qb = transformed_nodes(b, rule);
  auto excess = [&](double rho) {
    return copula_pearson_with_rule(b, rho, rule, qa, qb) - rho_pearson_target;
  };

  double lo = rho_pearson_target;
  double hi = 1.0;
  if (excess(hi) < 0.0) {
    throw NumericError("target correlation is not attainable with these marginals");
  }
  if (excess(lo) >= 0.0) return lo;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (excess(mid) < 0.0 ? lo : hi) = mid;
    if (hi - lo < 1e-10) return 0.5 * (lo + hi);
  }
  throw NumericError("copula calibration did not converge");
}

Eigen::MatrixXd sample_correlation(const SampleBatch& batch) {
  if (batch.n() < 2) throw DomainError("correlation needs at least two draws");
  const Eigen::MatrixXd centered = batch.values.rowwise() - batch.values.colwise().mean();
  const Eigen::MatrixXd cov = centered.transpose() * centered;
  const Eigen::VectorXd inv_sd = cov.diagonal().cwiseSqrt().cwiseInverse();
  return inv_sd.asDiagonal() * cov * inv_sd.asDiagonal();
}

}  // namespace corrgamma
