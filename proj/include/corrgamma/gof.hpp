#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "corrgamma/distributions.hpp"

namespace corrgamma {

/// Asymptotic Kolmogorov-Smirnov critical coefficients: reject when D * sqrt(n) exceeds them.
inline constexpr double kKsCritical01 = 1.628;
inline constexpr double kKsCritical05 = 1.358;

/// Either approximant family.
using Model = std::variant<GammaParams, VGSeneta>;

double model_mean(const Model& model);
double model_variance(const Model& model);
double model_pdf(const Model& model, double x);
double model_cdf(const Model& model, double x);

struct EcdfTable {
  std::vector<double> sorted_values;
  std::size_t n() const { return sorted_values.size(); }
};

EcdfTable ecdf(std::span<const double> column);

/// Fraction of values <= x.
double ecdf_at(const EcdfTable& e, double x);

/// sup |ECDF - F| over the step discontinuities.
double ks_statistic(const EcdfTable& e, const std::function<double(double)>& cdf);

/// Same, given F already evaluated at every sorted value.
double ks_statistic_from_values(const EcdfTable& e, std::span<const double> cdf_values);

/// F(model) at every sorted value of the table, using the fast sorted path for VG.
std::vector<double> model_cdf_sorted(const Model& model, const EcdfTable& e);

double ks_statistic(const EcdfTable& e, const Model& model);

struct GofReport {
  double ks_distance = 0.0;
  double sample_mean = 0.0;
  double sample_variance = 0.0;  // unbiased
  double model_mean = 0.0;
  double model_variance = 0.0;
  std::size_t n = 0;
};

GofReport moment_report(std::span<const double> column, const Model& model);

struct GridSpec {
  double lo;
  double hi;
  std::size_t points;
};

struct DensityRow {
  double x;
  double pdf;
  bool pole;  // pdf is +inf here
};

std::vector<DensityRow> density_table(const Model& model, const GridSpec& grid);

double pearson_correlation(std::span<const double> x, std::span<const double> y);
/// Pearson correlation of mid-ranks.
double spearman_correlation(std::span<const double> x, std::span<const double> y);

}  // namespace corrgamma
