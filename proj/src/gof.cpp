#include "corrgamma/gof.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "corrgamma/errors.hpp"

namespace corrgamma {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::vector<double> mid_ranks(std::span<const double> v) {
  std::vector<std::size_t> order(v.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return v[a] < v[b]; });
  std::vector<double> ranks(v.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && v[order[j + 1]] == v[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

}  // namespace

double model_mean(const Model& model) {
  return std::visit([](const auto& m) { return m.mean(); }, model);
}

double model_variance(const Model& model) {
  return std::visit([](const auto& m) { return m.variance(); }, model);
}

double model_pdf(const Model& model, double x) {
  return std::visit(Overloaded{[x](const GammaParams& g) { return gamma_pdf(g, x); },
                               [x](const VGSeneta& v) { return vg_pdf(v, x); }},
                    model);
}

double model_cdf(const Model& model, double x) {
  return std::visit(Overloaded{[x](const GammaParams& g) { return gamma_cdf(g, x); },
                               [x](const VGSeneta& v) { return vg_cdf(v, x); }},
                    model);
}

EcdfTable ecdf(std::span<const double> column) {
  if (column.empty()) throw DomainError("ecdf needs a nonempty sample");
  EcdfTable e{std::vector<double>(column.begin(), column.end())};
  if (std::any_of(e.sorted_values.begin(), e.sorted_values.end(),
                  [](double v) { return std::isnan(v); })) {
    throw DomainError("ecdf: sample contains NaN");
  }
  std::sort(e.sorted_values.begin(), e.sorted_values.end());
  return e;
}

double ecdf_at(const EcdfTable& e, double x) {
  const auto it = std::upper_bound(e.sorted_values.begin(), e.sorted_values.end(), x);
  return static_cast<double>(it - e.sorted_values.begin()) / static_cast<double>(e.n());
}

double ks_statistic_from_values(const EcdfTable& e, std::span<const double> cdf_values) {
  if (cdf_values.size() != e.n()) throw DomainError("ks_statistic: size mismatch");
  const auto n = static_cast<double>(e.n());
  double d = 0.0;
  for (std::size_t j = 0; j < e.n(); ++j) {
    const double f = cdf_values[j];
    const double above = static_cast<double>(j + 1) / n - f;
    const double below = f - static_cast<double>(j) / n;
    d = std::max({d, above, below});
  }
  return std::min(d, 1.0);
}

double ks_statistic(const EcdfTable& e, const std::function<double(double)>& cdf) {
  std::vector<double> values(e.n());
  std::transform(e.sorted_values.begin(), e.sorted_values.end(), values.begin(), cdf);
  return ks_statistic_from_values(e, values);
}

std::vector<double> model_cdf_sorted(const Model& model, const EcdfTable& e) {
  return std::visit(
      Overloaded{[&](const GammaParams& g) {
                   std::vector<double> out(e.n());
                   std::transform(e.sorted_values.begin(), e.sorted_values.end(), out.begin(),
                                  [&](double x) { return gamma_cdf(g, x); });
                   return out;
                 },
                 [&](const VGSeneta& v) { return vg_cdf_sorted(v, e.sorted_values); }},
      model);
}

double ks_statistic(const EcdfTable& e, const Model& model) {
  return ks_statistic_from_values(e, model_cdf_sorted(model, e));
}

GofReport moment_report(std::span<const double> column, const Model& model) {
  if (column.size() < 2) throw DomainError("moment_report needs at least two values");
  const auto n = static_cast<double>(column.size());
  const double mean = std::accumulate(column.begin(), column.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : column) ss += (v - mean) * (v - mean);

  GofReport report;
  report.n = column.size();
  report.sample_mean = mean;
  report.sample_variance = ss / (n - 1.0);
  report.model_mean = model_mean(model);
  report.model_variance = model_variance(model);
  report.ks_distance = ks_statistic(ecdf(column), model);
  return report;
}

std::vector<DensityRow> density_table(const Model& model, const GridSpec& grid) {
  if (!(grid.lo < grid.hi) || grid.points < 2) {
    throw DomainError("density grid needs lo < hi and at least two points");
  }
  std::vector<DensityRow> rows;
  rows.reserve(grid.points);
  const double step = (grid.hi - grid.lo) / static_cast<double>(grid.points - 1);
  for (std::size_t i = 0; i < grid.points; ++i) {
    const double x = i + 1 == grid.points ? grid.hi : grid.lo + step * static_cast<double>(i);
    const double f = model_pdf(model, x);
    rows.push_back({x, f, std::isinf(f)});
  }
  return rows;
}

double pearson_correlation(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw DomainError("correlation needs two equal-length series of at least two values");
  }
  const auto n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
    syy += (y[i] - my) * (y[i] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

double spearman_correlation(std::span<const double> x, std::span<const double> y) {
  const auto rx = mid_ranks(x);
  const auto ry = mid_ranks(y);
  return pearson_correlation(rx, ry);
}

}  // namespace corrgamma
