#include "cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <ostream>

#include <CLI11.hpp>

#include "corrgamma/approx.hpp"
#include "corrgamma/errors.hpp"
#include "corrgamma/io.hpp"

namespace corrgamma::cli {

namespace {

using Json = nlohmann::ordered_json;

constexpr std::pair<Kind, const char*> kKindNames[] = {
    {Kind::SumEqual, "sum-equal"}, {Kind::SumPair, "sum-pair"},     {Kind::SumN, "sum-n"},
    {Kind::GammaSum, "gamma-sum"}, {Kind::DiffChisq, "diff-chisq"}, {Kind::DiffGamma, "diff-gamma"},
};

bool is_difference(Kind k) { return k == Kind::DiffChisq || k == Kind::DiffGamma; }

double need(const std::optional<double>& v, const char* flag, Kind kind) {
  if (!v) throw DomainError(to_string(kind) + " requires " + flag);
  return *v;
}

Eigen::MatrixXd uniform_corr(Eigen::Index n, double rho) {
  Eigen::MatrixXd c = Eigen::MatrixXd::Constant(n, n, rho);
  c.diagonal().setOnes();
  return c;
}

Eigen::MatrixXd read_rho_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open correlation matrix file: " + path.string());
  return io::read_numeric_csv(in);
}

// Correlations for N-variable kinds: --rho-matrix wins over a scalar --rho.
Eigen::MatrixXd n_corr(const ExperimentConfig& c, Eigen::Index n) {
  if (c.rho_matrix) return read_rho_matrix(*c.rho_matrix);
  if (c.rho) return uniform_corr(n, *c.rho);
  throw DomainError(to_string(c.kind) + " requires --rho or --rho-matrix");
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

double diff_gamma_shape(const ExperimentConfig& c) {
  if (c.shapes.empty() || c.shapes.size() > 2 ||
      (c.shapes.size() == 2 && c.shapes[0] != c.shapes[1])) {
    throw DomainError("diff-gamma requires --shapes with one common shape");
  }
  return c.shapes[0];
}

CorrelatedSumSpec sum_spec(const ExperimentConfig& c) {
  switch (c.kind) {
    case Kind::SumEqual: {
      const double m = need(c.m, "--m", c.kind);
      return CorrelatedSumSpec::chi_squared(Eigen::Vector2d(m, m),
                                            uniform_corr(2, need(c.rho, "--rho", c.kind)));
    }
    case Kind::SumPair:
      return CorrelatedSumSpec::chi_squared(
          Eigen::Vector2d(need(c.m1, "--m1", c.kind), need(c.m2, "--m2", c.kind)),
          uniform_corr(2, need(c.rho, "--rho", c.kind)));
    case Kind::SumN:
      if (c.dfs.size() < 2) throw DomainError("sum-n requires --dfs with at least two values");
      return CorrelatedSumSpec::chi_squared(to_vector(c.dfs),
                                            n_corr(c, static_cast<Eigen::Index>(c.dfs.size())));
    case Kind::GammaSum:
      if (c.shapes.size() < 2) {
        throw DomainError("gamma-sum requires --shapes with at least two values");
      }
      return CorrelatedSumSpec::gamma(to_vector(c.shapes), need(c.theta, "--theta", c.kind),
                                      n_corr(c, static_cast<Eigen::Index>(c.shapes.size())));
    default:
      throw DomainError("not a sum kind");
  }
}

// Component marginals and their target (Pearson) correlation matrix.
struct Components {
  std::vector<GammaParams> marginals;
  Eigen::MatrixXd corr;
  std::optional<double> common_dof;  // all components chi2 with this dof
};

Components components(const ExperimentConfig& c) {
  Components out;
  if (c.kind == Kind::DiffChisq) {
    const double m = need(c.m, "--m", c.kind);
    out.marginals = {GammaParams::chi_squared(m), GammaParams::chi_squared(m)};
    out.corr = uniform_corr(2, need(c.rho, "--rho", c.kind));
    out.common_dof = m;
    return out;
  }
  if (c.kind == Kind::DiffGamma) {
    const GammaParams g(diff_gamma_shape(c), need(c.theta, "--theta", c.kind));
    out.marginals = {g, g};
    out.corr = uniform_corr(2, need(c.rho, "--rho", c.kind));
    return out;
  }
  const CorrelatedSumSpec spec = sum_spec(c);
  out.corr = spec.corr();
  for (Eigen::Index i = 0; i < spec.size(); ++i) {
    out.marginals.push_back(spec.is_chi_squared()
                                ? GammaParams::chi_squared(spec.values()[i])
                                : GammaParams(spec.values()[i], *spec.common_scale()));
  }
  if (spec.is_chi_squared() && (spec.values().array() == spec.values()[0]).all()) {
    out.common_dof = spec.values()[0];
  }
  return out;
}

bool integer_dof(const std::optional<double>& m) {
  return m && *m >= 1.0 && *m == std::floor(*m);
}

SampleMethod resolve_method(const ExperimentConfig& c, const Components& comp) {
  if (c.method) return *c.method;
  return integer_dof(comp.common_dof) ? SampleMethod::SquaredNormal : SampleMethod::CopulaNominal;
}

struct Draw {
  SampleBatch batch;
  Eigen::MatrixXd normal_corr;
};

Draw draw(const ExperimentConfig& c) {
  if (c.n < 100) throw DomainError("--n must be at least 100");
  const Components comp = components(c);
  const SampleMethod method = resolve_method(c, comp);
  CounterRng rng(c.seed);
  switch (method) {
    case SampleMethod::SquaredNormal: {
      if (!integer_dof(comp.common_dof)) {
        throw DomainError(
            "squared-normal requires chi-squared components with a common integer dof");
      }
      Draw d{squared_normal_chisq_sample(*comp.common_dof, CorrelationMatrix(comp.corr), c.n, rng),
             comp.corr.cwiseSqrt()};
      return d;
    }
    case SampleMethod::CopulaNominal:
      return {copula_gamma_sample(comp.marginals, CorrelationMatrix(comp.corr), c.n, rng, method),
              comp.corr};
    case SampleMethod::CopulaCalibrated: {
      Eigen::MatrixXd normal = comp.corr;
      for (Eigen::Index i = 0; i < normal.rows(); ++i) {
        for (Eigen::Index j = i + 1; j < normal.cols(); ++j) {
          const double target = comp.corr(i, j);
          double rz = 1.0;
          if (target < 1.0) {
            rz = calibrate_copula_correlation(comp.marginals[i], comp.marginals[j], target);
          } else if (!(comp.marginals[i] == comp.marginals[j])) {
            throw DomainError("correlation 1 needs identical marginals");
          }
          normal(i, j) = normal(j, i) = rz;
        }
      }
      return {copula_gamma_sample(comp.marginals, CorrelationMatrix(normal), c.n, rng, method),
              normal};
    }
    case SampleMethod::Normal:
      break;
  }
  throw DomainError("unsupported sampling method");
}

Json matrix_json(const Eigen::MatrixXd& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(m(r, k));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  return out;
}

void ensure_dir(const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
}

int cmd_approx(const ExperimentConfig& c, std::ostream& out) {
  out << approx_document(c).dump(2) << '\n';
  return kPass;
}

int cmd_sample(const ExperimentConfig& c, std::ostream& out) {
  const Draw d = draw(c);
  ensure_dir(c.output_dir);
  {
    auto csv = open_output(c.output_dir / "samples.csv");
    io::write_sample_csv(csv, d.batch);
  }
  Json sidecar{{"kind", to_string(c.kind)},
               {"method", std::string(to_string(d.batch.method))},
               {"seed", d.batch.seed},
               {"n", d.batch.n()},
               {"columns", d.batch.names},
               {"target_correlation", matrix_json(components(c).corr)},
               {"normal_correlation", matrix_json(d.normal_corr)},
               {"sample_correlation", matrix_json(sample_correlation(d.batch))}};
  {
    auto json = open_output(c.output_dir / "samples.json");
    json << sidecar.dump(2) << '\n';
  }
  out << sidecar.dump(2) << '\n';
  return kPass;
}

int cmd_validate(const ExperimentConfig& c, std::ostream& out) {
  const Model model = approximant(c);
  const Draw d = draw(c);
  const std::vector<double> combined = combine(c, d.batch);
  const GofReport report = moment_report(combined, model);
  const EcdfTable table = ecdf(combined);
  const GridSpec grid{table.sorted_values.front(), table.sorted_values.back(), c.grid_points};

  ensure_dir(c.output_dir);
  {
    auto f = open_output(c.output_dir / "report.json");
    f << io::to_json(report).dump(2) << '\n';
  }
  {
    auto f = open_output(c.output_dir / "ecdf.csv");
    io::write_ecdf_csv(f, table);
  }
  {
    auto f = open_output(c.output_dir / "density.csv");
    io::write_density_csv(f, density_table(model, grid));
  }

  const bool pass = report.ks_distance <= c.ks_threshold;
  Json summary{{"kind", to_string(c.kind)},
               {"method", std::string(to_string(d.batch.method))},
               {"seed", c.seed},
               {"approximant", approx_document(c)},
               {"report", io::to_json(report)},
               {"ks_threshold", c.ks_threshold},
               {"pass", pass}};
  out << summary.dump(2) << '\n';
  return pass ? kPass : kFitFailed;
}

std::uint64_t parse_seed(const char* text) {
  std::uint64_t v = 0;
  const char* end = text + std::char_traits<char>::length(text);
  const auto [ptr, ec] = std::from_chars(text, end, v);
  if (ec != std::errc() || ptr != end) {
    throw DomainError(std::string("CORRGAMMA_SEED is not an unsigned integer: ") + text);
  }
  return v;
}

}  // namespace

Kind parse_kind(const std::string& text) {
  for (const auto& [k, name] : kKindNames) {
    if (text == name) return k;
  }
  throw DomainError("unknown kind: " + text);
}

std::string to_string(Kind k) {
  for (const auto& [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "unknown";
}

Model approximant(const ExperimentConfig& c) {
  switch (c.kind) {
    case Kind::SumEqual:
      return approx_sum_chisq_equal(need(c.m, "--m", c.kind), need(c.rho, "--rho", c.kind));
    case Kind::SumPair:
      return approx_sum_chisq_pair(need(c.m1, "--m1", c.kind), need(c.m2, "--m2", c.kind),
                                   need(c.rho, "--rho", c.kind));
    case Kind::SumN:
    case Kind::GammaSum:
      return approx_sum(sum_spec(c)).gamma;
    case Kind::DiffChisq:
      return approx_diff_chisq(need(c.m, "--m", c.kind), need(c.rho, "--rho", c.kind));
    case Kind::DiffGamma:
      return approx_diff_gamma(diff_gamma_shape(c), need(c.theta, "--theta", c.kind),
                               need(c.rho, "--rho", c.kind));
  }
  throw DomainError("unknown kind");
}

nlohmann::ordered_json approx_document(const ExperimentConfig& c) {
  const Model model = approximant(c);
  Json doc{{"kind", to_string(c.kind)}};
  if (const auto* g = std::get_if<GammaParams>(&model)) {
    // u equals the scale for chi-squared sums and scale / theta for gamma sums.
    const double u = c.kind == Kind::GammaSum ? approx_sum(sum_spec(c)).moments.u_factor
                                              : g->scale();
    doc["family"] = "gamma";
    doc["gamma"] = io::to_json(*g);
    doc["mean"] = g->mean();
    doc["variance"] = g->variance();
    doc["u_factor"] = u;
  } else {
    const auto& vg = std::get<VGSeneta>(model);
    doc["family"] = "variance-gamma";
    doc["seneta"] = io::to_json(vg);
    doc["generalized_hyperbolic"] = io::to_json(seneta_to_gh(vg));
    doc["mean"] = vg.mean();
    doc["variance"] = vg.variance();
  }
  return doc;
}

SampleBatch draw_components(const ExperimentConfig& config) { return draw(config).batch; }

std::vector<double> combine(const ExperimentConfig& config, const SampleBatch& batch) {
  std::vector<double> out(static_cast<std::size_t>(batch.n()));
  for (Eigen::Index r = 0; r < batch.n(); ++r) {
    out[r] = is_difference(config.kind) ? batch.values(r, 0) - batch.values(r, 1)
                                        : batch.values.row(r).sum();
  }
  return out;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Gamma and Variance-Gamma approximations for correlated chi-squared sums and "
               "differences"};
  app.require_subcommand(1);

  ExperimentConfig config;
  std::string kind_text;
  std::string method_text;
  std::optional<std::uint64_t> seed;

  std::vector<std::string> kind_names;
  for (const auto& [k, name] : kKindNames) kind_names.emplace_back(name);

  auto add_common = [&](CLI::App* sub, bool sampling) {
    sub->add_option("kind", kind_text, "Experiment kind")->required()->check(
        CLI::IsMember(kind_names));
    auto optional_double = [&](const char* flag, std::optional<double>& dst, const char* help) {
      sub->add_option_function<double>(flag, [&dst](const double& v) { dst = v; }, help);
    };
    optional_double("--m", config.m, "Common degrees of freedom");
    optional_double("--m1", config.m1, "Degrees of freedom of the first variable");
    optional_double("--m2", config.m2, "Degrees of freedom of the second variable");
    optional_double("--theta", config.theta, "Common gamma scale");
    optional_double("--rho", config.rho, "Pearson correlation (all pairs)");
    sub->add_option("--dfs", config.dfs, "Comma-separated degrees of freedom")->delimiter(',');
    sub->add_option("--shapes", config.shapes, "Comma-separated gamma shapes")->delimiter(',');
    sub->add_option_function<std::string>(
        "--rho-matrix", [&](const std::string& p) { config.rho_matrix = p; },
        "CSV file with a header row and an N x N correlation matrix");
    if (!sampling) return;
    sub->add_option("--method", method_text, "Sampling method")
        ->check(CLI::IsMember({"squared-normal", "copula-nominal", "copula-calibrated"}));
    sub->add_option("--n", config.n, "Number of draws");
    sub->add_option_function<std::uint64_t>(
        "--seed", [&](const std::uint64_t& v) { seed = v; }, "Random seed (else CORRGAMMA_SEED)");
    sub->add_option("--out", config.output_dir, "Output directory");
    sub->add_option("--ks-threshold", config.ks_threshold, "Maximum KS distance for a pass");
  };

  auto* approx = app.add_subcommand("approx", "Print the approximating distribution");
  auto* sample = app.add_subcommand("sample", "Draw correlated components to CSV");
  auto* validate = app.add_subcommand("validate", "Simulate and measure the approximation fit");
  add_common(approx, false);
  add_common(sample, true);
  add_common(validate, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kPass : kUsage;
  }

  try {
    config.kind = parse_kind(kind_text);
    if (!method_text.empty()) config.method = parse_sample_method(method_text);
    if (seed) {
      config.seed = *seed;
    } else if (const char* env = std::getenv("CORRGAMMA_SEED")) {
      config.seed = parse_seed(env);
    }
    if (*approx) return cmd_approx(config, out);
    if (*sample) return cmd_sample(config, out);
    return cmd_validate(config, out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kIo;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const NumericError& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const nlohmann::json::exception& e) {
    err << "error: " << e.what() << '\n';
    return kUsage;
  }
}

}  // namespace corrgamma::cli
