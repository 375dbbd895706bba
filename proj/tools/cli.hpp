#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "corrgamma/gof.hpp"
#include "corrgamma/samplers.hpp"

namespace corrgamma::cli {

enum class Kind { SumEqual, SumPair, SumN, GammaSum, DiffChisq, DiffGamma };

Kind parse_kind(const std::string& text);
std::string to_string(Kind k);

/// Stable process exit codes.
enum ExitCode : int { kPass = 0, kFitFailed = 1, kUsage = 2, kIo = 3 };

struct ExperimentConfig {
  Kind kind = Kind::SumEqual;
  std::optional<double> m, m1, m2, theta, rho;
  std::vector<double> dfs, shapes;
  std::optional<std::filesystem::path> rho_matrix;
  std::optional<SampleMethod> method;
  long long n = 100000;
  std::uint64_t seed = 1;
  std::filesystem::path output_dir = ".";
  double ks_threshold = 0.02;
  std::size_t grid_points = 512;
};

/// Parameters of the approximant under every parametrization, plus moments.
nlohmann::ordered_json approx_document(const ExperimentConfig& config);

/// The approximating distribution for a config.
Model approximant(const ExperimentConfig& config);

/// Component draws for a config (columns x1..xN).
SampleBatch draw_components(const ExperimentConfig& config);

/// Sum (or X1 - X2 for difference kinds) of the component columns.
std::vector<double> combine(const ExperimentConfig& config, const SampleBatch& batch);

/// Parses argv and dispatches to approx / sample / validate. Returns an ExitCode.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace corrgamma::cli
