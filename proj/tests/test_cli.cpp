#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "corrgamma/approx.hpp"
#include "corrgamma/io.hpp"

using namespace corrgamma;
namespace fs = std::filesystem;
using Json = nlohmann::json;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
  Json json() const { return Json::parse(out); }
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "corrgamma");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const char* root = std::getenv("CORRGAMMA_SCRATCH");
  const fs::path dir = fs::path(root ? root : fs::temp_directory_path().string()) / "cli" / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("approx prints both parametrizations") {
  SUBCASE("perfectly correlated sum") {
    const auto r = invoke({"approx", "sum-equal", "--m", "5", "--rho", "1"});
    REQUIRE(r.code == cli::kPass);
    const auto j = r.json();
    CHECK(j["family"] == "gamma");
    CHECK(j["gamma"]["shape"] == 2.5);
    CHECK(j["gamma"]["scale"] == 4.0);
    CHECK(j["mean"] == 10.0);
    CHECK(j["variance"] == 40.0);
    CHECK(j["u_factor"] == 4.0);
  }

  SUBCASE("independent difference") {
    const auto r = invoke({"approx", "diff-chisq", "--m", "5", "--rho", "0"});
    REQUIRE(r.code == cli::kPass);
    const auto j = r.json();
    CHECK(j["family"] == "variance-gamma");
    CHECK(j["seneta"]["location"] == 0.0);
    CHECK(j["seneta"]["spread"].get<double>() == doctest::Approx(4.47213595).epsilon(1e-9));
    CHECK(j["seneta"]["skew"] == 0.0);
    CHECK(j["seneta"]["shape_inv"] == 0.4);
    CHECK(j["generalized_hyperbolic"]["location"] == 0.0);
    CHECK(j["generalized_hyperbolic"]["tail"].get<double>() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(j["generalized_hyperbolic"]["asym"] == 0.0);
    CHECK(j["generalized_hyperbolic"]["index"].get<double>() == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(j["variance"].get<double>() == doctest::Approx(20.0).epsilon(1e-15));
  }

  SUBCASE("gamma sum reports u separately from the scale") {
    const auto r = invoke({"approx", "gamma-sum", "--shapes", "2,4", "--theta", "3", "--rho", "0.6"});
    REQUIRE(r.code == cli::kPass);
    const auto j = r.json();
    const double u = j["u_factor"].get<double>();
    CHECK(u == doctest::Approx(1.5656854249492380).epsilon(1e-15));
    CHECK(j["gamma"]["scale"].get<double>() == doctest::Approx(3.0 * u).epsilon(1e-15));
    CHECK(j["mean"].get<double>() == doctest::Approx(18.0).epsilon(1e-14));
  }

  SUBCASE("degenerate difference") {
    const auto r = invoke({"approx", "diff-chisq", "--m", "5", "--rho", "1"});
    CHECK(r.code == cli::kUsage);
    CHECK(r.err.find("degenerate") != std::string::npos);
    CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
  }
}

TEST_CASE("approx output reconstructs identical objects") {
  const std::vector<std::vector<std::string>> cases = {
      {"sum-equal", "--m", "5", "--rho", "0.5"},
      {"sum-pair", "--m1", "5", "--m2", "7", "--rho", "0.3"},
      {"sum-n", "--dfs", "3,6,10", "--rho", "0.4"},
      {"gamma-sum", "--shapes", "2.5,3.5", "--theta", "1.7", "--rho", "0.2"},
      {"diff-chisq", "--m", "7", "--rho", "0.25"},
      {"diff-gamma", "--shapes", "3", "--theta", "1.5", "--rho", "0.5"},
  };
  for (const auto& args : cases) {
    std::vector<std::string> full{"approx"};
    full.insert(full.end(), args.begin(), args.end());
    const auto r = invoke(full);
    REQUIRE_MESSAGE(r.code == cli::kPass, args[0]);

    cli::ExperimentConfig config;
    config.kind = cli::parse_kind(args[0]);
    for (std::size_t i = 1; i + 1 < args.size(); i += 2) {
      const std::string& flag = args[i];
      const std::string& v = args[i + 1];
      auto list = [&] {
        std::vector<double> out;
        std::stringstream ss(v);
        for (std::string item; std::getline(ss, item, ',');) out.push_back(std::stod(item));
        return out;
      };
      if (flag == "--m") config.m = std::stod(v);
      if (flag == "--m1") config.m1 = std::stod(v);
      if (flag == "--m2") config.m2 = std::stod(v);
      if (flag == "--theta") config.theta = std::stod(v);
      if (flag == "--rho") config.rho = std::stod(v);
      if (flag == "--dfs") config.dfs = list();
      if (flag == "--shapes") config.shapes = list();
    }
    const Model model = cli::approximant(config);
    const auto j = r.json();
    if (j["family"] == "gamma") {
      CHECK(io::gamma_from_json(j["gamma"]) == std::get<GammaParams>(model));
    } else {
      const auto s = io::seneta_from_json(j["seneta"]);
      CHECK(s == std::get<VGSeneta>(model));
      CHECK(io::gen_hyp_from_json(j["generalized_hyperbolic"]) == seneta_to_gh(s));
    }
  }
}

TEST_CASE("usage errors exit with code 2") {
  CHECK(invoke({}).code == cli::kUsage);
  CHECK(invoke({"approx"}).code == cli::kUsage);
  CHECK(invoke({"approx", "sum-odd", "--m", "5", "--rho", "0"}).code == cli::kUsage);
  CHECK(invoke({"approx", "sum-equal", "--rho", "0.5"}).code == cli::kUsage);
  CHECK(invoke({"approx", "sum-equal", "--m", "5", "--rho", "1.5"}).code == cli::kUsage);
  CHECK(invoke({"approx", "sum-equal", "--m", "five", "--rho", "0.5"}).code == cli::kUsage);
  CHECK(invoke({"approx", "sum-n", "--dfs", "5", "--rho", "0.5"}).code == cli::kUsage);
  CHECK(invoke({"approx", "diff-gamma", "--shapes", "2,3", "--theta", "1", "--rho", "0.5"}).code ==
        cli::kUsage);
  CHECK(invoke({"approx", "sum-equal", "--m", "5", "--rho", "0.5", "--n", "100"}).code ==
        cli::kUsage);

  const auto dir = scratch("usage");
  CHECK(invoke({"sample", "sum-equal", "--m", "5", "--rho", "0.5", "--n", "99", "--out",
                dir.string()})
            .code == cli::kUsage);
  CHECK(invoke({"sample", "sum-equal", "--m", "2.5", "--rho", "0.5", "--method", "squared-normal",
                "--out", dir.string(), "--n", "100"})
            .code == cli::kUsage);
  CHECK(invoke({"sample", "sum-equal", "--m", "5", "--rho", "0.5", "--method", "bogus"}).code ==
        cli::kUsage);
  CHECK(invoke({"--help"}).code == cli::kPass);
}

TEST_CASE("I/O failures exit with code 3") {
  const auto dir = scratch("io");
  const auto blocker = dir / "not-a-dir";
  std::ofstream(blocker) << "x";
  CHECK(invoke({"sample", "sum-equal", "--m", "5", "--rho", "0.5", "--n", "100", "--out",
                (blocker / "sub").string()})
            .code == cli::kIo);
  CHECK(invoke({"approx", "sum-n", "--dfs", "5,5", "--rho-matrix", (dir / "missing.csv").string()})
            .code == cli::kIo);
  std::ofstream(dir / "bad.csv") << "a,b\n1,oops\n";
  CHECK(invoke({"approx", "sum-n", "--dfs", "5,5", "--rho-matrix", (dir / "bad.csv").string()})
            .code == cli::kIo);
}

TEST_CASE("sample") {
  const auto a = scratch("sample-a"), b = scratch("sample-b"), c = scratch("sample-c");
  const std::vector<std::string> base{"sample", "sum-equal", "--m", "5", "--rho", "0.5",
                                      "--method", "squared-normal", "--n", "100000"};
  auto with = [&](const fs::path& dir, const std::string& seed) {
    auto args = base;
    args.insert(args.end(), {"--seed", seed, "--out", dir.string()});
    return invoke(args);
  };
  const auto ra = with(a, "42");
  REQUIRE(ra.code == cli::kPass);
  REQUIRE(with(b, "42").code == cli::kPass);
  REQUIRE(with(c, "43").code == cli::kPass);
  const std::string csv = slurp(a / "samples.csv");
  CHECK(csv == slurp(b / "samples.csv"));
  CHECK(csv != slurp(c / "samples.csv"));
  CHECK(csv.substr(0, 6) == "x1,x2\n");

  const auto side = Json::parse(slurp(a / "samples.json"));
  CHECK(side == ra.json());
  CHECK(side["seed"] == 42);
  CHECK(side["method"] == "squared-normal");
  CHECK(side["n"] == 100000);
  CHECK(side["columns"] == Json::array({"x1", "x2"}));
  CHECK(side["target_correlation"][0][1] == 0.5);
  CHECK(side["normal_correlation"][0][1].get<double>() == doctest::Approx(std::sqrt(0.5)));
  CHECK(std::abs(side["sample_correlation"][0][1].get<double>() - 0.5) < 0.02);

  std::istringstream in(csv);
  const auto batch = io::read_sample_csv(in);
  CHECK(batch.n() == 100000);
  CHECK(batch.columns() == 2);
}

TEST_CASE("sample seed falls back to the environment") {
  const auto a = scratch("env-a"), b = scratch("env-b");
  REQUIRE(invoke({"sample", "diff-chisq", "--m", "3", "--rho", "0.2", "--n", "100", "--seed", "77",
                  "--out", a.string()})
              .code == cli::kPass);
  ::setenv("CORRGAMMA_SEED", "77", 1);
  const auto r = invoke({"sample", "diff-chisq", "--m", "3", "--rho", "0.2", "--n", "100", "--out",
                         b.string()});
  ::setenv("CORRGAMMA_SEED", "not-a-number", 1);
  const auto bad = invoke({"sample", "diff-chisq", "--m", "3", "--rho", "0.2", "--n", "100",
                           "--out", b.string()});
  ::unsetenv("CORRGAMMA_SEED");
  REQUIRE(r.code == cli::kPass);
  CHECK(slurp(a / "samples.csv") == slurp(b / "samples.csv"));
  CHECK(bad.code == cli::kUsage);
}

TEST_CASE("sample methods") {
  SUBCASE("non-integer dof defaults to the copula") {
    const auto dir = scratch("default-method");
    const auto r = invoke({"sample", "sum-equal", "--m", "2.5", "--rho", "0.5", "--n", "100",
                           "--out", dir.string()});
    REQUIRE(r.code == cli::kPass);
    CHECK(r.json()["method"] == "copula-nominal");
  }

  SUBCASE("calibrated copula hits the Pearson target") {
    const auto dir = scratch("calibrated");
    const auto r = invoke({"sample", "sum-pair", "--m1", "5", "--m2", "7", "--rho", "0.5",
                           "--method", "copula-calibrated", "--n", "100000", "--out", dir.string()});
    REQUIRE(r.code == cli::kPass);
    const auto j = r.json();
    CHECK(j["method"] == "copula-calibrated");
    CHECK(j["normal_correlation"][0][1].get<double>() > 0.5);
    CHECK(std::abs(j["sample_correlation"][0][1].get<double>() - 0.5) < 0.02);
  }

  SUBCASE("rho matrix file") {
    const auto dir = scratch("matrix");
    std::ofstream(dir / "rho.csv") << "x1,x2,x3\n1,0.2,0.4\n0.2,1,0.6\n0.4,0.6,1\n";
    const auto r = invoke({"sample", "sum-n", "--dfs", "4,4,4", "--rho-matrix",
                           (dir / "rho.csv").string(), "--n", "1000", "--out", dir.string()});
    REQUIRE(r.code == cli::kPass);
    const auto j = r.json();
    CHECK(j["method"] == "squared-normal");
    CHECK(j["columns"].size() == 3);
    CHECK(j["target_correlation"][1][2] == 0.6);
  }
}

TEST_CASE("validate") {
  SUBCASE("independent sum is exact") {
    const auto dir = scratch("validate-exact");
    const auto r = invoke({"validate", "sum-equal", "--m", "5", "--rho", "0", "--seed", "3",
                           "--out", dir.string()});
    REQUIRE(r.code == cli::kPass);
    const auto j = r.json();
    CHECK(j["pass"] == true);
    CHECK(j["report"]["n"] == 100000);
    CHECK(j["report"]["ks_distance"].get<double>() < 1.628 / std::sqrt(100000.0));

    const auto report = Json::parse(slurp(dir / "report.json"));
    CHECK(report == j["report"]);
    std::ifstream ecdf_file(dir / "ecdf.csv");
    const auto e = io::read_numeric_csv(ecdf_file);
    CHECK(e.rows() == 100000);
    CHECK(e(e.rows() - 1, 1) == 1.0);
    std::ifstream density_file(dir / "density.csv");
    const auto d = io::read_numeric_csv(density_file);
    CHECK(d.rows() == 512);
    CHECK(d.cols() == 2);
    CHECK(d(0, 0) == e(0, 0));
    CHECK(d(d.rows() - 1, 0) == e(e.rows() - 1, 0));
  }

  SUBCASE("threshold breach exits with code 1") {
    const auto dir = scratch("validate-fail");
    const auto r = invoke({"validate", "diff-chisq", "--m", "5", "--rho", "0.5", "--n", "1000",
                           "--ks-threshold", "1e-6", "--out", dir.string()});
    CHECK(r.code == cli::kFitFailed);
    CHECK(r.json()["pass"] == false);
    CHECK(fs::exists(dir / "report.json"));
  }

  SUBCASE("gamma sum runs end to end") {
    const auto dir = scratch("validate-gamma");
    const auto r = invoke({"validate", "gamma-sum", "--shapes", "2.5,3.5", "--theta", "2", "--rho",
                           "0.5", "--n", "20000", "--out", dir.string()});
    CHECK(r.code == cli::kPass);
    CHECK(r.json()["method"] == "copula-nominal");
  }

  SUBCASE("gamma difference runs end to end") {
    const auto dir = scratch("validate-diff-gamma");
    const auto r = invoke({"validate", "diff-gamma", "--shapes", "3", "--theta", "1.5", "--rho",
                           "0.25", "--n", "20000", "--out", dir.string()});
    CHECK(r.code == cli::kPass);
    CHECK(r.json()["approximant"]["family"] == "variance-gamma");
  }
}
