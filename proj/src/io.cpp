#include "corrgamma/io.hpp"

#include <charconv>
#include <cmath>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <system_error>

#include "corrgamma/errors.hpp"

namespace corrgamma::io {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    fields.push_back(first == std::string::npos ? "" : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

double parse_double(const std::string& text) {
  if (text == "inf") return std::numeric_limits<double>::infinity();
  if (text == "-inf") return -std::numeric_limits<double>::infinity();
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) throw IoError("CSV: not a number: '" + text + "'");
  return v;
}

bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

// Header names and numeric rows, each row the same width as the header.
std::pair<std::vector<std::string>, Eigen::MatrixXd> read_table(std::istream& in) {
  std::string line;
  while (std::getline(in, line) && blank(line)) {
  }
  if (blank(line)) throw IoError("CSV: missing header row");
  const auto header = split_line(line);
  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (blank(line)) continue;
    const auto fields = split_line(line);
    if (fields.size() != header.size()) throw IoError("CSV: row width differs from header");
    std::vector<double> row;
    row.reserve(fields.size());
    for (const auto& f : fields) row.push_back(parse_double(f));
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()),
                    static_cast<Eigen::Index>(header.size()));
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) m(r, c) = rows[r][c];
  }
  return {header, m};
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_sample_csv(std::ostream& out, const SampleBatch& batch) {
  for (std::size_t i = 0; i < batch.names.size(); ++i) {
    out << (i ? "," : "") << batch.names[i];
  }
  out << '\n';
  for (Eigen::Index r = 0; r < batch.values.rows(); ++r) {
    for (Eigen::Index c = 0; c < batch.values.cols(); ++c) {
      out << (c ? "," : "") << format_double(batch.values(r, c));
    }
    out << '\n';
  }
  if (!out) throw IoError("failed writing sample CSV");
}

SampleBatch read_sample_csv(std::istream& in) {
  auto [header, values] = read_table(in);
  SampleBatch batch;
  batch.names = std::move(header);
  batch.values = std::move(values);
  return batch;
}

Eigen::MatrixXd read_numeric_csv(std::istream& in) { return read_table(in).second; }

void write_ecdf_csv(std::ostream& out, const EcdfTable& e) {
  out << "x,ecdf\n";
  const auto n = static_cast<double>(e.n());
  for (std::size_t j = 0; j < e.n(); ++j) {
    out << format_double(e.sorted_values[j]) << ','
        << format_double(static_cast<double>(j + 1) / n) << '\n';
  }
  if (!out) throw IoError("failed writing ECDF CSV");
}

void write_density_csv(std::ostream& out, const std::vector<DensityRow>& rows) {
  // Poles are written as "inf" in the pdf column.
  out << "x,pdf\n";
  for (const auto& row : rows) out << format_double(row.x) << ',' << format_double(row.pdf) << '\n';
  if (!out) throw IoError("failed writing density CSV");
}

nlohmann::ordered_json to_json(const GofReport& r) {
  return {{"ks_distance", r.ks_distance},       {"sample_mean", r.sample_mean},
          {"sample_variance", r.sample_variance}, {"model_mean", r.model_mean},
          {"model_variance", r.model_variance},   {"n", r.n}};
}

nlohmann::ordered_json to_json(const GammaParams& g) {
  return {{"shape", g.shape()}, {"scale", g.scale()}};
}

nlohmann::ordered_json to_json(const VGSeneta& v) {
  return {{"location", v.location()},
          {"spread", v.spread()},
          {"skew", v.skew()},
          {"shape_inv", v.shape_inv()}};
}

nlohmann::ordered_json to_json(const VGGenHyp& v) {
  return {{"location", v.location()}, {"tail", v.tail()}, {"asym", v.asym()}, {"index", v.index()}};
}

nlohmann::ordered_json to_json(const MomentSummary& m) {
  return {{"mean", m.mean}, {"variance", m.variance}, {"u_factor", m.u_factor}};
}

GammaParams gamma_from_json(const nlohmann::json& j) {
  return {j.at("shape").get<double>(), j.at("scale").get<double>()};
}

VGSeneta seneta_from_json(const nlohmann::json& j) {
  return {j.at("location").get<double>(), j.at("spread").get<double>(), j.at("skew").get<double>(),
          j.at("shape_inv").get<double>()};
}

VGGenHyp gen_hyp_from_json(const nlohmann::json& j) {
  return {j.at("location").get<double>(), j.at("tail").get<double>(), j.at("asym").get<double>(),
          j.at("index").get<double>()};
}

}  // namespace corrgamma::io
