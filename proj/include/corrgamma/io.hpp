#pragma once

// CSV and JSON interchange. CSV: comma separated, '.' decimal, mandatory
// header row, doubles in shortest round-trip form.

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "corrgamma/approx.hpp"
#include "corrgamma/gof.hpp"
#include "corrgamma/samplers.hpp"

namespace corrgamma::io {

/// Shortest decimal string that parses back to exactly `v`; "inf"/"-inf"/"nan" otherwise.
std::string format_double(double v);

void write_sample_csv(std::ostream& out, const SampleBatch& batch);
/// Column names and values; provenance (seed, method) lives in the JSON sidecar.
SampleBatch read_sample_csv(std::istream& in);

/// Numeric table with a header row; returns the data rows.
Eigen::MatrixXd read_numeric_csv(std::istream& in);

void write_ecdf_csv(std::ostream& out, const EcdfTable& e);
void write_density_csv(std::ostream& out, const std::vector<DensityRow>& rows);

nlohmann::ordered_json to_json(const GofReport& r);
nlohmann::ordered_json to_json(const GammaParams& g);
nlohmann::ordered_json to_json(const VGSeneta& v);
nlohmann::ordered_json to_json(const VGGenHyp& v);
nlohmann::ordered_json to_json(const MomentSummary& m);

GammaParams gamma_from_json(const nlohmann::json& j);
VGSeneta seneta_from_json(const nlohmann::json& j);
VGGenHyp gen_hyp_from_json(const nlohmann::json& j);

}  // namespace corrgamma::io
