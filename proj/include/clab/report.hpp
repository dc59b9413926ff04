#pragma once

#include "clab/brownian_sim.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace clab::report {

using json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "commutant-lab/report/1";
inline constexpr const char* kSidecarSchema = "commutant-lab/series/1";
inline constexpr const char* kCustomGatesSchema = "commutant-lab/gates/1";

// Shortest round-trip decimal form.
std::string format_double(double x);
// RFC 4180: quote when the field holds a comma, quote, CR or LF.
std::string csv_field(const std::string& s);

struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};
// Header row then records, CRLF line breaks.
void write_csv(std::ostream& os, const Table& t);
Table read_csv(std::istream& is);

// time, mean, stderr
Table series_table(const ObservableSeries& s);
// time, mean, stderr (entropy in nats), mean_bits, stderr_bits, purity_mean,
// purity_stderr, neg_log_mean_purity, neg_log_mean_purity_stderr
Table renyi2_table(const Renyi2Result& r);

json gate_set_json(const GateSet& g);
json universality_json(const UniversalityReport& r);
std::string short_label(Universality u);  // "universal", "weak", "strong"
json blocks_json(const BlockDecomposition& d);
// Sparse entries {row, col, re, im}; magnitudes below `prune` are dropped.
json operator_json(const Mat& m, double prune = 1e-12);
json basis_json(const OperatorBasis& b, double prune = 1e-12);
json series_summary_json(const ObservableSeries& s);
json config_json(const TrajectoryConfig& cfg);

// {"schema", "local_dims", "boundary", "generators": [{"label", "entries"}]}.
GateSet parse_custom_gates(const json& j);
json custom_gates_json(const GateSet& g);

// Throws Error naming the first missing or mistyped field.
void validate_report(const json& j);
void validate_sidecar(const json& j);

void write_json_file(const std::string& path, const json& j);
json read_json_file(const std::string& path);

}  // namespace clab::report
