#include "clab/report.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

namespace clab::report {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) return "0";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

void write_csv(std::ostream& os, const Table& t) {
  auto row = [&os](const std::vector<std::string>& r) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << csv_field(r[i]);
    os << "\r\n";
  };
  row(t.header);
  for (const auto& r : t.rows) {
    if (r.size() != t.header.size()) throw Error("csv: row width differs from header");
    row(r);
  }
}

Table read_csv(std::istream& is) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> rec;
  std::string field;
  bool quoted = false, any = false;
  char c;
  auto end_record = [&] {
    rec.push_back(field);
    records.push_back(rec);
    rec.clear();
    field.clear();
    any = false;
  };
  while (is.get(c)) {
    if (quoted) {
      if (c == '"') {
        if (is.peek() == '"') {
          is.get(c);
          field += '"';
        } else {
          quoted = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    if (c == '"') {
      quoted = true;
      any = true;
    } else if (c == ',') {
      rec.push_back(field);
      field.clear();
      any = true;
    } else if (c == '\r') {
      if (is.peek() == '\n') is.get(c);
      end_record();
    } else if (c == '\n') {
      end_record();
    } else {
      field += c;
      any = true;
    }
  }
  if (quoted) throw Error("csv: unterminated quoted field");
  if (any || !rec.empty()) end_record();
  if (records.empty()) throw Error("csv: no header row");
  Table t;
  t.header = records.front();
  for (std::size_t i = 1; i < records.size(); ++i) {
    if (records[i].size() != t.header.size()) throw Error("csv: record " + std::to_string(i) + " has the wrong width");
    t.rows.push_back(records[i]);
  }
  return t;
}

Table series_table(const ObservableSeries& s) {
  Table t{{"time", "mean", "stderr"}, {}};
  for (std::size_t i = 0; i < s.times.size(); ++i)
    t.rows.push_back({format_double(s.times[i]), format_double(s.mean[i]), format_double(s.std_error[i])});
  return t;
}

Table renyi2_table(const Renyi2Result& r) {
  Table t{{"time", "mean", "stderr", "mean_bits", "stderr_bits", "purity_mean", "purity_stderr", "neg_log_mean_purity",
           "neg_log_mean_purity_stderr"},
          {}};
  const double to_bits = 1.0 / std::log(2.0);
  const auto& e = r.entropy;
  for (std::size_t i = 0; i < e.times.size(); ++i)
    t.rows.push_back({format_double(e.times[i]), format_double(e.mean[i]), format_double(e.std_error[i]),
                      format_double(e.mean[i] * to_bits), format_double(e.std_error[i] * to_bits),
                      format_double(r.purity.mean[i]), format_double(r.purity.std_error[i]),
                      format_double(r.neg_log_mean_purity[i]), format_double(r.neg_log_mean_purity_stderr[i])});
  return t;
}

json gate_set_json(const GateSet& g) {
  json labels = json::array();
  for (const auto& gen : g.generators) labels.push_back(gen.label);
  return json{{"name", g.name},
              {"length", g.geometry.num_sites},
              {"boundary", to_string(g.geometry.boundary)},
              {"local_dims", g.geometry.local_dims},
              {"include_identity", g.include_identity},
              {"generator_count", g.generators.size()},
              {"generators", labels}};
}

std::string short_label(Universality u) {
  switch (u) {
    case Universality::Universal: return "universal";
    case Universality::WeaklyNonUniversal: return "weak";
    case Universality::StronglyNonUniversal: return "strong";
  }
  return "unknown";
}

json universality_json(const UniversalityReport& r) {
  return json{{"classification", to_string(r.classification)},
              {"classification_short", short_label(r.classification)},
              {"dim_dla", r.dim_dla},
              {"dim_bond", r.dim_bond},
              {"dim_comm", r.dim_comm},
              {"dim_center", r.dim_center},
              {"dim_scomm", r.dim_scomm},
              {"dim_scommt", r.dim_scommt},
              {"codim", r.codim},
              {"codim_weak", r.codim_weak},
              {"semi_universal", r.semi_universal},
              {"constraint_notes", r.constraint_notes}};
}

json blocks_json(const BlockDecomposition& d) {
  json blocks = json::array();
  for (const auto& b : d.blocks)
    blocks.push_back(json{{"label", b.label},
                          {"D", b.krylov_dim},
                          {"d", b.degeneracy},
                          {"inside_bond", b.inside_bond},
                          {"krylov_consistent", b.krylov_consistent},
                          {"krylov_probe", b.krylov_probe}});
  return json{{"space", d.space_label}, {"space_dim", d.space_dim}, {"consistent", d.consistent()}, {"blocks", blocks}};
}

json operator_json(const Mat& m, double prune) {
  json entries = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      if (std::abs(m(r, c)) > prune)
        entries.push_back(json{{"row", r}, {"col", c}, {"re", m(r, c).real()}, {"im", m(r, c).imag()}});
  return json{{"dim", m.rows()}, {"entries", entries}};
}

json basis_json(const OperatorBasis& b, double prune) {
  json out = json::array();
  for (Eigen::Index k = 0; k < b.dim(); ++k) out.push_back(operator_json(b.element(k), prune));
  return out;
}

json series_summary_json(const ObservableSeries& s) {
  return json{{"time_average", s.time_average},
              {"time_average_stderr", s.time_average_stderr},
              {"window", {s.window_start, s.window_end}},
              {"ensemble_size", s.ensemble_size},
              {"samples", s.times.size()}};
}

json config_json(const TrajectoryConfig& cfg) {
  return json{{"mode", to_string(cfg.mode)},
              {"kappa", cfg.kappa},
              {"dt", cfg.dt},
              {"t_max", cfg.t_max},
              {"ensemble_size", cfg.ensemble_size},
              {"master_seed", cfg.master_seed},
              {"sample_every", cfg.sample_every},
              {"window_fraction", cfg.window_fraction},
              {"floquet_depth", cfg.floquet_depth},
              {"angle_stddev", cfg.angle_stddev}};
}

namespace {

const json& need(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(std::string("missing field '") + key + "'");
  return j.at(key);
}

}  // namespace

GateSet parse_custom_gates(const json& j) {
  try {
    ChainGeometry geom;
    geom.local_dims = need(j, "local_dims").get<std::vector<int>>();
    geom.num_sites = static_cast<int>(geom.local_dims.size());
    const std::string bc = j.value("boundary", std::string("obc"));
    if (bc == "obc")
      geom.boundary = Boundary::Open;
    else if (bc == "pbc")
      geom.boundary = Boundary::Periodic;
    else
      throw Error("boundary must be obc or pbc");
    geom.validate();
    const Eigen::Index N = geom.dim();
    const json& gens = need(j, "generators");
    if (!gens.is_array() || gens.empty()) throw Error("generators must be a non-empty array");
    std::vector<Operator> ops;
    std::vector<std::string> labels;
    for (const auto& g : gens) {
      std::vector<Eigen::Triplet<cd>> trip;
      for (const auto& e : need(g, "entries")) {
        const auto r = need(e, "row").get<long long>(), c = need(e, "col").get<long long>();
        if (r < 0 || c < 0 || r >= N || c >= N) throw Error("entry index outside the Hilbert space");
        trip.emplace_back(r, c, cd(need(e, "re").get<double>(), e.value("im", 0.0)));
      }
      SpMat m(N, N);
      m.setFromTriplets(trip.begin(), trip.end());
      ops.emplace_back(geom, m);
      labels.push_back(g.value("label", "h" + std::to_string(ops.size())));
    }
    GateSet gs = custom(ops, j.value("name", std::string("custom")));
    for (std::size_t k = 0; k < gs.generators.size() && k < labels.size(); ++k) gs.generators[k].label = labels[k];
    return gs;
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("custom gate file: ") + e.what());
  } catch (const SizeLimitError&) {
    throw;
  } catch (const Error& e) {
    throw Error(std::string("custom gate file: ") + e.what());
  }
}

json custom_gates_json(const GateSet& g) {
  json gens = json::array();
  for (const auto& gen : g.generators) {
    if (gen.is_identity) continue;
    json op = operator_json(gen.op.dense());
    gens.push_back(json{{"label", gen.label}, {"entries", op["entries"]}});
  }
  return json{{"schema", kCustomGatesSchema},
              {"name", g.name},
              {"local_dims", g.geometry.local_dims},
              {"boundary", g.geometry.boundary == Boundary::Open ? "obc" : "pbc"},
              {"generators", gens}};
}

void validate_report(const json& j) {
  if (need(j, "schema") != kReportSchema) throw Error("report: unexpected schema " + j["schema"].dump());
  if (need(j, "command") != "analyze") throw Error("report: command must be analyze");
  const json& g = need(j, "gate_set");
  need(g, "name");
  need(g, "length");
  const json& u = need(j, "universality");
  for (const char* k : {"dim_dla", "dim_bond", "dim_comm", "dim_center", "dim_scomm", "dim_scommt", "codim", "codim_weak"})
    if (!need(u, k).is_number_integer()) throw Error(std::string("report: ") + k + " must be an integer");
  if (!need(u, "classification").is_string()) throw Error("report: classification must be a string");
  if (!need(j, "super_commutants").is_array()) throw Error("report: super_commutants must be an array");
  const json& b = need(j, "blocks");
  if (!need(b, "actual").is_object() || !need(b, "minimal").is_object()) throw Error("report: block tables missing");
  if (!need(j, "center_basis").is_array()) throw Error("report: center_basis must be an array");
  if (!need(j, "missing_scar_basis").is_array()) throw Error("report: missing_scar_basis must be an array");
}

void validate_sidecar(const json& j) {
  if (need(j, "schema") != kSidecarSchema) throw Error("sidecar: unexpected schema " + j["schema"].dump());
  need(j, "gate_set");
  const json& o = need(j, "observable");
  if (!need(o, "kind").is_string()) throw Error("sidecar: observable kind must be a string");
  need(j, "config");
  need(j, "seeds");
  const json& r = need(j, "result");
  if (!need(r, "time_average").is_number() || !need(r, "time_average_stderr").is_number())
    throw Error("sidecar: result needs time_average and time_average_stderr");
  if (!need(j, "predictions").is_object()) throw Error("sidecar: predictions must be an object");
  if (!need(j, "csv").is_string()) throw Error("sidecar: csv must name the series file");
}

void write_json_file(const std::string& path, const json& j) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot write " + path);
  os << j.dump(2) << "\n";
  if (!os) throw Error("write failed for " + path);
}

json read_json_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot read " + path);
  try {
    return json::parse(is);
  } catch (const nlohmann::json::exception& e) {
    throw Error(path + ": " + e.what());
  }
}

}  // namespace clab::report
