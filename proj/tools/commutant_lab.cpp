#include "clab/report.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace fs = std::filesystem;
using namespace clab;
using report::json;

namespace {

struct GateOptions {
  std::string gateset;
  std::string custom;
  int length = 0;
  std::string boundary;
  int k = 2;
};

void add_gate_options(CLI::App* cmd, GateOptions& g, bool allow_custom) {
  auto* name = cmd->add_option("--gateset", g.gateset, "catalog gate set name");
  if (allow_custom) {
    auto* file = cmd->add_option("--custom", g.custom, "JSON file with custom generators");
    name->excludes(file);
  } else {
    name->required();
  }
  cmd->add_option("--length,-L", g.length, "number of sites");
  cmd->add_option("--boundary", g.boundary, "obc or pbc (default: catalog default)")->check(CLI::IsMember({"obc", "pbc"}));
  cmd->add_option("--k", g.k, "locality of the symmetric gates (su2 only)")->check(CLI::IsMember({2, 3}));
}

GateSet make_gates(const GateOptions& g) {
  if (!g.custom.empty()) return report::parse_custom_gates(report::read_json_file(g.custom));
  if (g.gateset.empty()) throw Error("either --gateset or --custom is required");
  if (g.length < 1) throw Error("--length must be a positive integer");
  std::optional<Boundary> bc;
  if (g.boundary == "obc") bc = Boundary::Open;
  if (g.boundary == "pbc") bc = Boundary::Periodic;
  std::optional<int> k;
  if (g.k != 2) k = g.k;
  return build(g.gateset, g.length, bc, k);
}

// "1..6", "2,5", "1..3,7"; sites are 1-based.
std::vector<int> parse_region(const std::string& spec, int L) {
  std::set<int> sites;
  if (spec.empty()) return {};
  std::stringstream ss(spec);
  std::string part;
  auto to_int = [&spec](const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos)
      throw Error("invalid region spec '" + spec + "'");
    return std::stoi(s);
  };
  while (std::getline(ss, part, ',')) {
    const auto dots = part.find("..");
    int lo, hi;
    if (dots == std::string::npos) {
      lo = hi = to_int(part);
    } else {
      lo = to_int(part.substr(0, dots));
      hi = to_int(part.substr(dots + 2));
    }
    if (lo < 1 || hi > L || lo > hi) throw Error("invalid region spec '" + spec + "' for a chain of " + std::to_string(L) + " sites");
    for (int s = lo; s <= hi; ++s) sites.insert(s);
  }
  return {sites.begin(), sites.end()};
}

Operator site_observable(const GateSet& gates, char letter, int site) {
  const ChainGeometry& g = gates.geometry;
  if (site < 1 || site > g.num_sites) throw Error("site " + std::to_string(site) + " outside the chain");
  const int d = g.local_dims[site - 1];
  Mat local;
  if (d == 2) {
    local = pauli(letter);
  } else if (d == 3 && letter == 'Z') {
    local = tjz_z();
  } else {
    throw Error(std::string("observable ") + letter + " is not defined for local dimension " + std::to_string(d));
  }
  return Operator(g, embed_local(local, {site}, g).matrix(), HermitianFlag::Yes);
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error("cannot create output directory " + dir + ": " + ec.message());
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

int cmd_catalog(bool as_json) {
  const int L = 4;
  if (as_json) {
    json out = json::array();
    for (const auto& e : catalog()) {
      out.push_back(json{{"name", e.name},
                         {"default_boundary", to_string(e.default_boundary)},
                         {"local_dim", e.local_dim},
                         {"generator_count", e.count_formula},
                         {"generators_at_L4", build(e.name, L).generators.size()},
                         {"description", e.description}});
    }
    std::cout << out.dump(2) << "\n";
    return 0;
  }
  std::printf("%-13s %-4s %-3s %-22s %-5s %s\n", "name", "bc", "d", "generators", "L=4", "description");
  for (const auto& e : catalog())
    std::printf("%-13s %-4s %-3d %-22s %-5zu %s\n", e.name.c_str(), to_string(e.default_boundary), e.local_dim,
                e.count_formula.c_str(), build(e.name, L).generators.size(), e.description.c_str());
  return 0;
}

// Largest operator space (N^2) solved in full without an explicit --restrict none.
constexpr Eigen::Index kAutoFullSpace = 256;

struct AnalyzeOptions {
  std::string restrict_to = "auto";
  int sector = 0;
  std::string out = ".";
};

int cmd_analyze(const GateOptions& go, const AnalyzeOptions& ao, Eigen::Index max_dim) {
  const auto t_start = std::chrono::steady_clock::now();
  json timing = json::object();
  const GateSet gates = make_gates(go);
  SolveOptions opt;
  opt.max_super_dim = max_dim;
  const Eigen::Index N = gates.geometry.dim();

  Restriction r;
  if (ao.restrict_to == "auto")
    r = N * N <= std::min(max_dim, kAutoFullSpace) ? Restriction::None : Restriction::Bond;
  else if (ao.restrict_to == "none")
    r = Restriction::None;
  else if (ao.restrict_to == "bond")
    r = Restriction::Bond;
  else
    r = Restriction::Sector;
  if (r == Restriction::None && N * N > max_dim)
    throw SizeLimitError("full operator space has dimension " + std::to_string(N * N) + " above --max-dim " +
                         std::to_string(max_dim));

  auto t0 = std::chrono::steady_clock::now();
  const AlgebraBundle b = analyze_algebras(gates, opt);
  if (b.bond.dim() > max_dim)
    throw SizeLimitError("bond algebra has dimension " + std::to_string(b.bond.dim()) + " above --max-dim " +
                         std::to_string(max_dim));
  timing["algebras"] = seconds_since(t0);
  t0 = std::chrono::steady_clock::now();
  const UniversalityReport rep = classify(b, opt);
  timing["classification"] = seconds_since(t0);

  json scomms = json::array();
  scomms.push_back(json{{"space", "bond"}, {"dim", rep.dim_scomm}, {"dim_minimal", rep.dim_scommt}});
  int shown_scomm = rep.dim_scomm;
  const int sector = r == Restriction::Sector ? ao.sector : -1;
  t0 = std::chrono::steady_clock::now();
  if (r != Restriction::Bond) {
    const SuperAlgebra sc = super_commutant(b, r, sector, opt);
    const SuperAlgebra sct = minimal_super_commutant(b, r, sector, opt);
    scomms.push_back(json{{"space", sc.space.label()}, {"dim", sc.dim()}, {"dim_minimal", sct.dim()}});
    shown_scomm = static_cast<int>(sc.dim());
  }
  const BlockDecomposition actual = block_decomposition(b, r, sector, opt);
  const BlockDecomposition minimal = minimal_block_decomposition(b, r, sector, opt);
  timing["blocks"] = seconds_since(t0);

  json out;
  out["schema"] = report::kReportSchema;
  out["command"] = "analyze";
  out["gate_set"] = report::gate_set_json(gates);
  out["restriction"] = to_string(r);
  if (r == Restriction::Sector) out["sector"] = ao.sector;
  out["classification"] = report::short_label(rep.classification);
  out["codim"] = rep.codim;
  out["dim_scomm"] = shown_scomm;
  out["universality"] = report::universality_json(rep);
  out["super_commutants"] = scomms;
  out["blocks"] = json{{"actual", report::blocks_json(actual)}, {"minimal", report::blocks_json(minimal)}};
  out["center_basis"] = report::basis_json(b.center);
  out["missing_scar_basis"] = report::basis_json(missing_scar_basis(b.center, gates));
  out["timing_file"] = "timing.json";

  ensure_dir(ao.out);
  report::write_json_file((fs::path(ao.out) / "report.json").string(), out);
  timing["total"] = seconds_since(t_start);
  report::write_json_file((fs::path(ao.out) / "timing.json").string(), json{{"seconds", timing}});
  std::cout << gates.name << " L=" << gates.geometry.num_sites << ": " << to_string(rep.classification)
            << ", codim " << rep.codim << ", dim SC " << shown_scomm << "\n";
  return 0;
}

struct BrownianOptions {
  std::string observable = "otoc";
  std::string sites = "1";
  std::string pauli_letter = "Z";
  std::string region;
  bool region_given = false;
  std::string state = "down";
  std::uint64_t seed = 1;
  int ensemble = 256;
  double dt = 0.01;
  double tmax = 20.0;
  double kappa = 1.0;
  int sample_every = 10;
  std::string mode = "brownian";
  int depth = 1;
  double angle_stddev = 1.0;
  std::string out = ".";
  std::string name = "series";
};

std::vector<int> parse_sites(const std::string& spec) {
  std::vector<int> out;
  std::stringstream ss(spec);
  std::string part;
  while (std::getline(ss, part, ',')) {
    if (part.empty() || part.find_first_not_of("0123456789") != std::string::npos)
      throw Error("invalid --sites value '" + spec + "'");
    out.push_back(std::stoi(part));
  }
  if (out.empty() || out.size() > 2) throw Error("--sites takes one site or two sites a,b");
  return out;
}

// Numeric super-commutant of the full operator space when it is small enough.
std::optional<FramedSuperBasis> small_scomm(const GateSet& gates) {
  const Eigen::Index N = gates.geometry.dim();
  if (N * N > kAutoFullSpace) return std::nullopt;
  const AlgebraBundle b = analyze_algebras(gates);
  return framed(super_commutant(b, Restriction::None));
}

bool is_prefix(const std::vector<int>& region) {
  for (std::size_t i = 0; i < region.size(); ++i)
    if (region[i] != static_cast<int>(i) + 1) return false;
  return true;
}

int cmd_brownian(const GateOptions& go, const BrownianOptions& bo, int threads) {
  const GateSet gates = make_gates(go);
  const int L = gates.geometry.num_sites;
  TrajectoryConfig cfg;
  cfg.gates = gates;
  cfg.kappa = bo.kappa;
  cfg.dt = bo.dt;
  cfg.t_max = bo.tmax;
  cfg.ensemble_size = bo.ensemble;
  cfg.master_seed = bo.seed;
  cfg.sample_every = bo.sample_every;
  cfg.mode = bo.mode == "floquet" ? DynamicsMode::Floquet : DynamicsMode::Brownian;
  cfg.floquet_depth = bo.depth;
  cfg.angle_stddev = bo.angle_stddev;
  cfg.threads = threads;
  cfg.validate();
  const bool mg_obc = gates.name == "mg_z2" && gates.geometry.boundary == Boundary::Open;

  json observable, result, predictions = json::object();
  report::Table table;
  if (bo.observable == "otoc" || bo.observable == "twopoint") {
    if (bo.pauli_letter.size() != 1 || std::string("XYZ").find(bo.pauli_letter[0]) == std::string::npos)
      throw Error("--pauli must be X, Y or Z");
    const char letter = bo.pauli_letter[0];
    const auto s = parse_sites(bo.sites);
    const Operator A = site_observable(gates, letter, s.front());
    const Operator B = site_observable(gates, letter, s.back());
    observable = json{{"kind", bo.observable}, {"pauli", bo.pauli_letter}, {"site_a", s.front()}, {"site_b", s.back()}};
    const ObservableSeries series = bo.observable == "otoc" ? otoc_series(cfg, A, B) : two_point_series(cfg, A, B);
    table = report::series_table(series);
    result = report::series_summary_json(series);
    if (bo.observable == "otoc") {
      if (auto sc = small_scomm(gates)) predictions["otoc_scomm"] = predicted_otoc(*sc, A, B);
      if (mg_obc && L <= 8) predictions["otoc_scomm_analytic"] = predicted_otoc(analytic_mg_scomm(L), A, B);
      if (mg_obc && letter == 'Z' && s.front() == s.back() && L >= 2)
        predictions["otoc_matchgate_closed_form"] = predicted_otoc_mg(L);
    } else if (s.front() == s.back()) {
      predictions["mazur"] = mazur_two_point(commutant(gates), A);
    }
  } else if (bo.observable == "renyi2") {
    if (!bo.region_given) throw Error("--region is required for renyi2");
    const std::vector<int> region = parse_region(bo.region, L);
    Vec psi0;
    if (bo.state == "down") {
      psi0 = all_down_state(gates.geometry);
    } else {
      psi0 = Vec::Zero(gates.geometry.dim());
      psi0[0] = 1.0;
    }
    const Renyi2Result r = renyi2_series(cfg, psi0, region);
    observable = json{{"kind", "renyi2"}, {"region", region}, {"state", bo.state}, {"log_base", "e"}};
    table = report::renyi2_table(r);
    result = report::series_summary_json(r.entropy);
    result["purity"] = report::series_summary_json(r.purity);
    result["neg_log_mean_purity"] = r.neg_log_time_average;
    result["neg_log_mean_purity_stderr"] = r.neg_log_time_average_stderr;
    const int ell = static_cast<int>(region.size());
    auto add = [&predictions](const std::string& key, double purity) {
      predictions[key] = purity;
      predictions[key + "_neg_log"] = -std::log(purity);
    };
    if (gates.name == "universal") add("purity_universal_closed_form", predicted_purity(L, ell, PurityKind::Universal));
    if (mg_obc && is_prefix(region)) add("purity_matchgate_closed_form", predicted_purity(L, ell, PurityKind::Matchgate));
    if (auto sc = small_scomm(gates)) add("purity_scomm", predicted_purity_from_scomm(*sc, psi0, region));
  } else {
    throw Error("unknown observable '" + bo.observable + "'");
  }

  json seeds = json{{"master", cfg.master_seed}, {"derivation", "splitmix64 finalizer of master + 0x9e3779b97f4a7c15 * (index + 1)"}};
  json per = json::array();
  for (int i = 0; i < cfg.ensemble_size; ++i) per.push_back(cfg.trajectory_seed(i));
  seeds["trajectories"] = per;

  ensure_dir(bo.out);
  const std::string csv_name = bo.name + ".csv";
  {
    std::ofstream os((fs::path(bo.out) / csv_name).string(), std::ios::binary);
    if (!os) throw Error("cannot write " + csv_name);
    report::write_csv(os, table);
  }
  json side;
  side["schema"] = report::kSidecarSchema;
  side["command"] = "brownian";
  side["gate_set"] = report::gate_set_json(gates);
  side["observable"] = observable;
  side["config"] = report::config_json(cfg);
  side["seeds"] = seeds;
  side["result"] = result;
  side["predictions"] = predictions;
  side["warnings"] = cfg.warnings();
  side["csv"] = csv_name;
  report::write_json_file((fs::path(bo.out) / (bo.name + ".json")).string(), side);
  std::cout << bo.observable << " time average " << result["time_average"].get<double>() << " +- "
            << result["time_average_stderr"].get<double>() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Commutant, super-commutant and Brownian circuit analysis for local gate sets"};
  app.require_subcommand(1);
  app.fallthrough();
  int threads = 0;
  long long max_dim = 65536;
  app.add_option("--threads", threads, "worker threads (default: COMMUTANT_LAB_THREADS or hardware)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--max-dim", max_dim, "largest operator-space dimension for doubled-space solves")
      ->check(CLI::PositiveNumber);

  bool as_json = false;
  auto* cat = app.add_subcommand("catalog", "list the built-in gate sets");
  cat->add_flag("--json", as_json, "machine-readable output");

  GateOptions ga;
  AnalyzeOptions ao;
  auto* an = app.add_subcommand("analyze", "commutant, codimension and super-commutant report");
  add_gate_options(an, ga, true);
  an->add_option("--restrict", ao.restrict_to, "super-commutant space: auto, none, bond or sector")
      ->check(CLI::IsMember({"auto", "none", "bond", "sector"}));
  an->add_option("--sector", ao.sector, "sector index for --restrict sector")->check(CLI::NonNegativeNumber);
  an->add_option("--out", ao.out, "output directory");

  GateOptions gb;
  BrownianOptions bo;
  auto* br = app.add_subcommand("brownian", "Brownian or Floquet trajectory ensemble");
  add_gate_options(br, gb, false);
  br->add_option("--observable", bo.observable, "otoc, renyi2 or twopoint")
      ->check(CLI::IsMember({"otoc", "renyi2", "twopoint"}));
  br->add_option("--sites", bo.sites, "site j, or sites a,b for A and B");
  br->add_option("--pauli", bo.pauli_letter, "single-site observable letter");
  auto* reg = br->add_option("--region", bo.region, "subsystem, e.g. 1..6 or 1,3");
  br->add_option("--state", bo.state, "initial product state")->check(CLI::IsMember({"down", "up"}));
  br->add_option("--seed", bo.seed, "master seed");
  br->add_option("--ensemble", bo.ensemble, "number of trajectories")->check(CLI::PositiveNumber);
  br->add_option("--dt", bo.dt, "time step");
  br->add_option("--tmax", bo.tmax, "total time (periods for floquet)");
  br->add_option("--kappa", bo.kappa, "diffusion rate");
  br->add_option("--sample-every", bo.sample_every, "steps between samples")->check(CLI::PositiveNumber);
  br->add_option("--mode", bo.mode, "brownian or floquet")->check(CLI::IsMember({"brownian", "floquet"}));
  br->add_option("--depth", bo.depth, "floquet layers per period")->check(CLI::NonNegativeNumber);
  br->add_option("--angle-stddev", bo.angle_stddev, "floquet angle spread (radians)");
  br->add_option("--out", bo.out, "output directory");
  br->add_option("--name", bo.name, "file name stem for the CSV and sidecar");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n\n" << app.help();
    return 1;
  }
  bo.region_given = reg->count() > 0;

  try {
    if (cat->parsed()) return cmd_catalog(as_json);
    if (an->parsed()) return cmd_analyze(ga, ao, static_cast<Eigen::Index>(max_dim));
    if (br->parsed()) return cmd_brownian(gb, bo, threads);
  } catch (const SizeLimitError& e) {
    std::cerr << "size limit: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
