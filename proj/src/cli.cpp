#include "rclab/cli.hpp"

#include <CLI11.hpp>
#include <cerrno>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "rclab/report.hpp"
#include "rclab/threshold.hpp"

namespace rclab::cli {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

// Filesystem trouble; maps to kRuntimeError.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

const std::vector<std::string> kCommands{"enumerate", "sample", "scan", "audit", "render"};
const std::map<std::string, std::string> kDescriptions{
    {"enumerate", "Exact values on a small box by full enumeration"},
    {"sample", "Monte Carlo estimates on a box"},
    {"scan", "Crossing curves over a control grid with logistic fits"},
    {"audit", "Check an identity or bound and report lhs, rhs and slack"},
    {"render", "Print a JSON report as text"}};
const std::vector<std::string> kModels{"rc", "ising", "crcm"};
const std::vector<std::string> kAudits{"duality", "lemma", "corollary", "theorem",
                                       "marginals", "derivative", "fkg", "crcm"};

bool one_of(const std::string& s, const std::vector<std::string>& set) {
  return std::find(set.begin(), set.end(), s) != set.end();
}

std::string joined(const std::vector<std::string>& set) {
  std::string s;
  for (const auto& x : set) s += (s.empty() ? "" : ", ") + x;
  return s;
}

Boundary boundary_of(const RunConfig& cfg) { return cfg.bc == "wired" ? Boundary::Wired : Boundary::Free; }

RCDynamics dynamics_of(const RunConfig& cfg) {
  if (cfg.dynamics == "heat-bath") return RCDynamics::HeatBath;
  if (cfg.dynamics == "sw") return RCDynamics::SwendsenWang;
  return RCDynamics::Auto;
}

double parse_real(const std::string& s, const char* field) {
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    throw ParamError(field, "'" + s + "' is not a number");
  }
  if (used != s.size()) throw ParamError(field, "'" + s + "' is not a number");
  return v;
}

fs::path output_dir(const RunConfig& cfg) {
  fs::path dir = cfg.out;
  if (dir.empty()) {
    const char* env = std::getenv(kOutDirEnv);
    dir = env && *env ? fs::path(env) : fs::path(".");
  }
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
  return dir;
}

void write_file(const fs::path& path, const std::string& text, std::vector<std::string>& artifacts) {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing: " + std::strerror(errno));
  os << text;
  os.flush();
  if (!os) throw IoError("write to " + path.string() + " failed");
  artifacts.push_back(path.string());
}

json value_row(const std::string& name, double v) { return {{"name", name}, {"value", report::number(v)}}; }

json value_row(const std::string& name, const Estimate& e) {
  return {{"name", name}, {"value", report::number(e.mean)}, {"stderr", report::number(e.stdError)}};
}

double spin_event_prob(const LatticeGraph& g, const std::vector<double>& dist, const Event& a) {
  CompensatedSum s;
  const auto V = static_cast<std::size_t>(g.vertex_count());
  for (std::uint64_t mask = 0; mask < dist.size(); ++mask)
    if (dist[mask] > 0.0 && a(g, SpinConfig::from_mask(mask, V))) s.add(dist[mask]);
  return s.value();
}

BoundReport lattice_report(const std::string& name, const LatticeAudit& a) {
  BoundReport r;
  r.name = name;
  r.lhs = 1.0;
  r.rhs = a.worstRatio;
  r.slack = r.rhs - r.lhs;
  r.tolerance = 1e-12;
  r.pass = a.pass;
  r.inputs = {{"checked", static_cast<double>(a.checked)}};
  if (!a.pass) {
    r.notes.push_back("witness configuration " + std::to_string(a.witness) + ", elements " + std::to_string(a.e) +
                      " and " + std::to_string(a.f));
    r.inputs.push_back({"witness_lhs", a.lhs});
    r.inputs.push_back({"witness_rhs", a.rhs});
  }
  return r;
}

Outcome run_scan(const RunConfig& cfg, const fs::path& dir) {
  ScanConfig sc;
  sc.model = cfg.target == "rc" ? ScanModel::RC : cfg.target == "ising" ? ScanModel::Ising : ScanModel::CRCM;
  sc.rc = {cfg.p, cfg.q, boundary_of(cfg)};
  sc.ising = {cfg.beta, cfg.h, boundary_of(cfg)};
  sc.crcm = {cfg.p, cfg.q, cfg.alpha, cfg.h};
  sc.grid = parse_grid(cfg.grid);
  for (int k : cfg.boxes) sc.boxes.push_back(square_box(k));
  sc.spec = cfg.spec;
  sc.dynamics = dynamics_of(cfg);
  const ThresholdScan scan = threshold_scan(sc);

  Outcome out;
  std::ostringstream csv;
  report::write_scan_csv(csv, scan);
  json doc = report::scan_document(scan, cfg.target);
  doc["config"] = to_json(cfg);
  write_file(dir / ("scan_" + cfg.target + ".csv"), csv.str(), out.artifacts);
  write_file(dir / ("scan_" + cfg.target + ".json"), doc.dump(2) + "\n", out.artifacts);
  out.text = report::render(doc);
  if (scan.complementarityViolations > 0) {
    out.exitCode = kAuditFailed;
    out.text += "complementarity violated in " + std::to_string(scan.complementarityViolations) + " samples\n";
  }
  return out;
}

Outcome run_audit(const RunConfig& cfg, const fs::path& dir) {
  json doc = report::document("audit");
  doc["audit"] = cfg.target;
  json reports = json::array();
  const RCParams rc{cfg.p, cfg.q, boundary_of(cfg)};
  const Event lr = Event::crossing(Direction::LeftRight);

  if (cfg.target == "duality") {
    reports.push_back(report::to_json(duality_audit(cfg.k, cfg.m, cfg.p, cfg.q, cfg.exact, cfg.spec)));
  } else if (cfg.target == "lemma") {
    Lemma1Config lc;
    lc.k = cfg.k;
    lc.m = cfg.m;
    lc.n = cfg.n;
    lc.offset = cfg.offset ? Point{(*cfg.offset)[0], (*cfg.offset)[1]} : Point{-(cfg.k / 2), -(cfg.m / 2)};
    lc.p = cfg.p;
    lc.q = cfg.q;
    if (!cfg.bc.empty()) lc.bc = boundary_of(cfg);
    lc.exact = cfg.exact;
    lc.spec = cfg.spec;
    reports.push_back(report::to_json(audit_lemma1(lc)));
  } else if (cfg.target == "corollary") {
    const LatticeGraph g = LatticeGraph::box(cfg.k, cfg.m);
    auto rep = corollary_audit(g, rc, lr, cfg.p, cfg.p2, cfg.c, cfg.gridPoints);
    json j = report::to_json(rep.bound);
    j["grid_too_coarse"] = rep.gridTooCoarse;
    reports.push_back(j);
  } else if (cfg.target == "theorem") {
    reports.push_back(report::to_json(theorem_bound_audit(cfg.k, cfg.p, cfg.q, cfg.c, cfg.spec)));
  } else if (cfg.target == "marginals") {
    const LatticeGraph g = LatticeGraph::box(cfg.k, cfg.m);
    const auto a = edge_marginal_bounds_audit(g, rc);
    const auto [lo, hi] = std::minmax_element(a.marginal.begin(), a.marginal.end());
    BoundReport lower{"marginal-lower", a.lower, *lo, *lo - a.lower, 1e-12, true, *lo >= a.lower - 1e-12, {}, {}};
    BoundReport upper{"marginal-upper", *hi, a.upper, a.upper - *hi, 1e-12, true, *hi <= a.upper + 1e-12, {}, {}};
    reports.push_back(report::to_json(lower));
    reports.push_back(report::to_json(upper));
  } else if (cfg.target == "derivative") {
    const LatticeGraph g = LatticeGraph::box(cfg.k, cfg.m);
    const auto d = derivative_identity_audit(g, rc, lr);
    BoundReport r;
    r.name = "derivative-identity";
    r.lhs = d.lhs;
    r.rhs = d.rhs;
    r.slack = d.rhs - d.lhs;
    r.tolerance = 1e-6 * std::abs(d.rhs);
    r.pass = d.relError < 1e-6;
    r.inputs = {{"rel_error", d.relError}, {"dp", 1e-5}};
    reports.push_back(report::to_json(r));
  } else if (cfg.target == "fkg") {
    const LatticeGraph g = LatticeGraph::box(cfg.k, cfg.m);
    const auto w = rc_distribution(g, rc);
    reports.push_back(report::to_json(lattice_report("fkg-lattice", fkg_lattice_audit(w, g.edge_count()))));
  } else {
    const LatticeGraph g = LatticeGraph::box(cfg.k, cfg.m);
    const CRCMParams cp{cfg.p, cfg.q, cfg.alpha, cfg.h};
    reports.push_back(report::to_json(lattice_report("crcm-monotonicity", crcm_monotonicity_audit(g, cp))));
  }

  bool pass = true;
  for (const auto& r : reports) pass = pass && r["pass"].get<bool>();
  doc["reports"] = reports;
  doc["pass"] = pass;
  doc["config"] = to_json(cfg);
  Outcome out;
  write_file(dir / ("audit_" + cfg.target + ".json"), doc.dump(2) + "\n", out.artifacts);
  out.text = report::render(doc);
  out.exitCode = pass ? kOk : kAuditFailed;
  return out;
}

Outcome run_values(const RunConfig& cfg, const fs::path& dir) {
  const LatticeGraph g = LatticeGraph::box(cfg.k, cfg.m);
  const Event bondLR = Event::crossing(Direction::LeftRight);
  const Event bondTB = Event::crossing(Direction::TopBottom);
  const Event plusLR = Event::crossing(Direction::LeftRight, PathMode::Plus);
  const Event minusTB = Event::crossing(Direction::TopBottom, PathMode::MinusStar);
  json values = json::array();
  const bool exact = cfg.command == "enumerate";

  if (cfg.target == "rc") {
    const RCParams prm{cfg.p, cfg.q, boundary_of(cfg)};
    if (exact) {
      values.push_back(value_row("log Z", std::log(partition_function(g, prm))));
      values.push_back(value_row("P(open LR crossing)", event_prob(g, prm, bondLR)));
      values.push_back(value_row("P(open TB crossing)", event_prob(g, prm, bondTB)));
      if (prm.q >= 1.0) {
        const auto a = edge_marginal_bounds_audit(g, prm);
        const auto [lo, hi] = std::minmax_element(a.marginal.begin(), a.marginal.end());
        values.push_back(value_row("min edge marginal", *lo));
        values.push_back(value_row("max edge marginal", *hi));
      }
    } else {
      values.push_back(value_row("P(open LR crossing)", estimate_event(g, prm, bondLR, cfg.spec, dynamics_of(cfg))));
    }
  } else if (cfg.target == "ising") {
    const IsingParams prm{cfg.beta, cfg.h, boundary_of(cfg)};
    if (exact) {
      const double a = ising_prob(g, prm, plusLR), b = ising_prob(g, prm, minusTB);
      values.push_back(value_row("P(+ LR crossing)", a));
      values.push_back(value_row("P(-* TB crossing)", b));
      values.push_back(value_row("sum", a + b));
    } else {
      values.push_back(value_row("P(+ LR crossing)", estimate_event(g, prm, plusLR, cfg.spec)));
    }
  } else {
    if (cfg.bc == "wired") throw ParamError("bc", "coloured random-cluster measure supports free bc only");
    const CRCMParams prm{cfg.p, cfg.q, cfg.alpha, cfg.h};
    if (exact) {
      const auto dist = crcm_spin_distribution(g, prm);
      values.push_back(value_row("P(+ LR crossing)", spin_event_prob(g, dist, plusLR)));
      values.push_back(value_row("P(-* TB crossing)", spin_event_prob(g, dist, minusTB)));
      values.push_back(value_row("P(open LR crossing)", [&] {
        const auto ed = crcm_edge_distribution(g, prm);
        CompensatedSum s;
        for (std::uint64_t mask = 0; mask < ed.size(); ++mask)
          if (bondLR(g, EdgeConfig::from_mask(mask, static_cast<std::size_t>(g.edge_count())))) s.add(ed[mask]);
        return s.value();
      }()));
    } else {
      values.push_back(value_row("P(+ LR crossing)", estimate_event(g, prm, plusLR, cfg.spec)));
    }
  }

  json doc = report::document(cfg.command);
  doc["model"] = cfg.target;
  doc["values"] = values;
  doc["config"] = to_json(cfg);
  Outcome out;
  write_file(dir / (cfg.command + "_" + cfg.target + ".json"), doc.dump(2) + "\n", out.artifacts);
  out.text = report::render(doc);
  return out;
}

Outcome run_render(const RunConfig& cfg) {
  std::ifstream is(cfg.input, std::ios::binary);
  if (!is) throw IoError("cannot open " + cfg.input + ": " + std::strerror(errno));
  json doc;
  try {
    doc = json::parse(is);
  } catch (const json::parse_error& e) {
    throw report::SchemaError(cfg.input + ": not valid JSON (" + e.what() + ")");
  }
  Outcome out;
  out.text = report::render(doc);
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

json to_json(const RunConfig& c) {
  return {{"command", c.command},
          {"target", c.target},
          {"q", c.q},
          {"p", c.p},
          {"p2", c.p2},
          {"alpha", c.alpha},
          {"h", c.h},
          {"beta", c.beta},
          {"k", c.k},
          {"m", c.m},
          {"n", c.n},
          {"offset", c.offset ? json(*c.offset) : json(nullptr)},
          {"bc", c.bc},
          {"grid", c.grid},
          {"boxes", c.boxes},
          {"seed", c.spec.seed},
          {"chains", c.spec.chains},
          {"sweeps", c.spec.sampleSweeps},
          {"burnin", c.spec.burnInSweeps},
          {"thinning", c.spec.thinning},
          {"c", c.c},
          {"exact", c.exact},
          {"grid_points", c.gridPoints},
          {"dynamics", c.dynamics},
          {"out", c.out},
          {"input", c.input}};
}

RunConfig config_from_json(const json& j, RunConfig c) {
  if (!j.is_object()) throw ParamError("config", "must be a JSON object");
  using Setter = std::function<void(const json&)>;
  const std::map<std::string, Setter> setters{
      {"command", [&](const json& v) { c.command = v.get<std::string>(); }},
      {"target", [&](const json& v) { c.target = v.get<std::string>(); }},
      {"q", [&](const json& v) { c.q = v.get<double>(); }},
      {"p", [&](const json& v) { c.p = v.get<double>(); }},
      {"p2", [&](const json& v) { c.p2 = v.get<double>(); }},
      {"alpha", [&](const json& v) { c.alpha = v.get<double>(); }},
      {"h", [&](const json& v) { c.h = v.get<double>(); }},
      {"beta", [&](const json& v) { c.beta = v.get<double>(); }},
      {"k", [&](const json& v) { c.k = v.get<int>(); }},
      {"m", [&](const json& v) { c.m = v.get<int>(); }},
      {"n", [&](const json& v) { c.n = v.get<int>(); }},
      {"offset",
       [&](const json& v) {
         if (v.is_null())
           c.offset.reset();
         else
           c.offset = v.get<std::array<int, 2>>();
       }},
      {"bc", [&](const json& v) { c.bc = v.get<std::string>(); }},
      {"grid", [&](const json& v) { c.grid = v.get<std::string>(); }},
      {"boxes", [&](const json& v) { c.boxes = v.get<std::vector<int>>(); }},
      {"seed", [&](const json& v) { c.spec.seed = v.get<std::uint64_t>(); }},
      {"chains", [&](const json& v) { c.spec.chains = v.get<int>(); }},
      {"sweeps", [&](const json& v) { c.spec.sampleSweeps = v.get<int>(); }},
      {"burnin", [&](const json& v) { c.spec.burnInSweeps = v.get<int>(); }},
      {"thinning", [&](const json& v) { c.spec.thinning = v.get<int>(); }},
      {"c", [&](const json& v) { c.c = v.get<double>(); }},
      {"exact", [&](const json& v) { c.exact = v.get<bool>(); }},
      {"grid_points", [&](const json& v) { c.gridPoints = v.get<int>(); }},
      {"dynamics", [&](const json& v) { c.dynamics = v.get<std::string>(); }},
      {"out", [&](const json& v) { c.out = v.get<std::string>(); }},
      {"input", [&](const json& v) { c.input = v.get<std::string>(); }},
  };
  for (const auto& [key, value] : j.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw ParamError(key, "unknown config field");
    try {
      it->second(value);
    } catch (const json::exception& e) {
      throw ParamError(key, std::string("wrong type (") + e.what() + ")");
    }
  }
  return c;
}

std::vector<double> parse_grid(const std::string& text) {
  if (text.empty()) throw ParamError("grid", "must not be empty");
  std::vector<double> out;
  if (text.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(text);
    for (std::string part; std::getline(ss, part, ':');) parts.push_back(part);
    if (parts.size() != 3) throw ParamError("grid", "expected lo:hi:n");
    const double lo = parse_real(parts[0], "grid"), hi = parse_real(parts[1], "grid");
    const double nd = parse_real(parts[2], "grid");
    if (nd < 1 || nd != std::floor(nd) || nd > 1e6) throw ParamError("grid", "point count must be a positive integer");
    const int n = static_cast<int>(nd);
    if (n == 1) return {lo};
    if (!(hi > lo)) throw ParamError("grid", "needs lo < hi");
    for (int i = 0; i < n; ++i) out.push_back(i == n - 1 ? hi : lo + (hi - lo) * i / (n - 1));
    return out;
  }
  std::stringstream ss(text);
  for (std::string part; std::getline(ss, part, ',');) out.push_back(parse_real(part, "grid"));
  return out;
}

void validate(const RunConfig& c) {
  if (!one_of(c.command, kCommands)) throw ParamError("command", "expected one of " + joined(kCommands));
  if (c.command == "render") {
    if (c.input.empty()) throw ParamError("input", "render needs a report path");
    return;
  }
  if (c.command == "audit") {
    if (!one_of(c.target, kAudits)) throw ParamError("target", "audit kind must be one of " + joined(kAudits));
  } else if (!one_of(c.target, kModels)) {
    throw ParamError("target", "model must be one of " + joined(kModels));
  }
  if (!(c.q > 0.0)) throw ParamError("q", "must be positive");
  if (!c.bc.empty() && c.bc != "free" && c.bc != "wired") throw ParamError("bc", "expected free or wired");
  if (c.dynamics != "auto" && c.dynamics != "heat-bath" && c.dynamics != "sw")
    throw ParamError("dynamics", "expected auto, heat-bath or sw");
  if (c.k < 1) throw ParamError("k", "must be at least 1");
  if (c.m < 0) throw ParamError("m", "must be non-negative");
  if (c.n < 1) throw ParamError("n", "must be at least 1");
  if (!(c.c > 0.0)) throw ParamError("c", "must be positive");
  if (c.gridPoints < 2) throw ParamError("grid_points", "must be at least 2");
  rclab::validate(c.spec);
  if (c.command == "scan") {
    if (c.boxes.empty()) throw ParamError("boxes", "must not be empty");
    for (int k : c.boxes)
      if (k < 1) throw ParamError("boxes", "box sizes must be at least 1");
    parse_grid(c.grid);
  }
}

Outcome run(const RunConfig& cfg) {
  validate(cfg);
  if (cfg.command == "render") return run_render(cfg);
  const fs::path dir = output_dir(cfg);
  if (cfg.command == "scan") return run_scan(cfg, dir);
  if (cfg.command == "audit") return run_audit(cfg, dir);
  return run_values(cfg, dir);
}

int main(int argc, char** argv) {
  CLI::App app{"Random-cluster, Ising and coloured random-cluster threshold lab"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);
  app.set_version_flag("--version", report::version_tag());

  RunConfig staged;
  std::vector<std::function<void(RunConfig&)>> apply;
  std::string configPath, offsetText;

  auto bind = [&](CLI::App* sub, const std::string& flag, auto& slot, auto store, const std::string& help) {
    CLI::Option* opt = sub->add_option(flag, slot, help);
    apply.push_back([opt, &slot, store](RunConfig& c) {
      if (opt->count() > 0) store(c, slot);
    });
    return opt;
  };

  for (const auto& name : kCommands) {
    CLI::App* sub = app.add_subcommand(name, kDescriptions.at(name));
    sub->set_help_flag("--help", "Print this help message and exit");
    if (name == "render") {
      bind(sub, "input", staged.input, [](RunConfig& c, const std::string& v) { c.input = v; }, "Report JSON path")
          ->required();
    } else {
      bind(sub, "target", staged.target, [](RunConfig& c, const std::string& v) { c.target = v; },
           name == "audit" ? "Audit kind: " + joined(kAudits) : "Model: " + joined(kModels));
    }
    sub->add_option("--config", configPath, "JSON run configuration; flags override its fields");
    bind(sub, "--q", staged.q, [](RunConfig& c, double v) { c.q = v; }, "Cluster weight q");
    bind(sub, "--p", staged.p, [](RunConfig& c, double v) { c.p = v; }, "Edge parameter p (p1 for corollary)");
    bind(sub, "--p2", staged.p2, [](RunConfig& c, double v) { c.p2 = v; }, "Upper edge parameter for corollary");
    bind(sub, "--alpha", staged.alpha, [](RunConfig& c, double v) { c.alpha = v; }, "Colour probability alpha");
    bind(sub, "--h", staged.h, [](RunConfig& c, double v) { c.h = v; }, "External field h");
    bind(sub, "--beta", staged.beta, [](RunConfig& c, double v) { c.beta = v; }, "Inverse temperature beta");
    bind(sub, "--k", staged.k, [](RunConfig& c, int v) { c.k = v; }, "Box width k");
    bind(sub, "--m", staged.m, [](RunConfig& c, int v) { c.m = v; }, "Box height m");
    bind(sub, "--n", staged.n, [](RunConfig& c, int v) { c.n = v; }, "Radius n of Lambda_n");
    bind(sub, "--offset", offsetText,
         [](RunConfig& c, const std::string& v) {
           const auto comma = v.find(',');
           if (comma == std::string::npos) throw ParamError("offset", "expected x,y");
           c.offset = std::array<int, 2>{static_cast<int>(parse_real(v.substr(0, comma), "offset")),
                                         static_cast<int>(parse_real(v.substr(comma + 1), "offset"))};
         },
         "Lower-left box corner inside Lambda_n, as x,y");
    bind(sub, "--bc", staged.bc, [](RunConfig& c, const std::string& v) { c.bc = v; }, "Boundary condition: free|wired");
    bind(sub, "--grid", staged.grid, [](RunConfig& c, const std::string& v) { c.grid = v; },
         "Control grid lo:hi:n (inclusive) or a comma list");
    bind(sub, "--boxes", staged.boxes, [](RunConfig& c, const std::vector<int>& v) { c.boxes = v; },
         "Scan box sizes k, each meaning Box(k,k-1)")
        ->delimiter(',');
    bind(sub, "--seed", staged.spec.seed, [](RunConfig& c, std::uint64_t v) { c.spec.seed = v; }, "Root seed");
    bind(sub, "--chains", staged.spec.chains, [](RunConfig& c, int v) { c.spec.chains = v; }, "Independent chains");
    bind(sub, "--sweeps", staged.spec.sampleSweeps, [](RunConfig& c, int v) { c.spec.sampleSweeps = v; },
         "Recorded sweeps per chain");
    bind(sub, "--burnin", staged.spec.burnInSweeps, [](RunConfig& c, int v) { c.spec.burnInSweeps = v; },
         "Burn-in sweeps per chain");
    bind(sub, "--thinning", staged.spec.thinning, [](RunConfig& c, int v) { c.spec.thinning = v; },
         "Sweeps between recorded samples");
    bind(sub, "--c", staged.c, [](RunConfig& c, double v) { c.c = v; }, "Absolute constant c for bound audits");
    bind(sub, "--grid-points", staged.gridPoints, [](RunConfig& c, int v) { c.gridPoints = v; },
         "Corollary p-grid size");
    bind(sub, "--dynamics", staged.dynamics, [](RunConfig& c, const std::string& v) { c.dynamics = v; },
         "Random-cluster dynamics: auto|heat-bath|sw");
    bind(sub, "--out", staged.out, [](RunConfig& c, const std::string& v) { c.out = v; },
         std::string("Output directory (default $") + kOutDirEnv + " or .)");
    CLI::Option* exact = sub->add_flag("--exact", staged.exact, "Exact enumeration instead of sampling");
    apply.push_back([exact](RunConfig& c) {
      if (exact->count() > 0) c.exact = true;
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalidConfig;
  }

  try {
    RunConfig cfg;
    if (!configPath.empty()) {
      std::ifstream is(configPath, std::ios::binary);
      if (!is) throw IoError("cannot open config " + configPath + ": " + std::strerror(errno));
      json j;
      try {
        j = json::parse(is);
      } catch (const json::parse_error& e) {
        throw ParamError("config", configPath + ": " + e.what());
      }
      cfg = config_from_json(j);
    }
    cfg.command = app.get_subcommands().front()->get_name();
    for (auto& f : apply) f(cfg);
    const Outcome out = run(cfg);
    std::cout << out.text;
    for (const auto& a : out.artifacts) std::cerr << "wrote " << a << '\n';
    return out.exitCode;
  } catch (const ParamError& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const report::SchemaError& e) {
    std::cerr << "invalid report: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::length_error& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid config: " << e.what() << '\n';
    return kInvalidConfig;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kRuntimeError;
  }
}

}  // namespace rclab::cli
