#include "rclab/report.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <vector>

namespace rclab::report {

using nlohmann::json;

namespace {

std::string csv_real(double x) {
  if (std::isnan(x)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string cell(const json& v) {
  if (v.is_null()) return "degenerate";
  if (v.is_boolean()) return v.get<bool>() ? "pass" : "FAIL";
  if (v.is_number_integer() || v.is_number_unsigned()) return v.dump();
  if (v.is_number()) return format_number(v.get<double>());
  if (v.is_string()) return v.get<std::string>();
  return v.dump();
}

// Left-aligned columns, two spaces apart.
std::string table(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  std::vector<std::size_t> width(header.size());
  for (std::size_t c = 0; c < header.size(); ++c) width[c] = header[c].size();
  for (const auto& r : rows)
    for (std::size_t c = 0; c < r.size() && c < width.size(); ++c) width[c] = std::max(width[c], r[c].size());
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& r) {
    std::string s;
    for (std::size_t c = 0; c < r.size(); ++c) {
      s += r[c];
      if (c + 1 < r.size()) s += std::string(width[c] - r[c].size() + 2, ' ');
    }
    os << s << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
  return os.str();
}

const json& field(const json& obj, const char* key) {
  static const json null;
  auto it = obj.find(key);
  return it == obj.end() ? null : *it;
}

}  // namespace

std::string version_tag() { return RCLAB_VERSION; }

json number(double x) { return std::isnan(x) ? json(nullptr) : json(x); }

json to_json(const Estimate& est) {
  return {{"mean", number(est.mean)}, {"stderr", number(est.stdError)}, {"n", est.n},
          {"batches", est.batchCount},  {"seed", est.seed},               {"chains", est.chains}};
}

json to_json(const BoundReport& r) {
  json inputs = json::object();
  for (const auto& [k, v] : r.inputs) inputs[k] = number(v);
  return {{"name", r.name},   {"lhs", number(r.lhs)},   {"rhs", number(r.rhs)},
          {"slack", number(r.slack)}, {"tolerance", number(r.tolerance)}, {"exact", r.exact},
          {"pass", r.pass},   {"inputs", inputs},       {"notes", r.notes}};
}

json to_json(const Lemma1Report& r) {
  BoundReport b;
  b.name = "influence-bound";
  b.lhs = r.maxJ;
  b.rhs = r.bound;
  b.slack = r.minSlack;
  b.exact = r.exact;
  b.pass = r.pass;
  b.tolerance = r.exact ? 1e-12 : 0.0;
  const auto& c = r.config;
  b.inputs = {{"k", c.k}, {"m", c.m}, {"n", c.n}, {"offset_x", c.offset.x}, {"offset_y", c.offset.y},
              {"p", c.p}, {"q", c.q}, {"eta", r.eta}, {"eta_index", r.etaIndex}};
  b.notes = r.notes;
  b.notes.push_back(r.bc == Boundary::Wired ? "wired form: J^1 <= (q/p_d) eta_{m+1}" : "free form: J^0 <= (q/p) eta_k");
  b.notes.push_back(r.etaExact ? "eta is an exact upper bound" : "eta is a Monte Carlo upper bound");
  json out = to_json(b);
  json edges = json::array();
  for (const auto& e : r.edges)
    edges.push_back({{"edge", e.edge},
                     {"a", {e.a.x, e.a.y}},
                     {"b", {e.b.x, e.b.y}},
                     {"J", number(e.J)},
                     {"stderr", number(e.stdError)},
                     {"slack", number(e.slack)}});
  out["edges"] = edges;
  out["witness_edge"] = r.witnessEdge;
  return out;
}

json to_json(const LogisticFit& f) {
  return {{"k", f.k},
          {"m", f.m},
          {"midpoint", number(f.midpoint)},
          {"midpoint_stderr", number(f.midpointStdError)},
          {"slope", number(f.slope)},
          {"slope_stderr", number(f.slopeStdError)},
          {"points", f.pointsUsed},
          {"reduced_chi2", number(f.reducedChi2)},
          {"converged", f.converged},
          {"note", f.note}};
}

json document(const std::string& kind) {
  return {{"schema_version", kSchemaVersion}, {"kind", kind}, {"version", version_tag()}};
}

json scan_document(const ThresholdScan& scan, const std::string& model) {
  json doc = document("scan");
  doc["model"] = model;
  json rows = json::array();
  for (const auto& pt : scan.points)
    rows.push_back({{"control", pt.control},
                    {"k", pt.k},
                    {"m", pt.m},
                    {"mean", number(pt.est.mean)},
                    {"stderr", number(pt.est.stdError)},
                    {"n", pt.est.n},
                    {"seed", pt.est.seed}});
  doc["rows"] = rows;
  json fits = json::array();
  for (const auto& f : scan.fits) fits.push_back(to_json(f));
  doc["fits"] = fits;
  doc["complementarity"] = {{"checks", scan.complementarityChecks},
                            {"violations", scan.complementarityViolations}};
  doc["monotonicity_violations"] = scan.monotonicityViolations;
  doc["assumptions"] = scan.assumptions;
  return doc;
}

void write_scan_csv(std::ostream& os, const ThresholdScan& scan) {
  os << "control,k,m,mean,stderr,n,seed,version\n";
  const std::string tag = version_tag();
  for (const auto& pt : scan.points)
    os << csv_real(pt.control) << ',' << pt.k << ',' << pt.m << ',' << csv_real(pt.est.mean) << ','
       << csv_real(pt.est.stdError) << ',' << pt.est.n << ',' << pt.est.seed << ',' << tag << '\n';
}

std::string format_number(double x) {
  if (std::isnan(x)) return "degenerate";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

std::string render(const json& doc) {
  if (!doc.is_object() || !doc.contains("schema_version"))
    throw SchemaError("report has no schema_version");
  const json& sv = doc["schema_version"];
  if (!sv.is_number_integer() || sv.get<int>() != kSchemaVersion)
    throw SchemaError("unsupported schema_version " + sv.dump() + " (supported: " +
                      std::to_string(kSchemaVersion) + ")");
  const std::string kind = field(doc, "kind").is_string() ? doc["kind"].get<std::string>() : "";
  std::ostringstream os;

  if (kind == "scan") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : field(doc, "rows"))
      rows.push_back({cell(r["control"]), cell(r["k"]), cell(r["m"]), cell(r["mean"]), cell(r["stderr"]),
                      cell(r["n"]), cell(r["seed"])});
    os << table({"control", "k", "m", "mean", "stderr", "n", "seed"}, rows);
    const json& fits = field(doc, "fits");
    if (fits.is_array() && !fits.empty()) {
      std::vector<std::vector<std::string>> fr;
      for (const auto& f : fits)
        fr.push_back({cell(f["k"]), cell(f["m"]), cell(f["midpoint"]), cell(f["slope"]), cell(f["slope_stderr"]),
                      f["converged"].get<bool>() ? "yes" : "no"});
      os << '\n' << table({"k", "m", "midpoint", "slope", "slope_stderr", "converged"}, fr);
    }
    return os.str();
  }
  if (kind == "audit") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& r : field(doc, "reports"))
      rows.push_back({cell(r["name"]), cell(r["lhs"]), cell(r["rhs"]), cell(r["slack"]), cell(r["pass"])});
    os << table({"check", "lhs", "rhs", "slack", "verdict"}, rows);
    for (const auto& r : field(doc, "reports"))
      for (const auto& n : field(r, "notes")) os << "note: " << n.get<std::string>() << '\n';
    return os.str();
  }
  if (kind == "enumerate" || kind == "sample") {
    std::vector<std::vector<std::string>> rows;
    for (const auto& v : field(doc, "values"))
      rows.push_back({cell(v["name"]), cell(v["value"]), v.contains("stderr") ? cell(v["stderr"]) : "-"});
    os << table({"quantity", "value", "stderr"}, rows);
    return os.str();
  }
  throw SchemaError("unknown report kind '" + kind + "'");
}

}  // namespace rclab::report
