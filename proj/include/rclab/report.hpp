#pragma once

#include <json.hpp>
#include <ostream>
#include <stdexcept>
#include <string>

#include "rclab/samplers.hpp"
#include "rclab/threshold.hpp"

namespace rclab::report {

inline constexpr int kSchemaVersion = 1;

/// Code-version tag stamped on every artifact.
std::string version_tag();

/// NaN becomes null.
nlohmann::json number(double x);

nlohmann::json to_json(const Estimate& est);
nlohmann::json to_json(const BoundReport& r);
nlohmann::json to_json(const Lemma1Report& r);
nlohmann::json to_json(const LogisticFit& f);

/// Document skeleton: schema_version, kind, version.
nlohmann::json document(const std::string& kind);

/// Scan document with rows, fits, invariant counters and assumptions.
nlohmann::json scan_document(const ThresholdScan& scan, const std::string& model);

/// Header `control,k,m,mean,stderr,n,seed,version`, one row per scan point in
/// box-major order. Reals use 17 significant digits; NaN is written as `nan`.
void write_scan_csv(std::ostream& os, const ThresholdScan& scan);

class SchemaError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Six significant digits; NaN or null reads "degenerate".
std::string format_number(double x);

/// Plain-text table for a report document. Throws SchemaError for an
/// unsupported schema_version or kind.
std::string render(const nlohmann::json& doc);

}  // namespace rclab::report
