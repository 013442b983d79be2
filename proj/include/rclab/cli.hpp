#pragma once

#include <array>
#include <json.hpp>
#include <optional>
#include <string>
#include <vector>

#include "rclab/samplers.hpp"

namespace rclab::cli {

/// Everything one invocation needs. Defaults are the documented CLI defaults.
struct RunConfig {
  std::string command = "audit";  ///< enumerate | sample | scan | audit | render
  std::string target;             ///< model (rc, ising, crcm) or audit kind
  double q = 1.0;
  double p = 0.5;
  double p2 = 0.6;  ///< upper end for the corollary audit
  double alpha = 0.5;
  double h = 0.0;
  double beta = 0.3;
  int k = 2;
  int m = 1;
  int n = 2;
  std::optional<std::array<int, 2>> offset;  ///< box corner in Lambda_n
  std::string bc;    ///< free | wired; empty picks the operation's default
  std::string grid;  ///< lo:hi:n (inclusive) or a comma list
  std::vector<int> boxes{4, 8};  ///< scan boxes B_k = Box(k, k-1)
  ChainSpec spec{};
  double c = 0.1;
  bool exact = false;
  int gridPoints = 100;
  std::string dynamics = "auto";  ///< auto | heat-bath | sw
  std::string out;    ///< output directory; empty uses $RCLAB_OUT_DIR, then "."
  std::string input;  ///< report path for render

  friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

inline constexpr const char* kOutDirEnv = "RCLAB_OUT_DIR";

nlohmann::json to_json(const RunConfig& cfg);
/// Starts from `base` and applies the keys present. Unknown keys and type
/// mismatches throw ParamError naming the key.
RunConfig config_from_json(const nlohmann::json& j, RunConfig base = {});

/// `lo:hi:n` with inclusive endpoints, or comma-separated values.
std::vector<double> parse_grid(const std::string& text);

/// Schema check; throws ParamError naming the field.
void validate(const RunConfig& cfg);

enum ExitCode : int { kOk = 0, kAuditFailed = 1, kInvalidConfig = 2, kRuntimeError = 3 };

struct Outcome {
  int exitCode = kOk;
  std::vector<std::string> artifacts;  ///< files written
  std::string text;                    ///< rendered summary
};

/// Runs one command and writes its artifacts.
Outcome run(const RunConfig& cfg);

/// Argument parsing plus run(); prints the summary and errors.
int main(int argc, char** argv);

}  // namespace rclab::cli
