#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rclab/exact.hpp"
#include "rclab/graph.hpp"
#include "rclab/samplers.hpp"

namespace rclab {

/// sqrt(q) / (1 + sqrt(q)).
double self_dual_point(double q);
/// p_d with p_d/(1-p_d) = q(1-p)/p.
double dual_parameter(double p, double q);

struct RhoNu {
  double rho = 0.0;
  double nu = 0.0;
};
/// rho = (2 q eta / p)^{c/q}, nu = (2 q eta / p_d)^{c/q}.
RhoNu rho_nu(double eta, double p, double q, double c);

/// e^{2h+8beta} / (1 + e^{2h+8beta})^2.
double ising_xi(double beta, double h);

/// B_k = [0,k] x [0,k-1].
inline std::pair<int, int> square_box(int k) { return {k, k - 1}; }

/// Generic lhs/rhs verdict. slack = rhs - lhs.
struct BoundReport {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;
  double tolerance = 0.0;
  bool exact = true;
  bool pass = true;
  std::vector<std::pair<std::string, double>> inputs;
  std::vector<std::string> notes;
};

/// phi^0_{Lambda_n, p_sd, q}(0 <-> dLambda_{floor(k/2)}) on Lambda_n with free bc.
/// n defaults to 2k. Exact for k <= 1 and, when q = 1, whenever the edges
/// inside Lambda_{floor(k/2)} fit the enumeration budget; otherwise Monte Carlo.
struct EtaEstimate {
  Estimate est;
  bool exact = false;
  int radius = 0;
  int n = 0;
};
EtaEstimate estimate_eta(double q, int k, const ChainSpec& spec, std::optional<int> n = std::nullopt,
                         bool preferExact = true);

/// Upper bound for the infinite-volume free probability that the origin is
/// joined to dLambda_r at p_sd: the wired measure on Lambda_r. Frame-frame
/// edges are dropped (they never matter under wired bc), which makes r <= 2
/// exact. Larger r falls back to Monte Carlo and adds 4 standard errors.
struct EtaBound {
  double value = 1.0;
  bool exact = true;
  int radius = 0;
  Estimate est;
};
EtaBound eta_upper_bound(double q, int k, const ChainSpec& spec = {});

/// Both sides of phi^0_{p,q}(H_{k,m}) = 1 - phi^1_{p_d,q}(dual top-bottom crossing).
BoundReport duality_audit(int k, int m, double p, double q, bool exact, const ChainSpec& spec = {});

struct Lemma1Config {
  int k = 1;
  int m = 1;
  int n = 1;
  Point offset{0, 0};  ///< lower-left corner of B_{k,m} inside Lambda_n
  double p = 0.5;
  double q = 1.0;
  /// Free gives the p <= p_sd form, wired the p >= p_sd form; unset picks by p.
  std::optional<Boundary> bc;
  bool exact = true;
  ChainSpec spec{};
};

struct EdgeInfluenceCheck {
  int edge = -1;
  Point a, b;
  double J = 0.0;
  double stdError = 0.0;
  double slack = 0.0;
};

struct Lemma1Report {
  Lemma1Config config;
  Boundary bc = Boundary::Free;
  double eta = 1.0;     ///< eta-hat used in the bound
  bool etaExact = true;
  int etaIndex = 0;     ///< k for the free form, m+1 for the wired form
  double bound = 0.0;   ///< (q/p) eta or (q/p_d) eta
  double maxJ = 0.0;
  double minSlack = 0.0;
  int witnessEdge = -1;
  bool exact = true;
  bool pass = true;
  std::vector<EdgeInfluenceCheck> edges;
  std::vector<std::string> notes;

  /// J for the edge between two lattice points; 0 for edges outside Lambda_n.
  double influence(Point a, Point b) const;
};

Lemma1Report audit_lemma1(const Lemma1Config& config);

enum class ScanModel { RC, Ising, CRCM };

struct ScanConfig {
  ScanModel model = ScanModel::RC;
  RCParams rc{};
  IsingParams ising{};
  CRCMParams crcm{};
  std::vector<double> grid;                ///< p for RC, h otherwise
  std::vector<std::pair<int, int>> boxes;  ///< (k,m)
  ChainSpec spec{};
  RCDynamics dynamics = RCDynamics::Auto;
};

struct ScanPoint {
  double control = 0.0;
  int k = 0;
  int m = 0;
  Estimate est;
};

struct LogisticFit {
  int k = 0;
  int m = 0;
  double midpoint = 0.0;
  double slope = 0.0;  ///< b in logit(P) = b (x - midpoint)
  double slopeStdError = 0.0;
  double midpointStdError = 0.0;
  int pointsUsed = 0;
  double reducedChi2 = 0.0;
  bool converged = false;
  std::string note;
};

struct ThresholdScan {
  ScanConfig config;
  std::vector<ScanPoint> points;  ///< box-major, then grid order
  std::vector<LogisticFit> fits;  ///< one per box
  long long complementarityChecks = 0;
  long long complementarityViolations = 0;
  int monotonicityViolations = 0;
  std::vector<std::string> assumptions;
};

/// Weighted least squares on logit-transformed estimates with weights
/// (m(1-m)/se)^2. Points at 0 or 1, or without an error bar, are skipped.
/// The slope error is inflated by the reduced chi-square when that exceeds 1.
LogisticFit fit_logistic(const std::vector<ScanPoint>& points);

void validate(const ScanConfig& config);
ThresholdScan threshold_scan(const ScanConfig& config);

/// Seed of scan job `index` (box-major order).
std::uint64_t scan_job_seed(std::uint64_t seed, std::size_t index);

/// Finite-difference-free check of mu_{p1}(A)[1 - mu_{p2}(A)] <= kappa^{B(p2-p1)}
/// with B = inf c xi_p/(p(1-p)) and kappa = 2 sup J over an inclusive p-grid.
struct CorollaryReport {
  BoundReport bound;
  double B = 0.0;
  double kappa = 0.0;
  bool gridTooCoarse = false;
  std::vector<double> grid, Bs, kappas;
};
CorollaryReport corollary_audit(const LatticeGraph& g, const RCParams& params, const Event& a, double p1, double p2,
                                double c, int gridPoints = 100, const EnumLimits& limits = {});

/// Sharp-threshold bound on B_k = Box(k,k-1) with an upper eta-hat, for the
/// supplied c: phi^1_{p}(H_k) <= 2 rho^{p_sd-p} below p_sd and
/// phi^0_{p}(H_k) >= 1 - 2 nu^{p-p_sd} above. Exact for k <= 3.
BoundReport theorem_bound_audit(int k, double p, double q, double c, const ChainSpec& spec = {});

}  // namespace rclab
