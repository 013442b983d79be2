#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rclab/events.hpp"
#include "rclab/graph.hpp"

namespace rclab {

/// Random-cluster parameters. Wired bc identifies the graph's boundary set.
struct RCParams {
  double p = 0.5;
  double q = 1.0;
  Boundary bc = Boundary::Free;
};

/// Ising parameters. Wired bc means plus bc: boundary spins clamped to +1.
struct IsingParams {
  double beta = 0.0;
  double h = 0.0;
  Boundary bc = Boundary::Free;
};

/// Coloured random-cluster parameters (free bc).
struct CRCMParams {
  double p = 0.5;
  double q = 2.0;
  double alpha = 0.5;
  double h = 0.0;

  bool monotone_regime() const { return q * alpha >= 1.0 && q * (1.0 - alpha) >= 1.0; }
};

struct EnumLimits {
  int maxEdges = 24;
  int maxVertices = 20;
};

/// Thrown for parameter values outside an operation's domain. `field` names
/// the offending parameter.
class ParamError : public std::invalid_argument {
 public:
  ParamError(std::string field, const std::string& what)
      : std::invalid_argument(field + ": " + what), field_(std::move(field)) {}
  const std::string& field() const { return field_; }

 private:
  std::string field_;
};

void validate(const RCParams& params);
void validate(const IsingParams& params);
void validate(const CRCMParams& params);

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

/// p^o (1-p)^c q^k with k counted under params.bc.
double rc_weight(const LatticeGraph& g, const EdgeConfig& omega, const RCParams& params);
double log_rc_weight(const LatticeGraph& g, const EdgeConfig& omega, const RCParams& params);

/// Visits every bond configuration with a weight proportional to the
/// random-cluster weight: w = exp(-shift) * rc_weight. Up to 16 edges the
/// weights are direct products and shift = 0; beyond that they are formed in
/// log space and summed with compensation. run() returns the sum of w, so
/// Z = run() * exp(log_shift()).
class RCEnumerator {
 public:
  RCEnumerator(const LatticeGraph& g, const RCParams& params, const EnumLimits& limits = {});

  /// f(mask, omega, w); omega is reused between calls.
  template <class F>
  double run(F&& f) const;

  double log_shift() const { return shift_; }

 private:
  double weight(std::uint64_t mask, ClusterPartition& scratch) const;

  const LatticeGraph& g_;
  RCParams params_;
  bool logSpace_;
  double shift_ = 0.0;
  std::vector<double> bernoulli_;  // indexed by open count
  std::vector<double> clusterFactor_;
};

double partition_function(const LatticeGraph& g, const RCParams& params, const EnumLimits& limits = {});
double event_prob(const LatticeGraph& g, const RCParams& params, const Event& a, const EnumLimits& limits = {});

/// Normalized probabilities indexed by configuration mask.
std::vector<double> rc_distribution(const LatticeGraph& g, const RCParams& params, const EnumLimits& limits = {});

struct EdgeMarginalReport {
  std::vector<double> marginal;
  double lower = 0.0;
  double upper = 0.0;
  double worstSlack = 0.0;
  int witnessEdge = -1;  ///< edge attaining the worst slack
  bool pass = true;
};

/// Checks p/(p+q(1-p)) <= phi(edge open) <= p for every edge. Needs q >= 1.
EdgeMarginalReport edge_marginal_bounds_audit(const LatticeGraph& g, const RCParams& params,
                                              const EnumLimits& limits = {});

/// Per-element influence data for one event, from a single enumeration.
struct InfluenceTable {
  double probA = 0.0;
  std::vector<double> marginal;     ///< mu(1_s)
  std::vector<double> conditional;  ///< J_A(s); NaN where the marginal is 0 or 1
  std::vector<double> absolute;     ///< I_A(s)
};

/// Without `withAbsolute` nothing is stored per configuration and `absolute` stays empty.
InfluenceTable influence_table(const LatticeGraph& g, const RCParams& params, const Event& a,
                               const EnumLimits& limits = {}, bool withAbsolute = true);
/// J_A(s) = mu(A | s open) - mu(A | s closed). Throws if the conditioning is degenerate.
double conditional_influence(const LatticeGraph& g, const RCParams& params, const Event& a, int s,
                             const EnumLimits& limits = {});
/// I_A(s) = mu(1_A(omega^s) != 1_A(omega_s)).
double absolute_influence(const LatticeGraph& g, const RCParams& params, const Event& a, int s,
                          const EnumLimits& limits = {});

struct DerivativeReport {
  double lhs = 0.0;  ///< central finite difference of mu_p(A)
  double rhs = 0.0;  ///< (1/(p(1-p))) sum_s mu(1_s)(1-mu(1_s)) J_A(s)
  double relError = 0.0;
};

DerivativeReport derivative_identity_audit(const LatticeGraph& g, const RCParams& params, const Event& a,
                                           double dp = 1e-5, const EnumLimits& limits = {});

/// Result of a two-coordinate lattice check on a mask-indexed weight table.
struct LatticeAudit {
  bool pass = true;
  std::uint64_t witness = 0;  ///< configuration omega of the first violation
  int e = -1;
  int f = -1;
  double lhs = 0.0;
  double rhs = 0.0;
  /// Smallest lhs/rhs seen; 1 means equality everywhere.
  double worstRatio = 1.0;
  std::size_t checked = 0;
};

/// w(omega^{ef}) w(omega) >= w(omega^e) w(omega^f) for all omega and e != f
/// closed in omega. `n` elements, weights.size() == 2^n, n <= 20.
LatticeAudit fkg_lattice_audit(std::span<const double> weights, int n, double relTol = 1e-12);

/// w1(omega^e) w2(omega) <= w2(omega^e) w1(omega) for all omega and e closed
/// in omega; with one of the two measures monotone this gives w1 <=_st w2.
LatticeAudit holley_ordering_audit(std::span<const double> w1, std::span<const double> w2, int n,
                                   double relTol = 1e-12);

/// Unnormalized phi_h weight: rc weight (free bc) times prod_C [alpha e^{h|C|} + 1 - alpha].
double crcm_edge_weight(const LatticeGraph& g, const EdgeConfig& omega, const CRCMParams& params);
std::vector<double> crcm_edge_distribution(const LatticeGraph& g, const CRCMParams& params,
                                           const EnumLimits& limits = {});

/// pi_h over vertex subsets (bit v of the index = spin of v), normalized.
std::vector<double> crcm_spin_distribution(const LatticeGraph& g, const CRCMParams& params,
                                           const EnumLimits& limits = {});
/// pi_h(A) for the spin configuration equal to 1 exactly on A.
double crcm_spin_prob(const LatticeGraph& g, const CRCMParams& params, const SpinConfig& a,
                      const EnumLimits& limits = {});
/// Two-coordinate criterion on pi_h.
LatticeAudit crcm_monotonicity_audit(const LatticeGraph& g, const CRCMParams& params,
                                     const EnumLimits& limits = {});

/// Z of the random-cluster measure with cluster weight qPrime on the subgraph
/// induced by `vertexMask` (free bc, isolated vertices count). Z of the
/// empty set is 1.
double induced_partition_function(const LatticeGraph& g, std::uint64_t vertexMask, double p, double qPrime);

/// Ising Boltzmann distribution over spin masks; under plus bc masks with a
/// minus boundary spin have probability 0.
std::vector<double> ising_distribution(const LatticeGraph& g, const IsingParams& params,
                                       const EnumLimits& limits = {});
double ising_prob(const LatticeGraph& g, const IsingParams& params, const Event& a, const EnumLimits& limits = {});

struct OnePointBounds {
  double lower = 0.0;
  double upper = 1.0;
};

/// Bounds on pi_{beta,h}(sigma_x = +1) for a vertex of degree `degree`.
OnePointBounds ising_one_point_bounds(double beta, double h, int degree);
/// Bounds on pi_h(sigma_x = 1) in a graph of maximum degree `maxDegree`.
OnePointBounds crcm_one_point_bounds(const CRCMParams& params, int maxDegree);

double total_variation(std::span<const double> a, std::span<const double> b);

// ---------------------------------------------------------------------------

template <class F>
double RCEnumerator::run(F&& f) const {
  const auto E = static_cast<std::size_t>(g_.edge_count());
  const std::uint64_t total = std::uint64_t{1} << E;
  ClusterPartition scratch(g_.vertex_count());
  EdgeConfig omega(E);
  auto fill = [&](std::uint64_t mask) {
    for (std::size_t e = 0; e < E; ++e) omega.bits[e] = static_cast<std::uint8_t>((mask >> e) & 1u);
  };
  if (logSpace_) {
    CompensatedSum z;
    for (std::uint64_t mask = 0; mask < total; ++mask) {
      const double w = weight(mask, scratch);
      fill(mask);
      f(mask, static_cast<const EdgeConfig&>(omega), w);
      z.add(w);
    }
    return z.value();
  }
  double z = 0.0;
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    const double w = weight(mask, scratch);
    fill(mask);
    f(mask, static_cast<const EdgeConfig&>(omega), w);
    z += w;
  }
  return z;
}

}  // namespace rclab
