#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "rclab/events.hpp"
#include "rclab/exact.hpp"
#include "rclab/graph.hpp"
#include "rclab/parallel.hpp"
#include "rclab/rng.hpp"

namespace rclab {

struct ChainSpec {
  std::uint64_t seed = 1;
  int burnInSweeps = 200;
  int sampleSweeps = 2000;
  int thinning = 1;
  int chains = 4;

  friend bool operator==(const ChainSpec&, const ChainSpec&) = default;
};

void validate(const ChainSpec& spec);

/// Monte Carlo estimate with batch-means error bar. stdError is NaN when
/// fewer than 16 batches were available.
struct Estimate {
  double mean = 0.0;
  double stdError = 0.0;
  long long n = 0;
  int batchCount = 0;
  std::uint64_t seed = 0;
  int chains = 0;

  bool degenerate() const { return std::isnan(stdError); }
};

inline constexpr int kMinBatches = 16;
inline constexpr int kTargetBatches = 32;

/// Batch means over per-chain sample series: each chain is cut into
/// ceil(32 / chains) equal batches.
Estimate batch_means(const std::vector<std::vector<double>>& series, std::uint64_t seed);

/// Combines independent estimates: n-weighted mean, pooled variance.
Estimate merge(const Estimate& a, const Estimate& b);

/// Connectivity queries used by the single-edge dynamics. One per chain.
class ComponentProbe {
 public:
  struct Result {
    bool connected = false;
    int sizeU = 0;  ///< cluster sizes off e, filled only when not connected and sizes requested
    int sizeV = 0;
  };

  /// Whether the endpoints of e are joined by open edges other than e. Under
  /// wired bc two boundary-touching clusters count as joined.
  bool connected_off(const LatticeGraph& g, const EdgeConfig& omega, int e, Boundary bc);
  /// Free-bc query with full cluster sizes when the endpoints are not joined.
  Result sizes_off(const LatticeGraph& g, const EdgeConfig& omega, int e);

 private:
  void prepare(int n);
  int bfs_size(const LatticeGraph& g, const EdgeConfig& omega, int skip, int start, int target, bool& hit);

  std::vector<std::uint32_t> markU_, markV_;
  std::uint32_t epoch_ = 0;
  std::vector<int> qu_, qv_;
};

/// Probability that e is open given the rest of omega: p if its endpoints are
/// joined off e, p/(p+(1-p)q) otherwise.
double rc_open_probability(const LatticeGraph& g, const EdgeConfig& omega, int e, const RCParams& params,
                           ComponentProbe& probe);

/// One heat-bath sweep over edges in index order, one uniform per edge. Two
/// chains fed the same uniforms stay ordered when q >= 1.
void rc_heat_bath_sweep(const LatticeGraph& g, EdgeConfig& omega, const RCParams& params, Rng& rng,
                        ComponentProbe& probe);
void rc_heat_bath_sweep(const LatticeGraph& g, EdgeConfig& omega, const RCParams& params, Rng& rng);

/// Potts colouring plus the bond configuration of the last bond step.
struct PottsState {
  std::vector<std::uint8_t> colour;
  EdgeConfig bonds;
};

PottsState potts_initial(const LatticeGraph& g, int q);
/// Edwards-Sokal alternation: open each same-colour edge with probability p,
/// then recolour each cluster uniformly. Under wired bc the boundary cluster
/// keeps colour 0. Requires integer q >= 2.
void swendsen_wang_sweep(const LatticeGraph& g, PottsState& state, const RCParams& params, Rng& rng);

/// Plus bc (bc = Wired) starts and stays with boundary spins +1.
SpinConfig ising_initial(const LatticeGraph& g, const IsingParams& params, bool allPlus = true);
/// Heat-bath single-site sweep in vertex order.
void ising_glauber_sweep(const LatticeGraph& g, SpinConfig& sigma, const IsingParams& params, Rng& rng);

/// log(alpha e^{h s} + 1 - alpha).
double crcm_log_cluster_factor(double alpha, double h, int size);
/// Probability that a cluster of size s gets spin 1.
double crcm_cluster_plus_probability(double alpha, double h, int size);

/// Heat-bath probability that e is open under phi_h given the rest.
double crcm_open_probability(const LatticeGraph& g, const EdgeConfig& omega, int e, const CRCMParams& params,
                             ComponentProbe& probe);
void crcm_edge_sweep(const LatticeGraph& g, EdgeConfig& omega, const CRCMParams& params, Rng& rng,
                     ComponentProbe& probe);
/// Labels the open clusters of omega with independent spins.
SpinConfig crcm_sample(const LatticeGraph& g, const CRCMParams& params, Rng& rng, const EdgeConfig& omega);

/// Exact monotone coupling of phi(. | e closed) and phi(. | e open) on a
/// small graph. Edges are revealed breadth-first from the endpoint u of e in
/// the upper configuration, both sampled from exact conditionals with a
/// common uniform; once the cluster of u is exhausted the remaining edges are
/// sampled once and copied. Under wired bc reaching the boundary adds the
/// whole boundary to the explored cluster.
class MuECoupler {
 public:
  MuECoupler(const LatticeGraph& g, const RCParams& params, int e, const EnumLimits& limits = {});

  struct Draw {
    EdgeConfig lower;  ///< pi, e closed
    EdgeConfig upper;  ///< omega, e open
    std::vector<std::uint8_t> inCluster;  ///< vertices of C_x(omega)
  };
  Draw draw(Rng& rng) const;

  const std::vector<double>& distribution() const { return dist_; }

 private:
  double open_given(std::uint64_t revealed, std::uint64_t values, int f) const;

  const LatticeGraph& g_;
  RCParams params_;
  int e_;
  std::vector<double> dist_;
};

/// Exact coupling of the conditional laws of the coloured random-cluster
/// measure given sigma_x = 0 and sigma_x = 1 (free bc, small graphs).
class Kappa01Coupler {
 public:
  Kappa01Coupler(const LatticeGraph& g, const CRCMParams& params, int x, const EnumLimits& limits = {});

  struct Draw {
    EdgeConfig omega0, omega1;
    SpinConfig sigma0, sigma1;
    std::vector<std::uint8_t> cluster0, cluster1;  ///< C_x(omega^0), C_x(omega^1)
  };
  Draw draw(Rng& rng) const;

  /// Edge law of omega^b, indexed by mask.
  const std::vector<double>& edge_distribution(int b) const { return b ? dist1_ : dist0_; }

 private:
  double open_given(const std::vector<double>& dist, std::uint64_t revealed, std::uint64_t values, int f) const;

  const LatticeGraph& g_;
  CRCMParams params_;
  int x_;
  std::vector<double> dist0_, dist1_;
};

/// Runs spec.chains independent chains. make(rng) builds a chain exposing
/// sweep(rng) and observe() -> double; the chain's own stream is passed to
/// both. Deterministic given spec.seed.
template <class MakeChain>
Estimate run_chains(const ChainSpec& spec, MakeChain&& make) {
  validate(spec);
  std::vector<std::vector<double>> series(static_cast<std::size_t>(spec.chains));
  parallel_for(series.size(), [&](std::size_t c) {
    Rng rng = make_stream(spec.seed, c);
    auto chain = make(rng);
    for (int s = 0; s < spec.burnInSweeps; ++s) chain.sweep(rng);
    auto& out = series[c];
    out.reserve(static_cast<std::size_t>(spec.sampleSweeps));
    for (int s = 0; s < spec.sampleSweeps; ++s) {
      for (int t = 0; t < spec.thinning; ++t) chain.sweep(rng);
      out.push_back(chain.observe());
    }
  });
  Estimate est = batch_means(series, spec.seed);
  est.chains = spec.chains;
  return est;
}

enum class RCDynamics { Auto, HeatBath, SwendsenWang };

/// Event probability under the random-cluster measure. Auto picks
/// Swendsen-Wang for integer q >= 2, heat-bath otherwise.
Estimate estimate_event(const LatticeGraph& g, const RCParams& params, const Event& a, const ChainSpec& spec,
                        RCDynamics dynamics = RCDynamics::Auto);
/// Spin event under the Ising measure, Glauber dynamics. `visit`, if set, sees
/// every recorded configuration.
Estimate estimate_event(const LatticeGraph& g, const IsingParams& params, const Event& a, const ChainSpec& spec,
                        const std::function<void(const SpinConfig&)>& visit = {});
/// Bond or spin event under the coloured random-cluster measure.
Estimate estimate_event(const LatticeGraph& g, const CRCMParams& params, const Event& a, const ChainSpec& spec,
                        const std::function<void(const SpinConfig&)>& visit = {});

}  // namespace rclab
