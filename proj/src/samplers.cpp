#include "rclab/samplers.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>

namespace rclab {

void validate(const ChainSpec& spec) {
  if (spec.chains < 1) throw ParamError("chains", "must be >= 1");
  if (spec.sampleSweeps < 1) throw ParamError("sweeps", "must be >= 1");
  if (spec.burnInSweeps < 0) throw ParamError("burnin", "must be >= 0");
  if (spec.thinning < 1) throw ParamError("thinning", "must be >= 1");
}

Estimate batch_means(const std::vector<std::vector<double>>& series, std::uint64_t seed) {
  Estimate est;
  est.seed = seed;
  est.chains = static_cast<int>(series.size());
  if (series.empty()) {
    est.stdError = std::numeric_limits<double>::quiet_NaN();
    return est;
  }
  const int perChain = (kTargetBatches + est.chains - 1) / est.chains;
  CompensatedSum total;
  std::vector<double> batchMean;
  for (const auto& s : series) {
    for (double x : s) total.add(x);
    est.n += static_cast<long long>(s.size());
    const std::size_t size = s.size() / static_cast<std::size_t>(perChain);
    if (size == 0) continue;
    for (int b = 0; b < perChain; ++b) {
      double sum = 0.0;
      for (std::size_t i = 0; i < size; ++i) sum += s[static_cast<std::size_t>(b) * size + i];
      batchMean.push_back(sum / static_cast<double>(size));
    }
  }
  est.mean = est.n ? total.value() / static_cast<double>(est.n) : 0.0;
  est.batchCount = static_cast<int>(batchMean.size());
  if (est.batchCount < kMinBatches) {
    est.stdError = std::numeric_limits<double>::quiet_NaN();
    return est;
  }
  double m = 0.0;
  for (double x : batchMean) m += x;
  m /= est.batchCount;
  double ss = 0.0;
  for (double x : batchMean) ss += (x - m) * (x - m);
  est.stdError = std::sqrt(ss / (est.batchCount - 1) / est.batchCount);
  return est;
}

Estimate merge(const Estimate& a, const Estimate& b) {
  if (a.n == 0) return b;
  if (b.n == 0) return a;
  Estimate out;
  const double na = static_cast<double>(a.n), nb = static_cast<double>(b.n), n = na + nb;
  out.n = a.n + b.n;
  out.mean = (na * a.mean + nb * b.mean) / n;
  out.stdError = std::sqrt(na * na * a.stdError * a.stdError + nb * nb * b.stdError * b.stdError) / n;
  out.batchCount = a.batchCount + b.batchCount;
  out.seed = a.seed;
  out.chains = a.chains + b.chains;
  return out;
}

// ---------------------------------------------------------------------------
// Connectivity probe
// ---------------------------------------------------------------------------

void ComponentProbe::prepare(int n) {
  if (markU_.size() != static_cast<std::size_t>(n)) {
    markU_.assign(static_cast<std::size_t>(n), 0);
    markV_.assign(static_cast<std::size_t>(n), 0);
    epoch_ = 0;
  }
  if (++epoch_ == 0) {
    std::fill(markU_.begin(), markU_.end(), 0);
    std::fill(markV_.begin(), markV_.end(), 0);
    epoch_ = 1;
  }
}

bool ComponentProbe::connected_off(const LatticeGraph& g, const EdgeConfig& omega, int e, Boundary bc) {
  const int u = g.edge(e).u, v = g.edge(e).v;
  const bool wired = bc == Boundary::Wired;
  prepare(g.vertex_count());
  bool bU = wired && g.is_boundary(u), bV = wired && g.is_boundary(v);
  if (bU && bV) return true;
  qu_.assign(1, u);
  qv_.assign(1, v);
  markU_[static_cast<std::size_t>(u)] = epoch_;
  markV_[static_cast<std::size_t>(v)] = epoch_;
  std::size_t hu = 0, hv = 0;

  // Expands one vertex of one side; returns 1 on meeting, 0 otherwise.
  auto step = [&](std::vector<int>& q, std::size_t& head, std::vector<std::uint32_t>& mine,
                  const std::vector<std::uint32_t>& theirs, bool& touches) -> bool {
    const int w = q[head++];
    for (int f : g.incident(w)) {
      if (f == e || !omega.open(f)) continue;
      const int z = g.other_end(f, w);
      if (theirs[static_cast<std::size_t>(z)] == epoch_) return true;
      if (mine[static_cast<std::size_t>(z)] == epoch_) continue;
      mine[static_cast<std::size_t>(z)] = epoch_;
      q.push_back(z);
      if (wired && g.is_boundary(z)) touches = true;
    }
    return false;
  };

  while (true) {
    if (bU && bV) return true;
    const bool uLive = hu < qu_.size(), vLive = hv < qv_.size();
    if (!uLive || !vLive) {
      // One side is a complete cluster not containing the other endpoint.
      const bool doneTouches = !uLive ? bU : bV;
      if (!wired || !doneTouches) return false;
      auto& q = !uLive ? qv_ : qu_;
      auto& head = !uLive ? hv : hu;
      auto& mine = !uLive ? markV_ : markU_;
      auto& theirs = !uLive ? markU_ : markV_;
      bool& touches = !uLive ? bV : bU;
      while (head < q.size() && !touches)
        if (step(q, head, mine, theirs, touches)) return true;
      return touches;
    }
    if (step(qu_, hu, markU_, markV_, bU)) return true;
    if (hv < qv_.size() && step(qv_, hv, markV_, markU_, bV)) return true;
  }
}

int ComponentProbe::bfs_size(const LatticeGraph& g, const EdgeConfig& omega, int skip, int start, int target,
                             bool& hit) {
  qu_.assign(1, start);
  markU_[static_cast<std::size_t>(start)] = epoch_;
  for (std::size_t head = 0; head < qu_.size(); ++head) {
    const int w = qu_[head];
    for (int f : g.incident(w)) {
      if (f == skip || !omega.open(f)) continue;
      const int z = g.other_end(f, w);
      if (markU_[static_cast<std::size_t>(z)] == epoch_) continue;
      if (z == target) hit = true;
      markU_[static_cast<std::size_t>(z)] = epoch_;
      qu_.push_back(z);
    }
  }
  return static_cast<int>(qu_.size());
}

ComponentProbe::Result ComponentProbe::sizes_off(const LatticeGraph& g, const EdgeConfig& omega, int e) {
  prepare(g.vertex_count());
  Result r;
  bool hit = false;
  r.sizeU = bfs_size(g, omega, e, g.edge(e).u, g.edge(e).v, hit);
  if (hit) {
    r.connected = true;
    return r;
  }
  r.sizeV = bfs_size(g, omega, e, g.edge(e).v, -1, hit);
  return r;
}

// ---------------------------------------------------------------------------
// Random-cluster heat bath
// ---------------------------------------------------------------------------

double rc_open_probability(const LatticeGraph& g, const EdgeConfig& omega, int e, const RCParams& params,
                           ComponentProbe& probe) {
  if (params.q == 1.0) return params.p;
  if (probe.connected_off(g, omega, e, params.bc)) return params.p;
  return params.p / (params.p + (1.0 - params.p) * params.q);
}

void rc_heat_bath_sweep(const LatticeGraph& g, EdgeConfig& omega, const RCParams& params, Rng& rng,
                        ComponentProbe& probe) {
  for (int e = 0; e < g.edge_count(); ++e) {
    const double u = uniform01(rng);
    omega.set(e, u < rc_open_probability(g, omega, e, params, probe));
  }
}

void rc_heat_bath_sweep(const LatticeGraph& g, EdgeConfig& omega, const RCParams& params, Rng& rng) {
  thread_local ComponentProbe probe;
  rc_heat_bath_sweep(g, omega, params, rng, probe);
}

// ---------------------------------------------------------------------------
// Swendsen-Wang
// ---------------------------------------------------------------------------

namespace {

int integer_q(double q) {
  const double r = std::round(q);
  if (r < 2.0 || std::abs(q - r) > 1e-12) throw ParamError("q", "Swendsen-Wang needs integer q >= 2");
  if (r > 255.0) throw ParamError("q", "Swendsen-Wang supports q <= 255");
  return static_cast<int>(r);
}

}  // namespace

PottsState potts_initial(const LatticeGraph& g, int q) {
  (void)q;
  return {std::vector<std::uint8_t>(static_cast<std::size_t>(g.vertex_count()), 0),
          EdgeConfig(static_cast<std::size_t>(g.edge_count()), true)};
}

void swendsen_wang_sweep(const LatticeGraph& g, PottsState& state, const RCParams& params, Rng& rng) {
  const int q = integer_q(params.q);
  const bool wired = params.bc == Boundary::Wired;
  auto& col = state.colour;
  if (state.bonds.size() != static_cast<std::size_t>(g.edge_count()))
    state.bonds = EdgeConfig(static_cast<std::size_t>(g.edge_count()));
  if (wired)
    for (int v : g.boundary()) col[static_cast<std::size_t>(v)] = 0;

  thread_local ClusterPartition uf;
  uf.reset(g.vertex_count());
  if (wired) {
    const auto& b = g.boundary();
    for (std::size_t i = 1; i < b.size(); ++i) uf.unite(b[0], b[i]);
  }
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    const double u = uniform01(rng);
    const bool open = col[static_cast<std::size_t>(ed.u)] == col[static_cast<std::size_t>(ed.v)] && u < params.p;
    state.bonds.set(e, open);
    if (open) uf.unite(ed.u, ed.v);
  }

  thread_local std::vector<int> newColour;
  newColour.assign(static_cast<std::size_t>(g.vertex_count()), -1);
  const int boundaryRoot = wired && !g.boundary().empty() ? uf.find(g.boundary().front()) : -1;
  std::uniform_int_distribution<int> pick(0, q - 1);
  for (int v = 0; v < g.vertex_count(); ++v) {
    const int r = uf.find(v);
    auto& c = newColour[static_cast<std::size_t>(r)];
    if (c < 0) c = r == boundaryRoot ? 0 : pick(rng);
    col[static_cast<std::size_t>(v)] = static_cast<std::uint8_t>(c);
  }
}

// ---------------------------------------------------------------------------
// Ising Glauber
// ---------------------------------------------------------------------------

SpinConfig ising_initial(const LatticeGraph& g, const IsingParams& params, bool allPlus) {
  SpinConfig s(static_cast<std::size_t>(g.vertex_count()), allPlus);
  if (params.bc == Boundary::Wired)
    for (int v : g.boundary()) s.set(v, true);
  return s;
}

void ising_glauber_sweep(const LatticeGraph& g, SpinConfig& sigma, const IsingParams& params, Rng& rng) {
  const bool plus = params.bc == Boundary::Wired;
  for (int v = 0; v < g.vertex_count(); ++v) {
    if (plus && g.is_boundary(v)) continue;
    int field = 0;
    for (int e : g.incident(v)) field += sigma.plus(g.other_end(e, v)) ? 1 : -1;
    const double pPlus = 1.0 / (1.0 + std::exp(-2.0 * params.beta * field - 2.0 * params.h));
    sigma.set(v, uniform01(rng) < pPlus);
  }
}

// ---------------------------------------------------------------------------
// Coloured random-cluster model
// ---------------------------------------------------------------------------

double crcm_log_cluster_factor(double alpha, double h, int size) {
  const double a = std::log(alpha) + h * size;
  const double b = std::log1p(-alpha);
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

double crcm_cluster_plus_probability(double alpha, double h, int size) {
  const double logit = std::log(alpha) - std::log1p(-alpha) + h * size;
  return logit >= 0 ? 1.0 / (1.0 + std::exp(-logit)) : std::exp(logit) / (1.0 + std::exp(logit));
}

double crcm_open_probability(const LatticeGraph& g, const EdgeConfig& omega, int e, const CRCMParams& params,
                             ComponentProbe& probe) {
  auto r = probe.sizes_off(g, omega, e);
  if (r.connected) return params.p;
  const double logRatio = std::log(params.p) - std::log1p(-params.p) - std::log(params.q) +
                          crcm_log_cluster_factor(params.alpha, params.h, r.sizeU + r.sizeV) -
                          crcm_log_cluster_factor(params.alpha, params.h, r.sizeU) -
                          crcm_log_cluster_factor(params.alpha, params.h, r.sizeV);
  return logRatio >= 0 ? 1.0 / (1.0 + std::exp(-logRatio)) : std::exp(logRatio) / (1.0 + std::exp(logRatio));
}

void crcm_edge_sweep(const LatticeGraph& g, EdgeConfig& omega, const CRCMParams& params, Rng& rng,
                     ComponentProbe& probe) {
  for (int e = 0; e < g.edge_count(); ++e) {
    const double u = uniform01(rng);
    omega.set(e, u < crcm_open_probability(g, omega, e, params, probe));
  }
}

SpinConfig crcm_sample(const LatticeGraph& g, const CRCMParams& params, Rng& rng, const EdgeConfig& omega) {
  auto part = clusters(g, omega, Boundary::Free);
  const auto V = static_cast<std::size_t>(g.vertex_count());
  std::vector<int> size(V, 0);
  for (int v = 0; v < g.vertex_count(); ++v) ++size[static_cast<std::size_t>(part.find(v))];
  std::vector<int> spin(V, -1);
  SpinConfig sigma(V);
  for (int v = 0; v < g.vertex_count(); ++v) {
    const auto r = static_cast<std::size_t>(part.find(v));
    if (spin[r] < 0) spin[r] = uniform01(rng) < crcm_cluster_plus_probability(params.alpha, params.h, size[r]);
    sigma.set(v, spin[r] == 1);
  }
  return sigma;
}

// ---------------------------------------------------------------------------
// Estimation drivers
// ---------------------------------------------------------------------------

Estimate estimate_event(const LatticeGraph& g, const RCParams& params, const Event& a, const ChainSpec& spec,
                        RCDynamics dynamics) {
  validate(params);
  if (a.on_spins()) throw std::invalid_argument("estimate_event: random-cluster events must be bond events");
  if (dynamics == RCDynamics::Auto) {
    const double r = std::round(params.q);
    dynamics = r >= 2.0 && r <= 255.0 && std::abs(params.q - r) < 1e-12 ? RCDynamics::SwendsenWang
                                                                         : RCDynamics::HeatBath;
  }
  if (dynamics == RCDynamics::SwendsenWang) {
    const int q = integer_q(params.q);
    struct Chain {
      const LatticeGraph& g;
      const RCParams& params;
      const Event& a;
      PottsState state;
      void sweep(Rng& rng) { swendsen_wang_sweep(g, state, params, rng); }
      double observe() const { return a(g, state.bonds) ? 1.0 : 0.0; }
    };
    return run_chains(spec, [&](Rng&) { return Chain{g, params, a, potts_initial(g, q)}; });
  }
  if (params.q < 1.0) throw ParamError("q", "heat-bath sampling needs q >= 1");
  struct Chain {
    const LatticeGraph& g;
    const RCParams& params;
    const Event& a;
    EdgeConfig omega;
    ComponentProbe probe;
    void sweep(Rng& rng) { rc_heat_bath_sweep(g, omega, params, rng, probe); }
    double observe() const { return a(g, omega) ? 1.0 : 0.0; }
  };
  return run_chains(spec, [&](Rng&) {
    return Chain{g, params, a, EdgeConfig(static_cast<std::size_t>(g.edge_count()), true), {}};
  });
}

Estimate estimate_event(const LatticeGraph& g, const IsingParams& params, const Event& a, const ChainSpec& spec,
                        const std::function<void(const SpinConfig&)>& visit) {
  validate(params);
  if (!a.on_spins() && a.kind() != Event::Kind::All)
    throw std::invalid_argument("estimate_event: Ising events must be spin events");
  struct Chain {
    const LatticeGraph& g;
    const IsingParams& params;
    const Event& a;
    const std::function<void(const SpinConfig&)>& visit;
    SpinConfig sigma;
    void sweep(Rng& rng) { ising_glauber_sweep(g, sigma, params, rng); }
    double observe() const {
      if (visit) visit(sigma);
      return a(g, sigma) ? 1.0 : 0.0;
    }
  };
  return run_chains(spec, [&](Rng&) { return Chain{g, params, a, visit, ising_initial(g, params, params.h >= 0)}; });
}

Estimate estimate_event(const LatticeGraph& g, const CRCMParams& params, const Event& a, const ChainSpec& spec,
                        const std::function<void(const SpinConfig&)>& visit) {
  validate(params);
  if (params.q < 1.0) throw ParamError("q", "coloured random-cluster sampling needs q >= 1");
  struct Chain {
    const LatticeGraph& g;
    const CRCMParams& params;
    const Event& a;
    const std::function<void(const SpinConfig&)>& visit;
    EdgeConfig omega;
    ComponentProbe probe;
    Rng* rng = nullptr;
    void sweep(Rng& r) {
      rng = &r;
      crcm_edge_sweep(g, omega, params, r, probe);
    }
    double observe() const {
      if (!a.on_spins() && !visit) return a(g, omega) ? 1.0 : 0.0;
      SpinConfig sigma = crcm_sample(g, params, *rng, omega);
      if (visit) visit(sigma);
      return (a.on_spins() ? a(g, sigma) : a(g, omega)) ? 1.0 : 0.0;
    }
  };
  return run_chains(spec, [&](Rng&) {
    return Chain{g, params, a, visit, EdgeConfig(static_cast<std::size_t>(g.edge_count()), true), {}};
  });
}

}  // namespace rclab
