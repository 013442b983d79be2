#include <algorithm>
#include <stdexcept>
#include <string>

#include "rclab/samplers.hpp"

namespace rclab {

namespace {

constexpr int kCouplingMaxEdges = 20;

// P(f open | edges in `revealed` take `values`) under a mask-indexed law.
double conditional_open(const std::vector<double>& dist, int edges, std::uint64_t revealed, std::uint64_t values,
                        int f) {
  const std::uint64_t full = (std::uint64_t{1} << edges) - 1;
  const std::uint64_t freeBits = full & ~revealed;
  const std::uint64_t bit = std::uint64_t{1} << f;
  double total = 0.0, open = 0.0;
  for (std::uint64_t sub = freeBits;; sub = (sub - 1) & freeBits) {
    const double w = dist[values | sub];
    total += w;
    if (sub & bit) open += w;
    if (sub == 0) break;
  }
  return total > 0.0 ? open / total : 0.0;
}

void check_coupling_size(const LatticeGraph& g) {
  if (g.edge_count() > kCouplingMaxEdges)
    throw std::length_error("exact coupling supports at most " + std::to_string(kCouplingMaxEdges) + " edges");
}

// Common-uniform step; the lower law must not exceed the upper one.
std::pair<bool, bool> coupled_bit(double pLower, double pUpper, double u) {
  if (pLower > pUpper + 1e-12)
    throw std::logic_error("coupling: lower conditional exceeds upper conditional (measure not monotone)");
  return {u < pLower, u < pUpper};
}

}  // namespace

// ---------------------------------------------------------------------------

MuECoupler::MuECoupler(const LatticeGraph& g, const RCParams& params, int e, const EnumLimits& limits)
    : g_(g), params_(params), e_(e) {
  validate(params);
  if (params.q < 1.0) throw ParamError("q", "monotone coupling needs q >= 1");
  if (e < 0 || e >= g.edge_count()) throw std::out_of_range("coupling: edge index outside graph");
  check_coupling_size(g);
  dist_ = rc_distribution(g, params, limits);
}

double MuECoupler::open_given(std::uint64_t revealed, std::uint64_t values, int f) const {
  return conditional_open(dist_, g_.edge_count(), revealed, values, f);
}

MuECoupler::Draw MuECoupler::draw(Rng& rng) const {
  const int E = g_.edge_count();
  const bool wired = params_.bc == Boundary::Wired;
  std::uint64_t revealed = std::uint64_t{1} << e_;
  std::uint64_t lower = 0, upper = std::uint64_t{1} << e_;

  std::vector<std::uint8_t> in(static_cast<std::size_t>(g_.vertex_count()), 0);
  std::vector<int> queue;
  bool boundaryAdded = false;
  auto add = [&](int v) {
    if (in[static_cast<std::size_t>(v)]) return;
    in[static_cast<std::size_t>(v)] = 1;
    queue.push_back(v);
    if (wired && g_.is_boundary(v) && !boundaryAdded) {
      boundaryAdded = true;
      for (int b : g_.boundary())
        if (!in[static_cast<std::size_t>(b)]) {
          in[static_cast<std::size_t>(b)] = 1;
          queue.push_back(b);
        }
    }
  };
  add(g_.edge(e_).u);
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int w = queue[head];
    for (int f : g_.incident(w)) {
      const std::uint64_t bit = std::uint64_t{1} << f;
      if (!(revealed & bit)) {
        const double u = uniform01(rng);
        auto [lo, up] = coupled_bit(open_given(revealed, lower, f), open_given(revealed, upper, f), u);
        revealed |= bit;
        if (lo) lower |= bit;
        if (up) upper |= bit;
      }
      if (upper & bit) add(g_.other_end(f, w));
    }
  }
  // Outside the explored cluster both conditional laws coincide.
  for (int f = 0; f < E; ++f) {
    const std::uint64_t bit = std::uint64_t{1} << f;
    if (revealed & bit) continue;
    const bool open = uniform01(rng) < open_given(revealed, upper, f);
    revealed |= bit;
    if (open) {
      lower |= bit;
      upper |= bit;
    }
  }
  const auto Es = static_cast<std::size_t>(E);
  return {EdgeConfig::from_mask(lower, Es), EdgeConfig::from_mask(upper, Es), std::move(in)};
}

// ---------------------------------------------------------------------------

Kappa01Coupler::Kappa01Coupler(const LatticeGraph& g, const CRCMParams& params, int x, const EnumLimits& limits)
    : g_(g), params_(params), x_(x) {
  validate(params);
  if (!params.monotone_regime())
    throw ParamError("alpha", "coupling needs q*alpha >= 1 and q*(1-alpha) >= 1");
  if (x < 0 || x >= g.vertex_count()) throw std::out_of_range("coupling: vertex outside graph");
  check_coupling_size(g);
  if (g.edge_count() > limits.maxEdges) throw std::length_error("coupling: edge budget exceeded");

  const int E = g.edge_count(), V = g.vertex_count();
  const auto n = std::size_t{1} << E;
  std::vector<double> log0(n), log1(n);
  const double lp = std::log(params.p), lq = std::log1p(-params.p), lk = std::log(params.q);
  ClusterPartition uf;
  std::vector<int> size(static_cast<std::size_t>(V));
  for (std::uint64_t m = 0; m < n; ++m) {
    const int k = cluster_count(g, m, Boundary::Free, uf);
    std::fill(size.begin(), size.end(), 0);
    for (int v = 0; v < V; ++v) ++size[static_cast<std::size_t>(uf.find(v))];
    const int rootX = uf.find(x);
    double rest = 0.0;
    for (int v = 0; v < V; ++v)
      if (size[static_cast<std::size_t>(v)] > 0 && v != rootX)
        rest += crcm_log_cluster_factor(params.alpha, params.h, size[static_cast<std::size_t>(v)]);
    const int o = __builtin_popcountll(m);
    const double base = o * lp + (E - o) * lq + k * lk + rest;
    log0[m] = base;
    log1[m] = base + params.h * size[static_cast<std::size_t>(rootX)];
  }
  auto normalize = [](std::vector<double>& lw) {
    const double mx = *std::max_element(lw.begin(), lw.end());
    CompensatedSum z;
    for (double& v : lw) {
      v = std::exp(v - mx);
      z.add(v);
    }
    const double total = z.value();
    for (double& v : lw) v /= total;
  };
  normalize(log0);
  normalize(log1);
  dist0_ = std::move(log0);
  dist1_ = std::move(log1);
}

double Kappa01Coupler::open_given(const std::vector<double>& dist, std::uint64_t revealed, std::uint64_t values,
                                  int f) const {
  return conditional_open(dist, g_.edge_count(), revealed, values, f);
}

Kappa01Coupler::Draw Kappa01Coupler::draw(Rng& rng) const {
  const int E = g_.edge_count(), V = g_.vertex_count();
  const bool oneIsUpper = params_.h >= 0.0;
  const auto& lowDist = oneIsUpper ? dist0_ : dist1_;
  const auto& upDist = oneIsUpper ? dist1_ : dist0_;

  std::uint64_t revealed = 0, lower = 0, upper = 0;
  std::vector<std::uint8_t> in(static_cast<std::size_t>(V), 0);
  std::vector<int> queue{x_};
  in[static_cast<std::size_t>(x_)] = 1;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    const int w = queue[head];
    for (int f : g_.incident(w)) {
      const std::uint64_t bit = std::uint64_t{1} << f;
      if (!(revealed & bit)) {
        const double u = uniform01(rng);
        auto [lo, up] = coupled_bit(open_given(lowDist, revealed, lower, f), open_given(upDist, revealed, upper, f), u);
        revealed |= bit;
        if (lo) lower |= bit;
        if (up) upper |= bit;
      }
      const int z = g_.other_end(f, w);
      if ((upper & bit) && !in[static_cast<std::size_t>(z)]) {
        in[static_cast<std::size_t>(z)] = 1;
        queue.push_back(z);
      }
    }
  }
  for (int f = 0; f < E; ++f) {
    const std::uint64_t bit = std::uint64_t{1} << f;
    if (revealed & bit) continue;
    const bool open = uniform01(rng) < open_given(upDist, revealed, upper, f);
    revealed |= bit;
    if (open) {
      lower |= bit;
      upper |= bit;
    }
  }

  // Shared per-vertex uniforms label every cluster except the one at x.
  std::vector<double> label(static_cast<std::size_t>(V));
  for (double& u : label) u = uniform01(rng);

  Draw d;
  const auto Es = static_cast<std::size_t>(E);
  d.omega0 = EdgeConfig::from_mask(oneIsUpper ? lower : upper, Es);
  d.omega1 = EdgeConfig::from_mask(oneIsUpper ? upper : lower, Es);
  auto assign = [&](const EdgeConfig& omega, int b, SpinConfig& sigma, std::vector<std::uint8_t>& cx) {
    auto part = clusters(g_, omega, Boundary::Free);
    std::vector<int> size(static_cast<std::size_t>(V), 0), first(static_cast<std::size_t>(V), -1);
    for (int v = 0; v < V; ++v) {
      const auto r = static_cast<std::size_t>(part.find(v));
      ++size[r];
      if (first[r] < 0) first[r] = v;
    }
    const int rootX = part.find(x_);
    sigma = SpinConfig(static_cast<std::size_t>(V));
    cx.assign(static_cast<std::size_t>(V), 0);
    for (int v = 0; v < V; ++v) {
      const int r = part.find(v);
      if (r == rootX) {
        sigma.set(v, b == 1);
        cx[static_cast<std::size_t>(v)] = 1;
      } else {
        const auto rs = static_cast<std::size_t>(r);
        sigma.set(v, label[static_cast<std::size_t>(first[rs])] <
                         crcm_cluster_plus_probability(params_.alpha, params_.h, size[rs]));
      }
    }
  };
  assign(d.omega0, 0, d.sigma0, d.cluster0);
  assign(d.omega1, 1, d.sigma1, d.cluster1);
  return d;
}

}  // namespace rclab
