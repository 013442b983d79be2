#include "rclab/exact.hpp"

#include <algorithm>
#include <limits>

namespace rclab {

namespace {

void require_open_unit(double x, const char* field) {
  if (!(x > 0.0 && x < 1.0)) throw ParamError(field, "must lie in (0,1), got " + std::to_string(x));
}

void check_edge_budget(const LatticeGraph& g, const EnumLimits& limits) {
  if (g.edge_count() > limits.maxEdges || g.edge_count() > 62)
    throw std::length_error("enumeration over " + std::to_string(g.edge_count()) + " edges exceeds budget of " +
                            std::to_string(limits.maxEdges));
}

void check_vertex_budget(const LatticeGraph& g, const EnumLimits& limits) {
  if (g.vertex_count() > limits.maxVertices || g.vertex_count() > 62)
    throw std::length_error("enumeration over " + std::to_string(g.vertex_count()) +
                            " vertices exceeds budget of " + std::to_string(limits.maxVertices));
}

void check_edge_index(const LatticeGraph& g, int s) {
  if (s < 0 || s >= g.edge_count()) throw std::out_of_range("edge index " + std::to_string(s) + " outside graph");
}

}  // namespace

void validate(const RCParams& params) {
  require_open_unit(params.p, "p");
  if (!(params.q > 0.0) || !std::isfinite(params.q)) throw ParamError("q", "must be > 0, got " + std::to_string(params.q));
}

void validate(const IsingParams& params) {
  if (!(params.beta >= 0.0) || !std::isfinite(params.beta))
    throw ParamError("beta", "must be >= 0, got " + std::to_string(params.beta));
  if (!std::isfinite(params.h)) throw ParamError("h", "must be finite");
}

void validate(const CRCMParams& params) {
  require_open_unit(params.p, "p");
  if (!(params.q > 0.0) || !std::isfinite(params.q)) throw ParamError("q", "must be > 0, got " + std::to_string(params.q));
  require_open_unit(params.alpha, "alpha");
  if (!std::isfinite(params.h)) throw ParamError("h", "must be finite");
}

double log_rc_weight(const LatticeGraph& g, const EdgeConfig& omega, const RCParams& params) {
  validate(params);
  const auto open = static_cast<double>(omega.open_count());
  const double closed = static_cast<double>(g.edge_count()) - open;
  const double k = clusters(g, omega, params.bc).cluster_count();
  return open * std::log(params.p) + closed * std::log1p(-params.p) + k * std::log(params.q);
}

double rc_weight(const LatticeGraph& g, const EdgeConfig& omega, const RCParams& params) {
  validate(params);
  const int open = static_cast<int>(omega.open_count());
  const int k = clusters(g, omega, params.bc).cluster_count();
  return std::pow(params.p, open) * std::pow(1.0 - params.p, g.edge_count() - open) * std::pow(params.q, k);
}

RCEnumerator::RCEnumerator(const LatticeGraph& g, const RCParams& params, const EnumLimits& limits)
    : g_(g), params_(params), logSpace_(g.edge_count() > 16) {
  validate(params);
  check_edge_budget(g, limits);
  const int E = g.edge_count();
  const int V = g.vertex_count();
  if (logSpace_) {
    const double lp = std::log(params.p), lq = std::log1p(-params.p), lk = std::log(params.q);
    shift_ = E * std::max(lp, lq) + V * std::max(0.0, lk);
    bernoulli_.resize(static_cast<std::size_t>(E) + 1);
    for (int o = 0; o <= E; ++o) bernoulli_[static_cast<std::size_t>(o)] = o * lp + (E - o) * lq;
    clusterFactor_.resize(static_cast<std::size_t>(V) + 1);
    for (int k = 0; k <= V; ++k) clusterFactor_[static_cast<std::size_t>(k)] = k * lk;
  } else {
    bernoulli_.resize(static_cast<std::size_t>(E) + 1);
    for (int o = 0; o <= E; ++o)
      bernoulli_[static_cast<std::size_t>(o)] = std::pow(params.p, o) * std::pow(1.0 - params.p, E - o);
    clusterFactor_.resize(static_cast<std::size_t>(V) + 1);
    for (int k = 0; k <= V; ++k) clusterFactor_[static_cast<std::size_t>(k)] = std::pow(params.q, k);
  }
}

double RCEnumerator::weight(std::uint64_t mask, ClusterPartition& scratch) const {
  const auto o = static_cast<std::size_t>(__builtin_popcountll(mask));
  const auto k = static_cast<std::size_t>(cluster_count(g_, mask, params_.bc, scratch));
  if (logSpace_) return std::exp(bernoulli_[o] + clusterFactor_[k] - shift_);
  return bernoulli_[o] * clusterFactor_[k];
}

double partition_function(const LatticeGraph& g, const RCParams& params, const EnumLimits& limits) {
  RCEnumerator en(g, params, limits);
  return en.run([](std::uint64_t, const EdgeConfig&, double) {}) * std::exp(en.log_shift());
}

double event_prob(const LatticeGraph& g, const RCParams& params, const Event& a, const EnumLimits& limits) {
  RCEnumerator en(g, params, limits);
  CompensatedSum za, z;
  en.run([&](std::uint64_t, const EdgeConfig& omega, double w) {
    z.add(w);
    if (a(g, omega)) za.add(w);
  });
  return za.value() / z.value();
}

std::vector<double> rc_distribution(const LatticeGraph& g, const RCParams& params, const EnumLimits& limits) {
  RCEnumerator en(g, params, limits);
  std::vector<double> out(std::size_t{1} << g.edge_count());
  const double z = en.run([&](std::uint64_t mask, const EdgeConfig&, double w) { out[mask] = w; });
  for (double& x : out) x /= z;
  return out;
}

EdgeMarginalReport edge_marginal_bounds_audit(const LatticeGraph& g, const RCParams& params,
                                              const EnumLimits& limits) {
  validate(params);
  if (params.q < 1.0) throw ParamError("q", "edge marginal bounds need q >= 1");
  RCEnumerator en(g, params, limits);
  std::vector<CompensatedSum> open(static_cast<std::size_t>(g.edge_count()));
  const double z = en.run([&](std::uint64_t mask, const EdgeConfig&, double w) {
    for (std::uint64_t m = mask; m; m &= m - 1) open[static_cast<std::size_t>(__builtin_ctzll(m))].add(w);
  });
  EdgeMarginalReport r;
  r.lower = params.p / (params.p + params.q * (1.0 - params.p));
  r.upper = params.p;
  r.worstSlack = std::numeric_limits<double>::infinity();
  for (int e = 0; e < g.edge_count(); ++e) {
    const double m = open[static_cast<std::size_t>(e)].value() / z;
    r.marginal.push_back(m);
    const double slack = std::min(m - r.lower, r.upper - m);
    if (slack < r.worstSlack) {
      r.worstSlack = slack;
      r.witnessEdge = e;
    }
  }
  r.pass = r.worstSlack >= -1e-12;
  return r;
}

InfluenceTable influence_table(const LatticeGraph& g, const RCParams& params, const Event& a,
                               const EnumLimits& limits, bool withAbsolute) {
  RCEnumerator en(g, params, limits);
  const auto E = static_cast<std::size_t>(g.edge_count());
  std::vector<std::uint8_t> inA(withAbsolute ? std::size_t{1} << E : 0);
  std::vector<double> weights(withAbsolute ? std::size_t{1} << E : 0);
  CompensatedSum za;
  std::vector<CompensatedSum> open(E), openA(E);
  const double z = en.run([&](std::uint64_t mask, const EdgeConfig& omega, double w) {
    const bool hit = a(g, omega);
    if (withAbsolute) {
      inA[mask] = hit;
      weights[mask] = w;
    }
    if (hit) za.add(w);
    for (std::uint64_t m = mask; m; m &= m - 1) {
      const auto s = static_cast<std::size_t>(__builtin_ctzll(m));
      open[s].add(w);
      if (hit) openA[s].add(w);
    }
  });

  InfluenceTable t;
  t.probA = za.value() / z;
  t.marginal.resize(E);
  t.conditional.resize(E);
  if (withAbsolute) t.absolute.resize(E);
  for (std::size_t s = 0; s < E; ++s) {
    const double z1 = open[s].value();
    const double z0 = z - z1;
    t.marginal[s] = z1 / z;
    if (z1 > 0.0 && z0 > 0.0)
      t.conditional[s] = openA[s].value() / z1 - (za.value() - openA[s].value()) / z0;
    else
      t.conditional[s] = std::numeric_limits<double>::quiet_NaN();
    if (!withAbsolute) continue;

    CompensatedSum pivotal;
    const std::uint64_t bit = std::uint64_t{1} << s;
    for (std::uint64_t mask = 0; mask < inA.size(); ++mask)
      if (inA[mask | bit] != inA[mask & ~bit]) pivotal.add(weights[mask]);
    t.absolute[s] = pivotal.value() / z;
  }
  return t;
}

double conditional_influence(const LatticeGraph& g, const RCParams& params, const Event& a, int s,
                             const EnumLimits& limits) {
  check_edge_index(g, s);
  auto t = influence_table(g, params, a, limits, false);
  const double j = t.conditional[static_cast<std::size_t>(s)];
  if (std::isnan(j)) throw std::domain_error("conditional influence: marginal of element is 0 or 1");
  return j;
}

double absolute_influence(const LatticeGraph& g, const RCParams& params, const Event& a, int s,
                          const EnumLimits& limits) {
  check_edge_index(g, s);
  return influence_table(g, params, a, limits).absolute[static_cast<std::size_t>(s)];
}

DerivativeReport derivative_identity_audit(const LatticeGraph& g, const RCParams& params, const Event& a, double dp,
                                           const EnumLimits& limits) {
  validate(params);
  if (params.q < 1.0) throw ParamError("q", "derivative identity audit needs q >= 1");
  if (!(dp > 0.0) || params.p - dp <= 0.0 || params.p + dp >= 1.0)
    throw ParamError("dp", "p +/- dp must stay inside (0,1)");
  RCParams lo = params, hi = params;
  lo.p -= dp;
  hi.p += dp;
  DerivativeReport r;
  r.lhs = (event_prob(g, hi, a, limits) - event_prob(g, lo, a, limits)) / (2.0 * dp);
  auto t = influence_table(g, params, a, limits, false);
  double sum = 0.0;
  for (std::size_t s = 0; s < t.marginal.size(); ++s)
    if (!std::isnan(t.conditional[s])) sum += t.marginal[s] * (1.0 - t.marginal[s]) * t.conditional[s];
  r.rhs = sum / (params.p * (1.0 - params.p));
  const double diff = std::abs(r.lhs - r.rhs);
  r.relError = r.rhs != 0.0 ? diff / std::abs(r.rhs) : diff;
  return r;
}

namespace {

void check_table(std::span<const double> w, int n, const char* who) {
  if (n < 0 || n > 20) throw std::length_error(std::string(who) + ": at most 20 elements");
  if (w.size() != (std::size_t{1} << n)) throw std::invalid_argument(std::string(who) + ": table size is not 2^n");
  for (std::size_t i = 0; i < w.size(); ++i)
    if (!(w[i] > 0.0)) throw std::domain_error(std::string(who) + ": nonpositive weight at configuration " + std::to_string(i));
}

}  // namespace

LatticeAudit fkg_lattice_audit(std::span<const double> w, int n, double relTol) {
  check_table(w, n, "fkg_lattice_audit");
  LatticeAudit r;
  for (std::uint64_t m = 0; m < w.size(); ++m)
    for (int e = 0; e < n; ++e) {
      const std::uint64_t be = std::uint64_t{1} << e;
      if (m & be) continue;
      for (int f = e + 1; f < n; ++f) {
        const std::uint64_t bf = std::uint64_t{1} << f;
        if (m & bf) continue;
        const double lhs = w[m | be | bf] * w[m];
        const double rhs = w[m | be] * w[m | bf];
        ++r.checked;
        r.worstRatio = std::min(r.worstRatio, lhs / rhs);
        if (r.pass && lhs < rhs * (1.0 - relTol)) {
          r.pass = false;
          r.witness = m;
          r.e = e;
          r.f = f;
          r.lhs = lhs;
          r.rhs = rhs;
        }
      }
    }
  return r;
}

LatticeAudit holley_ordering_audit(std::span<const double> w1, std::span<const double> w2, int n, double relTol) {
  check_table(w1, n, "holley_ordering_audit");
  check_table(w2, n, "holley_ordering_audit");
  LatticeAudit r;
  for (std::uint64_t m = 0; m < w1.size(); ++m)
    for (int e = 0; e < n; ++e) {
      const std::uint64_t be = std::uint64_t{1} << e;
      if (m & be) continue;
      const double lhs = w1[m | be] * w2[m];
      const double rhs = w2[m | be] * w1[m];
      ++r.checked;
      r.worstRatio = std::min(r.worstRatio, rhs / lhs);
      if (r.pass && lhs > rhs * (1.0 + relTol)) {
        r.pass = false;
        r.witness = m;
        r.e = e;
        r.lhs = lhs;
        r.rhs = rhs;
      }
    }
  return r;
}

// ---------------------------------------------------------------------------
// Coloured random-cluster model
// ---------------------------------------------------------------------------

namespace {

// log(alpha e^{h s} + 1 - alpha), stable for large |h s|.
double log_cluster_tilt(double alpha, double h, int size) {
  const double a = std::log(alpha) + h * size;
  const double b = std::log1p(-alpha);
  const double hi = std::max(a, b), lo = std::min(a, b);
  return hi + std::log1p(std::exp(lo - hi));
}

}  // namespace

double crcm_edge_weight(const LatticeGraph& g, const EdgeConfig& omega, const CRCMParams& params) {
  validate(params);
  auto part = clusters(g, omega, Boundary::Free);
  std::vector<int> size(static_cast<std::size_t>(g.vertex_count()), 0);
  for (int v = 0; v < g.vertex_count(); ++v) ++size[static_cast<std::size_t>(part.find(v))];
  double logTilt = 0.0;
  for (int s : size)
    if (s > 0) logTilt += log_cluster_tilt(params.alpha, params.h, s);
  const int open = static_cast<int>(omega.open_count());
  return std::pow(params.p, open) * std::pow(1.0 - params.p, g.edge_count() - open) *
         std::pow(params.q, part.cluster_count()) * std::exp(logTilt);
}

std::vector<double> crcm_edge_distribution(const LatticeGraph& g, const CRCMParams& params,
                                           const EnumLimits& limits) {
  validate(params);
  check_edge_budget(g, limits);
  const auto E = static_cast<std::size_t>(g.edge_count());
  std::vector<double> out(std::size_t{1} << E);
  CompensatedSum z;
  for (std::uint64_t mask = 0; mask < out.size(); ++mask) {
    out[mask] = crcm_edge_weight(g, EdgeConfig::from_mask(mask, E), params);
    z.add(out[mask]);
  }
  const double total = z.value();
  for (double& x : out) x /= total;
  return out;
}

double induced_partition_function(const LatticeGraph& g, std::uint64_t vertexMask, double p, double qPrime) {
  std::vector<int> inner;
  for (int e = 0; e < g.edge_count(); ++e) {
    const Edge& ed = g.edge(e);
    if ((vertexMask >> ed.u & 1u) && (vertexMask >> ed.v & 1u)) inner.push_back(e);
  }
  if (inner.size() > 30) throw std::length_error("induced_partition_function: too many induced edges");
  const int n = __builtin_popcountll(vertexMask);
  const auto m = static_cast<int>(inner.size());
  ClusterPartition uf;
  CompensatedSum z;
  for (std::uint64_t sub = 0; sub < (std::uint64_t{1} << m); ++sub) {
    uf.reset(g.vertex_count());
    int merges = 0;
    for (int i = 0; i < m; ++i)
      if (sub >> i & 1u) merges += uf.unite(g.edge(inner[static_cast<std::size_t>(i)]).u,
                                            g.edge(inner[static_cast<std::size_t>(i)]).v);
    const int open = __builtin_popcountll(sub);
    z.add(std::pow(p, open) * std::pow(1.0 - p, m - open) * std::pow(qPrime, n - merges));
  }
  return z.value();
}

std::vector<double> crcm_spin_distribution(const LatticeGraph& g, const CRCMParams& params,
                                           const EnumLimits& limits) {
  validate(params);
  check_vertex_budget(g, limits);
  check_edge_budget(g, limits);
  const int V = g.vertex_count();
  const std::uint64_t full = (std::uint64_t{1} << V) - 1;

  // Work estimate: every subset enumerates its own induced edges, twice.
  double work = 0.0;
  std::vector<int> inducedEdges(std::size_t{1} << V, 0);
  for (std::uint64_t s = 0; s <= full; ++s) {
    for (const Edge& ed : g.edges())
      if ((s >> ed.u & 1u) && (s >> ed.v & 1u)) ++inducedEdges[s];
  }
  for (std::uint64_t s = 0; s <= full; ++s) work += std::ldexp(1.0, inducedEdges[s]);
  if (work > std::ldexp(1.0, 30)) throw std::length_error("crcm_spin_distribution: enumeration work exceeds budget");

  const double qa = params.q * params.alpha, qb = params.q * (1.0 - params.alpha);
  std::vector<double> za(full + 1), zb(full + 1);
  for (std::uint64_t s = 0; s <= full; ++s) {
    za[s] = induced_partition_function(g, s, params.p, qa);
    zb[s] = induced_partition_function(g, s, params.p, qb);
  }
  std::vector<double> out(full + 1);
  CompensatedSum z;
  const double hShift = params.h > 0.0 ? params.h * V : 0.0;
  for (std::uint64_t a = 0; a <= full; ++a) {
    int cut = 0;
    for (const Edge& ed : g.edges()) cut += ((a >> ed.u) ^ (a >> ed.v)) & 1u;
    const int size = __builtin_popcountll(a);
    out[a] = std::exp(params.h * size - hShift) * std::pow(1.0 - params.p, cut) * za[a] * zb[full & ~a];
    z.add(out[a]);
  }
  const double total = z.value();
  for (double& x : out) x /= total;
  return out;
}

double crcm_spin_prob(const LatticeGraph& g, const CRCMParams& params, const SpinConfig& a, const EnumLimits& limits) {
  if (a.size() != static_cast<std::size_t>(g.vertex_count()))
    throw std::invalid_argument("crcm_spin_prob: spin configuration length does not match vertex count");
  return crcm_spin_distribution(g, params, limits)[a.mask()];
}

LatticeAudit crcm_monotonicity_audit(const LatticeGraph& g, const CRCMParams& params, const EnumLimits& limits) {
  auto pi = crcm_spin_distribution(g, params, limits);
  return fkg_lattice_audit(pi, g.vertex_count());
}

// ---------------------------------------------------------------------------
// Ising
// ---------------------------------------------------------------------------

std::vector<double> ising_distribution(const LatticeGraph& g, const IsingParams& params, const EnumLimits& limits) {
  validate(params);
  check_vertex_budget(g, limits);
  const int V = g.vertex_count();
  std::uint64_t clamp = 0;
  if (params.bc == Boundary::Wired)
    for (int v : g.boundary()) clamp |= std::uint64_t{1} << v;
  const double shift = params.beta * g.edge_count() + std::abs(params.h) * V;
  std::vector<double> out(std::size_t{1} << V, 0.0);
  CompensatedSum z;
  for (std::uint64_t s = 0; s < out.size(); ++s) {
    if ((s & clamp) != clamp) continue;
    int agree = 0;
    for (const Edge& ed : g.edges()) agree += (((s >> ed.u) ^ (s >> ed.v)) & 1u) ? -1 : 1;
    const int mag = 2 * __builtin_popcountll(s) - V;
    out[s] = std::exp(params.beta * agree + params.h * mag - shift);
    z.add(out[s]);
  }
  const double total = z.value();
  for (double& x : out) x /= total;
  return out;
}

double ising_prob(const LatticeGraph& g, const IsingParams& params, const Event& a, const EnumLimits& limits) {
  auto pi = ising_distribution(g, params, limits);
  const auto V = static_cast<std::size_t>(g.vertex_count());
  CompensatedSum p;
  for (std::uint64_t s = 0; s < pi.size(); ++s)
    if (pi[s] > 0.0 && a(g, SpinConfig::from_mask(s, V))) p.add(pi[s]);
  return p.value();
}

OnePointBounds ising_one_point_bounds(double beta, double h, int degree) {
  const double d = degree * beta;
  // e^{2h-d}/(e^{d}+e^{2h-d}) and e^{2h+d}/(e^{-d}+e^{2h+d}) as logistic functions.
  return {1.0 / (1.0 + std::exp(2.0 * d - 2.0 * h)), 1.0 / (1.0 + std::exp(-2.0 * d - 2.0 * h))};
}

OnePointBounds crcm_one_point_bounds(const CRCMParams& params, int maxDegree) {
  const double tilt = params.alpha * std::exp(params.h);
  const double denom = tilt + 1.0 - params.alpha;
  const double closed = std::pow(1.0 - params.p, maxDegree);
  return {tilt / denom * closed, 1.0 - (1.0 - params.alpha) / denom * closed};
}

double total_variation(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("total_variation: size mismatch");
  CompensatedSum s;
  for (std::size_t i = 0; i < a.size(); ++i) s.add(std::abs(a[i] - b[i]));
  return 0.5 * s.value();
}

}  // namespace rclab
