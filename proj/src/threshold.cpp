#include "rclab/threshold.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <thread>

namespace rclab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

void check_unit_open(double p, const char* field) {
  if (!(p > 0.0 && p < 1.0)) throw ParamError(field, "must lie in (0,1)");
}

int origin_of(const LatticeGraph& g) {
  auto v = g.vertex_at({0, 0});
  if (!v) throw std::logic_error("centred box without origin");
  return *v;
}

// Frame-frame edges of Lambda_r dropped: the origin reaches the frame iff it
// does so through the remaining edges.
LatticeGraph reduced_ball(int r) {
  LatticeGraph ball = LatticeGraph::centered_box(r);
  const auto drop = boundary_boundary_edges(ball);
  std::vector<std::uint8_t> dropped(static_cast<std::size_t>(ball.edge_count()), 0);
  for (int e : drop) dropped[static_cast<std::size_t>(e)] = 1;
  return ball.filter_edges([&](int e) { return !dropped[static_cast<std::size_t>(e)]; });
}

Estimate exact_estimate(double value) {
  Estimate est;
  est.mean = value;
  est.stdError = 0.0;
  return est;
}

struct Influences {
  double probA = 0.0;
  std::vector<double> marginal;
  std::vector<double> J;
};

Influences exact_influences(const LatticeGraph& g, const RCParams& params, const Event& a, const EnumLimits& limits) {
  auto t = influence_table(g, params, a, limits, false);
  return {t.probA, std::move(t.marginal), std::move(t.conditional)};
}

// Heat-bath chain with one edge held fixed.
struct ClampedChain {
  const LatticeGraph* g;
  RCParams params;
  const Event* a;
  int clamp;
  EdgeConfig omega;
  ComponentProbe probe;

  void sweep(Rng& rng) {
    for (int f = 0; f < g->edge_count(); ++f) {
      const double u = uniform01(rng);
      if (f == clamp) continue;
      omega.set(f, u < rc_open_probability(*g, omega, f, params, probe));
    }
  }
  double observe() { return (*a)(*g, omega) ? 1.0 : 0.0; }
};

std::pair<double, double> mc_influence(const LatticeGraph& g, const RCParams& params, const Event& a, int s,
                                       const ChainSpec& spec) {
  Estimate side[2];
  for (int b = 0; b < 2; ++b) {
    ChainSpec cs = spec;
    cs.seed = derive_seed(spec.seed, static_cast<std::uint64_t>(2 * s + b));
    side[b] = run_chains(cs, [&](Rng&) {
      ClampedChain c{&g, params, &a, s, EdgeConfig(static_cast<std::size_t>(g.edge_count()), b == 1), {}};
      return c;
    });
  }
  return {side[1].mean - side[0].mean, std::hypot(side[1].stdError, side[0].stdError)};
}

}  // namespace

double self_dual_point(double q) {
  if (!(q > 0.0)) throw ParamError("q", "must be positive");
  return std::sqrt(q) / (1.0 + std::sqrt(q));
}

double dual_parameter(double p, double q) {
  check_unit_open(p, "p");
  if (!(q > 0.0)) throw ParamError("q", "must be positive");
  return q * (1.0 - p) / (p + q * (1.0 - p));
}

RhoNu rho_nu(double eta, double p, double q, double c) {
  if (!(eta > 0.0 && eta <= 1.0)) throw ParamError("eta", "must lie in (0,1]");
  check_unit_open(p, "p");
  if (!(q >= 1.0)) throw ParamError("q", "must be at least 1");
  if (!(c > 0.0)) throw ParamError("c", "must be positive");
  const double pd = dual_parameter(p, q);
  return {std::pow(2.0 * q * eta / p, c / q), std::pow(2.0 * q * eta / pd, c / q)};
}

double ising_xi(double beta, double h) {
  if (!(beta >= 0.0)) throw ParamError("beta", "must be non-negative");
  const double t = 2.0 * h + 8.0 * beta;
  // e^t/(1+e^t)^2 = 1/(e^{-t/2}+e^{t/2})^2
  const double d = 2.0 * std::cosh(0.5 * t);
  return 1.0 / (d * d);
}

EtaEstimate estimate_eta(double q, int k, const ChainSpec& spec, std::optional<int> n, bool preferExact) {
  if (!(q >= 1.0)) throw ParamError("q", "must be at least 1");
  if (k < 0) throw ParamError("k", "must be non-negative");
  EtaEstimate out;
  out.radius = k / 2;
  out.n = n.value_or(std::max(2 * k, 1));
  if (out.n < k) throw ParamError("n", "volume Lambda_n must satisfy n >= k");
  if (out.radius == 0) {
    out.est = exact_estimate(1.0);
    out.exact = true;
    return out;
  }
  const RCParams params{self_dual_point(q), q, Boundary::Free};
  if (preferExact && q == 1.0) {
    // Product measure: only edges of Lambda_r off the frame matter.
    LatticeGraph ball = reduced_ball(out.radius);
    if (ball.edge_count() <= EnumLimits{}.maxEdges) {
      const double v = event_prob(ball, params, Event::radius(origin_of(ball), out.radius));
      out.est = exact_estimate(v);
      out.exact = true;
      return out;
    }
  }
  LatticeGraph g = LatticeGraph::centered_box(out.n);
  out.est = estimate_event(g, params, Event::radius(origin_of(g), out.radius), spec);
  return out;
}

EtaBound eta_upper_bound(double q, int k, const ChainSpec& spec) {
  if (!(q >= 1.0)) throw ParamError("q", "must be at least 1");
  if (k < 0) throw ParamError("k", "must be non-negative");
  EtaBound out;
  out.radius = k / 2;
  if (out.radius == 0) {
    out.est = exact_estimate(1.0);
    return out;
  }
  const RCParams params{self_dual_point(q), q, Boundary::Wired};
  LatticeGraph ball = reduced_ball(out.radius);
  const Event reach = Event::radius(origin_of(ball), out.radius);
  if (ball.edge_count() <= EnumLimits{}.maxEdges) {
    out.value = event_prob(ball, params, reach);
    out.est = exact_estimate(out.value);
    return out;
  }
  out.exact = false;
  out.est = estimate_event(ball, params, reach, spec);
  out.value = std::min(1.0, out.est.mean + 4.0 * out.est.stdError);
  if (std::isnan(out.value)) out.value = 1.0;
  return out;
}

BoundReport duality_audit(int k, int m, double p, double q, bool exact, const ChainSpec& spec) {
  if (k < 1) throw ParamError("k", "must be at least 1");
  if (m < 0) throw ParamError("m", "must be non-negative");
  check_unit_open(p, "p");
  if (!(q > 0.0)) throw ParamError("q", "must be positive");
  const LatticeGraph primal = LatticeGraph::box(k, m);
  const DualBox dual = dual_box(primal);
  const LatticeGraph dualGraph = dual.graph.filter_edges(
      [&](int e) { return dual.dualToPrimal[static_cast<std::size_t>(e)] >= 0; });
  const double pd = dual_parameter(p, q);
  const RCParams primalParams{p, q, Boundary::Free};
  const RCParams dualParams{pd, q, Boundary::Wired};
  const Event lr = Event::crossing(Direction::LeftRight);
  const Event tb = Event::crossing(Direction::TopBottom, PathMode::Open, dual.crossingWindow);

  BoundReport r;
  r.name = "duality";
  r.exact = exact;
  r.inputs = {{"k", k}, {"m", m}, {"p", p}, {"q", q}, {"p_dual", pd}};
  if (exact) {
    const EnumLimits limits;
    if (primal.edge_count() > limits.maxEdges || dualGraph.edge_count() > limits.maxEdges)
      throw std::length_error("duality audit: box exceeds the enumeration budget");
    r.lhs = event_prob(primal, primalParams, lr);
    r.rhs = 1.0 - event_prob(dualGraph, dualParams, tb);
    r.tolerance = 1e-12;
    r.slack = r.rhs - r.lhs;
    r.pass = std::abs(r.slack) <= r.tolerance;
    return r;
  }
  if (q < 1.0) throw ParamError("q", "Monte Carlo duality audit needs q >= 1");
  ChainSpec s0 = spec, s1 = spec;
  s0.seed = derive_seed(spec.seed, 0);
  s1.seed = derive_seed(spec.seed, 1);
  const Estimate a = estimate_event(primal, primalParams, lr, s0);
  const Estimate b = estimate_event(dualGraph, dualParams, tb, s1);
  r.lhs = a.mean;
  r.rhs = 1.0 - b.mean;
  r.slack = r.rhs - r.lhs;
  r.tolerance = 3.0 * std::hypot(a.stdError, b.stdError);
  r.inputs.push_back({"lhs_stderr", a.stdError});
  r.inputs.push_back({"rhs_stderr", b.stdError});
  r.pass = std::abs(r.slack) <= r.tolerance;
  if (a.degenerate() || b.degenerate()) r.notes.push_back("too few batches for an error bar");
  return r;
}

double Lemma1Report::influence(Point a, Point b) const {
  for (const auto& e : edges)
    if ((e.a == a && e.b == b) || (e.a == b && e.b == a)) return e.J;
  return 0.0;
}

Lemma1Report audit_lemma1(const Lemma1Config& cfg) {
  if (cfg.k < 1) throw ParamError("k", "must be at least 1");
  if (cfg.m < 0) throw ParamError("m", "must be non-negative");
  if (cfg.n < 1) throw ParamError("n", "must be at least 1");
  check_unit_open(cfg.p, "p");
  if (!(cfg.q >= 1.0)) throw ParamError("q", "must be at least 1");
  const Rect window{cfg.offset.x, cfg.offset.y, cfg.offset.x + cfg.k, cfg.offset.y + cfg.m};
  const Rect ball{-cfg.n, -cfg.n, cfg.n, cfg.n};
  if (!ball.contains({window.x0, window.y0}) || !ball.contains({window.x1, window.y1}))
    throw ParamError("offset", "box must lie inside Lambda_n");

  Lemma1Report rep;
  rep.config = cfg;
  const double psd = self_dual_point(cfg.q);
  rep.bc = cfg.bc.value_or(cfg.p <= psd ? Boundary::Free : Boundary::Wired);
  const bool wired = rep.bc == Boundary::Wired;
  if (!wired && cfg.p > psd) rep.notes.push_back("free form applied above the self-dual point");
  if (wired && cfg.p < psd) rep.notes.push_back("wired form applied below the self-dual point");
  if (cfg.k >= cfg.n || cfg.m >= cfg.n) rep.notes.push_back("box not strictly smaller than Lambda_n");

  rep.etaIndex = wired ? cfg.m + 1 : cfg.k;
  ChainSpec etaSpec = cfg.spec;
  etaSpec.seed = derive_seed(cfg.spec.seed, 0xe7a);
  const EtaBound eta = eta_upper_bound(cfg.q, rep.etaIndex, etaSpec);
  rep.eta = eta.value;
  rep.etaExact = eta.exact;
  rep.bound = wired ? cfg.q / dual_parameter(cfg.p, cfg.q) * rep.eta : cfg.q / cfg.p * rep.eta;

  const LatticeGraph full = LatticeGraph::centered_box(cfg.n);
  // Under wired bc a frame-frame edge outside the window is independent of
  // everything else, so its influence is exactly 0 and it can be dropped.
  std::vector<std::uint8_t> keep(static_cast<std::size_t>(full.edge_count()), 1);
  if (wired) {
    for (int e : boundary_boundary_edges(full)) {
      const Edge& ed = full.edge(e);
      if (!(window.contains(full.point(ed.u)) && window.contains(full.point(ed.v))))
        keep[static_cast<std::size_t>(e)] = 0;
    }
  }
  std::vector<int> kept;
  for (int e = 0; e < full.edge_count(); ++e)
    if (keep[static_cast<std::size_t>(e)]) kept.push_back(e);
  const LatticeGraph g = full.with_edge_subset(kept);
  const RCParams params{cfg.p, cfg.q, rep.bc};
  const Event a = Event::crossing(Direction::LeftRight, PathMode::Open, window);

  const EnumLimits limits;
  std::vector<double> J(kept.size(), 0.0), se(kept.size(), 0.0);
  if (cfg.exact) {
    if (g.edge_count() > limits.maxEdges)
      throw std::length_error("lemma audit: " + std::to_string(g.edge_count()) +
                              " relevant edges exceed the enumeration budget");
    auto inf = exact_influences(g, params, a, limits);
    for (std::size_t i = 0; i < kept.size(); ++i) J[i] = std::isnan(inf.J[i]) ? 0.0 : inf.J[i];
  } else {
    rep.exact = false;
    parallel_for(kept.size(), [&](std::size_t i) {
      auto [j, s] = mc_influence(g, params, a, static_cast<int>(i), cfg.spec);
      J[i] = j;
      se[i] = s;
    }, 1);
  }

  const double tol = 1e-12;
  rep.minSlack = std::numeric_limits<double>::infinity();
  std::size_t ki = 0;
  for (int e = 0; e < full.edge_count(); ++e) {
    EdgeInfluenceCheck c;
    c.edge = e;
    c.a = full.point(full.edge(e).u);
    c.b = full.point(full.edge(e).v);
    if (ki < kept.size() && kept[ki] == e) {
      c.J = J[ki];
      c.stdError = se[ki];
      ++ki;
    }
    c.slack = rep.bound - c.J;
    const double allowance = rep.exact ? tol : 4.0 * c.stdError;
    if (!(c.slack >= -allowance)) rep.pass = false;
    rep.maxJ = std::max(rep.maxJ, c.J);
    if (c.slack < rep.minSlack) {
      rep.minSlack = c.slack;
      rep.witnessEdge = e;
    }
    rep.edges.push_back(c);
  }
  if (!eta.exact) rep.notes.push_back("eta from Monte Carlo plus 4 standard errors");
  return rep;
}

// ---------------------------------------------------------------------------

std::uint64_t scan_job_seed(std::uint64_t seed, std::size_t index) { return derive_seed(seed, index); }

LogisticFit fit_logistic(const std::vector<ScanPoint>& points) {
  LogisticFit fit;
  if (!points.empty()) {
    fit.k = points.front().k;
    fit.m = points.front().m;
  }
  double S = 0, Sx = 0, Sy = 0, Sxx = 0, Sxy = 0;
  struct Obs {
    double x, y, w;
  };
  std::vector<Obs> used;
  for (const auto& pt : points) {
    const double mu = pt.est.mean, s = pt.est.stdError;
    if (!(mu > 0.0 && mu < 1.0) || !(s > 0.0) || !std::isfinite(s)) continue;
    const double w = std::pow(mu * (1.0 - mu) / s, 2);
    const double y = std::log(mu / (1.0 - mu));
    used.push_back({pt.control, y, w});
    S += w;
    Sx += w * pt.control;
    Sy += w * y;
    Sxx += w * pt.control * pt.control;
    Sxy += w * pt.control * y;
  }
  fit.pointsUsed = static_cast<int>(used.size());
  const double det = S * Sxx - Sx * Sx;
  if (fit.pointsUsed < 3 || !(det > 0.0)) {
    fit.midpoint = fit.slope = fit.slopeStdError = fit.midpointStdError = kNaN;
    fit.note = "fewer than 3 usable points strictly inside (0,1)";
    return fit;
  }
  const double b = (S * Sxy - Sx * Sy) / det;
  const double a = (Sxx * Sy - Sx * Sxy) / det;
  double chi2 = 0.0;
  for (const auto& o : used) chi2 += o.w * std::pow(o.y - a - b * o.x, 2);
  fit.reducedChi2 = chi2 / (fit.pointsUsed - 2);
  const double inflate = std::max(1.0, fit.reducedChi2);
  const double varA = Sxx / det * inflate, varB = S / det * inflate, covAB = -Sx / det * inflate;
  fit.slope = b;
  fit.slopeStdError = std::sqrt(varB);
  if (b != 0.0) {
    fit.midpoint = -a / b;
    const double x0 = fit.midpoint;
    fit.midpointStdError = std::sqrt(std::max(0.0, varA + 2.0 * x0 * covAB + x0 * x0 * varB)) / std::abs(b);
    fit.converged = std::isfinite(fit.slope) && std::isfinite(fit.midpoint);
  } else {
    fit.midpoint = fit.midpointStdError = kNaN;
    fit.note = "zero slope";
  }
  if (!fit.converged && fit.note.empty()) fit.note = "non-finite fit";
  return fit;
}

void validate(const ScanConfig& cfg) {
  if (cfg.grid.empty()) throw ParamError("grid", "must not be empty");
  for (std::size_t i = 1; i < cfg.grid.size(); ++i)
    if (!(cfg.grid[i] > cfg.grid[i - 1])) throw ParamError("grid", "must be strictly increasing");
  if (cfg.boxes.empty()) throw ParamError("boxes", "must not be empty");
  for (auto [k, m] : cfg.boxes) {
    if (k < 1) throw ParamError("k", "must be at least 1");
    if (m < 0) throw ParamError("m", "must be non-negative");
  }
  validate(cfg.spec);
  for (double x : cfg.grid) {
    switch (cfg.model) {
      case ScanModel::RC: {
        RCParams p = cfg.rc;
        p.p = x;
        validate(p);
        if (p.q < 1.0) throw ParamError("q", "scans need q >= 1");
        break;
      }
      case ScanModel::Ising: {
        IsingParams p = cfg.ising;
        p.h = x;
        validate(p);
        break;
      }
      case ScanModel::CRCM: {
        CRCMParams p = cfg.crcm;
        p.h = x;
        validate(p);
        if (p.q < 1.0) throw ParamError("q", "scans need q >= 1");
        break;
      }
    }
  }
}

ThresholdScan threshold_scan(const ScanConfig& cfg) {
  validate(cfg);
  ThresholdScan scan;
  scan.config = cfg;
  const std::size_t G = cfg.grid.size(), B = cfg.boxes.size();
  scan.points.resize(G * B);
  std::atomic<long long> checks{0}, violations{0};

  auto complementarity = [&](const LatticeGraph& g, const SpinConfig& s) {
    const bool plusLR = has_crossing(g, s, Direction::LeftRight, PathMode::Plus);
    const bool minusTB = has_crossing(g, s, Direction::TopBottom, PathMode::MinusStar);
    checks.fetch_add(1, std::memory_order_relaxed);
    if (plusLR == minusTB) violations.fetch_add(1, std::memory_order_relaxed);
  };

  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const unsigned outer = std::max(1u, hw / static_cast<unsigned>(cfg.spec.chains));
  parallel_for(G * B, [&](std::size_t job) {
    const auto [k, m] = cfg.boxes[job / G];
    const double x = cfg.grid[job % G];
    const LatticeGraph g = LatticeGraph::box(k, m);
    ChainSpec spec = cfg.spec;
    spec.seed = scan_job_seed(cfg.spec.seed, job);
    ScanPoint pt{x, k, m, {}};
    switch (cfg.model) {
      case ScanModel::RC: {
        RCParams p = cfg.rc;
        p.p = x;
        pt.est = estimate_event(g, p, Event::crossing(Direction::LeftRight), spec, cfg.dynamics);
        break;
      }
      case ScanModel::Ising: {
        IsingParams p = cfg.ising;
        p.h = x;
        pt.est = estimate_event(g, p, Event::crossing(Direction::LeftRight, PathMode::Plus), spec,
                                [&](const SpinConfig& s) { complementarity(g, s); });
        break;
      }
      case ScanModel::CRCM: {
        CRCMParams p = cfg.crcm;
        p.h = x;
        pt.est = estimate_event(g, p, Event::crossing(Direction::LeftRight, PathMode::Plus), spec,
                                [&](const SpinConfig& s) { complementarity(g, s); });
        break;
      }
    }
    pt.est.seed = spec.seed;
    scan.points[job] = pt;
  }, outer);

  scan.complementarityChecks = checks.load();
  scan.complementarityViolations = violations.load();
  for (std::size_t b = 0; b < B; ++b) {
    std::vector<ScanPoint> row(scan.points.begin() + static_cast<std::ptrdiff_t>(b * G),
                               scan.points.begin() + static_cast<std::ptrdiff_t>((b + 1) * G));
    for (std::size_t i = 1; i < G; ++i) {
      const Estimate& lo = row[i - 1].est;
      const Estimate& hi = row[i].est;
      if (lo.degenerate() || hi.degenerate()) continue;
      if (lo.mean - hi.mean > 3.0 * std::hypot(lo.stdError, hi.stdError)) ++scan.monotonicityViolations;
    }
    scan.fits.push_back(fit_logistic(row));
  }
  if (cfg.model == ScanModel::CRCM)
    scan.assumptions.push_back("phi_h assumed subcritical on the scanned h-interval; not verified numerically");
  if (cfg.model == ScanModel::Ising && cfg.ising.beta > 0.0)
    scan.assumptions.push_back("beta below the critical value assumed for sharpness in h");
  return scan;
}

// ---------------------------------------------------------------------------

CorollaryReport corollary_audit(const LatticeGraph& g, const RCParams& params, const Event& a, double p1, double p2,
                                double c, int gridPoints, const EnumLimits& limits) {
  check_unit_open(p1, "p1");
  check_unit_open(p2, "p2");
  if (p2 < p1) throw ParamError("p2", "must be at least p1");
  if (!(params.q >= 1.0)) throw ParamError("q", "must be at least 1");
  if (!(c > 0.0)) throw ParamError("c", "must be positive");
  if (gridPoints < 2) throw ParamError("grid", "needs at least 2 points");
  if (a.on_spins() || !a.increasing()) throw std::invalid_argument("corollary audit: needs an increasing bond event");

  CorollaryReport rep;
  const int n = p1 == p2 ? 1 : gridPoints;
  for (int i = 0; i < n; ++i) {
    const double p = n == 1 ? p1 : p1 + (p2 - p1) * i / (n - 1);
    RCParams at = params;
    at.p = p;
    const auto inf = exact_influences(g, at, a, limits);
    double xi = std::numeric_limits<double>::infinity(), supJ = 0.0;
    for (std::size_t s = 0; s < inf.marginal.size(); ++s) {
      xi = std::min(xi, inf.marginal[s] * (1.0 - inf.marginal[s]));
      if (!std::isnan(inf.J[s])) supJ = std::max(supJ, inf.J[s]);
    }
    if (inf.marginal.empty()) xi = 0.0;
    rep.grid.push_back(p);
    rep.Bs.push_back(c * xi / (p * (1.0 - p)));
    rep.kappas.push_back(2.0 * supJ);
  }
  rep.B = *std::min_element(rep.Bs.begin(), rep.Bs.end());
  rep.kappa = *std::max_element(rep.kappas.begin(), rep.kappas.end());
  auto jumps = [](const std::vector<double>& v) {
    for (std::size_t i = 1; i < v.size(); ++i) {
      const double scale = std::max(std::abs(v[i]), std::abs(v[i - 1]));
      if (scale > 0.0 && std::abs(v[i] - v[i - 1]) > 0.1 * scale) return true;
    }
    return false;
  };
  rep.gridTooCoarse = jumps(rep.Bs) || jumps(rep.kappas);

  RCParams lo = params, hi = params;
  lo.p = p1;
  hi.p = p2;
  BoundReport& r = rep.bound;
  r.name = "corollary";
  r.lhs = event_prob(g, lo, a, limits) * (1.0 - event_prob(g, hi, a, limits));
  r.rhs = std::pow(rep.kappa, rep.B * (p2 - p1));
  r.slack = r.rhs - r.lhs;
  r.tolerance = 1e-12;
  r.pass = r.slack >= -r.tolerance;
  r.inputs = {{"p1", p1}, {"p2", p2}, {"q", params.q}, {"c", c}, {"B", rep.B}, {"kappa", rep.kappa},
              {"grid_points", n}};
  r.notes.push_back("conditional on the supplied constant c");
  if (rep.gridTooCoarse) r.notes.push_back("grid too coarse: B or kappa changes by more than 10% between points");
  return rep;
}

BoundReport theorem_bound_audit(int k, double p, double q, double c, const ChainSpec& spec) {
  if (k < 1) throw ParamError("k", "must be at least 1");
  check_unit_open(p, "p");
  if (!(q >= 1.0)) throw ParamError("q", "must be at least 1");
  if (!(c > 0.0)) throw ParamError("c", "must be positive");
  const auto [bk, bm] = square_box(k);
  const LatticeGraph g = LatticeGraph::box(bk, bm);
  const double psd = self_dual_point(q);
  const EtaBound eta = eta_upper_bound(q, k, spec);
  const RhoNu rn = rho_nu(eta.value, p, q, c);
  const bool below = p < psd;
  // Wired finite volume dominates the infinite-volume measure and free is
  // dominated by it, so each side is checked against its conservative proxy.
  const RCParams params{p, q, below ? Boundary::Wired : Boundary::Free};
  const Event h = Event::crossing(Direction::LeftRight);

  BoundReport r;
  r.name = "theorem";
  r.exact = g.edge_count() <= EnumLimits{}.maxEdges;
  double prob = 0.0, se = 0.0;
  if (r.exact) {
    prob = event_prob(g, params, h);
  } else {
    ChainSpec s = spec;
    s.seed = derive_seed(spec.seed, 1);
    const Estimate est = estimate_event(g, params, h, s);
    prob = est.mean;
    se = est.stdError;
  }
  if (below) {
    r.lhs = prob;
    r.rhs = 2.0 * std::pow(rn.rho, psd - p);
  } else {
    r.lhs = 1.0 - 2.0 * std::pow(rn.nu, p - psd);
    r.rhs = prob;
  }
  r.slack = r.rhs - r.lhs;
  r.tolerance = r.exact ? 1e-12 : 4.0 * se;
  r.pass = r.slack >= -r.tolerance;
  r.inputs = {{"k", k}, {"p", p}, {"q", q}, {"c", c}, {"eta", eta.value}, {"rho", rn.rho}, {"nu", rn.nu}};
  r.notes.push_back("conditional on the supplied constant c");
  r.notes.push_back(eta.exact ? "eta is the wired Lambda_r upper bound" : "eta from Monte Carlo plus 4 standard errors");
  return r;
}

}  // namespace rclab
