#include <doctest.h>

#include <cmath>
#include <functional>
#include <vector>

#include "rclab/threshold.hpp"
#include "support/stats.hpp"

using namespace rclab;
using rclab::testing::z_score;

namespace {

// Left-right open crossing inside `w` by plain flood fill over masks.
bool naive_lr(const LatticeGraph& g, std::uint64_t mask, Rect w) {
  std::vector<char> seen(static_cast<std::size_t>(g.vertex_count()), 0);
  std::vector<int> stack;
  for (int v = 0; v < g.vertex_count(); ++v)
    if (g.point(v).x == w.x0 && w.contains(g.point(v))) {
      seen[static_cast<std::size_t>(v)] = 1;
      stack.push_back(v);
    }
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    if (g.point(v).x == w.x1) return true;
    for (int e = 0; e < g.edge_count(); ++e) {
      if (!(mask >> e & 1u)) continue;
      const Edge& ed = g.edge(e);
      int o = -1;
      if (ed.u == v) o = ed.v;
      if (ed.v == v) o = ed.u;
      if (o < 0 || seen[static_cast<std::size_t>(o)] || !w.contains(g.point(o))) continue;
      seen[static_cast<std::size_t>(o)] = 1;
      stack.push_back(o);
    }
  }
  return false;
}

// Product-measure J(s) by enumeration.
std::vector<double> naive_bernoulli_J(const LatticeGraph& g, double p, Rect w) {
  const int E = g.edge_count();
  std::vector<double> open(static_cast<std::size_t>(E)), openA(static_cast<std::size_t>(E));
  double zA = 0.0;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << E); ++m) {
    const int o = __builtin_popcountll(m);
    const double pr = std::pow(p, o) * std::pow(1 - p, E - o);
    const bool a = naive_lr(g, m, w);
    if (a) zA += pr;
    for (int s = 0; s < E; ++s)
      if (m >> s & 1u) {
        open[static_cast<std::size_t>(s)] += pr;
        if (a) openA[static_cast<std::size_t>(s)] += pr;
      }
  }
  std::vector<double> J(static_cast<std::size_t>(E));
  for (std::size_t s = 0; s < J.size(); ++s)
    J[s] = openA[s] / open[s] - (zA - openA[s]) / (1 - open[s]);
  return J;
}

ScanPoint point(double x, double mean, double se) {
  ScanPoint pt;
  pt.control = x;
  pt.k = 4;
  pt.m = 3;
  pt.est.mean = mean;
  pt.est.stdError = se;
  return pt;
}

}  // namespace

TEST_CASE("self-dual point and dual parameter") {
  CHECK(self_dual_point(1) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(self_dual_point(2) == doctest::Approx(0.585786437626905).epsilon(1e-13));
  CHECK(self_dual_point(4) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(dual_parameter(0.5, 2) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  for (double p : {0.1, 0.37, 0.8}) CHECK(dual_parameter(p, 1) == doctest::Approx(1 - p).epsilon(1e-14));
  for (double q : {0.5, 1.0, 2.0, 3.5, 10.0}) {
    const double psd = self_dual_point(q);
    CHECK(dual_parameter(psd, q) == doctest::Approx(psd).epsilon(1e-14));
    for (int i = 1; i < 40; ++i) {
      const double p = i / 40.0;
      const double pd = dual_parameter(p, q);
      CHECK((p - psd) * (pd - psd) <= 1e-15);
      if (std::abs(p - psd) > 1e-9) CHECK((p - psd) * (pd - psd) < 0);
      CHECK(dual_parameter(pd, q) == doctest::Approx(p).epsilon(1e-12));
    }
  }
  CHECK_THROWS_AS(dual_parameter(1.0, 2), ParamError);
  CHECK_THROWS_AS(self_dual_point(0), ParamError);
}

TEST_CASE("rho, nu and xi") {
  auto rn = rho_nu(0.1, 0.5, 1, 1);
  CHECK(rn.rho == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(rn.nu == doctest::Approx(0.4).epsilon(1e-14));
  rn = rho_nu(0.3, 0.4, 2, 1e-300);
  CHECK(rn.rho == doctest::Approx(1.0));
  CHECK(rn.nu == doctest::Approx(1.0));
  CHECK(rho_nu(1e-40, 0.5, 2, 0.5).rho < 1e-9);
  // nu uses p_d
  rn = rho_nu(0.2, 0.5, 2, 0.7);
  CHECK(rn.nu == doctest::Approx(std::pow(2 * 2 * 0.2 / (2.0 / 3.0), 0.35)).epsilon(1e-13));
  CHECK_THROWS_AS(rho_nu(0.0, 0.5, 1, 1), ParamError);
  CHECK_THROWS_AS(rho_nu(0.5, 0.5, 0.5, 1), ParamError);

  CHECK(ising_xi(0, 0) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK(ising_xi(0.25, 0) == doctest::Approx(std::exp(2.0) / std::pow(1 + std::exp(2.0), 2)).epsilon(1e-14));
  CHECK(ising_xi(0.25, 0) == doctest::Approx(0.104994).epsilon(1e-5));
  for (double h = 0; h < 3; h += 0.1) CHECK(ising_xi(0.1, h + 0.1) < ising_xi(0.1, h));
  CHECK(ising_xi(0, 400) >= 0.0);
  CHECK_THROWS_AS(ising_xi(-1, 0), ParamError);
}

TEST_CASE("eta estimates") {
  const ChainSpec spec{5, 100, 4000, 1, 4};
  for (int k : {0, 1}) {
    auto e = estimate_eta(2, k, spec);
    CHECK(e.exact);
    CHECK(e.est.mean == 1.0);
    CHECK(eta_upper_bound(2, k).value == 1.0);
  }
  SUBCASE("q=1 is exact and matches hand values and sampling") {
    auto e2 = estimate_eta(1, 2, spec);
    REQUIRE(e2.exact);
    CHECK(e2.est.mean == doctest::Approx(15.0 / 16.0).epsilon(1e-14));
    auto e4 = estimate_eta(1, 4, spec);
    REQUIRE(e4.exact);
    auto mc = estimate_eta(1, 4, spec, 4, false);
    CHECK_FALSE(mc.exact);
    CHECK(z_score(mc.est.mean, mc.est.stdError, e4.est.mean) < 4.0);
    CHECK(e4.est.mean < e2.est.mean);
  }
  SUBCASE("wired Lambda_1 bound has a closed form") {
    for (double q : {1.0, 1.5, 2.0, 4.0}) {
      const double p = self_dual_point(q);
      const double closed = std::pow(1 - p, 4);
      const double expect = (1 - closed) / ((1 - closed) + q * closed);
      auto b = eta_upper_bound(q, 3);
      CHECK(b.exact);
      CHECK(b.radius == 1);
      CHECK(b.value == doctest::Approx(expect).epsilon(1e-13));
    }
  }
  SUBCASE("upper bound dominates the free estimate and decreases") {
    auto up2 = eta_upper_bound(2, 2);
    auto up4 = eta_upper_bound(2, 4);
    CHECK(up4.exact);
    CHECK(up4.value < up2.value);
    std::vector<Estimate> es;
    for (int k : {2, 4, 6}) {
      auto e = estimate_eta(2, k, spec);
      CHECK_FALSE(e.exact);
      es.push_back(e.est);
    }
    CHECK(es[0].mean <= up2.value + 3 * es[0].stdError);
    CHECK(es[1].mean <= up4.value + 3 * es[1].stdError);
    for (std::size_t i = 1; i < es.size(); ++i)
      CHECK(es[i].mean <= es[i - 1].mean + 3 * std::hypot(es[i].stdError, es[i - 1].stdError));
  }
  try {
    estimate_eta(2, 4, spec, 3);
    FAIL("expected ParamError");
  } catch (const ParamError& e) {
    CHECK(e.field() == "n");
  }
  CHECK_THROWS_AS(estimate_eta(0.5, 2, spec), ParamError);
}

TEST_CASE("duality audit") {
  auto r = duality_audit(2, 1, 0.5, 1, true);
  CHECK(r.pass);
  CHECK(r.lhs == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.rhs == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(r.slack == r.rhs - r.lhs);

  r = duality_audit(2, 1, self_dual_point(2), 2, true);
  CHECK(r.pass);
  CHECK(std::abs(r.slack) <= 1e-12);

  // q=1 against a product-measure crossing count
  const LatticeGraph b21 = LatticeGraph::box(2, 1);
  for (double p : {0.2, 0.5, 0.71}) {
    double v = 0.0;
    const int E = b21.edge_count();
    for (std::uint64_t m = 0; m < (std::uint64_t{1} << E); ++m)
      if (naive_lr(b21, m, b21.frame()))
        v += std::pow(p, __builtin_popcountll(m)) * std::pow(1 - p, E - __builtin_popcountll(m));
    r = duality_audit(2, 1, p, 1, true);
    CHECK(r.lhs == doctest::Approx(v).epsilon(1e-13));
    CHECK(r.pass);
  }

  Rng rng = make_stream(77, 0);
  const int boxes[][2] = {{1, 1}, {1, 2}, {2, 2}, {3, 1}, {3, 2}, {1, 0}, {2, 0}};
  for (auto& b : boxes)
    for (int t = 0; t < 3; ++t) {
      const double p = 0.05 + 0.9 * uniform01(rng);
      const double q = 0.3 + 4.0 * uniform01(rng);
      auto rep = duality_audit(b[0], b[1], p, q, true);
      INFO("box " << b[0] << "x" << b[1] << " p=" << p << " q=" << q);
      CHECK(rep.pass);
    }

  auto mc = duality_audit(4, 3, 0.55, 2, false, ChainSpec{9, 100, 4000, 1, 4});
  CHECK_FALSE(mc.exact);
  CHECK(mc.pass);
  CHECK(mc.tolerance > 0.0);

  CHECK_THROWS_AS(duality_audit(5, 5, 0.5, 1, true), std::length_error);
  CHECK_THROWS_AS(duality_audit(2, 1, 0.0, 1, true), ParamError);
}

TEST_CASE("free and wired crossings at the self-dual point") {
  for (double q : {1.0, 2.0, 4.0})
    for (int k = 1; k <= 3; ++k) {
      const auto [bk, bm] = square_box(k);
      const LatticeGraph g = LatticeGraph::box(bk, bm);
      const double psd = self_dual_point(q);
      const Event h = Event::crossing(Direction::LeftRight);
      const double f = event_prob(g, {psd, q, Boundary::Free}, h);
      const double w = event_prob(g, {psd, q, Boundary::Wired}, h);
      CHECK(f <= w + 1e-13);
      if (q == 1.0) CHECK(f == doctest::Approx(0.5).epsilon(1e-13));
    }
}

TEST_CASE("self-dual crossing at q=1 by sampling") {
  const LatticeGraph g = LatticeGraph::box(8, 7);
  auto est = estimate_event(g, RCParams{0.5, 1, Boundary::Free}, Event::crossing(Direction::LeftRight),
                            ChainSpec{13, 20, 5000, 1, 4});
  CHECK(z_score(est.mean, est.stdError, 0.5) < 3.0);
}

TEST_CASE("influence bound audit") {
  SUBCASE("Lambda_1, q=1, free form against a product-measure oracle") {
    Lemma1Config cfg;
    cfg.k = cfg.m = cfg.n = 1;
    cfg.offset = {-1, -1};
    cfg.p = 0.3;
    cfg.q = 1;
    auto rep = audit_lemma1(cfg);
    CHECK(rep.bc == Boundary::Free);
    CHECK(rep.pass);
    CHECK(rep.exact);
    CHECK(rep.eta == 1.0);
    CHECK(rep.bound == doctest::Approx(1 / 0.3));
    const LatticeGraph ball = LatticeGraph::centered_box(1);
    const auto J = naive_bernoulli_J(ball, 0.3, {-1, -1, 0, 0});
    REQUIRE(rep.edges.size() == J.size());
    for (std::size_t s = 0; s < J.size(); ++s) CHECK(rep.edges[s].J == doctest::Approx(J[s]).epsilon(1e-12));
    CHECK(rep.maxJ == doctest::Approx(*std::max_element(J.begin(), J.end())).epsilon(1e-12));
  }
  SUBCASE("wired reduction leaves the influences unchanged") {
    Lemma1Config cfg;
    cfg.k = cfg.m = cfg.n = 1;
    cfg.offset = {-1, 0};
    cfg.p = 0.7;
    cfg.q = 2;
    auto rep = audit_lemma1(cfg);
    CHECK(rep.bc == Boundary::Wired);
    CHECK(rep.pass);
    CHECK(rep.etaIndex == 2);
    const LatticeGraph ball = LatticeGraph::centered_box(1);
    auto table = influence_table(ball, {0.7, 2, Boundary::Wired},
                                 Event::crossing(Direction::LeftRight, PathMode::Open, Rect{-1, 0, 0, 1}));
    for (std::size_t s = 0; s < table.conditional.size(); ++s)
      CHECK(rep.edges[s].J == doctest::Approx(table.conditional[s]).epsilon(1e-10));
    CHECK(rep.bound == doctest::Approx(2 / dual_parameter(0.7, 2) * eta_upper_bound(2, 2).value));
  }
  SUBCASE("interior box in wired Lambda_2") {
    Lemma1Config cfg;
    cfg.k = 2;
    cfg.m = 1;
    cfg.n = 2;
    cfg.offset = {-1, -1};
    cfg.p = 0.75;
    cfg.q = 1.5;
    auto rep = audit_lemma1(cfg);
    CHECK(rep.exact);
    CHECK(rep.pass);
    CHECK(rep.minSlack > 0.0);
    CHECK(rep.edges.size() == 40);
  }
  SUBCASE("Box(2,1) in free Lambda_2 by sampling") {
    Lemma1Config cfg;
    cfg.k = 2;
    cfg.m = 1;
    cfg.n = 2;
    cfg.offset = {-1, -1};
    cfg.p = 0.5;
    cfg.q = 1.5;
    cfg.exact = false;
    cfg.spec = ChainSpec{3, 50, 800, 1, 4};
    CHECK_THROWS_AS(
        [&] {
          auto c = cfg;
          c.exact = true;
          audit_lemma1(c);
        }(),
        std::length_error);
    auto rep = audit_lemma1(cfg);
    CHECK_FALSE(rep.exact);
    CHECK(rep.pass);
    CHECK(rep.influence({10, 10}, {11, 10}) == 0.0);
    const auto& e0 = rep.edges.front();
    CHECK(rep.influence(e0.b, e0.a) == e0.J);
  }
  SUBCASE("box outside Lambda_n is rejected") {
    Lemma1Config cfg;
    cfg.k = 3;
    cfg.n = 1;
    CHECK_THROWS_AS(audit_lemma1(cfg), ParamError);
  }
}

TEST_CASE("logistic fit") {
  std::vector<ScanPoint> pts;
  const double b = 12.0, x0 = 0.52;
  for (int i = 0; i <= 10; ++i) {
    const double x = 0.4 + 0.02 * i;
    const double m = 1 / (1 + std::exp(-b * (x - x0)));
    pts.push_back(point(x, m, 0.01));
  }
  pts.push_back(point(0.7, 1.0, 0.0));
  auto fit = fit_logistic(pts);
  CHECK(fit.converged);
  CHECK(fit.pointsUsed == 11);
  CHECK(fit.slope == doctest::Approx(b).epsilon(1e-9));
  CHECK(fit.midpoint == doctest::Approx(x0).epsilon(1e-9));
  CHECK(fit.slopeStdError > 0.0);

  auto few = fit_logistic({point(0.4, 0.2, 0.01), point(0.5, 0.5, 0.01), point(0.6, 1.0, 0.01)});
  CHECK_FALSE(few.converged);
  CHECK(std::isnan(few.slope));
  CHECK_FALSE(few.note.empty());
}

TEST_CASE("threshold scans") {
  ScanConfig cfg;
  cfg.model = ScanModel::RC;
  cfg.rc = {0.5, 1, Boundary::Free};
  cfg.grid = {0.3, 0.4, 0.5, 0.6, 0.7};
  cfg.boxes = {{2, 1}, {3, 2}};
  cfg.spec = ChainSpec{21, 50, 2000, 1, 4};
  auto scan = threshold_scan(cfg);
  REQUIRE(scan.points.size() == 10);
  CHECK(scan.fits.size() == 2);
  CHECK(scan.monotonicityViolations == 0);
  for (std::size_t i = 0; i < scan.points.size(); ++i) {
    const auto& pt = scan.points[i];
    CHECK(pt.est.seed == scan_job_seed(21, i));
    const LatticeGraph g = LatticeGraph::box(pt.k, pt.m);
    const double exact = event_prob(g, {pt.control, 1, Boundary::Free}, Event::crossing(Direction::LeftRight));
    CHECK(z_score(pt.est.mean, pt.est.stdError, exact) < 4.5);
  }
  CHECK(scan.points[2].k == 2);
  CHECK(scan.points[5].k == 3);
  auto again = threshold_scan(cfg);
  for (std::size_t i = 0; i < scan.points.size(); ++i) CHECK(again.points[i].est.mean == scan.points[i].est.mean);

  cfg.grid = {0.5, 0.4};
  try {
    threshold_scan(cfg);
    FAIL("expected ParamError");
  } catch (const ParamError& e) {
    CHECK(e.field() == "grid");
  }
}

TEST_CASE("Ising scan at zero coupling matches site percolation") {
  ScanConfig cfg;
  cfg.model = ScanModel::Ising;
  cfg.ising = {0.0, 0.0, Boundary::Free};
  cfg.grid = {-0.3, 0.0, 0.4};
  cfg.boxes = {{2, 1}};
  cfg.spec = ChainSpec{8, 20, 4000, 1, 4};
  auto scan = threshold_scan(cfg);
  CHECK(scan.complementarityViolations == 0);
  CHECK(scan.complementarityChecks == 3LL * 4 * 4000);
  const LatticeGraph g = LatticeGraph::box(2, 1);
  const int V = g.vertex_count();
  for (const auto& pt : scan.points) {
    const double plus = 1 / (1 + std::exp(-2 * pt.control));
    double v = 0.0;
    for (std::uint64_t s = 0; s < (std::uint64_t{1} << V); ++s) {
      // + sites joined by lattice edges with both ends plus
      std::uint64_t bonds = 0;
      for (int e = 0; e < g.edge_count(); ++e)
        if ((s >> g.edge(e).u & 1u) && (s >> g.edge(e).v & 1u)) bonds |= std::uint64_t{1} << e;
      if (naive_lr(g, bonds, g.frame())) {
        const int c = __builtin_popcountll(s);
        v += std::pow(plus, c) * std::pow(1 - plus, V - c);
      }
    }
    CHECK(z_score(pt.est.mean, pt.est.stdError, v) < 4.0);
  }
}

TEST_CASE("CRCM scan records its assumption") {
  ScanConfig cfg;
  cfg.model = ScanModel::CRCM;
  cfg.crcm = {0.3, 2, 0.5, 0.0};
  cfg.grid = {-0.5, 0.0, 0.5};
  cfg.boxes = {{2, 1}};
  cfg.spec = ChainSpec{4, 20, 500, 1, 4};
  auto scan = threshold_scan(cfg);
  CHECK(scan.assumptions.size() == 1);
  CHECK(scan.complementarityViolations == 0);
  CHECK(scan.points.size() == 3);
}

TEST_CASE("corollary audit") {
  const LatticeGraph one = LatticeGraph::box(1, 0);
  const RCParams prm{0.5, 2, Boundary::Free};
  auto rep = corollary_audit(one, prm, Event::edge_open(0), 0.2, 0.8, 0.1, 100);
  CHECK(rep.bound.pass);
  CHECK(rep.kappa == doctest::Approx(2.0));
  double B = INFINITY;
  for (int i = 0; i < 100; ++i) {
    const double p = 0.2 + 0.6 * i / 99.0;
    const double mu = p / (p + 2 * (1 - p));
    B = std::min(B, 0.1 * mu * (1 - mu) / (p * (1 - p)));
  }
  CHECK(rep.B == doctest::Approx(B).epsilon(1e-12));
  const double mu1 = 0.2 / (0.2 + 1.6), mu2 = 0.8 / (0.8 + 0.4);
  CHECK(rep.bound.lhs == doctest::Approx(mu1 * (1 - mu2)).epsilon(1e-13));
  CHECK(rep.bound.rhs == doctest::Approx(std::pow(2.0, B * 0.6)).epsilon(1e-12));
  CHECK_FALSE(rep.gridTooCoarse);

  auto same = corollary_audit(one, prm, Event::edge_open(0), 0.4, 0.4, 0.1);
  CHECK(same.bound.rhs == 1.0);
  CHECK(same.bound.pass);

  const LatticeGraph box = LatticeGraph::box(2, 1);
  auto all = corollary_audit(box, prm, Event::all(), 0.3, 0.6, 0.1, 20);
  CHECK(all.bound.lhs == 0.0);
  CHECK(all.bound.pass);

  auto cross = corollary_audit(box, prm, Event::crossing(Direction::LeftRight), 0.3, 0.7, 0.1, 100);
  CHECK(cross.bound.pass);
  auto coarse = corollary_audit(box, prm, Event::crossing(Direction::LeftRight), 0.05, 0.95, 0.1, 3);
  CHECK(coarse.gridTooCoarse);

  CHECK_THROWS_AS(corollary_audit(one, prm, Event::edge_open(0), 0.6, 0.4, 0.1), ParamError);
}

TEST_CASE("sharp-threshold bound audit") {
  for (double q : {1.0, 2.0})
    for (int k : {2, 3})
      for (double p : {0.2, 0.45, 0.7, 0.9}) {
        auto r = theorem_bound_audit(k, p, q, 0.1);
        INFO("q=" << q << " k=" << k << " p=" << p);
        CHECK(r.exact);
        CHECK(r.pass);
        CHECK(r.slack == r.rhs - r.lhs);
      }
  CHECK_THROWS_AS(theorem_bound_audit(2, 0.5, 2, 0.0), ParamError);
}
