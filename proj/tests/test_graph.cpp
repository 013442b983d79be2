#include <doctest.h>

#include <set>

#include "rclab/graph.hpp"
#include "rclab/rng.hpp"

using namespace rclab;

namespace {

// Reference crossing test: union-find over the open edges inside the box,
// then ask whether some left vertex shares a root with some right vertex.
bool uf_crossing_lr(const LatticeGraph& g, const EdgeConfig& omega) {
  ClusterPartition uf(g.vertex_count());
  for (int e = 0; e < g.edge_count(); ++e)
    if (omega.open(e)) uf.unite(g.edge(e).u, g.edge(e).v);
  const Rect f = g.frame();
  for (int a = 0; a < g.vertex_count(); ++a) {
    if (g.point(a).x != f.x0) continue;
    for (int b = 0; b < g.vertex_count(); ++b)
      if (g.point(b).x == f.x1 && uf.connected(a, b)) return true;
  }
  return false;
}

EdgeConfig random_config(std::size_t edges, Rng& rng, double p) {
  EdgeConfig c(edges);
  for (std::size_t e = 0; e < edges; ++e) c.set(static_cast<int>(e), uniform01(rng) < p);
  return c;
}

}  // namespace

TEST_CASE("box sizes") {
  auto g10 = LatticeGraph::box(1, 0);
  CHECK(g10.vertex_count() == 2);
  CHECK(g10.edge_count() == 1);

  auto g21 = LatticeGraph::box(2, 1);
  CHECK(g21.vertex_count() == 6);
  CHECK(g21.edge_count() == 7);
  CHECK(g21.boundary().size() == 6);

  auto c1 = LatticeGraph::centered_box(1);
  CHECK(c1.vertex_count() == 9);
  CHECK(c1.edge_count() == 12);
  CHECK(c1.boundary().size() == 8);
  CHECK_FALSE(c1.is_boundary(*c1.vertex_at({0, 0})));

  for (int k = 0; k <= 6; ++k)
    for (int m = 0; m <= 5; ++m) {
      if (k == 0 && m == 0) continue;
      auto g = LatticeGraph::box(k, m);
      CHECK(g.vertex_count() == (k + 1) * (m + 1));
      CHECK(g.edge_count() == k * (m + 1) + m * (k + 1));
      std::set<std::pair<int, int>> seen;
      for (const Edge& e : g.edges()) {
        CHECK(e.u != e.v);
        CHECK(seen.insert(std::minmax(e.u, e.v)).second);
      }
    }

  CHECK_THROWS(LatticeGraph::box(0, 0));
  CHECK_THROWS(LatticeGraph::box(-1, 2));
  CHECK_THROWS(LatticeGraph::box(5000, 5000, BuildLimits{1000}));
}

TEST_CASE("edge ordering is row-major with horizontals first") {
  auto g = LatticeGraph::box(2, 1);
  CHECK(g.point(0) == Point{0, 0});
  CHECK(g.point(3) == Point{0, 1});
  for (int e = 0; e < 4; ++e) CHECK(g.edge(e).axis == Axis::Horizontal);
  for (int e = 4; e < 7; ++e) CHECK(g.edge(e).axis == Axis::Vertical);
  CHECK(g.edge(2).u == 3);
  CHECK(g.edge(4).u == 0);
  CHECK(g.edge(4).v == 3);
}

TEST_CASE("cluster counts under both boundary conditions") {
  auto g = LatticeGraph::box(2, 1);
  EdgeConfig closed(7), open(7, true);
  CHECK(clusters(g, closed, Boundary::Free).cluster_count() == 6);
  CHECK(clusters(g, closed, Boundary::Wired).cluster_count() == 1);
  CHECK(clusters(g, open, Boundary::Free).cluster_count() == 1);
  CHECK(clusters(g, open, Boundary::Wired).cluster_count() == 1);

  auto c = LatticeGraph::centered_box(1);
  CHECK(clusters(c, EdgeConfig(12), Boundary::Wired).cluster_count() == 2);

  auto big = LatticeGraph::box(4, 3);
  Rng rng = make_stream(1, 0);
  ClusterPartition scratch;
  for (int t = 0; t < 300; ++t) {
    EdgeConfig w = random_config(static_cast<std::size_t>(big.edge_count()), rng, 0.45);
    for (Boundary bc : {Boundary::Free, Boundary::Wired}) {
      const int before = clusters(big, w, bc).cluster_count();
      CHECK(cluster_count(big, w.mask(), bc, scratch) == before);
      for (int e = 0; e < big.edge_count(); ++e) {
        if (w.open(e)) continue;
        EdgeConfig w2 = w;
        w2.set(e, true);
        const int diff = before - clusters(big, w2, bc).cluster_count();
        CHECK((diff == 0 || diff == 1));
      }
    }
    CHECK(clusters(big, w, Boundary::Wired).cluster_count() <= clusters(big, w, Boundary::Free).cluster_count());
  }
}

TEST_CASE("wired partition shares one root on the boundary") {
  auto g = LatticeGraph::box(3, 3);
  auto part = clusters(g, EdgeConfig(static_cast<std::size_t>(g.edge_count())), Boundary::Wired);
  const int root = part.find(g.boundary().front());
  for (int v : g.boundary()) CHECK(part.find(v) == root);
  auto labels = part.labels();
  CHECK(std::set<int>(labels.begin(), labels.end()).size() == static_cast<std::size_t>(part.cluster_count()));
  for (int v = 0; v < g.vertex_count(); ++v) CHECK(part.find(part.find(v)) == part.find(v));
}

TEST_CASE("crossing basics") {
  auto g = LatticeGraph::box(2, 1);
  CHECK(has_crossing(g, EdgeConfig(7, true), Direction::LeftRight));
  CHECK_FALSE(has_crossing(g, EdgeConfig(7), Direction::LeftRight));
  CHECK(has_crossing(g, SpinConfig(6, false), Direction::TopBottom, PathMode::MinusStar));
  CHECK_FALSE(has_crossing(g, SpinConfig(6, false), Direction::LeftRight, PathMode::Plus));
  CHECK_THROWS(has_crossing(g, SpinConfig(6), Direction::LeftRight, PathMode::Open));

  // A diagonal chain of minus spins is a *-path but not a plain path.
  auto sq = LatticeGraph::box(1, 1);
  SpinConfig diag(4, true);
  diag.set(0, false);
  diag.set(3, false);
  CHECK(has_crossing(sq, diag, Direction::TopBottom, PathMode::MinusStar));
  CHECK_FALSE(has_crossing(sq, diag, Direction::LeftRight, PathMode::Plus));
}

TEST_CASE("crossing agrees with a union-find reference") {
  Rng rng = make_stream(2, 0);
  for (auto [k, m] : {std::pair{3, 2}, {5, 4}, {8, 7}}) {
    auto g = LatticeGraph::box(k, m);
    for (int t = 0; t < 500; ++t) {
      EdgeConfig w = random_config(static_cast<std::size_t>(g.edge_count()), rng, 0.5);
      CHECK(has_crossing(g, w, Direction::LeftRight) == uf_crossing_lr(g, w));
    }
  }
}

TEST_CASE("radius events") {
  auto g = LatticeGraph::centered_box(3);
  const int origin = *g.vertex_at({0, 0});
  const auto E = static_cast<std::size_t>(g.edge_count());
  CHECK(radius_reached(g, EdgeConfig(E), origin, 0));
  CHECK_FALSE(radius_reached(g, EdgeConfig(E), origin, 1));
  for (int r = 1; r <= 3; ++r) CHECK(radius_reached(g, EdgeConfig(E, true), origin, r));
  CHECK_FALSE(radius_reached(g, EdgeConfig(E, true), origin, 4));
  CHECK_THROWS(radius_reached(g, EdgeConfig(E), g.vertex_count(), 1));

  // A single open edge to (1,0) reaches radius 1 only.
  EdgeConfig one(E);
  one.set(*g.edge_between(origin, *g.vertex_at({1, 0})), true);
  CHECK(radius_reached(g, one, origin, 1));
  CHECK_FALSE(radius_reached(g, one, origin, 2));

  SpinConfig s(static_cast<std::size_t>(g.vertex_count()), true);
  CHECK(radius_reached(g, s, origin, 3, PathMode::Plus));
  CHECK_FALSE(radius_reached(g, s, origin, 1, PathMode::MinusStar));
}

TEST_CASE("dual box pairing") {
  auto g10 = LatticeGraph::box(1, 0);
  auto d10 = dual_box(g10);
  CHECK(d10.primalToDual.size() == 1);
  CHECK(std::count_if(d10.dualToPrimal.begin(), d10.dualToPrimal.end(), [](int e) { return e >= 0; }) == 1);

  auto g = LatticeGraph::box(2, 1);
  auto d = dual_box(g);
  CHECK(d.primalToDual.size() == 7);
  CHECK(std::count_if(d.dualToPrimal.begin(), d.dualToPrimal.end(), [](int e) { return e >= 0; }) == 7);
  // The crossing window is Box(2,1) turned on its side.
  CHECK(d.crossingWindow.width() == 1);
  CHECK(d.crossingWindow.height() == 2);

  for (auto [k, m] : {std::pair{1, 0}, {2, 1}, {4, 3}, {3, 5}}) {
    auto p = LatticeGraph::box(k, m);
    auto dd = dual_box(p);
    std::set<int> image;
    for (int e = 0; e < p.edge_count(); ++e) {
      const int de = dd.primalToDual[static_cast<std::size_t>(e)];
      CHECK(dd.dualToPrimal[static_cast<std::size_t>(de)] == e);
      image.insert(de);
      // Dual edges are perpendicular to their primal partner.
      CHECK(dd.graph.edge(de).axis != p.edge(e).axis);
    }
    CHECK(image.size() == static_cast<std::size_t>(p.edge_count()));
    // Unpaired dual edges join two frame vertices.
    for (int de = 0; de < dd.graph.edge_count(); ++de)
      if (dd.dualToPrimal[static_cast<std::size_t>(de)] < 0) {
        CHECK(dd.graph.is_boundary(dd.graph.edge(de).u));
        CHECK(dd.graph.is_boundary(dd.graph.edge(de).v));
      }
  }
}

TEST_CASE("dual configuration complements") {
  auto g = LatticeGraph::box(2, 1);
  auto d = dual_box(g);
  auto allOpenDual = dual_config(EdgeConfig(7, true), d);
  for (int e = 0; e < 7; ++e) CHECK_FALSE(allOpenDual.open(d.primalToDual[static_cast<std::size_t>(e)]));
  auto allClosedDual = dual_config(EdgeConfig(7), d);
  for (int e = 0; e < 7; ++e) CHECK(allClosedDual.open(d.primalToDual[static_cast<std::size_t>(e)]));
  for (std::uint64_t mask = 0; mask < 128; ++mask) {
    auto w = EdgeConfig::from_mask(mask, 7);
    CHECK(primal_config(dual_config(w, d), d) == w);
  }
  CHECK_THROWS(dual_config(EdgeConfig(6), d));
}

TEST_CASE("planar duality XOR is exhaustive on small boxes") {
  for (int k = 1; k <= 12; ++k)
    for (int m = 0; m <= 12; ++m) {
      auto g = LatticeGraph::box(k, m);
      if (g.edge_count() > 12) continue;
      auto d = dual_box(g);
      const auto E = static_cast<std::size_t>(g.edge_count());
      int violations = 0;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << E); ++mask) {
        auto w = EdgeConfig::from_mask(mask, E);
        const bool primal = has_crossing(g, w, Direction::LeftRight);
        const bool dual = has_crossing(d.graph, dual_config(w, d), Direction::TopBottom, d.crossingWindow);
        if (primal == dual) ++violations;
      }
      CHECK_MESSAGE(violations == 0, "Box(" << k << "," << m << ")");
    }
}

TEST_CASE("planar duality XOR on random configurations of larger boxes") {
  Rng rng = make_stream(3, 0);
  for (auto [k, m] : {std::pair{5, 4}, {8, 7}, {6, 9}}) {
    auto g = LatticeGraph::box(k, m);
    auto d = dual_box(g);
    int violations = 0;
    for (int t = 0; t < 10000 / 3; ++t) {
      EdgeConfig w = random_config(static_cast<std::size_t>(g.edge_count()), rng, 0.5);
      const bool primal = has_crossing(g, w, Direction::LeftRight);
      const bool dual = has_crossing(d.graph, dual_config(w, d), Direction::TopBottom, d.crossingWindow);
      if (primal == dual) ++violations;
    }
    CHECK(violations == 0);
  }
}

TEST_CASE("spin complementarity") {
  for (int k = 1; k <= 15; ++k)
    for (int m = 0; m <= 15; ++m) {
      auto g = LatticeGraph::box(k, m);
      if (g.vertex_count() > 16) continue;
      const auto V = static_cast<std::size_t>(g.vertex_count());
      int violations = 0;
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << V); ++mask) {
        auto s = SpinConfig::from_mask(mask, V);
        if (has_crossing(g, s, Direction::LeftRight, PathMode::Plus) ==
            has_crossing(g, s, Direction::TopBottom, PathMode::MinusStar))
          ++violations;
      }
      CHECK_MESSAGE(violations == 0, "Box(" << k << "," << m << ")");
    }

  Rng rng = make_stream(4, 0);
  auto g = LatticeGraph::box(9, 8);
  int violations = 0;
  for (int t = 0; t < 10000; ++t) {
    SpinConfig s(static_cast<std::size_t>(g.vertex_count()));
    for (int v = 0; v < g.vertex_count(); ++v) s.set(v, uniform01(rng) < 0.5);
    if (has_crossing(g, s, Direction::LeftRight, PathMode::Plus) ==
        has_crossing(g, s, Direction::TopBottom, PathMode::MinusStar))
      ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("arbitrary graphs validate input") {
  CHECK_THROWS(LatticeGraph::arbitrary(2, {{0, 0}}));
  CHECK_THROWS(LatticeGraph::arbitrary(2, {{0, 1}, {1, 0}}));
  CHECK_THROWS(LatticeGraph::arbitrary(2, {{0, 2}}));
  auto g = LatticeGraph::arbitrary(3, {{0, 1}, {1, 2}}, {0, 2});
  CHECK(g.edge_count() == 2);
  CHECK(g.degree(1) == 2);
  CHECK(clusters(g, EdgeConfig(2), Boundary::Wired).cluster_count() == 2);
}
