#include "rclab/graph.hpp"

#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <stdexcept>
#include <string>

namespace rclab {

EdgeConfig EdgeConfig::from_mask(std::uint64_t mask, std::size_t edges) {
  EdgeConfig c(edges);
  for (std::size_t e = 0; e < edges; ++e) c.bits[e] = static_cast<std::uint8_t>((mask >> e) & 1u);
  return c;
}

std::size_t EdgeConfig::open_count() const {
  return static_cast<std::size_t>(std::count(bits.begin(), bits.end(), std::uint8_t{1}));
}

std::uint64_t EdgeConfig::mask() const {
  if (bits.size() > 64) throw std::length_error("EdgeConfig::mask: more than 64 edges");
  std::uint64_t m = 0;
  for (std::size_t e = 0; e < bits.size(); ++e)
    if (bits[e]) m |= std::uint64_t{1} << e;
  return m;
}

SpinConfig SpinConfig::from_mask(std::uint64_t mask, std::size_t vertices) {
  SpinConfig c(vertices);
  for (std::size_t v = 0; v < vertices; ++v) c.bits[v] = static_cast<std::uint8_t>((mask >> v) & 1u);
  return c;
}

std::uint64_t SpinConfig::mask() const {
  if (bits.size() > 64) throw std::length_error("SpinConfig::mask: more than 64 vertices");
  std::uint64_t m = 0;
  for (std::size_t v = 0; v < bits.size(); ++v)
    if (bits[v]) m |= std::uint64_t{1} << v;
  return m;
}

bool dominated_by(const EdgeConfig& lower, const EdgeConfig& upper) {
  if (lower.size() != upper.size()) throw std::invalid_argument("dominated_by: length mismatch");
  for (std::size_t e = 0; e < lower.size(); ++e)
    if (lower.bits[e] > upper.bits[e]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// LatticeGraph
// ---------------------------------------------------------------------------

LatticeGraph LatticeGraph::box(int k, int m, const BuildLimits& limits) {
  if (k < 0 || m < 0 || (k == 0 && m == 0))
    throw std::invalid_argument("box: need k,m >= 0, not both zero");
  return rectangle(Rect{0, 0, k, m}, GraphKind::Box, limits);
}

LatticeGraph LatticeGraph::centered_box(int n, const BuildLimits& limits) {
  if (n < 0) throw std::invalid_argument("centered_box: need n >= 0");
  return rectangle(Rect{-n, -n, n, n}, GraphKind::CenteredBox, limits);
}

LatticeGraph LatticeGraph::rectangle(Rect r, GraphKind kind, const BuildLimits& limits) {
  if (kind == GraphKind::Arbitrary) throw std::invalid_argument("rectangle: lattice kind required");
  if (r.x1 < r.x0 || r.y1 < r.y0) throw std::invalid_argument("rectangle: empty rectangle");
  const std::size_t w = static_cast<std::size_t>(r.width()) + 1;
  const std::size_t h = static_cast<std::size_t>(r.height()) + 1;
  if (w * h > limits.maxVertices)
    throw std::length_error("rectangle: " + std::to_string(w * h) + " vertices exceeds budget of " +
                            std::to_string(limits.maxVertices));

  LatticeGraph g;
  g.kind_ = kind;
  g.frame_ = r;
  g.vertices_.reserve(w * h);
  for (int y = r.y0; y <= r.y1; ++y)
    for (int x = r.x0; x <= r.x1; ++x) g.vertices_.push_back({x, y});

  const int W = static_cast<int>(w);
  auto idx = [&](int x, int y) { return (y - r.y0) * W + (x - r.x0); };
  g.edges_.reserve((w - 1) * h + w * (h - 1));
  for (int y = r.y0; y <= r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x) g.edges_.push_back({idx(x, y), idx(x + 1, y), Axis::Horizontal});
  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x <= r.x1; ++x) g.edges_.push_back({idx(x, y), idx(x, y + 1), Axis::Vertical});

  for (int v = 0; v < g.vertex_count(); ++v) {
    const Point p = g.vertices_[static_cast<std::size_t>(v)];
    if (p.x == r.x0 || p.x == r.x1 || p.y == r.y0 || p.y == r.y1) g.boundary_.push_back(v);
  }
  g.finalize();
  return g;
}

LatticeGraph LatticeGraph::arbitrary(int vertexCount, const std::vector<std::pair<int, int>>& edges,
                                     const std::vector<int>& boundary) {
  if (vertexCount < 1) throw std::invalid_argument("arbitrary: need at least one vertex");
  LatticeGraph g;
  g.kind_ = GraphKind::Arbitrary;
  for (int v = 0; v < vertexCount; ++v) g.vertices_.push_back({v, 0});
  std::vector<std::pair<int, int>> seen;
  for (auto [a, b] : edges) {
    if (a < 0 || b < 0 || a >= vertexCount || b >= vertexCount)
      throw std::invalid_argument("arbitrary: edge endpoint out of range");
    if (a == b) throw std::invalid_argument("arbitrary: self-loop");
    auto key = std::minmax(a, b);
    if (std::find(seen.begin(), seen.end(), std::pair<int, int>(key)) != seen.end())
      throw std::invalid_argument("arbitrary: duplicate edge");
    seen.emplace_back(key);
    g.edges_.push_back({a, b, Axis::None});
  }
  for (int v : boundary) {
    if (v < 0 || v >= vertexCount) throw std::invalid_argument("arbitrary: boundary vertex out of range");
    g.boundary_.push_back(v);
  }
  std::sort(g.boundary_.begin(), g.boundary_.end());
  g.boundary_.erase(std::unique(g.boundary_.begin(), g.boundary_.end()), g.boundary_.end());
  g.finalize();
  return g;
}

LatticeGraph LatticeGraph::with_edge_subset(const std::vector<int>& keptEdges) const {
  LatticeGraph g;
  g.kind_ = kind_;
  g.frame_ = frame_;
  g.vertices_ = vertices_;
  g.boundary_ = boundary_;
  for (int e : keptEdges) g.edges_.push_back(edge(e));
  g.finalize();
  return g;
}

void LatticeGraph::finalize() {
  const auto n = vertices_.size();
  boundaryFlag_.assign(n, 0);
  for (int v : boundary_) boundaryFlag_[static_cast<std::size_t>(v)] = 1;

  std::vector<int> deg(n, 0);
  for (const Edge& e : edges_) {
    ++deg[static_cast<std::size_t>(e.u)];
    ++deg[static_cast<std::size_t>(e.v)];
  }
  incidentStart_.assign(n + 1, 0);
  for (std::size_t v = 0; v < n; ++v) incidentStart_[v + 1] = incidentStart_[v] + deg[v];
  incident_.assign(static_cast<std::size_t>(incidentStart_[n]), 0);
  std::vector<int> fill(incidentStart_.begin(), incidentStart_.end() - 1);
  for (int e = 0; e < edge_count(); ++e) {
    const Edge& ed = edges_[static_cast<std::size_t>(e)];
    incident_[static_cast<std::size_t>(fill[static_cast<std::size_t>(ed.u)]++)] = e;
    incident_[static_cast<std::size_t>(fill[static_cast<std::size_t>(ed.v)]++)] = e;
  }
}

int LatticeGraph::max_degree() const {
  int d = 0;
  for (int v = 0; v < vertex_count(); ++v) d = std::max(d, degree(v));
  return d;
}

std::optional<int> LatticeGraph::vertex_at(Point p) const {
  if (!has_geometry() || !frame_.contains(p)) return std::nullopt;
  return (p.y - frame_.y0) * (frame_.width() + 1) + (p.x - frame_.x0);
}

std::optional<int> LatticeGraph::edge_between(int a, int b) const {
  for (int e : incident(a))
    if (other_end(e, a) == b) return e;
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// ClusterPartition
// ---------------------------------------------------------------------------

void ClusterPartition::reset(int n) {
  parent_.resize(static_cast<std::size_t>(n));
  std::iota(parent_.begin(), parent_.end(), 0);
  rank_.assign(static_cast<std::size_t>(n), 0);
  count_ = n;
}

int ClusterPartition::find(int v) {
  auto& p = parent_;
  while (p[static_cast<std::size_t>(v)] != v) {
    auto& pv = p[static_cast<std::size_t>(v)];
    pv = p[static_cast<std::size_t>(pv)];
    v = pv;
  }
  return v;
}

bool ClusterPartition::unite(int a, int b) {
  a = find(a);
  b = find(b);
  if (a == b) return false;
  auto& ra = rank_[static_cast<std::size_t>(a)];
  auto& rb = rank_[static_cast<std::size_t>(b)];
  if (ra < rb) std::swap(a, b);
  parent_[static_cast<std::size_t>(b)] = a;
  if (rank_[static_cast<std::size_t>(a)] == rank_[static_cast<std::size_t>(b)]) ++rank_[static_cast<std::size_t>(a)];
  --count_;
  return true;
}

std::vector<int> ClusterPartition::labels() {
  std::vector<int> out(parent_.size());
  for (std::size_t v = 0; v < parent_.size(); ++v) out[v] = find(static_cast<int>(v));
  return out;
}

namespace {

void merge_boundary(const LatticeGraph& g, ClusterPartition& uf) {
  const auto& b = g.boundary();
  for (std::size_t i = 1; i < b.size(); ++i) uf.unite(b[0], b[i]);
}

}  // namespace

ClusterPartition clusters(const LatticeGraph& g, const EdgeConfig& omega, Boundary bc) {
  if (omega.size() != static_cast<std::size_t>(g.edge_count()))
    throw std::invalid_argument("clusters: configuration length does not match edge count");
  ClusterPartition uf(g.vertex_count());
  if (bc == Boundary::Wired) merge_boundary(g, uf);
  for (int e = 0; e < g.edge_count(); ++e)
    if (omega.open(e)) uf.unite(g.edge(e).u, g.edge(e).v);
  return uf;
}

int cluster_count(const LatticeGraph& g, std::uint64_t openMask, Boundary bc, ClusterPartition& scratch) {
  scratch.reset(g.vertex_count());
  if (bc == Boundary::Wired) merge_boundary(g, scratch);
  while (openMask) {
    const int e = __builtin_ctzll(openMask);
    openMask &= openMask - 1;
    scratch.unite(g.edge(e).u, g.edge(e).v);
  }
  return scratch.cluster_count();
}

// ---------------------------------------------------------------------------
// Crossings and radii
// ---------------------------------------------------------------------------

namespace {

struct SideTest {
  Rect w;
  Direction dir;
  bool source(Point p) const { return dir == Direction::LeftRight ? p.x == w.x0 : p.y == w.y0; }
  bool target(Point p) const { return dir == Direction::LeftRight ? p.x == w.x1 : p.y == w.y1; }
};

Rect resolve_window(const LatticeGraph& g, std::optional<Rect> window) {
  if (!g.has_geometry()) throw std::invalid_argument("crossing: graph has no lattice geometry");
  Rect w = window.value_or(g.frame());
  const Rect& f = g.frame();
  if (w.x0 < f.x0 || w.y0 < f.y0 || w.x1 > f.x1 || w.y1 > f.y1 || w.x1 < w.x0 || w.y1 < w.y0)
    throw std::invalid_argument("crossing: window outside graph frame");
  return w;
}

// Neighbours of v by coordinates: 4 for nearest-neighbour, 8 for star.
template <class F>
void for_each_site_neighbour(const LatticeGraph& g, int v, bool star, F&& f) {
  static constexpr int dx[8] = {1, -1, 0, 0, 1, 1, -1, -1};
  static constexpr int dy[8] = {0, 0, 1, -1, 1, -1, 1, -1};
  const Point p = g.point(v);
  const int n = star ? 8 : 4;
  for (int i = 0; i < n; ++i) {
    if (auto u = g.vertex_at({p.x + dx[i], p.y + dy[i]})) f(*u);
  }
}

thread_local std::vector<int> tl_stack;
thread_local std::vector<std::uint8_t> tl_seen;

}  // namespace

bool has_crossing(const LatticeGraph& g, const EdgeConfig& omega, Direction dir, std::optional<Rect> window) {
  if (omega.size() != static_cast<std::size_t>(g.edge_count()))
    throw std::invalid_argument("has_crossing: configuration length does not match edge count");
  const SideTest side{resolve_window(g, window), dir};
  auto& stack = tl_stack;
  auto& seen = tl_seen;
  stack.clear();
  seen.assign(static_cast<std::size_t>(g.vertex_count()), 0);
  for (int v = 0; v < g.vertex_count(); ++v) {
    const Point p = g.point(v);
    if (side.w.contains(p) && side.source(p)) {
      if (side.target(p)) return true;
      seen[static_cast<std::size_t>(v)] = 1;
      stack.push_back(v);
    }
  }
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int e : g.incident(v)) {
      if (!omega.open(e)) continue;
      const int u = g.other_end(e, v);
      if (seen[static_cast<std::size_t>(u)]) continue;
      const Point p = g.point(u);
      if (!side.w.contains(p)) continue;
      if (side.target(p)) return true;
      seen[static_cast<std::size_t>(u)] = 1;
      stack.push_back(u);
    }
  }
  return false;
}

bool has_crossing(const LatticeGraph& g, const SpinConfig& sigma, Direction dir, PathMode mode,
                  std::optional<Rect> window) {
  if (mode == PathMode::Open) throw std::invalid_argument("has_crossing: open-path mode needs an EdgeConfig");
  if (sigma.size() != static_cast<std::size_t>(g.vertex_count()))
    throw std::invalid_argument("has_crossing: spin configuration length does not match vertex count");
  const SideTest side{resolve_window(g, window), dir};
  const bool want = mode == PathMode::Plus;
  const bool star = mode == PathMode::MinusStar;
  auto& stack = tl_stack;
  auto& seen = tl_seen;
  stack.clear();
  seen.assign(static_cast<std::size_t>(g.vertex_count()), 0);
  for (int v = 0; v < g.vertex_count(); ++v) {
    const Point p = g.point(v);
    if (sigma.plus(v) == want && side.w.contains(p) && side.source(p)) {
      if (side.target(p)) return true;
      seen[static_cast<std::size_t>(v)] = 1;
      stack.push_back(v);
    }
  }
  bool found = false;
  while (!stack.empty() && !found) {
    const int v = stack.back();
    stack.pop_back();
    for_each_site_neighbour(g, v, star, [&](int u) {
      if (found || seen[static_cast<std::size_t>(u)] || sigma.plus(u) != want) return;
      const Point p = g.point(u);
      if (!side.w.contains(p)) return;
      if (side.target(p)) {
        found = true;
        return;
      }
      seen[static_cast<std::size_t>(u)] = 1;
      stack.push_back(u);
    });
  }
  return found;
}

namespace {

int sup_distance(Point a, Point b) { return std::max(std::abs(a.x - b.x), std::abs(a.y - b.y)); }

}  // namespace

bool radius_reached(const LatticeGraph& g, const EdgeConfig& omega, int x, int r) {
  if (x < 0 || x >= g.vertex_count()) throw std::out_of_range("radius_reached: vertex outside graph");
  if (r < 0) throw std::invalid_argument("radius_reached: negative radius");
  if (r == 0) return true;
  const Point origin = g.point(x);
  auto& stack = tl_stack;
  auto& seen = tl_seen;
  stack.assign(1, x);
  seen.assign(static_cast<std::size_t>(g.vertex_count()), 0);
  seen[static_cast<std::size_t>(x)] = 1;
  while (!stack.empty()) {
    const int v = stack.back();
    stack.pop_back();
    for (int e : g.incident(v)) {
      if (!omega.open(e)) continue;
      const int u = g.other_end(e, v);
      if (seen[static_cast<std::size_t>(u)]) continue;
      if (sup_distance(g.point(u), origin) >= r) return true;
      seen[static_cast<std::size_t>(u)] = 1;
      stack.push_back(u);
    }
  }
  return false;
}

bool radius_reached(const LatticeGraph& g, const SpinConfig& sigma, int x, int r, PathMode mode) {
  if (mode == PathMode::Open) throw std::invalid_argument("radius_reached: open-path mode needs an EdgeConfig");
  if (x < 0 || x >= g.vertex_count()) throw std::out_of_range("radius_reached: vertex outside graph");
  if (r < 0) throw std::invalid_argument("radius_reached: negative radius");
  if (r == 0) return true;
  if (!g.has_geometry()) throw std::invalid_argument("radius_reached: graph has no lattice geometry");
  const bool want = mode == PathMode::Plus;
  if (sigma.plus(x) != want) return false;
  const Point origin = g.point(x);
  auto& stack = tl_stack;
  auto& seen = tl_seen;
  stack.assign(1, x);
  seen.assign(static_cast<std::size_t>(g.vertex_count()), 0);
  seen[static_cast<std::size_t>(x)] = 1;
  bool found = false;
  while (!stack.empty() && !found) {
    const int v = stack.back();
    stack.pop_back();
    for_each_site_neighbour(g, v, mode == PathMode::MinusStar, [&](int u) {
      if (found || seen[static_cast<std::size_t>(u)] || sigma.plus(u) != want) return;
      if (sup_distance(g.point(u), origin) >= r) {
        found = true;
        return;
      }
      seen[static_cast<std::size_t>(u)] = 1;
      stack.push_back(u);
    });
  }
  return found;
}

std::vector<int> open_cluster(const LatticeGraph& g, const EdgeConfig& omega, int x) {
  std::vector<int> out{x};
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(g.vertex_count()), 0);
  seen[static_cast<std::size_t>(x)] = 1;
  for (std::size_t head = 0; head < out.size(); ++head) {
    const int v = out[head];
    for (int e : g.incident(v)) {
      if (!omega.open(e)) continue;
      const int u = g.other_end(e, v);
      if (!seen[static_cast<std::size_t>(u)]) {
        seen[static_cast<std::size_t>(u)] = 1;
        out.push_back(u);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Duality
// ---------------------------------------------------------------------------

DualBox dual_box(const LatticeGraph& primal) {
  if (primal.kind() != GraphKind::Box) throw std::invalid_argument("dual_box: primal must be a Box(k,m)");
  const Rect f = primal.frame();
  const int k = f.x1;
  const int m = f.y1;
  DualBox d{LatticeGraph::rectangle(Rect{0, 0, k + 1, m + 1}, GraphKind::DualBox), {}, {}, Rect{1, 0, k, m + 1}};
  d.primalToDual.assign(static_cast<std::size_t>(primal.edge_count()), -1);
  d.dualToPrimal.assign(static_cast<std::size_t>(d.graph.edge_count()), -1);

  // Dual vertex (i,j) sits at (i-1/2, j-1/2). The horizontal primal edge
  // (x,y)-(x+1,y) is crossed by the dual vertical (x+1,y)-(x+1,y+1); the
  // vertical primal edge (x,y)-(x,y+1) by the dual horizontal (x,y+1)-(x+1,y+1).
  for (int e = 0; e < primal.edge_count(); ++e) {
    const Edge& pe = primal.edge(e);
    const Point a = primal.point(pe.u);
    Point du, dv;
    if (pe.axis == Axis::Horizontal) {
      du = {a.x + 1, a.y};
      dv = {a.x + 1, a.y + 1};
    } else {
      du = {a.x, a.y + 1};
      dv = {a.x + 1, a.y + 1};
    }
    const int de = *d.graph.edge_between(*d.graph.vertex_at(du), *d.graph.vertex_at(dv));
    d.primalToDual[static_cast<std::size_t>(e)] = de;
    d.dualToPrimal[static_cast<std::size_t>(de)] = e;
  }
  return d;
}

EdgeConfig dual_config(const EdgeConfig& omega, const DualBox& dual) {
  if (omega.size() != dual.primalToDual.size())
    throw std::invalid_argument("dual_config: configuration length does not match primal edge count");
  EdgeConfig out(dual.dualToPrimal.size(), true);
  for (std::size_t e = 0; e < omega.size(); ++e)
    out.set(dual.primalToDual[e], !omega.open(static_cast<int>(e)));
  return out;
}

EdgeConfig primal_config(const EdgeConfig& omegaDual, const DualBox& dual) {
  if (omegaDual.size() != dual.dualToPrimal.size())
    throw std::invalid_argument("primal_config: configuration length does not match dual edge count");
  EdgeConfig out(dual.primalToDual.size());
  for (std::size_t e = 0; e < out.size(); ++e)
    out.set(static_cast<int>(e), !omegaDual.open(dual.primalToDual[e]));
  return out;
}

std::vector<int> boundary_boundary_edges(const LatticeGraph& g) {
  std::vector<int> out;
  for (int e = 0; e < g.edge_count(); ++e)
    if (g.is_boundary(g.edge(e).u) && g.is_boundary(g.edge(e).v)) out.push_back(e);
  return out;
}

}  // namespace rclab
