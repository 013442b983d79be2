#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace rclab {

struct Point {
  int x = 0;
  int y = 0;
  friend bool operator==(const Point&, const Point&) = default;
};

/// Closed integer rectangle [x0,x1] x [y0,y1].
struct Rect {
  int x0 = 0;
  int y0 = 0;
  int x1 = 0;
  int y1 = 0;

  bool contains(Point p) const { return p.x >= x0 && p.x <= x1 && p.y >= y0 && p.y <= y1; }
  int width() const { return x1 - x0; }
  int height() const { return y1 - y0; }
  friend bool operator==(const Rect&, const Rect&) = default;
};

enum class Axis : std::uint8_t { Horizontal, Vertical, None };

struct Edge {
  int u = 0;
  int v = 0;
  Axis axis = Axis::None;
};

enum class GraphKind : std::uint8_t { Box, CenteredBox, DualBox, Arbitrary };

enum class Boundary : std::uint8_t { Free, Wired };

struct BuildLimits {
  std::size_t maxVertices = std::size_t{1} << 24;
};

/// Bond configuration: one bit per edge index (1 = open).
struct EdgeConfig {
  std::vector<std::uint8_t> bits;

  EdgeConfig() = default;
  explicit EdgeConfig(std::size_t edges, bool open = false) : bits(edges, open ? 1 : 0) {}
  static EdgeConfig from_mask(std::uint64_t mask, std::size_t edges);

  std::size_t size() const { return bits.size(); }
  bool open(int e) const { return bits[static_cast<std::size_t>(e)] != 0; }
  void set(int e, bool open) { bits[static_cast<std::size_t>(e)] = open ? 1 : 0; }
  std::size_t open_count() const;
  std::uint64_t mask() const;
  friend bool operator==(const EdgeConfig&, const EdgeConfig&) = default;
};

/// Spin configuration: one bit per vertex (1 = spin +1, 0 = spin -1).
struct SpinConfig {
  std::vector<std::uint8_t> bits;

  SpinConfig() = default;
  explicit SpinConfig(std::size_t vertices, bool plus = false) : bits(vertices, plus ? 1 : 0) {}
  static SpinConfig from_mask(std::uint64_t mask, std::size_t vertices);

  std::size_t size() const { return bits.size(); }
  bool plus(int v) const { return bits[static_cast<std::size_t>(v)] != 0; }
  void set(int v, bool plus) { bits[static_cast<std::size_t>(v)] = plus ? 1 : 0; }
  std::uint64_t mask() const;
  friend bool operator==(const SpinConfig&, const SpinConfig&) = default;
};

/// Pointwise partial order on configurations.
bool dominated_by(const EdgeConfig& lower, const EdgeConfig& upper);

/// Finite planar graph. Lattice kinds carry integer coordinates filling a
/// rectangle, enumerated row-major; edges list all horizontals (row-major)
/// before all verticals. Immutable after construction.
class LatticeGraph {
 public:
  static LatticeGraph box(int k, int m, const BuildLimits& limits = {});
  static LatticeGraph centered_box(int n, const BuildLimits& limits = {});
  static LatticeGraph rectangle(Rect r, GraphKind kind, const BuildLimits& limits = {});
  static LatticeGraph arbitrary(int vertexCount, const std::vector<std::pair<int, int>>& edges,
                                const std::vector<int>& boundary = {});

  /// Same vertices, only the edges for which keep(e) is true. Geometry is
  /// retained so crossings and spin adjacency still work.
  template <class Pred>
  LatticeGraph filter_edges(Pred keep) const {
    std::vector<int> kept;
    for (int e = 0; e < edge_count(); ++e)
      if (keep(e)) kept.push_back(e);
    return with_edge_subset(kept);
  }
  LatticeGraph with_edge_subset(const std::vector<int>& keptEdges) const;

  int vertex_count() const { return static_cast<int>(vertices_.size()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  GraphKind kind() const { return kind_; }
  bool has_geometry() const { return kind_ != GraphKind::Arbitrary; }
  /// Bounding rectangle of the vertex coordinates (lattice kinds only).
  const Rect& frame() const { return frame_; }

  const std::vector<Point>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const Edge& edge(int e) const { return edges_[static_cast<std::size_t>(e)]; }
  Point point(int v) const { return vertices_[static_cast<std::size_t>(v)]; }

  bool is_boundary(int v) const { return boundaryFlag_[static_cast<std::size_t>(v)] != 0; }
  const std::vector<int>& boundary() const { return boundary_; }

  std::span<const int> incident(int v) const {
    const auto b = static_cast<std::size_t>(incidentStart_[static_cast<std::size_t>(v)]);
    const auto e = static_cast<std::size_t>(incidentStart_[static_cast<std::size_t>(v) + 1]);
    return {incident_.data() + b, e - b};
  }
  int other_end(int e, int v) const {
    const Edge& ed = edge(e);
    return ed.u == v ? ed.v : ed.u;
  }
  int degree(int v) const { return static_cast<int>(incident(v).size()); }
  int max_degree() const;

  /// Vertex at integer coordinates, if it lies in this graph's rectangle.
  std::optional<int> vertex_at(Point p) const;
  /// Edge joining two vertices, if present.
  std::optional<int> edge_between(int a, int b) const;

 private:
  LatticeGraph() = default;
  void finalize();

  GraphKind kind_ = GraphKind::Arbitrary;
  Rect frame_{};
  std::vector<Point> vertices_;
  std::vector<Edge> edges_;
  std::vector<int> boundary_;
  std::vector<std::uint8_t> boundaryFlag_;
  std::vector<int> incidentStart_;
  std::vector<int> incident_;
};

/// Union-find over vertex indices, with a live cluster count.
class ClusterPartition {
 public:
  ClusterPartition() = default;
  explicit ClusterPartition(int n) { reset(n); }

  void reset(int n);
  int find(int v);
  /// Returns true if two distinct clusters were merged.
  bool unite(int a, int b);
  bool connected(int a, int b) { return find(a) == find(b); }
  int cluster_count() const { return count_; }
  int size() const { return static_cast<int>(parent_.size()); }
  /// Root label of every vertex.
  std::vector<int> labels();

 private:
  std::vector<int> parent_;
  std::vector<std::uint8_t> rank_;
  int count_ = 0;
};

/// Open clusters of omega. Under wired bc the boundary is merged first, so
/// the count is k(omega, Lambda) with the boundary cluster counted once.
ClusterPartition clusters(const LatticeGraph& g, const EdgeConfig& omega, Boundary bc);

/// Cluster count for a configuration packed in a bitmask (edge e = bit e).
int cluster_count(const LatticeGraph& g, std::uint64_t openMask, Boundary bc,
                  ClusterPartition& scratch);

enum class Direction : std::uint8_t { LeftRight, TopBottom };
enum class PathMode : std::uint8_t { Open, Plus, MinusStar };

/// Crossing of `window` (defaults to the graph frame) between its two
/// opposite sides, using only vertices inside the window.
bool has_crossing(const LatticeGraph& g, const EdgeConfig& omega, Direction dir,
                  std::optional<Rect> window = std::nullopt);
bool has_crossing(const LatticeGraph& g, const SpinConfig& sigma, Direction dir, PathMode mode,
                  std::optional<Rect> window = std::nullopt);

/// Whether the cluster of x (open bonds, + sites, or - sites under
/// 8-neighbour adjacency) reaches sup-distance r from x inside the graph.
bool radius_reached(const LatticeGraph& g, const EdgeConfig& omega, int x, int r);
bool radius_reached(const LatticeGraph& g, const SpinConfig& sigma, int x, int r, PathMode mode);

/// Vertices of the open cluster containing x.
std::vector<int> open_cluster(const LatticeGraph& g, const EdgeConfig& omega, int x);

/// Planar dual of a Box(k,m) for the left-right crossing problem.
///
/// The dual is materialized as Box(k+1,m+1) with integer coordinate (i,j)
/// standing for the face centre (i-1/2, j-1/2). Its frame vertices represent
/// the outer face, so the dual is used with wired bc. Each primal edge is
/// paired with the dual edge crossing it; dual edges joining two frame
/// vertices cross no primal edge and are unpaired. A left-right primal
/// crossing exists iff no top-bottom dual crossing of `crossingWindow`
/// exists; that window is congruent to Box(k-1,m+1).
struct DualBox {
  LatticeGraph graph;
  std::vector<int> primalToDual;  ///< indexed by primal edge
  std::vector<int> dualToPrimal;  ///< indexed by dual edge, -1 if unpaired
  Rect crossingWindow;
};

DualBox dual_box(const LatticeGraph& primal);

/// omega_d(e_d) = 1 - omega(e); unpaired dual edges are open.
EdgeConfig dual_config(const EdgeConfig& omega, const DualBox& dual);
/// Inverse of dual_config on the paired edges.
EdgeConfig primal_config(const EdgeConfig& omegaDual, const DualBox& dual);

/// Edges whose endpoints both lie on the boundary. Under wired bc these
/// never change a cluster count.
std::vector<int> boundary_boundary_edges(const LatticeGraph& g);

}  // namespace rclab
