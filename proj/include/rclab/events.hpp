#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "rclab/graph.hpp"

namespace rclab {

/// A predicate on bond or spin configurations of a fixed graph.
class Event {
 public:
  enum class Kind { All, Crossing, Radius, EdgeOpen, AllEdgesOpen, VertexPlus, CustomEdges, CustomSpins };

  static Event all() { return Event(Kind::All); }
  static Event crossing(Direction dir, PathMode mode = PathMode::Open, std::optional<Rect> window = std::nullopt);
  static Event radius(int x, int r, PathMode mode = PathMode::Open);
  static Event edge_open(int e);
  static Event all_open(std::vector<int> edges);
  static Event vertex_plus(int x);
  static Event custom_edges(std::function<bool(const EdgeConfig&)> fn, bool increasing, std::string name = "custom");
  static Event custom_spins(std::function<bool(const SpinConfig&)> fn, bool increasing, std::string name = "custom");

  Kind kind() const { return kind_; }
  /// Spin events are evaluated on SpinConfig, the rest on EdgeConfig.
  bool on_spins() const;
  /// Whether the predicate is non-decreasing in the configuration.
  bool increasing() const { return increasing_; }
  std::string describe() const;

  bool operator()(const LatticeGraph& g, const EdgeConfig& omega) const;
  bool operator()(const LatticeGraph& g, const SpinConfig& sigma) const;

 private:
  explicit Event(Kind k) : kind_(k) {}

  Kind kind_;
  Direction dir_ = Direction::LeftRight;
  PathMode mode_ = PathMode::Open;
  std::optional<Rect> window_;
  int x_ = 0;
  int r_ = 0;
  std::vector<int> elements_;
  std::function<bool(const EdgeConfig&)> edgeFn_;
  std::function<bool(const SpinConfig&)> spinFn_;
  bool increasing_ = true;
  std::string name_;
};

}  // namespace rclab
