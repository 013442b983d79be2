#include "rclab/events.hpp"

#include <stdexcept>

namespace rclab {

Event Event::crossing(Direction dir, PathMode mode, std::optional<Rect> window) {
  Event ev(Kind::Crossing);
  ev.dir_ = dir;
  ev.mode_ = mode;
  ev.window_ = window;
  ev.increasing_ = mode != PathMode::MinusStar;
  return ev;
}

Event Event::radius(int x, int r, PathMode mode) {
  Event ev(Kind::Radius);
  ev.x_ = x;
  ev.r_ = r;
  ev.mode_ = mode;
  ev.increasing_ = mode != PathMode::MinusStar;
  return ev;
}

Event Event::edge_open(int e) {
  Event ev(Kind::EdgeOpen);
  ev.x_ = e;
  return ev;
}

Event Event::all_open(std::vector<int> edges) {
  Event ev(Kind::AllEdgesOpen);
  ev.elements_ = std::move(edges);
  return ev;
}

Event Event::vertex_plus(int x) {
  Event ev(Kind::VertexPlus);
  ev.x_ = x;
  return ev;
}

Event Event::custom_edges(std::function<bool(const EdgeConfig&)> fn, bool increasing, std::string name) {
  Event ev(Kind::CustomEdges);
  ev.edgeFn_ = std::move(fn);
  ev.increasing_ = increasing;
  ev.name_ = std::move(name);
  return ev;
}

Event Event::custom_spins(std::function<bool(const SpinConfig&)> fn, bool increasing, std::string name) {
  Event ev(Kind::CustomSpins);
  ev.spinFn_ = std::move(fn);
  ev.increasing_ = increasing;
  ev.name_ = std::move(name);
  return ev;
}

bool Event::on_spins() const {
  switch (kind_) {
    case Kind::VertexPlus:
    case Kind::CustomSpins:
      return true;
    case Kind::Crossing:
    case Kind::Radius:
      return mode_ != PathMode::Open;
    default:
      return false;
  }
}

std::string Event::describe() const {
  const char* d = dir_ == Direction::LeftRight ? "LR" : "TB";
  const char* m = mode_ == PathMode::Open ? "open" : mode_ == PathMode::Plus ? "plus" : "minus*";
  switch (kind_) {
    case Kind::All: return "all";
    case Kind::Crossing: return std::string(m) + " " + d + " crossing";
    case Kind::Radius: return std::string(m) + " radius " + std::to_string(r_) + " from " + std::to_string(x_);
    case Kind::EdgeOpen: return "edge " + std::to_string(x_) + " open";
    case Kind::AllEdgesOpen: return "all of " + std::to_string(elements_.size()) + " edges open";
    case Kind::VertexPlus: return "vertex " + std::to_string(x_) + " plus";
    default: return name_;
  }
}

bool Event::operator()(const LatticeGraph& g, const EdgeConfig& omega) const {
  switch (kind_) {
    case Kind::All: return true;
    case Kind::Crossing:
      if (mode_ != PathMode::Open) break;
      return has_crossing(g, omega, dir_, window_);
    case Kind::Radius:
      if (mode_ != PathMode::Open) break;
      return radius_reached(g, omega, x_, r_);
    case Kind::EdgeOpen: return omega.open(x_);
    case Kind::AllEdgesOpen:
      for (int e : elements_)
        if (!omega.open(e)) return false;
      return true;
    case Kind::CustomEdges: return edgeFn_(omega);
    default: break;
  }
  throw std::invalid_argument("event '" + describe() + "' is not defined on bond configurations");
}

bool Event::operator()(const LatticeGraph& g, const SpinConfig& sigma) const {
  switch (kind_) {
    case Kind::All: return true;
    case Kind::Crossing:
      if (mode_ == PathMode::Open) break;
      return has_crossing(g, sigma, dir_, mode_, window_);
    case Kind::Radius:
      if (mode_ == PathMode::Open) break;
      return radius_reached(g, sigma, x_, r_, mode_);
    case Kind::VertexPlus: return sigma.plus(x_);
    case Kind::CustomSpins: return spinFn_(sigma);
    default: break;
  }
  throw std::invalid_argument("event '" + describe() + "' is not defined on spin configurations");
}

}  // namespace rclab
