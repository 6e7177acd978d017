#pragma once

// One-hot tilings of a bounded plane (place-cell and object-vector-cell
// modalities) and the small amount of 2-D geometry they need.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace neorl {

struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  constexpr Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
  constexpr Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
  constexpr Vec2 operator*(double s) const { return {x * s, y * s}; }
  constexpr Vec2 operator-() const { return {-x, -y}; }
  constexpr bool operator==(const Vec2&) const = default;

  double norm() const { return std::hypot(x, y); }
  bool finite() const { return std::isfinite(x) && std::isfinite(y); }
};

inline double distance(const Vec2& a, const Vec2& b) { return (a - b).norm(); }

struct Bounds {
  Vec2 min;
  Vec2 max;

  Bounds() : Bounds({0.0, 0.0}, {1.0, 1.0}) {}
  Bounds(Vec2 lo, Vec2 hi) : min(lo), max(hi) {
    if (!lo.finite() || !hi.finite() || !(lo.x < hi.x) || !(lo.y < hi.y)) {
      throw std::invalid_argument("invalid bounds: min must be strictly below max");
    }
  }

  double width() const { return max.x - min.x; }
  double height() const { return max.y - min.y; }
  bool contains(const Vec2& p) const {
    return p.x >= min.x && p.x <= max.x && p.y >= min.y && p.y <= max.y;
  }
  bool operator==(const Bounds&) const = default;

  static Bounds unit() { return {{0.0, 0.0}, {1.0, 1.0}}; }
  // Every relative vector between two points of the unit arena.
  static Bounds relative_unit() { return {{-1.0, -1.0}, {1.0, 1.0}}; }
};

enum class Modality { PC, OVC };

inline const char* to_string(Modality m) { return m == Modality::PC ? "PC" : "OVC"; }

inline Modality modality_from_string(const std::string& s) {
  if (s == "PC" || s == "pc") return Modality::PC;
  if (s == "OVC" || s == "ovc") return Modality::OVC;
  throw std::invalid_argument("unknown modality '" + s + "' (expected PC or OVC)");
}

inline Bounds default_bounds(Modality m) {
  return m == Modality::PC ? Bounds::unit() : Bounds::relative_unit();
}

/// A cell of an N x N one-hot map. `flat` is row * N + col.
struct CellIndex {
  int row = 0;
  int col = 0;
  int flat = 0;

  CellIndex() = default;
  CellIndex(int r, int c, int resolution) : row(r), col(c), flat(r * resolution + c) {}

  static CellIndex from_flat(int flat, int resolution) {
    return {flat / resolution, flat % resolution, resolution};
  }

  bool operator==(const CellIndex& o) const { return flat == o.flat; }
};

/// One-hot NRES layer: an N x N partition of `bounds` into half-open cells.
class NresMap {
 public:
  NresMap(int resolution, Bounds bounds, Modality modality)
      : resolution_(resolution), bounds_(bounds), modality_(modality) {
    if (resolution < 2) throw std::invalid_argument("NRES resolution must be >= 2");
  }

  NresMap(int resolution, Modality modality)
      : NresMap(resolution, default_bounds(modality), modality) {}

  int resolution() const { return resolution_; }
  int cell_count() const { return resolution_ * resolution_; }
  const Bounds& bounds() const { return bounds_; }
  Modality modality() const { return modality_; }

  // Lower edge of column k (x) / row k (y); edge N is the max bound.
  double x_edge(int k) const {
    return k == resolution_ ? bounds_.max.x : bounds_.min.x + bounds_.width() * k / resolution_;
  }
  double y_edge(int k) const {
    return k == resolution_ ? bounds_.max.y : bounds_.min.y + bounds_.height() * k / resolution_;
  }

  /// Receptive field [lo, hi) of a cell. The last row/col also owns its max edge.
  Bounds receptive_field(const CellIndex& c) const {
    return {{x_edge(c.col), y_edge(c.row)}, {x_edge(c.col + 1), y_edge(c.row + 1)}};
  }

  Vec2 center_of(const CellIndex& c) const {
    const Bounds f = receptive_field(c);
    return {(f.min.x + f.max.x) / 2.0, (f.min.y + f.max.y) / 2.0};
  }

  bool operator==(const NresMap&) const = default;

 private:
  int resolution_;
  Bounds bounds_;
  Modality modality_;
};

inline Vec2 clamp_to_bounds(const Vec2& p, const Bounds& b) {
  return {std::clamp(p.x, b.min.x, b.max.x), std::clamp(p.y, b.min.y, b.max.y)};
}

namespace detail {

// Index k with edge(k) <= v < edge(k+1), v == max mapping to N-1. The float
// estimate is corrected against the exact edges receptive_field() reports.
template <typename EdgeFn>
int axis_index(double v, double lo, double span, int n, EdgeFn edge) {
  int k = static_cast<int>(std::floor((v - lo) / span * n));
  k = std::clamp(k, 0, n - 1);
  while (k > 0 && v < edge(k)) --k;
  while (k < n - 1 && v >= edge(k + 1)) ++k;
  return k;
}

}  // namespace detail

/// The unique cell whose receptive field contains `p`.
inline CellIndex cell_index(const Vec2& p, const NresMap& map) {
  if (!p.finite()) throw std::invalid_argument("invalid point");
  const Bounds& b = map.bounds();
  if (!b.contains(p)) throw std::out_of_range("invalid point: outside map bounds (clamp first)");
  const int n = map.resolution();
  const int col = detail::axis_index(p.x, b.min.x, b.width(), n, [&](int k) { return map.x_edge(k); });
  const int row = detail::axis_index(p.y, b.min.y, b.height(), n, [&](int k) { return map.y_edge(k); });
  return {row, col, n};
}

/// Object position relative to self, by plain vector subtraction.
inline Vec2 ovc_vector(const Vec2& obj, const Vec2& self) {
  if (!obj.finite() || !self.finite()) throw std::invalid_argument("invalid point");
  return obj - self;
}

/// Layers of one modality over shared bounds, in strictly increasing resolution.
class ResolutionStack {
 public:
  ResolutionStack() = default;

  explicit ResolutionStack(std::vector<NresMap> layers) : layers_(std::move(layers)) {
    for (std::size_t k = 1; k < layers_.size(); ++k) {
      if (layers_[k].resolution() <= layers_[k - 1].resolution()) {
        throw std::invalid_argument("resolution stack must be strictly increasing");
      }
      if (layers_[k].modality() != layers_[0].modality() || !(layers_[k].bounds() == layers_[0].bounds())) {
        throw std::invalid_argument("resolution stack layers must share modality and bounds");
      }
    }
  }

  static ResolutionStack make(Modality modality, const std::vector<int>& resolutions) {
    return make(modality, resolutions, default_bounds(modality));
  }

  static ResolutionStack make(Modality modality, const std::vector<int>& resolutions, const Bounds& bounds) {
    std::vector<NresMap> layers;
    layers.reserve(resolutions.size());
    for (int n : resolutions) layers.emplace_back(n, bounds, modality);
    return ResolutionStack(std::move(layers));
  }

  const std::vector<NresMap>& layers() const { return layers_; }
  std::size_t size() const { return layers_.size(); }
  bool empty() const { return layers_.empty(); }
  const NresMap& operator[](std::size_t k) const { return layers_[k]; }
  Modality modality() const { return layers_.at(0).modality(); }
  const Bounds& bounds() const { return layers_.at(0).bounds(); }

 private:
  std::vector<NresMap> layers_;
};

/// Encodes one point in every layer of the stack.
inline std::vector<CellIndex> encode(const Vec2& obs_point, const ResolutionStack& stack) {
  if (stack.empty()) throw std::invalid_argument("cannot encode on an empty resolution stack");
  std::vector<CellIndex> cells;
  cells.reserve(stack.size());
  for (const NresMap& layer : stack.layers()) cells.push_back(cell_index(obs_point, layer));
  return cells;
}

/// Primes up to 13: the default multi-resolution layer set.
inline std::vector<int> prime_resolutions() { return {2, 3, 5, 7, 11, 13}; }

}  // namespace neorl
