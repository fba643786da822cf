#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "edgeden/edge_detect.hpp"
#include "edgeden/image.hpp"

namespace edgeden {

/// Point in pixel coordinates; x runs along columns, y along rows.
struct Vec2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Vec2&, const Vec2&) = default;
};

inline Vec2 to_vec(Pixel p) { return {static_cast<double>(p.col), static_cast<double>(p.row)}; }

struct EdgeHit {
  Pixel pixel;
  double distance = 0.0;
};

/// Exact nearest-edge-pixel queries backed by a uniform bucket grid.
/// Ties are broken by smallest row, then smallest column.
class EdgeDistanceIndex {
 public:
  EdgeDistanceIndex() = default;
  explicit EdgeDistanceIndex(std::vector<Pixel> edges, int cell_size = 8);

  bool empty() const { return points_.empty(); }
  std::size_t size() const { return points_.size(); }
  const std::vector<Pixel>& pixels() const { return points_; }

  std::optional<EdgeHit> nearest(Pixel p) const;

  /// Nearest edge pixel to p (other than `exclude`) that lies in the band
  /// |(q - p) . (toward - p)| < |toward - p|^2 and within `radius` of p.
  std::optional<EdgeHit> nearest_in_strip(Pixel p, Pixel toward, double radius) const;

 private:
  template <typename Visit>
  void scan_cell(int cx, int cy, Visit&& visit) const;

  std::vector<Pixel> points_;
  std::vector<std::uint32_t> cell_start_;  // CSR offsets, size cells + 1
  std::vector<std::uint32_t> cell_items_;
  int cell_ = 8;
  int min_row_ = 0, min_col_ = 0;
  int cells_x_ = 0, cells_y_ = 0;
};

EdgeDistanceIndex build_index(const EdgeMap& edges);

/// Step 1: the nearest edge pixel P1 and |PP1|.
std::optional<EdgeHit> nearest_edge(const EdgeDistanceIndex& index, Pixel p);

/// Step 2: the nearest edge pixel P2 in the strip through P perpendicular to
/// the line M-P1 (M the reflection of P1 through P), of half-width |PP1|,
/// excluding P1 and searched only out to max_axis + gamma.
std::optional<EdgeHit> second_point(const EdgeDistanceIndex& index, Pixel p, Pixel p1,
                                    double max_axis, double gamma);

/// Adaptive elliptical neighborhood. `b` is the semi-axis along u_minor
/// (pointing from the center toward P1), `a` the semi-axis perpendicular
/// to it.
struct Ellipse {
  Vec2 center;
  double a = 1.0;
  double b = 1.0;
  Vec2 u_minor{1.0, 0.0};

  /// Coefficients of r^2 = xx dx^2 + xy dx dy + yy dy^2 for offsets from
  /// the center.
  struct QuadForm {
    double xx, xy, yy;
  };

  Vec2 u_major() const { return {-u_minor.y, u_minor.x}; }
  QuadForm quad_form() const;
  /// Normalized squared radius; q is inside iff this is <= 1.
  double radius_sq(Vec2 q) const;
  bool contains(Vec2 q) const { return radius_sq(q) <= 1.0; }
};

Ellipse make_circle(Vec2 center, double radius);

/// How "axis of length |PP_i| - gamma" is read.
enum class AxisReading {
  semi,  ///< |PP_i| - gamma is the semi-axis
  full,  ///< |PP_i| - gamma is the full axis, semi-axis is half of it
};

/// Semi-axes are min(d - gamma, max_axis) (halved for AxisReading::full) and
/// never below one pixel. Requires d1 >= gamma.
Ellipse build_ellipse(Pixel p, double d1, std::optional<double> d2, Vec2 u_minor, double gamma,
                      double max_axis, AxisReading reading = AxisReading::semi);

}  // namespace edgeden
