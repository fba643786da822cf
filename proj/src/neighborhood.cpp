#include "edgeden/neighborhood.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace edgeden {

namespace {

int floor_div(int a, int b) {
  int q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t dist2(Pixel a, Pixel b) {
  const std::int64_t dr = a.row - b.row, dc = a.col - b.col;
  return dr * dr + dc * dc;
}

struct Best {
  bool found = false;
  std::int64_t d2 = 0;
  Pixel pixel;

  void offer(Pixel q, std::int64_t qd2) {
    if (!found || qd2 < d2 || (qd2 == d2 && q < pixel)) {
      found = true;
      d2 = qd2;
      pixel = q;
    }
  }
  std::optional<EdgeHit> hit() const {
    if (!found) return std::nullopt;
    return EdgeHit{pixel, std::sqrt(static_cast<double>(d2))};
  }
};

}  // namespace

EdgeDistanceIndex::EdgeDistanceIndex(std::vector<Pixel> edges, int cell_size)
    : points_(std::move(edges)), cell_(std::max(cell_size, 1)) {
  if (points_.empty()) return;
  int max_row = points_[0].row, max_col = points_[0].col;
  min_row_ = max_row;
  min_col_ = max_col;
  for (const Pixel& p : points_) {
    min_row_ = std::min(min_row_, p.row);
    min_col_ = std::min(min_col_, p.col);
    max_row = std::max(max_row, p.row);
    max_col = std::max(max_col, p.col);
  }
  cells_x_ = (max_col - min_col_) / cell_ + 1;
  cells_y_ = (max_row - min_row_) / cell_ + 1;
  const std::size_t ncells = static_cast<std::size_t>(cells_x_) * cells_y_;

  auto cell_of = [&](const Pixel& p) {
    return static_cast<std::size_t>((p.row - min_row_) / cell_) * cells_x_ + (p.col - min_col_) / cell_;
  };
  cell_start_.assign(ncells + 1, 0);
  for (const Pixel& p : points_) ++cell_start_[cell_of(p) + 1];
  for (std::size_t i = 0; i < ncells; ++i) cell_start_[i + 1] += cell_start_[i];
  cell_items_.resize(points_.size());
  std::vector<std::uint32_t> fill(cell_start_.begin(), cell_start_.end() - 1);
  for (std::uint32_t i = 0; i < points_.size(); ++i) cell_items_[fill[cell_of(points_[i])]++] = i;
}

template <typename Visit>
void EdgeDistanceIndex::scan_cell(int cx, int cy, Visit&& visit) const {
  if (cx < 0 || cy < 0 || cx >= cells_x_ || cy >= cells_y_) return;
  const std::size_t cell = static_cast<std::size_t>(cy) * cells_x_ + cx;
  for (std::uint32_t i = cell_start_[cell]; i < cell_start_[cell + 1]; ++i) visit(points_[cell_items_[i]]);
}

std::optional<EdgeHit> EdgeDistanceIndex::nearest(Pixel p) const {
  if (empty()) return std::nullopt;
  const int qx = floor_div(p.col - min_col_, cell_);
  const int qy = floor_div(p.row - min_row_, cell_);
  // Beyond this ring no cell of the grid remains.
  const int last_ring = std::max({std::abs(qx), std::abs(qy), std::abs(cells_x_ - 1 - qx),
                                  std::abs(cells_y_ - 1 - qy)});
  Best best;
  auto visit = [&](const Pixel& q) { best.offer(q, dist2(p, q)); };
  for (int r = 0; r <= last_ring; ++r) {
    if (r == 0) {
      scan_cell(qx, qy, visit);
    } else {
      for (int dx = -r; dx <= r; ++dx) {
        scan_cell(qx + dx, qy - r, visit);
        scan_cell(qx + dx, qy + r, visit);
      }
      for (int dy = -r + 1; dy <= r - 1; ++dy) {
        scan_cell(qx - r, qy + dy, visit);
        scan_cell(qx + r, qy + dy, visit);
      }
    }
    // Cells in ring r+1 and beyond are at least r*cell away.
    const std::int64_t bound = static_cast<std::int64_t>(r) * cell_;
    if (best.found && best.d2 < bound * bound) break;
  }
  return best.hit();
}

std::optional<EdgeHit> EdgeDistanceIndex::nearest_in_strip(Pixel p, Pixel toward,
                                                           double radius) const {
  if (empty() || !(radius >= 0.0)) return std::nullopt;
  const std::int64_t ur = toward.row - p.row, uc = toward.col - p.col;
  const std::int64_t half_width = ur * ur + uc * uc;  // |PP1|^2
  const double r2_limit = radius * radius;
  const int reach = static_cast<int>(std::floor(std::min(radius, 1.0e6)));

  const int cx0 = floor_div(p.col - reach - min_col_, cell_);
  const int cx1 = floor_div(p.col + reach - min_col_, cell_);
  const int cy0 = floor_div(p.row - reach - min_row_, cell_);
  const int cy1 = floor_div(p.row + reach - min_row_, cell_);
  Best best;
  for (int cy = std::max(cy0, 0); cy <= std::min(cy1, cells_y_ - 1); ++cy) {
    for (int cx = std::max(cx0, 0); cx <= std::min(cx1, cells_x_ - 1); ++cx) {
      scan_cell(cx, cy, [&](const Pixel& q) {
        if (q == toward) return;
        const std::int64_t d2 = dist2(p, q);
        if (static_cast<double>(d2) > r2_limit) return;
        const std::int64_t proj = (q.row - p.row) * ur + (q.col - p.col) * uc;
        if (std::abs(proj) >= half_width) return;
        best.offer(q, d2);
      });
    }
  }
  return best.hit();
}

EdgeDistanceIndex build_index(const EdgeMap& edges) {
  std::vector<Pixel> pts;
  for (int r = 0; r < edges.flags.height(); ++r)
    for (int c = 0; c < edges.flags.width(); ++c)
      if (edges.flags(r, c)) pts.push_back({r, c});
  return EdgeDistanceIndex(std::move(pts));
}

std::optional<EdgeHit> nearest_edge(const EdgeDistanceIndex& index, Pixel p) {
  return index.nearest(p);
}

std::optional<EdgeHit> second_point(const EdgeDistanceIndex& index, Pixel p, Pixel p1,
                                    double max_axis, double gamma) {
  // With P1 == P the strip has zero width and is empty.
  if (p1 == p) return std::nullopt;
  return index.nearest_in_strip(p, p1, max_axis + gamma);
}

Ellipse::QuadForm Ellipse::quad_form() const {
  const double ib2 = 1.0 / (b * b), ia2 = 1.0 / (a * a);
  const Vec2 u = u_minor;
  return {u.x * u.x * ib2 + u.y * u.y * ia2, 2.0 * u.x * u.y * (ib2 - ia2), u.y * u.y * ib2 + u.x * u.x * ia2};
}

double Ellipse::radius_sq(Vec2 q) const {
  const QuadForm f = quad_form();
  const double dx = q.x - center.x, dy = q.y - center.y;
  return f.xx * dx * dx + f.xy * dx * dy + f.yy * dy * dy;
}

Ellipse make_circle(Vec2 center, double radius) {
  if (!(radius > 0.0)) throw InvalidArgument("circle radius must be positive");
  return Ellipse{center, radius, radius, {1.0, 0.0}};
}

Ellipse build_ellipse(Pixel p, double d1, std::optional<double> d2, Vec2 u_minor, double gamma,
                      double max_axis, AxisReading reading) {
  if (!(gamma > 0.0) || !(max_axis > 0.0)) throw InvalidArgument("gamma and max_axis must be positive");
  if (d1 < gamma) throw InvalidArgument("ellipse requires |PP1| >= gamma");
  const double norm = std::hypot(u_minor.x, u_minor.y);
  if (!(norm > 0.0)) throw InvalidArgument("minor-axis direction must be nonzero");
  u_minor = {u_minor.x / norm, u_minor.y / norm};

  const double divisor = reading == AxisReading::full ? 2.0 : 1.0;
  auto semi = [&](double d) { return std::max(std::min(d - gamma, max_axis) / divisor, 1.0); };
  double b = semi(d1);
  double a = d2 ? semi(*d2) : std::max(max_axis / divisor, 1.0);

  Ellipse e{to_vec(p), a, b, u_minor};
  if (a < b) {
    e.a = b;
    e.b = a;
    e.u_minor = {-u_minor.y, u_minor.x};
  }
  return e;
}

}  // namespace edgeden
