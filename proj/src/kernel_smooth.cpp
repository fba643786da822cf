#include "edgeden/kernel_smooth.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Dense>

namespace edgeden {

double kernel_weight(const Ellipse& ellipse, Vec2 q, KernelShape shape) {
  const double r2 = ellipse.radius_sq(q);
  if (r2 > 1.0) return 0.0;
  switch (shape) {
    case KernelShape::epanechnikov:
      return std::max(0.0, 1.0 - r2);
    case KernelShape::truncated_gaussian:
      return std::exp(-0.5 * r2);
  }
  return 0.0;
}

namespace {

constexpr int basis_size(int order) { return order == 0 ? 1 : order == 1 ? 3 : 6; }

// Weighted moments sum w x^i y^j (i + j <= 4) and sum w z x^i y^j (i + j <= 2)
// in scaled offsets. Every normal matrix of order <= 2 is assembled from these.
struct Moments {
  double m[5][5] = {};
  double r[3][3] = {};
  int count = 0;

  void add(double x, double y, double w, double z) {
    const double wx = w * x, wy = w * y;
    const double wx2 = wx * x, wxy = wx * y, wy2 = wy * y;
    const double wx3 = wx2 * x, wx2y = wx2 * y, wxy2 = wxy * y, wy3 = wy2 * y;
    m[0][0] += w;
    m[1][0] += wx;
    m[0][1] += wy;
    m[2][0] += wx2;
    m[1][1] += wxy;
    m[0][2] += wy2;
    m[3][0] += wx3;
    m[2][1] += wx2y;
    m[1][2] += wxy2;
    m[0][3] += wy3;
    m[4][0] += wx3 * x;
    m[3][1] += wx3 * y;
    m[2][2] += wx2y * y;
    m[1][3] += wxy2 * y;
    m[0][4] += wy3 * y;
    r[0][0] += w * z;
    r[1][0] += wx * z;
    r[0][1] += wy * z;
    r[2][0] += wx2 * z;
    r[1][1] += wxy * z;
    r[0][2] += wy2 * z;
    ++count;
  }
};

// Exponents (i, j) of the basis functions 1, x, y, x^2, xy, y^2.
constexpr int kPowX[6] = {0, 1, 0, 2, 1, 0};
constexpr int kPowY[6] = {0, 0, 1, 0, 1, 2};

// Solves the order-P normal equations; false when the system is singular or
// its estimated condition number exceeds the gate.
template <int P>
bool solve_normal(const Moments& mom, double* coef) {
  Eigen::Matrix<double, P, P> normal;
  Eigen::Matrix<double, P, 1> rhs;
  for (int i = 0; i < P; ++i) {
    rhs(i) = mom.r[kPowX[i]][kPowY[i]];
    for (int j = 0; j < P; ++j) normal(i, j) = mom.m[kPowX[i] + kPowX[j]][kPowY[i] + kPowY[j]];
  }
  const Eigen::LDLT<Eigen::Matrix<double, P, P>> ldlt(normal);
  if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) return false;
  // Zero pivots are pseudo-inverted by the solver, so rcond alone misses exact singularity.
  const auto pivots = ldlt.vectorD();
  if (!(pivots.minCoeff() * kMaxNormalCondition > pivots.maxCoeff())) return false;
  const double rcond = ldlt.rcond();
  if (!(rcond > 0.0) || 1.0 / rcond > kMaxNormalCondition) return false;
  const Eigen::Matrix<double, P, 1> x = ldlt.solve(rhs);
  if (!x.allFinite()) return false;
  for (int i = 0; i < P; ++i) coef[i] = x(i);
  return true;
}

}  // namespace

FitResult local_poly_fit(const ImageGrid& img, const Ellipse& ellipse, const KernelSpec& spec) {
  if (spec.order < 0 || spec.order > 2) throw InvalidArgument("polynomial order must be 0, 1 or 2");
  if (!(ellipse.a > 0.0 && ellipse.b > 0.0)) throw InvalidArgument("ellipse axes must be positive");

  const double reach = std::max(ellipse.a, ellipse.b);
  const double scale = reach;
  const int r0 = std::max(0, static_cast<int>(std::floor(ellipse.center.y - reach)));
  const int r1 = std::min(img.height() - 1, static_cast<int>(std::ceil(ellipse.center.y + reach)));
  const int c0 = std::max(0, static_cast<int>(std::floor(ellipse.center.x - reach)));
  const int c1 = std::min(img.width() - 1, static_cast<int>(std::ceil(ellipse.center.x + reach)));

  const Ellipse::QuadForm f = ellipse.quad_form();
  const bool gaussian = spec.shape == KernelShape::truncated_gaussian;

  Moments mom;
  for (int r = r0; r <= r1; ++r) {
    const double dy = r - ellipse.center.y;
    for (int c = c0; c <= c1; ++c) {
      const double dx = c - ellipse.center.x;
      const double r2 = f.xx * dx * dx + f.xy * dx * dy + f.yy * dy * dy;
      if (r2 > 1.0) continue;
      const double w = gaussian ? std::exp(-0.5 * r2) : 1.0 - r2;
      if (w <= 0.0) continue;
      mom.add(dx / scale, dy / scale, w, img(r, c));
    }
  }
  if (mom.count == 0) throw DataError("kernel support contains no pixels with positive weight");

  FitResult result;
  result.n_points = mom.count;

  for (int order = spec.order; order >= 1; --order) {
    if (result.n_points < basis_size(order)) continue;
    double coef[6];
    if (!(order == 2 ? solve_normal<6>(mom, coef) : solve_normal<3>(mom, coef))) continue;
    result.theta0 = coef[0];
    result.theta1 = {coef[1] / scale, coef[2] / scale};
    if (order == 2) {
      const double s2 = scale * scale;
      result.theta2 = {coef[3] / s2, coef[4] / s2, coef[5] / s2};
    }
    result.effective_order = order;
    return result;
  }

  result.theta0 = mom.r[0][0] / mom.m[0][0];
  result.effective_order = 0;
  return result;
}

}  // namespace edgeden
