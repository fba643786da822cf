#pragma once

#include <array>

#include "edgeden/image.hpp"
#include "edgeden/neighborhood.hpp"

namespace edgeden {

enum class KernelShape { epanechnikov, truncated_gaussian };

struct KernelSpec {
  KernelShape shape = KernelShape::epanechnikov;
  int order = 2;  ///< Taylor order of the local polynomial, 0..2
};

/// Local polynomial estimate at the ellipse center. Coefficients are in
/// pixel units: z ~ theta0 + theta1 . (dx, dy) + theta2 . (dx^2, dx dy, dy^2)
/// with dx along columns and dy along rows.
struct FitResult {
  double theta0 = 0.0;
  std::array<double, 2> theta1{};
  std::array<double, 3> theta2{};
  int effective_order = 0;
  int n_points = 0;
};

/// Kernel weight of pixel q; zero outside the ellipse.
double kernel_weight(const Ellipse& ellipse, Vec2 q, KernelShape shape = KernelShape::epanechnikov);

/// Weighted least-squares local polynomial fit over the pixels of the
/// ellipse that fall inside the image. Falls back to lower orders when the
/// weighted design is too ill-conditioned (or has too few points).
FitResult local_poly_fit(const ImageGrid& img, const Ellipse& ellipse, const KernelSpec& spec);

/// Condition-number gate applied to the weighted normal matrix.
inline constexpr double kMaxNormalCondition = 1e8;

}  // namespace edgeden
