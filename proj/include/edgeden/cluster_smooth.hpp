#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "edgeden/image.hpp"

namespace edgeden {

/// Two-group split of a set of intensities at threshold s: values <= s go
/// to the low group. Member lists index into the input sequence.
struct ClusterSplit {
  double threshold = 0.0;
  std::vector<std::size_t> members_low;
  std::vector<std::size_t> members_high;
  double mean_low = 0.0;
  double mean_high = 0.0;
  double t_value = 0.0;  ///< +infinity for a perfect two-level split

  bool degenerate() const { return members_high.empty(); }
};

struct ClusterParams {
  double h_n = 3.0;      ///< clustering neighborhood radius (pixels)
  int patch_radius = 1;  ///< patch half-size for the similarity weights
  double b_n = 1.0;      ///< weight bandwidth multiplier
  double sigma_hat = 0.0;

  void validate() const;
};

/// Between-group over within-group sum of squares for threshold s.
/// Returns +infinity when the within-group sum is zero.
double variance_ratio(std::span<const double> values, double s);

/// Relative tolerance under which two ratios count as tied; ties go to
/// the smaller threshold.
inline constexpr double kRatioTieTolerance = 1e-12;

/// Threshold maximizing variance_ratio over the midpoints of consecutive
/// distinct values. All-equal input yields a degenerate split (t_value 0).
ClusterSplit optimal_threshold(std::span<const double> values);

/// Patch-similarity weight between the patches around q and p, computed on
/// the offsets that are inside the image for both patches.
double patch_weight(const ImageGrid& img, Pixel q, Pixel p, const ClusterParams& params);

/// Pixels within Euclidean distance h_n of p, clipped to the image, in
/// row-major order.
std::vector<Pixel> disk_neighborhood(const ImageGrid& img, Pixel p, double radius);

/// Patch-weighted mean over the cluster of p's neighborhood that contains
/// z(p); the whole neighborhood when the split is degenerate.
double cluster_smooth_pixel(const ImageGrid& img, Pixel p, const ClusterParams& params);

}  // namespace edgeden
