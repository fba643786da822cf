#pragma once

#include <cstdint>
#include <optional>

#include "edgeden/image.hpp"

namespace edgeden {

/// Local least-squares plane z ~ b0 + b1 (x - x_i) + b2 (y - y_j), with x
/// along columns and y along rows, both in normalized units (1/n per pixel).
/// (b1, b2) is the estimated gradient.
struct PlaneFit {
  double b0 = 0.0;
  double b1 = 0.0;
  double b2 = 0.0;
};

struct EdgeDetectParams {
  int k = 2;            ///< window half-width in pixels
  double alpha = 0.05;  ///< significance level of the chi-square test
  std::optional<double> sigma_override;

  void validate(const ImageGrid& img) const;
};

struct EdgeMap {
  Grid<std::uint8_t> flags;  ///< 1 = edge pixel
  Grid<double> delta;        ///< gradient-difference statistic, 0 in the border band
  double threshold = 0.0;
  double sigma_hat = 0.0;
  int k = 0;

  bool is_edge(Pixel p) const { return flags[p] != 0; }
  std::size_t count() const;
};

/// Least-squares plane over the (2k+1)^2 window centered at `center`.
/// Throws InvalidArgument if the window overruns the image.
PlaneFit fit_local_plane(const ImageGrid& img, Pixel center, int k);

/// Plane fits for every pixel whose window fits in the image; other entries
/// are left zero.
Grid<PlaneFit> fit_all_planes(const ImageGrid& img, int k, int threads = 1);

/// Robust noise level from horizontal first differences:
/// MAD(d) / (0.6745 * sqrt(2)).
double estimate_sigma(const ImageGrid& img);

/// (1 - alpha) quantile of chi-square with two degrees of freedom, -2 ln(alpha).
double chi2_quantile_2df(double alpha);

/// Minimum distance between the gradient at p and the gradients at the two
/// pixels 2k+1 steps away along +/- the gradient direction. Neighbors whose
/// windows overrun the image are skipped; 0 if both are skipped.
double delta_statistic(const Grid<PlaneFit>& fits, Pixel p, int k);

/// Threshold sigma * sqrt(chi2 / (k * Sx^2)) with Sx^2 = k(k+1) / (3 n^2).
double edge_threshold(double sigma, double alpha, int k, int n);

EdgeMap detect_edges(const ImageGrid& img, const EdgeDetectParams& params, int threads = 1);

/// 255 for edge pixels, 0 otherwise.
ImageGrid edge_mask(const EdgeMap& edges);

}  // namespace edgeden
