#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "edgeden/cluster_smooth.hpp"
#include "edgeden/edge_detect.hpp"
#include "edgeden/image.hpp"
#include "edgeden/kernel_smooth.hpp"
#include "edgeden/neighborhood.hpp"

namespace edgeden {

enum class Mode {
  integrated,    ///< edge-driven dispatch between kernel and cluster smoothing
  cluster_only,  ///< cluster smoothing at every pixel
  kernel_only,   ///< kernel smoothing on a max_axis circle at every pixel
  box3,          ///< plain 3x3 mean, a reference baseline
};

std::string mode_name(Mode mode);
Mode parse_mode(const std::string& name);

struct DenoiseParams {
  int k = 2;
  double alpha = 0.05;
  double gamma = 3.0;     ///< dispatch distance and ellipse clearance (pixels)
  double max_axis = 6.0;  ///< cap on ellipse semi-axes (pixels)
  KernelSpec kernel;
  ClusterParams cluster;  ///< cluster.sigma_hat is overwritten with the estimated noise level
  Mode mode = Mode::integrated;
  AxisReading axis_reading = AxisReading::semi;
  std::optional<double> sigma_override;
  int threads = 1;  ///< 0 = hardware concurrency; output does not depend on it

  void validate() const;
};

/// Defaults for an n x n image: max_axis 6 / gamma 3 below 100 pixels,
/// 10 / 5 otherwise; the clustering radius follows gamma.
DenoiseParams default_params(int n);

enum class Branch : int { kernel = 0, cluster = 1, box = 2 };

/// Per-pixel diagnostics. Distances are NaN when no such edge pixel exists;
/// axes are NaN on the cluster and box branches.
struct PixelTrace {
  Branch branch = Branch::kernel;
  double d1 = 0.0;
  double d2 = 0.0;
  double a = 0.0;
  double b = 0.0;
  int effective_order = -1;
};

struct DenoiseResult {
  ImageGrid image;
  std::optional<EdgeMap> edges;  ///< present in integrated mode
  double sigma_hat = 0.0;
  Grid<PixelTrace> trace;
};

DenoiseResult denoise_traced(const ImageGrid& img, const DenoiseParams& params);
ImageGrid denoise(const ImageGrid& img, const DenoiseParams& params);

/// Plain 3x3 mean with the window clipped at the borders.
ImageGrid box3(const ImageGrid& img);

/// CSV with header row,col,branch,d1,d2,a,b,effective_order.
void write_trace_csv(const Grid<PixelTrace>& trace, std::ostream& out);

}  // namespace edgeden
