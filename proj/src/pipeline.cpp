#include "edgeden/pipeline.hpp"

#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>

#include "edgeden/parallel.hpp"

namespace edgeden {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

std::string mode_name(Mode mode) {
  switch (mode) {
    case Mode::integrated:
      return "integrated";
    case Mode::cluster_only:
      return "cluster-only";
    case Mode::kernel_only:
      return "kernel-only";
    case Mode::box3:
      return "box3";
  }
  return "unknown";
}

Mode parse_mode(const std::string& name) {
  if (name == "integrated") return Mode::integrated;
  if (name == "cluster-only") return Mode::cluster_only;
  if (name == "kernel-only") return Mode::kernel_only;
  if (name == "box3") return Mode::box3;
  throw InvalidArgument("unknown mode '" + name + "'");
}

void DenoiseParams::validate() const {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (!(gamma > 0.0) || !(max_axis > 0.0)) throw InvalidArgument("gamma and max_axis must be positive");
  if (!(gamma < max_axis)) throw InvalidArgument("gamma must be smaller than max_axis");
  if (kernel.order < 0 || kernel.order > 2) throw InvalidArgument("polynomial order must be 0, 1 or 2");
  if (threads < 0) throw InvalidArgument("threads must be >= 0");
  if (sigma_override && !(*sigma_override >= 0.0)) throw InvalidArgument("sigma override must be >= 0");
  ClusterParams c = cluster;
  c.sigma_hat = 0.0;
  c.validate();
}

DenoiseParams default_params(int n) {
  if (n < 16) throw InvalidArgument("default_params: n must be >= 16");
  DenoiseParams p;
  const bool small = n < 100;
  p.max_axis = small ? 6.0 : 10.0;
  p.gamma = small ? 3.0 : 5.0;
  p.cluster.h_n = p.gamma;
  p.cluster.patch_radius = 1;
  p.cluster.b_n = 1.0;
  p.k = 2;
  p.alpha = 0.05;
  p.kernel.order = 2;
  return p;
}

ImageGrid box3(const ImageGrid& img) {
  ImageGrid out(img.width(), img.height());
  for (int r = 0; r < img.height(); ++r) {
    for (int c = 0; c < img.width(); ++c) {
      double sum = 0.0;
      int count = 0;
      for (int dr = -1; dr <= 1; ++dr)
        for (int dc = -1; dc <= 1; ++dc)
          if (img.contains(r + dr, c + dc)) {
            sum += img(r + dr, c + dc);
            ++count;
          }
      out(r, c) = sum / count;
    }
  }
  return out;
}

DenoiseResult denoise_traced(const ImageGrid& img, const DenoiseParams& params) {
  params.validate();
  require_finite(img);

  DenoiseResult result;
  result.trace = Grid<PixelTrace>(img.width(), img.height());
  if (params.mode == Mode::box3) {
    result.image = box3(img);
    for (PixelTrace& t : result.trace.values()) t = {Branch::box, kNaN, kNaN, kNaN, kNaN, -1};
    return result;
  }

  // Stage 1: edge map and index (sequential barrier).
  EdgeDistanceIndex index;
  if (params.mode == Mode::integrated) {
    EdgeDetectParams ep{params.k, params.alpha, params.sigma_override};
    result.edges = detect_edges(img, ep, params.threads);
    result.sigma_hat = result.edges->sigma_hat;
    index = build_index(*result.edges);
  } else {
    result.sigma_hat = params.sigma_override ? *params.sigma_override : estimate_sigma(img);
  }
  ClusterParams cluster = params.cluster;
  cluster.sigma_hat = result.sigma_hat;

  // Stage 2: independent per-pixel estimates from the immutable input.
  result.image = ImageGrid(img.width(), img.height());
  const bool use_edges = params.mode == Mode::integrated && !index.empty();
  parallel_for(img.height(), params.threads, [&](int r) {
    for (int c = 0; c < img.width(); ++c) {
      const Pixel p{r, c};
      PixelTrace& t = result.trace[p];
      t = {Branch::kernel, kNaN, kNaN, kNaN, kNaN, -1};

      if (params.mode == Mode::cluster_only) {
        t.branch = Branch::cluster;
        result.image[p] = cluster_smooth_pixel(img, p, cluster);
        continue;
      }

      Ellipse ellipse = make_circle(to_vec(p), params.max_axis);
      if (use_edges) {
        const EdgeHit p1 = *nearest_edge(index, p);
        t.d1 = p1.distance;
        if (p1.distance < params.gamma) {
          t.branch = Branch::cluster;
          result.image[p] = cluster_smooth_pixel(img, p, cluster);
          continue;
        }
        const auto p2 = second_point(index, p, p1.pixel, params.max_axis, params.gamma);
        if (p2) t.d2 = p2->distance;
        const Vec2 toward{static_cast<double>(p1.pixel.col - c), static_cast<double>(p1.pixel.row - r)};
        ellipse = build_ellipse(p, p1.distance, p2 ? std::optional<double>(p2->distance) : std::nullopt,
                                toward, params.gamma, params.max_axis, params.axis_reading);
      }
      const FitResult fit = local_poly_fit(img, ellipse, params.kernel);
      t.a = ellipse.a;
      t.b = ellipse.b;
      t.effective_order = fit.effective_order;
      result.image[p] = fit.theta0;
    }
  });
  return result;
}

ImageGrid denoise(const ImageGrid& img, const DenoiseParams& params) {
  return denoise_traced(img, params).image;
}

void write_trace_csv(const Grid<PixelTrace>& trace, std::ostream& out) {
  auto branch_name = [](Branch b) {
    switch (b) {
      case Branch::kernel:
        return "kernel";
      case Branch::cluster:
        return "cluster";
      case Branch::box:
        return "box";
    }
    return "unknown";
  };
  auto num = [&out](double v) {
    if (!std::isnan(v)) out << std::setprecision(10) << v;
  };
  out << "row,col,branch,d1,d2,a,b,effective_order\n";
  for (int r = 0; r < trace.height(); ++r) {
    for (int c = 0; c < trace.width(); ++c) {
      const PixelTrace& t = trace(r, c);
      out << r << ',' << c << ',' << branch_name(t.branch) << ',';
      num(t.d1);
      out << ',';
      num(t.d2);
      out << ',';
      num(t.a);
      out << ',';
      num(t.b);
      out << ',' << t.effective_order << '\n';
    }
  }
}

}  // namespace edgeden
