#include "edgeden/edge_detect.hpp"

#include <algorithm>
#include <cmath>

#include "edgeden/parallel.hpp"

namespace edgeden {

namespace {

bool window_fits(int width, int height, Pixel p, int k) {
  return p.row - k >= 0 && p.col - k >= 0 && p.row + k < height && p.col + k < width;
}

double median_inplace(std::vector<double>& v) {
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid), v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower = *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

}  // namespace

void EdgeDetectParams::validate(const ImageGrid& img) const {
  if (k < 1) throw InvalidArgument("edge window half-width k must be >= 1");
  if (!(alpha > 0.0 && alpha < 1.0)) throw InvalidArgument("alpha must lie in (0, 1)");
  if (sigma_override && !(*sigma_override >= 0.0 && std::isfinite(*sigma_override)))
    throw InvalidArgument("sigma override must be a finite nonnegative number");
  if (2 * k + 1 > std::min(img.width(), img.height()))
    throw InvalidArgument("edge window 2k+1 is larger than the image");
}

std::size_t EdgeMap::count() const {
  return static_cast<std::size_t>(std::count(flags.values().begin(), flags.values().end(), 1));
}

PlaneFit fit_local_plane(const ImageGrid& img, Pixel center, int k) {
  if (k < 0 || !window_fits(img.width(), img.height(), center, k))
    throw InvalidArgument("plane-fit window overruns the image");
  const double n = unit_side(img);
  double sum = 0.0, sum_x = 0.0, sum_y = 0.0;
  for (int t = -k; t <= k; ++t) {
    for (int s = -k; s <= k; ++s) {
      const double z = img(center.row + t, center.col + s);
      sum += z;
      sum_x += z * s;
      sum_y += z * t;
    }
  }
  const double side = 2.0 * k + 1.0;
  // Sum of squared offsets over the window, in normalized units.
  const double sxx = side * (k * (k + 1.0) * (2.0 * k + 1.0) / 3.0) / (n * n);
  PlaneFit fit;
  fit.b0 = sum / (side * side);
  if (k > 0) {
    fit.b1 = (sum_x / n) / sxx;
    fit.b2 = (sum_y / n) / sxx;
  }
  return fit;
}

Grid<PlaneFit> fit_all_planes(const ImageGrid& img, int k, int threads) {
  Grid<PlaneFit> fits(img.width(), img.height());
  const int rows = img.height() - 2 * k;
  if (rows <= 0 || img.width() - 2 * k <= 0) return fits;
  parallel_for(rows, threads, [&](int i) {
    const int r = i + k;
    for (int c = k; c < img.width() - k; ++c) fits(r, c) = fit_local_plane(img, {r, c}, k);
  });
  return fits;
}

double estimate_sigma(const ImageGrid& img) {
  if (img.width() < 2) throw InvalidArgument("estimate_sigma needs width >= 2");
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(img.width() - 1) * img.height());
  for (int r = 0; r < img.height(); ++r)
    for (int c = 0; c + 1 < img.width(); ++c) d.push_back(img(r, c + 1) - img(r, c));
  const double med = median_inplace(d);
  for (double& v : d) v = std::abs(v - med);
  const double mad = median_inplace(d);
  return mad / (0.6745 * std::sqrt(2.0));
}

double chi2_quantile_2df(double alpha) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InvalidArgument("alpha must lie in (0, 1]");
  // ln(1) is exactly zero, so alpha = 1 yields +0 rather than -0.
  return alpha == 1.0 ? 0.0 : -2.0 * std::log(alpha);
}

double delta_statistic(const Grid<PlaneFit>& fits, Pixel p, int k) {
  const int w = fits.width(), h = fits.height();
  if (!window_fits(w, h, p, k)) return 0.0;
  const PlaneFit& here = fits[p];
  double ux = here.b1, uy = here.b2;
  const double norm = std::hypot(ux, uy);
  if (norm > 0.0) {
    ux /= norm;
    uy /= norm;
  } else {
    ux = 1.0;
    uy = 0.0;
  }
  const double step = 2.0 * k + 1.0;
  const int dc = static_cast<int>(std::lround(step * ux));
  const int dr = static_cast<int>(std::lround(step * uy));

  double best = -1.0;
  for (int sign : {1, -1}) {
    const Pixel q{p.row + sign * dr, p.col + sign * dc};
    if (!window_fits(w, h, q, k)) continue;
    const double dist = std::hypot(here.b1 - fits[q].b1, here.b2 - fits[q].b2);
    best = best < 0.0 ? dist : std::min(best, dist);
  }
  return best < 0.0 ? 0.0 : best;
}

double edge_threshold(double sigma, double alpha, int k, int n) {
  const double sx2 = k * (k + 1.0) / (3.0 * n * static_cast<double>(n));
  return sigma * std::sqrt(chi2_quantile_2df(alpha) / (k * sx2));
}

EdgeMap detect_edges(const ImageGrid& img, const EdgeDetectParams& params, int threads) {
  params.validate(img);
  require_finite(img);
  const int k = params.k;
  const Grid<PlaneFit> fits = fit_all_planes(img, k, threads);

  EdgeMap map;
  map.k = k;
  map.flags = Grid<std::uint8_t>(img.width(), img.height(), 0);
  map.delta = Grid<double>(img.width(), img.height(), 0.0);
  map.sigma_hat = params.sigma_override ? *params.sigma_override : estimate_sigma(img);
  map.threshold = edge_threshold(map.sigma_hat, params.alpha, k, unit_side(img));

  parallel_for(img.height() - 2 * k, threads, [&](int i) {
    const int r = i + k;
    for (int c = k; c < img.width() - k; ++c) {
      const double d = delta_statistic(fits, {r, c}, k);
      map.delta(r, c) = d;
      map.flags(r, c) = d > map.threshold ? 1 : 0;
    }
  });
  return map;
}

ImageGrid edge_mask(const EdgeMap& edges) {
  ImageGrid mask(edges.flags.width(), edges.flags.height());
  auto in = edges.flags.values();
  auto out = mask.values();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] ? 255.0 : 0.0;
  return mask;
}

}  // namespace edgeden
