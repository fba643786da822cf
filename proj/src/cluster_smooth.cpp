#include "edgeden/cluster_smooth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace edgeden {

void ClusterParams::validate() const {
  if (!(h_n >= 1.0)) throw InvalidArgument("clustering radius h_n must be >= 1");
  if (patch_radius < 1) throw InvalidArgument("patch radius must be >= 1");
  if (!(b_n > 0.0)) throw InvalidArgument("B_n must be positive");
  if (!(sigma_hat >= 0.0)) throw InvalidArgument("sigma_hat must be nonnegative");
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// T for the split of sorted values after position `cut` (low = [0, cut]).
double sorted_ratio(std::span<const double> sorted, std::size_t cut, double grand_mean) {
  const std::size_t n = sorted.size();
  const std::size_t n1 = cut + 1, n2 = n - n1;
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < n1; ++i) s1 += sorted[i];
  for (std::size_t i = n1; i < n; ++i) s2 += sorted[i];
  const double m1 = s1 / n1, m2 = s2 / n2;
  double within = 0.0;
  for (std::size_t i = 0; i < n1; ++i) within += (sorted[i] - m1) * (sorted[i] - m1);
  for (std::size_t i = n1; i < n; ++i) within += (sorted[i] - m2) * (sorted[i] - m2);
  const double between = n1 * (m1 - grand_mean) * (m1 - grand_mean) + n2 * (m2 - grand_mean) * (m2 - grand_mean);
  return within > 0.0 ? between / within : kInf;
}

bool ratio_tied_or_better(double candidate, double best) {
  if (best == kInf) return candidate == kInf;
  if (candidate == kInf) return true;
  return candidate >= best - kRatioTieTolerance * std::abs(best);
}

}  // namespace

double variance_ratio(std::span<const double> values, double s) {
  double s1 = 0.0, s2 = 0.0, total = 0.0;
  std::size_t n1 = 0, n2 = 0;
  for (double z : values) {
    total += z;
    if (z <= s) {
      s1 += z;
      ++n1;
    } else {
      s2 += z;
      ++n2;
    }
  }
  if (n1 == 0 || n2 == 0) throw InvalidArgument("variance_ratio: threshold leaves a group empty");
  const double m = total / values.size(), m1 = s1 / n1, m2 = s2 / n2;
  double within = 0.0;
  for (double z : values) {
    const double d = z - (z <= s ? m1 : m2);
    within += d * d;
  }
  const double between = n1 * (m1 - m) * (m1 - m) + n2 * (m2 - m) * (m2 - m);
  return within > 0.0 ? between / within : kInf;
}

ClusterSplit optimal_threshold(std::span<const double> values) {
  if (values.empty()) throw InvalidArgument("optimal_threshold: empty input");
  std::vector<double> sorted(values.begin(), values.end());
  std::sort(sorted.begin(), sorted.end());
  const double grand_mean = std::accumulate(sorted.begin(), sorted.end(), 0.0) / sorted.size();

  std::vector<std::size_t> cuts;
  std::vector<double> ratios;
  for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
    if (sorted[i] == sorted[i + 1]) continue;
    cuts.push_back(i);
    ratios.push_back(sorted_ratio(sorted, i, grand_mean));
  }

  ClusterSplit split;
  if (cuts.empty()) {
    split.threshold = sorted.front();
    split.members_low.resize(values.size());
    std::iota(split.members_low.begin(), split.members_low.end(), std::size_t{0});
    split.mean_low = grand_mean;
    split.t_value = 0.0;
    return split;
  }

  // Smallest threshold whose ratio ties the maximum.
  const double best_ratio = *std::max_element(ratios.begin(), ratios.end());
  std::size_t pick = 0;
  while (!ratio_tied_or_better(ratios[pick], best_ratio)) ++pick;

  const std::size_t cut = cuts[pick];
  const double lo = sorted[cut], hi = sorted[cut + 1];
  double s = lo + 0.5 * (hi - lo);
  if (!(s < hi)) s = lo;
  split.threshold = s;
  split.t_value = ratios[pick];
  double s1 = 0.0, s2 = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (values[i] <= s) {
      split.members_low.push_back(i);
      s1 += values[i];
    } else {
      split.members_high.push_back(i);
      s2 += values[i];
    }
  }
  split.mean_low = s1 / split.members_low.size();
  split.mean_high = s2 / split.members_high.size();
  return split;
}

double patch_weight(const ImageGrid& img, Pixel q, Pixel p, const ClusterParams& params) {
  if (!(params.sigma_hat > 0.0)) return 1.0;
  const int pr = params.patch_radius;
  double dist2 = 0.0;
  int count = 0;
  for (int t = -pr; t <= pr; ++t) {
    const int rq = q.row + t, rp = p.row + t;
    if (rq < 0 || rp < 0 || rq >= img.height() || rp >= img.height()) continue;
    for (int s = -pr; s <= pr; ++s) {
      const int cq = q.col + s, cp = p.col + s;
      if (cq < 0 || cp < 0 || cq >= img.width() || cp >= img.width()) continue;
      const double d = img(rq, cq) - img(rp, cp);
      dist2 += d * d;
      ++count;
    }
  }
  if (count == 0) return 1.0;
  const double denom = 2.0 * params.sigma_hat * params.sigma_hat * count * params.b_n;
  return std::exp(-dist2 / denom);
}

std::vector<Pixel> disk_neighborhood(const ImageGrid& img, Pixel p, double radius) {
  std::vector<Pixel> out;
  const int reach = static_cast<int>(std::floor(radius));
  const double r2 = radius * radius;
  for (int dr = -reach; dr <= reach; ++dr) {
    for (int dc = -reach; dc <= reach; ++dc) {
      if (dr * dr + dc * dc > r2) continue;
      const Pixel q{p.row + dr, p.col + dc};
      if (img.contains(q)) out.push_back(q);
    }
  }
  return out;
}

double cluster_smooth_pixel(const ImageGrid& img, Pixel p, const ClusterParams& params) {
  if (!img.contains(p)) throw InvalidArgument("cluster_smooth_pixel: pixel outside image");
  const std::vector<Pixel> hood = disk_neighborhood(img, p, params.h_n);
  std::vector<double> values(hood.size());
  for (std::size_t i = 0; i < hood.size(); ++i) values[i] = img[hood[i]];

  const ClusterSplit split = optimal_threshold(values);
  const bool home_low = split.degenerate() || img[p] <= split.threshold;
  const auto& members = home_low ? split.members_low : split.members_high;

  double sw = 0.0, swz = 0.0;
  for (std::size_t idx : members) {
    const double w = patch_weight(img, hood[idx], p, params);
    sw += w;
    swz += w * values[idx];
  }
  // The home cluster always holds p itself, whose weight is 1.
  return swz / sw;
}

}  // namespace edgeden
