#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "edgeden/errors.hpp"

namespace edgeden {

/// Integer pixel address. Ordering is row-major, which is also the
/// tie-break order used by the nearest-edge queries.
struct Pixel {
  int row = 0;
  int col = 0;

  friend constexpr auto operator<=>(const Pixel&, const Pixel&) = default;
};

/// Row-major rectangular grid.
template <typename T>
class Grid {
 public:
  Grid() = default;

  Grid(int width, int height, T fill = T{}) : width_(width), height_(height) {
    check_dims(width, height);
    data_.assign(static_cast<std::size_t>(width) * height, fill);
  }

  Grid(int width, int height, std::vector<T> data)
      : width_(width), height_(height), data_(std::move(data)) {
    check_dims(width, height);
    if (data_.size() != static_cast<std::size_t>(width) * height) {
      throw InvalidArgument("grid data length does not match width*height");
    }
  }

  int width() const { return width_; }
  int height() const { return height_; }
  std::size_t size() const { return data_.size(); }
  bool empty() const { return data_.empty(); }

  bool contains(int row, int col) const {
    return row >= 0 && col >= 0 && row < height_ && col < width_;
  }
  bool contains(Pixel p) const { return contains(p.row, p.col); }

  T& operator()(int row, int col) { return data_[index(row, col)]; }
  const T& operator()(int row, int col) const { return data_[index(row, col)]; }
  T& operator[](Pixel p) { return data_[index(p.row, p.col)]; }
  const T& operator[](Pixel p) const { return data_[index(p.row, p.col)]; }

  std::span<T> values() { return data_; }
  std::span<const T> values() const { return data_; }
  const std::vector<T>& vector() const { return data_; }

  bool same_shape(const Grid& other) const {
    return width_ == other.width_ && height_ == other.height_;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  static void check_dims(int width, int height) {
    if (width <= 0 || height <= 0) throw InvalidArgument("grid dimensions must be positive");
  }
  std::size_t index(int row, int col) const {
    return static_cast<std::size_t>(row) * width_ + col;
  }

  int width_ = 0;
  int height_ = 0;
  std::vector<T> data_;
};

/// Real-valued intensities on the nominal 0..255 scale. Values outside that
/// range are legal (noise is never clipped); quantization happens only when
/// writing files.
using ImageGrid = Grid<double>;

/// Throws DataError if any intensity is NaN or infinite.
void require_finite(const ImageGrid& img);

/// Side length used to map pixels onto the unit square (one pixel = 1/n).
inline int unit_side(const ImageGrid& img) {
  return img.width() > img.height() ? img.width() : img.height();
}

// ---------------------------------------------------------------------------
// Synthetic scenes

enum class SceneKind { square_circle, constant, step };

struct SceneSpec {
  SceneKind kind = SceneKind::square_circle;
  int n = 64;
  double level = 100.0;  // constant
  int column = -1;       // step: first high column, -1 means n/2
  double low = 100.0;    // step
  double high = 180.0;   // step
};

/// Parses "square-circle", "constant[:level]" or "step[:column:low:high]".
SceneSpec parse_scene(const std::string& text, int n);
std::string scene_name(const SceneSpec& spec);

/// Noiseless n x n scene. The square-circle scene has background 100, the
/// square [0.15,0.55]^2 at 180 and a disk of radius 0.35 centered at
/// (0.7,0.7) at 60 painted over it; pixels take the value at their center.
ImageGrid synth(const SceneSpec& spec);

// ---------------------------------------------------------------------------
// Noise and metrics

struct NoiseSpec {
  double sd = 0.0;
  std::uint64_t seed = 0;
};

/// Adds i.i.d. N(0, sd^2) noise. Output is a pure function of (img, noise).
ImageGrid add_noise(const ImageGrid& img, const NoiseSpec& noise);

/// Root of the mean squared pixel difference.
double rmse(const ImageGrid& a, const ImageGrid& b);

/// splitmix64 finalizer; used to derive independent stream seeds.
std::uint64_t mix_seed(std::uint64_t x);

// ---------------------------------------------------------------------------
// File I/O

/// Reads a binary (P5) PGM with maxval <= 255. Values are rescaled to 0..255
/// when maxval is not 255.
ImageGrid read_pgm(std::istream& in);
ImageGrid read_image(const std::filesystem::path& path);

/// Writes binary PGM; values are clamped to [0,255] and rounded.
void write_pgm(const ImageGrid& img, std::ostream& out);
void write_image(const ImageGrid& img, const std::filesystem::path& path);

}  // namespace edgeden
