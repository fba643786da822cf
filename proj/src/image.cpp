#include "edgeden/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <sstream>

namespace edgeden {

void require_finite(const ImageGrid& img) {
  for (double v : img.values()) {
    if (!std::isfinite(v)) throw DataError("image contains non-finite intensity");
  }
}

namespace {

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  std::istringstream ss(text);
  while (std::getline(ss, cur, sep)) parts.push_back(cur);
  return parts;
}

double to_double(const std::string& s, const std::string& what) {
  try {
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw InvalidArgument("invalid number for " + what + ": '" + s + "'");
  }
}

}  // namespace

SceneSpec parse_scene(const std::string& text, int n) {
  SceneSpec spec;
  spec.n = n;
  auto parts = split(text, ':');
  if (parts.empty()) throw InvalidArgument("empty scene name");
  const std::string& name = parts[0];
  if (name == "square-circle" && parts.size() == 1) {
    spec.kind = SceneKind::square_circle;
  } else if (name == "constant" && parts.size() <= 2) {
    spec.kind = SceneKind::constant;
    if (parts.size() == 2) spec.level = to_double(parts[1], "constant level");
  } else if (name == "step" && (parts.size() == 1 || parts.size() == 4)) {
    spec.kind = SceneKind::step;
    if (parts.size() == 4) {
      spec.column = static_cast<int>(to_double(parts[1], "step column"));
      spec.low = to_double(parts[2], "step low");
      spec.high = to_double(parts[3], "step high");
    }
  } else {
    throw InvalidArgument("unknown scene '" + text + "'");
  }
  return spec;
}

std::string scene_name(const SceneSpec& spec) {
  switch (spec.kind) {
    case SceneKind::square_circle:
      return "square-circle";
    case SceneKind::constant:
      return "constant";
    case SceneKind::step:
      return "step";
  }
  return "unknown";
}

ImageGrid synth(const SceneSpec& spec) {
  if (spec.n < 16) throw InvalidArgument("scene size must be at least 16");
  const int n = spec.n;
  ImageGrid img(n, n);
  switch (spec.kind) {
    case SceneKind::constant:
      for (double& v : img.values()) v = spec.level;
      break;
    case SceneKind::step: {
      const int column = spec.column < 0 ? n / 2 : spec.column;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) img(r, c) = c < column ? spec.low : spec.high;
      break;
    }
    case SceneKind::square_circle:
      for (int r = 0; r < n; ++r) {
        const double y = (r + 0.5) / n;
        for (int c = 0; c < n; ++c) {
          const double x = (c + 0.5) / n;
          double v = 100.0;
          if (x >= 0.15 && x <= 0.55 && y >= 0.15 && y <= 0.55) v = 180.0;
          const double dx = x - 0.7, dy = y - 0.7;
          if (dx * dx + dy * dy <= 0.35 * 0.35) v = 60.0;
          img(r, c) = v;
        }
      }
      break;
  }
  return img;
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

ImageGrid add_noise(const ImageGrid& img, const NoiseSpec& noise) {
  if (!(noise.sd >= 0.0) || !std::isfinite(noise.sd))
    throw InvalidArgument("noise sd must be a finite nonnegative number");
  require_finite(img);
  ImageGrid out = img;
  if (noise.sd == 0.0) return out;

  std::mt19937_64 engine(mix_seed(noise.seed));
  auto uniform = [&engine] { return static_cast<double>(engine() >> 11) * 0x1.0p-53; };
  // Marsaglia polar method; the spare deviate is used for the next pixel.
  bool have_spare = false;
  double spare = 0.0;
  for (double& v : out.values()) {
    double g;
    if (have_spare) {
      g = spare;
      have_spare = false;
    } else {
      double u, w, s;
      do {
        u = 2.0 * uniform() - 1.0;
        w = 2.0 * uniform() - 1.0;
        s = u * u + w * w;
      } while (s >= 1.0 || s == 0.0);
      const double f = std::sqrt(-2.0 * std::log(s) / s);
      g = u * f;
      spare = w * f;
      have_spare = true;
    }
    v += noise.sd * g;
  }
  return out;
}

double rmse(const ImageGrid& a, const ImageGrid& b) {
  if (!a.same_shape(b)) throw DataError("rmse: image dimensions differ");
  double sum = 0.0;
  auto av = a.values();
  auto bv = b.values();
  for (std::size_t i = 0; i < av.size(); ++i) {
    const double d = av[i] - bv[i];
    sum += d * d;
  }
  return std::sqrt(sum / static_cast<double>(av.size()));
}

// ---------------------------------------------------------------------------

namespace {

void skip_space_and_comments(std::istream& in) {
  for (;;) {
    int ch = in.peek();
    if (ch == '#') {
      std::string line;
      std::getline(in, line);
    } else if (ch != EOF && std::isspace(ch)) {
      in.get();
    } else {
      return;
    }
  }
}

int read_header_int(std::istream& in, const char* what) {
  skip_space_and_comments(in);
  long value = -1;
  if (!(in >> value) || value <= 0 || value > (1L << 24)) {
    throw IoError(std::string("malformed PGM header: bad ") + what);
  }
  return static_cast<int>(value);
}

}  // namespace

ImageGrid read_pgm(std::istream& in) {
  char magic[2] = {0, 0};
  if (!in.read(magic, 2)) throw IoError("empty or unreadable image file");
  if (magic[0] != 'P' || magic[1] != '5') {
    throw IoError("unsupported image format (expected binary PGM 'P5')");
  }
  const int width = read_header_int(in, "width");
  const int height = read_header_int(in, "height");
  const int maxval = read_header_int(in, "maxval");
  if (maxval > 255) throw IoError("16-bit PGM is not supported");
  // Exactly one whitespace byte separates the header from the raster.
  int sep = in.get();
  if (sep == EOF || !std::isspace(sep)) throw IoError("malformed PGM header");

  const std::size_t count = static_cast<std::size_t>(width) * height;
  std::vector<unsigned char> bytes(count);
  if (!in.read(reinterpret_cast<char*>(bytes.data()), static_cast<std::streamsize>(count))) {
    throw IoError("truncated PGM raster");
  }
  std::vector<double> data(count);
  const double scale = maxval == 255 ? 1.0 : 255.0 / maxval;
  for (std::size_t i = 0; i < count; ++i) data[i] = bytes[i] * scale;
  return ImageGrid(width, height, std::move(data));
}

ImageGrid read_image(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "'");
  return read_pgm(in);
}

void write_pgm(const ImageGrid& img, std::ostream& out) {
  out << "P5\n" << img.width() << ' ' << img.height() << "\n255\n";
  std::vector<unsigned char> bytes(img.size());
  auto vals = img.values();
  for (std::size_t i = 0; i < vals.size(); ++i) {
    const double v = std::isfinite(vals[i]) ? std::clamp(vals[i], 0.0, 255.0) : 0.0;
    bytes[i] = static_cast<unsigned char>(std::lround(v));
  }
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("failed writing PGM data");
}

void write_image(const ImageGrid& img, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_pgm(img, out);
}

}  // namespace edgeden
