#include "edgeden/bench.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

namespace edgeden {

std::uint64_t replicate_seed(std::uint64_t base_seed, int n, double sd, int replicate) {
  std::uint64_t h = mix_seed(base_seed);
  h = mix_seed(h ^ static_cast<std::uint64_t>(n));
  h = mix_seed(h ^ std::bit_cast<std::uint64_t>(sd));
  h = mix_seed(h ^ static_cast<std::uint64_t>(replicate));
  return h;
}

std::vector<BenchRow> run_bench(const BenchConfig& config) {
  if (config.replicates < 1) throw InvalidArgument("bench needs at least one replicate");
  std::vector<BenchRow> rows;
  for (const std::string& scene_text : config.scenes) {
    for (int n : config.sizes) {
      const SceneSpec spec = parse_scene(scene_text, n);
      const ImageGrid truth = synth(spec);
      for (double sd : config.sds) {
        for (Mode method : config.methods) {
          DenoiseParams params = default_params(n);
          params.mode = method;
          params.threads = config.threads;

          std::vector<double> errors;
          errors.reserve(config.replicates);
          double seconds = 0.0;
          for (int l = 1; l <= config.replicates; ++l) {
            const int stream = config.identical_replicates ? 1 : l;
            const ImageGrid noisy = add_noise(truth, {sd, replicate_seed(config.base_seed, n, sd, stream)});
            const auto start = std::chrono::steady_clock::now();
            const ImageGrid est = denoise(noisy, params);
            seconds += std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
            errors.push_back(rmse(est, truth));
          }

          BenchRow row{scene_name(spec), n, sd, mode_name(method), config.replicates, 0.0, 0.0, seconds};
          double sum = 0.0;
          for (double e : errors) sum += e;
          row.mean_rmse = sum / errors.size();
          if (errors.size() > 1) {
            double ss = 0.0;
            for (double e : errors) ss += (e - row.mean_rmse) * (e - row.mean_rmse);
            row.sd_rmse = std::sqrt(ss / (errors.size() - 1));
          }
          rows.push_back(std::move(row));
        }
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const BenchRow& x, const BenchRow& y) {
    return std::tie(x.scene, x.n, x.sd, x.method) < std::tie(y.scene, y.n, y.sd, y.method);
  });
  return rows;
}

void write_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "scene,n,sd,method,L,mean_rmse,sd_rmse,seconds\n";
  out << std::fixed << std::setprecision(4);
  for (const BenchRow& r : rows) {
    out << r.scene << ',' << r.n << ',' << r.sd << ',' << r.method << ',' << r.replicates << ','
        << r.mean_rmse << ',' << r.sd_rmse << ',' << r.seconds << '\n';
  }
}

void write_csv(const std::vector<BenchRow>& rows, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  write_csv(rows, out);
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<BenchRow> read_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != "scene,n,sd,method,L,mean_rmse,sd_rmse,seconds")
    throw DataError("bench CSV: missing or unexpected header");
  std::vector<BenchRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) f.push_back(cell);
    if (f.size() != 8) throw DataError("bench CSV: expected 8 fields in '" + line + "'");
    try {
      rows.push_back({f[0], std::stoi(f[1]), std::stod(f[2]), f[3], std::stoi(f[4]), std::stod(f[5]),
                      std::stod(f[6]), std::stod(f[7])});
    } catch (const std::exception&) {
      throw DataError("bench CSV: bad number in '" + line + "'");
    }
  }
  return rows;
}

}  // namespace edgeden
