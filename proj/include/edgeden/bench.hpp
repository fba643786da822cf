#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "edgeden/image.hpp"
#include "edgeden/pipeline.hpp"

namespace edgeden {

/// One (scene, n, sd, method) cell of a Monte-Carlo RMSE study.
struct BenchRow {
  std::string scene;
  int n = 0;
  double sd = 0.0;
  std::string method;
  int replicates = 0;
  double mean_rmse = 0.0;
  double sd_rmse = 0.0;  ///< sample SD of the replicate RMSEs, 0 when L = 1
  double seconds = 0.0;  ///< summed wall-clock of the denoise calls

  friend bool operator==(const BenchRow&, const BenchRow&) = default;
};

struct BenchConfig {
  std::vector<std::string> scenes{"square-circle"};
  std::vector<int> sizes{64};
  std::vector<double> sds{5.0, 10.0, 20.0};
  int replicates = 10;
  std::vector<Mode> methods{Mode::integrated};
  std::uint64_t base_seed = 1;
  int threads = 1;
  /// Test hook: use the same noise draw for every replicate.
  bool identical_replicates = false;
};

/// Noise seed for replicate `replicate` of (n, sd).
std::uint64_t replicate_seed(std::uint64_t base_seed, int n, double sd, int replicate);

/// Rows are sorted by (scene, n, sd, method). Each method runs with
/// default_params(n) and the requested mode.
std::vector<BenchRow> run_bench(const BenchConfig& config);

void write_csv(const std::vector<BenchRow>& rows, std::ostream& out);
void write_csv(const std::vector<BenchRow>& rows, const std::filesystem::path& path);
std::vector<BenchRow> read_csv(std::istream& in);

}  // namespace edgeden
