#include "edgeden/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include "edgeden/bench.hpp"
#include "edgeden/edge_detect.hpp"
#include "edgeden/image.hpp"
#include "edgeden/pipeline.hpp"

namespace edgeden {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> items;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) items.push_back(item);
  }
  if (items.empty()) throw InvalidArgument("empty list '" + text + "'");
  return items;
}

template <typename T>
std::vector<T> parse_numbers(const std::string& text) {
  std::vector<T> out;
  for (const std::string& item : split_list(text)) {
    try {
      std::size_t used = 0;
      if constexpr (std::is_integral_v<T>) {
        out.push_back(static_cast<T>(std::stol(item, &used)));
      } else {
        out.push_back(static_cast<T>(std::stod(item, &used)));
      }
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw InvalidArgument("invalid number '" + item + "' in list");
    }
  }
  return out;
}

// Splices `--key value` pairs from a config file directly after the
// subcommand name, so that later command-line flags take precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args) {
  std::vector<std::string> rest;
  std::optional<std::string> config_path;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (args[i] == "--config") {
      if (i + 1 >= args.size()) throw InvalidArgument("--config needs a file path");
      config_path = args[++i];
    } else if (args[i].rfind("--config=", 0) == 0) {
      config_path = args[i].substr(9);
    } else {
      rest.push_back(args[i]);
    }
  }
  if (!config_path || rest.empty()) return rest;

  std::vector<std::string> expanded{rest.front()};
  for (const auto& [key, value] : read_config_file(*config_path)) {
    expanded.push_back("--" + key);
    expanded.push_back(value);
  }
  expanded.insert(expanded.end(), rest.begin() + 1, rest.end());
  return expanded;
}

void write_delta_image(const EdgeMap& edges, const std::string& path) {
  double peak = 0.0;
  for (double v : edges.delta.values()) peak = std::max(peak, v);
  ImageGrid img(edges.delta.width(), edges.delta.height());
  auto in = edges.delta.values();
  auto out = img.values();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = peak > 0.0 ? 255.0 * in[i] / peak : 0.0;
  write_image(img, path);
}

}  // namespace

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file '" + path + "'");
  std::map<std::string, std::string> entries;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty()) throw IoError(path + ":" + std::to_string(lineno) + ": empty key");
    entries[key] = trim(line.substr(eq + 1));
  }
  return entries;
}

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Edge-preserving image denoising: jump-regression edge detection, adaptive "
               "elliptical kernel regression and local clustering"};
  app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  // --config is consumed by expand_config; it is declared only for --help.
  const std::string config_help = "Flat 'key = value' file; command-line flags override it";
  std::string config_path;

  int threads = 1;

  // synth
  auto* synth_cmd = app.add_subcommand("synth", "Write a noiseless synthetic scene");
  std::string scene = "square-circle";
  int synth_n = 64;
  std::string synth_out;
  synth_cmd->add_option("--scene", scene, "square-circle | constant[:level] | step[:col:low:high]")
      ->capture_default_str();
  synth_cmd->add_option("--n", synth_n, "Image side length")->capture_default_str();
  synth_cmd->add_option("--out", synth_out, "Output PGM")->required();
  synth_cmd->add_option("--config", config_path, config_help);

  // addnoise
  auto* noise_cmd = app.add_subcommand("addnoise", "Add seeded Gaussian noise");
  std::string noise_in, noise_out;
  double noise_sd = 10.0;
  std::uint64_t noise_seed = 1;
  noise_cmd->add_option("--in", noise_in, "Input PGM")->required();
  noise_cmd->add_option("--sd", noise_sd, "Noise standard deviation")->capture_default_str();
  noise_cmd->add_option("--seed", noise_seed, "Random seed")->capture_default_str();
  noise_cmd->add_option("--out", noise_out, "Output PGM")->required();
  noise_cmd->add_option("--config", config_path, config_help);

  // edges
  auto* edges_cmd = app.add_subcommand("edges", "Detect edge pixels");
  std::string edges_in, edges_mask, edges_delta;
  int edges_k = 2;
  double edges_alpha = 0.05;
  std::optional<double> edges_sigma;
  edges_cmd->add_option("--in", edges_in, "Input PGM")->required();
  edges_cmd->add_option("--k", edges_k, "Window half-width")->capture_default_str();
  edges_cmd->add_option("--alpha", edges_alpha, "Significance level")->capture_default_str();
  edges_cmd->add_option("--sigma", edges_sigma, "Noise SD override (default: estimated)");
  edges_cmd->add_option("--out-mask", edges_mask, "Edge mask PGM (255 = edge)");
  edges_cmd->add_option("--out-delta", edges_delta, "Statistic image, scaled so the maximum is 255");
  edges_cmd->add_option("--threads", threads, "Worker threads, 0 = auto")->capture_default_str();
  edges_cmd->add_option("--config", config_path, config_help);

  // denoise
  auto* den_cmd = app.add_subcommand("denoise", "Denoise an image");
  std::string den_in, den_out, den_mode = "integrated", den_dump, den_kernel = "epanechnikov",
                                den_axis = "semi";
  std::optional<double> gamma, max_axis, alpha, bn, hn, sigma;
  std::optional<int> k, order, patch_radius;
  den_cmd->add_option("--in", den_in, "Input PGM")->required();
  den_cmd->add_option("--out", den_out, "Output PGM")->required();
  den_cmd->add_option("--mode", den_mode, "integrated | cluster-only | kernel-only | box3")
      ->capture_default_str();
  den_cmd->add_option("--gamma", gamma, "Edge clearance in pixels (default 3 below 100 px, else 5)");
  den_cmd->add_option("--max-axis", max_axis, "Maximum semi-axis in pixels (default 6 below 100 px, else 10)");
  den_cmd->add_option("--k", k, "Edge window half-width (default 2)");
  den_cmd->add_option("--alpha", alpha, "Edge significance level (default 0.05)");
  den_cmd->add_option("--order", order, "Local polynomial order 0..2 (default 2)");
  den_cmd->add_option("--bn", bn, "Patch weight bandwidth multiplier (default 1)");
  den_cmd->add_option("--patch-radius", patch_radius, "Patch radius (default 1)");
  den_cmd->add_option("--hn", hn, "Clustering radius (default gamma)");
  den_cmd->add_option("--sigma", sigma, "Noise SD override (default: estimated)");
  den_cmd->add_option("--kernel", den_kernel, "epanechnikov | gaussian")->capture_default_str();
  den_cmd->add_option("--axis-reading", den_axis, "semi | full")->capture_default_str();
  den_cmd->add_option("--debug-dump", den_dump, "Per-pixel CSV trace");
  den_cmd->add_option("--threads", threads, "Worker threads, 0 = auto")->capture_default_str();
  den_cmd->add_option("--config", config_path, config_help);

  // bench
  auto* bench_cmd = app.add_subcommand("bench", "Monte-Carlo RMSE study");
  std::string scenes = "square-circle", sizes = "64", sds = "5,10,20", methods = "integrated", bench_out;
  int reps = 10;
  std::uint64_t bench_seed = 1;
  bench_cmd->add_option("--scenes", scenes, "Comma-separated scenes")->capture_default_str();
  bench_cmd->add_option("--sizes", sizes, "Comma-separated image sides")->capture_default_str();
  bench_cmd->add_option("--sds", sds, "Comma-separated noise SDs")->capture_default_str();
  bench_cmd->add_option("--L", reps, "Replicates per cell")->capture_default_str();
  bench_cmd->add_option("--methods", methods, "Comma-separated modes")->capture_default_str();
  bench_cmd->add_option("--seed", bench_seed, "Base seed")->capture_default_str();
  bench_cmd->add_option("--out", bench_out, "Output CSV")->required();
  bench_cmd->add_option("--threads", threads, "Worker threads, 0 = auto")->capture_default_str();
  bench_cmd->add_option("--config", config_path, config_help);

  try {
    std::vector<std::string> args = expand_config(raw_args);
    std::reverse(args.begin(), args.end());
    app.parse(args);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }

  try {
    if (*synth_cmd) {
      write_image(synth(parse_scene(scene, synth_n)), synth_out);
    } else if (*noise_cmd) {
      write_image(add_noise(read_image(noise_in), {noise_sd, noise_seed}), noise_out);
    } else if (*edges_cmd) {
      const ImageGrid img = read_image(edges_in);
      const EdgeMap edges = detect_edges(img, {edges_k, edges_alpha, edges_sigma}, threads);
      if (!edges_mask.empty()) write_image(edge_mask(edges), edges_mask);
      if (!edges_delta.empty()) write_delta_image(edges, edges_delta);
      out << "edge pixels: " << edges.count() << "  threshold: " << edges.threshold
          << "  sigma: " << edges.sigma_hat << "\n";
    } else if (*den_cmd) {
      const ImageGrid img = read_image(den_in);
      DenoiseParams p = default_params(std::max(16, unit_side(img)));
      p.mode = parse_mode(den_mode);
      if (gamma) p.gamma = *gamma;
      if (max_axis) p.max_axis = *max_axis;
      p.cluster.h_n = hn ? *hn : p.gamma;
      if (k) p.k = *k;
      if (alpha) p.alpha = *alpha;
      if (order) p.kernel.order = *order;
      if (bn) p.cluster.b_n = *bn;
      if (patch_radius) p.cluster.patch_radius = *patch_radius;
      p.sigma_override = sigma;
      if (den_kernel == "epanechnikov") {
        p.kernel.shape = KernelShape::epanechnikov;
      } else if (den_kernel == "gaussian") {
        p.kernel.shape = KernelShape::truncated_gaussian;
      } else {
        throw InvalidArgument("unknown kernel '" + den_kernel + "'");
      }
      if (den_axis == "semi") {
        p.axis_reading = AxisReading::semi;
      } else if (den_axis == "full") {
        p.axis_reading = AxisReading::full;
      } else {
        throw InvalidArgument("unknown axis reading '" + den_axis + "'");
      }
      p.threads = threads;
      const DenoiseResult res = denoise_traced(img, p);
      write_image(res.image, den_out);
      if (!den_dump.empty()) {
        std::ofstream dump(den_dump);
        if (!dump) throw IoError("cannot open '" + den_dump + "' for writing");
        write_trace_csv(res.trace, dump);
      }
    } else if (*bench_cmd) {
      BenchConfig cfg;
      cfg.scenes = split_list(scenes);
      cfg.sizes = parse_numbers<int>(sizes);
      cfg.sds = parse_numbers<double>(sds);
      cfg.methods.clear();
      for (const std::string& m : split_list(methods)) cfg.methods.push_back(parse_mode(m));
      cfg.replicates = reps;
      cfg.base_seed = bench_seed;
      cfg.threads = threads;
      write_csv(run_bench(cfg), bench_out);
    }
  } catch (const InvalidArgument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitOk;
}

int run_cli(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  return run_cli(args, std::cout, std::cerr);
}

}  // namespace edgeden
