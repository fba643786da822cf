#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "edgeden/bench.hpp"
#include "edgeden/errors.hpp"
#include "edgeden/pipeline.hpp"

namespace py = pybind11;
using namespace edgeden;

namespace {

using InArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

ImageGrid to_grid(const InArray& a) {
  if (a.ndim() != 2) throw InvalidArgument("expected a 2-D array");
  const int h = static_cast<int>(a.shape(0)), w = static_cast<int>(a.shape(1));
  if (w < 1 || h < 1) throw InvalidArgument("image must be non-empty");
  return ImageGrid(w, h, std::vector<double>(a.data(), a.data() + a.size()));
}

template <typename T>
py::array_t<T> to_array(const Grid<T>& g) {
  py::array_t<T> out({g.height(), g.width()});
  std::copy(g.values().begin(), g.values().end(), out.mutable_data());
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Edge-preserving image denoising";

  py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  m.def(
      "synth", [](const std::string& scene, int n) { return to_array(synth(parse_scene(scene, n))); },
      py::arg("scene") = "square-circle", py::arg("n") = 64,
      "Noise-free synthetic scene as an (n, n) float64 array.");

  m.def(
      "add_noise",
      [](const InArray& img, double sd, std::uint64_t seed) { return to_array(add_noise(to_grid(img), {sd, seed})); },
      py::arg("img"), py::arg("sd"), py::arg("seed") = 1, "Adds seeded i.i.d. Gaussian noise.");

  m.def(
      "rmse", [](const InArray& a, const InArray& b) { return rmse(to_grid(a), to_grid(b)); }, py::arg("a"),
      py::arg("b"));

  m.def(
      "detect_edges",
      [](const InArray& img, int k, double alpha, std::optional<double> sigma, int threads) {
        const EdgeMap e = detect_edges(to_grid(img), {k, alpha, sigma}, threads);
        py::dict d;
        d["flags"] = to_array(e.flags);
        d["delta"] = to_array(e.delta);
        d["threshold"] = e.threshold;
        d["sigma_hat"] = e.sigma_hat;
        return d;
      },
      py::arg("img"), py::arg("k") = 2, py::arg("alpha") = 0.05, py::arg("sigma") = py::none(),
      py::arg("threads") = 1,
      "Edge map: dict with uint8 'flags', float 'delta', 'threshold' and 'sigma_hat'.");

  py::class_<DenoiseParams>(m, "DenoiseParams")
      .def(py::init<>())
      .def_readwrite("k", &DenoiseParams::k)
      .def_readwrite("alpha", &DenoiseParams::alpha)
      .def_readwrite("gamma", &DenoiseParams::gamma)
      .def_readwrite("max_axis", &DenoiseParams::max_axis)
      .def_readwrite("sigma", &DenoiseParams::sigma_override)
      .def_readwrite("threads", &DenoiseParams::threads)
      .def_property(
          "order", [](const DenoiseParams& p) { return p.kernel.order; },
          [](DenoiseParams& p, int v) { p.kernel.order = v; })
      .def_property(
          "h_n", [](const DenoiseParams& p) { return p.cluster.h_n; },
          [](DenoiseParams& p, double v) { p.cluster.h_n = v; })
      .def_property(
          "b_n", [](const DenoiseParams& p) { return p.cluster.b_n; },
          [](DenoiseParams& p, double v) { p.cluster.b_n = v; })
      .def_property(
          "patch_radius", [](const DenoiseParams& p) { return p.cluster.patch_radius; },
          [](DenoiseParams& p, int v) { p.cluster.patch_radius = v; })
      .def_property(
          "mode", [](const DenoiseParams& p) { return mode_name(p.mode); },
          [](DenoiseParams& p, const std::string& v) { p.mode = parse_mode(v); })
      .def("validate", &DenoiseParams::validate)
      .def("__repr__", [](const DenoiseParams& p) {
        return "DenoiseParams(mode=" + mode_name(p.mode) + ", k=" + std::to_string(p.k) +
               ", gamma=" + std::to_string(p.gamma) + ", max_axis=" + std::to_string(p.max_axis) + ")";
      });

  m.def("default_params", &default_params, py::arg("n"), "Default parameters for an n x n image.");

  m.def(
      "denoise",
      [](const InArray& img, std::optional<DenoiseParams> params) {
        const ImageGrid g = to_grid(img);
        const DenoiseParams p = params ? *params : default_params(std::max(g.width(), g.height()));
        ImageGrid out;
        {
          py::gil_scoped_release release;
          out = denoise(g, p);
        }
        return to_array(out);
      },
      py::arg("img"), py::arg("params") = py::none(), "Denoises a 2-D array; defaults follow the image size.");

  m.def(
      "box3", [](const InArray& img) { return to_array(box3(to_grid(img))); }, py::arg("img"));

  m.def(
      "run_bench",
      [](std::vector<std::string> scenes, std::vector<int> sizes, std::vector<double> sds, int replicates,
         const std::vector<std::string>& methods, std::uint64_t base_seed, int threads) {
        BenchConfig cfg;
        cfg.scenes = std::move(scenes);
        cfg.sizes = std::move(sizes);
        cfg.sds = std::move(sds);
        cfg.replicates = replicates;
        cfg.methods.clear();
        for (const auto& name : methods) cfg.methods.push_back(parse_mode(name));
        cfg.base_seed = base_seed;
        cfg.threads = threads;
        std::vector<BenchRow> rows;
        {
          py::gil_scoped_release release;
          rows = run_bench(cfg);
        }
        py::list out;
        for (const BenchRow& r : rows) {
          py::dict d;
          d["scene"] = r.scene;
          d["n"] = r.n;
          d["sd"] = r.sd;
          d["method"] = r.method;
          d["L"] = r.replicates;
          d["mean_rmse"] = r.mean_rmse;
          d["sd_rmse"] = r.sd_rmse;
          d["seconds"] = r.seconds;
          out.append(d);
        }
        return out;
      },
      py::arg("scenes") = std::vector<std::string>{"square-circle"}, py::arg("sizes") = std::vector<int>{64},
      py::arg("sds") = std::vector<double>{5.0, 10.0, 20.0}, py::arg("replicates") = 10,
      py::arg("methods") = std::vector<std::string>{"integrated"}, py::arg("base_seed") = 1,
      py::arg("threads") = 1, "Monte-Carlo RMSE study; one dict per (scene, n, sd, method).");
}
