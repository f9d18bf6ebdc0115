#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "rgbdseg/engine.hpp"
#include "rgbdseg/eval.hpp"
#include "rgbdseg/processor.hpp"
#include "rgbdseg/synthetic.hpp"

namespace py = pybind11;
using namespace rgbdseg;

namespace {

template <typename T>
Plane<T> plane_from_array(const py::array_t<T, py::array::c_style | py::array::forcecast>& arr) {
    if (arr.ndim() != 2) throw std::invalid_argument("expected a 2D array");
    Plane<T> p(static_cast<int>(arr.shape(1)), static_cast<int>(arr.shape(0)));
    std::copy(arr.data(), arr.data() + arr.size(), p.data());
    return p;
}

template <typename T>
py::array_t<T> array_from_plane(const Plane<T>& p) {
    py::array_t<T> arr({p.height(), p.width()});
    std::copy(p.data(), p.data() + p.size(), arr.mutable_data());
    return arr;
}

MaskPlane mask_from_array(const py::array_t<uint8_t, py::array::c_style | py::array::forcecast>& arr) {
    MaskPlane m = plane_from_array<uint8_t>(arr);
    for (size_t i = 0; i < m.size(); ++i)
        if (m.data()[i] > 1) throw std::invalid_argument("mask values must be 0 or 1");
    return m;
}

}  // namespace

PYBIND11_MODULE(_rgbdseg, m) {
    m.doc() = "RGBD background subtraction: per-pixel Gaussian mixtures on color and depth, "
              "counter-based mask fusion, synthetic scenarios and F1 evaluation.";

    py::class_<MixtureConfig>(m, "MixtureConfig")
        .def(py::init<>())
        .def_readwrite("components", &MixtureConfig::components)
        .def_readwrite("learning_rate", &MixtureConfig::learning_rate)
        .def_readwrite("match_lambda", &MixtureConfig::match_lambda)
        .def_readwrite("background_threshold", &MixtureConfig::background_threshold)
        .def_readwrite("initial_sigma", &MixtureConfig::initial_sigma)
        .def_readwrite("initial_weight", &MixtureConfig::initial_weight)
        .def_readwrite("variance_floor", &MixtureConfig::variance_floor)
        .def("validate", &MixtureConfig::validate);

    py::class_<PixelMixture>(m, "PixelMixture")
        .def_readonly("components", &PixelMixture::components)
        .def_readonly("channels", &PixelMixture::channels)
        .def_property_readonly("weights",
                               [](const PixelMixture& p) {
                                   return std::vector<float>(p.weights.begin(),
                                                             p.weights.begin() + p.components);
                               })
        .def_property_readonly("variances", [](const PixelMixture& p) {
            return std::vector<float>(p.variances.begin(), p.variances.begin() + p.components);
        });

    m.def("init_mixture", [](const std::vector<float>& v, const MixtureConfig& c) {
        return init_mixture(v, c);
    });
    m.def("step_pixel", [](PixelMixture& mix, const std::vector<float>& v,
                           const MixtureConfig& c) {
        return step_pixel(mix, v, c) == PixelLabel::Foreground ? 1 : 0;
    });

    py::class_<FusionState>(m, "FusionState")
        .def(py::init([](int width, int height, int initial_label, int counter_limit) {
                 return reset_state(width, height, static_cast<uint8_t>(initial_label),
                                    counter_limit);
             }),
             py::arg("width"), py::arg("height"), py::arg("initial_label") = 0,
             py::arg("counter_limit") = 3)
        .def("step",
             [](FusionState& s, const py::array_t<uint8_t, py::array::c_style>& rgb,
                const py::array_t<uint8_t, py::array::c_style>& depth) {
                 return array_from_plane(
                     fuse_step(s, mask_from_array(rgb), mask_from_array(depth)));
             })
        .def_property_readonly("out", [](const FusionState& s) { return array_from_plane(s.out); })
        .def_property_readonly("cpt",
                               [](const FusionState& s) { return array_from_plane(s.cpt); });

    py::class_<CameraRig>(m, "CameraRig")
        .def(py::init<>())
        .def_static("identity", &CameraRig::identity, py::arg("fx") = 525.0, py::arg("fy") = 525.0,
                    py::arg("cx") = 319.5, py::arg("cy") = 239.5)
        .def_readwrite("rotation", &CameraRig::rotation)
        .def_readwrite("translation_mm", &CameraRig::translation_mm)
        .def_readwrite("depth_scale", &CameraRig::depth_scale);

    m.def(
        "register_mask",
        [](const py::array_t<uint8_t, py::array::c_style>& mask,
           const py::array_t<uint16_t, py::array::c_style>& depth, const CameraRig& rig,
           int dilation_radius) {
            const MaskPlane mp = mask_from_array(mask);
            const Plane<uint16_t> dp = plane_from_array<uint16_t>(depth);
            return array_from_plane(
                register_mask(mp, dp, rig, mp.width(), mp.height(), dilation_radius));
        },
        py::arg("mask"), py::arg("depth"), py::arg("rig"), py::arg("dilation_radius") = 1);

    m.def("confusion_counts", [](const py::array_t<uint8_t, py::array::c_style>& pred,
                                 const py::array_t<uint8_t, py::array::c_style>& gt) {
        const ConfusionCounts c = confusion_counts(mask_from_array(pred), mask_from_array(gt));
        return py::make_tuple(c.tp, c.fp, c.tn, c.fn);
    });
    m.def("f1_score", [](int64_t tp, int64_t fp, int64_t fn) {
        return f1(ConfusionCounts{tp, fp, 0, fn});
    });

    m.def("aos_to_soa", [](const py::array_t<uint8_t, py::array::c_style>& frame) {
        if (frame.ndim() != 3 || frame.shape(2) != 3)
            throw std::invalid_argument("expected an HxWx3 array");
        const int h = static_cast<int>(frame.shape(0));
        const int w = static_cast<int>(frame.shape(1));
        std::vector<uint8_t> interleaved(frame.data(), frame.data() + frame.size());
        const auto planes = aos_to_soa(interleaved, w, h);
        return py::make_tuple(array_from_plane(planes[0]), array_from_plane(planes[1]),
                              array_from_plane(planes[2]));
    });

    m.def("builtin_scenario_names", &builtin_scenario_names);
    m.def(
        "generate_scenario",
        [](const std::string& name, uint64_t seed, const std::filesystem::path& out_dir) {
            ScenarioSpec spec = builtin_scenario(name);
            spec.seed = seed;
            generate_synthetic(spec, out_dir);
            return (out_dir / "manifest.json").string();
        },
        py::arg("name"), py::arg("seed"), py::arg("out_dir"));
    m.def(
        "generate_scenario_from_spec",
        [](const std::filesystem::path& spec_json, const std::filesystem::path& out_dir) {
            generate_synthetic(parse_scenario_spec(spec_json), out_dir);
            return (out_dir / "manifest.json").string();
        },
        py::arg("spec_json"), py::arg("out_dir"));

    m.def(
        "segment_sequence",
        [](const std::filesystem::path& manifest_path, const std::vector<std::string>& methods,
           const std::filesystem::path& out_dir, int workers, bool pipeline) {
            const SequenceManifest manifest = load_manifest(manifest_path);
            RunConfig config = RunConfig::defaults();
            config.workers = workers;
            config.pipeline = pipeline;
            const MethodSet method_set = MethodSet::parse(methods);
            SequenceSource source(manifest, false);
            FrameSet probe = load_frame(manifest, 0, false);
            SequenceProcessor processor(probe.r.width(), probe.r.height(), method_set, config,
                                        manifest.calibration, manifest.registered);
            std::vector<std::pair<std::string, const std::optional<MaskPlane> FrameMasks::*>>
                outputs;
            if (method_set.needs_rgb()) outputs.emplace_back("rgb", &FrameMasks::rgb);
            if (method_set.needs_depth()) outputs.emplace_back("depth", &FrameMasks::depth);
            if (method_set.fused) outputs.emplace_back("fused", &FrameMasks::fused);
            if (method_set.augmented) outputs.emplace_back("augmented", &FrameMasks::augmented);
            for (const auto& [name, _] : outputs)
                std::filesystem::create_directories(out_dir / name);
            const std::function<std::optional<FrameSet>()> src = [&] { return source.next(); };
            const std::function<FrameMasks(FrameSet&&)> proc = [&](FrameSet&& f) {
                return processor.process(std::move(f));
            };
            const std::function<void(FrameMasks&&)> sink = [&](FrameMasks&& fm) {
                char buf[32];
                std::snprintf(buf, sizeof buf, "%06d.png", fm.index);
                for (const auto& [name, member] : outputs)
                    if (fm.*member) save_mask(*(fm.*member), out_dir / name / buf);
            };
            const PipelineStats stats =
                run_pipeline<FrameSet, FrameMasks>(src, proc, sink, pipeline);
            return py::dict(py::arg("frames_processed") = stats.frames_processed,
                            py::arg("fps") = stats.fps,
                            py::arg("wall_seconds") = stats.wall_seconds);
        },
        py::arg("manifest"), py::arg("methods"), py::arg("out_dir"), py::arg("workers") = 0,
        py::arg("pipeline") = true);

    m.def("load_mask_png",
          [](const std::filesystem::path& path) { return array_from_plane(load_mask(path)); });
    m.def("default_config_json", [] { return RunConfig::defaults().to_json(); });
}
