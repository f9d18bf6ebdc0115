#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rgbdseg/engine.hpp"
#include "rgbdseg/eval.hpp"
#include "rgbdseg/processor.hpp"
#include "rgbdseg/synthetic.hpp"

namespace fs = std::filesystem;
using namespace rgbdseg;

namespace {

struct CommonOpts {
    std::string config_path;
    int workers = -1;       // -1 = take from config
    int pipeline = -1;      // -1 = take from config
    uint64_t seed = 1;
    std::string out_dir = "out";
};

RunConfig resolve_config(const CommonOpts& opts) {
    RunConfig config = opts.config_path.empty() ? RunConfig::defaults()
                                                : RunConfig::from_json_file(opts.config_path);
    if (opts.workers >= 0) config.workers = opts.workers;
    if (opts.pipeline >= 0) config.pipeline = opts.pipeline != 0;
    config.validate();
    return config;
}

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "JSON config file (defaults built in)");
    cmd->add_option("--workers", opts.workers, "worker threads, 0 = auto-detect");
    cmd->add_option("--pipeline", opts.pipeline, "three-stage pipeline on/off (1/0)");
    cmd->add_option("--seed", opts.seed, "scenario seed");
    cmd->add_option("-o,--out", opts.out_dir, "output directory");
}

std::string frame_name(int index) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%06d.png", index);
    return buf;
}

// Runs the processing chain over a manifest, writing masks per method when
// out_dir is set and/or collecting them in memory.
struct SegmentResult {
    std::map<std::string, std::vector<MaskPlane>> masks;
    std::vector<MaskPlane> gt;
    PipelineStats stats;
};

SegmentResult run_segmentation(const SequenceManifest& manifest, const MethodSet& methods,
                               const RunConfig& config, const std::optional<fs::path>& out_dir,
                               bool keep_masks, BankLayout layout = BankLayout::Soa,
                               bool want_gt = true) {
    SequenceSource source(manifest, want_gt);
    if (manifest.frame_count == 0)
        return {};
    std::optional<CameraRig> rig = manifest.calibration;
    FrameSet probe = load_frame(manifest, 0, false);
    SequenceProcessor processor(probe.r.width(), probe.r.height(), methods, config, rig,
                                manifest.registered, layout);

    std::vector<std::pair<std::string, const std::optional<MaskPlane> FrameMasks::*>> outputs;
    if (methods.needs_rgb()) outputs.emplace_back("rgb", &FrameMasks::rgb);
    if (methods.needs_depth()) outputs.emplace_back("depth", &FrameMasks::depth);
    if (methods.fused) outputs.emplace_back("fused", &FrameMasks::fused);
    if (methods.augmented) outputs.emplace_back("augmented", &FrameMasks::augmented);

    if (out_dir)
        for (const auto& [name, _] : outputs) fs::create_directories(*out_dir / name);

    SegmentResult result;
    const std::function<std::optional<FrameSet>()> src = [&]() { return source.next(); };
    const std::function<FrameMasks(FrameSet&&)> process = [&](FrameSet&& frame) {
        return processor.process(std::move(frame));
    };
    const std::function<void(FrameMasks&&)> sink = [&](FrameMasks&& fm) {
        for (const auto& [name, member] : outputs) {
            const auto& mask = fm.*member;
            if (!mask) continue;
            if (out_dir) save_mask(*mask, *out_dir / name / frame_name(fm.index));
            if (keep_masks) result.masks[name].push_back(*mask);
        }
        if (keep_masks && fm.gt) result.gt.push_back(std::move(*fm.gt));
    };
    result.stats = run_pipeline<FrameSet, FrameMasks>(src, process, sink, config.pipeline);
    return result;
}

int cmd_synth(const CommonOpts& opts, const std::string& scenario, const std::string& spec_path) {
    ScenarioSpec spec;
    if (!spec_path.empty())
        spec = parse_scenario_spec(spec_path);
    else
        spec = builtin_scenario(scenario);
    spec.seed = opts.seed;
    const SequenceManifest manifest = generate_synthetic(spec, opts.out_dir);
    std::cout << (fs::path(opts.out_dir) / "manifest.json").string() << "\n";
    (void)manifest;
    return 0;
}

int cmd_segment(const CommonOpts& opts, const std::string& manifest_path,
                const std::vector<std::string>& method_names) {
    const RunConfig config = resolve_config(opts);
    const MethodSet methods = MethodSet::parse(method_names);
    const SequenceManifest manifest = load_manifest(manifest_path);
    run_segmentation(manifest, methods, config, fs::path(opts.out_dir), false,
                     BankLayout::Soa, false);
    std::cout << "wrote masks for " << manifest.frame_count << " frames to " << opts.out_dir
              << "\n";
    return 0;
}

int cmd_eval(const CommonOpts& opts, const std::string& manifest_path,
             const std::vector<std::string>& pred_specs) {
    const RunConfig config = resolve_config(opts);
    const SequenceManifest manifest = load_manifest(manifest_path);
    for (const auto& f : manifest.frames)
        if (f.gt.empty())
            throw std::runtime_error("manifest has no ground truth for frame " +
                                     std::to_string(f.index));

    std::vector<MaskPlane> gt_store;
    gt_store.reserve(manifest.frame_count);
    for (int i = 0; i < manifest.frame_count; ++i)
        gt_store.push_back(load_mask(manifest.root / manifest.frames[i].gt));

    std::map<std::string, std::vector<MaskPlane>> pred_store;
    for (const auto& spec : pred_specs) {
        const auto eq = spec.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("--pred expects method=dir, got '" + spec + "'");
        const std::string method = spec.substr(0, eq);
        const fs::path dir = spec.substr(eq + 1);
        auto& store = pred_store[method];
        for (int i = 0; i < manifest.frame_count; ++i) {
            const fs::path p = dir / frame_name(i);
            if (!fs::exists(p))
                throw std::runtime_error("missing prediction for frame " + std::to_string(i) +
                                         ": " + p.string());
            store.push_back(load_mask(p));
        }
    }

    std::vector<const MaskPlane*> gt;
    for (const auto& m : gt_store) gt.push_back(&m);
    std::map<std::string, std::vector<const MaskPlane*>> preds;
    for (const auto& [method, store] : pred_store) {
        auto& v = preds[method];
        for (const auto& m : store) v.push_back(&m);
    }

    const EvalReport report = evaluate_masks(preds, gt, config.warmup_frames);
    fs::create_directories(opts.out_dir);
    std::ofstream csv(fs::path(opts.out_dir) / "metrics.csv");
    report.write_csv(csv);
    std::ofstream(fs::path(opts.out_dir) / "summary.json") << report.summary_json() << "\n";
    std::cout.setf(std::ios::fixed);
    std::cout.precision(3);
    for (const auto& [method, series] : report.methods)
        std::cout << method << " pooled F1 " << series.pooled_f1 << "\n";
    return 0;
}

int cmd_bench(const CommonOpts& opts, const std::string& manifest_path) {
    const RunConfig base_config = resolve_config(opts);
    const SequenceManifest manifest = load_manifest(manifest_path);
    MethodSet methods;
    methods.fused = true;

    struct BenchRow {
        std::string name;
        BankLayout layout;
        int workers;
        bool pipeline;
    };
    const std::vector<BenchRow> rows = {
        {"sequential-aos", BankLayout::Aos, 1, false},
        {"parallel-soa", BankLayout::Soa, 0, false},
        {"parallel-soa-pipelined", BankLayout::Soa, 0, true},
    };

    nlohmann::json out;
    std::cout << "configuration            fps      frames  wall_s\n";
    for (const auto& row : rows) {
        RunConfig config = base_config;
        config.workers = row.workers;
        config.pipeline = row.pipeline;
        const SegmentResult res = run_segmentation(manifest, methods, config, std::nullopt,
                                                   false, row.layout, false);
        std::cout.setf(std::ios::fixed);
        std::cout.precision(2);
        std::cout << row.name;
        for (size_t i = row.name.size(); i < 25; ++i) std::cout << ' ';
        std::cout << res.stats.fps << "    " << res.stats.frames_processed << "     "
                  << res.stats.wall_seconds << "\n";
        out[row.name] = {{"fps", res.stats.fps},
                         {"frames_processed", res.stats.frames_processed},
                         {"wall_seconds", res.stats.wall_seconds}};
    }
    fs::create_directories(opts.out_dir);
    std::ofstream(fs::path(opts.out_dir) / "bench.json") << out.dump(2) << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"RGBD background subtraction: per-pixel mixture models on color and depth "
                 "with counter-based mask fusion"};
    app.require_subcommand(0, 1);

    CommonOpts synth_opts, segment_opts, eval_opts, bench_opts;
    std::string scenario = "A", spec_path;
    std::string manifest_path;
    std::vector<std::string> method_names = {"fused"};
    std::vector<std::string> pred_specs;
    bool dump_config = false;

    app.add_flag("--dump-config", dump_config, "print the built-in default config and exit");

    auto* synth = app.add_subcommand("synth", "generate a synthetic RGBD sequence");
    synth->add_option("--scenario", scenario, "built-in scenario name (A, B)");
    synth->add_option("--spec", spec_path, "scenario spec JSON file (overrides --scenario)");
    add_common(synth, synth_opts);

    auto* segment = app.add_subcommand("segment", "segment a sequence and write mask PNGs");
    segment->add_option("manifest", manifest_path, "sequence manifest")->required();
    segment->add_option("--methods", method_names,
                        "methods to run: rgb, depth, fused, augmented")
        ->delimiter(',');
    add_common(segment, segment_opts);

    auto* eval = app.add_subcommand("eval", "evaluate mask directories against ground truth");
    eval->add_option("manifest", manifest_path, "sequence manifest with ground truth")
        ->required();
    eval->add_option("--pred", pred_specs, "method=mask-dir (repeatable)")->required();
    add_common(eval, eval_opts);

    auto* bench = app.add_subcommand("bench", "throughput of the engine configurations");
    bench->add_option("manifest", manifest_path, "sequence manifest")->required();
    add_common(bench, bench_opts);

    try {
        app.parse(argc, argv);
        if (dump_config) {
            std::cout << RunConfig::defaults().to_json() << "\n";
            return 0;
        }
        if (synth->parsed()) return cmd_synth(synth_opts, scenario, spec_path);
        if (segment->parsed()) return cmd_segment(segment_opts, manifest_path, method_names);
        if (eval->parsed()) return cmd_eval(eval_opts, manifest_path, pred_specs);
        if (bench->parsed()) return cmd_bench(bench_opts, manifest_path);
        std::cout << app.help();
        return 1;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << std::endl;
        return 1;
    }
    return 0;
}
