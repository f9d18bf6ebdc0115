#include "rgbdseg/processor.hpp"

#include <fstream>

#include <nlohmann/json.hpp>

#include "rgbdseg/engine.hpp"

namespace rgbdseg {

namespace {

nlohmann::json mixture_to_json(const MixtureConfig& c) {
    return {{"components", c.components},
            {"learning_rate", c.learning_rate},
            {"match_lambda", c.match_lambda},
            {"background_threshold", c.background_threshold},
            {"initial_sigma", c.initial_sigma},
            {"initial_weight", c.initial_weight},
            {"variance_floor", c.variance_floor}};
}

void mixture_from_json(const nlohmann::json& j, MixtureConfig& c) {
    c.components = j.value("components", c.components);
    c.learning_rate = j.value("learning_rate", c.learning_rate);
    c.match_lambda = j.value("match_lambda", c.match_lambda);
    c.background_threshold = j.value("background_threshold", c.background_threshold);
    c.initial_sigma = j.value("initial_sigma", c.initial_sigma);
    c.initial_weight = j.value("initial_weight", c.initial_weight);
    c.variance_floor = j.value("variance_floor", c.variance_floor);
}

}  // namespace

RunConfig RunConfig::defaults() {
    RunConfig c;
    // Depth adapts slower than color: color must recover from illumination
    // swings in a few frames, while the depth model must hold the scene
    // geometry long enough that a slow object is not absorbed into it.
    c.depth_gmm.learning_rate = 0.01f;
    c.depth_gmm.initial_sigma = 100.0f;  // millimeters
    return c;
}

void RunConfig::validate() const {
    color_gmm.validate();
    depth_gmm.validate();
    augmented_gmm.validate();
    if (fusion_counter_limit < 1)
        throw std::invalid_argument("config: fusion counter_limit must be >= 1");
    if (fusion_initial_label > 1)
        throw std::invalid_argument("config: fusion initial_label must be 0 or 1");
    if (workers < 0) throw std::invalid_argument("config: workers must be >= 0");
    if (dilation_radius < 0) throw std::invalid_argument("config: dilation_radius must be >= 0");
    if (warmup_frames < 0) throw std::invalid_argument("config: warmup_frames must be >= 0");
    if (!(augmented_depth_range.max_mm > augmented_depth_range.min_mm))
        throw std::invalid_argument("config: augmented depth range is empty");
}

RunConfig RunConfig::from_json_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error(path.string() + ": cannot open config");
    nlohmann::json j;
    in >> j;
    RunConfig c = defaults();
    if (j.contains("color_gmm")) mixture_from_json(j["color_gmm"], c.color_gmm);
    if (j.contains("depth_gmm")) mixture_from_json(j["depth_gmm"], c.depth_gmm);
    if (j.contains("augmented_gmm")) mixture_from_json(j["augmented_gmm"], c.augmented_gmm);
    if (j.contains("augmented_depth_range")) {
        c.augmented_depth_range.min_mm = j["augmented_depth_range"].value("min_mm", 0.0f);
        c.augmented_depth_range.max_mm = j["augmented_depth_range"].value("max_mm", 4000.0f);
    }
    if (j.contains("fusion")) {
        c.fusion_counter_limit = j["fusion"].value("counter_limit", c.fusion_counter_limit);
        c.fusion_initial_label =
            static_cast<uint8_t>(j["fusion"].value("initial_label", int{c.fusion_initial_label}));
    }
    if (j.contains("engine")) {
        c.workers = j["engine"].value("workers", c.workers);
        c.pipeline = j["engine"].value("pipeline", c.pipeline);
    }
    if (j.contains("registration"))
        c.dilation_radius = j["registration"].value("dilation_radius", c.dilation_radius);
    if (j.contains("evaluation"))
        c.warmup_frames = j["evaluation"].value("warmup_frames", c.warmup_frames);
    c.validate();
    return c;
}

std::string RunConfig::to_json() const {
    nlohmann::json j;
    j["color_gmm"] = mixture_to_json(color_gmm);
    j["depth_gmm"] = mixture_to_json(depth_gmm);
    j["augmented_gmm"] = mixture_to_json(augmented_gmm);
    j["augmented_depth_range"] = {{"min_mm", augmented_depth_range.min_mm},
                                  {"max_mm", augmented_depth_range.max_mm}};
    j["fusion"] = {{"counter_limit", fusion_counter_limit},
                   {"initial_label", int{fusion_initial_label}}};
    j["engine"] = {{"workers", workers}, {"pipeline", pipeline}};
    j["registration"] = {{"dilation_radius", dilation_radius}};
    j["evaluation"] = {{"warmup_frames", warmup_frames}};
    return j.dump(2);
}

MethodSet MethodSet::parse(const std::vector<std::string>& names) {
    MethodSet m;
    for (const auto& n : names) {
        if (n == "rgb")
            m.rgb = true;
        else if (n == "depth")
            m.depth = true;
        else if (n == "fused")
            m.fused = true;
        else if (n == "augmented")
            m.augmented = true;
        else
            throw std::invalid_argument("unknown method '" + n +
                                        "' (known: rgb, depth, fused, augmented)");
    }
    if (!m.rgb && !m.depth && !m.fused && !m.augmented)
        throw std::invalid_argument("no methods requested");
    return m;
}

SequenceProcessor::SequenceProcessor(int width, int height, const MethodSet& methods,
                                     const RunConfig& config, std::optional<CameraRig> rig,
                                     bool registered, BankLayout layout)
    : methods_(methods), config_(config), rig_(std::move(rig)), registered_(registered),
      workers_(resolve_workers(config.workers)) {
    config_.validate();
    if (!registered_ && !rig_)
        throw std::invalid_argument("unregistered sequence requires calibration");
    if (layout == BankLayout::Aos) {
        if (methods_.augmented)
            throw std::invalid_argument("AoS layout does not support the augmented method");
        if (methods_.needs_rgb())
            color_aos_ = std::make_unique<AosModel>(width, height, BankMode::Color3,
                                                    config_.color_gmm);
        if (methods_.needs_depth())
            depth_aos_ = std::make_unique<AosModel>(width, height, BankMode::Depth1,
                                                    config_.depth_gmm);
    } else {
        if (methods_.needs_rgb())
            color_bank_ = std::make_unique<ModelBank>(width, height, BankMode::Color3,
                                                      config_.color_gmm);
        if (methods_.needs_depth())
            depth_bank_ = std::make_unique<ModelBank>(width, height, BankMode::Depth1,
                                                      config_.depth_gmm);
        if (methods_.augmented)
            augmented_bank_ = std::make_unique<ModelBank>(width, height, BankMode::Augmented4,
                                                          config_.augmented_gmm);
    }
    if (methods_.fused)
        fusion_ = reset_state(width, height, config_.fusion_initial_label,
                              config_.fusion_counter_limit);
}

FrameMasks SequenceProcessor::process(FrameSet&& frame) {
    FrameMasks out;
    out.index = frame.index;
    if (color_bank_)
        out.rgb = segment_color(*color_bank_, frame.r, frame.g, frame.b, config_.color_gmm,
                                workers_);
    else if (color_aos_)
        out.rgb = color_aos_->segment_color(frame.r, frame.g, frame.b, config_.color_gmm);
    if (depth_bank_)
        out.depth = segment_depth(*depth_bank_, frame.depth, config_.depth_gmm, workers_);
    else if (depth_aos_)
        out.depth = depth_aos_->segment_depth(frame.depth, config_.depth_gmm);
    if (augmented_bank_)
        out.augmented = segment_augmented(*augmented_bank_, frame.r, frame.g, frame.b,
                                          frame.depth, config_.augmented_depth_range,
                                          config_.augmented_gmm, workers_);
    if (methods_.fused) {
        MaskPlane depth_in_color = registered_
                                       ? *out.depth
                                       : register_mask(*out.depth, frame.depth, *rig_,
                                                       frame.r.width(), frame.r.height(),
                                                       config_.dilation_radius);
        out.fused = fuse_step(*fusion_, *out.rgb, depth_in_color);
    }
    out.gt = std::move(frame.gt);
    return out;
}

}  // namespace rgbdseg
