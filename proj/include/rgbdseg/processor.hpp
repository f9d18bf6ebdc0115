#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "rgbdseg/dataset.hpp"
#include "rgbdseg/fusion.hpp"
#include "rgbdseg/segmenter.hpp"

namespace rgbdseg {

// Every parameter the engine consumes, with the built-in defaults for
// anything not set in the config file.
struct RunConfig {
    MixtureConfig color_gmm;      // sigma_init in 8-bit color units
    MixtureConfig depth_gmm;      // sigma_init in millimeters
    MixtureConfig augmented_gmm;  // 4-channel variant, all channels 0..255
    DepthRescale augmented_depth_range;  // depth -> fourth channel
    int fusion_counter_limit = 3;
    uint8_t fusion_initial_label = 0;
    int workers = 0;  // 0 = auto-detect
    bool pipeline = true;
    int dilation_radius = 1;
    int warmup_frames = 30;

    static RunConfig defaults();
    static RunConfig from_json_file(const std::filesystem::path& path);
    std::string to_json() const;
    void validate() const;
};

struct MethodSet {
    bool rgb = false;
    bool depth = false;
    bool fused = false;  // implies rgb + depth
    bool augmented = false;

    bool needs_rgb() const { return rgb || fused; }
    bool needs_depth() const { return depth || fused; }
    static MethodSet parse(const std::vector<std::string>& names);
};

struct FrameMasks {
    int index = 0;
    std::optional<MaskPlane> rgb;
    std::optional<MaskPlane> depth;  // in the depth camera grid
    std::optional<MaskPlane> fused;
    std::optional<MaskPlane> augmented;
    std::optional<MaskPlane> gt;
};

enum class BankLayout { Soa, Aos };

// Sequential-in-time frame processor: per-stream mixture banks plus the
// fusion state. Frames must arrive in index order; spatial parallelism is
// internal and does not change the output.
class SequenceProcessor {
public:
    SequenceProcessor(int width, int height, const MethodSet& methods, const RunConfig& config,
                      std::optional<CameraRig> rig = std::nullopt, bool registered = true,
                      BankLayout layout = BankLayout::Soa);

    FrameMasks process(FrameSet&& frame);

    const ModelBank* color_bank() const { return color_bank_.get(); }
    const ModelBank* depth_bank() const { return depth_bank_.get(); }

private:
    MethodSet methods_;
    RunConfig config_;
    std::optional<CameraRig> rig_;
    bool registered_;
    int workers_;
    std::unique_ptr<ModelBank> color_bank_, depth_bank_, augmented_bank_;
    std::unique_ptr<AosModel> color_aos_, depth_aos_;
    std::optional<FusionState> fusion_;
};

}  // namespace rgbdseg
