#pragma once

#include <cstdint>
#include <vector>

#include "rgbdseg/mixture.hpp"
#include "rgbdseg/plane.hpp"

namespace rgbdseg {

enum class BankMode { Color3, Depth1, Augmented4 };

int bank_channels(BankMode mode);

// Linear rescale of metric depth onto the 0..255 color range, for the
// augmented 4-channel mode.
struct DepthRescale {
    float min_mm = 0.0f;
    float max_mm = 4000.0f;
    float to_channel(float depth_mm) const;
};

// Whole-frame mixture state in structure-of-arrays layout: one contiguous
// plane per (parameter, component, channel). Pixels are fully independent.
class ModelBank {
public:
    ModelBank(int width, int height, BankMode mode, const MixtureConfig& config);

    int width() const { return width_; }
    int height() const { return height_; }
    BankMode mode() const { return mode_; }
    int components() const { return components_; }
    int channels() const { return channels_; }

    Plane<float>& mean_plane(int component, int channel) {
        return means_[component * channels_ + channel];
    }
    Plane<float>& variance_plane(int component) { return variances_[component]; }
    Plane<float>& weight_plane(int component) { return weights_[component]; }
    Plane<uint8_t>& initialized_plane() { return initialized_; }

    PixelMixture gather(int x, int y) const;
    void scatter(int x, int y, const PixelMixture& m);
    bool is_initialized(int x, int y) const { return initialized_.at(x, y) != 0; }

    bool state_equals(const ModelBank& other) const;

private:
    int width_, height_, components_, channels_;
    BankMode mode_;
    std::vector<Plane<float>> means_;      // [component * channels + channel]
    std::vector<Plane<float>> variances_;  // [component]
    std::vector<Plane<float>> weights_;    // [component]
    Plane<uint8_t> initialized_;
};

// Runs the per-pixel mixture step over a whole frame. Uninitialized pixels
// seed their mixture from the first observation and label Background. Depth
// raw value 0 means "no return": labeled Background, model untouched.
MaskPlane segment_color(ModelBank& bank, const Plane<uint8_t>& r, const Plane<uint8_t>& g,
                        const Plane<uint8_t>& b, const MixtureConfig& config, int workers = 1);

MaskPlane segment_depth(ModelBank& bank, const Plane<uint16_t>& depth_mm,
                        const MixtureConfig& config, int workers = 1);

MaskPlane segment_augmented(ModelBank& bank, const Plane<uint8_t>& r, const Plane<uint8_t>& g,
                            const Plane<uint8_t>& b, const Plane<uint16_t>& depth_mm,
                            const DepthRescale& rescale, const MixtureConfig& config,
                            int workers = 1);

// Array-of-structures model holding one PixelMixture record per pixel,
// processed sequentially. Same arithmetic as the SoA path; kept as the
// benchmark baseline layout.
class AosModel {
public:
    AosModel(int width, int height, BankMode mode, const MixtureConfig& config);

    MaskPlane segment_color(const Plane<uint8_t>& r, const Plane<uint8_t>& g,
                            const Plane<uint8_t>& b, const MixtureConfig& config);
    MaskPlane segment_depth(const Plane<uint16_t>& depth_mm, const MixtureConfig& config);

    const PixelMixture& pixel(int x, int y) const { return records_[y * width_ + x]; }

private:
    int width_, height_;
    BankMode mode_;
    std::vector<PixelMixture> records_;
    std::vector<uint8_t> initialized_;
};

}  // namespace rgbdseg
