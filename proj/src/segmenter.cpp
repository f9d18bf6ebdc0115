#include "rgbdseg/segmenter.hpp"

#include <stdexcept>

#include "rgbdseg/engine.hpp"

namespace rgbdseg {

int bank_channels(BankMode mode) {
    switch (mode) {
        case BankMode::Color3: return 3;
        case BankMode::Depth1: return 1;
        case BankMode::Augmented4: return 4;
    }
    throw std::invalid_argument("unknown bank mode");
}

float DepthRescale::to_channel(float depth_mm) const {
    if (depth_mm <= min_mm) return 0.0f;
    if (depth_mm >= max_mm) return 255.0f;
    return (depth_mm - min_mm) * 255.0f / (max_mm - min_mm);
}

ModelBank::ModelBank(int width, int height, BankMode mode, const MixtureConfig& config)
    : width_(width), height_(height), components_(config.components),
      channels_(bank_channels(mode)), mode_(mode), initialized_(width, height, 0) {
    config.validate();
    means_.reserve(static_cast<size_t>(components_) * channels_);
    for (int i = 0; i < components_ * channels_; ++i) means_.emplace_back(width, height, 0.0f);
    for (int i = 0; i < components_; ++i) {
        variances_.emplace_back(width, height, config.initial_sigma * config.initial_sigma);
        weights_.emplace_back(width, height, i == 0 ? 1.0f : 0.0f);
    }
}

PixelMixture ModelBank::gather(int x, int y) const {
    PixelMixture m;
    m.components = components_;
    m.channels = channels_;
    for (int i = 0; i < components_; ++i) {
        for (int c = 0; c < channels_; ++c)
            m.mean(i)[c] = means_[i * channels_ + c].at(x, y);
        m.variances[i] = variances_[i].at(x, y);
        m.weights[i] = weights_[i].at(x, y);
    }
    return m;
}

void ModelBank::scatter(int x, int y, const PixelMixture& m) {
    for (int i = 0; i < components_; ++i) {
        for (int c = 0; c < channels_; ++c)
            means_[i * channels_ + c].at(x, y) = m.mean(i)[c];
        variances_[i].at(x, y) = m.variances[i];
        weights_[i].at(x, y) = m.weights[i];
    }
}

bool ModelBank::state_equals(const ModelBank& other) const {
    return width_ == other.width_ && height_ == other.height_ && mode_ == other.mode_ &&
           components_ == other.components_ && means_ == other.means_ &&
           variances_ == other.variances_ && weights_ == other.weights_ &&
           initialized_ == other.initialized_;
}

namespace {

// Shared per-pixel step: gathers the mixture, runs one observation through
// it, scatters the result back. `valid` is false for the depth no-return
// sentinel: the pixel is labeled Background and the model left untouched.
template <typename GatherValue>
MaskPlane run_bank(ModelBank& bank, const MixtureConfig& config, int workers,
                   GatherValue&& value_at) {
    config.validate();
    if (config.components != bank.components())
        throw std::invalid_argument("segment: config component count does not match bank");
    MaskPlane mask(bank.width(), bank.height(), 0);
    const int channels = bank.channels();
    parallel_for_rows(bank.height(), workers, [&](int y0, int y1) {
        float value[kMaxChannels];
        for (int y = y0; y < y1; ++y) {
            for (int x = 0; x < bank.width(); ++x) {
                bool valid = true;
                value_at(x, y, value, valid);
                if (!valid) continue;  // mask already Background
                std::span<const float> obs(value, static_cast<size_t>(channels));
                if (!bank.is_initialized(x, y)) {
                    bank.scatter(x, y, init_mixture(obs, config));
                    bank.initialized_plane().at(x, y) = 1;
                    continue;
                }
                PixelMixture m = bank.gather(x, y);
                const PixelLabel label = step_pixel(m, obs, config);
                bank.scatter(x, y, m);
                mask.at(x, y) = static_cast<uint8_t>(label);
            }
        }
    });
    return mask;
}

void check_plane(const ModelBank& bank, int w, int h, const char* what) {
    require_same_size(bank.width(), bank.height(), w, h, what);
}

}  // namespace

MaskPlane segment_color(ModelBank& bank, const Plane<uint8_t>& r, const Plane<uint8_t>& g,
                        const Plane<uint8_t>& b, const MixtureConfig& config, int workers) {
    if (bank.mode() != BankMode::Color3)
        throw std::invalid_argument("segment_color: bank mode is not Color3");
    check_plane(bank, r.width(), r.height(), "segment_color(r)");
    check_plane(bank, g.width(), g.height(), "segment_color(g)");
    check_plane(bank, b.width(), b.height(), "segment_color(b)");
    return run_bank(bank, config, workers, [&](int x, int y, float* v, bool&) {
        v[0] = r.at(x, y);
        v[1] = g.at(x, y);
        v[2] = b.at(x, y);
    });
}

MaskPlane segment_depth(ModelBank& bank, const Plane<uint16_t>& depth_mm,
                        const MixtureConfig& config, int workers) {
    if (bank.mode() != BankMode::Depth1)
        throw std::invalid_argument("segment_depth: bank mode is not Depth1");
    check_plane(bank, depth_mm.width(), depth_mm.height(), "segment_depth");
    return run_bank(bank, config, workers, [&](int x, int y, float* v, bool& valid) {
        const uint16_t raw = depth_mm.at(x, y);
        valid = raw != 0;
        v[0] = raw;
    });
}

MaskPlane segment_augmented(ModelBank& bank, const Plane<uint8_t>& r, const Plane<uint8_t>& g,
                            const Plane<uint8_t>& b, const Plane<uint16_t>& depth_mm,
                            const DepthRescale& rescale, const MixtureConfig& config,
                            int workers) {
    if (bank.mode() != BankMode::Augmented4)
        throw std::invalid_argument("segment_augmented: bank mode is not Augmented4");
    check_plane(bank, r.width(), r.height(), "segment_augmented(color)");
    check_plane(bank, depth_mm.width(), depth_mm.height(), "segment_augmented(depth)");
    return run_bank(bank, config, workers, [&](int x, int y, float* v, bool&) {
        v[0] = r.at(x, y);
        v[1] = g.at(x, y);
        v[2] = b.at(x, y);
        v[3] = rescale.to_channel(static_cast<float>(depth_mm.at(x, y)));
    });
}

AosModel::AosModel(int width, int height, BankMode mode, const MixtureConfig& config)
    : width_(width), height_(height), mode_(mode),
      records_(static_cast<size_t>(width) * height),
      initialized_(static_cast<size_t>(width) * height, 0) {
    config.validate();
}

MaskPlane AosModel::segment_color(const Plane<uint8_t>& r, const Plane<uint8_t>& g,
                                  const Plane<uint8_t>& b, const MixtureConfig& config) {
    if (mode_ != BankMode::Color3)
        throw std::invalid_argument("AosModel::segment_color: mode is not Color3");
    require_same_size(width_, height_, r.width(), r.height(), "AosModel::segment_color");
    MaskPlane mask(width_, height_, 0);
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            const size_t idx = static_cast<size_t>(y) * width_ + x;
            const float v[3] = {static_cast<float>(r.at(x, y)), static_cast<float>(g.at(x, y)),
                                static_cast<float>(b.at(x, y))};
            if (!initialized_[idx]) {
                records_[idx] = init_mixture(v, config);
                initialized_[idx] = 1;
                continue;
            }
            mask.at(x, y) = static_cast<uint8_t>(step_pixel(records_[idx], v, config));
        }
    }
    return mask;
}

MaskPlane AosModel::segment_depth(const Plane<uint16_t>& depth_mm, const MixtureConfig& config) {
    if (mode_ != BankMode::Depth1)
        throw std::invalid_argument("AosModel::segment_depth: mode is not Depth1");
    require_same_size(width_, height_, depth_mm.width(), depth_mm.height(),
                      "AosModel::segment_depth");
    MaskPlane mask(width_, height_, 0);
    for (int y = 0; y < height_; ++y) {
        for (int x = 0; x < width_; ++x) {
            const size_t idx = static_cast<size_t>(y) * width_ + x;
            const uint16_t raw = depth_mm.at(x, y);
            if (raw == 0) continue;
            const float v[1] = {static_cast<float>(raw)};
            if (!initialized_[idx]) {
                records_[idx] = init_mixture(v, config);
                initialized_[idx] = 1;
                continue;
            }
            mask.at(x, y) = static_cast<uint8_t>(step_pixel(records_[idx], v, config));
        }
    }
    return mask;
}

}  // namespace rgbdseg
