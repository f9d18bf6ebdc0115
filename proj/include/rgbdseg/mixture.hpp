#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>

namespace rgbdseg {

inline constexpr int kMaxComponents = 5;
inline constexpr int kMinComponents = 3;
inline constexpr int kMaxChannels = 4;

enum class PixelLabel : uint8_t { Background = 0, Foreground = 1 };

struct MixtureConfig {
    int components = 3;               // M, 3..5
    float learning_rate = 0.05f;      // alpha
    float match_lambda = 2.5f;        // stddev multiplier for the match band
    float background_threshold = 0.8f;  // T
    float initial_sigma = 15.0f;      // sigma assigned to fresh components
    float initial_weight = 0.05f;     // weight of a replacement component
    float variance_floor = 4.0f;

    void validate() const;  // throws std::invalid_argument
};

// One pixel's mixture: per-component mean vector, a scalar variance shared
// across channels, and a weight. Weights sum to 1.
struct PixelMixture {
    int components = 0;
    int channels = 0;
    std::array<float, kMaxComponents * kMaxChannels> means{};
    std::array<float, kMaxComponents> variances{};
    std::array<float, kMaxComponents> weights{};

    float* mean(int i) { return means.data() + static_cast<size_t>(i) * channels; }
    const float* mean(int i) const { return means.data() + static_cast<size_t>(i) * channels; }

    friend bool operator==(const PixelMixture&, const PixelMixture&) = default;
};

PixelMixture init_mixture(std::span<const float> first_value, const MixtureConfig& config);

// Scans components in decreasing w/sigma order; returns the first whose mean
// lies within lambda*sigma of the value in every channel.
std::optional<int> match_component(const PixelMixture& mixture, std::span<const float> value,
                                   const MixtureConfig& config);

void update_mixture(PixelMixture& mixture, std::span<const float> value,
                    std::optional<int> matched, const MixtureConfig& config);

// Background iff matched and the matched component sits inside the smallest
// w/sigma-ranked prefix whose cumulative weight exceeds T.
PixelLabel classify(const PixelMixture& mixture, std::optional<int> matched,
                    const MixtureConfig& config);

// match -> classify -> update, in that order.
PixelLabel step_pixel(PixelMixture& mixture, std::span<const float> value,
                      const MixtureConfig& config);

}  // namespace rgbdseg
