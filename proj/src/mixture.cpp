#include "rgbdseg/mixture.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rgbdseg {

void MixtureConfig::validate() const {
    if (components < kMinComponents || components > kMaxComponents)
        throw std::invalid_argument("MixtureConfig: components must be in [3,5]");
    if (!(learning_rate > 0.0f && learning_rate < 1.0f))
        throw std::invalid_argument("MixtureConfig: learning_rate must be in (0,1)");
    if (!(background_threshold > 0.0f && background_threshold < 1.0f))
        throw std::invalid_argument("MixtureConfig: background_threshold must be in (0,1)");
    if (!(match_lambda > 0.0f))
        throw std::invalid_argument("MixtureConfig: match_lambda must be positive");
    if (!(initial_sigma > 0.0f))
        throw std::invalid_argument("MixtureConfig: initial_sigma must be positive");
    if (!(initial_weight > 0.0f && initial_weight < 1.0f))
        throw std::invalid_argument("MixtureConfig: initial_weight must be in (0,1)");
    if (!(variance_floor > 0.0f))
        throw std::invalid_argument("MixtureConfig: variance_floor must be positive");
}

namespace {

// Component indices sorted by w/sigma descending, index ascending on ties.
// M <= 5, insertion sort.
void rank_components(const PixelMixture& m, std::array<int, kMaxComponents>& order) {
    std::array<float, kMaxComponents> fitness;
    for (int i = 0; i < m.components; ++i) {
        fitness[i] = m.weights[i] / std::sqrt(m.variances[i]);
        order[i] = i;
    }
    for (int i = 1; i < m.components; ++i) {
        int idx = order[i];
        int j = i;
        while (j > 0 && fitness[order[j - 1]] < fitness[idx]) {
            order[j] = order[j - 1];
            --j;
        }
        order[j] = idx;
    }
}

void normalize_weights(PixelMixture& m) {
    float sum = 0.0f;
    for (int i = 0; i < m.components; ++i) sum += m.weights[i];
    if (sum > 0.0f) {
        const float inv = 1.0f / sum;
        for (int i = 0; i < m.components; ++i) m.weights[i] *= inv;
    }
}

}  // namespace

PixelMixture init_mixture(std::span<const float> first_value, const MixtureConfig& config) {
    config.validate();
    if (first_value.empty() || first_value.size() > kMaxChannels)
        throw std::invalid_argument("init_mixture: bad observation dimensionality");
    PixelMixture m;
    m.components = config.components;
    m.channels = static_cast<int>(first_value.size());
    const float var0 = config.initial_sigma * config.initial_sigma;
    for (int i = 0; i < m.components; ++i) {
        m.variances[i] = var0;
        m.weights[i] = (i == 0) ? 1.0f : 0.0f;
    }
    for (int c = 0; c < m.channels; ++c) m.mean(0)[c] = first_value[c];
    return m;
}

std::optional<int> match_component(const PixelMixture& mixture, std::span<const float> value,
                                   const MixtureConfig& config) {
    std::array<int, kMaxComponents> order;
    rank_components(mixture, order);
    for (int k = 0; k < mixture.components; ++k) {
        const int i = order[k];
        const float band = config.match_lambda * std::sqrt(mixture.variances[i]);
        const float* mu = mixture.mean(i);
        bool within = true;
        for (int c = 0; c < mixture.channels; ++c) {
            if (!(std::fabs(value[c] - mu[c]) < band)) {
                within = false;
                break;
            }
        }
        if (within) return i;
    }
    return std::nullopt;
}

void update_mixture(PixelMixture& mixture, std::span<const float> value,
                    std::optional<int> matched, const MixtureConfig& config) {
    const float alpha = config.learning_rate;
    if (matched) {
        const int mi = *matched;
        for (int i = 0; i < mixture.components; ++i)
            mixture.weights[i] = (1.0f - alpha) * mixture.weights[i] + (i == mi ? alpha : 0.0f);
        normalize_weights(mixture);

        const float rho = alpha / std::max(mixture.weights[mi], alpha);
        float* mu = mixture.mean(mi);
        float dist2 = 0.0f;
        for (int c = 0; c < mixture.channels; ++c) {
            mu[c] = (1.0f - rho) * mu[c] + rho * value[c];
            const float d = value[c] - mu[c];
            dist2 += d * d;
        }
        const float var = (1.0f - rho) * mixture.variances[mi] +
                          rho * dist2 / static_cast<float>(mixture.channels);
        mixture.variances[mi] = std::max(var, config.variance_floor);
    } else {
        // Replace the least-confident component.
        int weakest = 0;
        float worst = mixture.weights[0] / std::sqrt(mixture.variances[0]);
        for (int i = 1; i < mixture.components; ++i) {
            const float f = mixture.weights[i] / std::sqrt(mixture.variances[i]);
            if (f < worst) {
                worst = f;
                weakest = i;
            }
        }
        float* mu = mixture.mean(weakest);
        for (int c = 0; c < mixture.channels; ++c) mu[c] = value[c];
        mixture.variances[weakest] = config.initial_sigma * config.initial_sigma;
        mixture.weights[weakest] = config.initial_weight;
        normalize_weights(mixture);
    }
}

PixelLabel classify(const PixelMixture& mixture, std::optional<int> matched,
                    const MixtureConfig& config) {
    if (!matched) return PixelLabel::Foreground;
    std::array<int, kMaxComponents> order;
    rank_components(mixture, order);
    float cumulative = 0.0f;
    for (int k = 0; k < mixture.components; ++k) {
        const int i = order[k];
        cumulative += mixture.weights[i];
        if (i == *matched) return PixelLabel::Background;
        if (cumulative > config.background_threshold) break;  // prefix closed without the match
    }
    return PixelLabel::Foreground;
}

PixelLabel step_pixel(PixelMixture& mixture, std::span<const float> value,
                      const MixtureConfig& config) {
    const auto matched = match_component(mixture, value, config);
    const PixelLabel label = classify(mixture, matched, config);
    update_mixture(mixture, value, matched, config);
    return label;
}

}  // namespace rgbdseg
