#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "rgbdseg/dataset.hpp"

namespace rgbdseg {

struct RegionRect {
    int x = 0, y = 0, w = 0, h = 0;
    bool contains(int px, int py) const {
        return px >= x && px < x + w && py >= y && py < y + h;
    }
};

struct Waypoint {
    int frame = 0;
    double x = 0.0, y = 0.0;  // top-left corner
};

struct ObjectSpec {
    int width = 0, height = 0;
    std::vector<Waypoint> waypoints;  // piecewise-linear trajectory, frame-indexed
    int depth_offset_mm = 0;          // object sits this much closer than the background
    std::array<uint8_t, 3> color{200, 60, 60};
};

struct IlluminationEvent {
    int start = 0, end = 0;  // half-open frame range
    double gain = 1.0;       // color-only multiplicative
};

struct ShadowEvent {
    int start = 0, end = 0;
    RegionRect region;
    double darken = 0.6;  // color-only multiplicative inside the region
};

struct FlickerEvent {
    int start = 0, end = 0;
    RegionRect region;
    double color_sigma = 0.0;     // additive noise on color inside the region
    double depth_sigma_mm = 0.0;  // additive noise on depth inside the region
};

struct BackgroundSpec {
    int base_depth_mm = 2000;
    int depth_texture_mm = 30;   // static per-pixel depth relief amplitude
    int color_texture = 8;       // static per-pixel color jitter amplitude
};

struct NoiseSpec {
    double color_sigma = 1.0;
    double depth_sigma_mm = 1.0;
};

struct ScenarioSpec {
    std::string name = "custom";
    int width = 640, height = 480;
    int frame_count = 0;
    uint64_t seed = 1;
    BackgroundSpec background;
    std::vector<ObjectSpec> objects;
    std::vector<IlluminationEvent> illumination;
    std::vector<ShadowEvent> shadows;
    std::vector<FlickerEvent> flicker;
    NoiseSpec noise;

    void validate() const;  // bounds, event ranges, trajectories inside frame
};

ScenarioSpec builtin_scenario(const std::string& name);  // "A", "B"
std::vector<std::string> builtin_scenario_names();

ScenarioSpec parse_scenario_spec(const std::filesystem::path& json_path);
std::string scenario_spec_json(const ScenarioSpec& spec);

// Renders one frame without touching the filesystem. Deterministic function
// of (spec, frame index): all noise comes from a counter-based hash keyed by
// (seed, frame, pixel, channel).
FrameSet render_frame(const ScenarioSpec& spec, int frame);

// Writes color/depth/ground-truth PNGs plus manifest.json under out_dir and
// returns the manifest. Byte-identical across runs with the same spec.
SequenceManifest generate_synthetic(const ScenarioSpec& spec,
                                    const std::filesystem::path& out_dir);

// Counter-based generator primitives (exposed for tests).
uint64_t hash_counter(uint64_t seed, uint64_t stream, uint64_t frame, uint64_t pixel,
                      uint64_t channel);
double gaussian_from_counter(uint64_t seed, uint64_t stream, uint64_t frame, uint64_t pixel,
                             uint64_t channel);

}  // namespace rgbdseg
