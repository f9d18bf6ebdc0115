#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "rgbdseg/plane.hpp"
#include "rgbdseg/registration.hpp"

namespace rgbdseg {

// One time step of an RGBD sequence: color planes, metric depth (raw 16-bit,
// millimeters at depth_scale 1), optional ground truth.
struct FrameSet {
    int index = 0;
    Plane<uint8_t> r, g, b;
    Plane<uint16_t> depth;
    std::optional<MaskPlane> gt;
};

struct FrameRef {
    int index = 0;
    std::string color;  // paths relative to the manifest directory
    std::string depth;
    std::string gt;  // empty when absent
};

struct SequenceManifest {
    std::string name;
    int frame_count = 0;
    double depth_scale = 1.0;
    bool registered = true;
    std::vector<FrameRef> frames;
    std::optional<CameraRig> calibration;
    std::filesystem::path root;  // directory the manifest was loaded from
};

SequenceManifest load_manifest(const std::filesystem::path& path);
void save_manifest(const SequenceManifest& manifest, const std::filesystem::path& path);

// PNG I/O. Color is 8-bit RGB, depth 16-bit grayscale, masks 8-bit {0,255}.
void save_color(const Plane<uint8_t>& r, const Plane<uint8_t>& g, const Plane<uint8_t>& b,
                const std::filesystem::path& path);
void load_color(const std::filesystem::path& path, Plane<uint8_t>& r, Plane<uint8_t>& g,
                Plane<uint8_t>& b);
void save_depth(const Plane<uint16_t>& depth, const std::filesystem::path& path);
Plane<uint16_t> load_depth(const std::filesystem::path& path);
void save_mask(const MaskPlane& mask, const std::filesystem::path& path);
MaskPlane load_mask(const std::filesystem::path& path);  // rejects non-binary pixels

// Loads one frame of a sequence, checking dimensions against the first frame.
FrameSet load_frame(const SequenceManifest& manifest, int index, bool want_gt = true);

// Ordered single-consumer frame provider over a manifest.
class SequenceSource {
public:
    explicit SequenceSource(SequenceManifest manifest, bool want_gt = true)
        : manifest_(std::move(manifest)), want_gt_(want_gt) {}

    std::optional<FrameSet> next();  // nullopt at end; throws SourceError on failure
    const SequenceManifest& manifest() const { return manifest_; }

private:
    SequenceManifest manifest_;
    bool want_gt_;
    int cursor_ = 0;
    int width_ = 0, height_ = 0;
};

}  // namespace rgbdseg
