#pragma once

#include <array>
#include <cstdint>

#include "rgbdseg/plane.hpp"

namespace rgbdseg {

struct Pinhole {
    double fx = 0.0, fy = 0.0;
    double cx = 0.0, cy = 0.0;
};

// Depth and color pinhole intrinsics plus the rigid depth->color transform.
struct CameraRig {
    Pinhole depth_cam;
    Pinhole color_cam;
    std::array<double, 9> rotation{1, 0, 0, 0, 1, 0, 0, 0, 1};  // row-major
    std::array<double, 3> translation_mm{0, 0, 0};
    double depth_scale = 1.0;  // millimeters per raw depth unit

    void validate() const;  // positive focals, orthonormal rotation
    static CameraRig identity(double fx = 525.0, double fy = 525.0, double cx = 319.5,
                              double cy = 239.5);
};

// Binary dilation with a square kernel of the given radius.
MaskPlane dilate_mask(const MaskPlane& mask, int radius);

// Reprojects each valid foreground depth pixel into the color grid:
// back-project through the depth intrinsics, apply (R, t), project through
// the color intrinsics, splat at the nearest pixel. Pixels with depth raw 0
// or landing outside the color frame are dropped; the result is dilated to
// close resampling holes.
MaskPlane register_mask(const MaskPlane& depth_mask, const Plane<uint16_t>& depth_raw,
                        const CameraRig& rig, int color_width, int color_height,
                        int dilation_radius = 1);

}  // namespace rgbdseg
