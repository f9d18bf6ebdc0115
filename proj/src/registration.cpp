#include "rgbdseg/registration.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rgbdseg {

void CameraRig::validate() const {
    if (!(depth_cam.fx > 0.0 && depth_cam.fy > 0.0 && color_cam.fx > 0.0 && color_cam.fy > 0.0))
        throw std::invalid_argument("CameraRig: focal lengths must be positive");
    if (!(depth_scale > 0.0))
        throw std::invalid_argument("CameraRig: depth_scale must be positive");
    // R^T R == I within 1e-9
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            double dot = 0.0;
            for (int k = 0; k < 3; ++k) dot += rotation[k * 3 + i] * rotation[k * 3 + j];
            const double expected = (i == j) ? 1.0 : 0.0;
            if (std::fabs(dot - expected) > 1e-9)
                throw std::invalid_argument("CameraRig: rotation is not orthonormal");
        }
    }
}

CameraRig CameraRig::identity(double fx, double fy, double cx, double cy) {
    CameraRig rig;
    rig.depth_cam = {fx, fy, cx, cy};
    rig.color_cam = {fx, fy, cx, cy};
    return rig;
}

MaskPlane dilate_mask(const MaskPlane& mask, int radius) {
    if (radius <= 0) return mask;
    MaskPlane out(mask.width(), mask.height(), 0);
    for (int y = 0; y < mask.height(); ++y) {
        for (int x = 0; x < mask.width(); ++x) {
            if (!mask.at(x, y)) continue;
            const int x0 = std::max(0, x - radius);
            const int x1 = std::min(mask.width() - 1, x + radius);
            const int y0 = std::max(0, y - radius);
            const int y1 = std::min(mask.height() - 1, y + radius);
            for (int yy = y0; yy <= y1; ++yy)
                for (int xx = x0; xx <= x1; ++xx) out.at(xx, yy) = 1;
        }
    }
    return out;
}

MaskPlane register_mask(const MaskPlane& depth_mask, const Plane<uint16_t>& depth_raw,
                        const CameraRig& rig, int color_width, int color_height,
                        int dilation_radius) {
    require_same_size(depth_mask.width(), depth_mask.height(), depth_raw.width(),
                      depth_raw.height(), "register_mask");
    rig.validate();
    MaskPlane out(color_width, color_height, 0);
    const auto& R = rig.rotation;
    const auto& t = rig.translation_mm;
    for (int v = 0; v < depth_mask.height(); ++v) {
        for (int u = 0; u < depth_mask.width(); ++u) {
            if (!depth_mask.at(u, v)) continue;
            const uint16_t raw = depth_raw.at(u, v);
            if (raw == 0) continue;  // no range return, cannot be registered
            const double z = raw * rig.depth_scale;
            const double x = (u - rig.depth_cam.cx) * z / rig.depth_cam.fx;
            const double y = (v - rig.depth_cam.cy) * z / rig.depth_cam.fy;
            const double xc = R[0] * x + R[1] * y + R[2] * z + t[0];
            const double yc = R[3] * x + R[4] * y + R[5] * z + t[1];
            const double zc = R[6] * x + R[7] * y + R[8] * z + t[2];
            if (zc <= 0.0) continue;
            const long uc = std::lround(rig.color_cam.fx * xc / zc + rig.color_cam.cx);
            const long vc = std::lround(rig.color_cam.fy * yc / zc + rig.color_cam.cy);
            if (uc < 0 || uc >= color_width || vc < 0 || vc >= color_height) continue;
            out.at(static_cast<int>(uc), static_cast<int>(vc)) = 1;
        }
    }
    return dilate_mask(out, dilation_radius);
}

}  // namespace rgbdseg
