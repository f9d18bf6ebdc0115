#include "rgbdseg/fusion.hpp"

#include <stdexcept>

namespace rgbdseg {

FusionState reset_state(int width, int height, uint8_t initial_label, int counter_limit) {
    if (counter_limit < 1) throw std::invalid_argument("reset_state: counter_limit must be >= 1");
    if (initial_label > 1) throw std::invalid_argument("reset_state: label must be 0 or 1");
    FusionState s;
    s.out = MaskPlane(width, height, initial_label);
    s.cpt = Plane<int8_t>(width, height, 0);
    s.counter_limit = counter_limit;
    return s;
}

MaskPlane fuse_step(FusionState& state, const MaskPlane& rgb_mask,
                    const MaskPlane& depth_mask_registered) {
    require_same_size(state.out.width(), state.out.height(), rgb_mask.width(), rgb_mask.height(),
                      "fuse_step(rgb)");
    require_same_size(state.out.width(), state.out.height(), depth_mask_registered.width(),
                      depth_mask_registered.height(), "fuse_step(depth)");
    const int limit = state.counter_limit;
    uint8_t* out = state.out.data();
    int8_t* cpt = state.cpt.data();
    const uint8_t* r = rgb_mask.data();
    const uint8_t* d = depth_mask_registered.data();
    const size_t n = state.out.size();
    for (size_t i = 0; i < n; ++i) {
        if (r[i] == d[i]) {
            out[i] = d[i];
            cpt[i] = 0;
        } else if (cpt[i] == limit) {
            out[i] = r[i];
            cpt[i] = 0;
        } else if (cpt[i] == -limit) {
            out[i] = d[i];
            cpt[i] = 0;
        } else if (out[i] == r[i]) {
            cpt[i] = static_cast<int8_t>(cpt[i] + 1);
        } else {
            cpt[i] = static_cast<int8_t>(cpt[i] - 1);
        }
    }
    return state.out;
}

}  // namespace rgbdseg
