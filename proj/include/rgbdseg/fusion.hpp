#pragma once

#include <cstdint>

#include "rgbdseg/plane.hpp"

namespace rgbdseg {

// Per-pixel fusion state: previous fused label and a signed disagreement
// counter bounded by counter_limit.
struct FusionState {
    MaskPlane out;
    Plane<int8_t> cpt;
    int counter_limit = 3;
};

FusionState reset_state(int width, int height, uint8_t initial_label = 0, int counter_limit = 3);

// Counter-based arbitration of the color and registered depth masks. Where
// the two masks agree the fused output follows them and the counter resets;
// a saturated counter hands the pixel to the stream it favours.
MaskPlane fuse_step(FusionState& state, const MaskPlane& rgb_mask,
                    const MaskPlane& depth_mask_registered);

}  // namespace rgbdseg
