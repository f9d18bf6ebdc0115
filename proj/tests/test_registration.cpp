#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "rgbdseg/registration.hpp"

using namespace rgbdseg;

namespace {

CameraRig offset_rig() {
    CameraRig rig;
    rig.depth_cam = {500, 500, 320, 240};
    rig.color_cam = {500, 500, 320, 240};
    rig.translation_mm = {50, 0, 0};
    return rig;
}

}  // namespace

TEST_CASE("identity rig with zero dilation is the identity on valid masks") {
    const CameraRig rig = CameraRig::identity();
    std::mt19937 rng(4);
    MaskPlane mask(64, 48, 0);
    Plane<uint16_t> depth(64, 48, 0);
    for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 64; ++x) {
            mask.at(x, y) = rng() % 5 == 0;
            depth.at(x, y) = static_cast<uint16_t>(500 + rng() % 3000);
        }
    const MaskPlane out = register_mask(mask, depth, rig, 64, 48, 0);
    CHECK(out == mask);
}

TEST_CASE("hand-computed lateral offset lands 25 pixels to the right") {
    // fx=500, z=1000mm, t=(50,0,0): u' = 500*50/1000 + 320 = 345
    const CameraRig rig = offset_rig();
    MaskPlane mask(640, 480, 0);
    Plane<uint16_t> depth(640, 480, 1000);
    mask.at(320, 240) = 1;
    const MaskPlane out = register_mask(mask, depth, rig, 640, 480, 0);
    CHECK(out.at(345, 240) == 1);
    int count = 0;
    for (int y = 0; y < 480; ++y)
        for (int x = 0; x < 640; ++x) count += out.at(x, y);
    CHECK(count == 1);
}

TEST_CASE("invalid depth pixels are never splatted") {
    const CameraRig rig = CameraRig::identity();
    MaskPlane mask(16, 16, 1);
    Plane<uint16_t> depth(16, 16, 0);
    const MaskPlane out = register_mask(mask, depth, rig, 16, 16, 1);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x) CHECK(out.at(x, y) == 0);
}

TEST_CASE("pixels projecting outside the color frame are dropped") {
    CameraRig rig = offset_rig();
    rig.translation_mm = {100000, 0, 0};
    MaskPlane mask(64, 48, 1);
    Plane<uint16_t> depth(64, 48, 1000);
    const MaskPlane out = register_mask(mask, depth, rig, 64, 48, 0);
    for (int y = 0; y < 48; ++y)
        for (int x = 0; x < 64; ++x) CHECK(out.at(x, y) == 0);
}

TEST_CASE("dilation bounds the output foreground count") {
    const CameraRig rig = CameraRig::identity();
    std::mt19937 rng(8);
    MaskPlane mask(40, 40, 0);
    Plane<uint16_t> depth(40, 40, 1200);
    int input_fg = 0;
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 40; ++x) {
            mask.at(x, y) = rng() % 11 == 0;
            input_fg += mask.at(x, y);
        }
    const int radius = 1;
    const MaskPlane out = register_mask(mask, depth, rig, 40, 40, radius);
    int output_fg = 0;
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 40; ++x) output_fg += out.at(x, y);
    const int kernel_area = (2 * radius + 1) * (2 * radius + 1);
    CHECK(output_fg <= input_fg * kernel_area);
    // every input foreground pixel is still covered
    for (int y = 0; y < 40; ++y)
        for (int x = 0; x < 40; ++x)
            if (mask.at(x, y)) CHECK(out.at(x, y) == 1);
}

TEST_CASE("degenerate rigs are rejected") {
    CameraRig rig = CameraRig::identity();
    rig.color_cam.fx = 0.0;
    MaskPlane mask(4, 4, 0);
    Plane<uint16_t> depth(4, 4, 100);
    CHECK_THROWS_AS(register_mask(mask, depth, rig, 4, 4, 0), std::invalid_argument);

    CameraRig skew = CameraRig::identity();
    skew.rotation = {1, 0.5, 0, 0, 1, 0, 0, 0, 1};
    CHECK_THROWS_AS(register_mask(mask, depth, skew, 4, 4, 0), std::invalid_argument);
}
