#include "rgbdseg/synthetic.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rgbdseg {

namespace {

// splitmix64 finalizer
uint64_t mix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Noise stream tags. Depth streams never share a tag with color streams, so
// color-only events cannot perturb the depth bytes.
enum Stream : uint64_t {
    kBgColorTexture = 1,
    kBgDepthTexture = 2,
    kSensorColor = 3,
    kSensorDepth = 4,
    kFlickerColor = 5,
    kFlickerDepth = 6,
};

struct ObjectPlacement {
    RegionRect rect;
    const ObjectSpec* object;
};

RegionRect object_rect_at(const ObjectSpec& obj, int frame) {
    const auto& wp = obj.waypoints;
    double x = wp.front().x, y = wp.front().y;
    if (frame >= wp.back().frame) {
        x = wp.back().x;
        y = wp.back().y;
    } else if (frame > wp.front().frame) {
        for (size_t i = 1; i < wp.size(); ++i) {
            if (frame <= wp[i].frame) {
                const double t = static_cast<double>(frame - wp[i - 1].frame) /
                                 static_cast<double>(wp[i].frame - wp[i - 1].frame);
                x = wp[i - 1].x + t * (wp[i].x - wp[i - 1].x);
                y = wp[i - 1].y + t * (wp[i].y - wp[i - 1].y);
                break;
            }
        }
    }
    return RegionRect{static_cast<int>(std::lround(x)), static_cast<int>(std::lround(y)),
                      obj.width, obj.height};
}

uint8_t clamp_u8(double v) {
    return static_cast<uint8_t>(std::clamp(std::lround(v), 0L, 255L));
}

}  // namespace

uint64_t hash_counter(uint64_t seed, uint64_t stream, uint64_t frame, uint64_t pixel,
                      uint64_t channel) {
    uint64_t h = mix64(seed ^ 0x6a09e667f3bcc908ULL);
    h = mix64(h ^ stream);
    h = mix64(h ^ frame);
    h = mix64(h ^ pixel);
    h = mix64(h ^ channel);
    return h;
}

double gaussian_from_counter(uint64_t seed, uint64_t stream, uint64_t frame, uint64_t pixel,
                             uint64_t channel) {
    const uint64_t h = hash_counter(seed, stream, frame, pixel, channel);
    // Box-Muller from the two 32-bit halves.
    const double u1 = (static_cast<double>(h >> 32) + 1.0) / 4294967297.0;  // (0,1]
    const double u2 = static_cast<double>(h & 0xffffffffULL) / 4294967296.0;
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

void ScenarioSpec::validate() const {
    if (width <= 0 || height <= 0) throw std::invalid_argument("scenario: non-positive dimensions");
    if (frame_count <= 0) throw std::invalid_argument("scenario: frame_count must be positive");
    if (background.base_depth_mm <= background.depth_texture_mm)
        throw std::invalid_argument("scenario: base depth must exceed depth texture amplitude");
    const auto check_range = [&](int start, int end, const char* what) {
        if (start < 0 || end > frame_count || start >= end)
            throw std::invalid_argument(std::string("scenario: ") + what +
                                        " event range outside [0, frame_count)");
    };
    for (const auto& e : illumination) {
        check_range(e.start, e.end, "illumination");
        if (!(e.gain > 0.0)) throw std::invalid_argument("scenario: illumination gain must be > 0");
    }
    for (const auto& e : shadows) check_range(e.start, e.end, "shadow");
    for (const auto& e : flicker) check_range(e.start, e.end, "flicker");
    for (const auto& obj : objects) {
        if (obj.width <= 0 || obj.height <= 0)
            throw std::invalid_argument("scenario: object with non-positive size");
        if (obj.waypoints.empty()) throw std::invalid_argument("scenario: object without waypoints");
        for (size_t i = 1; i < obj.waypoints.size(); ++i)
            if (obj.waypoints[i].frame <= obj.waypoints[i - 1].frame)
                throw std::invalid_argument("scenario: waypoint frames must increase");
        if (obj.depth_offset_mm <= 0 || obj.depth_offset_mm >= background.base_depth_mm)
            throw std::invalid_argument("scenario: object depth offset outside (0, base depth)");
        for (int f = 0; f < frame_count; ++f) {
            const RegionRect r = object_rect_at(obj, f);
            if (r.x < 0 || r.y < 0 || r.x + r.w > width || r.y + r.h > height)
                throw std::invalid_argument("scenario: object leaves the frame at frame " +
                                            std::to_string(f));
        }
    }
}

FrameSet render_frame(const ScenarioSpec& spec, int frame) {
    const int w = spec.width, h = spec.height;
    FrameSet fs;
    fs.index = frame;
    fs.r = Plane<uint8_t>(w, h);
    fs.g = Plane<uint8_t>(w, h);
    fs.b = Plane<uint8_t>(w, h);
    fs.depth = Plane<uint16_t>(w, h);
    fs.gt = MaskPlane(w, h, 0);

    double gain = 1.0;
    for (const auto& e : spec.illumination)
        if (frame >= e.start && frame < e.end) gain *= e.gain;

    std::vector<ObjectPlacement> placed;
    for (const auto& obj : spec.objects)
        placed.push_back({object_rect_at(obj, frame), &obj});

    const uint64_t seed = spec.seed;
    const double two_tex = 2.0 * spec.background.color_texture + 1.0;
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const uint64_t pix = static_cast<uint64_t>(y) * w + x;

            // Static background: smooth gradients plus frozen per-pixel texture.
            double base[3] = {60.0 + 90.0 * x / w, 70.0 + 90.0 * y / h,
                              80.0 + 80.0 * (x + y) / (w + h)};
            for (int c = 0; c < 3; ++c) {
                const uint64_t t = hash_counter(seed, kBgColorTexture, 0, pix, c);
                base[c] += static_cast<double>(t % static_cast<uint64_t>(two_tex)) -
                           spec.background.color_texture;
            }
            double depth = spec.background.base_depth_mm;
            if (spec.background.depth_texture_mm > 0) {
                const uint64_t t = hash_counter(seed, kBgDepthTexture, 0, pix, 0);
                depth += static_cast<double>(
                             t % static_cast<uint64_t>(2 * spec.background.depth_texture_mm + 1)) -
                         spec.background.depth_texture_mm;
            }

            // Topmost object wins.
            const ObjectSpec* covering = nullptr;
            for (const auto& p : placed)
                if (p.rect.contains(x, y)) covering = p.object;
            if (covering) {
                for (int c = 0; c < 3; ++c) base[c] = covering->color[c];
                depth -= covering->depth_offset_mm;
                fs.gt->at(x, y) = 1;
            }

            double color[3] = {base[0] * gain, base[1] * gain, base[2] * gain};
            for (const auto& e : spec.shadows)
                if (frame >= e.start && frame < e.end && e.region.contains(x, y))
                    for (double& c : color) c *= e.darken;
            for (const auto& e : spec.flicker) {
                if (frame < e.start || frame >= e.end || !e.region.contains(x, y)) continue;
                for (int c = 0; c < 3; ++c)
                    color[c] += e.color_sigma *
                                gaussian_from_counter(seed, kFlickerColor, frame, pix, c);
                depth += e.depth_sigma_mm *
                         gaussian_from_counter(seed, kFlickerDepth, frame, pix, 0);
            }
            for (int c = 0; c < 3; ++c)
                color[c] += spec.noise.color_sigma *
                            gaussian_from_counter(seed, kSensorColor, frame, pix, c);
            depth += spec.noise.depth_sigma_mm *
                     gaussian_from_counter(seed, kSensorDepth, frame, pix, 0);

            fs.r.at(x, y) = clamp_u8(color[0]);
            fs.g.at(x, y) = clamp_u8(color[1]);
            fs.b.at(x, y) = clamp_u8(color[2]);
            // Raw 0 is the no-return sentinel, never emitted by the generator.
            fs.depth.at(x, y) = static_cast<uint16_t>(std::clamp(std::lround(depth), 1L, 65535L));
        }
    }
    return fs;
}

SequenceManifest generate_synthetic(const ScenarioSpec& spec,
                                    const std::filesystem::path& out_dir) {
    spec.validate();
    std::error_code ec;
    std::filesystem::create_directories(out_dir / "color", ec);
    std::filesystem::create_directories(out_dir / "depth", ec);
    std::filesystem::create_directories(out_dir / "gt", ec);
    if (!std::filesystem::is_directory(out_dir))
        throw std::runtime_error("generate_synthetic: cannot create " + out_dir.string());

    SequenceManifest manifest;
    manifest.name = spec.name;
    manifest.frame_count = spec.frame_count;
    manifest.depth_scale = 1.0;
    manifest.registered = true;
    manifest.root = out_dir;

    char buf[32];
    for (int f = 0; f < spec.frame_count; ++f) {
        const FrameSet fs = render_frame(spec, f);
        std::snprintf(buf, sizeof buf, "%06d.png", f);
        FrameRef ref;
        ref.index = f;
        ref.color = std::string("color/") + buf;
        ref.depth = std::string("depth/") + buf;
        ref.gt = std::string("gt/") + buf;
        save_color(fs.r, fs.g, fs.b, out_dir / ref.color);
        save_depth(fs.depth, out_dir / ref.depth);
        save_mask(*fs.gt, out_dir / ref.gt);
        manifest.frames.push_back(std::move(ref));
    }
    save_manifest(manifest, out_dir / "manifest.json");
    return manifest;
}

std::vector<std::string> builtin_scenario_names() { return {"A", "B"}; }

ScenarioSpec builtin_scenario(const std::string& name) {
    ScenarioSpec spec;
    spec.width = 640;
    spec.height = 480;
    spec.frame_count = 300;
    spec.seed = 1;

    ObjectSpec box;
    box.width = 24;
    box.height = 24;
    box.depth_offset_mm = 400;
    box.color = {230, 40, 220};
    box.waypoints = {{0, 40, 100}, {299, 600, 320}};
    spec.objects.push_back(box);

    if (name == "A") {
        // Ordinary scene: two step illumination changes, a shadow pass and a
        // gently flickering background patch.
        spec.name = "A";
        spec.illumination = {{100, 112, 1.5}, {200, 212, 0.6}};
        spec.shadows = {{150, 180, {300, 300, 200, 120}, 0.6}};
        spec.flicker = {{0, 300, {40, 40, 80, 60}, 3.0, 30.0}};
        spec.noise = {1.0, 1.0};
        return spec;
    }
    if (name == "B") {
        // Hard scene: the illumination keeps switching for the whole capture
        // and a large background region flickers in both modalities.
        spec.name = "B";
        const double gains[] = {1.4, 0.7, 1.25, 0.8, 1.35, 0.75, 1.2, 0.85, 1.3, 0.9};
        for (int i = 0; i < 10; ++i)
            spec.illumination.push_back({30 + 25 * i, 30 + 25 * (i + 1), gains[i]});
        spec.flicker = {{0, 300, {400, 60, 160, 120}, 12.0, 40.0}};
        spec.noise = {1.5, 2.0};
        return spec;
    }
    std::string known;
    for (const auto& n : builtin_scenario_names()) known += (known.empty() ? "" : ", ") + n;
    throw std::invalid_argument("unknown scenario '" + name + "' (known: " + known + ")");
}

namespace {

RegionRect region_from_json(const nlohmann::json& j) {
    return {j.at("x").get<int>(), j.at("y").get<int>(), j.at("w").get<int>(),
            j.at("h").get<int>()};
}

nlohmann::json region_to_json(const RegionRect& r) {
    return {{"x", r.x}, {"y", r.y}, {"w", r.w}, {"h", r.h}};
}

}  // namespace

ScenarioSpec parse_scenario_spec(const std::filesystem::path& json_path) {
    std::ifstream in(json_path);
    if (!in) throw std::runtime_error(json_path.string() + ": cannot open scenario spec");
    nlohmann::json j;
    in >> j;
    ScenarioSpec spec;
    spec.name = j.value("name", std::string("custom"));
    spec.width = j.at("width").get<int>();
    spec.height = j.at("height").get<int>();
    spec.frame_count = j.at("frame_count").get<int>();
    spec.seed = j.value("seed", uint64_t{1});
    if (j.contains("background")) {
        const auto& jb = j.at("background");
        spec.background.base_depth_mm = jb.value("base_depth_mm", 2000);
        spec.background.depth_texture_mm = jb.value("depth_texture_mm", 30);
        spec.background.color_texture = jb.value("color_texture", 8);
    }
    for (const auto& jo : j.value("objects", nlohmann::json::array())) {
        ObjectSpec obj;
        obj.width = jo.at("width").get<int>();
        obj.height = jo.at("height").get<int>();
        obj.depth_offset_mm = jo.at("depth_offset_mm").get<int>();
        if (jo.contains("color")) {
            const auto c = jo.at("color").get<std::vector<int>>();
            if (c.size() != 3) throw std::runtime_error("object color must have 3 entries");
            for (int i = 0; i < 3; ++i) obj.color[i] = static_cast<uint8_t>(c[i]);
        }
        for (const auto& jw : jo.at("waypoints"))
            obj.waypoints.push_back(
                {jw.at("frame").get<int>(), jw.at("x").get<double>(), jw.at("y").get<double>()});
        spec.objects.push_back(std::move(obj));
    }
    for (const auto& je : j.value("illumination", nlohmann::json::array()))
        spec.illumination.push_back(
            {je.at("start").get<int>(), je.at("end").get<int>(), je.at("gain").get<double>()});
    for (const auto& je : j.value("shadows", nlohmann::json::array()))
        spec.shadows.push_back({je.at("start").get<int>(), je.at("end").get<int>(),
                                region_from_json(je.at("region")), je.value("darken", 0.6)});
    for (const auto& je : j.value("flicker", nlohmann::json::array()))
        spec.flicker.push_back({je.at("start").get<int>(), je.at("end").get<int>(),
                                region_from_json(je.at("region")),
                                je.value("color_sigma", 0.0), je.value("depth_sigma_mm", 0.0)});
    if (j.contains("noise")) {
        spec.noise.color_sigma = j.at("noise").value("color_sigma", 1.0);
        spec.noise.depth_sigma_mm = j.at("noise").value("depth_sigma_mm", 1.0);
    }
    spec.validate();
    return spec;
}

std::string scenario_spec_json(const ScenarioSpec& spec) {
    nlohmann::json j;
    j["name"] = spec.name;
    j["width"] = spec.width;
    j["height"] = spec.height;
    j["frame_count"] = spec.frame_count;
    j["seed"] = spec.seed;
    j["background"] = {{"base_depth_mm", spec.background.base_depth_mm},
                       {"depth_texture_mm", spec.background.depth_texture_mm},
                       {"color_texture", spec.background.color_texture}};
    j["objects"] = nlohmann::json::array();
    for (const auto& obj : spec.objects) {
        nlohmann::json jo = {{"width", obj.width},
                             {"height", obj.height},
                             {"depth_offset_mm", obj.depth_offset_mm},
                             {"color", {obj.color[0], obj.color[1], obj.color[2]}}};
        jo["waypoints"] = nlohmann::json::array();
        for (const auto& wp : obj.waypoints)
            jo["waypoints"].push_back({{"frame", wp.frame}, {"x", wp.x}, {"y", wp.y}});
        j["objects"].push_back(std::move(jo));
    }
    j["illumination"] = nlohmann::json::array();
    for (const auto& e : spec.illumination)
        j["illumination"].push_back({{"start", e.start}, {"end", e.end}, {"gain", e.gain}});
    j["shadows"] = nlohmann::json::array();
    for (const auto& e : spec.shadows)
        j["shadows"].push_back({{"start", e.start},
                                {"end", e.end},
                                {"region", region_to_json(e.region)},
                                {"darken", e.darken}});
    j["flicker"] = nlohmann::json::array();
    for (const auto& e : spec.flicker)
        j["flicker"].push_back({{"start", e.start},
                                {"end", e.end},
                                {"region", region_to_json(e.region)},
                                {"color_sigma", e.color_sigma},
                                {"depth_sigma_mm", e.depth_sigma_mm}});
    j["noise"] = {{"color_sigma", spec.noise.color_sigma},
                  {"depth_sigma_mm", spec.noise.depth_sigma_mm}};
    return j.dump(2);
}

}  // namespace rgbdseg
