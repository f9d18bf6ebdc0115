#include "rgbdseg/dataset.hpp"

#include <fstream>

#include <nlohmann/json.hpp>
#include <opencv2/core.hpp>
#include <opencv2/imgcodecs.hpp>

#include "rgbdseg/engine.hpp"

namespace rgbdseg {

namespace {

const std::vector<int> kPngParams = {cv::IMWRITE_PNG_COMPRESSION, 1};

[[noreturn]] void fail(const std::filesystem::path& path, const std::string& what) {
    throw std::runtime_error(path.string() + ": " + what);
}

}  // namespace

SequenceManifest load_manifest(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) fail(path, "cannot open manifest");
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        fail(path, std::string("malformed manifest: ") + e.what());
    }
    SequenceManifest m;
    m.root = path.parent_path();
    try {
        m.name = j.at("name").get<std::string>();
        m.frame_count = j.at("frame_count").get<int>();
        m.depth_scale = j.at("depth_scale").get<double>();
        m.registered = j.at("registered").get<bool>();
        for (const auto& jf : j.at("frames")) {
            FrameRef f;
            f.index = jf.at("index").get<int>();
            f.color = jf.at("color").get<std::string>();
            f.depth = jf.at("depth").get<std::string>();
            if (jf.contains("gt")) f.gt = jf.at("gt").get<std::string>();
            m.frames.push_back(std::move(f));
        }
        if (j.contains("calibration")) {
            const auto& jc = j.at("calibration");
            CameraRig rig;
            const auto read_cam = [](const nlohmann::json& c) {
                return Pinhole{c.at("fx").get<double>(), c.at("fy").get<double>(),
                               c.at("cx").get<double>(), c.at("cy").get<double>()};
            };
            rig.depth_cam = read_cam(jc.at("depth"));
            rig.color_cam = read_cam(jc.at("color"));
            const auto rot = jc.at("rotation").get<std::vector<double>>();
            const auto tr = jc.at("translation_mm").get<std::vector<double>>();
            if (rot.size() != 9 || tr.size() != 3)
                fail(path, "calibration rotation/translation have wrong arity");
            std::copy(rot.begin(), rot.end(), rig.rotation.begin());
            std::copy(tr.begin(), tr.end(), rig.translation_mm.begin());
            rig.depth_scale = m.depth_scale;
            rig.validate();
            m.calibration = rig;
        }
    } catch (const nlohmann::json::exception& e) {
        fail(path, std::string("malformed manifest: ") + e.what());
    }
    if (static_cast<int>(m.frames.size()) != m.frame_count)
        fail(path, "frame_count does not match frames list");
    for (int i = 0; i < m.frame_count; ++i)
        if (m.frames[i].index != i) fail(path, "frame indices are not contiguous from 0");
    return m;
}

void save_manifest(const SequenceManifest& manifest, const std::filesystem::path& path) {
    nlohmann::json j;
    j["name"] = manifest.name;
    j["frame_count"] = manifest.frame_count;
    j["depth_scale"] = manifest.depth_scale;
    j["registered"] = manifest.registered;
    j["frames"] = nlohmann::json::array();
    for (const auto& f : manifest.frames) {
        nlohmann::json jf = {{"index", f.index}, {"color", f.color}, {"depth", f.depth}};
        if (!f.gt.empty()) jf["gt"] = f.gt;
        j["frames"].push_back(std::move(jf));
    }
    if (manifest.calibration) {
        const CameraRig& rig = *manifest.calibration;
        const auto cam_json = [](const Pinhole& c) {
            return nlohmann::json{{"fx", c.fx}, {"fy", c.fy}, {"cx", c.cx}, {"cy", c.cy}};
        };
        j["calibration"] = {
            {"depth", cam_json(rig.depth_cam)},
            {"color", cam_json(rig.color_cam)},
            {"rotation", rig.rotation},
            {"translation_mm", rig.translation_mm},
        };
    }
    std::ofstream out(path);
    if (!out) fail(path, "cannot write manifest");
    out << j.dump(2) << '\n';
}

void save_color(const Plane<uint8_t>& r, const Plane<uint8_t>& g, const Plane<uint8_t>& b,
                const std::filesystem::path& path) {
    cv::Mat img(r.height(), r.width(), CV_8UC3);
    for (int y = 0; y < r.height(); ++y) {
        cv::Vec3b* row = img.ptr<cv::Vec3b>(y);
        for (int x = 0; x < r.width(); ++x)
            row[x] = cv::Vec3b(b.at(x, y), g.at(x, y), r.at(x, y));  // PNG stores BGR-ordered Mat
    }
    if (!cv::imwrite(path.string(), img, kPngParams)) fail(path, "failed to write color PNG");
}

void load_color(const std::filesystem::path& path, Plane<uint8_t>& r, Plane<uint8_t>& g,
                Plane<uint8_t>& b) {
    cv::Mat img = cv::imread(path.string(), cv::IMREAD_COLOR);
    if (img.empty()) fail(path, "cannot decode color PNG");
    r = Plane<uint8_t>(img.cols, img.rows);
    g = Plane<uint8_t>(img.cols, img.rows);
    b = Plane<uint8_t>(img.cols, img.rows);
    for (int y = 0; y < img.rows; ++y) {
        const cv::Vec3b* row = img.ptr<cv::Vec3b>(y);
        for (int x = 0; x < img.cols; ++x) {
            b.at(x, y) = row[x][0];
            g.at(x, y) = row[x][1];
            r.at(x, y) = row[x][2];
        }
    }
}

void save_depth(const Plane<uint16_t>& depth, const std::filesystem::path& path) {
    cv::Mat img(depth.height(), depth.width(), CV_16UC1,
                const_cast<uint16_t*>(depth.data()));
    if (!cv::imwrite(path.string(), img, kPngParams)) fail(path, "failed to write depth PNG");
}

Plane<uint16_t> load_depth(const std::filesystem::path& path) {
    cv::Mat img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (img.empty()) fail(path, "cannot decode depth PNG");
    if (img.type() != CV_16UC1) fail(path, "depth PNG is not 16-bit single-channel");
    Plane<uint16_t> depth(img.cols, img.rows);
    for (int y = 0; y < img.rows; ++y) {
        const uint16_t* row = img.ptr<uint16_t>(y);
        std::copy(row, row + img.cols, depth.row(y));
    }
    return depth;
}

void save_mask(const MaskPlane& mask, const std::filesystem::path& path) {
    cv::Mat img(mask.height(), mask.width(), CV_8UC1);
    for (int y = 0; y < mask.height(); ++y) {
        uint8_t* row = img.ptr<uint8_t>(y);
        for (int x = 0; x < mask.width(); ++x) row[x] = mask.at(x, y) ? 255 : 0;
    }
    if (!cv::imwrite(path.string(), img, kPngParams)) fail(path, "failed to write mask PNG");
}

MaskPlane load_mask(const std::filesystem::path& path) {
    cv::Mat img = cv::imread(path.string(), cv::IMREAD_UNCHANGED);
    if (img.empty()) fail(path, "cannot decode mask PNG");
    if (img.type() != CV_8UC1) fail(path, "mask PNG is not 8-bit single-channel");
    MaskPlane mask(img.cols, img.rows);
    for (int y = 0; y < img.rows; ++y) {
        const uint8_t* row = img.ptr<uint8_t>(y);
        for (int x = 0; x < img.cols; ++x) {
            if (row[x] == 0)
                mask.at(x, y) = 0;
            else if (row[x] == 255)
                mask.at(x, y) = 1;
            else
                fail(path, "non-binary mask value " + std::to_string(row[x]));
        }
    }
    return mask;
}

FrameSet load_frame(const SequenceManifest& manifest, int index, bool want_gt) {
    if (index < 0 || index >= manifest.frame_count)
        throw std::out_of_range("load_frame: frame " + std::to_string(index) + " out of range");
    const FrameRef& ref = manifest.frames[index];
    FrameSet fs;
    fs.index = index;
    try {
        load_color(manifest.root / ref.color, fs.r, fs.g, fs.b);
        fs.depth = load_depth(manifest.root / ref.depth);
        if (want_gt && !ref.gt.empty()) fs.gt = load_mask(manifest.root / ref.gt);
    } catch (const std::exception& e) {
        throw SourceError(index, "frame " + std::to_string(index) + ": " + e.what());
    }
    if (!fs.depth.same_size(fs.r.width(), fs.r.height()))
        throw SourceError(index, "frame " + std::to_string(index) +
                                     ": color and depth dimensions differ");
    if (fs.gt && !fs.gt->same_size(fs.r.width(), fs.r.height()))
        throw SourceError(index, "frame " + std::to_string(index) +
                                     ": ground truth dimensions differ");
    return fs;
}

std::optional<FrameSet> SequenceSource::next() {
    if (cursor_ >= manifest_.frame_count) return std::nullopt;
    FrameSet fs = load_frame(manifest_, cursor_, want_gt_);
    if (cursor_ == 0) {
        width_ = fs.r.width();
        height_ = fs.r.height();
    } else if (!fs.r.same_size(width_, height_)) {
        throw SourceError(cursor_, "frame " + std::to_string(cursor_) +
                                       ": dimensions differ from frame 0");
    }
    ++cursor_;
    return fs;
}

}  // namespace rgbdseg
