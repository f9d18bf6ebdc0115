#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace rgbdseg {

// Contiguous row-major 2D scalar plane. All image and model state in the
// engine is stored as planes (one plane per field), never interleaved.
template <typename T>
class Plane {
public:
    Plane() = default;
    Plane(int width, int height, T fill = T{})
        : width_(width), height_(height),
          data_(static_cast<size_t>(width) * static_cast<size_t>(height), fill) {
        if (width <= 0 || height <= 0)
            throw std::invalid_argument("Plane: non-positive dimensions");
    }

    int width() const { return width_; }
    int height() const { return height_; }
    size_t size() const { return data_.size(); }
    bool empty() const { return data_.empty(); }

    T& at(int x, int y) { return data_[static_cast<size_t>(y) * width_ + x]; }
    const T& at(int x, int y) const { return data_[static_cast<size_t>(y) * width_ + x]; }

    T* row(int y) { return data_.data() + static_cast<size_t>(y) * width_; }
    const T* row(int y) const { return data_.data() + static_cast<size_t>(y) * width_; }

    T* data() { return data_.data(); }
    const T* data() const { return data_.data(); }

    bool same_size(int w, int h) const { return width_ == w && height_ == h; }

    friend bool operator==(const Plane& a, const Plane& b) {
        return a.width_ == b.width_ && a.height_ == b.height_ && a.data_ == b.data_;
    }

private:
    int width_ = 0;
    int height_ = 0;
    std::vector<T> data_;
};

// Binary foreground mask: 0 = background, 1 = foreground.
using MaskPlane = Plane<uint8_t>;

inline void require_same_size(int wa, int ha, int wb, int hb, const char* what) {
    if (wa != wb || ha != hb)
        throw std::invalid_argument(std::string(what) + ": dimension mismatch (" +
                                    std::to_string(wa) + "x" + std::to_string(ha) + " vs " +
                                    std::to_string(wb) + "x" + std::to_string(hb) + ")");
}

}  // namespace rgbdseg
