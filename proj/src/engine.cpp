#include "rgbdseg/engine.hpp"

#include <algorithm>

namespace rgbdseg {

int resolve_workers(int requested) {
    if (requested < 0) throw std::invalid_argument("workers must be >= 0");
    if (requested > 0) return requested;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

void parallel_for_rows(int height, int workers, const std::function<void(int, int)>& fn) {
    workers = std::clamp(workers, 1, height);
    if (workers == 1) {
        fn(0, height);
        return;
    }
    const int base = height / workers;
    const int extra = height % workers;
    std::vector<std::thread> threads;
    threads.reserve(workers - 1);
    int y = 0;
    for (int w = 0; w < workers; ++w) {
        const int rows = base + (w < extra ? 1 : 0);
        const int y0 = y;
        const int y1 = y + rows;
        y = y1;
        if (w + 1 == workers) {
            fn(y0, y1);
        } else {
            threads.emplace_back([&fn, y0, y1] { fn(y0, y1); });
        }
    }
    for (auto& t : threads) t.join();
}

std::array<Plane<uint8_t>, 3> aos_to_soa(const std::vector<uint8_t>& interleaved, int width,
                                         int height) {
    const size_t n = static_cast<size_t>(width) * height;
    if (interleaved.size() != n * 3)
        throw std::invalid_argument("aos_to_soa: buffer size does not match width*height*3");
    std::array<Plane<uint8_t>, 3> planes{Plane<uint8_t>(width, height),
                                         Plane<uint8_t>(width, height),
                                         Plane<uint8_t>(width, height)};
    uint8_t* r = planes[0].data();
    uint8_t* g = planes[1].data();
    uint8_t* b = planes[2].data();
    for (size_t i = 0; i < n; ++i) {
        r[i] = interleaved[3 * i];
        g[i] = interleaved[3 * i + 1];
        b[i] = interleaved[3 * i + 2];
    }
    return planes;
}

std::vector<uint8_t> soa_to_aos(const std::array<Plane<uint8_t>, 3>& planes) {
    const int width = planes[0].width();
    const int height = planes[0].height();
    for (const auto& p : planes)
        require_same_size(p.width(), p.height(), width, height, "soa_to_aos");
    const size_t n = static_cast<size_t>(width) * height;
    std::vector<uint8_t> interleaved(n * 3);
    const uint8_t* r = planes[0].data();
    const uint8_t* g = planes[1].data();
    const uint8_t* b = planes[2].data();
    for (size_t i = 0; i < n; ++i) {
        interleaved[3 * i] = r[i];
        interleaved[3 * i + 1] = g[i];
        interleaved[3 * i + 2] = b[i];
    }
    return interleaved;
}

}  // namespace rgbdseg
