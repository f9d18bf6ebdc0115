#pragma once

#include <array>
#include <chrono>
#include <cstdint>
#include <functional>
#include <future>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "rgbdseg/plane.hpp"

namespace rgbdseg {

struct PipelineStats {
    int64_t frames_processed = 0;
    double wall_seconds = 0.0;
    double fps = 0.0;
    double ingest_busy_seconds = 0.0;
    double process_busy_seconds = 0.0;
    double emit_busy_seconds = 0.0;
};

// Raised when a frame source fails; carries the failing frame index so the
// pipeline can report it after draining in-flight frames.
struct SourceError : std::runtime_error {
    SourceError(int frame_index, const std::string& what)
        : std::runtime_error(what), frame_index(frame_index) {}
    int frame_index;
};

int resolve_workers(int requested);  // 0 -> hardware concurrency

// Splits [0, height) into `workers` contiguous row ranges and runs fn(y0, y1)
// on each, joining before return. Partitioning is a function of (height,
// workers) only, and kernels touch only their own rows, so results are
// identical for every worker count.
void parallel_for_rows(int height, int workers, const std::function<void(int, int)>& fn);

// Interleaved RGB <-> per-channel planes.
std::array<Plane<uint8_t>, 3> aos_to_soa(const std::vector<uint8_t>& interleaved, int width,
                                         int height);
std::vector<uint8_t> soa_to_aos(const std::array<Plane<uint8_t>, 3>& planes);

// Three-stage frame pipeline: while frame i is processed, frame i+1 is
// ingested and the result of frame i-1 is emitted. At most three frames are
// in flight and emission order equals source order, so output is identical
// to the sequential loop.
//
// source returns nullopt at end of stream and may throw SourceError; in-flight
// frames are drained (processed and emitted) before the error propagates.
template <typename In, typename Out>
PipelineStats run_pipeline(const std::function<std::optional<In>()>& source,
                           const std::function<Out(In&&)>& process,
                           const std::function<void(Out&&)>& sink, bool pipelined) {
    using Clock = std::chrono::steady_clock;
    const auto seconds = [](Clock::duration d) {
        return std::chrono::duration<double>(d).count();
    };
    PipelineStats stats;
    const auto t0 = Clock::now();

    if (!pipelined) {
        for (;;) {
            auto ta = Clock::now();
            std::optional<In> frame = source();
            stats.ingest_busy_seconds += seconds(Clock::now() - ta);
            if (!frame) break;
            auto tb = Clock::now();
            Out result = process(std::move(*frame));
            stats.process_busy_seconds += seconds(Clock::now() - tb);
            auto tc = Clock::now();
            sink(std::move(result));
            stats.emit_busy_seconds += seconds(Clock::now() - tc);
            ++stats.frames_processed;
        }
    } else {
        // Rotating triple buffer: each round runs ingest(f_{i+1}) and
        // emit(result_{i-1}) on side threads while f_i is processed here.
        std::optional<In> current;
        std::optional<Out> pending_emit;
        std::exception_ptr source_failure;

        {
            auto ta = Clock::now();
            try {
                current = source();
            } catch (...) {
                source_failure = std::current_exception();
            }
            stats.ingest_busy_seconds += seconds(Clock::now() - ta);
        }

        while (current && !source_failure) {
            auto ingest_future = std::async(std::launch::async, [&]() -> std::optional<In> {
                auto t = Clock::now();
                auto f = source();
                stats.ingest_busy_seconds += seconds(Clock::now() - t);
                return f;
            });
            std::future<void> emit_future;
            if (pending_emit) {
                emit_future = std::async(std::launch::async, [&]() {
                    auto t = Clock::now();
                    sink(std::move(*pending_emit));
                    stats.emit_busy_seconds += seconds(Clock::now() - t);
                });
            }

            auto tb = Clock::now();
            Out result = process(std::move(*current));
            stats.process_busy_seconds += seconds(Clock::now() - tb);
            ++stats.frames_processed;

            if (emit_future.valid()) emit_future.get();
            pending_emit = std::move(result);
            try {
                current = ingest_future.get();
            } catch (...) {
                current.reset();
                source_failure = std::current_exception();
            }
        }
        if (pending_emit) {
            auto tc = Clock::now();
            sink(std::move(*pending_emit));
            stats.emit_busy_seconds += seconds(Clock::now() - tc);
        }
        if (source_failure) std::rethrow_exception(source_failure);
    }

    stats.wall_seconds = seconds(Clock::now() - t0);
    stats.fps = stats.wall_seconds > 0.0
                    ? static_cast<double>(stats.frames_processed) / stats.wall_seconds
                    : 0.0;
    return stats;
}

}  // namespace rgbdseg
