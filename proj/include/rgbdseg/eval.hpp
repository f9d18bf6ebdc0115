#pragma once

#include <cstdint>
#include <map>
#include <ostream>
#include <string>
#include <vector>

#include "rgbdseg/engine.hpp"
#include "rgbdseg/plane.hpp"

namespace rgbdseg {

struct ConfusionCounts {
    int64_t tp = 0, fp = 0, tn = 0, fn = 0;

    ConfusionCounts& operator+=(const ConfusionCounts& o) {
        tp += o.tp;
        fp += o.fp;
        tn += o.tn;
        fn += o.fn;
        return *this;
    }
};

ConfusionCounts confusion_counts(const MaskPlane& pred, const MaskPlane& gt);

// Eqs: R = TP/(TP+FN), P = TP/(TP+FP), F1 = 2PR/(P+R); 0 when the
// denominator is 0.
double precision(const ConfusionCounts& c);
double recall(const ConfusionCounts& c);
double f1(const ConfusionCounts& c);

struct FrameMetrics {
    int frame = 0;
    ConfusionCounts counts;
    double precision = 0.0, recall = 0.0, f1 = 0.0;
};

struct MethodSeries {
    std::vector<FrameMetrics> frames;
    ConfusionCounts pooled;  // post-warmup frames only
    double pooled_precision = 0.0, pooled_recall = 0.0, pooled_f1 = 0.0;
    double mean_f1 = 0.0;  // mean of per-frame F1 over post-warmup frames
};

struct EvalReport {
    std::map<std::string, MethodSeries> methods;  // "rgb", "depth", "fused", "augmented"
    int warmup_frames = 0;
    std::map<std::string, PipelineStats> throughput;  // per engine configuration

    void write_csv(std::ostream& os) const;
    std::string summary_json() const;
};

// Per-frame metrics for each supplied method plus pooled aggregates over the
// frames past the warmup window. Pooled F1 is computed from summed counts,
// not averaged per-frame F1.
EvalReport evaluate_masks(
    const std::map<std::string, std::vector<const MaskPlane*>>& predictions_per_method,
    const std::vector<const MaskPlane*>& ground_truth, int warmup_frames = 30);

}  // namespace rgbdseg
