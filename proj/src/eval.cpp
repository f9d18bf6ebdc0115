#include "rgbdseg/eval.hpp"

#include <iomanip>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace rgbdseg {

ConfusionCounts confusion_counts(const MaskPlane& pred, const MaskPlane& gt) {
    require_same_size(pred.width(), pred.height(), gt.width(), gt.height(), "confusion_counts");
    ConfusionCounts c;
    const uint8_t* p = pred.data();
    const uint8_t* g = gt.data();
    const size_t n = pred.size();
    for (size_t i = 0; i < n; ++i) {
        if (p[i]) {
            if (g[i])
                ++c.tp;
            else
                ++c.fp;
        } else {
            if (g[i])
                ++c.fn;
            else
                ++c.tn;
        }
    }
    return c;
}

double precision(const ConfusionCounts& c) {
    const int64_t den = c.tp + c.fp;
    return den > 0 ? static_cast<double>(c.tp) / static_cast<double>(den) : 0.0;
}

double recall(const ConfusionCounts& c) {
    const int64_t den = c.tp + c.fn;
    return den > 0 ? static_cast<double>(c.tp) / static_cast<double>(den) : 0.0;
}

double f1(const ConfusionCounts& c) {
    const double p = precision(c);
    const double r = recall(c);
    return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

EvalReport evaluate_masks(
    const std::map<std::string, std::vector<const MaskPlane*>>& predictions_per_method,
    const std::vector<const MaskPlane*>& ground_truth, int warmup_frames) {
    EvalReport report;
    report.warmup_frames = warmup_frames;
    for (const auto& [method, preds] : predictions_per_method) {
        if (preds.size() != ground_truth.size())
            throw std::invalid_argument("evaluate_masks: method '" + method + "' has " +
                                        std::to_string(preds.size()) + " frames, ground truth has " +
                                        std::to_string(ground_truth.size()));
        MethodSeries series;
        double f1_sum = 0.0;
        int64_t f1_count = 0;
        for (size_t i = 0; i < preds.size(); ++i) {
            FrameMetrics fm;
            fm.frame = static_cast<int>(i);
            fm.counts = confusion_counts(*preds[i], *ground_truth[i]);
            fm.precision = precision(fm.counts);
            fm.recall = recall(fm.counts);
            fm.f1 = f1(fm.counts);
            if (fm.frame >= warmup_frames) {
                series.pooled += fm.counts;
                f1_sum += fm.f1;
                ++f1_count;
            }
            series.frames.push_back(fm);
        }
        series.pooled_precision = precision(series.pooled);
        series.pooled_recall = recall(series.pooled);
        series.pooled_f1 = f1(series.pooled);
        series.mean_f1 = f1_count > 0 ? f1_sum / static_cast<double>(f1_count) : 0.0;
        report.methods.emplace(method, std::move(series));
    }
    return report;
}

void EvalReport::write_csv(std::ostream& os) const {
    os << "frame,method,tp,fp,tn,fn,precision,recall,f1\n";
    size_t frame_count = 0;
    for (const auto& [_, series] : methods) frame_count = std::max(frame_count, series.frames.size());
    os << std::setprecision(9);
    for (size_t i = 0; i < frame_count; ++i) {
        for (const auto& [method, series] : methods) {
            if (i >= series.frames.size()) continue;
            const FrameMetrics& fm = series.frames[i];
            os << fm.frame << ',' << method << ',' << fm.counts.tp << ',' << fm.counts.fp << ','
               << fm.counts.tn << ',' << fm.counts.fn << ',' << fm.precision << ',' << fm.recall
               << ',' << fm.f1 << '\n';
        }
    }
}

std::string EvalReport::summary_json() const {
    nlohmann::json j;
    j["warmup_frames"] = warmup_frames;
    for (const auto& [method, series] : methods) {
        j["methods"][method] = {
            {"pooled_precision", series.pooled_precision},
            {"pooled_recall", series.pooled_recall},
            {"pooled_f1", series.pooled_f1},
            {"mean_f1", series.mean_f1},
            {"frames", series.frames.size()},
        };
    }
    for (const auto& [config, stats] : throughput) {
        j["throughput"][config] = {
            {"frames_processed", stats.frames_processed},
            {"wall_seconds", stats.wall_seconds},
            {"fps", stats.fps},
            {"ingest_busy_seconds", stats.ingest_busy_seconds},
            {"process_busy_seconds", stats.process_busy_seconds},
            {"emit_busy_seconds", stats.emit_busy_seconds},
        };
    }
    return j.dump(2);
}

}  // namespace rgbdseg
