#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sstream>

#include "rgbdseg/eval.hpp"

using namespace rgbdseg;

namespace {

MaskPlane mask_of(int w, int h, std::initializer_list<uint8_t> bits) {
    MaskPlane m(w, h, 0);
    auto it = bits.begin();
    for (int y = 0; y < h; ++y)
        for (int x = 0; x < w; ++x) m.at(x, y) = *it++;
    return m;
}

}  // namespace

TEST_CASE("confusion counts on the 4-pixel fixture") {
    const MaskPlane pred = mask_of(4, 1, {1, 1, 0, 0});
    const MaskPlane gt = mask_of(4, 1, {1, 0, 1, 0});
    const ConfusionCounts c = confusion_counts(pred, gt);
    CHECK(c.tp == 1);
    CHECK(c.fp == 1);
    CHECK(c.fn == 1);
    CHECK(c.tn == 1);
    CHECK(c.tp + c.fp + c.tn + c.fn == 4);
}

TEST_CASE("identical masks give zero errors") {
    MaskPlane m(8, 8, 0);
    m.at(1, 1) = m.at(2, 3) = m.at(7, 7) = 1;
    const ConfusionCounts c = confusion_counts(m, m);
    CHECK(c.tp == 3);
    CHECK(c.fp == 0);
    CHECK(c.fn == 0);
    CHECK(c.tn == 61);
    CHECK(f1(c) == 1.0);
}

TEST_CASE("all-foreground against all-background is pure false positives") {
    const MaskPlane pred(5, 5, 1);
    const MaskPlane gt(5, 5, 0);
    const ConfusionCounts c = confusion_counts(pred, gt);
    CHECK(c.fp == 25);
    CHECK(c.tp == 0);
    CHECK(c.tn == 0);
    CHECK(c.fn == 0);
}

TEST_CASE("precision, recall, F1 by hand") {
    // TP=8, FP=2, FN=2: P = R = F1 = 0.8
    const ConfusionCounts c{8, 2, 0, 2};
    CHECK(precision(c) == doctest::Approx(0.8));
    CHECK(recall(c) == doctest::Approx(0.8));
    CHECK(f1(c) == doctest::Approx(0.8));
}

TEST_CASE("F1 equals precision when precision equals recall") {
    const ConfusionCounts c{30, 10, 5, 10};
    CHECK(precision(c) == recall(c));
    CHECK(f1(c) == doctest::Approx(precision(c)));
}

TEST_CASE("zero denominators give zero by convention") {
    const ConfusionCounts empty{0, 0, 10, 0};
    CHECK(precision(empty) == 0.0);
    CHECK(recall(empty) == 0.0);
    CHECK(f1(empty) == 0.0);
}

TEST_CASE("f1 stays in [0,1] and is 1 only for perfect prediction with foreground") {
    for (int tp = 0; tp < 4; ++tp)
        for (int fp = 0; fp < 4; ++fp)
            for (int fn = 0; fn < 4; ++fn) {
                const ConfusionCounts c{tp, fp, 0, fn};
                const double v = f1(c);
                CHECK(v >= 0.0);
                CHECK(v <= 1.0);
                if (v == 1.0) {
                    CHECK(tp > 0);
                    CHECK(fp == 0);
                    CHECK(fn == 0);
                }
            }
}

TEST_CASE("3-frame toy sequence matches hand computation") {
    // frame 0: pred == gt (2 fg of 6)           -> P=R=F1=1
    // frame 1: pred (1,1,1,0,0,0), gt (1,0,0,0,0,0) -> TP=1 FP=2 FN=0, P=1/3, R=1, F1=0.5
    // frame 2: pred (0,0,0,0,0,1), gt (1,1,0,0,0,0) -> TP=0, F1=0
    const MaskPlane gt0 = mask_of(6, 1, {1, 1, 0, 0, 0, 0});
    const MaskPlane p0 = gt0;
    const MaskPlane gt1 = mask_of(6, 1, {1, 0, 0, 0, 0, 0});
    const MaskPlane p1 = mask_of(6, 1, {1, 1, 1, 0, 0, 0});
    const MaskPlane gt2 = mask_of(6, 1, {1, 1, 0, 0, 0, 0});
    const MaskPlane p2 = mask_of(6, 1, {0, 0, 0, 0, 0, 1});

    const std::vector<const MaskPlane*> gts = {&gt0, &gt1, &gt2};
    const std::map<std::string, std::vector<const MaskPlane*>> preds = {
        {"rgb", {&p0, &p1, &p2}}};
    const EvalReport report = evaluate_masks(preds, gts, 0);
    const auto& series = report.methods.at("rgb").frames;
    REQUIRE(series.size() == 3);
    CHECK(series[0].f1 == doctest::Approx(1.0));
    CHECK(series[1].precision == doctest::Approx(1.0 / 3.0));
    CHECK(series[1].recall == doctest::Approx(1.0));
    CHECK(series[1].f1 == doctest::Approx(0.5));
    CHECK(series[2].f1 == 0.0);

    // pooled counts: TP=3, FP=3, FN=2 -> P=0.5, R=0.6, F1=6/11
    const auto& s = report.methods.at("rgb");
    CHECK(s.pooled.tp == 3);
    CHECK(s.pooled.fp == 3);
    CHECK(s.pooled.fn == 2);
    CHECK(s.pooled_f1 == doctest::Approx(6.0 / 11.0));
    // pooled F1 is the F1 of summed counts, not the mean of per-frame F1
    CHECK(s.pooled_f1 != doctest::Approx(s.mean_f1));

    std::ostringstream csv;
    report.write_csv(csv);
    CHECK(csv.str().find("frame,method,tp,fp,tn,fn,precision,recall,f1") == 0);
    CHECK(csv.str().find("1,rgb,1,2,3,0,") != std::string::npos);
}

TEST_CASE("warmup frames are excluded from aggregates") {
    const MaskPlane gt = mask_of(2, 1, {1, 0});
    const MaskPlane wrong = mask_of(2, 1, {0, 1});
    const MaskPlane right = gt;
    const std::vector<const MaskPlane*> gts = {&gt, &gt, &gt};
    const std::map<std::string, std::vector<const MaskPlane*>> preds = {
        {"m", {&wrong, &right, &right}}};
    const EvalReport report = evaluate_masks(preds, gts, 1);
    CHECK(report.methods.at("m").pooled_f1 == doctest::Approx(1.0));
    CHECK(report.methods.at("m").mean_f1 == doctest::Approx(1.0));
    CHECK(report.methods.at("m").frames.size() == 3);
}

TEST_CASE("misaligned streams are rejected") {
    const MaskPlane m(2, 2, 0);
    const std::vector<const MaskPlane*> gts = {&m, &m};
    const std::map<std::string, std::vector<const MaskPlane*>> preds = {{"m", {&m}}};
    CHECK_THROWS_AS(evaluate_masks(preds, gts, 0), std::invalid_argument);
    MaskPlane other(3, 2, 0);
    const std::map<std::string, std::vector<const MaskPlane*>> preds2 = {{"m", {&m, &other}}};
    CHECK_THROWS_AS(evaluate_masks(preds2, gts, 0), std::invalid_argument);
}
