#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "rgbdseg/mixture.hpp"

using namespace rgbdseg;

namespace {

MixtureConfig test_config() {
    MixtureConfig c;
    c.components = 3;
    c.learning_rate = 0.05f;
    c.match_lambda = 2.5f;
    c.background_threshold = 0.8f;
    c.initial_sigma = 15.0f;
    c.initial_weight = 0.05f;
    c.variance_floor = 4.0f;
    return c;
}

void check_invariants(const PixelMixture& m, const MixtureConfig& c) {
    float sum = 0.0f;
    for (int i = 0; i < m.components; ++i) {
        CHECK(m.weights[i] >= 0.0f);
        CHECK(m.variances[i] >= c.variance_floor);
        sum += m.weights[i];
    }
    CHECK(sum == doctest::Approx(1.0f).epsilon(1e-6));
}

}  // namespace

TEST_CASE("init_mixture seeds component 0 from the first observation") {
    const auto c = test_config();
    const float v[1] = {120.0f};
    const PixelMixture m = init_mixture(v, c);
    CHECK(m.mean(0)[0] == 120.0f);
    CHECK(m.weights[0] == 1.0f);
    CHECK(m.weights[1] == 0.0f);
    CHECK(m.weights[2] == 0.0f);
    for (int i = 0; i < 3; ++i) CHECK(m.variances[i] == c.initial_sigma * c.initial_sigma);
    check_invariants(m, c);
}

TEST_CASE("init_mixture zero vector still normalizes weights") {
    const auto c = test_config();
    const float v[3] = {0.0f, 0.0f, 0.0f};
    const PixelMixture m = init_mixture(v, c);
    CHECK(m.mean(0)[0] == 0.0f);
    check_invariants(m, c);
}

TEST_CASE("init_mixture rejects invalid config") {
    auto c = test_config();
    c.components = 6;
    const float v[1] = {1.0f};
    CHECK_THROWS_AS(init_mixture(v, c), std::invalid_argument);
    c = test_config();
    c.learning_rate = 1.5f;
    CHECK_THROWS_AS(init_mixture(v, c), std::invalid_argument);
    c = test_config();
    c.variance_floor = 0.0f;
    CHECK_THROWS_AS(init_mixture(v, c), std::invalid_argument);
}

TEST_CASE("match_component applies the lambda band") {
    const auto c = test_config();  // lambda = 2.5
    const float seedv[1] = {100.0f};
    PixelMixture m = init_mixture(seedv, c);
    m.variances[0] = 100.0f;  // sigma 10, band 25

    // |120 - 100| = 20 < 25
    const float inside[1] = {120.0f};
    CHECK(match_component(m, inside, c) == 0);
    // |130 - 100| = 30 > 25
    const float outside[1] = {130.0f};
    CHECK(!match_component(m, outside, c).has_value());
    // exact mean always matches
    const float exact[1] = {100.0f};
    CHECK(match_component(m, exact, c) == 0);
}

TEST_CASE("matched weight update follows the decay formula") {
    // w = (0.5, 0.3, 0.2), alpha = 0.1, match 0 -> (0.55, 0.27, 0.18)
    auto c = test_config();
    c.learning_rate = 0.1f;
    const float seedv[1] = {50.0f};
    PixelMixture m = init_mixture(seedv, c);
    m.weights = {0.5f, 0.3f, 0.2f};
    m.mean(1)[0] = 50.0f;
    m.mean(2)[0] = 50.0f;
    const float v[1] = {50.0f};
    update_mixture(m, v, 0, c);
    CHECK(m.weights[0] == doctest::Approx(0.55f));
    CHECK(m.weights[1] == doctest::Approx(0.27f));
    CHECK(m.weights[2] == doctest::Approx(0.18f));
    check_invariants(m, c);
}

TEST_CASE("unmatched update replaces the weakest component") {
    const auto c = test_config();
    const float seedv[1] = {50.0f};
    PixelMixture m = init_mixture(seedv, c);
    const float v[1] = {200.0f};
    update_mixture(m, v, std::nullopt, c);
    bool replaced = false;
    for (int i = 0; i < m.components; ++i) {
        if (m.mean(i)[0] == 200.0f) {
            replaced = true;
            CHECK(m.variances[i] == c.initial_sigma * c.initial_sigma);
        }
    }
    CHECK(replaced);
    check_invariants(m, c);
}

TEST_CASE("classify uses the cumulative-weight prefix") {
    const auto c = test_config();  // T = 0.8
    const float seedv[1] = {10.0f};
    PixelMixture m = init_mixture(seedv, c);
    m.weights = {0.7f, 0.2f, 0.1f};
    // equal variances, so the prefix order is the index order
    for (int i = 0; i < 3; ++i) m.variances[i] = 25.0f;

    // cumulative 0.7, 0.9: third component is outside the prefix
    CHECK(classify(m, 2, c) == PixelLabel::Foreground);
    CHECK(classify(m, 1, c) == PixelLabel::Background);
    CHECK(classify(m, 0, c) == PixelLabel::Background);
    CHECK(classify(m, std::nullopt, c) == PixelLabel::Foreground);
}

TEST_CASE("step_pixel on the dominant mean keeps background and grows weight") {
    const auto c = test_config();
    const float seedv[1] = {100.0f};
    PixelMixture m = init_mixture(seedv, c);
    const float far[1] = {250.0f};
    update_mixture(m, far, std::nullopt, c);  // give component weights something to split
    const float w_before = m.weights[0];
    const float v[1] = {100.0f};
    CHECK(step_pixel(m, v, c) == PixelLabel::Background);
    CHECK(m.weights[0] > w_before);
}

TEST_CASE("step_pixel far from all means replaces the weakest component") {
    const auto c = test_config();
    const float seedv[1] = {100.0f};
    PixelMixture m = init_mixture(seedv, c);
    const float v[1] = {400.0f};
    CHECK(step_pixel(m, v, c) == PixelLabel::Foreground);
    bool present = false;
    for (int i = 0; i < m.components; ++i) present |= (m.mean(i)[0] == 400.0f);
    CHECK(present);
}

TEST_CASE("step_pixel is deterministic") {
    const auto c = test_config();
    const float seedv[3] = {10.0f, 20.0f, 30.0f};
    PixelMixture a = init_mixture(seedv, c);
    PixelMixture b = a;
    std::mt19937 rng(7);
    std::uniform_real_distribution<float> dist(0.0f, 255.0f);
    for (int k = 0; k < 200; ++k) {
        const float v[3] = {dist(rng), dist(rng), dist(rng)};
        const PixelLabel la = step_pixel(a, v, c);
        float v2[3] = {v[0], v[1], v[2]};
        const PixelLabel lb = step_pixel(b, v2, c);
        CHECK(la == lb);
    }
    CHECK(a == b);
}

TEST_CASE("invariants hold under randomized step sequences") {
    std::mt19937 rng(42);
    std::uniform_real_distribution<float> dist(0.0f, 255.0f);
    std::uniform_int_distribution<int> mdist(3, 5);
    for (int trial = 0; trial < 2000; ++trial) {
        auto c = test_config();
        c.components = mdist(rng);
        const float seedv[1] = {dist(rng)};
        PixelMixture m = init_mixture(seedv, c);
        const int steps = 1 + trial % 30;
        for (int s = 0; s < steps; ++s) {
            const float v[1] = {dist(rng)};
            step_pixel(m, v, c);
        }
        check_invariants(m, c);
    }
}

TEST_CASE("matching an exact mean with sigma >= initial never misses") {
    std::mt19937 rng(3);
    std::uniform_real_distribution<float> dist(0.0f, 255.0f);
    const auto c = test_config();
    for (int trial = 0; trial < 500; ++trial) {
        const float seedv[1] = {dist(rng)};
        PixelMixture m = init_mixture(seedv, c);
        for (int s = 0; s < 10; ++s) {
            const float v[1] = {dist(rng)};
            step_pixel(m, v, c);
        }
        const int i = static_cast<int>(rng() % m.components);
        m.variances[i] = std::max(m.variances[i], c.initial_sigma * c.initial_sigma);
        const float v[1] = {m.mean(i)[0]};
        CHECK(match_component(m, v, c).has_value());
    }
}

TEST_CASE("constant input converges to background within 100 steps") {
    auto c = test_config();
    c.learning_rate = 0.05f;
    const float seedv[1] = {77.0f};
    PixelMixture m = init_mixture(seedv, c);
    PixelLabel last = PixelLabel::Foreground;
    const float v[1] = {77.0f};
    for (int s = 0; s < 100; ++s) last = step_pixel(m, v, c);
    CHECK(last == PixelLabel::Background);
    // dominant weight approaches 1 monotonically under constant input
    CHECK(m.weights[0] > 0.99f);
}
