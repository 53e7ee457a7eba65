#include <catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "uqt/decision.hpp"
#include "uqt/eval.hpp"
#include "uqt/rng.hpp"

using namespace uqt;

namespace {

PredictionVector preds(std::vector<int> v) {
    PredictionVector p;
    p.predictions = std::move(v);
    return p;
}

// Independent average-precision recomputation: walk the descending score
// order one item at a time, accumulating precision at every recall step.
// Tied scores are grouped like pr_curve groups them, but the arithmetic is
// redone from scratch.
double ap_by_hand(std::vector<double> scores, std::vector<int> labels) {
    std::vector<std::size_t> order(scores.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    double total_pos = 0;
    for (int v : labels) total_pos += v;
    double ap = 0.0;
    double tp = 0, seen = 0, prev_recall = 0;
    std::size_t k = 0;
    while (k < order.size()) {
        std::size_t j = k;
        while (j < order.size() && scores[order[j]] == scores[order[k]]) {
            tp += labels[order[j]];
            seen += 1;
            ++j;
        }
        const double recall = tp / total_pos;
        ap += (recall - prev_recall) * (tp / seen);
        prev_recall = recall;
        k = j;
    }
    return ap;
}

}  // namespace

TEST_CASE("confusion counts") {
    LabelVector l1{{1, 0}};
    const auto c1 = confusion(preds({1, 0}), l1);
    CHECK(c1.tp == 1);
    CHECK(c1.tn == 1);
    CHECK(c1.fp == 0);
    CHECK(c1.fn == 0);

    LabelVector l2{{0, 0}};
    CHECK(confusion(preds({1, 1}), l2).fp == 2);

    LabelVector l3{{1, 1, 0, 0}};
    const auto c3 = confusion(preds({0, 1, 1, 0}), l3);
    CHECK(c3.fn == 1);
    CHECK(c3.tp == 1);
    CHECK(c3.fp == 1);
    CHECK(c3.tn == 1);

    CHECK_THROWS_AS(confusion(preds({1}), l3), EvalError);
}

TEST_CASE("accuracy from counts") {
    CHECK(accuracy({1, 0, 1, 0}) == 1.0);
    CHECK(accuracy({0, 1, 0, 1}) == 0.0);
    CHECK(accuracy({1, 1, 1, 1}) == 0.5);
    CHECK_THROWS_AS(accuracy({0, 0, 0, 0}), EvalError);
}

TEST_CASE("roc_curve frozen values") {
    LabelVector labels{{0, 0, 1, 1}};
    const std::vector<double> scores{0.1, 0.4, 0.35, 0.8};
    const EvalCurve roc = roc_curve(scores, labels);
    CHECK(*roc.auc == Catch::Approx(0.75).margin(1e-15));
    CHECK(roc.points.front().x == 0.0);
    CHECK(roc.points.front().y == 0.0);
    CHECK(roc.points.back().x == 1.0);
    CHECK(roc.points.back().y == 1.0);

    // perfectly separated
    LabelVector sep{{0, 0, 1, 1}};
    CHECK(*roc_curve({0.1, 0.2, 0.8, 0.9}, sep).auc == 1.0);

    // all tied
    CHECK(*roc_curve({0.5, 0.5, 0.5, 0.5}, sep).auc == 0.5);

    LabelVector single{{1, 1}};
    CHECK_THROWS_MATCHES(roc_curve({0.1, 0.2}, single), EvalError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("SingleClass")));
}

TEST_CASE("pr_curve frozen values") {
    LabelVector sep{{0, 0, 1, 1}};
    CHECK(*pr_curve({0.1, 0.2, 0.8, 0.9}, sep).auc == 1.0);

    LabelVector labels{{0, 0, 1, 1}};
    CHECK(*pr_curve({0.1, 0.4, 0.35, 0.8}, labels).auc ==
          Catch::Approx(0.5 + 0.5 * (2.0 / 3.0)).margin(1e-15));

    LabelVector one_pos{{0, 0, 1}};
    CHECK(*pr_curve({0.8, 0.7, 0.1}, one_pos).auc == Catch::Approx(1.0 / 3.0).margin(1e-15));

    LabelVector no_pos{{0, 0}};
    CHECK_THROWS_MATCHES(pr_curve({0.1, 0.2}, no_pos), EvalError,
                         Catch::Matchers::MessageMatches(
                             Catch::Matchers::ContainsSubstring("NoPositives")));
}

TEST_CASE("auc_oracle basics") {
    LabelVector labels{{0, 0, 1, 1}};
    std::vector<double> scores{0.1, 0.4, 0.35, 0.8};
    CHECK(auc_oracle(scores, labels) == Catch::Approx(0.75).margin(1e-15));

    std::vector<double> negated;
    for (double s : scores) negated.push_back(-s);
    CHECK(auc_oracle(negated, labels) == Catch::Approx(0.25).margin(1e-15));

    CHECK(auc_oracle({0.3, 0.3, 0.3, 0.3}, labels) == 0.5);
}

TEST_CASE("roc_curve AUC equals the pairwise oracle, with ties", "[property]") {
    Pcg32 rng(1234);
    for (int rep = 0; rep < 500; ++rep) {
        const std::size_t n = 2 + rng.next_u32() % 199;
        std::vector<double> scores(n);
        LabelVector labels;
        labels.labels.resize(n);
        bool has_pos = false, has_neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            // quantized scores inject plenty of exact ties
            scores[i] = (rng.next_u32() % 8) / 7.0;
            labels.labels[i] = rng.uniform() < 0.5 ? 1 : 0;
            (labels.labels[i] ? has_pos : has_neg) = true;
        }
        if (!has_pos || !has_neg) continue;
        CHECK(*roc_curve(scores, labels).auc ==
              Catch::Approx(auc_oracle(scores, labels)).margin(1e-12));
    }
}

TEST_CASE("roc_curve AUC is invariant under strictly increasing transforms", "[property]") {
    Pcg32 rng(77);
    for (int rep = 0; rep < 50; ++rep) {
        const std::size_t n = 10 + rng.next_u32() % 50;
        std::vector<double> scores(n);
        LabelVector labels;
        labels.labels.resize(n);
        bool has_pos = false, has_neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = rng.uniform();
            labels.labels[i] = rng.uniform() < 0.4 ? 1 : 0;
            (labels.labels[i] ? has_pos : has_neg) = true;
        }
        if (!has_pos || !has_neg) continue;
        std::vector<double> transformed(n);
        for (std::size_t i = 0; i < n; ++i) transformed[i] = std::exp(3.0 * scores[i]) - 0.5;
        CHECK(*roc_curve(scores, labels).auc == *roc_curve(transformed, labels).auc);
    }
}

TEST_CASE("roc_curve is monotone from (0,0) to (1,1)", "[property]") {
    Pcg32 rng(4242);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 4 + rng.next_u32() % 60;
        std::vector<double> scores(n);
        LabelVector labels;
        labels.labels.resize(n);
        bool has_pos = false, has_neg = false;
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = (rng.next_u32() % 16) / 15.0;
            labels.labels[i] = rng.uniform() < 0.5 ? 1 : 0;
            (labels.labels[i] ? has_pos : has_neg) = true;
        }
        if (!has_pos || !has_neg) continue;
        const EvalCurve roc = roc_curve(scores, labels);
        REQUIRE(roc.points.front().x == 0.0);
        REQUIRE(roc.points.front().y == 0.0);
        REQUIRE(roc.points.back().x == 1.0);
        REQUIRE(roc.points.back().y == 1.0);
        for (std::size_t k = 1; k < roc.points.size(); ++k) {
            REQUIRE(roc.points[k].x >= roc.points[k - 1].x);
            REQUIRE(roc.points[k].y >= roc.points[k - 1].y);
        }
    }
}

TEST_CASE("pr_curve AP matches the hand recomputation", "[property]") {
    Pcg32 rng(555);
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 2 + rng.next_u32() % 99;
        std::vector<double> scores(n);
        std::vector<int> labels(n);
        bool has_pos = false;
        for (std::size_t i = 0; i < n; ++i) {
            scores[i] = (rng.next_u32() % 6) / 5.0;
            labels[i] = rng.uniform() < 0.5 ? 1 : 0;
            has_pos |= labels[i] == 1;
        }
        if (!has_pos) continue;
        CHECK(*pr_curve(scores, LabelVector{labels}).auc ==
              Catch::Approx(ap_by_hand(scores, labels)).margin(1e-12));
    }
}

TEST_CASE("accuracy_curve summary") {
    ScoreVector s;
    s.scores = {0.1, 0.2, 0.8, 0.9};
    LabelVector labels{{0, 0, 1, 1}};

    SECTION("perfect scores reach accuracy 1") {
        const auto sweep = threshold_sweep(s, std::nullopt, DecisionConfig{}, 101);
        const EvalCurve curve = accuracy_curve(sweep, labels);
        CHECK(curve.summary->max_accuracy == 1.0);
        // all-positive predictions at t = 0 on balanced labels
        CHECK(curve.points.front().y == 0.5);
    }
    SECTION("a flat curve has plateau width equal to the sweep range") {
        ScoreVector constant;
        constant.scores = {0.5, 0.5};
        LabelVector half{{1, 0}};
        const auto sweep = threshold_sweep(constant, std::nullopt, DecisionConfig{}, 11);
        const EvalCurve curve = accuracy_curve(sweep, half);
        CHECK(curve.summary->plateau_width == Catch::Approx(1.0));
    }
    SECTION("sweep accuracy agrees with an independent confusion recomputation") {
        const auto sweep = threshold_sweep(s, std::nullopt, DecisionConfig{}, 21);
        const EvalCurve curve = accuracy_curve(sweep, labels);
        for (std::size_t k = 0; k < sweep.size(); ++k) {
            CHECK(curve.points[k].y ==
                  accuracy(confusion(classify_plain(s, sweep[k].first), labels)));
        }
    }
    SECTION("empty sweep is rejected") {
        CHECK_THROWS_AS(accuracy_curve({}, labels), EvalError);
    }
}

TEST_CASE("misprediction_detection") {
    ScoreVector s;
    s.scores = {0.9, 0.8, 0.3, 0.6};
    LabelVector labels{{1, 1, 0, 0}};

    SECTION("perfect detector") {
        UncertaintyVector det;
        det.values = {0.1, 0.2, 0.3, 0.9};  // top value on the one misprediction
        const auto r = misprediction_detection(s, labels, det, 0.5);
        CHECK(r.detection_auc == 1.0);
        CHECK(r.task.classification_accuracy == 0.75);
        CHECK(r.task.misprediction_labels == std::vector<int>{0, 0, 0, 1});
    }
    SECTION("constant detector scores 0.5") {
        UncertaintyVector det;
        det.values = {0.2, 0.2, 0.2, 0.2};
        CHECK(misprediction_detection(s, labels, det, 0.5).detection_auc == 0.5);
    }
    SECTION("degenerate tasks raise") {
        UncertaintyVector det;
        det.values = {0.1, 0.2, 0.3, 0.4};
        ScoreVector perfect;
        perfect.scores = {0.9, 0.8, 0.1, 0.2};
        CHECK_THROWS_MATCHES(misprediction_detection(perfect, labels, det, 0.5), EvalError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("AllCorrect")));
        ScoreVector inverted;
        inverted.scores = {0.1, 0.2, 0.9, 0.8};
        CHECK_THROWS_MATCHES(misprediction_detection(inverted, labels, det, 0.5), EvalError,
                             Catch::Matchers::MessageMatches(
                                 Catch::Matchers::ContainsSubstring("AllWrong")));
    }
    SECTION("detection AUC depends only on the misprediction set") {
        // flip which class is called positive while keeping the same inputs
        // mispredicted; the detection task is unchanged
        UncertaintyVector det;
        det.values = {0.15, 0.25, 0.35, 0.95};
        const auto direct = misprediction_detection(s, labels, det, 0.5);
        ScoreVector flipped;
        for (double v : s.scores) flipped.scores.push_back(1.0 - v);
        LabelVector inv{{0, 0, 1, 1}};
        // strict vs non-strict boundary differs at exact ties; avoid 0.5 ties
        const auto swapped = misprediction_detection(flipped, inv, det, 0.4999);
        CHECK(direct.task.misprediction_labels == swapped.task.misprediction_labels);
        CHECK(direct.detection_auc == swapped.detection_auc);
    }
}
