#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <utility>
#include <vector>

#include "uqt/decision.hpp"
#include "uqt/types.hpp"

namespace uqt {

struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
};

inline ConfusionCounts confusion(const PredictionVector& pred, const LabelVector& labels) {
    if (pred.size() != labels.size()) {
        throw EvalError("LengthMismatch: " + std::to_string(pred.size()) +
                        " predictions vs " + std::to_string(labels.size()) + " labels");
    }
    ConfusionCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (labels.labels[i] == 1) {
            pred.predictions[i] == 1 ? ++c.tp : ++c.fn;
        } else {
            pred.predictions[i] == 1 ? ++c.fp : ++c.tn;
        }
    }
    return c;
}

inline double accuracy(const ConfusionCounts& c) {
    if (c.total() == 0) throw EvalError("EmptyInput: empty confusion counts");
    return static_cast<double>(c.tp + c.tn) / static_cast<double>(c.total());
}

namespace detail {

struct ScoreGroup {
    double score;
    std::size_t pos;  // positives at exactly this score
    std::size_t neg;
};

// Distinct score values in descending order with per-value class counts.
inline std::vector<ScoreGroup> group_by_score(const std::vector<double>& scores,
                                              const LabelVector& labels) {
    if (scores.size() != labels.size()) {
        throw EvalError("LengthMismatch: " + std::to_string(scores.size()) +
                        " scores vs " + std::to_string(labels.size()) + " labels");
    }
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::vector<ScoreGroup> groups;
    for (std::size_t idx : order) {
        if (groups.empty() || groups.back().score != scores[idx]) {
            groups.push_back({scores[idx], 0, 0});
        }
        labels.labels[idx] == 1 ? ++groups.back().pos : ++groups.back().neg;
    }
    return groups;
}

}  // namespace detail

/// ROC curve: one vertex per distinct score value (ties grouped) plus the
/// (0,0) and (1,1) sentinels, AUC by trapezoid. Equals the pairwise oracle.
inline EvalCurve roc_curve(const std::vector<double>& scores, const LabelVector& labels) {
    const auto groups = detail::group_by_score(scores, labels);
    std::size_t total_pos = 0, total_neg = 0;
    for (const auto& g : groups) {
        total_pos += g.pos;
        total_neg += g.neg;
    }
    if (total_pos == 0 || total_neg == 0) {
        throw EvalError("SingleClass: ROC needs both classes present");
    }
    EvalCurve curve;
    curve.kind = EvalCurve::Kind::Roc;
    curve.points.push_back({std::numeric_limits<double>::infinity(), 0.0, 0.0});
    double auc = 0.0;
    std::size_t tp = 0, fp = 0;
    double prev_x = 0.0, prev_y = 0.0;
    for (const auto& g : groups) {
        tp += g.pos;
        fp += g.neg;
        const double x = static_cast<double>(fp) / static_cast<double>(total_neg);
        const double y = static_cast<double>(tp) / static_cast<double>(total_pos);
        auc += (x - prev_x) * (y + prev_y) / 2.0;
        curve.points.push_back({g.score, x, y});
        prev_x = x;
        prev_y = y;
    }
    curve.points.push_back({-std::numeric_limits<double>::infinity(), 1.0, 1.0});
    curve.auc = auc;
    return curve;
}

/// Precision-recall curve at distinct scores; AUC is average precision
/// (step-wise sum), not trapezoid.
inline EvalCurve pr_curve(const std::vector<double>& scores, const LabelVector& labels) {
    const auto groups = detail::group_by_score(scores, labels);
    std::size_t total_pos = 0;
    for (const auto& g : groups) total_pos += g.pos;
    if (total_pos == 0) throw EvalError("NoPositives: PR needs at least one positive label");
    EvalCurve curve;
    curve.kind = EvalCurve::Kind::Pr;
    double ap = 0.0;
    double prev_recall = 0.0;
    std::size_t tp = 0, predicted = 0;
    for (const auto& g : groups) {
        tp += g.pos;
        predicted += g.pos + g.neg;
        const double recall = static_cast<double>(tp) / static_cast<double>(total_pos);
        const double precision = static_cast<double>(tp) / static_cast<double>(predicted);
        ap += (recall - prev_recall) * precision;
        curve.points.push_back({g.score, recall, precision});
        prev_recall = recall;
    }
    curve.auc = ap;
    return curve;
}

/// Exhaustive O(N^2) pairwise AUC: correctly ordered (pos, neg) pairs plus
/// half credit for ties, over all pos x neg pairs. Independent check for
/// roc_curve.
inline double auc_oracle(const std::vector<double>& scores, const LabelVector& labels) {
    if (scores.size() != labels.size()) {
        throw EvalError("LengthMismatch between scores and labels");
    }
    double wins = 0.0;
    std::size_t pairs = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (labels.labels[i] != 1) continue;
        for (std::size_t j = 0; j < scores.size(); ++j) {
            if (labels.labels[j] != 0) continue;
            ++pairs;
            if (scores[i] > scores[j]) {
                wins += 1.0;
            } else if (scores[i] == scores[j]) {
                wins += 0.5;
            }
        }
    }
    if (pairs == 0) throw EvalError("SingleClass: AUC needs both classes present");
    return wins / static_cast<double>(pairs);
}

/// Accuracy versus threshold from a sweep. Plateau width is the measure of
/// {t : accuracy(t) >= 0.95 * max}, summed over maximal contiguous runs of
/// qualifying grid points.
inline EvalCurve accuracy_curve(const std::vector<std::pair<double, PredictionVector>>& sweep,
                                const LabelVector& labels) {
    if (sweep.empty()) throw EvalError("EmptyInput: empty threshold sweep");
    EvalCurve curve;
    curve.kind = EvalCurve::Kind::Accuracy;
    for (const auto& [t, pred] : sweep) {
        curve.points.push_back({t, t, accuracy(confusion(pred, labels))});
    }
    EvalCurve::AccuracySummary summary{0.0, curve.points.front().threshold, 0.0};
    for (const auto& p : curve.points) {
        if (p.y > summary.max_accuracy) {
            summary.max_accuracy = p.y;
            summary.argmax_threshold = p.threshold;
        }
    }
    const double cutoff = 0.95 * summary.max_accuracy;
    double run_start = 0.0;
    bool in_run = false;
    for (std::size_t k = 0; k < curve.points.size(); ++k) {
        const bool ok = curve.points[k].y >= cutoff;
        if (ok && !in_run) {
            run_start = curve.points[k].threshold;
            in_run = true;
        }
        if (in_run && (!ok || k + 1 == curve.points.size())) {
            const double run_end = ok ? curve.points[k].threshold : curve.points[k - 1].threshold;
            summary.plateau_width += run_end - run_start;
            in_run = false;
        }
    }
    curve.summary = summary;
    return curve;
}

/// Misprediction labels (1 = classifier wrong) built from plain thresholding
/// at t, plus the detector scores to rank them by.
struct MispredictionTask {
    double threshold;
    std::vector<int> misprediction_labels;
    UncertaintyVector detector;
    double classification_accuracy;
};

struct MispredictionResult {
    MispredictionTask task;
    double detection_auc;
};

/// Detection ROC-AUC of `detector` for the mispredictions of the plain
/// classifier at threshold t, plus the classification accuracy at t.
inline MispredictionResult misprediction_detection(const ScoreVector& scores,
                                                   const LabelVector& labels,
                                                   const UncertaintyVector& detector,
                                                   double t) {
    if (scores.size() != labels.size() || detector.size() != labels.size()) {
        throw EvalError("LengthMismatch among scores, labels, detector");
    }
    const PredictionVector pred = classify_plain(scores, t);
    MispredictionTask task;
    task.threshold = t;
    task.detector = detector;
    std::size_t wrong = 0;
    task.misprediction_labels.reserve(labels.size());
    for (std::size_t i = 0; i < labels.size(); ++i) {
        const int mis = pred.predictions[i] != labels.labels[i] ? 1 : 0;
        wrong += static_cast<std::size_t>(mis);
        task.misprediction_labels.push_back(mis);
    }
    task.classification_accuracy =
        1.0 - static_cast<double>(wrong) / static_cast<double>(labels.size());
    if (wrong == 0) throw EvalError("AllCorrect: no mispredictions at t = " + std::to_string(t));
    if (wrong == labels.size()) {
        throw EvalError("AllWrong: everything mispredicted at t = " + std::to_string(t));
    }
    const EvalCurve roc = roc_curve(detector.values, LabelVector{task.misprediction_labels});
    return {std::move(task), *roc.auc};
}

}  // namespace uqt
