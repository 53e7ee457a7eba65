#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "uqt/decision.hpp"
#include "uqt/eval.hpp"
#include "uqt/io.hpp"
#include "uqt/metrics.hpp"
#include "uqt/types.hpp"

namespace uqt {

inline constexpr const char* kToolVersion = "0.1.0";

/// Options for a full evaluation run.
struct ReportOptions {
    std::vector<MetricKind> metrics = {MetricKind::SampleMean, MetricKind::SampleVariance,
                                       MetricKind::Entropy, MetricKind::MutualInformation};
    double exponent_y = 10.0;
    double percentile = 99.0;
    std::size_t grid = 1001;
    std::vector<double> mispred_thresholds = {0.1, 0.5, 0.9};
    std::optional<double> fixed_normalizer;  // overrides the data percentile
};

namespace detail {

inline nlohmann::json curve_summary_json(const EvalCurve& curve) {
    return {
        {"max_accuracy", curve.summary->max_accuracy},
        {"argmax_threshold", curve.summary->argmax_threshold},
        {"plateau_width", curve.summary->plateau_width},
    };
}

inline std::string threshold_key(double t) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", t);
    return buf;
}

inline nlohmann::json mispred_json(const ScoreVector& scores, const LabelVector& labels,
                                   const UncertaintyVector& detector,
                                   const std::vector<double>& thresholds) {
    nlohmann::json out;
    for (double t : thresholds) {
        nlohmann::json cell;
        try {
            const MispredictionResult r = misprediction_detection(scores, labels, detector, t);
            cell["detection_auc"] = r.detection_auc;
            cell["classification_accuracy"] = r.task.classification_accuracy;
        } catch (const EvalError& e) {
            // Degenerate at this threshold (no or only mispredictions).
            cell["detection_auc"] = nullptr;
            cell["note"] = e.what();
        }
        out[threshold_key(t)] = cell;
    }
    return out;
}

}  // namespace detail

/// Runs the full evaluation pipeline over one dataset and returns the
/// RunReport JSON: the plain single-model baseline plus every requested
/// metric scored through the 2D decision boundary, accuracy-curve summaries,
/// and the misprediction-detection table. Keys are sorted and floats are
/// emitted in shortest round-trip form, so the document is byte-stable for
/// fixed inputs and version.
inline nlohmann::json build_report(const Dataset& data, const ReportOptions& options) {
    const SampleSet& set = data.samples;
    const LabelVector& labels = data.labels;
    {
        bool has_pos = false, has_neg = false;
        for (int v : labels.labels) (v == 1 ? has_pos : has_neg) = true;
        if (!has_pos || !has_neg) {
            throw EvalError("SingleClass: evaluation needs both classes present");
        }
    }
    const ScoreVector single = positive_scores(set, 0);

    nlohmann::json report;
    report["version"] = kToolVersion;
    report["config"] = {
        {"n_inputs", set.n_inputs()},
        {"n_samples", set.n_samples()},
        {"n_classes", set.n_classes()},
        {"exponent_y", options.exponent_y},
        {"percentile", options.percentile},
        {"grid", options.grid},
        {"mispred_thresholds", options.mispred_thresholds},
        {"fixed_normalizer",
         options.fixed_normalizer ? nlohmann::json(*options.fixed_normalizer)
                                  : nlohmann::json(nullptr)},
    };

    // Plain single-model baseline, always present.
    {
        nlohmann::json b;
        b["roc_auc"] = *roc_curve(single.scores, labels).auc;
        b["pr_auc"] = *pr_curve(single.scores, labels).auc;
        const auto sweep = threshold_sweep(single, std::nullopt, DecisionConfig{}, options.grid);
        b["accuracy_curve"] = detail::curve_summary_json(accuracy_curve(sweep, labels));
        report["baseline"] = b;
        report["misprediction"]["baseline"] = detail::mispred_json(
            single, labels, baseline_uncertainty(single), options.mispred_thresholds);
    }

    for (MetricKind kind : options.metrics) {
        const UncertaintyVector u = compute_metric(kind, set);
        DecisionConfig config;
        config.exponent = options.exponent_y;
        config.percentile = options.percentile;
        config.normalizer = options.fixed_normalizer
                                ? *options.fixed_normalizer
                                : normalizer_from_data(u, options.percentile);

        std::vector<double> combined(set.n_inputs());
        for (std::size_t i = 0; i < set.n_inputs(); ++i) {
            combined[i] = combined_score(u.values[i], single.scores[i], config);
        }
        nlohmann::json m;
        m["normalizer"] = config.normalizer;
        m["roc_auc"] = *roc_curve(combined, labels).auc;
        m["pr_auc"] = *pr_curve(combined, labels).auc;
        const auto sweep = threshold_sweep(single, u, config, options.grid);
        m["accuracy_curve"] = detail::curve_summary_json(accuracy_curve(sweep, labels));
        report["metrics"][to_string(kind)] = m;
        report["misprediction"][to_string(kind)] =
            detail::mispred_json(single, labels, u, options.mispred_thresholds);
    }
    return report;
}

}  // namespace uqt
