#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>
#include <vector>

#include "uqt/types.hpp"

namespace uqt {

/// Parameters of the 2D decision boundary f(u,s) = ((u/P_u)^y + s^y)^(1/y).
/// Prediction is positive for f > t, strict.
struct DecisionConfig {
    double threshold = 0.5;   // t
    double exponent = 10.0;   // y, controls boundary shape (square as y grows)
    double normalizer = 1.0;  // P_u
    double percentile = 99.0; // percentile used to derive P_u from data

    void validate() const {
        if (threshold < 0.0) throw ConfigError("InvalidConfig: threshold must be >= 0");
        if (exponent < 1.0) throw ConfigError("InvalidConfig: exponent must be >= 1");
        if (normalizer <= 0.0) throw ConfigError("InvalidConfig: normalizer must be > 0");
        if (percentile <= 0.0 || percentile > 100.0) {
            throw ConfigError("InvalidConfig: percentile must be in (0,100]");
        }
    }
};

struct PredictionVector {
    std::vector<int> predictions;  // values in {0,1}
    DecisionConfig config;

    std::size_t size() const { return predictions.size(); }
};

/// Nearest-rank percentile of the uncertainty values: sorted ascending,
/// index ceil(p/100 * N) - 1. Returns 1e-12 instead of 0 so the normalizer
/// stays strictly positive on degenerate all-zero data.
inline double normalizer_from_data(const UncertaintyVector& u, double percentile = 99.0) {
    if (u.values.empty()) throw EvalError("EmptyInput: no uncertainty values");
    if (percentile <= 0.0 || percentile > 100.0) {
        throw ConfigError("InvalidConfig: percentile must be in (0,100]");
    }
    std::vector<double> sorted = u.values;
    std::sort(sorted.begin(), sorted.end());
    const auto n = static_cast<double>(sorted.size());
    auto idx = static_cast<std::size_t>(std::ceil(percentile / 100.0 * n)) - 1;
    idx = std::min(idx, sorted.size() - 1);
    const double v = sorted[idx];
    return v > 0.0 ? v : 1e-12;
}

/// f(u,s) = ((u/P_u)^y + s^y)^(1/y). Factored through max(u/P_u, s) for
/// numerical stability at large y; the zero-term cases reduce exactly to the
/// other axis, so combined classification with u = 0 matches plain
/// thresholding bit for bit.
inline double combined_score(double u, double s, const DecisionConfig& config) {
    if (u < 0.0 || s < 0.0) throw ValidationError("NegativeInput: combined_score needs u >= 0, s >= 0");
    const double a = u / config.normalizer;
    if (a == 0.0) return s;
    if (s == 0.0) return a;
    const double m = std::max(a, s);
    const double y = config.exponent;
    return m * std::pow(std::pow(a / m, y) + std::pow(s / m, y), 1.0 / y);
}

/// Plain thresholding of P(positive) scores; positive iff score > t, strict.
inline PredictionVector classify_plain(const ScoreVector& scores, double t) {
    PredictionVector out;
    out.config.threshold = t;
    out.config.normalizer = 1.0;
    out.predictions.reserve(scores.size());
    for (double s : scores.scores) out.predictions.push_back(s > t ? 1 : 0);
    return out;
}

/// 2D-boundary classification; positive iff f(u_i, s_i) > t.
inline PredictionVector classify_combined(const ScoreVector& scores,
                                          const UncertaintyVector& u,
                                          const DecisionConfig& config) {
    config.validate();
    if (scores.size() != u.size()) {
        throw ValidationError("LengthMismatch: " + std::to_string(scores.size()) +
                              " scores vs " + std::to_string(u.size()) + " uncertainties");
    }
    PredictionVector out;
    out.config = config;
    out.predictions.reserve(scores.size());
    for (std::size_t i = 0; i < scores.size(); ++i) {
        out.predictions.push_back(
            combined_score(u.values[i], scores.scores[i], config) > config.threshold ? 1 : 0);
    }
    return out;
}

/// Evaluates the classifier at `grid` evenly spaced thresholds over
/// [0, t_max], t_max = 1 for plain and 2^(1/y) for combined (the maximum
/// attainable f with u <= P_u, s <= 1).
inline std::vector<std::pair<double, PredictionVector>> threshold_sweep(
    const ScoreVector& scores, const std::optional<UncertaintyVector>& u,
    DecisionConfig config, std::size_t grid) {
    if (grid < 2) throw ConfigError("InvalidConfig: grid must be >= 2");
    const double t_max = u ? std::pow(2.0, 1.0 / config.exponent) : 1.0;
    std::vector<std::pair<double, PredictionVector>> out;
    out.reserve(grid);
    for (std::size_t k = 0; k < grid; ++k) {
        const double t = t_max * static_cast<double>(k) / static_cast<double>(grid - 1);
        if (u) {
            config.threshold = t;
            out.emplace_back(t, classify_combined(scores, *u, config));
        } else {
            out.emplace_back(t, classify_plain(scores, t));
        }
    }
    return out;
}

}  // namespace uqt
