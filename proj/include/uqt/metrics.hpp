#pragma once

#include <algorithm>
#include <cmath>
#include <string>

#include "uqt/types.hpp"

namespace uqt {

enum class MetricKind {
    SampleMean,
    SampleVariance,
    Entropy,
    MutualInformation,
    BaselineSoftmax,
};

inline const char* to_string(MetricKind kind) {
    switch (kind) {
        case MetricKind::SampleMean: return "sample_mean";
        case MetricKind::SampleVariance: return "sample_variance";
        case MetricKind::Entropy: return "entropy";
        case MetricKind::MutualInformation: return "mutual_information";
        case MetricKind::BaselineSoftmax: return "baseline";
    }
    return "?";
}

inline MetricKind metric_from_string(const std::string& name) {
    if (name == "sample_mean") return MetricKind::SampleMean;
    if (name == "sample_variance") return MetricKind::SampleVariance;
    if (name == "entropy") return MetricKind::Entropy;
    if (name == "mutual_information") return MetricKind::MutualInformation;
    if (name == "baseline") return MetricKind::BaselineSoftmax;
    throw ConfigError("unknown metric '" + name + "'");
}

namespace detail {

// Probabilities are clamped inside logarithms only; the linear factors are
// not, so deterministic predictions keep exactly zero entropy.
inline double safe_log(double p) {
    return std::log(std::clamp(p, 1e-12, 1.0));
}

inline void require_binary(const SampleSet& set, const char* op) {
    if (set.n_classes() != 2) {
        throw ValidationError(std::string("NotBinary: ") + op + " requires C = 2, got C = " +
                              std::to_string(set.n_classes()));
    }
}

inline double mean_positive(const SampleSet& set, std::size_t input) {
    double sum = 0.0;
    for (std::size_t t = 0; t < set.n_samples(); ++t) {
        sum += set.prob(input, t, kPositiveClass);
    }
    return sum / static_cast<double>(set.n_samples());
}

}  // namespace detail

/// u_s = 1 - 2 (sbar - 0.5)^2, sbar the mean positive-class score over the
/// T samples. Peaks at 1 when sbar = 0.5, hits 0 at sbar in {0, 1}.
inline UncertaintyVector sample_mean_uncertainty(const SampleSet& set,
                                                 std::string method = {}) {
    detail::require_binary(set, "sample_mean_uncertainty");
    UncertaintyVector out{{}, "sample_mean", std::move(method)};
    out.values.reserve(set.n_inputs());
    for (std::size_t i = 0; i < set.n_inputs(); ++i) {
        const double sbar = detail::mean_positive(set, i);
        out.values.push_back(1.0 - 2.0 * (sbar - 0.5) * (sbar - 0.5));
    }
    return out;
}

/// Unbiased sample variance of the positive-class probability across T.
inline UncertaintyVector sample_variance(const SampleSet& set, std::string method = {}) {
    detail::require_binary(set, "sample_variance");
    if (set.n_samples() < 2) {
        throw ValidationError("InsufficientSamples: sample_variance requires T >= 2, got T = " +
                              std::to_string(set.n_samples()));
    }
    UncertaintyVector out{{}, "sample_variance", std::move(method)};
    out.values.reserve(set.n_inputs());
    const double t = static_cast<double>(set.n_samples());
    for (std::size_t i = 0; i < set.n_inputs(); ++i) {
        const double sbar = detail::mean_positive(set, i);
        double ss = 0.0;
        for (std::size_t k = 0; k < set.n_samples(); ++k) {
            const double d = set.prob(i, k, kPositiveClass) - sbar;
            ss += d * d;
        }
        out.values.push_back(ss / (t - 1.0));
    }
    return out;
}

/// Shannon entropy of the per-class sample-mean probabilities, natural log.
/// The double-sum form with the inner average distributes to
/// -sum_c pbar_c ln pbar_c; this is the reduced form.
inline UncertaintyVector predictive_entropy(const SampleSet& set, std::string method = {}) {
    UncertaintyVector out{{}, "entropy", std::move(method)};
    out.values.reserve(set.n_inputs());
    const double t = static_cast<double>(set.n_samples());
    for (std::size_t i = 0; i < set.n_inputs(); ++i) {
        double h = 0.0;
        for (std::size_t c = 0; c < set.n_classes(); ++c) {
            double pbar = 0.0;
            for (std::size_t k = 0; k < set.n_samples(); ++k) pbar += set.prob(i, k, c);
            pbar /= t;
            h -= pbar * detail::safe_log(pbar);
        }
        out.values.push_back(std::max(h, 0.0));
    }
    return out;
}

/// Entropy of the mean prediction minus the mean entropy of the individual
/// predictions. Zero when all T samples agree; clamped at 0 against rounding.
inline UncertaintyVector mutual_information(const SampleSet& set, std::string method = {}) {
    const UncertaintyVector h_mean = predictive_entropy(set);
    UncertaintyVector out{{}, "mutual_information", std::move(method)};
    out.values.reserve(set.n_inputs());
    const double t = static_cast<double>(set.n_samples());
    for (std::size_t i = 0; i < set.n_inputs(); ++i) {
        double expected_h = 0.0;
        for (std::size_t k = 0; k < set.n_samples(); ++k) {
            double h = 0.0;
            for (std::size_t c = 0; c < set.n_classes(); ++c) {
                const double p = set.prob(i, k, c);
                h -= p * detail::safe_log(p);
            }
            expected_h += h;
        }
        expected_h /= t;
        out.values.push_back(std::max(h_mean.values[i] - expected_h, 0.0));
    }
    return out;
}

/// u_base = 1 - 2 (s - 0.5)^2 from a single softmax score. Note the range is
/// [0.5, 1], not [0, 1]: the formula is anchored at 0.5, and only the ranking
/// matters downstream.
inline UncertaintyVector baseline_uncertainty(const ScoreVector& scores,
                                              std::string method = {}) {
    UncertaintyVector out{{}, "baseline", std::move(method)};
    out.values.reserve(scores.size());
    for (double s : scores.scores) {
        out.values.push_back(1.0 - 2.0 * (s - 0.5) * (s - 0.5));
    }
    return out;
}

/// Traditional ensembling: mean positive-class score over the T samples.
inline ScoreVector mean_softmax(const SampleSet& set) {
    detail::require_binary(set, "mean_softmax");
    ScoreVector out;
    out.provenance = ScoreProvenance::SampleMean;
    out.scores.reserve(set.n_inputs());
    for (std::size_t i = 0; i < set.n_inputs(); ++i) {
        out.scores.push_back(detail::mean_positive(set, i));
    }
    return out;
}

/// Dispatch for the SampleSet-based metrics. BaselineSoftmax needs a
/// ScoreVector and is not served here.
inline UncertaintyVector compute_metric(MetricKind kind, const SampleSet& set,
                                        std::string method = {}) {
    switch (kind) {
        case MetricKind::SampleMean: return sample_mean_uncertainty(set, std::move(method));
        case MetricKind::SampleVariance: return sample_variance(set, std::move(method));
        case MetricKind::Entropy: return predictive_entropy(set, std::move(method));
        case MetricKind::MutualInformation: return mutual_information(set, std::move(method));
        case MetricKind::BaselineSoftmax:
            throw ConfigError("baseline metric needs a score vector, not a sample set");
    }
    throw ConfigError("unhandled metric kind");
}

}  // namespace uqt
