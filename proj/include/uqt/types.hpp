#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_set>
#include <utility>
#include <vector>

namespace uqt {

// Error categories map to distinct CLI exit codes (see README).
struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct EvalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// The positive ("tumour") class is class index 1. Fixed, not configurable,
// so a label inversion cannot happen silently through configuration.
inline constexpr std::size_t kPositiveClass = 1;

inline constexpr double kRowSumTolerance = 1e-6;

/// N inputs, each with T sampled class-probability vectors over C classes.
/// Immutable after construction; the shared output contract of every
/// sampling-based uncertainty method (ensembles, MC dropout, TTA).
class SampleSet {
public:
    SampleSet(std::size_t n_inputs, std::size_t n_samples, std::size_t n_classes,
              std::vector<double> probs, std::vector<std::string> input_ids)
        : n_inputs_(n_inputs),
          n_samples_(n_samples),
          n_classes_(n_classes),
          probs_(std::move(probs)),
          input_ids_(std::move(input_ids)) {}

    std::size_t n_inputs() const { return n_inputs_; }
    std::size_t n_samples() const { return n_samples_; }
    std::size_t n_classes() const { return n_classes_; }

    double prob(std::size_t input, std::size_t sample, std::size_t cls) const {
        return probs_[(input * n_samples_ + sample) * n_classes_ + cls];
    }

    const std::vector<double>& raw() const { return probs_; }
    const std::vector<std::string>& input_ids() const { return input_ids_; }

private:
    std::size_t n_inputs_;
    std::size_t n_samples_;
    std::size_t n_classes_;
    std::vector<double> probs_;  // row-major N x T x C
    std::vector<std::string> input_ids_;
};

/// Ground-truth binary labels, aligned with SampleSet input order.
struct LabelVector {
    std::vector<int> labels;  // values in {0,1}, 1 = positive

    std::size_t size() const { return labels.size(); }
};

enum class ScoreProvenance { SingleModel, SampleMean, External };

/// Per-input P(positive) scores.
struct ScoreVector {
    std::vector<double> scores;  // values in [0,1]
    ScoreProvenance provenance = ScoreProvenance::External;

    std::size_t size() const { return scores.size(); }
};

/// One scalar uncertainty per input.
struct UncertaintyVector {
    std::vector<double> values;  // finite, >= 0
    std::string metric;
    std::string method;

    std::size_t size() const { return values.size(); }
};

/// An evaluation curve: ordered (threshold, x, y) triples plus its area.
struct EvalCurve {
    enum class Kind { Roc, Pr, Accuracy };

    struct Point {
        double threshold;
        double x;
        double y;
    };

    struct AccuracySummary {
        double max_accuracy;
        double argmax_threshold;
        double plateau_width;  // measure of {t : acc >= 0.95 * max}
    };

    Kind kind;
    std::vector<Point> points;
    std::optional<double> auc;                  // absent for accuracy curves
    std::optional<AccuracySummary> summary;     // present for accuracy curves
};

/// Checks invariants and builds a SampleSet. Rows whose probabilities sum to
/// 1 within 1e-6 are renormalized by division; anything worse is an error.
inline SampleSet validate_sample_set(std::vector<double> probs,
                                     std::size_t n_inputs, std::size_t n_samples,
                                     std::size_t n_classes,
                                     std::vector<std::string> input_ids) {
    if (n_inputs == 0 || n_samples == 0) {
        throw ValidationError("EmptyInput: need at least one input and one sample");
    }
    if (n_classes < 2) {
        throw ValidationError("EmptyInput: need at least two classes");
    }
    if (probs.size() != n_inputs * n_samples * n_classes) {
        throw ValidationError("EmptyInput: probability array size does not match dimensions");
    }
    if (input_ids.size() != n_inputs) {
        throw ValidationError("EmptyInput: id count does not match input count");
    }
    {
        std::unordered_set<std::string> seen;
        for (const auto& id : input_ids) {
            if (!seen.insert(id).second) {
                throw ValidationError("DuplicateId: input id '" + id + "' appears twice");
            }
        }
    }
    for (std::size_t i = 0; i < n_inputs; ++i) {
        for (std::size_t t = 0; t < n_samples; ++t) {
            double* row = probs.data() + (i * n_samples + t) * n_classes;
            double sum = 0.0;
            for (std::size_t c = 0; c < n_classes; ++c) {
                if (!std::isfinite(row[c])) {
                    throw ValidationError("NonFinite: probability at input " +
                                          std::to_string(i) + ", sample " + std::to_string(t));
                }
                if (row[c] < 0.0 || row[c] > 1.0) {
                    throw ValidationError("RowSumViolation: probability outside [0,1] at input " +
                                          std::to_string(i) + ", sample " + std::to_string(t));
                }
                sum += row[c];
            }
            if (std::abs(sum - 1.0) > kRowSumTolerance) {
                throw ValidationError("RowSumViolation: row sums to " + std::to_string(sum) +
                                      " at input " + std::to_string(i) + ", sample " +
                                      std::to_string(t));
            }
            // Sums already within accumulated rounding of 1 are left untouched,
            // which makes validation idempotent bit for bit.
            if (std::abs(sum - 1.0) > 1e-9) {
                for (std::size_t c = 0; c < n_classes; ++c) row[c] /= sum;
            }
        }
    }
    return SampleSet(n_inputs, n_samples, n_classes, std::move(probs), std::move(input_ids));
}

/// Extracts the positive-class probability of one designated sample per input
/// (the "single model" score). Binary sets only.
inline ScoreVector positive_scores(const SampleSet& set, std::size_t sample_index) {
    if (set.n_classes() != 2) {
        throw ValidationError("NotBinary: positive_scores requires C = 2, got C = " +
                              std::to_string(set.n_classes()));
    }
    if (sample_index >= set.n_samples()) {
        throw ValidationError("IndexOutOfRange: sample index " + std::to_string(sample_index) +
                              " with T = " + std::to_string(set.n_samples()));
    }
    ScoreVector out;
    out.provenance = ScoreProvenance::SingleModel;
    out.scores.reserve(set.n_inputs());
    for (std::size_t i = 0; i < set.n_inputs(); ++i) {
        out.scores.push_back(set.prob(i, sample_index, kPositiveClass));
    }
    return out;
}

}  // namespace uqt
