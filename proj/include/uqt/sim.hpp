#pragma once

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "uqt/rng.hpp"
#include "uqt/types.hpp"

namespace uqt {

/// Sampling profiles mimicking how the three uncertainty methods disperse
/// their T predictions: ensembles draw few samples with plain noise, MC
/// dropout draws many with inflated per-sample noise, TTA draws many with a
/// shared (correlated) noise component.
enum class MethodProfile { EnsembleLike, DropoutLike, TtaLike };

inline const char* to_string(MethodProfile p) {
    switch (p) {
        case MethodProfile::EnsembleLike: return "ensemble-like";
        case MethodProfile::DropoutLike: return "dropout-like";
        case MethodProfile::TtaLike: return "tta-like";
    }
    return "?";
}

inline MethodProfile profile_from_string(const std::string& name) {
    if (name == "ensemble-like") return MethodProfile::EnsembleLike;
    if (name == "dropout-like") return MethodProfile::DropoutLike;
    if (name == "tta-like") return MethodProfile::TtaLike;
    throw ConfigError("InvalidConfig: unknown method profile '" + name + "'");
}

inline std::size_t default_samples(MethodProfile p) {
    return p == MethodProfile::EnsembleLike ? 5 : 50;
}

/// Seed used for all shipped presets and frozen acceptance numbers.
inline constexpr std::uint64_t kReleaseSeed = 1729;

/// Logit-normal generative regime. Per input: a Bernoulli label, a latent
/// population logit, and T noisy logistic samples around it. The shift
/// parameter pulls class means toward 0 and inflates both spreads,
/// emulating deployment-domain degradation. A proxy for real pathology
/// score distributions, not a model of them.
struct RegimeConfig {
    std::size_t n_inputs = 8000;
    std::size_t t_samples = 5;
    std::uint64_t seed = kReleaseSeed;
    double class_balance = 0.6;   // pi = P(label 1)
    double mu_pos = 0.48;         // logit-space class means
    double mu_neg = -8.6;
    double sigma_pop = 2.1;       // population spread
    double tau = 2.6;             // per-sample spread
    double shift = 0.0;           // delta >= 0
    MethodProfile profile = MethodProfile::EnsembleLike;

    void validate() const {
        if (n_inputs < 1) throw ConfigError("InvalidConfig: n_inputs must be >= 1");
        if (t_samples < 1) throw ConfigError("InvalidConfig: t_samples must be >= 1");
        if (class_balance <= 0.0 || class_balance >= 1.0) {
            throw ConfigError("InvalidConfig: class balance must be in (0,1)");
        }
        if (sigma_pop <= 0.0) throw ConfigError("InvalidConfig: sigma_pop must be > 0");
        if (tau < 0.0) throw ConfigError("InvalidConfig: tau must be >= 0");
        if (shift < 0.0) throw ConfigError("InvalidConfig: shift must be >= 0");
    }
};

struct SimData {
    SampleSet samples;
    LabelVector labels;
    ScoreVector scores;  // sample index 0, the designated single model
};

namespace detail {

inline double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

inline double tau_scale(MethodProfile p) {
    // Dropout-like runs carry extra per-sample noise relative to ensembles.
    return p == MethodProfile::DropoutLike ? 1.5 : 1.0;
}

inline std::string make_input_id(std::size_t index) {
    char buf[24];
    std::snprintf(buf, sizeof buf, "in%06zu", index);
    return buf;
}

}  // namespace detail

/// Generates a SampleSet, labels, and single-model scores for a regime.
///
/// The variate stream is normative: one PCG32 stream seeded with
/// config.seed, and per input, in order, one uniform for the label, one
/// normal for the population logit, one normal for the TTA shared component
/// (tta-like profile only), then T normals for the per-sample noise. Every
/// normal consumes two uniforms (Box-Muller, cosine branch). Identical
/// configs and seeds therefore give bitwise-identical outputs everywhere.
inline SimData generate(const RegimeConfig& config) {
    config.validate();
    const std::size_t n = config.n_inputs;
    const std::size_t t = config.t_samples;
    const double inflate = 1.0 + config.shift;
    const double attenuate = 1.0 - config.shift;
    const double tau_eff = config.tau * detail::tau_scale(config.profile) * inflate;
    const double sigma_eff = config.sigma_pop * inflate;
    const bool correlated = config.profile == MethodProfile::TtaLike;
    // Shared-component weight for the tta-like profile; the independent part
    // is scaled so per-sample noise keeps unit variance.
    const double shared_w = 0.5;
    const double indep_w = std::sqrt(1.0 - shared_w * shared_w);

    Pcg32 rng(config.seed);
    std::vector<double> probs;
    probs.reserve(n * t * 2);
    std::vector<std::string> ids;
    ids.reserve(n);
    LabelVector labels;
    labels.labels.reserve(n);

    for (std::size_t i = 0; i < n; ++i) {
        const int label = rng.uniform() < config.class_balance ? 1 : 0;
        const double mu = (label == 1 ? config.mu_pos : config.mu_neg) * attenuate;
        const double m = mu + sigma_eff * rng.normal();
        const double shared = correlated ? rng.normal() : 0.0;
        for (std::size_t k = 0; k < t; ++k) {
            const double noise = correlated ? shared_w * shared + indep_w * rng.normal()
                                            : rng.normal();
            const double s_pos = detail::logistic(m + tau_eff * noise);
            probs.push_back(1.0 - s_pos);
            probs.push_back(s_pos);
        }
        ids.push_back(detail::make_input_id(i));
        labels.labels.push_back(label);
    }

    SampleSet set = validate_sample_set(std::move(probs), n, t, 2, std::move(ids));
    ScoreVector scores = positive_scores(set, 0);
    return {std::move(set), std::move(labels), std::move(scores)};
}

/// Frozen regime presets. The shift values are calibrated so the
/// single-model score reaches ROC-AUC about 0.97 in-domain, 0.96 under a
/// center shift, and 0.90 under a subtype shift at N = 8000 with the
/// release seed. The same constants ship in presets.json.
inline RegimeConfig preset(const std::string& name) {
    RegimeConfig config;  // defaults are the in-domain constants
    if (name == "in-domain") {
        config.shift = 0.0;
    } else if (name == "center-shift") {
        config.shift = 0.04;
    } else if (name == "subtype-shift") {
        config.shift = 0.19;
    } else {
        throw ConfigError("UnknownPreset: '" + name + "'");
    }
    return config;
}

}  // namespace uqt
