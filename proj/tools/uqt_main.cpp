// Command-line front end: simulate prediction files, compute uncertainty
// metrics, run full evaluations, and emit curves for external plotting.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "uqt/decision.hpp"
#include "uqt/eval.hpp"
#include "uqt/io.hpp"
#include "uqt/metrics.hpp"
#include "uqt/report.hpp"
#include "uqt/sim.hpp"
#include "uqt/types.hpp"

namespace {

// Exit codes, also documented in the README:
// 0 ok, 2 parse, 3 validation, 4 evaluation, 5 config, 6 io, 64 usage.
constexpr int kExitParse = 2;
constexpr int kExitValidation = 3;
constexpr int kExitEval = 4;
constexpr int kExitConfig = 5;
constexpr int kExitIo = 6;
constexpr int kExitUsage = 64;

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw uqt::IoError("IoError: cannot open '" + path + "' for writing");
    return out;
}

void write_text(const std::string& path, const std::string& text) {
    auto out = open_out(path);
    out << text;
    out.flush();
    if (!out) throw uqt::IoError("IoError: write failed for '" + path + "'");
}

struct SimulateArgs {
    std::string preset_name;
    std::string out_path;
    uqt::RegimeConfig config;
    bool explicit_config = false;
};

void run_simulate(const SimulateArgs& args) {
    uqt::RegimeConfig config = args.config;
    if (!args.preset_name.empty()) {
        const std::uint64_t seed = config.seed;
        const std::size_t n = config.n_inputs;
        config = uqt::preset(args.preset_name);
        config.seed = seed;
        config.n_inputs = n;
    }
    const uqt::SimData data = uqt::generate(config);
    uqt::write_prediction_file(args.out_path, data.samples, data.labels);
}

void run_metrics(const std::string& in_path, const std::string& metric_name,
                 const std::string& out_path) {
    const uqt::MetricKind kind = uqt::metric_from_string(metric_name);
    const uqt::Dataset data = uqt::read_prediction_file(in_path);
    uqt::UncertaintyVector u;
    if (kind == uqt::MetricKind::BaselineSoftmax) {
        u = uqt::baseline_uncertainty(uqt::positive_scores(data.samples, 0));
    } else {
        u = uqt::compute_metric(kind, data.samples);
    }
    std::vector<std::size_t> order(data.samples.n_inputs());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return data.samples.input_ids()[a] < data.samples.input_ids()[b];
    });
    std::string out = "input_id,uncertainty\n";
    for (std::size_t i : order) {
        out += data.samples.input_ids()[i];
        out += ',';
        out += uqt::detail::format_double(u.values[i]);
        out += '\n';
    }
    write_text(out_path, out);
}

struct EvaluateArgs {
    std::string in_path;
    std::string out_path;  // empty = stdout
    std::vector<std::string> metric_names;
    uqt::ReportOptions options;
};

void run_evaluate(const EvaluateArgs& args) {
    uqt::ReportOptions options = args.options;
    if (!args.metric_names.empty()) {
        options.metrics.clear();
        for (const auto& name : args.metric_names) {
            const uqt::MetricKind kind = uqt::metric_from_string(name);
            if (kind == uqt::MetricKind::BaselineSoftmax) continue;  // always included
            options.metrics.push_back(kind);
        }
    }
    const uqt::Dataset data = uqt::read_prediction_file(args.in_path);
    const nlohmann::json report = uqt::build_report(data, options);
    const std::string text = report.dump(2) + "\n";
    if (args.out_path.empty()) {
        std::cout << text;
    } else {
        write_text(args.out_path, text);
    }
}

struct CurvesArgs {
    std::string in_path;
    std::string out_path;
    std::string kind;
    std::string combine_metric;  // empty = plain scores only
    double exponent_y = 10.0;
    double percentile = 99.0;
    std::size_t grid = 1001;
};

std::string curve_to_csv(const uqt::EvalCurve& curve, const std::string& tag, bool with_tag) {
    std::string out;
    for (const auto& p : curve.points) {
        if (with_tag) {
            out += tag;
            out += ',';
        }
        out += uqt::detail::format_double(p.threshold);
        out += ',';
        out += uqt::detail::format_double(p.x);
        out += ',';
        out += uqt::detail::format_double(p.y);
        out += '\n';
    }
    return out;
}

void run_curves(const CurvesArgs& args) {
    const uqt::Dataset data = uqt::read_prediction_file(args.in_path);
    const uqt::ScoreVector single = uqt::positive_scores(data.samples, 0);

    std::optional<uqt::UncertaintyVector> u;
    uqt::DecisionConfig config;
    config.exponent = args.exponent_y;
    config.percentile = args.percentile;
    if (!args.combine_metric.empty()) {
        const uqt::MetricKind kind = uqt::metric_from_string(args.combine_metric);
        u = kind == uqt::MetricKind::BaselineSoftmax
                ? uqt::baseline_uncertainty(single)
                : uqt::compute_metric(kind, data.samples);
        config.normalizer = uqt::normalizer_from_data(*u, args.percentile);
    }

    std::string csv;
    if (args.kind == "roc" || args.kind == "pr") {
        std::vector<double> values = single.scores;
        if (u) {
            for (std::size_t i = 0; i < values.size(); ++i) {
                values[i] = uqt::combined_score(u->values[i], single.scores[i], config);
            }
        }
        const uqt::EvalCurve curve = args.kind == "roc" ? uqt::roc_curve(values, data.labels)
                                                        : uqt::pr_curve(values, data.labels);
        csv = "threshold,x,y\n" + curve_to_csv(curve, "", false);
    } else {  // accuracy
        csv = "curve,threshold,x,y\n";
        const auto plain_sweep =
            uqt::threshold_sweep(single, std::nullopt, uqt::DecisionConfig{}, args.grid);
        csv += curve_to_csv(uqt::accuracy_curve(plain_sweep, data.labels), "plain", true);
        if (u) {
            const auto combined_sweep = uqt::threshold_sweep(single, u, config, args.grid);
            csv += curve_to_csv(uqt::accuracy_curve(combined_sweep, data.labels), "combined", true);
        }
    }
    if (args.out_path.empty()) {
        std::cout << csv;
    } else {
        write_text(args.out_path, csv);
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Uncertainty toolkit for repeated softmax predictions"};
    app.require_subcommand(1);
    app.set_version_flag("--version", uqt::kToolVersion);

    // simulate
    SimulateArgs sim_args;
    auto* simulate = app.add_subcommand("simulate", "Generate a synthetic prediction file");
    simulate->add_option("--preset", sim_args.preset_name,
                         "Preset name: in-domain, center-shift, subtype-shift");
    simulate->add_option("--seed", sim_args.config.seed, "RNG seed")
        ->default_val(uqt::kReleaseSeed);
    simulate->add_option("--n", sim_args.config.n_inputs, "Number of inputs")->default_val(8000);
    simulate->add_option("--t", sim_args.config.t_samples, "Samples per input");
    simulate->add_option("--pi", sim_args.config.class_balance, "Positive-class balance");
    simulate->add_option("--mu-pos", sim_args.config.mu_pos, "Positive-class logit mean");
    simulate->add_option("--mu-neg", sim_args.config.mu_neg, "Negative-class logit mean");
    simulate->add_option("--sigma", sim_args.config.sigma_pop, "Population logit spread");
    simulate->add_option("--tau", sim_args.config.tau, "Per-sample logit spread");
    simulate->add_option("--shift", sim_args.config.shift, "Domain-shift strength");
    std::string profile_name = "ensemble-like";
    simulate->add_option("--profile", profile_name,
                         "Method profile: ensemble-like, dropout-like, tta-like");
    simulate->add_option("-o,--out", sim_args.out_path, "Output CSV path")->required();

    // metrics
    std::string metrics_in, metrics_metric = "sample_mean", metrics_out;
    auto* metrics = app.add_subcommand("metrics", "Compute one uncertainty metric per input");
    metrics->add_option("-i,--input", metrics_in, "Prediction CSV")->required();
    metrics->add_option("--metric", metrics_metric, "Metric name");
    metrics->add_option("-o,--out", metrics_out, "Output CSV path")->required();

    // evaluate
    EvaluateArgs eval_args;
    auto* evaluate = app.add_subcommand("evaluate", "Full evaluation report (JSON)");
    evaluate->add_option("-i,--input", eval_args.in_path, "Prediction CSV")->required();
    evaluate->add_option("--metric", eval_args.metric_names,
                         "Metrics to include (repeatable; baseline always included)");
    evaluate->add_option("--exponent-y", eval_args.options.exponent_y, "Boundary exponent y")
        ->default_val(10.0);
    evaluate->add_option("--percentile", eval_args.options.percentile, "Normalizer percentile")
        ->default_val(99.0);
    evaluate->add_option("--grid", eval_args.options.grid, "Threshold grid size")
        ->default_val(1001);
    evaluate->add_option("--thresholds", eval_args.options.mispred_thresholds,
                         "Misprediction-detection thresholds");
    double fixed_normalizer = 0.0;
    auto* norm_opt = evaluate->add_option("--normalizer", fixed_normalizer,
                                          "Fixed P_u instead of the data percentile");
    evaluate->add_option("-o,--out", eval_args.out_path, "Report path (default stdout)");

    // curves
    CurvesArgs curves_args;
    auto* curves = app.add_subcommand("curves", "Emit curve points as CSV");
    curves->add_option("-i,--input", curves_args.in_path, "Prediction CSV")->required();
    curves->add_option("--kind", curves_args.kind, "roc, pr, or accuracy")
        ->required()
        ->check(CLI::IsMember({"roc", "pr", "accuracy"}));
    curves->add_option("--combine", curves_args.combine_metric,
                       "Combine scores with this uncertainty metric");
    curves->add_option("--exponent-y", curves_args.exponent_y, "Boundary exponent y")
        ->default_val(10.0);
    curves->add_option("--percentile", curves_args.percentile, "Normalizer percentile")
        ->default_val(99.0);
    curves->add_option("--grid", curves_args.grid, "Threshold grid size")->default_val(1001);
    curves->add_option("-o,--out", curves_args.out_path, "Output CSV path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (simulate->parsed()) {
            sim_args.config.profile = uqt::profile_from_string(profile_name);
            if (simulate->count("--t") == 0) {
                sim_args.config.t_samples = uqt::default_samples(sim_args.config.profile);
            }
            run_simulate(sim_args);
        } else if (metrics->parsed()) {
            run_metrics(metrics_in, metrics_metric, metrics_out);
        } else if (evaluate->parsed()) {
            if (norm_opt->count() > 0) eval_args.options.fixed_normalizer = fixed_normalizer;
            run_evaluate(eval_args);
        } else if (curves->parsed()) {
            run_curves(curves_args);
        }
    } catch (const uqt::ParseError& e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    } catch (const uqt::ValidationError& e) {
        std::cerr << e.what() << "\n";
        return kExitValidation;
    } catch (const uqt::EvalError& e) {
        std::cerr << e.what() << "\n";
        return kExitEval;
    } catch (const uqt::ConfigError& e) {
        std::cerr << e.what() << "\n";
        return kExitConfig;
    } catch (const uqt::IoError& e) {
        std::cerr << e.what() << "\n";
        return kExitIo;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
