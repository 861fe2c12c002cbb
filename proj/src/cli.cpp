#include "bam/cli.hpp"

#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "bam/bench.hpp"
#include "bam/builder.hpp"
#include "bam/errors.hpp"
#include "bam/evaluation.hpp"
#include "bam/feature_io.hpp"
#include "bam/gaussian.hpp"
#include "bam/registry_io.hpp"
#include "bam/synth.hpp"

namespace bam::cli {

namespace {

using json = nlohmann::ordered_json;

struct BuildOptions {
    std::string features;
    std::string out;
    double density = 100.0;
    std::size_t cap = 10000;
    double target_tpr = 0.95;
    std::uint64_t seed = 0;
    double score_threshold = 0.0;
    bool auto_threshold = false;
    std::optional<std::size_t> ground_truth;
    int max_iterations = 100;
    double shift_tolerance = 1e-6;
};

struct EvalOptions {
    std::string monitor;
    std::string id;
    std::string ood;
    std::string report;
    double target_tpr = 0.95;
    std::string baseline;
    std::string train_features;
    double lambda = 1e-6;
};

struct SynthOptions {
    std::string preset = "gauss-mix";
    SynthParams params;
    std::string out;
    std::string csv;
};

struct BenchOptions {
    BenchParams params;
    std::string report;
};

void print_rate_row(std::ostream& out, const std::string& name, const RateAtThreshold& rate) {
    out << std::left << std::setw(20) << name << std::right << std::fixed << std::setprecision(4)
        << std::setw(10) << rate.fpr << std::setw(14) << rate.distance_threshold << std::setw(10)
        << rate.achieved_tpr << std::setw(8) << rate.id_count << std::setw(8) << rate.ood_count
        << '\n';
}

int cmd_build(const BuildOptions& o, std::ostream& out) {
    const FeatureSet features = load_features(o.features);

    BuildConfig config;
    config.cluster.density = o.density;
    config.cluster.cap = o.cap;
    config.cluster.seed = o.seed;
    config.cluster.max_iterations = o.max_iterations;
    config.cluster.shift_tolerance = o.shift_tolerance;
    config.target_tpr = o.target_tpr;
    config.score_threshold = o.score_threshold;

    if (o.auto_threshold) {
        std::vector<ScoredDetection> scored;
        std::size_t matched = 0;
        for (const auto& r : features.records()) {
            scored.push_back({r.score, r.label == Label::Id});
            if (r.label == Label::Id) ++matched;
        }
        const F1Threshold chosen = micro_f1_threshold(scored, o.ground_truth.value_or(matched));
        config.score_threshold = chosen.threshold;
        out << "score threshold " << chosen.threshold << " (micro F1 " << chosen.f1 << ")";
        if (chosen.degenerate) out << " [degenerate: no true positives]";
        out << '\n';
    }

    std::vector<ClassBuildStats> stats;
    const MonitorRegistry registry = build_registry(features, config, &stats);
    save_registry(registry, o.out);

    out << std::left << std::setw(20) << "class" << std::right << std::setw(10) << "records"
        << std::setw(8) << "k" << std::setw(14) << "inside(tba)" << std::setw(14)
        << "training_tpr" << '\n';
    for (const auto& s : stats) {
        out << std::left << std::setw(20) << s.class_key << std::right << std::setw(10)
            << s.records << std::setw(8) << s.boxes << std::setw(14)
            << s.inside_before_enlargement << std::setw(14) << std::fixed << std::setprecision(4)
            << s.training_tpr() << '\n';
    }
    out << "wrote " << o.out << '\n';
    return kSuccess;
}

int cmd_eval(const EvalOptions& o, std::ostream& out) {
    const MonitorRegistry registry = load_registry(o.monitor);
    const FeatureSet id_set = load_features(o.id);
    const FeatureSet ood_set = load_features(o.ood);
    detail::check_dimension("ID features vs monitor", registry.dimension(), id_set.dimension());
    detail::check_dimension("OoD features vs monitor", registry.dimension(), ood_set.dimension());

    const Scorer bam_scorer = [&](const Eigen::Ref<const Eigen::VectorXd>& z, std::string_view key) {
        return verdict(z, key, registry).distance;
    };
    const EvalReport report = evaluate(bam_scorer, id_set, ood_set, o.target_tpr);

    std::optional<EvalReport> baseline;
    if (o.baseline == "gaussian") {
        if (o.train_features.empty()) {
            throw InvalidArgument("--baseline gaussian needs --features (the training dump)");
        }
        const FeatureSet train = load_features(o.train_features);
        detail::check_dimension("training features vs monitor", registry.dimension(),
                                train.dimension());
        const GaussianMonitor gm = gaussian_fit(train, o.lambda, registry.meta().score_threshold);
        const Scorer g_scorer = [&](const Eigen::Ref<const Eigen::VectorXd>& z,
                                    std::string_view key) { return gm.score(z, key); };
        baseline = evaluate(g_scorer, id_set, ood_set, o.target_tpr);
    }

    out << "FPR at TPR " << o.target_tpr << '\n';
    out << std::left << std::setw(20) << "monitor" << std::right << std::setw(10) << "fpr"
        << std::setw(14) << "threshold" << std::setw(10) << "tpr" << std::setw(8) << "id"
        << std::setw(8) << "ood" << '\n';
    print_rate_row(out, "bam", report.overall);
    if (baseline) print_rate_row(out, "gaussian", baseline->overall);
    for (const auto& [key, rate] : report.per_class) print_rate_row(out, "bam/" + key, rate);
    if (baseline) {
        for (const auto& [key, rate] : baseline->per_class) {
            print_rate_row(out, "gaussian/" + key, rate);
        }
    }
    out << "verdict-level: tpr " << report.verdict_tpr << ", fpr " << report.verdict_fpr << '\n';

    if (!o.report.empty()) {
        json doc{{"format", "bam-eval-report"}, {"schema_version", 1}};
        doc["monitor"] = json::parse(to_json(report));
        if (baseline) doc["baseline_gaussian"] = json::parse(to_json(*baseline));
        std::ofstream file(o.report, std::ios::trunc);
        if (!file) throw FormatError("cannot open '" + o.report + "' for writing");
        file << doc.dump(2) << '\n';
    }
    return kSuccess;
}

int cmd_check(const std::string& monitor_path, std::istream& in, std::ostream& out) {
    const MonitorRegistry registry = load_registry(monitor_path);
    bool any_failed = false;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        json result;
        try {
            const json record = json::parse(line);
            const auto key = record.at("class_key").get<std::string>();
            const auto values = record.at("values").get<std::vector<double>>();
            const Eigen::Map<const Eigen::VectorXd> z(values.data(),
                                                      static_cast<Eigen::Index>(values.size()));
            const Verdict v = verdict(z, key, registry);
            result["decision"] = std::string(to_string(v.decision));
            result["distance"] = std::isfinite(v.distance) ? json(v.distance) : json(nullptr);
            result["nearest_box_index"] = v.nearest_box ? json(*v.nearest_box) : json(nullptr);
        } catch (const std::exception& e) {
            any_failed = true;
            result = json{{"error", e.what()}, {"line", line_no}};
        }
        out << result.dump() << '\n' << std::flush;
    }
    return any_failed ? kDataError : kSuccess;
}

int cmd_synth(const SynthOptions& o, std::ostream& out) {
    if (o.out.empty() && o.csv.empty()) {
        throw InvalidArgument("synth: give --out and/or --csv");
    }
    const FeatureSet features = synth_generate(parse_preset(o.preset), o.params);
    if (!o.out.empty()) save_features(features, o.out);
    if (!o.csv.empty()) {
        std::ofstream file(o.csv, std::ios::trunc);
        if (!file) throw FormatError("cannot open '" + o.csv + "' for writing");
        write_csv(features, file);
    }
    out << "generated " << features.size() << " records (" << o.preset << ", dim "
        << features.dimension() << ", seed " << o.params.seed << ")\n";
    return kSuccess;
}

int cmd_bench(const BenchOptions& o, std::ostream& out) {
    const BenchReport report = bench_throughput(o.params);
    out << "boxes " << o.params.boxes << ", dim " << o.params.dimension << ", queries "
        << o.params.queries << ", inside fraction " << o.params.inside_fraction << ", threads "
        << o.params.threads << '\n';
    out << std::left << std::setw(12) << "scope" << std::right << std::setw(12) << "mean_ms"
        << std::setw(12) << "median_ms" << std::setw(12) << "p99_ms" << std::setw(12)
        << "total_ms" << '\n';
    auto row = [&](const std::string& name, const LatencyStats& s) {
        out << std::left << std::setw(12) << name << std::right << std::fixed
            << std::setprecision(4) << std::setw(12) << s.mean_ms << std::setw(12) << s.median_ms
            << std::setw(12) << s.p99_ms << std::setw(12) << s.total_ms << '\n';
    };
    row("all", report.aggregate);
    if (report.per_thread.size() > 1) {
        for (std::size_t t = 0; t < report.per_thread.size(); ++t) {
            row("thread " + std::to_string(t), report.per_thread[t]);
        }
    }
    out << "wall " << report.wall_ms << " ms, accepted " << report.accepted << '\n';
    if (!o.report.empty()) {
        std::ofstream file(o.report, std::ios::trunc);
        if (!file) throw FormatError("cannot open '" + o.report + "' for writing");
        file << to_json(report) << '\n';
    }
    return kSuccess;
}

int cmd_validate(const std::string& path, std::ostream& out) {
    const FeatureSet features = load_features(path);
    out << "layer_tag " << features.layer_tag() << ", dimension " << features.dimension()
        << ", records " << features.size() << '\n';
    for (const auto& [key, indices] : features.indices_by_class()) {
        out << "  " << key << ": " << indices.size() << '\n';
    }
    return kSuccess;
}

template <typename Fn>
int guarded(Fn&& fn, std::ostream& err) {
    try {
        return fn();
    } catch (const DimensionMismatch& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const EmptyInput& e) {
        err << "error: empty input: " << e.what() << '\n';
        return kDataError;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << '\n';
        return kUsage;
    } catch (const FormatError& e) {
        err << "error: " << e.what() << '\n';
        return kDataError;
    } catch (const InvariantViolation& e) {
        err << "error: invariant violation: " << e.what() << '\n';
        return kInvariantViolation;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << '\n';
        return kInvariantViolation;
    }
}

} // namespace

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
        std::ostream& err) {
    CLI::App app{"Box-abstraction runtime monitors for object-detector features"};
    app.name("bam");
    app.require_subcommand(1);
    const char* env_config = std::getenv(kConfigEnvVar);
    app.set_config("--config", env_config != nullptr ? env_config : "",
                   "Config file (TOML/INI, keys mirror the long flags)");

    BuildOptions build_opts;
    auto* build = app.add_subcommand("build", "Build per-class monitors from a feature dump");
    build->add_option("--features", build_opts.features, "Feature dump (BAMF or CSV)")->required();
    build->add_option("--out", build_opts.out, "Monitor file to write")->required();
    build->add_option("--density", build_opts.density, "Targeted points per cluster")
        ->check(CLI::PositiveNumber)->capture_default_str();
    build->add_option("--cap", build_opts.cap, "Maximum boxes per class")
        ->check(CLI::Range(std::size_t{1}, std::numeric_limits<std::size_t>::max()))
        ->capture_default_str();
    build->add_option("--target-tpr", build_opts.target_tpr, "Training TPR each monitor must reach")
        ->check(CLI::Range(0.0, 1.0))->capture_default_str();
    build->add_option("--seed", build_opts.seed, "k-means seed")->capture_default_str();
    auto* threshold = build->add_option("--score-threshold", build_opts.score_threshold,
                                        "Minimum detection score for construction")
                          ->capture_default_str();
    auto* auto_threshold = build->add_flag("--auto-threshold", build_opts.auto_threshold,
                                           "Pick the score threshold maximizing micro F1");
    threshold->excludes(auto_threshold);
    build->add_option("--ground-truth", build_opts.ground_truth,
                      "Ground-truth object count for --auto-threshold (default: ID records)");
    build->add_option("--max-iterations", build_opts.max_iterations)
        ->check(CLI::PositiveNumber)->capture_default_str();
    build->add_option("--shift-tolerance", build_opts.shift_tolerance)
        ->check(CLI::NonNegativeNumber)->capture_default_str();

    EvalOptions eval_opts;
    auto* eval = app.add_subcommand("eval", "FPR at a target TPR for a monitor");
    eval->add_option("--monitor", eval_opts.monitor, "Monitor file")->required();
    eval->add_option("--id", eval_opts.id, "In-distribution feature dump")->required();
    eval->add_option("--ood", eval_opts.ood, "Out-of-distribution feature dump")->required();
    eval->add_option("--target-tpr", eval_opts.target_tpr)
        ->check(CLI::Range(0.0, 1.0))->capture_default_str();
    eval->add_option("--report", eval_opts.report, "JSON report to write");
    auto* baseline = eval->add_option("--baseline", eval_opts.baseline, "Add a baseline row")
                         ->check(CLI::IsMember({"gaussian"}));
    eval->add_option("--features", eval_opts.train_features,
                     "Training dump the baseline is fitted on")->needs(baseline);
    eval->add_option("--lambda", eval_opts.lambda, "Baseline covariance regularization")
        ->check(CLI::NonNegativeNumber)->capture_default_str();

    std::string check_monitor;
    auto* check = app.add_subcommand("check", "Stream verdicts for JSON lines on stdin");
    check->add_option("--monitor", check_monitor, "Monitor file")->required();

    SynthOptions synth_opts;
    auto* synth = app.add_subcommand("synth", "Generate a synthetic feature set");
    synth->add_option("--preset", synth_opts.preset)
        ->check(CLI::IsMember({"gauss-mix", "moons", "ring-ood", "uniform-ood"}))
        ->capture_default_str();
    synth->add_option("--n", synth_opts.params.n_points)->capture_default_str();
    synth->add_option("--dim", synth_opts.params.dimension)->capture_default_str();
    synth->add_option("--components", synth_opts.params.components)->capture_default_str();
    synth->add_option("--groups", synth_opts.params.groups,
                      "Class groups (0: one class per component)")->capture_default_str();
    synth->add_option("--separation", synth_opts.params.separation)->capture_default_str();
    synth->add_option("--spread", synth_opts.params.spread)->capture_default_str();
    synth->add_option("--exclusion", synth_opts.params.exclusion)->capture_default_str();
    synth->add_option("--ring-width", synth_opts.params.ring_width)->capture_default_str();
    synth->add_option("--margin", synth_opts.params.margin)->capture_default_str();
    synth->add_option("--seed", synth_opts.params.seed)->capture_default_str();
    synth->add_option("--layer-tag", synth_opts.params.layer_tag)->capture_default_str();
    synth->add_option("--out", synth_opts.out, "Output file (CSV for a .csv extension, else BAMF)");
    synth->add_option("--csv", synth_opts.csv, "CSV file to write");

    BenchOptions bench_opts;
    auto* bench = app.add_subcommand("bench", "Time monitor queries against a random monitor");
    bench->add_option("--boxes", bench_opts.params.boxes)->capture_default_str();
    bench->add_option("--dim", bench_opts.params.dimension)->capture_default_str();
    bench->add_option("--queries", bench_opts.params.queries)->capture_default_str();
    bench->add_option("--inside-fraction", bench_opts.params.inside_fraction)
        ->check(CLI::Range(0.0, 1.0))->capture_default_str();
    bench->add_option("--seed", bench_opts.params.seed)->capture_default_str();
    bench->add_option("--threads", bench_opts.params.threads)->capture_default_str();
    bench->add_option("--report", bench_opts.report, "JSON report to write");

    std::string validate_path;
    auto* validate = app.add_subcommand("validate", "Check that a feature dump parses");
    validate->add_option("--features", validate_path)->required();

    std::vector<const char*> argv{"bam"};
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        return app.exit(e, out, err) == 0 ? kSuccess : kUsage;
    }

    if (build->parsed()) return guarded([&] { return cmd_build(build_opts, out); }, err);
    if (eval->parsed()) return guarded([&] { return cmd_eval(eval_opts, out); }, err);
    if (check->parsed()) return guarded([&] { return cmd_check(check_monitor, in, out); }, err);
    if (synth->parsed()) return guarded([&] { return cmd_synth(synth_opts, out); }, err);
    if (bench->parsed()) return guarded([&] { return cmd_bench(bench_opts, out); }, err);
    if (validate->parsed()) return guarded([&] { return cmd_validate(validate_path, out); }, err);
    return kUsage;
}

} // namespace bam::cli
