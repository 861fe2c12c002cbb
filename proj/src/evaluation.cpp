#include "bam/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <json.hpp>

#include "bam/errors.hpp"
#include "bam/monitor.hpp"

namespace bam {

using json = nlohmann::ordered_json;

RateAtThreshold fpr_at_tpr(std::span<const double> id_distances,
                           std::span<const double> ood_distances, double target_tpr) {
    if (id_distances.empty()) throw EmptyInput("fpr_at_tpr: ID distance list is empty");
    if (ood_distances.empty()) throw EmptyInput("fpr_at_tpr: OoD distance list is empty");
    if (!(target_tpr > 0.0 && target_tpr <= 1.0)) {
        throw InvalidArgument("fpr_at_tpr: target_tpr must lie in (0, 1]");
    }
    std::vector<double> sorted(id_distances.begin(), id_distances.end());
    std::sort(sorted.begin(), sorted.end());
    const std::size_t need = required_count(sorted.size(), target_tpr);

    RateAtThreshold rate;
    rate.target_tpr = target_tpr;
    rate.id_count = id_distances.size();
    rate.ood_count = ood_distances.size();
    rate.distance_threshold = sorted[need - 1];

    const double tau = rate.distance_threshold;
    const auto accepted_id = static_cast<std::size_t>(
        std::upper_bound(sorted.begin(), sorted.end(), tau) - sorted.begin());
    const auto accepted_ood = static_cast<std::size_t>(
        std::count_if(ood_distances.begin(), ood_distances.end(),
                      [tau](double d) { return d <= tau; }));
    rate.achieved_tpr = static_cast<double>(accepted_id) / static_cast<double>(rate.id_count);
    rate.fpr = static_cast<double>(accepted_ood) / static_cast<double>(rate.ood_count);
    return rate;
}

EvalReport evaluate(const Scorer& scorer, const FeatureSet& id_set, const FeatureSet& ood_set,
                    double target_tpr) {
    std::vector<double> id_all;
    std::vector<double> ood_all;
    std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_class;
    EvalReport report;

    for (const auto& record : id_set.records()) {
        if (record.label == Label::Ood) continue;
        const double d = scorer(record.values, record.class_key);
        if (std::isinf(d)) ++report.id_unknown_class;
        id_all.push_back(d);
        by_class[record.class_key].first.push_back(d);
    }
    for (const auto& record : ood_set.records()) {
        const double d = scorer(record.values, record.class_key);
        if (std::isinf(d)) ++report.ood_unknown_class;
        ood_all.push_back(d);
        by_class[record.class_key].second.push_back(d);
    }

    report.overall = fpr_at_tpr(id_all, ood_all, target_tpr);
    auto zero_fraction = [](const std::vector<double>& v) {
        const auto zeros = std::count(v.begin(), v.end(), 0.0);
        return static_cast<double>(zeros) / static_cast<double>(v.size());
    };
    report.verdict_tpr = zero_fraction(id_all);
    report.verdict_fpr = zero_fraction(ood_all);
    for (const auto& [key, lists] : by_class) {
        if (lists.first.empty() || lists.second.empty()) continue;
        report.per_class.emplace(key, fpr_at_tpr(lists.first, lists.second, target_tpr));
    }
    return report;
}

namespace {

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

json rate_json(const RateAtThreshold& rate) {
    return json{{"target_tpr", rate.target_tpr},
                {"distance_threshold", number_or_null(rate.distance_threshold)},
                {"achieved_tpr", rate.achieved_tpr},
                {"fpr", rate.fpr},
                {"id_count", rate.id_count},
                {"ood_count", rate.ood_count}};
}

} // namespace

std::string to_json(const RateAtThreshold& rate) { return rate_json(rate).dump(2); }

std::string to_json(const EvalReport& report) {
    json j = rate_json(report.overall);
    j["verdict_tpr"] = report.verdict_tpr;
    j["verdict_fpr"] = report.verdict_fpr;
    j["id_unknown_class"] = report.id_unknown_class;
    j["ood_unknown_class"] = report.ood_unknown_class;
    json per_class = json::object();
    for (const auto& [key, rate] : report.per_class) per_class[key] = rate_json(rate);
    j["per_class"] = std::move(per_class);
    return j.dump(2);
}

F1Threshold micro_f1_threshold(std::span<const ScoredDetection> scored,
                               std::size_t total_ground_truth, double epsilon) {
    if (scored.empty()) throw EmptyInput("micro_f1_threshold: no scored detections");
    const auto positives = static_cast<std::size_t>(std::count_if(
        scored.begin(), scored.end(), [](const ScoredDetection& s) { return s.true_positive; }));
    if (total_ground_truth < positives) {
        throw InvalidArgument("micro_f1_threshold: more true positives than ground-truth objects");
    }

    std::vector<ScoredDetection> sorted(scored.begin(), scored.end());
    std::sort(sorted.begin(), sorted.end(),
              [](const ScoredDetection& a, const ScoredDetection& b) { return a.score > b.score; });

    // Walk thresholds from the highest score down; every detection with
    // score >= tau is predicted positive.
    F1Threshold best{0.0, -1.0, false};
    std::size_t tp = 0;
    std::size_t fp = 0;
    for (std::size_t i = 0; i < sorted.size();) {
        const double tau = sorted[i].score;
        for (; i < sorted.size() && sorted[i].score == tau; ++i) {
            (sorted[i].true_positive ? tp : fp) += 1;
        }
        const std::size_t fn = total_ground_truth - tp;
        const double f1 = 2.0 * static_cast<double>(tp) /
                          static_cast<double>(2 * tp + fp + fn);
        if (f1 >= best.f1) best = {tau, f1, false};
    }
    if (best.f1 <= 0.0) {
        return {sorted.front().score + epsilon, 0.0, true};
    }
    return best;
}

} // namespace bam
