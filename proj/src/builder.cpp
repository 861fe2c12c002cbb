#include "bam/builder.hpp"

#include <cmath>
#include <limits>

#include "bam/feature_io.hpp"

namespace bam {

void BuildConfig::validate() const {
    cluster.validate();
    if (!(target_tpr > 0.0 && target_tpr <= 1.0)) {
        throw InvalidArgument("target_tpr must lie in (0, 1]");
    }
    if (!std::isfinite(score_threshold)) {
        throw InvalidArgument("score threshold must be finite");
    }
}

MonitorRegistry::MonitorRegistry(std::string layer_tag, Eigen::Index dimension, BuildMeta meta,
                                 std::vector<ClassMonitor> monitors)
    : m_layer_tag(std::move(layer_tag)), m_dimension(dimension), m_meta(std::move(meta)) {
    if (m_layer_tag.empty()) throw InvariantViolation("registry layer tag must be non-empty");
    if (m_dimension < 1) throw InvariantViolation("registry dimension must be positive");
    for (auto& monitor : monitors) {
        if (monitor.dimension() != m_dimension) {
            throw InvariantViolation("monitor '" + monitor.class_key() +
                                     "' does not match the registry dimension");
        }
        std::string key = monitor.class_key();
        if (!m_monitors.emplace(key, std::move(monitor)).second) {
            throw InvariantViolation("duplicate class key '" + key + "'");
        }
    }
}

const ClassMonitor* MonitorRegistry::find(std::string_view class_key) const {
    const auto it = m_monitors.find(class_key);
    return it == m_monitors.end() ? nullptr : &it->second;
}

std::string_view to_string(Decision decision) {
    switch (decision) {
    case Decision::Accept: return "ACCEPT";
    case Decision::Reject: return "REJECT";
    case Decision::UnknownClass: return "UNKNOWN_CLASS";
    }
    return "UNKNOWN_CLASS";
}

ClassMonitor build_class_monitor(std::string class_key,
                                 const Eigen::Ref<const Eigen::MatrixXd>& features,
                                 const BuildConfig& config, ClassBuildStats* stats) {
    config.validate();
    if (features.cols() == 0) {
        throw EmptyInput("class '" + class_key + "' has no feature vectors");
    }
    const auto subsets = partition_features(features, config.cluster);

    std::vector<Box> boxes;
    boxes.reserve(subsets.size());
    for (const auto& subset : subsets) {
        Eigen::MatrixXd members(features.rows(), static_cast<Eigen::Index>(subset.size()));
        for (std::size_t j = 0; j < subset.size(); ++j) {
            members.col(static_cast<Eigen::Index>(j)) =
                features.col(static_cast<Eigen::Index>(subset[j]));
        }
        boxes.push_back(tba(members));
    }

    auto count_inside = [&](const ClassMonitor& monitor) {
        std::size_t inside = 0;
        for (Eigen::Index i = 0; i < features.cols(); ++i) {
            if (monitor_distance(features.col(i), monitor).distance == 0.0) ++inside;
        }
        return inside;
    };

    std::vector<Box> enlarged = enlarge_to_tpr(boxes, features, config.target_tpr);
    ClassMonitor monitor(std::move(class_key), enlarged);
    if (stats != nullptr) {
        stats->class_key = monitor.class_key();
        stats->records = static_cast<std::size_t>(features.cols());
        stats->boxes = monitor.box_count();
        stats->inside_before_enlargement = count_inside(ClassMonitor("", boxes));
        stats->inside_after_enlargement = count_inside(monitor);
    }
    return monitor;
}

MonitorRegistry build_registry(const FeatureSet& features, const BuildConfig& config,
                               std::vector<ClassBuildStats>* stats) {
    config.validate();
    if (features.empty()) throw EmptyInput("feature set is empty");

    std::map<std::string, std::vector<std::size_t>> eligible;
    std::size_t kept = 0;
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto& record = features.records()[i];
        if (record.label == Label::Ood) continue;
        auto& bucket = eligible[record.class_key];
        if (record.score >= config.score_threshold) {
            bucket.push_back(i);
            ++kept;
        }
    }
    if (kept == 0) {
        throw EmptyInput("no in-distribution records at or above score threshold " +
                         std::to_string(config.score_threshold));
    }
    for (const auto& [key, indices] : eligible) {
        if (indices.empty()) {
            throw EmptyInput("class '" + key + "' has no records at or above score threshold " +
                             std::to_string(config.score_threshold));
        }
    }

    std::vector<ClassMonitor> monitors;
    if (stats != nullptr) stats->clear();
    for (const auto& [key, indices] : eligible) {
        ClassBuildStats class_stats;
        monitors.push_back(build_class_monitor(key, features.matrix(indices), config,
                                               stats != nullptr ? &class_stats : nullptr));
        if (stats != nullptr) stats->push_back(class_stats);
    }

    BuildMeta meta;
    meta.density = config.cluster.density;
    meta.cap = config.cluster.cap;
    meta.target_tpr = config.target_tpr;
    meta.seed = config.cluster.seed;
    meta.score_threshold = config.score_threshold;
    meta.max_iterations = config.cluster.max_iterations;
    meta.shift_tolerance = config.cluster.shift_tolerance;
    meta.source_digest = feature_digest(features);
    return {features.layer_tag(), features.dimension(), std::move(meta), std::move(monitors)};
}

Verdict verdict(const Eigen::Ref<const Eigen::VectorXd>& z, std::string_view class_key,
                const MonitorRegistry& registry) {
    detail::check_dimension("verdict", registry.dimension(), z.size());
    const ClassMonitor* monitor = registry.find(class_key);
    if (monitor == nullptr) {
        return {Decision::UnknownClass, std::numeric_limits<double>::infinity(), std::nullopt};
    }
    const MonitorDistance d = monitor_distance(z, *monitor);
    return {d.distance == 0.0 ? Decision::Accept : Decision::Reject, d.distance, d.nearest_box};
}

} // namespace bam
