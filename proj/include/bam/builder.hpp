#ifndef BAM_BUILDER_HPP
#define BAM_BUILDER_HPP

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bam/clustering.hpp"
#include "bam/features.hpp"
#include "bam/monitor.hpp"

namespace bam {

struct BuildConfig {
    ClusterConfig cluster;
    double target_tpr = 0.95;
    /// Records scoring below this are left out of construction.
    double score_threshold = 0.0;

    void validate() const;
};

/// Provenance stamped into every registry.
struct BuildMeta {
    double density = 100.0;
    std::size_t cap = 10000;
    double target_tpr = 0.95;
    std::uint64_t seed = 0;
    double score_threshold = 0.0;
    int max_iterations = 100;
    double shift_tolerance = 1e-6;
    std::string feature_space = "raw";
    std::string source_digest;

    friend bool operator==(const BuildMeta&, const BuildMeta&) = default;
};

/// Per-class monitors for one layer. Immutable after construction.
class MonitorRegistry {
public:
    MonitorRegistry(std::string layer_tag, Eigen::Index dimension, BuildMeta meta,
                    std::vector<ClassMonitor> monitors);

    const std::string& layer_tag() const { return m_layer_tag; }
    Eigen::Index dimension() const { return m_dimension; }
    const BuildMeta& meta() const { return m_meta; }
    const std::map<std::string, ClassMonitor, std::less<>>& monitors() const { return m_monitors; }
    const ClassMonitor* find(std::string_view class_key) const;

    friend bool operator==(const MonitorRegistry&, const MonitorRegistry&) = default;

private:
    std::string m_layer_tag;
    Eigen::Index m_dimension;
    BuildMeta m_meta;
    std::map<std::string, ClassMonitor, std::less<>> m_monitors;
};

enum class Decision { Accept, Reject, UnknownClass };

std::string_view to_string(Decision decision);

struct Verdict {
    Decision decision = Decision::UnknownClass;
    /// Monitor distance used as the OoD score; infinite for unknown classes.
    double distance = 0.0;
    std::optional<std::size_t> nearest_box;
};

struct ClassBuildStats {
    std::string class_key;
    std::size_t records = 0;
    std::size_t boxes = 0;
    std::size_t inside_before_enlargement = 0;
    std::size_t inside_after_enlargement = 0;

    double training_tpr() const {
        return records == 0 ? 0.0
                            : static_cast<double>(inside_after_enlargement) /
                                  static_cast<double>(records);
    }
};

/// Cluster, abstract each cluster by its tight box, then enlarge to the
/// target rate. `features` holds one class's vectors as columns.
ClassMonitor build_class_monitor(std::string class_key,
                                 const Eigen::Ref<const Eigen::MatrixXd>& features,
                                 const BuildConfig& config, ClassBuildStats* stats = nullptr);

/// Builds one monitor per class from the records that are not labeled OoD and
/// score at least the configured threshold.
MonitorRegistry build_registry(const FeatureSet& features, const BuildConfig& config,
                               std::vector<ClassBuildStats>* stats = nullptr);

Verdict verdict(const Eigen::Ref<const Eigen::VectorXd>& z, std::string_view class_key,
                const MonitorRegistry& registry);

} // namespace bam

#endif // BAM_BUILDER_HPP
