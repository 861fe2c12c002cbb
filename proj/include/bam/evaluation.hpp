#ifndef BAM_EVALUATION_HPP
#define BAM_EVALUATION_HPP

#include <functional>
#include <map>
#include <span>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "bam/features.hpp"

namespace bam {

/// Operating point of a distance-based detector at a target ID acceptance rate.
/// Scores are distances: lower means more in-distribution, and a sample is
/// accepted when its distance is <= distance_threshold.
struct RateAtThreshold {
    double target_tpr = 0.95;
    double distance_threshold = 0.0;
    double achieved_tpr = 0.0;
    double fpr = 0.0;
    std::size_t id_count = 0;
    std::size_t ood_count = 0;
};

/// Threshold = smallest ID distance accepting at least `target_tpr` of the ID
/// set; FPR = fraction of OoD distances at or below it.
RateAtThreshold fpr_at_tpr(std::span<const double> id_distances,
                           std::span<const double> ood_distances, double target_tpr);

struct EvalReport {
    RateAtThreshold overall;
    /// Fractions of ID / OoD samples at distance exactly 0 (the binary
    /// accept verdict with the operating point baked into the boxes).
    double verdict_tpr = 0.0;
    double verdict_fpr = 0.0;
    std::size_t id_unknown_class = 0;
    std::size_t ood_unknown_class = 0;
    /// Only classes with both ID and OoD samples appear here.
    std::map<std::string, RateAtThreshold> per_class;
};

/// (feature vector, predicted class) -> OoD distance; +inf for unknown classes.
using Scorer = std::function<double(const Eigen::Ref<const Eigen::VectorXd>&, std::string_view)>;

/// Scores every ID-set record not labeled OoD and every OoD-set record.
EvalReport evaluate(const Scorer& scorer, const FeatureSet& id_set, const FeatureSet& ood_set,
                    double target_tpr);

std::string to_json(const RateAtThreshold& rate);
std::string to_json(const EvalReport& report);

struct ScoredDetection {
    double score = 0.0;
    bool true_positive = false;
};

struct F1Threshold {
    double threshold = 0.0;
    double f1 = 0.0;
    /// Set when no threshold yields a true positive; threshold is then
    /// max score + epsilon.
    bool degenerate = false;
};

/// Confidence threshold maximizing micro F1 = 2TP / (2TP + FP + FN), swept over
/// the distinct scores; the lowest threshold wins ties.
F1Threshold micro_f1_threshold(std::span<const ScoredDetection> scored,
                               std::size_t total_ground_truth, double epsilon = 1e-6);

} // namespace bam

#endif // BAM_EVALUATION_HPP
