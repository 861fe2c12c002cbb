#include "bam/gaussian.hpp"

#include <limits>

#include "bam/errors.hpp"

namespace bam {

double GaussianClass::score(const Eigen::Ref<const Eigen::VectorXd>& z) const {
    detail::check_dimension("gaussian_score", mean.size(), z.size());
    return mahalanobis_distance(z, mean, factor);
}

GaussianClass gaussian_fit(const Eigen::Ref<const Eigen::MatrixXd>& points, double lambda) {
    if (points.cols() < 2) {
        throw InvalidArgument("gaussian_fit needs at least two feature vectors per class");
    }
    if (!(lambda >= 0.0)) throw InvalidArgument("regularization lambda must be non-negative");

    GaussianClass g;
    g.mean = points.rowwise().mean();
    const Eigen::MatrixXd centered = points.colwise() - g.mean;
    g.covariance = centered * centered.transpose() / static_cast<double>(points.cols() - 1);
    g.covariance.diagonal().array() += lambda;
    g.factor.compute(g.covariance);
    if (g.factor.info() != Eigen::Success) {
        throw InvariantViolation("covariance is not positive definite after adding lambda = " +
                                 std::to_string(lambda) + " * I; increase lambda");
    }
    return g;
}

double GaussianMonitor::score(const Eigen::Ref<const Eigen::VectorXd>& z,
                              std::string_view class_key) const {
    const auto it = m_classes.find(class_key);
    if (it == m_classes.end()) return std::numeric_limits<double>::infinity();
    return it->second.score(z);
}

GaussianMonitor gaussian_fit(const FeatureSet& features, double lambda, double score_threshold) {
    std::map<std::string, std::vector<std::size_t>> eligible;
    for (std::size_t i = 0; i < features.size(); ++i) {
        const auto& record = features.records()[i];
        if (record.label == Label::Ood || record.score < score_threshold) continue;
        eligible[record.class_key].push_back(i);
    }
    if (eligible.empty()) throw EmptyInput("gaussian_fit: no eligible records");
    std::map<std::string, GaussianClass, std::less<>> classes;
    for (const auto& [key, indices] : eligible) {
        try {
            classes.emplace(key, gaussian_fit(features.matrix(indices), lambda));
        } catch (const InvariantViolation& e) {
            throw InvariantViolation("class '" + key + "': " + e.what());
        } catch (const InvalidArgument& e) {
            throw InvalidArgument("class '" + key + "': " + e.what());
        }
    }
    return GaussianMonitor(std::move(classes));
}

} // namespace bam
