#ifndef BAM_GAUSSIAN_HPP
#define BAM_GAUSSIAN_HPP

#include <map>
#include <string>
#include <string_view>

#include <Eigen/Dense>

#include "bam/features.hpp"

namespace bam {

/// Mahalanobis distance sqrt((z - mean)^T S^-1 (z - mean)) given the Cholesky
/// factor of S.
template <typename Derived, typename MeanDerived, typename Scalar>
Scalar mahalanobis_distance(const Eigen::MatrixBase<Derived>& z,
                            const Eigen::MatrixBase<MeanDerived>& mean,
                            const Eigen::LLT<Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>>& factor) {
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> diff = z - mean;
    return factor.matrixL().solve(diff).norm();
}

/// Class-conditional single Gaussian, the convex one-center baseline.
struct GaussianClass {
    Eigen::VectorXd mean;
    Eigen::MatrixXd covariance;  ///< sample covariance plus lambda * I
    Eigen::LLT<Eigen::MatrixXd> factor;

    double score(const Eigen::Ref<const Eigen::VectorXd>& z) const;
};

/// Fits one Gaussian to the columns of `points` (at least two).
GaussianClass gaussian_fit(const Eigen::Ref<const Eigen::MatrixXd>& points, double lambda = 1e-6);

class GaussianMonitor {
public:
    explicit GaussianMonitor(std::map<std::string, GaussianClass, std::less<>> classes)
        : m_classes(std::move(classes)) {}

    const std::map<std::string, GaussianClass, std::less<>>& classes() const { return m_classes; }

    /// Mahalanobis distance to the class's Gaussian; +inf for an unknown class.
    double score(const Eigen::Ref<const Eigen::VectorXd>& z, std::string_view class_key) const;

private:
    std::map<std::string, GaussianClass, std::less<>> m_classes;
};

/// Fits every class of `features` from its records that are not labeled OoD
/// and score at least `score_threshold`.
GaussianMonitor gaussian_fit(const FeatureSet& features, double lambda = 1e-6,
                             double score_threshold = 0.0);

} // namespace bam

#endif // BAM_GAUSSIAN_HPP
