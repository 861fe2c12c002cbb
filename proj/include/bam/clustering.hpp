#ifndef BAM_CLUSTERING_HPP
#define BAM_CLUSTERING_HPP

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace bam {

struct ClusterConfig {
    double density = 100.0;      ///< targeted points per cluster
    std::size_t cap = 10000;     ///< upper bound on clusters per class
    std::uint64_t seed = 0;
    int max_iterations = 100;
    double shift_tolerance = 1e-6;

    /// Throws InvalidArgument when a field is out of range.
    void validate() const;
};

struct Partition {
    std::size_t k = 0;
    std::vector<std::size_t> assignments;  ///< one cluster index per input column
    Eigen::MatrixXd centroids;             ///< n x k, column j is the mean of cluster j
    int iterations = 0;
    /// Within-cluster sum of squares after each centroid update.
    std::vector<double> inertia_history;

    friend bool operator==(const Partition& a, const Partition& b) {
        return a.k == b.k && a.assignments == b.assignments &&
               a.centroids.rows() == b.centroids.rows() &&
               a.centroids.cols() == b.centroids.cols() && a.centroids == b.centroids &&
               a.iterations == b.iterations && a.inertia_history == b.inertia_history;
    }
};

/// max(1, min(floor(m / density), cap, m)).
std::size_t select_k(std::size_t m, double density, std::size_t cap);

/// Lloyd's algorithm with k-means++ seeding over the columns of `points`.
/// Deterministic for fixed (column order, k, seed); every cluster of the
/// result is non-empty.
Partition kmeans(const Eigen::Ref<const Eigen::MatrixXd>& points, std::size_t k,
                 const ClusterConfig& config);

/// Within-cluster sum of squared distances.
double inertia(const Eigen::Ref<const Eigen::MatrixXd>& points, const Partition& partition);

/// Splits the columns of `points` into select_k(m, density, cap) disjoint,
/// covering index subsets (ascending indices, ordered by cluster).
std::vector<std::vector<std::size_t>> partition_features(
    const Eigen::Ref<const Eigen::MatrixXd>& points, const ClusterConfig& config);

} // namespace bam

#endif // BAM_CLUSTERING_HPP
