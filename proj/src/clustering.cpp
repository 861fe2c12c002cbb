#include "bam/clustering.hpp"

#include <cmath>
#include <limits>

#include "bam/errors.hpp"
#include "bam/random.hpp"

namespace bam {

void ClusterConfig::validate() const {
    if (!(density > 0.0) || !std::isfinite(density)) {
        throw InvalidArgument("density must be a positive finite number");
    }
    if (cap < 1) throw InvalidArgument("cap must be at least 1");
    if (max_iterations < 1) throw InvalidArgument("max_iterations must be at least 1");
    if (!(shift_tolerance >= 0.0)) {
        throw InvalidArgument("shift_tolerance must be non-negative");
    }
}

std::size_t select_k(std::size_t m, double density, std::size_t cap) {
    if (m < 1) throw InvalidArgument("select_k requires at least one point");
    if (!(density > 0.0)) throw InvalidArgument("density must be positive");
    if (cap < 1) throw InvalidArgument("cap must be at least 1");
    const double ratio = std::floor(static_cast<double>(m) / density);
    std::size_t k = ratio >= static_cast<double>(m) ? m : static_cast<std::size_t>(ratio);
    k = std::min({k, cap, m});
    return std::max<std::size_t>(k, 1);
}

namespace {

using Index = Eigen::Index;

double squared_distance(const Eigen::Ref<const Eigen::MatrixXd>& points, Index i,
                        const Eigen::MatrixXd& centroids, Index c) {
    return (points.col(i) - centroids.col(c)).squaredNorm();
}

Eigen::MatrixXd seed_plus_plus(const Eigen::Ref<const Eigen::MatrixXd>& points,
                               std::size_t k, Rng& rng) {
    const Index m = points.cols();
    Eigen::MatrixXd centroids(points.rows(), static_cast<Index>(k));
    std::vector<bool> chosen(static_cast<std::size_t>(m), false);

    Index first = static_cast<Index>(rng.index(static_cast<std::size_t>(m)));
    centroids.col(0) = points.col(first);
    chosen[static_cast<std::size_t>(first)] = true;

    std::vector<double> nearest(static_cast<std::size_t>(m));
    for (Index i = 0; i < m; ++i) {
        nearest[static_cast<std::size_t>(i)] = squared_distance(points, i, centroids, 0);
    }

    for (Index c = 1; c < static_cast<Index>(k); ++c) {
        double total = 0.0;
        for (double d : nearest) total += d;

        Index pick = -1;
        if (total > 0.0) {
            const double target = rng.uniform() * total;
            double cumulative = 0.0;
            for (Index i = 0; i < m; ++i) {
                const double d = nearest[static_cast<std::size_t>(i)];
                if (d <= 0.0) continue;
                cumulative += d;
                pick = i;
                if (target < cumulative) break;
            }
        } else {
            // Remaining points all coincide with chosen centroids.
            for (Index i = 0; i < m && pick < 0; ++i) {
                if (!chosen[static_cast<std::size_t>(i)]) pick = i;
            }
        }
        centroids.col(c) = points.col(pick);
        chosen[static_cast<std::size_t>(pick)] = true;
        for (Index i = 0; i < m; ++i) {
            auto& d = nearest[static_cast<std::size_t>(i)];
            d = std::min(d, squared_distance(points, i, centroids, c));
        }
    }
    return centroids;
}

// Nearest centroid, lowest index on ties.
std::size_t nearest_centroid(const Eigen::Ref<const Eigen::MatrixXd>& points, Index i,
                             const Eigen::MatrixXd& centroids, double& best) {
    best = std::numeric_limits<double>::infinity();
    std::size_t arg = 0;
    for (Index c = 0; c < centroids.cols(); ++c) {
        const double d = squared_distance(points, i, centroids, c);
        if (d < best) {
            best = d;
            arg = static_cast<std::size_t>(c);
        }
    }
    return arg;
}

// Moves the point farthest from its centroid (taken from a cluster with more
// than one member) into each empty cluster.
void repair_empty_clusters(const Eigen::Ref<const Eigen::MatrixXd>& points,
                           std::vector<std::size_t>& assignments,
                           std::vector<std::size_t>& counts, Eigen::MatrixXd& centroids) {
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] != 0) continue;
        Index far = -1;
        double far_distance = -1.0;
        for (Index i = 0; i < points.cols(); ++i) {
            const std::size_t owner = assignments[static_cast<std::size_t>(i)];
            if (counts[owner] < 2) continue;
            const double d = squared_distance(points, i, centroids, static_cast<Index>(owner));
            if (d > far_distance) {
                far_distance = d;
                far = i;
            }
        }
        const std::size_t donor = assignments[static_cast<std::size_t>(far)];
        --counts[donor];
        ++counts[c];
        assignments[static_cast<std::size_t>(far)] = c;
        centroids.col(static_cast<Index>(c)) = points.col(far);
    }
}

} // namespace

double inertia(const Eigen::Ref<const Eigen::MatrixXd>& points, const Partition& partition) {
    double total = 0.0;
    for (Index i = 0; i < points.cols(); ++i) {
        total += squared_distance(points, i, partition.centroids,
                                  static_cast<Index>(partition.assignments[static_cast<std::size_t>(i)]));
    }
    return total;
}

Partition kmeans(const Eigen::Ref<const Eigen::MatrixXd>& points, std::size_t k,
                 const ClusterConfig& config) {
    config.validate();
    const Index m = points.cols();
    if (m == 0) throw EmptyInput("kmeans requires at least one point");
    if (k < 1 || k > static_cast<std::size_t>(m)) {
        throw InvalidArgument("kmeans: k = " + std::to_string(k) + " must lie in [1, " +
                              std::to_string(m) + "]");
    }
    if (!points.allFinite()) throw InvalidArgument("kmeans: non-finite coordinate");

    Rng rng(config.seed);
    Partition result;
    result.k = k;
    result.centroids = seed_plus_plus(points, k, rng);
    result.assignments.assign(static_cast<std::size_t>(m), 0);

    std::vector<std::size_t> previous;
    std::vector<std::size_t> counts(k);
    for (int iteration = 1; iteration <= config.max_iterations; ++iteration) {
        std::fill(counts.begin(), counts.end(), 0);
        double unused = 0.0;
        for (Index i = 0; i < m; ++i) {
            const std::size_t c = nearest_centroid(points, i, result.centroids, unused);
            result.assignments[static_cast<std::size_t>(i)] = c;
            ++counts[c];
        }
        repair_empty_clusters(points, result.assignments, counts, result.centroids);

        // Fixed index-order accumulation keeps centroids bit-reproducible.
        Eigen::MatrixXd sums = Eigen::MatrixXd::Zero(points.rows(), static_cast<Index>(k));
        for (Index i = 0; i < m; ++i) {
            sums.col(static_cast<Index>(result.assignments[static_cast<std::size_t>(i)])) +=
                points.col(i);
        }
        double max_shift = 0.0;
        for (std::size_t c = 0; c < k; ++c) {
            const auto col = static_cast<Index>(c);
            Eigen::VectorXd mean = sums.col(col) / static_cast<double>(counts[c]);
            max_shift = std::max(max_shift, (mean - result.centroids.col(col)).norm());
            result.centroids.col(col) = mean;
        }
        result.iterations = iteration;
        result.inertia_history.push_back(inertia(points, result));

        const bool unchanged = result.assignments == previous;
        if (unchanged || max_shift < config.shift_tolerance) break;
        previous = result.assignments;
    }
    return result;
}

std::vector<std::vector<std::size_t>> partition_features(
    const Eigen::Ref<const Eigen::MatrixXd>& points, const ClusterConfig& config) {
    config.validate();
    const auto m = static_cast<std::size_t>(points.cols());
    if (m == 0) throw EmptyInput("partition_features requires at least one record");
    const std::size_t k = select_k(m, config.density, config.cap);
    const Partition partition = kmeans(points, k, config);
    std::vector<std::vector<std::size_t>> subsets(partition.k);
    for (std::size_t i = 0; i < m; ++i) {
        subsets[partition.assignments[i]].push_back(i);
    }
    return subsets;
}

} // namespace bam
