#include "bam/monitor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace bam {

using Index = Eigen::Index;

ClassMonitor::ClassMonitor(std::string class_key, const std::vector<Box>& boxes)
    : m_class_key(std::move(class_key)) {
    if (boxes.empty()) throw InvariantViolation("class monitor needs at least one box");
    const Index n = boxes.front().dimension();
    m_lower.resize(n, static_cast<Index>(boxes.size()));
    m_upper.resize(n, static_cast<Index>(boxes.size()));
    for (std::size_t j = 0; j < boxes.size(); ++j) {
        detail::check_dimension("class monitor box", n, boxes[j].dimension());
        m_lower.col(static_cast<Index>(j)) = boxes[j].lower();
        m_upper.col(static_cast<Index>(j)) = boxes[j].upper();
    }
}

ClassMonitor::ClassMonitor(std::string class_key, Eigen::MatrixXd lower, Eigen::MatrixXd upper)
    : m_class_key(std::move(class_key)), m_lower(std::move(lower)), m_upper(std::move(upper)) {
    if (m_lower.cols() < 1 || m_lower.rows() < 1) {
        throw InvariantViolation("class monitor needs at least one box of dimension >= 1");
    }
    if (m_lower.rows() != m_upper.rows() || m_lower.cols() != m_upper.cols()) {
        throw InvariantViolation("class monitor lower/upper bound shapes differ");
    }
    if (!(m_lower.array() <= m_upper.array()).all()) {
        throw InvariantViolation("class monitor '" + m_class_key + "' has a box with lower > upper");
    }
}

Box ClassMonitor::box(std::size_t j) const {
    return {m_lower.col(static_cast<Index>(j)), m_upper.col(static_cast<Index>(j))};
}

std::vector<Box> ClassMonitor::boxes() const {
    std::vector<Box> out;
    out.reserve(box_count());
    for (std::size_t j = 0; j < box_count(); ++j) out.push_back(box(j));
    return out;
}

namespace {

constexpr Index kAbortStride = 32;

// Distance from z to one box, or any value >= bound once the partial sum
// reaches bound. Summation order matches box_distance exactly.
double bounded_box_distance(const double* z, const double* lo, const double* hi, Index n,
                            double bound) {
    double sum = 0.0;
    for (Index start = 0; start < n; start += kAbortStride) {
        const Index stop = std::min(n, start + kAbortStride);
        for (Index i = start; i < stop; ++i) {
            // At most one of the two terms is positive, and x + 0.0 == x, so
            // this adds exactly what the branching form adds.
            const double below = lo[i] - z[i];
            const double above = z[i] - hi[i];
            sum += (below > 0.0 ? below : 0.0) + (above > 0.0 ? above : 0.0);
        }
        if (sum >= bound) return sum;
    }
    return sum;
}

} // namespace

MonitorDistance monitor_distance(const Eigen::Ref<const Eigen::VectorXd>& z,
                                 const ClassMonitor& monitor) {
    const Index n = monitor.dimension();
    detail::check_dimension("monitor_distance", n, z.size());
    MonitorDistance best{std::numeric_limits<double>::infinity(), 0};
    for (Index j = 0; j < monitor.lower().cols(); ++j) {
        const double d = bounded_box_distance(z.data(), monitor.lower().col(j).data(),
                                              monitor.upper().col(j).data(), n, best.distance);
        if (d < best.distance) {
            best = {d, static_cast<std::size_t>(j)};
            if (d == 0.0) break;
        }
    }
    return best;
}

std::size_t required_count(std::size_t m, double target) {
    if (!(target > 0.0 && target <= 1.0)) {
        throw InvalidArgument("target rate must lie in (0, 1]");
    }
    const auto md = static_cast<double>(m);
    auto c = static_cast<std::size_t>(std::ceil(target * md));
    c = std::min(c, m);
    while (c > 0 && static_cast<double>(c - 1) / md >= target) --c;
    while (c < m && static_cast<double>(c) / md < target) ++c;
    return c;
}

std::vector<Box> enlarge_to_tpr(const std::vector<Box>& boxes,
                                const Eigen::Ref<const Eigen::MatrixXd>& features,
                                double target_tpr) {
    if (!(target_tpr > 0.0 && target_tpr <= 1.0)) {
        throw InvalidArgument("target_tpr must lie in (0, 1]");
    }
    if (features.cols() == 0) throw EmptyInput("enlarge_to_tpr requires at least one feature");
    const ClassMonitor original("", boxes);
    detail::check_dimension("enlarge_to_tpr", original.dimension(), features.rows());

    const auto m = static_cast<std::size_t>(features.cols());
    std::vector<MonitorDistance> distances(m);
    std::vector<std::size_t> outside;
    for (std::size_t i = 0; i < m; ++i) {
        distances[i] = monitor_distance(features.col(static_cast<Index>(i)), original);
        if (distances[i].distance > 0.0) outside.push_back(i);
    }
    const std::size_t inside = m - outside.size();
    const std::size_t need = required_count(m, target_tpr);
    if (inside >= need) return boxes;

    std::stable_sort(outside.begin(), outside.end(), [&](std::size_t a, std::size_t b) {
        return distances[a].distance < distances[b].distance;
    });

    Eigen::MatrixXd lower = original.lower();
    Eigen::MatrixXd upper = original.upper();
    for (std::size_t r = 0; r < need - inside; ++r) {
        const std::size_t i = outside[r];
        const auto j = static_cast<Index>(distances[i].nearest_box);
        lower.col(j) = lower.col(j).cwiseMin(features.col(static_cast<Index>(i)));
        upper.col(j) = upper.col(j).cwiseMax(features.col(static_cast<Index>(i)));
    }
    return ClassMonitor("", std::move(lower), std::move(upper)).boxes();
}

} // namespace bam
