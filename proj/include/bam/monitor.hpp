#ifndef BAM_MONITOR_HPP
#define BAM_MONITOR_HPP

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bam/box.hpp"

namespace bam {

/// Finite union of boxes for one class key. Bounds are stored column-wise
/// (n x k) so a query scans contiguous memory.
class ClassMonitor {
public:
    ClassMonitor(std::string class_key, const std::vector<Box>& boxes);
    ClassMonitor(std::string class_key, Eigen::MatrixXd lower, Eigen::MatrixXd upper);

    const std::string& class_key() const { return m_class_key; }
    Eigen::Index dimension() const { return m_lower.rows(); }
    std::size_t box_count() const { return static_cast<std::size_t>(m_lower.cols()); }
    Box box(std::size_t j) const;
    std::vector<Box> boxes() const;
    const Eigen::MatrixXd& lower() const { return m_lower; }
    const Eigen::MatrixXd& upper() const { return m_upper; }

    friend bool operator==(const ClassMonitor& a, const ClassMonitor& b) {
        return a.m_class_key == b.m_class_key && a.m_lower.rows() == b.m_lower.rows() &&
               a.m_lower.cols() == b.m_lower.cols() && a.m_lower == b.m_lower &&
               a.m_upper == b.m_upper;
    }

private:
    std::string m_class_key;
    Eigen::MatrixXd m_lower;
    Eigen::MatrixXd m_upper;
};

struct MonitorDistance {
    double distance = 0.0;
    std::size_t nearest_box = 0;
};

/// Minimum box distance over the monitor's boxes; the lowest index wins ties
/// and the scan stops at the first containing box.
MonitorDistance monitor_distance(const Eigen::Ref<const Eigen::VectorXd>& z,
                                 const ClassMonitor& monitor);

/// Smallest count c with c / m >= target (the number of points that must be
/// inside to reach a rate of `target`).
std::size_t required_count(std::size_t m, double target);

/// Grows boxes until at least `target_tpr` of the columns of `features` lie
/// inside some box. Outside points are ranked once by their distance to the
/// original boxes; each of the nearest ones is absorbed by its nearest box.
std::vector<Box> enlarge_to_tpr(const std::vector<Box>& boxes,
                                const Eigen::Ref<const Eigen::MatrixXd>& features,
                                double target_tpr);

} // namespace bam

#endif // BAM_MONITOR_HPP
