#ifndef BAM_TEST_SUPPORT_HPP
#define BAM_TEST_SUPPORT_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "bam/box.hpp"

namespace bam::test {

inline Eigen::VectorXd vec(std::initializer_list<double> values) {
    Eigen::VectorXd v(static_cast<Eigen::Index>(values.size()));
    Eigen::Index i = 0;
    for (double x : values) v(i++) = x;
    return v;
}

inline Box box(std::initializer_list<std::pair<double, double>> intervals) {
    Eigen::VectorXd lo(static_cast<Eigen::Index>(intervals.size()));
    Eigen::VectorXd hi(static_cast<Eigen::Index>(intervals.size()));
    Eigen::Index i = 0;
    for (const auto& [a, b] : intervals) {
        lo(i) = a;
        hi(i) = b;
        ++i;
    }
    return {lo, hi};
}

/// Random inputs for property checks. Values are drawn on a coarse grid
/// half the time so boundary and tie cases come up often.
class Gen {
public:
    explicit Gen(std::uint64_t seed) : m_engine(seed) {}

    double real(double lo, double hi) {
        if (std::uniform_int_distribution<int>(0, 1)(m_engine) == 0) {
            const double grid = std::round(std::uniform_real_distribution<double>(lo, hi)(m_engine) * 4.0) / 4.0;
            return std::clamp(grid, lo, hi);
        }
        return std::uniform_real_distribution<double>(lo, hi)(m_engine);
    }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(m_engine); }

    Eigen::VectorXd vector(Eigen::Index n, double lo = -5.0, double hi = 5.0) {
        Eigen::VectorXd v(n);
        for (Eigen::Index i = 0; i < n; ++i) v(i) = real(lo, hi);
        return v;
    }

    Box random_box(Eigen::Index n) {
        Eigen::VectorXd a = vector(n);
        Eigen::VectorXd b = vector(n);
        return {a.cwiseMin(b), a.cwiseMax(b)};
    }

    std::mt19937_64& engine() { return m_engine; }

private:
    std::mt19937_64 m_engine;
};

/// Fresh scratch directory under the system temp dir.
inline std::filesystem::path scratch_dir(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / ("bam_test_" + name);
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

} // namespace bam::test

#endif // BAM_TEST_SUPPORT_HPP
