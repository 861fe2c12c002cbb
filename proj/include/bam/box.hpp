#ifndef BAM_BOX_HPP
#define BAM_BOX_HPP

#include <algorithm>
#include <string>

#include <Eigen/Dense>

#include "bam/errors.hpp"

namespace bam {

/// Axis-aligned box in feature space: one closed interval [lower(i), upper(i)]
/// per dimension. Zero-width intervals are legal. Immutable once built.
template <typename Scalar>
class BoxAbstraction {
public:
    using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

    BoxAbstraction(Vector lower, Vector upper)
        : m_lower(std::move(lower)), m_upper(std::move(upper)) {
        if (m_lower.size() < 1) {
            throw InvariantViolation("box must have at least one dimension");
        }
        detail::check_dimension("box upper bounds", m_lower.size(), m_upper.size());
        for (Eigen::Index i = 0; i < m_lower.size(); ++i) {
            // Negated form also rejects NaN bounds.
            if (!(m_lower(i) <= m_upper(i))) {
                throw InvariantViolation("box interval " + std::to_string(i) +
                                         " has lower > upper");
            }
        }
    }

    /// Degenerate box containing exactly one point.
    template <typename Derived>
    static BoxAbstraction point(const Eigen::MatrixBase<Derived>& x) {
        return BoxAbstraction(x.template cast<Scalar>(), x.template cast<Scalar>());
    }

    Eigen::Index dimension() const { return m_lower.size(); }
    const Vector& lower() const { return m_lower; }
    const Vector& upper() const { return m_upper; }

    /// True if every interval of this box encloses the matching interval of `other`.
    bool encloses(const BoxAbstraction& other) const {
        detail::check_dimension("box enclosure", dimension(), other.dimension());
        return (m_lower.array() <= other.m_lower.array()).all() &&
               (other.m_upper.array() <= m_upper.array()).all();
    }

    friend bool operator==(const BoxAbstraction& a, const BoxAbstraction& b) {
        return a.dimension() == b.dimension() && a.m_lower == b.m_lower &&
               a.m_upper == b.m_upper;
    }

private:
    Vector m_lower;
    Vector m_upper;
};

using Box = BoxAbstraction<double>;

/// Distance from x to the closed interval [lo, hi]; zero inside.
template <typename Scalar>
Scalar interval_distance(Scalar x, Scalar lo, Scalar hi) {
    if (!(lo <= hi)) {
        throw InvalidArgument("invalid interval: lower bound exceeds upper bound");
    }
    if (x < lo) return lo - x;
    if (x > hi) return x - hi;
    return Scalar(0);
}

/// Sum of per-dimension interval distances (L1 distance to the box).
template <typename Derived, typename Scalar>
Scalar box_distance(const Eigen::MatrixBase<Derived>& x, const BoxAbstraction<Scalar>& box) {
    detail::check_dimension("box_distance", box.dimension(), x.size());
    const auto& lo = box.lower();
    const auto& hi = box.upper();
    Scalar sum(0);
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const Scalar v = static_cast<Scalar>(x(i));
        if (v < lo(i)) {
            sum += lo(i) - v;
        } else if (v > hi(i)) {
            sum += v - hi(i);
        }
    }
    return sum;
}

template <typename Derived, typename Scalar>
bool box_contains(const Eigen::MatrixBase<Derived>& x, const BoxAbstraction<Scalar>& box) {
    detail::check_dimension("box_contains", box.dimension(), x.size());
    const auto& lo = box.lower();
    const auto& hi = box.upper();
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const Scalar v = static_cast<Scalar>(x(i));
        if (!(lo(i) <= v && v <= hi(i))) return false;
    }
    return true;
}

/// Tight box abstraction of the columns of `points` (one point per column).
template <typename Derived>
BoxAbstraction<typename Derived::Scalar> tba(const Eigen::MatrixBase<Derived>& points) {
    if (points.cols() == 0 || points.rows() == 0) {
        throw EmptyInput("tba requires at least one point of dimension >= 1");
    }
    using Vector = typename BoxAbstraction<typename Derived::Scalar>::Vector;
    Vector lower = points.rowwise().minCoeff();
    Vector upper = points.rowwise().maxCoeff();
    return {std::move(lower), std::move(upper)};
}

/// Tight box abstraction of a list of points; all points must share a dimension.
template <typename Scalar>
BoxAbstraction<Scalar> tba(const std::vector<Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>& points) {
    if (points.empty()) {
        throw EmptyInput("tba requires at least one point");
    }
    auto lower = points.front();
    auto upper = points.front();
    for (const auto& p : points) {
        detail::check_dimension("tba", lower.size(), p.size());
        lower = lower.cwiseMin(p);
        upper = upper.cwiseMax(p);
    }
    return {std::move(lower), std::move(upper)};
}

/// B_delta: every interval widened by delta(i) on both sides.
template <typename Derived, typename Scalar>
BoxAbstraction<Scalar> enlarge_by_delta(const BoxAbstraction<Scalar>& box,
                                        const Eigen::MatrixBase<Derived>& delta) {
    detail::check_dimension("enlarge_by_delta", box.dimension(), delta.size());
    const auto d = delta.template cast<Scalar>().eval();
    if (!(d.array() >= Scalar(0)).all()) {
        throw InvalidArgument("enlarge_by_delta: buffer entries must be non-negative");
    }
    return {box.lower() - d, box.upper() + d};
}

/// Smallest box enclosing both `box` and `x`.
template <typename Derived, typename Scalar>
BoxAbstraction<Scalar> expand_to_include(const BoxAbstraction<Scalar>& box,
                                         const Eigen::MatrixBase<Derived>& x) {
    detail::check_dimension("expand_to_include", box.dimension(), x.size());
    const auto v = x.template cast<Scalar>().eval();
    return {box.lower().cwiseMin(v), box.upper().cwiseMax(v)};
}

} // namespace bam

#endif // BAM_BOX_HPP
