#include <doctest.h>

#include "bam/box.hpp"
#include "test_support.hpp"

using namespace bam;
using bam::test::box;
using bam::test::vec;

TEST_CASE("interval_distance") {
    CHECK(interval_distance(0.5, 0.0, 1.0) == 0.0);
    CHECK(interval_distance(-2.0, 0.0, 1.0) == 2.0);
    CHECK(interval_distance(3.0, 0.0, 1.0) == 2.0);
    CHECK(interval_distance(1.0, 1.0, 1.0) == 0.0);
    CHECK_THROWS_AS(interval_distance(0.0, 1.0, 0.0), InvalidArgument);
}

TEST_CASE("box_distance sums per-dimension distances") {
    const Box unit = box({{0, 1}, {0, 1}});
    CHECK(box_distance(vec({0.5, 0.5}), unit) == 0.0);
    CHECK(box_distance(vec({3, 0.5}), unit) == 2.0);
    CHECK(box_distance(vec({-1, 2}), unit) == 2.0);
    CHECK_THROWS_AS(box_distance(vec({1}), unit), DimensionMismatch);
}

TEST_CASE("box_contains uses closed intervals") {
    const Box unit = box({{0, 1}, {0, 1}});
    CHECK(box_contains(vec({0, 0}), unit));
    CHECK_FALSE(box_contains(vec({1.0000001, 0}), unit));
    CHECK(box_contains(vec({0.5}), box({{0.5, 0.5}})));
    CHECK_THROWS_AS(box_contains(vec({0, 0, 0}), unit), DimensionMismatch);
}

TEST_CASE("box construction validates bounds") {
    CHECK_THROWS_AS(box({{1, 0}}), InvariantViolation);
    CHECK_THROWS_AS(Box(Eigen::VectorXd(0), Eigen::VectorXd(0)), InvariantViolation);
    CHECK_THROWS_AS(Box(vec({0, 0}), vec({1})), DimensionMismatch);
    CHECK_THROWS_AS(box({{std::nan(""), 1}}), InvariantViolation);
}

TEST_CASE("tba is the per-dimension min/max") {
    CHECK(tba(std::vector<Eigen::VectorXd>{vec({1, 2})}) == box({{1, 1}, {2, 2}}));
    CHECK(tba(std::vector<Eigen::VectorXd>{vec({0, 0}), vec({2, 1})}) == box({{0, 2}, {0, 1}}));
    CHECK(tba(std::vector<Eigen::VectorXd>{vec({1, 5}), vec({3, 2}), vec({2, 9})}) ==
          box({{1, 3}, {2, 9}}));

    Eigen::MatrixXd columns(2, 3);
    columns << 1, 3, 2,
               5, 2, 9;
    CHECK(tba(columns) == box({{1, 3}, {2, 9}}));

    CHECK_THROWS_AS(tba(std::vector<Eigen::VectorXd>{}), EmptyInput);
    CHECK_THROWS_AS(tba(std::vector<Eigen::VectorXd>{vec({1}), vec({1, 2})}), DimensionMismatch);
}

TEST_CASE("enlarge_by_delta") {
    CHECK(enlarge_by_delta(box({{0, 1}}), vec({0})) == box({{0, 1}}));
    CHECK(enlarge_by_delta(box({{0, 1}, {2, 3}}), vec({1, 0.5})) == box({{-1, 2}, {1.5, 3.5}}));
    CHECK(enlarge_by_delta(box({{5, 5}}), vec({2})) == box({{3, 7}}));
    CHECK_THROWS_AS(enlarge_by_delta(box({{0, 1}}), vec({-0.1})), InvalidArgument);
    CHECK_THROWS_AS(enlarge_by_delta(box({{0, 1}}), vec({1, 1})), DimensionMismatch);
}

TEST_CASE("expand_to_include") {
    CHECK(expand_to_include(box({{0, 1}}), vec({0.5})) == box({{0, 1}}));
    CHECK(expand_to_include(box({{0, 1}, {0, 1}}), vec({3, 0.5})) == box({{0, 3}, {0, 1}}));
    CHECK(expand_to_include(box({{0, 1}}), vec({-2})) == box({{-2, 1}}));
    CHECK_THROWS_AS(expand_to_include(box({{0, 1}}), vec({1, 2})), DimensionMismatch);
}

TEST_CASE("geometry properties on random inputs") {
    bam::test::Gen gen(20240601);
    for (int trial = 0; trial < 2000; ++trial) {
        const Eigen::Index n = gen.integer(1, 16);
        const Box b = gen.random_box(n);
        const Eigen::VectorXd x = gen.vector(n, -8.0, 8.0);
        const double d = box_distance(x, b);

        REQUIRE(d >= 0.0);
        REQUIRE(box_contains(x, b) == (d == 0.0));

        Eigen::VectorXd delta(n);
        for (Eigen::Index i = 0; i < n; ++i) delta(i) = gen.real(0.0, 2.0);
        const Box wider = enlarge_by_delta(b, delta);
        REQUIRE(wider.encloses(b));
        REQUIRE(box_distance(x, wider) <= d);
        REQUIRE(enlarge_by_delta(b, Eigen::VectorXd::Zero(n)) == b);

        const Box grown = expand_to_include(b, x);
        REQUIRE(grown.encloses(b));
        REQUIRE(box_distance(x, grown) == 0.0);
        REQUIRE(box_distance(x, grown) <= d);
    }
}

TEST_CASE("tba is sound and minimal on random point sets") {
    bam::test::Gen gen(7);
    for (int trial = 0; trial < 500; ++trial) {
        const Eigen::Index n = gen.integer(1, 12);
        const int m = gen.integer(1, 20);
        std::vector<Eigen::VectorXd> points;
        for (int j = 0; j < m; ++j) points.push_back(gen.vector(n));
        const Box b = tba(points);
        for (const auto& p : points) REQUIRE(box_contains(p, b));
        for (Eigen::Index i = 0; i < n; ++i) {
            bool low_attained = false;
            bool high_attained = false;
            for (const auto& p : points) {
                low_attained |= p(i) == b.lower()(i);
                high_attained |= p(i) == b.upper()(i);
            }
            REQUIRE(low_attained);
            REQUIRE(high_attained);
        }
    }
}
