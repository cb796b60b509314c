#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include <doctest.h>

#include "optrec/metric.hpp"

using namespace optrec;

namespace {

std::vector<Point> random_set(std::mt19937_64& rng, std::size_t dim, std::size_t size) {
    std::uniform_real_distribution<double> coord(-2.0, 2.0);
    std::vector<Point> s(size, Point(dim));
    for (auto& p : s)
        for (double& c : p) c = coord(rng);
    return s;
}

bool same_as_sets(std::vector<Point> a, std::vector<Point> b) {
    std::sort(a.begin(), a.end());
    a.erase(std::unique(a.begin(), a.end()), a.end());
    std::sort(b.begin(), b.end());
    b.erase(std::unique(b.begin(), b.end()), b.end());
    return a == b;
}

}  // namespace

TEST_CASE("distance: euclidean and weighted lp") {
    const auto e2 = MetricSpace::euclidean(2);
    CHECK(e2.dist({0, 0}, {0, 1}) == doctest::Approx(1.0));
    CHECK(e2.dist({3, -1}, {3, -1}) == 0.0);

    const auto w = MetricSpace::weighted_lp(1.0, {2.0, 1.0});
    CHECK(w.dist({0, 0}, {1, 1}) == doctest::Approx(3.0));
}

TEST_CASE("distance: validation") {
    const auto e2 = MetricSpace::euclidean(2);
    CHECK_THROWS_AS(e2.dist({0.0}, {0, 1}), std::invalid_argument);
    CHECK_THROWS_AS(MetricSpace::weighted_lp(0.5, {1.0}), std::invalid_argument);
    CHECK_THROWS_AS(MetricSpace::weighted_lp(1.0, {0.0}), std::invalid_argument);
    // table lookups require points declared in the table
    const auto t = MetricSpace::table({{0.0}, {1.0}}, {{0, 1}, {1, 0}});
    CHECK(t.dist({0.0}, {1.0}) == 1.0);
    CHECK_THROWS_AS(t.dist({0.0}, {2.0}), std::invalid_argument);
}

TEST_CASE("diameter") {
    const auto e2 = MetricSpace::euclidean(2);
    const auto e1 = MetricSpace::euclidean(1);
    CHECK(diameter(e2, {{0, 0}, {0, 1}}) == doctest::Approx(1.0));
    CHECK(diameter(e2, {{4, 7}}) == 0.0);
    CHECK(diameter(e1, {{0}, {1}, {5}}) == doctest::Approx(5.0));
    CHECK_THROWS_AS(diameter(e1, {}), std::invalid_argument);
}

TEST_CASE("hausdorff distance between sets") {
    const auto e1 = MetricSpace::euclidean(1);
    CHECK(hausdorff_set_set(e1, {{0}, {2}}, {{0}, {2}}) == 0.0);
    CHECK(hausdorff_set_set(e1, {{0}}, {{1}, {3}}) == doctest::Approx(3.0));
    CHECK(hausdorff_set_set(e1, {{0}, {1}}, {{0}, {1}, {0.5}}) == doctest::Approx(0.5));
    CHECK_THROWS_AS(hausdorff_set_set(e1, {}, {{0}}), std::invalid_argument);
}

TEST_CASE("point-to-set distances: sup vs inf convention") {
    const auto e1 = MetricSpace::euclidean(1);
    const auto e2 = MetricSpace::euclidean(2);
    CHECK(hausdorff_point_set(e1, {0}, {{1}, {3}}) == doctest::Approx(3.0));
    CHECK(hausdorff_point_set(e1, {4}, {{4}}) == 0.0);
    CHECK(hausdorff_point_set(e2, {0, 0}, {{0, 1}, {1, 0}}) == doctest::Approx(1.0));

    CHECK(dist_point_set(e1, {0}, {{1}, {3}}) == doctest::Approx(1.0));
    CHECK(dist_point_set(e1, {3}, {{1}, {3}}) == 0.0);
    CHECK(dist_point_set(e2, {2, 0}, {{0, 0}}) == doctest::Approx(2.0));
}

TEST_CASE("metric axiom checking on tables") {
    const auto e2 = MetricSpace::euclidean(2);
    std::mt19937_64 rng(7);
    CHECK(check_metric_axioms(e2, random_set(rng, 2, 6)).pass);

    const std::vector<Point> abc = {{0.0}, {1.0}, {2.0}};
    const auto bad_triangle = MetricSpace::table(abc, {{0, 1, 3}, {1, 0, 1}, {3, 1, 0}});
    const auto v1 = check_metric_axioms(bad_triangle, abc);
    CHECK_FALSE(v1.pass);
    CHECK(v1.violated == "triangle");

    const auto bad_identity = MetricSpace::table(abc, {{0, 0, 0}, {0, 0, 0}, {0, 0, 0}});
    const auto v2 = check_metric_axioms(bad_identity, abc);
    CHECK_FALSE(v2.pass);
    CHECK(v2.violated == "identity");

    const auto asym = MetricSpace::table({{0.0}, {1.0}}, {{0, 1}, {2, 0}});
    const auto v3 = check_metric_axioms(asym, {{0.0}, {1.0}});
    CHECK_FALSE(v3.pass);
    CHECK(v3.violated == "symmetry");
}

TEST_CASE("hausdorff set distance is a metric on random finite sets") {
    std::mt19937_64 rng(20240817);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t dim = 1 + rng() % 3;
        const auto m = MetricSpace::euclidean(dim);
        const auto a = random_set(rng, dim, 1 + rng() % 8);
        const auto b = random_set(rng, dim, 1 + rng() % 8);
        const auto c = random_set(rng, dim, 1 + rng() % 8);

        const double ab = hausdorff_set_set(m, a, b);
        CHECK(ab == hausdorff_set_set(m, b, a));
        CHECK(ab >= 0.0);
        CHECK(ab <= hausdorff_set_set(m, a, c) + hausdorff_set_set(m, c, b) + 1e-12);
        CHECK(hausdorff_set_set(m, a, a) == 0.0);
        if (ab == 0.0) CHECK(same_as_sets(a, b));
        if (same_as_sets(a, b)) CHECK(ab == 0.0);
    }
}

TEST_CASE("inf distance bounded by sup distance; diameter via sup distance") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t dim = 1 + rng() % 3;
        const auto m = MetricSpace::euclidean(dim);
        const auto a = random_set(rng, dim, 1 + rng() % 6);
        const auto b = random_set(rng, dim, 1 + rng() % 6);
        for (const auto& p : a) {
            CHECK(dist_point_set(m, p, b) <= hausdorff_point_set(m, p, b));
            // bit-exact symmetry of the underlying distance
            for (const auto& q : b) CHECK(m.dist(p, q) == m.dist(q, p));
        }
        double via_sup = 0.0;
        for (const auto& p : a) via_sup = std::max(via_sup, hausdorff_point_set(m, p, a));
        CHECK(diameter(m, a) == via_sup);
    }
}
