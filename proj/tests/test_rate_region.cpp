#include <doctest.h>

#include <cmath>

#include "gicb/rate_region.hpp"

using namespace gicb;

TEST_CASE("halfplane region sampling and queries") {
    // triangle R1 <= 2, R2 <= 2, R1 + R2 <= 3
    auto region = RateRegion::from_halfplanes(
        {{1, 0, 2, "r1"}, {0, 1, 2, "r2"}, {1, 1, 3, "sum"}}, 31);
    CHECK(region.r1_max() == doctest::Approx(2.0));
    CHECK(region.r2_max_at(0.0) == doctest::Approx(2.0));
    CHECK(region.r2_max_at(2.0) == doctest::Approx(1.0));
    CHECK(region.r2_max_at(1.5) == doctest::Approx(1.5));
    CHECK(region.max_sum() == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(region.contains(1.0, 1.0));
    CHECK(region.contains(2.0, 1.0));
    CHECK_FALSE(region.contains(2.0, 1.1));
    CHECK_FALSE(region.contains(-0.5, 0.0));
}

TEST_CASE("polytope max sum via vertex enumeration") {
    CHECK(polytope_max_sum({{1, 0, 1, ""}, {0, 1, 4, ""}}) == doctest::Approx(5.0));
    CHECK(polytope_max_sum({{2, 1, 4, ""}, {1, 2, 4, ""}}) ==
          doctest::Approx(8.0 / 3.0).epsilon(1e-12));
    CHECK(polytope_max_sum({{1, 1, 0, ""}}) == doctest::Approx(0.0));
}

TEST_CASE("boundary points satisfy the halfplanes") {
    auto region = RateRegion::from_halfplanes(
        {{1, 0, 1.7, ""}, {0, 1, 2.2, ""}, {1, 1, 3.1, ""}, {2, 1, 4.4, ""}}, 101);
    for (const auto& [r1, r2] : region.boundary()) {
        CHECK(region.contains(r1, r2, 1e-9));
    }
}

TEST_CASE("interpolation on a sampled curve") {
    std::vector<RatePoint> curve{{0.0, 2.0}, {1.0, 1.5}, {2.0, 0.0}};
    CHECK(interp_at(curve, -1.0) == doctest::Approx(2.0));
    CHECK(interp_at(curve, 0.5) == doctest::Approx(1.75));
    CHECK(interp_at(curve, 1.5) == doctest::Approx(0.75));
    CHECK(interp_at(curve, 5.0) == doctest::Approx(0.0));
}

TEST_CASE("upper concave envelope removes dents") {
    std::vector<RatePoint> curve{{0.0, 1.0}, {1.0, 0.2}, {2.0, 1.0}};
    auto env = upper_concave_envelope(curve);
    CHECK(env[1].second == doctest::Approx(1.0)); // dent lifted to the chord
    // already-concave curves are unchanged
    std::vector<RatePoint> concave{{0.0, 0.0}, {1.0, 0.9}, {2.0, 1.2}, {3.0, 1.3}};
    auto same = upper_concave_envelope(concave);
    for (std::size_t i = 0; i < concave.size(); ++i) {
        CHECK(same[i].second == doctest::Approx(concave[i].second).epsilon(1e-12));
    }
}

TEST_CASE("inverting a decreasing R1-vs-R2 bound") {
    // R1 <= f(R2) sampled as (R2, f)
    std::vector<RatePoint> f{{0.0, 3.0}, {1.0, 2.0}, {2.0, 0.5}};
    CHECK(invert_decreasing_bound(f, 2.5) == doctest::Approx(0.5));
    CHECK(invert_decreasing_bound(f, 2.0) == doctest::Approx(1.0));
    CHECK(invert_decreasing_bound(f, 1.25) == doctest::Approx(1.5));
    CHECK(std::isinf(invert_decreasing_bound(f, 0.4)));  // never binds
    CHECK(invert_decreasing_bound(f, 3.5) ==
          -std::numeric_limits<double>::infinity()); // excluded outright
}

TEST_CASE("linspace endpoints are exact") {
    auto v = linspace(0.0, 1.7297, 512);
    CHECK(v.size() == 512);
    CHECK(v.front() == 0.0);
    CHECK(v.back() == 1.7297);
    for (std::size_t i = 1; i < v.size(); ++i) CHECK(v[i] > v[i - 1]);
}
