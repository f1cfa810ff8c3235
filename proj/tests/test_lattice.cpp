#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "bookgraph/lattice.hpp"

using namespace bookgraph;
using Catch::Approx;

TEST_CASE("squared_distance basic values") {
  CHECK(squared_distance(LatticePoint{1, 1}, LatticePoint{2, 3}) == 5);
  CHECK(squared_distance(LatticePoint{4, -2, 7}, LatticePoint{4, -2, 7}) == 0);
  CHECK(squared_distance(LatticePoint{1, 1, 1, 1}, LatticePoint{2, 2, 2, 2}) == 4);
  CHECK(squared_distance(LatticePoint{2, 3}, LatticePoint{1, 1}) == 5);  // symmetric
  CHECK_THROWS_AS(squared_distance(LatticePoint{1}, LatticePoint{1, 2}), std::invalid_argument);
}

TEST_CASE("make_params clears denominators exactly") {
  ConstructionParams p = make_params(2, 6);
  CHECK(p.mu6 == 18);  // (r^2-1) d
  CHECK(p.ab_lo == 18 - 36);
  CHECK(p.ab_hi == 18 + 36);
  CHECK(p.c_lo == 18 - 288);
  CHECK(p.c_hi == 18 + 288);
  CHECK_THROWS_AS(make_params(0, 1), std::invalid_argument);
  CHECK_THROWS_AS(make_params(2, 0), std::invalid_argument);
}

TEST_CASE("in_ab_window examples") {
  ConstructionParams p = make_params(2, 6);
  CHECK(in_ab_window(3, p));        // the window center mu = 3
  CHECK_FALSE(in_ab_window(10, p)); // 60 > 54

  // r=2, d=2: the window covers every distance achievable on {1,2}^2
  ConstructionParams q = make_params(2, 2);
  std::vector<LatticePoint> pts = enumerate_box(1, 2, 2, 100);
  for (const auto& u : pts)
    for (const auto& v : pts) CHECK(in_ab_window(squared_distance(u, v), q));
}

TEST_CASE("in_c_window examples") {
  ConstructionParams p = make_params(2, 2);
  CHECK(in_c_window(4, p));        // 96 <= 102
  CHECK_FALSE(in_c_window(5, p));  // 120 > 102

  // window center: mu = 4 at r=5, d=1, so dist2 = mu/4 = 1 qualifies
  ConstructionParams q = make_params(5, 1);
  REQUIRE(q.mu6 == 24);
  CHECK(in_c_window(1, q));
}

TEST_CASE("ball_volume_exact known values") {
  CHECK(ball_volume_exact(2, 1.0) == Approx(std::numbers::pi).epsilon(1e-12));
  CHECK(ball_volume_exact(4, 1.0) == Approx(std::numbers::pi * std::numbers::pi / 2).epsilon(1e-12));
  CHECK(ball_volume_exact(2, 3.5 * std::sqrt(2.0)) == Approx(24.5 * std::numbers::pi).epsilon(1e-12));
  CHECK_THROWS_AS(ball_volume_exact(3, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(ball_volume_exact(2, 0.0), std::invalid_argument);
}

TEST_CASE("ball_volume_upper known values") {
  CHECK(ball_volume_upper(2, 1.0) == Approx(std::numbers::pi * std::numbers::e).epsilon(1e-12));
  double expected4 = std::pow(2 * std::numbers::pi * std::numbers::e, 2.0) / 16.0;
  CHECK(ball_volume_upper(4, 1.0) == Approx(expected4).epsilon(1e-12));
}

TEST_CASE("log variants agree with the linear ones and survive large d") {
  for (int d : {2, 8, 20, 60})
    for (double r : {0.5, 1.0, 2.0, 3.5 * std::sqrt(double(d))}) {
      CHECK(std::exp(log_ball_volume_exact(d, r)) == Approx(ball_volume_exact(d, r)).epsilon(1e-9));
      CHECK(std::exp(log_ball_volume_upper(d, r)) == Approx(ball_volume_upper(d, r)).epsilon(1e-9));
    }
  CHECK(std::isfinite(log_ball_volume_exact(400, 1e6)));
  CHECK(std::isfinite(log_ball_volume_upper(401, 1e6)));
}

TEST_CASE("upper bound strictly dominates the exact volume") {
  for (int d = 2; d <= 100; d += 2)
    for (double r : {0.5, 1.0, 2.0, std::sqrt(double(d)), 3.5 * std::sqrt(double(d))})
      CHECK(log_ball_volume_upper(d, r) > log_ball_volume_exact(d, r));
}

TEST_CASE("upper bound at radius 3.5 sqrt(d) stays below 15^d") {
  for (int d = 2; d <= 60; d += 2)
    CHECK(log_ball_volume_upper(d, 3.5 * std::sqrt(double(d))) < d * std::log(15.0));
}

namespace {

// independent 2-dimensional enumeration used to freeze expected counts
i64 count_disk_points(i64 radius_sq) {
  i64 k = 0;
  while ((k + 1) * (k + 1) <= radius_sq) ++k;
  i64 total = 0;
  for (i64 x = -k - 1; x <= k + 1; ++x)
    for (i64 y = -k - 1; y <= k + 1; ++y)
      if (x * x + y * y <= radius_sq) ++total;
  return total;
}

}  // namespace

TEST_CASE("count_lattice_points_in_ball") {
  CHECK(count_lattice_points_in_ball(1, 4) == 5);
  CHECK(count_lattice_points_in_ball(2, 0) == 1);
  CHECK(count_disk_points(18) == 61);
  CHECK(count_lattice_points_in_ball(2, 18) == 61);
  for (i64 rsq : {1, 2, 5, 9, 25, 50})
    CHECK(count_lattice_points_in_ball(2, rsq) == count_disk_points(rsq));
  CHECK_THROWS_AS(count_lattice_points_in_ball(6, 54, /*node_cap=*/100), resource_error);
  CHECK_THROWS_MATCHES(count_lattice_points_in_ball(8, 1000, 1000), resource_error,
                       Catch::Matchers::MessageMatches(
                           Catch::Matchers::ContainsSubstring("cap 1000")));
}

TEST_CASE("lattice count vs volume chain for d in {2,4,6}") {
  for (int d : {2, 4, 6}) {
    i64 pts = count_lattice_points_in_ball(d, 9 * d);
    double vol = ball_volume_exact(d, 3.5 * std::sqrt(double(d)));
    double upper = ball_volume_upper(d, 3.5 * std::sqrt(double(d)));
    CHECK(double(pts) <= vol);
    CHECK(vol < upper);
    CHECK(upper < std::pow(15.0, d));
  }
}

TEST_CASE("hoeffding_tail") {
  CHECK(hoeffding_tail(0.0, 1.0, 5) == Approx(2.0));
  // exponent -1 when t^2 = 2 lip^2 n
  CHECK(hoeffding_tail(std::sqrt(2.0 * 9.0 * 4), 3.0, 4) == Approx(2.0 / std::numbers::e).epsilon(1e-12));
  // t = d, lip = r^2, n = d collapses to 2 e^{-d/(2 r^4)}
  double r = 3, d = 500;
  CHECK(hoeffding_tail(d, r * r, i64(d)) ==
        Approx(2.0 * std::exp(-d / (2.0 * std::pow(r, 4)))).epsilon(1e-12));
  CHECK_THROWS_AS(hoeffding_tail(-1.0, 1.0, 1), std::invalid_argument);
}

TEST_CASE("sample_distance_concentration degenerate and exact cases") {
  // r=1: single-point domain, every distance 0
  CHECK(sample_distance_concentration(1, 3, 1000, 99) == 0.0);
  // r=2, d=2: the window covers all achievable distances (checked exhaustively above)
  CHECK(sample_distance_concentration(2, 2, 2000, 1) == 0.0);
}

TEST_CASE("sample_distance_concentration is deterministic and thread-count independent") {
  // r=3, d=8 keeps a visible outlier fraction, so unequal seeds are told apart
  double one = sample_distance_concentration(3, 8, 5000, 1234, 1);
  CHECK(one > 0.0);
  CHECK(sample_distance_concentration(3, 8, 5000, 1234, 1) == one);
  CHECK(sample_distance_concentration(3, 8, 5000, 1234, 4) == one);
  CHECK(sample_distance_concentration(3, 8, 5000, 4321, 1) != one);
}

TEST_CASE("empirical outlier fraction sits below the concentration bound") {
  double frac = sample_distance_concentration(3, 500, 10000, 7, 2);
  CHECK(frac <= 2.0 * std::exp(-500.0 / 162.0) + 0.01);
}

TEST_CASE("enumerate_box") {
  std::vector<LatticePoint> pts = enumerate_box(1, 2, 2, 100);
  REQUIRE(pts.size() == 4);
  CHECK(pts[0] == LatticePoint{1, 1});
  CHECK(pts[1] == LatticePoint{1, 2});
  CHECK(pts[2] == LatticePoint{2, 1});
  CHECK(pts[3] == LatticePoint{2, 2});
  CHECK(enumerate_box(0, 3, 4, 1000).size() == 256);
  CHECK_THROWS_AS(enumerate_box(1, 3, 40, 4'194'304), resource_error);
}
