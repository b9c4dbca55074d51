#include <doctest.h>

#include <cmath>
#include <random>

#include "latslice/errors.hpp"
#include "latslice/generators.hpp"
#include "latslice/survey.hpp"
#include "oracles.hpp"

using namespace latslice;

namespace {

/// Fraction of a fine midpoint grid over (0,M]^2 where floor(u a + v) = b.
double hit_fraction_by_quadrature(Point p, double m, int cells) {
  const double h = m / cells;
  std::int64_t hits = 0;
  for (int i = 0; i < cells; ++i) {
    const double u = (i + 0.5) * h;
    for (int j = 0; j < cells; ++j) {
      const double v = (j + 0.5) * h;
      hits += std::floor(u * p.x + v) == p.y ? 1 : 0;
    }
  }
  return double(hits) / (double(cells) * cells);
}

PointSet full_grid(std::int64_t n) {
  std::vector<Point> pts;
  for (std::int64_t x = 0; x <= n; ++x) {
    for (std::int64_t y = 0; y <= n; ++y) pts.push_back({double(x), double(y)});
  }
  return PointSet(std::move(pts));
}

SurveyConfig grid_config(std::int64_t n, double m, std::int64_t g) {
  SurveyConfig c;
  c.n = n;
  c.m = m;
  c.grid_u = g;
  c.grid_v = g;
  return c;
}

}  // namespace

TEST_SUITE("survey") {

TEST_CASE("single point hit measure") {
  for (Point p : {Point{0, 0}, Point{3, 5}, Point{1, 1}, Point{7, 2}, Point{0, 4}}) {
    for (double m : {1.0, 4.0, 8.0}) {
      CAPTURE(p.x);
      CAPTURE(p.y);
      CAPTURE(m);
      const double exact = floor_line_hit_measure(p, m);
      CHECK(exact >= 0.0);
      CHECK(exact <= 1.0 / m + 1e-15);
      CHECK(std::abs(exact - hit_fraction_by_quadrature(p, m, 2000)) <= 2e-3);
    }
  }
}

TEST_CASE("single point survey stays under 1/M") {
  for (Point p : {Point{2, 3}, Point{5, 1}, Point{0, 6}}) {
    SurveyConfig c = grid_config(8, 8.0, 128);
    c.k_threshold = 2.0;
    const SurveyReport r = survey_floor_lines(PointSet({p}), c);
    CHECK(r.set_size == 1);
    CHECK(r.exact_mean <= 1.0 / 8.0 + 1e-15);
    CHECK(r.mean <= r.bound + r.resolution_term);
    CHECK(r.mean_within_bound());
    CHECK(r.good_fraction >= 1.0 - 1.0 / r.k);
    CHECK(std::abs(r.mean - r.exact_mean) <= r.resolution_term);
  }
}

TEST_CASE("full grid survey respects the integral bound") {
  const SurveyReport r = survey_floor_lines(full_grid(32), grid_config(32, 32.0, 128));
  CHECK(r.set_size == 33u * 33u);
  CHECK(r.bound == doctest::Approx(33.0 * 33.0 / 32.0));
  CHECK(r.k == doctest::Approx(std::sqrt(std::log(32.0) * std::log(32.0))));
  CHECK(r.exact_mean <= r.bound);
  CHECK(r.mean_within_bound());
  CHECK(r.good_fraction_within_bound());
  CHECK(std::abs(r.mean - r.exact_mean) <= r.resolution_term);
}

TEST_CASE("refining the grid never breaks the bound") {
  std::mt19937_64 rng(71);
  const PointSet s(oracle::random_lattice(800, 60, rng));
  for (std::int64_t g : {8, 32, 128, 256}) {
    const SurveyReport r = survey_floor_lines(s, grid_config(60, 30.0, g));
    CHECK(r.mean_within_bound());
    CHECK(r.good_fraction_within_bound());
    CHECK(r.exact_mean <= r.bound);
    CHECK(r.mean <= r.exact_mean + r.resolution_term);
  }
}

TEST_CASE("empty set survey") {
  const SurveyReport r = survey_floor_lines(PointSet(), grid_config(16, 16.0, 32));
  CHECK(r.set_size == 0);
  CHECK(r.mean == 0.0);
  CHECK(r.max_count == 0);
  CHECK(r.exception_fraction == 0.0);
  CHECK(r.good_fraction == 1.0);
}

TEST_CASE("grid cells can be kept") {
  SurveyConfig c = grid_config(16, 16.0, 8);
  c.keep_cells = true;
  std::mt19937_64 rng(73);
  const SurveyReport r = survey_floor_lines(PointSet(oracle::random_lattice(50, 16, rng)), c);
  REQUIRE(r.cells.size() == 64);
  double sum = 0.0;
  for (auto cell : r.cells) sum += cell;
  CHECK(sum / 64.0 == doctest::Approx(r.mean));
}

TEST_CASE("Monte-Carlo and grid modes agree") {
  std::mt19937_64 rng(79);
  const PointSet s(oracle::random_lattice(1500, 64, rng));
  const SurveyReport grid = survey_floor_lines(s, grid_config(64, 64.0, 512));
  SurveyConfig c = grid_config(64, 64.0, 0);
  c.mc_samples = 40000;
  c.seed = 5;
  const SurveyReport mc = survey_floor_lines(s, c);
  CHECK(mc.monte_carlo);
  CHECK(mc.std_error > 0.0);
  CHECK(std::abs(mc.mean - grid.mean) <= 3.0 * mc.std_error);
  // exact_mean integrates point hits; shared heights only lower the distinct count
  CHECK(mc.mean <= grid.exact_mean + 3.0 * mc.std_error);
  const SurveyReport again = survey_floor_lines(s, c);
  CHECK(again.mean == mc.mean);
}

TEST_CASE("survey parameters are validated") {
  CHECK_THROWS_AS((void)survey_floor_lines(PointSet(), grid_config(1, 4.0, 4)), ConfigError);
  CHECK_THROWS_AS((void)survey_floor_lines(PointSet(), grid_config(4, 0.5, 4)), ConfigError);
  CHECK_THROWS_AS((void)survey_floor_lines(PointSet(), grid_config(4, 4.0, 0)), ConfigError);
}

TEST_CASE("tube slice dimensions of the simple examples") {
  const PointSet line = gen_unit_line(1.0, 1 << 13);
  const DimensionProfile on_line = tube_dim_along(line, Tube::standard(-1.0, -0.5), dyadic_scales(4096));
  CHECK(on_line.estimate >= 0.95);
  CHECK(on_line.estimate <= 1.1);

  const ParabolicStaircase stairs(1024);
  const DimensionProfile row = tube_dim_along(stairs, Tube::horizontal(-0.5), dyadic_scales(1 << 20));
  CHECK(row.estimate >= 0.45);
  CHECK(row.estimate <= 0.55);
  CHECK(row.counts.back() == 1024);
  const DimensionProfile row_m = tube_dim_along(stairs.materialize(), Tube::horizontal(-0.5), dyadic_scales(1 << 20));
  CHECK(row_m.counts == row.counts);

  CHECK(tube_dim_along(line, Tube::standard(-1.0, 50.0), dyadic_scales(4096)).estimate == 0.0);
}

TEST_CASE("every offset of the line's own direction is exceptional") {
  const PointSet line = gen_unit_line(2.0, 1 << 12);
  const double u = -0.5;
  for (double v0 = -0.95; v0 < 0.0; v0 += 0.1) {
    CHECK(tube_dim_along(line, Tube::standard(u, v0), dyadic_scales(2048)).estimate > 0.5);
    const RayScanReport r = exception_ray_scan(line, v0, u - 1e-12, u + 1e-12, 1, 0.5, dyadic_scales(2048));
    CHECK(r.exceptional_fraction == 1.0);
  }
}

TEST_CASE("ray scan over the zig-zag cone") {
  const ZigzagResult z = gen_zigzag(0.2, 30);
  std::vector<double> scales;
  for (std::size_t n = 1; n < z.trace.corners.size(); ++n) scales.push_back(z.trace.corners[n].x);
  ProfileOptions o;
  o.method = EstimateMethod::regression_tail;
  // tubes t_{-1/m, 0} with direction slope m strictly inside (1, tan(pi/4 + delta))
  const double u_lo = -1.0, u_hi = -1.0 / z.trace.cone_slope;
  double previous = 1.0;
  for (double threshold : {0.0, 0.1, 0.15, 0.2, 0.3, 0.5}) {
    const RayScanReport r = exception_ray_scan(z.points, 0.0, u_lo, u_hi, 24, threshold, scales, o);
    CHECK(r.exceptional_fraction <= previous);
    previous = r.exceptional_fraction;
    for (double e : r.estimates) CHECK(e < 0.3);
  }
  CHECK(previous == 0.0);

  const RayScanReport empty = exception_ray_scan(PointSet(), 0.0, 0.5, 2.0, 10, 0.1, dyadic_scales(1024));
  CHECK(empty.exceptional_fraction == 0.0);
  CHECK_THROWS_AS((void)exception_ray_scan(z.points, 0.0, -1.0, 1.0, 4, 0.1, scales), ConfigError);
}

TEST_CASE("zig-zag slice estimates shrink with depth") {
  ProfileOptions o;
  o.method = EstimateMethod::regression_tail;
  auto mean_estimate = [&](std::int64_t levels) {
    const ZigzagResult z = gen_zigzag(0.2, levels);
    std::vector<double> scales;
    for (std::size_t n = 1; n < z.trace.corners.size(); ++n) scales.push_back(z.trace.corners[n].x);
    const RayScanReport r =
        exception_ray_scan(z.points, 0.0, -1.0, -1.0 / z.trace.cone_slope, 16, 0.1, scales, o);
    double sum = 0.0;
    for (double e : r.estimates) sum += e;
    return sum / double(r.estimates.size());
  };
  const double shallow = mean_estimate(20);
  const double deep = mean_estimate(32);
  CHECK(deep < shallow);
}

}  // TEST_SUITE
