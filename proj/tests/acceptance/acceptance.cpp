// Acceptance suite: ten end-to-end checks, one PASS/FAIL line each.
//
//   latslice_acceptance          run every criterion
//   latslice_acceptance 3 7      run only criteria 3 and 7
//
// Exit status is the number of failed criteria. Every check recomputes its
// expected values here, by brute force, rather than trusting the library.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "latslice/dimension.hpp"
#include "latslice/finite_field.hpp"
#include "latslice/generators.hpp"
#include "latslice/geometry.hpp"
#include "latslice/survey.hpp"

using namespace latslice;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

std::string fmt(const char* pattern, double a, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, pattern, a, b, c, d);
  return buf;
}

// --- brute-force helpers -----------------------------------------------------

std::uint64_t line_count(const FiniteFieldSet& b, std::int64_t u, std::int64_t v) {
  const std::int64_t p = b.p();
  std::uint64_t n = 0;
  for (std::int64_t x = 0; x < p; ++x) n += b.contains(x, (u * x + v) % p) ? 1 : 0;
  return n;
}

FiniteFieldSet battery_set(std::int64_t p, std::mt19937_64& rng) {
  const double density = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  FiniteFieldSet b = FiniteFieldSet::random(p, density, rng());
  if (b.cardinality() == 0) b.insert(0, 0);
  return b;
}

bool in_tube(double u, double v, Point p) {
  const double k = std::sqrt(1.0 + 1.0 / (u * u));
  return -p.x / u + v * k < p.y && p.y <= -p.x / u + (v + 1.0) * k;
}

bool in_slanted(double n, double u, double v, Point p) {
  const double r = std::sqrt(1.0 + u * u);
  const double along = (p.y - u * p.x) / r;
  const double across = (p.x + u * p.y) / r;
  const double centre = (u > 0 ? 1.0 : -1.0) * (v + 0.5);
  return along >= 0.0 && along <= n && std::abs(across - centre) <= n / 2.0;
}

/// (1/M^2) * area of {(u,v) in (0,M]^2 : b <= u a + v < b + 1}; the
/// v-length is piecewise linear in u, so the trapezoid rule between its
/// breakpoints is exact.
double hit_measure(double a, double b, double m) {
  auto length = [&](double u) {
    return std::max(0.0, std::min(m, b + 1.0 - u * a) - std::max(0.0, b - u * a));
  };
  std::vector<double> knots{0.0, m};
  if (a > 0) {
    for (double c : {b, b + 1.0, b - m, b + 1.0 - m}) {
      const double u = c / a;
      if (u > 0.0 && u < m) knots.push_back(u);
    }
  }
  std::sort(knots.begin(), knots.end());
  double area = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    area += 0.5 * (length(knots[i - 1]) + length(knots[i])) * (knots[i] - knots[i - 1]);
  }
  return area / (m * m);
}

double regression_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = double(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// --- criteria ----------------------------------------------------------------

const std::vector<std::int64_t> kBatteryPrimes{3, 5, 7, 11, 13, 17, 31};

Outcome ff_identity() {
  std::mt19937_64 rng(1001);
  int sets = 0, mismatches = 0;
  for (std::int64_t p : kBatteryPrimes) {
    for (int i = 0; i < 100; ++i, ++sets) {
      const FiniteFieldSet b = battery_set(p, rng);
      std::uint64_t total = 0;
      for (std::int64_t u = 0; u < p; ++u) {
        for (std::int64_t v = 0; v < p; ++v) total += line_count(b, u, v);
      }
      const std::uint64_t expected = b.cardinality() * std::uint64_t(p);
      std::uint64_t library = 0;
      try {
        library = ff_double_count(b);
      } catch (const std::exception&) {
        library = ~std::uint64_t{0};
      }
      if (total != expected || library != expected) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(sets) + " sets, " + std::to_string(mismatches) + " mismatches"};
}

Outcome ff_chebyshev() {
  std::mt19937_64 rng(1001);
  int sets = 0, failures = 0;
  double worst_margin = 1.0;
  for (std::int64_t p : kBatteryPrimes) {
    const double k = std::log(double(p));
    for (int i = 0; i < 100; ++i, ++sets) {
      const FiniteFieldSet b = battery_set(p, rng);
      std::uint64_t good = 0;
      for (std::int64_t u = 0; u < p; ++u) {
        for (std::int64_t v = 0; v < p; ++v) {
          good += (long double)line_count(b, u, v) * p <= (long double)k * b.cardinality() ? 1 : 0;
        }
      }
      const std::uint64_t total = std::uint64_t(p * p);
      const bool holds = (long double)k * (total - good) <= (long double)total;
      const ChebyshevResult lib = ff_chebyshev_fraction(b, k);
      if (!holds || lib.good_lines != good || !lib.holds) ++failures;
      worst_margin = std::min(worst_margin, double(good) / double(total) - (1.0 - 1.0 / k));
    }
  }
  return {failures == 0, std::to_string(sets) + " sets, " + std::to_string(failures) +
                             " below 1 - 1/ln p; smallest margin " + fmt("%.4f", worst_margin)};
}

Outcome ff_affine() {
  std::mt19937_64 rng(1003);
  int cases = 0, mismatches = 0;
  for (std::int64_t p : {5, 11, 31}) {
    std::uniform_int_distribution<std::int64_t> elem(0, p - 1);
    std::uniform_int_distribution<int> size(0, int(p));
    for (int i = 0; i < 1000; ++i, ++cases) {
      std::vector<std::int64_t> a(std::size_t(size(rng))), b(std::size_t(size(rng)));
      for (auto& x : a) x = elem(rng);
      for (auto& x : b) x = elem(rng);
      const std::int64_t u = elem(rng), v = elem(rng);
      // distinct heights on the line y = u x + v through {(x, y) : x in B, y in A}
      const std::set<std::int64_t> as(a.begin(), a.end()), bs(b.begin(), b.end());
      std::set<std::int64_t> heights;
      for (std::int64_t x = 0; x < p; ++x) {
        const std::int64_t y = (u * x + v) % p;
        if (bs.count(x) && as.count(y)) heights.insert(y);
      }
      if (ff_affine_intersection(p, a, b, u, v) != heights.size()) ++mismatches;
    }
  }
  return {mismatches == 0, std::to_string(cases) + " cases, " + std::to_string(mismatches) + " mismatches"};
}

Outcome tube_width() {
  std::mt19937_64 rng(1004);
  std::uniform_real_distribution<double> log_u(std::log(1e-2), std::log(1e2)), vv(-1e3, 1e3);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const double u = std::exp(log_u(rng));
    const Tube t = Tube::standard(u, vv(rng));
    worst = std::max(worst, std::abs(tube_edge_distance(t) - 1.0));
    // from the edge heights: vertical gap times cos of the edge angle
    const double gap = t.upper_edge(1.0) - t.lower_edge(1.0);
    worst = std::max(worst, std::abs(gap / std::sqrt(1.0 + 1.0 / (u * u)) - 1.0));
  }
  return {worst <= 1e-9, "10000 tubes, max |width - 1| = " + fmt("%.3g", worst)};
}

Outcome example2_counts() {
  const PointSet stairs = gen_parabolic_staircase(1024);
  const ParabolicStaircase implicit(1024);
  int bad = 0;
  for (std::int64_t n = 1; n <= 1024; ++n) {
    const auto expected = std::uint64_t(n * (n + 1) / 2);
    const BoxSpec box = BoxSpec::first_quadrant(double(n * n));
    if (box_count(stairs, box) != expected || implicit.count_in_box(box) != expected) ++bad;
  }
  // brute force at the top scale
  std::uint64_t naive = 0;
  for (Point p : stairs.points()) naive += (p.x <= 1048576.0 && p.y <= 1048576.0) ? 1 : 0;
  if (naive != 524800) ++bad;
  return {bad == 0, "N = 1..1024, " + std::to_string(bad) + " mismatches"};
}

Outcome example2_dims() {
  const ParabolicStaircase stairs(1024);
  const double closed = std::log(524800.0) / std::log(1048576.0);
  const DimensionProfile whole = mass_dim_profile(stairs, {1048576.0});
  const double ratio_err = std::abs(whole.ratios[0] - closed);

  const DimensionProfile row = tube_dim_along(stairs, Tube::horizontal(-0.5), dyadic_scales(1 << 20));
  // the slice is {(m^2, 0)}: floor(sqrt l) points in [0,l]^2
  bool counts_ok = true;
  for (std::size_t i = 0; i < row.scales.size(); ++i) {
    counts_ok = counts_ok && row.counts[i] == std::uint64_t(std::floor(std::sqrt(row.scales[i])));
  }
  const bool ok = ratio_err <= 1e-12 && counts_ok && row.estimate >= 0.45 && row.estimate <= 0.55;
  return {ok, fmt("ratio %.6f (closed form %.6f, diff %.2g); slice estimate %.4f", whole.ratios[0], closed, ratio_err,
                  row.estimate)};
}

Outcome example3() {
  const double delta = 0.2;
  const ZigzagResult z = gen_zigzag(delta, 30);
  const double slope = std::tan(std::numbers::pi / 4 + delta);
  const double a = 1.0 - 1.0 / slope, b = slope - 1.0;
  // larger root of the characteristic polynomial of [[1+ab, a], [b, 1]]
  const double trace = 2.0 + a * b;
  const double lambda1 = 0.5 * (trace + std::sqrt(trace * trace - 4.0));
  const auto& c = z.trace.corners;
  const double ratio = c[30].x / c[29].x;
  const bool ratio_ok = std::abs(ratio / lambda1 - 1.0) <= 0.01 && !z.truncated;

  const std::vector<Point> pts(z.points.points().begin(), z.points.points().end());
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> pick(1.0, slope);
  bool counts_ok = true;
  double worst = 0.0;
  int over = 0;
  for (int s = 0; s < 20; ++s) {
    const double m = pick(rng);
    const double u = -1.0 / m;
    std::vector<double> log_l, log_count;
    for (std::size_t n = 1; n <= 30; ++n) {
      const double l = c[n].x;
      std::uint64_t count = 0;
      for (Point p : pts) count += (p.x <= l && p.y <= l && p.x >= 0 && p.y >= 0 && in_tube(u, 0.0, p)) ? 1 : 0;
      if (double(count) > 8.0 * std::log(l)) counts_ok = false;
      log_l.push_back(std::log(l));
      log_count.push_back(count > 1 ? std::log(double(count)) : 0.0);
    }
    // least-squares slope over the last ten levels
    const std::vector<double> tx(log_l.end() - 10, log_l.end()), ty(log_count.end() - 10, log_count.end());
    const double est = regression_slope(tx, ty);
    worst = std::max(worst, est);
    over += est > 0.15 ? 1 : 0;
  }
  const bool ok = ratio_ok && counts_ok && worst <= 0.15;
  return {ok, fmt("x30/x29 = %.6f vs lambda1 %.6f; counts <= 8 ln x_n: ", ratio, lambda1) +
                  (counts_ok ? "yes" : "no") + fmt("; worst estimate %.4f, %.0f of 20 tubes above 0.15", worst, over)};
}

Outcome survey_bound() {
  std::vector<Point> grid;
  for (int x = 0; x <= 256; ++x) {
    for (int y = 0; y <= 256; ++y) grid.push_back({double(x), double(y)});
  }
  double integral = 0.0;
  for (Point p : grid) integral += hit_measure(p.x, p.y, 256.0);
  SurveyConfig config;
  config.n = 256;
  config.m = 256.0;
  config.grid_u = 512;
  config.grid_v = 512;
  const SurveyReport s = survey_floor_lines(PointSet(grid), config);
  const double k = std::sqrt(std::log(256.0) * std::log(256.0));
  const bool ok = s.mean <= 256.0 + s.resolution_term && s.good_fraction >= 1.0 - 1.0 / k &&
                  std::abs(s.exact_mean - integral) <= 1e-9 * integral && integral <= double(grid.size()) / 256.0;
  return {ok, fmt("mean %.4f <= 256 + %.4f; good fraction %.4f >= %.4f", s.mean, s.resolution_term, s.good_fraction,
                  1.0 - 1.0 / k) +
                  fmt("; integral %.4f", integral)};
}

Outcome oracle_equivalence() {
  std::mt19937_64 rng(1009);
  int queries = 0, mismatches = 0;
  std::size_t largest = 0;
  for (int i = 0; i < 50; ++i) {
    const int target = i == 0 ? 100000 : std::uniform_int_distribution<int>(100, 100000)(rng);
    std::vector<Point> pts;
    if (i % 2 == 0) {
      std::uniform_int_distribution<std::int64_t> coord(0, 1200);
      std::set<std::pair<std::int64_t, std::int64_t>> cells;
      while (int(cells.size()) < target) cells.emplace(coord(rng), coord(rng));
      const bool jitter = i % 4 == 2;
      std::uniform_real_distribution<double> off(0.0, 0.999);
      for (auto [x, y] : cells) pts.push_back({double(x) + (jitter ? off(rng) : 0.0), double(y) + (jitter ? off(rng) : 0.0)});
    } else {
      const double alpha = std::uniform_real_distribution<double>(1.0, 1.9)(rng);
      const auto l_max = std::max<std::int64_t>(16, std::int64_t(std::pow(target / 5.0, 1.0 / alpha)));
      const PointSet g = gen_random_dimension(alpha, l_max, rng());
      pts.assign(g.points().begin(), g.points().end());
    }
    largest = std::max(largest, pts.size());
    const PointSet set(pts);
    double span = 0;
    for (Point p : pts) span = std::max({span, p.x, p.y});
    std::uniform_real_distribution<double> pos(-2.0, span + 2), len(0.0, span + 2), log_u(-4.6, 4.6), vv(-span, span);

    for (int q = 0; q < 3; ++q) {
      const double x0 = pos(rng), y0 = pos(rng), l = len(rng), su = (q % 2 ? -1 : 1) * std::exp(log_u(rng));
      std::uint64_t naive_win = 0, naive_slanted = 0;
      for (Point p : pts) {
        naive_win += (p.x >= x0 && p.x <= x0 + l && p.y >= y0 && p.y <= y0 + l) ? 1 : 0;
        naive_slanted += in_slanted(l, su, q - 1.0, p) ? 1 : 0;
      }
      queries += 2;
      mismatches += box_count(set, BoxSpec::window(x0, y0, l)) != naive_win;
      mismatches += box_count(set, BoxSpec::slanted(l, su, q - 1.0)) != naive_slanted;

      const double tv = vv(rng) / std::sqrt(1.0 + 1.0 / (su * su));
      std::vector<Point> naive_tube;
      for (Point p : pts) {
        if (in_tube(su, tv, p)) naive_tube.push_back(p);
      }
      const PointSet got = slice_tube(set, Tube::standard(su, tv));
      const PointSet expected(naive_tube);
      ++queries;
      mismatches += !std::equal(got.points().begin(), got.points().end(), expected.points().begin(),
                                expected.points().end());

      const double fu = std::exp(log_u(rng)), fv = std::uniform_real_distribution<double>(0, 50)(rng), x_max = len(rng);
      std::set<std::int64_t> heights;
      for (Point p : pts) {
        if (p.x >= 0 && p.x <= x_max && std::floor(fu * p.x + fv) == p.y) heights.insert(std::int64_t(p.y));
      }
      ++queries;
      mismatches += slice_floor_line(set, FloorLine::make(fu, fv), x_max) !=
                    std::vector<std::int64_t>(heights.begin(), heights.end());
    }
  }
  return {mismatches == 0, "50 sets (largest " + std::to_string(largest) + "), " + std::to_string(queries) +
                               " queries, " + std::to_string(mismatches) + " mismatches"};
}

Outcome levels() {
  const double m_slope = 2.0, u = -0.5, v = -0.5;
  const PointSet line = gen_unit_line(m_slope, 2048);
  const LevelProfile found = find_levels(line, u, v, {0.0, 1.0, 2048});
  const std::vector<Point> pts(line.points().begin(), line.points().end());
  bool strict = !found.levels.empty();
  for (auto level : found.levels) {
    const double m = double(level);
    std::uint64_t recount = 0;
    for (Point p : pts) recount += (in_tube(u, v, p) && in_slanted(m, u, v, p) && !in_slanted(m / 2, u, v, p)) ? 1 : 0;
    strict = strict && double(recount) > std::sqrt(m / 2.0);
  }
  // points at distances k^2 along the same line grow like sqrt(m) in the tube
  std::vector<Point> sparse;
  const double r = std::sqrt(1.0 + m_slope * m_slope);
  for (int k = 2; k * k <= 2048; ++k) sparse.push_back({k * k / r, k * k * m_slope / r});
  const LevelProfile none = find_levels(PointSet(sparse), u, v, {0.0, 1.0, 2048});
  return {strict && none.levels.empty(), std::to_string(found.levels.size()) +
                                             " levels, all strict on recount; " +
                                             std::to_string(none.levels.size()) + " levels on the sparse line"};
}

struct Criterion {
  int id;
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria{
      {1, "ff-identity", ff_identity},       {2, "ff-chebyshev", ff_chebyshev},
      {3, "ff-affine", ff_affine},           {4, "tube-width", tube_width},
      {5, "example2-counts", example2_counts}, {6, "example2", example2_dims},
      {7, "example3", example3},             {8, "survey-bound", survey_bound},
      {9, "oracle", oracle_equivalence},     {10, "levels", levels},
  };
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!wanted.empty() && !wanted.count(c.id)) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s [%2d] %-16s %s (%.1fs)\n", o.passed ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs);
    std::fflush(stdout);
    failed += o.passed ? 0 : 1;
  }
  return failed;
}
