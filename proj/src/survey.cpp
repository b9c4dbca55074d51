#include "latslice/survey.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "latslice/errors.hpp"
#include "latslice/parallel.hpp"

namespace latslice {

bool SurveyReport::mean_within_bound() const {
  const double slack = monte_carlo ? 3.0 * std_error : resolution_term;
  return mean <= bound + slack;
}

bool SurveyReport::good_fraction_within_bound() const {
  if (set_size == 0) return good_fraction == 1.0;
  const double slack = monte_carlo ? 3.0 * std_error / threshold : resolution_term / threshold;
  return good_fraction >= markov_floor - slack;
}

double floor_line_hit_measure(Point p, double m) {
  const double a = p.x;
  const double b = p.y;
  if (b != std::floor(b)) return 0.0;
  // Length of {v in (0,M] : b - u*a <= v < b + 1 - u*a}; piecewise linear in u.
  auto length = [&](double u) {
    const double lo = std::max(0.0, b - u * a);
    const double hi = std::min(m, b + 1.0 - u * a);
    return std::max(0.0, hi - lo);
  };
  std::vector<double> knots{0.0, m};
  if (a > 0.0) {
    for (double c : {b, b - m, b + 1.0, b + 1.0 - m}) {
      const double u = c / a;
      if (u > 0.0 && u < m) knots.push_back(u);
    }
  }
  std::sort(knots.begin(), knots.end());
  double area = 0.0;
  for (std::size_t i = 1; i < knots.size(); ++i) {
    const double w = knots[i] - knots[i - 1];
    area += 0.5 * w * (length(knots[i - 1]) + length(knots[i]));
  }
  return area / (m * m);
}

namespace {

// Upper bound on how many grid cells the line v = c - u*a crosses inside (0,M]^2.
double cells_crossed(double a, double c, double m, double hu, double hv) {
  double u0 = 0.0;
  double u1 = m;
  if (a > 0.0) {
    u0 = std::max(u0, (c - m) / a);
    u1 = std::min(u1, c / a);
  } else if (!(c > 0.0 && c <= m)) {
    return 0.0;
  }
  if (!(u1 >= u0)) return 0.0;
  const double ulen = u1 - u0;
  const double vlen = std::min(m, a * ulen);
  return std::floor(ulen / hu) + std::floor(vlen / hv) + 3.0;
}

}  // namespace

SurveyReport survey_floor_lines(const PointSet& set, const SurveyConfig& config) {
  if (config.n < 2) throw ConfigError("N: must be at least 2");
  if (!(config.m >= 1.0) || !std::isfinite(config.m)) throw ConfigError("M: must be at least 1");
  if (config.mc_samples < 0) throw ConfigError("mc: sample count must be nonnegative");
  if (config.mc_samples == 0 && (config.grid_u < 1 || config.grid_v < 1)) {
    throw ConfigError("grid: cell counts must be positive");
  }
  if (config.k_threshold && !(*config.k_threshold > 0.0)) throw ConfigError("k: must be positive");

  const double side = static_cast<double>(config.n);
  const PointSet window = set.filter([&](const Point& p) {
    return p.x >= 0.0 && p.x <= side && p.y >= 0.0 && p.y <= side;
  });

  SurveyReport report;
  report.config = config;
  report.monte_carlo = config.mc_samples > 0;
  report.set_size = window.size();
  report.k = config.k_threshold.value_or(std::sqrt(std::log(config.m) * std::log(side)));
  if (!(report.k > 0.0)) throw ConfigError("k: default sqrt(ln M ln N) vanishes for M = 1; pass k explicitly");
  report.bound = static_cast<double>(report.set_size) / config.m;
  report.threshold = report.k * report.bound;
  report.markov_floor = 1.0 - 1.0 / report.k;

  const double m = config.m;
  for (const Point& p : window.points()) report.exact_mean += floor_line_hit_measure(p, m);

  auto count_at = [&](double u, double v) {
    return static_cast<std::uint32_t>(floor_line_count(window, FloorLine{u, v}, side));
  };

  std::vector<std::uint32_t> cells;
  std::size_t total_cells = 0;
  if (report.monte_carlo) {
    total_cells = static_cast<std::size_t>(config.mc_samples);
    std::vector<std::pair<double, double>> samples(total_cells);
    std::mt19937_64 rng(config.seed);
    for (auto& [u, v] : samples) {
      u = m * ((static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53);
      v = m * ((static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53);
    }
    cells.resize(total_cells);
    parallel_for(total_cells, [&](std::size_t i) { cells[i] = count_at(samples[i].first, samples[i].second); }, 64);
  } else {
    const auto gu = static_cast<std::size_t>(config.grid_u);
    const auto gv = static_cast<std::size_t>(config.grid_v);
    const double hu = m / static_cast<double>(gu);
    const double hv = m / static_cast<double>(gv);
    total_cells = gu * gv;
    cells.resize(total_cells);
    parallel_for(gu, [&](std::size_t i) {
      const double u = (static_cast<double>(i) + 0.5) * hu;
      for (std::size_t j = 0; j < gv; ++j) {
        cells[i * gv + j] = count_at(u, (static_cast<double>(j) + 0.5) * hv);
      }
    });
    double crossed = 0.0;
    for (const Point& p : window.points()) {
      if (p.y != std::floor(p.y)) continue;
      crossed += cells_crossed(p.x, p.y, m, hu, hv) + cells_crossed(p.x, p.y + 1.0, m, hu, hv);
    }
    report.resolution_term = crossed * hu * hv / (m * m);
  }

  std::uint64_t sum = 0;
  long double sum_sq = 0.0L;
  std::uint64_t exceptional = 0;
  for (std::uint32_t c : cells) {
    sum += c;
    sum_sq += static_cast<long double>(c) * c;
    report.max_count = std::max<std::uint64_t>(report.max_count, c);
    if (static_cast<double>(c) > report.threshold) ++exceptional;
  }
  const auto n = static_cast<double>(total_cells);
  report.mean = static_cast<double>(sum) / n;
  if (report.monte_carlo && total_cells > 1) {
    const double var = static_cast<double>((sum_sq - static_cast<long double>(sum) * sum / n) / (n - 1.0));
    report.std_error = std::sqrt(std::max(0.0, var) / n);
  }
  report.exception_fraction = static_cast<double>(exceptional) / n;
  report.good_fraction = 1.0 - report.exception_fraction;
  if (config.keep_cells) report.cells = std::move(cells);
  return report;
}

DimensionProfile tube_dim_along(const PointSet& set, const Tube& tube, const std::vector<double>& scales,
                                const ProfileOptions& options) {
  return mass_dim_profile(slice_tube(set, tube), scales, false, options);
}

DimensionProfile tube_dim_along(const ImplicitSet& set, const Tube& tube, const std::vector<double>& scales,
                                const ProfileOptions& options) {
  std::vector<std::uint64_t> counts(scales.size());
  parallel_for(scales.size(),
               [&](std::size_t i) { counts[i] = set.count_in_tube(tube, BoxSpec::first_quadrant(scales[i])); });
  return make_profile(scales, std::move(counts), false, options);
}

RayScanReport exception_ray_scan(const PointSet& set, double v0, double u_lo, double u_hi,
                                 std::int64_t u_samples, double threshold_dim, const std::vector<double>& scales,
                                 const ProfileOptions& options) {
  if (u_samples < 1) throw ConfigError("u_samples: must be at least 1");
  if (!(u_hi > u_lo)) throw ConfigError("u_interval: need u_lo < u_hi");
  if (u_lo <= 0.0 && u_hi >= 0.0) throw ConfigError("u_interval: must not contain 0");
  RayScanReport report;
  report.v0 = v0;
  report.u_lo = u_lo;
  report.u_hi = u_hi;
  report.threshold_dim = threshold_dim;
  report.scales = scales;
  const auto n = static_cast<std::size_t>(u_samples);
  report.us.resize(n);
  report.estimates.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    report.us[i] = u_lo + (u_hi - u_lo) * (static_cast<double>(i) + 0.5) / static_cast<double>(n);
  }
  parallel_for(n, [&](std::size_t i) {
    report.estimates[i] = tube_dim_along(set, Tube::standard(report.us[i], v0), scales, options).estimate;
  });
  const auto exceptional = std::count_if(report.estimates.begin(), report.estimates.end(),
                                         [&](double e) { return e > threshold_dim; });
  report.exceptional_fraction = static_cast<double>(exceptional) / static_cast<double>(n);
  return report;
}

}  // namespace latslice
