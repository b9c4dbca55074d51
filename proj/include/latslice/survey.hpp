#pragma once

/**
 * @file survey.hpp
 * @brief Parameter-space experiments over floor lines y = floor(u*x + v)
 * and tubes t_{u,v}.
 *
 * survey_floor_lines averages |E_N ∩ floor-line(u,v)| over (u,v) in (0,M]^2
 * by the midpoint rule on a gu x gv grid or by seeded Monte-Carlo. The grid
 * report carries a rigorous bound on the midpoint-rule error and, for
 * comparison, the exact value of the integral computed point by point.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include "latslice/dimension.hpp"
#include "latslice/generators.hpp"
#include "latslice/geometry.hpp"

namespace latslice {

struct SurveyConfig {
  std::int64_t n = 64;        // E_N = set ∩ [0,N]^2
  double m = 64.0;            // parameter box (0,M]^2
  std::int64_t grid_u = 64;
  std::int64_t grid_v = 64;
  std::int64_t mc_samples = 0;  // > 0 selects Monte-Carlo mode
  std::uint64_t seed = 0;
  std::optional<double> k_threshold;  // default sqrt(ln M * ln N)
  bool keep_cells = false;
};

struct SurveyReport {
  SurveyConfig config;
  bool monte_carlo = false;
  std::uint64_t set_size = 0;     // |E_N|
  double k = 0.0;
  double bound = 0.0;             // |E_N| / M
  double threshold = 0.0;         // k * bound
  double mean = 0.0;
  double std_error = 0.0;         // Monte-Carlo only
  double exception_fraction = 0.0;
  double good_fraction = 1.0;
  double markov_floor = 0.0;      // 1 - 1/k
  double resolution_term = 0.0;   // grid: bound on |mean - integral|
  double exact_mean = 0.0;        // the integral, evaluated exactly
  std::uint64_t max_count = 0;
  std::vector<std::uint32_t> cells;  // row-major in u, when keep_cells

  /// mean <= bound + resolution_term (Monte-Carlo: + 3 standard errors).
  [[nodiscard]] bool mean_within_bound() const;
  /// good_fraction >= 1 - 1/k - resolution_term / threshold.
  [[nodiscard]] bool good_fraction_within_bound() const;
};

/// Exact (1/M^2) * area of {(u,v) in (0,M]^2 : floor(u*a + v) = b}.
[[nodiscard]] double floor_line_hit_measure(Point p, double m);

[[nodiscard]] SurveyReport survey_floor_lines(const PointSet& set, const SurveyConfig& config);

/// Mass profile of set ∩ tube with first-quadrant boxes.
[[nodiscard]] DimensionProfile tube_dim_along(const PointSet& set, const Tube& tube,
                                              const std::vector<double>& scales,
                                              const ProfileOptions& options = {});
[[nodiscard]] DimensionProfile tube_dim_along(const ImplicitSet& set, const Tube& tube,
                                              const std::vector<double>& scales,
                                              const ProfileOptions& options = {});

struct RayScanReport {
  double v0 = 0.0;
  double u_lo = 0.0;
  double u_hi = 0.0;
  double threshold_dim = 0.0;
  std::vector<double> scales;
  std::vector<double> us;
  std::vector<double> estimates;
  double exceptional_fraction = 0.0;
};

/// Samples u at the midpoints of u_samples equal pieces of [u_lo, u_hi] and
/// reports the fraction whose tube_dim_along estimate exceeds threshold_dim.
/// This is a finite-scale diagnostic, not a measure computation.
[[nodiscard]] RayScanReport exception_ray_scan(const PointSet& set, double v0, double u_lo, double u_hi,
                                               std::int64_t u_samples, double threshold_dim,
                                               const std::vector<double>& scales,
                                               const ProfileOptions& options = {});

}  // namespace latslice
