#pragma once

/**
 * @file dimension.hpp
 * @brief Finite-scale dimension estimators and the slanted-annulus level
 * finder.
 *
 * A profile records, for an increasing list of scales l, the count of points
 * in the box of side l and the ratio log(count) / log(l). Two tail estimates
 * stand in for the limsup: the largest ratio over the tail window, and the
 * least-squares slope of log(count) against log(l) over the same window.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "latslice/generators.hpp"
#include "latslice/geometry.hpp"

namespace latslice {

enum class EstimateMethod { ratio_max_tail, regression_tail };

[[nodiscard]] EstimateMethod parse_estimate_method(const std::string& name);
[[nodiscard]] std::string to_string(EstimateMethod method);

struct ProfileOptions {
  EstimateMethod method = EstimateMethod::ratio_max_tail;
  /// Number of trailing scales in the tail window; 0 means ceil(#scales / 3).
  std::size_t tail_window = 0;
};

struct DimensionProfile {
  std::vector<double> scales;
  std::vector<std::uint64_t> counts;
  std::vector<double> ratios;
  EstimateMethod method = EstimateMethod::ratio_max_tail;
  double estimate = 0.0;  // the value of `method`
  double ratio_max_tail = 0.0;
  double regression_tail = 0.0;
  std::size_t tail_window = 0;
  bool centered = false;  // ratios use log(2l) as the denominator
};

/// 2, 4, 8, ... up to and including max_scale when it is a power of two.
[[nodiscard]] std::vector<double> dyadic_scales(double max_scale);

/// "dyadic:<max>" or a comma-separated list of increasing positive numbers.
[[nodiscard]] std::vector<double> parse_scales(const std::string& text);

/// log(count) / log(denominator); 0 when count <= 1 or denominator <= 1.
[[nodiscard]] double log_ratio(std::uint64_t count, double denominator);

/// Builds ratios and both tail estimates from raw counts.
[[nodiscard]] DimensionProfile make_profile(std::vector<double> scales, std::vector<std::uint64_t> counts,
                                            bool centered, const ProfileOptions& options = {});

/// Mass profile with boxes [0,l]^2, or [-l,l]^2 when centered.
[[nodiscard]] DimensionProfile mass_dim_profile(const PointSet& set, const std::vector<double>& scales,
                                                bool centered = false, const ProfileOptions& options = {});
[[nodiscard]] DimensionProfile mass_dim_profile(const ImplicitSet& set, const std::vector<double>& scales,
                                                bool centered = false, const ProfileOptions& options = {});

/// Largest count over closed windows [x0, x0+s] x [y0, y0+s] whose corners
/// lie on the grid of stride s/2 anchored at the origin. Only placements that
/// contain at least one point are tried, so the search is exhaustive over
/// that grid; it is still a lower bound for arbitrary placements.
[[nodiscard]] DimensionProfile counting_dim_profile(const PointSet& set, const std::vector<double>& sizes,
                                                    const ProfileOptions& options = {});

/// Profile of |A ∩ {1..N}| against N.
[[nodiscard]] DimensionProfile dim_1d_profile(const std::vector<std::int64_t>& values,
                                              const std::vector<double>& scales,
                                              const ProfileOptions& options = {});

struct FiniteFieldDimension {
  double value = 0.0;
  bool empty = false;  // |B| = 0, reported as 0
};

/// log|B| / log p.
[[nodiscard]] FiniteFieldDimension ff_dim(std::uint64_t cardinality, std::int64_t p);

/// Counts of points in (B_m(u,v) \ B_{m/2}(u,v)) ∩ set ∩ t_{u,v} for each m.
[[nodiscard]] std::vector<std::uint64_t> annulus_profile(const PointSet& set, double u, double v,
                                                         const std::vector<double>& levels);

struct LevelSearchConfig {
  double alpha = 0.0;
  double psi = 1.0;
  std::int64_t search_bound = 1024;
};

struct LevelProfile {
  double u = 1.0;
  double v = 0.0;
  double exponent = 0.0;  // alpha + psi/2
  std::vector<std::int64_t> levels;
  std::vector<std::uint64_t> annulus_counts;
};

/// Every integer m in [1, search_bound] whose annulus count exceeds
/// (m/2)^(alpha + psi/2), in increasing order.
[[nodiscard]] LevelProfile find_levels(const PointSet& set, double u, double v, const LevelSearchConfig& config);

}  // namespace latslice
