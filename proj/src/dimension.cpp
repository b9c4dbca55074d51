#include "latslice/dimension.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <sstream>

#include "latslice/errors.hpp"
#include "latslice/parallel.hpp"

namespace latslice {

EstimateMethod parse_estimate_method(const std::string& name) {
  if (name == "ratio_max_tail" || name == "max") return EstimateMethod::ratio_max_tail;
  if (name == "regression_tail" || name == "regression") return EstimateMethod::regression_tail;
  throw ConfigError("method: expected ratio_max_tail or regression_tail, got '" + name + "'");
}

std::string to_string(EstimateMethod method) {
  return method == EstimateMethod::ratio_max_tail ? "ratio_max_tail" : "regression_tail";
}

std::vector<double> dyadic_scales(double max_scale) {
  if (!(max_scale >= 2.0) || !std::isfinite(max_scale)) throw ConfigError("scales: dyadic maximum must be >= 2");
  std::vector<double> out;
  for (double s = 2.0; s <= max_scale; s *= 2.0) out.push_back(s);
  return out;
}

std::vector<double> parse_scales(const std::string& text) {
  const std::string prefix = "dyadic:";
  if (text.rfind(prefix, 0) == 0) {
    const std::string rest = text.substr(prefix.size());
    double max = 0.0;
    const auto [ptr, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), max);
    if (ec != std::errc{} || ptr != rest.data() + rest.size()) {
      throw ConfigError("scales: cannot parse dyadic maximum '" + rest + "'");
    }
    return dyadic_scales(max);
  }
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), value);
    if (ec != std::errc{} || ptr != item.data() + item.size() || !(value > 0.0)) {
      throw ConfigError("scales: bad entry '" + item + "'");
    }
    if (!out.empty() && value <= out.back()) throw ConfigError("scales: must be strictly increasing");
    out.push_back(value);
  }
  if (out.empty()) throw ConfigError("scales: empty list");
  return out;
}

double log_ratio(std::uint64_t count, double denominator) {
  if (count <= 1 || denominator <= 1.0) return 0.0;
  return std::log(static_cast<double>(count)) / std::log(denominator);
}

DimensionProfile make_profile(std::vector<double> scales, std::vector<std::uint64_t> counts, bool centered,
                              const ProfileOptions& options) {
  if (scales.empty()) throw ConfigError("scales: need at least one scale");
  if (scales.size() != counts.size()) throw ConfigError("profile: scales and counts differ in length");
  for (std::size_t i = 1; i < scales.size(); ++i) {
    if (!(scales[i] > scales[i - 1])) throw ConfigError("scales: must be strictly increasing");
  }
  DimensionProfile profile;
  profile.scales = std::move(scales);
  profile.counts = std::move(counts);
  profile.centered = centered;
  profile.method = options.method;

  const std::size_t n = profile.scales.size();
  profile.ratios.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double denom = centered ? 2.0 * profile.scales[i] : profile.scales[i];
    profile.ratios[i] = log_ratio(profile.counts[i], denom);
  }

  const std::size_t window = options.tail_window == 0 ? (n + 2) / 3 : std::min(options.tail_window, n);
  profile.tail_window = window;
  const std::size_t first = n - window;

  profile.ratio_max_tail = *std::max_element(profile.ratios.begin() + static_cast<std::ptrdiff_t>(first),
                                             profile.ratios.end());

  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t used = 0;
  for (std::size_t i = first; i < n; ++i) {
    if (profile.counts[i] == 0) continue;
    const double x = std::log(centered ? 2.0 * profile.scales[i] : profile.scales[i]);
    const double y = std::log(static_cast<double>(profile.counts[i]));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
    ++used;
  }
  if (used >= 2) {
    const double un = static_cast<double>(used);
    const double denom = un * sxx - sx * sx;
    profile.regression_tail = denom > 0.0 ? (un * sxy - sx * sy) / denom : 0.0;
  }
  profile.estimate =
      options.method == EstimateMethod::ratio_max_tail ? profile.ratio_max_tail : profile.regression_tail;
  return profile;
}

DimensionProfile mass_dim_profile(const PointSet& set, const std::vector<double>& scales, bool centered,
                                  const ProfileOptions& options) {
  std::vector<std::uint64_t> counts(scales.size());
  parallel_for(scales.size(), [&](std::size_t i) {
    counts[i] = box_count(set, centered ? BoxSpec::centered(scales[i]) : BoxSpec::first_quadrant(scales[i]));
  });
  return make_profile(scales, std::move(counts), centered, options);
}

DimensionProfile mass_dim_profile(const ImplicitSet& set, const std::vector<double>& scales, bool centered,
                                  const ProfileOptions& options) {
  std::vector<std::uint64_t> counts(scales.size());
  parallel_for(scales.size(), [&](std::size_t i) {
    counts[i] = set.count_in_box(centered ? BoxSpec::centered(scales[i]) : BoxSpec::first_quadrant(scales[i]));
  });
  return make_profile(scales, std::move(counts), centered, options);
}

DimensionProfile counting_dim_profile(const PointSet& set, const std::vector<double>& sizes,
                                      const ProfileOptions& options) {
  std::vector<std::uint64_t> counts(sizes.size(), 0);
  for (std::size_t i = 0; i < sizes.size(); ++i) {
    const double s = sizes[i];
    if (!(s > 0.0)) throw ConfigError("scales: window sizes must be positive");
    const double h = s / 2.0;
    std::vector<std::pair<std::int64_t, std::int64_t>> placements;
    // Neighbouring points in index order usually share their placement
    // ranges; skipping repeats keeps large windows over dense sets cheap.
    std::array<std::int64_t, 4> previous{1, 0, 1, 0};
    for (const Point& p : set.points()) {
      const auto kx_lo = static_cast<std::int64_t>(std::ceil((p.x - s) / h));
      const auto kx_hi = static_cast<std::int64_t>(std::floor(p.x / h));
      const auto ky_lo = static_cast<std::int64_t>(std::ceil((p.y - s) / h));
      const auto ky_hi = static_cast<std::int64_t>(std::floor(p.y / h));
      const std::array<std::int64_t, 4> ranges{kx_lo, kx_hi, ky_lo, ky_hi};
      if (ranges == previous) continue;
      previous = ranges;
      for (auto kx = kx_lo; kx <= kx_hi; ++kx) {
        for (auto ky = ky_lo; ky <= ky_hi; ++ky) placements.emplace_back(kx, ky);
      }
    }
    std::sort(placements.begin(), placements.end());
    placements.erase(std::unique(placements.begin(), placements.end()), placements.end());

    std::vector<std::uint64_t> found(placements.size());
    parallel_for(
        placements.size(),
        [&](std::size_t j) {
          const auto [kx, ky] = placements[j];
          found[j] = box_count(set, BoxSpec::window(static_cast<double>(kx) * h, static_cast<double>(ky) * h, s));
        },
        256);
    for (auto c : found) counts[i] = std::max(counts[i], c);
  }
  return make_profile(sizes, std::move(counts), false, options);
}

DimensionProfile dim_1d_profile(const std::vector<std::int64_t>& values, const std::vector<double>& scales,
                                const ProfileOptions& options) {
  auto sorted = values;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  const auto first = std::lower_bound(sorted.begin(), sorted.end(), std::int64_t{1});
  std::vector<std::uint64_t> counts;
  counts.reserve(scales.size());
  for (double n : scales) {
    const auto limit = static_cast<std::int64_t>(std::floor(n));
    const auto last = std::upper_bound(first, sorted.end(), limit);
    counts.push_back(static_cast<std::uint64_t>(std::max<std::ptrdiff_t>(0, last - first)));
  }
  return make_profile(scales, std::move(counts), false, options);
}

FiniteFieldDimension ff_dim(std::uint64_t cardinality, std::int64_t p) {
  if (p < 2) throw ConfigError("p: must be at least 2");
  if (cardinality == 0) return {0.0, true};
  return {std::log(static_cast<double>(cardinality)) / std::log(static_cast<double>(p)), false};
}

namespace {

// Half-open range [lo, hi) of box sizes m for which q lies in B_m \ B_{m/2}.
// q is in B_m iff m >= along and m >= 2d, where d = |across - centre|;
// doubling is exact, so these match box_contains bit for bit.
struct AnnulusRange {
  double lo;
  double hi;
};

AnnulusRange annulus_range(double u, double v, Point q) {
  const SlantedCoords sc = slanted_coords(u, q);
  const double centre = (u > 0.0 ? 1.0 : -1.0) * (v + 0.5);
  const double d = std::abs(sc.across - centre);
  if (sc.along < 0.0) return {-1.0, -1.0};  // below the line the boxes start on
  return {std::max(sc.along, 2.0 * d), std::max(2.0 * sc.along, 4.0 * d)};
}

}  // namespace

std::vector<std::uint64_t> annulus_profile(const PointSet& set, double u, double v,
                                           const std::vector<double>& levels) {
  for (std::size_t i = 1; i < levels.size(); ++i) {
    if (!(levels[i] > levels[i - 1])) throw ConfigError("levels: must be strictly increasing");
  }
  const Tube tube = Tube::standard(u, v);
  std::vector<std::int64_t> diff(levels.size() + 1, 0);
  const PointSet slice = slice_tube(set, tube);
  for (const Point& q : slice.points()) {
    const AnnulusRange r = annulus_range(u, v, q);
    if (r.lo < 0.0) continue;
    const auto a = std::lower_bound(levels.begin(), levels.end(), r.lo) - levels.begin();
    const auto b = std::lower_bound(levels.begin(), levels.end(), r.hi) - levels.begin();
    if (a < b) {
      ++diff[static_cast<std::size_t>(a)];
      --diff[static_cast<std::size_t>(b)];
    }
  }
  std::vector<std::uint64_t> counts(levels.size());
  std::int64_t running = 0;
  for (std::size_t i = 0; i < levels.size(); ++i) {
    running += diff[i];
    counts[i] = static_cast<std::uint64_t>(running);
  }
  return counts;
}

LevelProfile find_levels(const PointSet& set, double u, double v, const LevelSearchConfig& config) {
  if (!(config.psi > 0.0)) throw ConfigError("psi: must be positive");
  if (!(config.alpha >= 0.0)) throw ConfigError("alpha: must be nonnegative");
  if (config.search_bound < 1) throw ConfigError("search_bound: must be at least 1");
  LevelProfile out;
  out.u = u;
  out.v = v;
  out.exponent = config.alpha + config.psi / 2.0;

  std::vector<double> heights(static_cast<std::size_t>(config.search_bound));
  for (std::size_t i = 0; i < heights.size(); ++i) heights[i] = static_cast<double>(i + 1);
  const auto counts = annulus_profile(set, u, v, heights);
  for (std::size_t i = 0; i < heights.size(); ++i) {
    const double threshold = std::pow(heights[i] / 2.0, out.exponent);
    if (static_cast<double>(counts[i]) > threshold) {
      out.levels.push_back(static_cast<std::int64_t>(i + 1));
      out.annulus_counts.push_back(counts[i]);
    }
  }
  return out;
}

}  // namespace latslice
