#include "latslice/generators.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <sstream>
#include <tuple>

#include "latslice/errors.hpp"

namespace latslice {

namespace {

constexpr double kExactIntegerLimit = 9007199254740992.0;  // 2^53

std::int64_t to_int(double v) { return static_cast<std::int64_t>(v); }

std::string format_estimate(double v) {
  std::ostringstream out;
  out.precision(3);
  out << v;
  return out.str();
}

// 2^(2^e) as an exact integer; throws when it leaves the exact range.
std::int64_t tower(std::int64_t e) {
  if (e < 0 || e > 5) throw ConfigError("height 2^(2^" + std::to_string(e) + ") is outside the exact range");
  return std::int64_t{1} << (std::int64_t{1} << e);
}

double uniform_open_closed(std::mt19937_64& rng) {
  // (0, 1] with 53 random bits.
  return (static_cast<double>(rng() >> 11) + 1.0) * 0x1.0p-53;
}

// Number of failures before the first success of a Bernoulli(p) stream.
std::uint64_t geometric_skip(std::mt19937_64& rng, double p) {
  if (p >= 1.0) return 0;
  const double g = std::floor(std::log(uniform_open_closed(rng)) / std::log1p(-p));
  if (!(g < 1.8e19)) return std::numeric_limits<std::uint64_t>::max();
  return static_cast<std::uint64_t>(g);
}

}  // namespace

GeneratorKind parse_generator_kind(const std::string& name) {
  static const std::pair<const char*, GeneratorKind> kinds[] = {
      {"unit_line", GeneratorKind::unit_line},
      {"parabolic_staircase", GeneratorKind::parabolic_staircase},
      {"zigzag", GeneratorKind::zigzag},
      {"cone_annuli", GeneratorKind::cone_annuli},
      {"cone_staircase", GeneratorKind::cone_staircase},
      {"cone_fixed_width", GeneratorKind::cone_fixed_width},
      {"cartesian", GeneratorKind::cartesian},
      {"random_dim", GeneratorKind::random_dim},
  };
  for (const auto& [key, kind] : kinds) {
    if (name == key) return kind;
  }
  throw ConfigError("kind: unknown generator '" + name + "'");
}

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::unit_line: return "unit_line";
    case GeneratorKind::parabolic_staircase: return "parabolic_staircase";
    case GeneratorKind::zigzag: return "zigzag";
    case GeneratorKind::cone_annuli: return "cone_annuli";
    case GeneratorKind::cone_staircase: return "cone_staircase";
    case GeneratorKind::cone_fixed_width: return "cone_fixed_width";
    case GeneratorKind::cartesian: return "cartesian";
    case GeneratorKind::random_dim: return "random_dim";
  }
  return "unknown";
}

GenerationMode parse_generation_mode(const std::string& name) {
  if (name == "materialize") return GenerationMode::materialize;
  if (name == "implicit") return GenerationMode::implicit;
  throw ConfigError("mode: expected 'materialize' or 'implicit', got '" + name + "'");
}

// ---------------------------------------------------------------------------
// Unit-spaced line

PointSet gen_unit_line(double m, std::int64_t count) {
  if (!(m > 0.0) || !std::isfinite(m)) throw ConfigError("m: slope must be positive");
  if (count < 1) throw ConfigError("count: must be at least 1");
  const double r = std::sqrt(1.0 + m * m);
  std::vector<Point> points(static_cast<std::size_t>(count));
  // Rounding can leave neighbours a few ulps short of 1; stretch the step
  // by ulps until every gap is >= 1 in floating point.
  for (double stretch = 1.0;; stretch *= 1.0 + 0x1p-52) {
    const double c = stretch / r;
    const double s = stretch * m / r;
    bool short_gap = false;
    for (std::int64_t k = 0; k < count; ++k) {
      const double d = static_cast<double>(k);
      auto& p = points[static_cast<std::size_t>(k)];
      p = {d * c, d * s};
      if (k > 0) {
        const Point& q = points[static_cast<std::size_t>(k - 1)];
        short_gap = short_gap || std::hypot(p.x - q.x, p.y - q.y) < 1.0;
      }
    }
    if (!short_gap) break;
  }
  return PointSet(std::move(points));
}

// ---------------------------------------------------------------------------
// Parabolic staircase

ParabolicStaircase::ParabolicStaircase(std::int64_t columns) : columns_(columns) {
  if (columns < 1) throw ConfigError("columns: M must be at least 1");
  if (columns > (std::int64_t{1} << 26)) throw ConfigError("columns: M too large for exact coordinates");
}

bool ParabolicStaircase::contains(Point p) const {
  if (p.x < 1.0 || p.y < 0.0 || p.x != std::floor(p.x) || p.y != std::floor(p.y)) return false;
  const auto x = to_int(p.x);
  auto m = static_cast<std::int64_t>(std::llround(std::sqrt(p.x)));
  if (m * m != x || m > columns_) return false;
  return to_int(p.y) <= m - 1;
}

namespace {

// Smallest m >= 0 with m*m >= x (x may be fractional).
std::int64_t ceil_sqrt(double x) {
  if (x <= 0.0) return 0;
  auto m = static_cast<std::int64_t>(std::sqrt(x));
  while (static_cast<double>(m) * static_cast<double>(m) < x) ++m;
  while (m > 0 && static_cast<double>(m - 1) * static_cast<double>(m - 1) >= x) --m;
  return m;
}

// Largest m >= 0 with m*m <= x, or -1 when x < 0.
std::int64_t floor_sqrt(double x) {
  if (x < 0.0) return -1;
  auto m = static_cast<std::int64_t>(std::sqrt(x));
  while (static_cast<double>(m) * static_cast<double>(m) > x) --m;
  while (static_cast<double>(m + 1) * static_cast<double>(m + 1) <= x) ++m;
  return m;
}

}  // namespace

std::uint64_t ParabolicStaircase::count_in_box(const BoxSpec& box) const {
  if (box.kind == BoxKind::slanted) throw ConfigError("box: slanted boxes need a materialised set");
  const Rect r = box.bounds();
  const std::int64_t m_lo = std::max<std::int64_t>(1, ceil_sqrt(r.xmin));
  const std::int64_t m_hi = std::min<std::int64_t>(columns_, floor_sqrt(r.xmax));
  const std::int64_t y0 = std::max<std::int64_t>(0, to_int(std::ceil(r.ymin)));
  const std::int64_t y1 = to_int(std::floor(std::min(r.ymax, 1e18)));
  if (m_hi < m_lo || y1 < y0) return 0;

  // Column m holds heights 0..m-1, so it contributes min(y1, m-1) - y0 + 1
  // when positive: nothing for m <= y0, m - y0 up to m = y1 + 1, then flat.
  std::uint64_t total = 0;
  const std::int64_t ramp_lo = std::max(m_lo, y0 + 1);
  const std::int64_t ramp_hi = std::min(m_hi, y1 + 1);
  if (ramp_lo <= ramp_hi) {
    const std::int64_t n = ramp_hi - ramp_lo + 1;
    total += static_cast<std::uint64_t>((ramp_lo - y0 + ramp_hi - y0) * n / 2);
  }
  const std::int64_t flat_lo = std::max(m_lo, y1 + 2);
  if (flat_lo <= m_hi) {
    total += static_cast<std::uint64_t>((m_hi - flat_lo + 1) * (y1 - y0 + 1));
  }
  return total;
}

std::uint64_t ParabolicStaircase::count_in_tube(const Tube& tube, const BoxSpec& box) const {
  const Rect r = box.bounds();
  const std::int64_t m_lo = std::max<std::int64_t>(1, ceil_sqrt(r.xmin));
  const std::int64_t m_hi = std::min<std::int64_t>(columns_, floor_sqrt(r.xmax));
  std::uint64_t count = 0;
  for (std::int64_t m = m_lo; m <= m_hi; ++m) {
    const double x = static_cast<double>(m * m);
    const double lo = std::max({tube.lower_edge(x), r.ymin - 1.0, -1.0});
    const double hi = std::min({tube.upper_edge(x), r.ymax + 1.0, static_cast<double>(m)});
    for (double y = std::floor(lo); y <= hi; y += 1.0) {
      const Point p{x, y};
      if (y >= 0.0 && y <= static_cast<double>(m - 1) && tube_contains(tube, p) && box_contains(box, p)) {
        ++count;
      }
    }
  }
  return count;
}

Rect ParabolicStaircase::extent() const {
  const auto m = static_cast<double>(columns_);
  return {1.0, 0.0, m * m, m - 1.0};
}

std::uint64_t ParabolicStaircase::size() const {
  const auto m = static_cast<std::uint64_t>(columns_);
  return m * (m + 1) / 2;
}

PointSet ParabolicStaircase::materialize(std::uint64_t max_points) const {
  if (size() > max_points) {
    throw ConfigError("columns: staircase has " + std::to_string(size()) + " points, above the limit");
  }
  std::vector<Point> points;
  points.reserve(size());
  for (std::int64_t m = 1; m <= columns_; ++m) {
    for (std::int64_t n = 0; n < m; ++n) {
      points.push_back({static_cast<double>(m * m), static_cast<double>(n)});
    }
  }
  return PointSet(std::move(points));
}

nlohmann::json ParabolicStaircase::descriptor() const {
  return {{"kind", kind()}, {"M", columns_}, {"points", size()}};
}

PointSet gen_parabolic_staircase(std::int64_t columns) {
  return ParabolicStaircase(columns).materialize();
}

// ---------------------------------------------------------------------------
// Zig-zag staircase in a cone

ZigzagTrace zigzag_trace(double delta, std::int64_t levels) {
  if (!(delta > 0.0 && delta < std::numbers::pi / 4.0)) {
    throw ConfigError("delta: must lie in (0, pi/4)");
  }
  if (levels < 1) throw ConfigError("levels: must be at least 1");
  ZigzagTrace trace;
  const double phi = std::numbers::pi / 4.0 + delta;
  trace.cone_slope = std::tan(phi);
  trace.a = 1.0 - 1.0 / std::tan(phi);
  trace.b = std::tan(phi) - 1.0;
  const double ab = trace.a * trace.b;
  const double root = std::sqrt(ab * (ab + 4.0));
  trace.lambda1 = 1.0 + 0.5 * (root + ab);
  trace.lambda2 = 1.0 - 0.5 * (root - ab);

  trace.corners.reserve(static_cast<std::size_t>(levels) + 1);
  Point c{1.0, 1.0};
  trace.corners.push_back(c);
  for (std::int64_t n = 0; n < levels; ++n) {
    // Vertical shear up to the upper cone edge, then horizontal shear back to y = x.
    c = Point{(1.0 + ab) * c.x + trace.a * c.y, trace.b * c.x + c.y};
    trace.corners.push_back(c);
  }
  return trace;
}

ZigzagResult gen_zigzag(double delta, std::int64_t levels, std::uint64_t max_points) {
  ZigzagResult result;
  result.trace = zigzag_trace(delta, levels);
  const auto& corners = result.trace.corners;

  std::vector<Point> points;
  for (std::int64_t n = 0; n < levels; ++n) {
    const Point from = corners[static_cast<std::size_t>(n)];
    const Point to = corners[static_cast<std::size_t>(n) + 1];
    // The vertical leg rises from (x_n, y_n) to height y_{n+1}, the
    // horizontal leg then runs to x_{n+1}.
    const double top = result.trace.b * from.x + from.y;
    if (!(top < kExactIntegerLimit) || !(to.x < kExactIntegerLimit)) {
      result.truncated = true;
      result.stop_reason = "corner coordinates exceed 2^53 at level " + std::to_string(n);
      break;
    }
    const double column = std::round(from.x);
    const double y_start = std::round(from.y);
    const double row = std::round(top);
    const double x_end = std::round(to.x);
    const double added = (row - y_start + 1.0) + (x_end - column + 1.0);
    if (static_cast<double>(points.size()) + added > static_cast<double>(max_points)) {
      result.truncated = true;
      result.stop_reason = "point budget exhausted at level " + std::to_string(n);
      break;
    }
    for (double y = y_start; y <= row; y += 1.0) points.push_back({column, y});
    for (double x = column + 1.0; x <= x_end; x += 1.0) points.push_back({x, row});
    result.levels_built = n + 1;
  }
  std::sort(points.begin(), points.end(),
            [](const Point& a, const Point& b) { return std::tie(a.x, a.y) < std::tie(b.x, b.y); });
  points.erase(std::unique(points.begin(), points.end()), points.end());
  result.points = PointSet(std::move(points));
  return result;
}

// ---------------------------------------------------------------------------
// Sector bands

std::pair<std::int64_t, std::int64_t> SectorBandSet::row_range(const SectorBand& band,
                                                               std::int64_t y) const {
  const double yd = static_cast<double>(y);
  const double t_lo = std::tan(band.angle_lo);
  const double t_hi = std::tan(band.angle_hi);
  // A row only counts when its cross-section through the sector has length >= 1.
  if (yd * (t_hi - t_lo) < 1.0) return {1, 0};
  if (band.angle_lo == -band.angle_hi) {
    const auto h = to_int(std::floor(yd * t_hi));
    return {-h, h};
  }
  return {to_int(std::ceil(yd * t_lo)), to_int(std::ceil(yd * t_hi)) - 1};
}

std::uint64_t SectorBandSet::band_count(const SectorBand& band) const {
  std::uint64_t total = 0;
  for (std::int64_t y = band.y_begin; y < band.y_end; ++y) {
    const auto [lo, hi] = row_range(band, y);
    if (hi >= lo) total += static_cast<std::uint64_t>(hi - lo + 1);
  }
  return total;
}

bool SectorBandSet::contains(Point p) const {
  if (p.x != std::floor(p.x) || p.y != std::floor(p.y)) return false;
  const auto y = to_int(p.y);
  const auto x = to_int(p.x);
  for (const SectorBand& band : bands_) {
    if (y >= band.y_begin && y < band.y_end) {
      const auto [lo, hi] = row_range(band, y);
      return x >= lo && x <= hi;
    }
  }
  return false;
}

std::uint64_t SectorBandSet::count_in_box(const BoxSpec& box) const {
  if (box.kind == BoxKind::slanted) throw ConfigError("box: slanted boxes need a materialised set");
  const Rect r = box.bounds();
  const std::int64_t x_lo = to_int(std::ceil(std::max(r.xmin, -kExactIntegerLimit)));
  const std::int64_t x_hi = to_int(std::floor(std::min(r.xmax, kExactIntegerLimit)));
  const std::int64_t y_lo = to_int(std::ceil(std::max(r.ymin, -kExactIntegerLimit)));
  const std::int64_t y_hi = to_int(std::floor(std::min(r.ymax, kExactIntegerLimit)));
  std::uint64_t total = 0;
  for (const SectorBand& band : bands_) {
    const std::int64_t first = std::max(band.y_begin, y_lo);
    const std::int64_t last = std::min(band.y_end - 1, y_hi);
    for (std::int64_t y = first; y <= last; ++y) {
      const auto [lo, hi] = row_range(band, y);
      const std::int64_t a = std::max(lo, x_lo);
      const std::int64_t b = std::min(hi, x_hi);
      if (b >= a) total += static_cast<std::uint64_t>(b - a + 1);
    }
  }
  return total;
}

std::uint64_t SectorBandSet::count_in_tube(const Tube& tube, const BoxSpec& box) const {
  const Rect r = box.bounds();
  const double y_lo = std::max(r.ymin, -kExactIntegerLimit);
  const double y_hi = std::min(r.ymax, kExactIntegerLimit);
  std::uint64_t total = 0;
  for (const SectorBand& band : bands_) {
    const std::int64_t first = std::max(band.y_begin, to_int(std::ceil(y_lo)));
    const std::int64_t last = std::min(band.y_end - 1, to_int(std::floor(y_hi)));
    for (std::int64_t y = first; y <= last; ++y) {
      const double yd = static_cast<double>(y);
      if (tube.orientation == TubeOrientation::horizontal && !(tube.v < yd && yd <= tube.v + 1.0)) {
        continue;
      }
      auto [lo, hi] = row_range(band, y);
      if (hi < lo) continue;
      if (tube.orientation == TubeOrientation::standard) {
        const double k = tube.vertical_extent();
        const double e1 = tube.u * (tube.v * k - yd);
        const double e2 = tube.u * ((tube.v + 1.0) * k - yd);
        lo = std::max(lo, to_int(std::floor(std::min(e1, e2))) - 1);
        hi = std::min(hi, to_int(std::ceil(std::max(e1, e2))) + 1);
      }
      lo = std::max(lo, to_int(std::ceil(std::max(r.xmin, -kExactIntegerLimit))));
      hi = std::min(hi, to_int(std::floor(std::min(r.xmax, kExactIntegerLimit))));
      for (std::int64_t x = lo; x <= hi; ++x) {
        const Point p{static_cast<double>(x), yd};
        if (tube_contains(tube, p) && box_contains(box, p)) ++total;
      }
    }
  }
  return total;
}

Rect SectorBandSet::extent() const {
  Rect out;
  bool first = true;
  for (const SectorBand& band : bands_) {
    for (std::int64_t y : {band.y_begin, band.y_end - 1}) {
      const auto [lo, hi] = row_range(band, y);
      if (hi < lo) continue;
      const Rect row{static_cast<double>(lo), static_cast<double>(y), static_cast<double>(hi),
                     static_cast<double>(y)};
      if (first) {
        out = row;
        first = false;
      } else {
        out.xmin = std::min(out.xmin, row.xmin);
        out.xmax = std::max(out.xmax, row.xmax);
        out.ymin = std::min(out.ymin, row.ymin);
        out.ymax = std::max(out.ymax, row.ymax);
      }
    }
  }
  return out;
}

std::uint64_t SectorBandSet::size() const {
  std::uint64_t total = 0;
  for (const SectorBand& band : bands_) total += band_count(band);
  return total;
}

PointSet SectorBandSet::materialize(std::uint64_t max_points) const {
  const std::uint64_t total = size();
  if (total > max_points) {
    throw ConfigError("mode: materialising " + kind() + " would emit " + std::to_string(total) +
                      " points (limit " + std::to_string(max_points) + "); use implicit mode");
  }
  std::vector<Point> points;
  points.reserve(total);
  for (const SectorBand& band : bands_) {
    for (std::int64_t y = band.y_begin; y < band.y_end; ++y) {
      const auto [lo, hi] = row_range(band, y);
      for (std::int64_t x = lo; x <= hi; ++x) {
        points.push_back({static_cast<double>(x), static_cast<double>(y)});
      }
    }
  }
  return PointSet(std::move(points));
}

namespace {

void check_theta(double theta) {
  if (!(theta > 0.0 && theta < std::numbers::pi / 2.0)) throw ConfigError("theta: must lie in (0, pi/2)");
}

void check_levels(std::int64_t lo, std::int64_t hi) {
  if (lo < 0 || hi < lo) throw ConfigError("k_min/k_max: need 0 <= k_min <= k_max");
}

}  // namespace

ConeAnnuli::ConeAnnuli(double theta, std::int64_t k_min, std::int64_t k_max)
    : theta_(theta), k_min_(k_min), k_max_(k_max) {
  check_theta(theta);
  check_levels(k_min, k_max);
  if (k_max > 4) throw ConfigError("k_max: bands above k = 4 leave the exact integer range");
  for (std::int64_t k = k_min; k <= k_max; ++k) {
    const std::int64_t base = tower(k + 1);
    bands_.push_back({k, base, base + tower(k), -theta / 2.0, theta / 2.0});
  }
}

double ConeAnnuli::band_area_estimate(double theta, std::int64_t k) {
  return theta * std::exp2(3.0 * std::exp2(static_cast<double>(k)));
}

nlohmann::json ConeAnnuli::descriptor() const {
  return {{"kind", kind()}, {"theta", theta_}, {"k_min", k_min_}, {"k_max", k_max_}, {"points", size()}};
}

ConeStaircase::ConeStaircase(double theta, std::int64_t k_min, std::int64_t k_max)
    : theta_(theta), k_min_(k_min), k_max_(k_max) {
  check_theta(theta);
  check_levels(k_min, k_max);
  if (k_max > 4) throw ConfigError("k_max: chunks above k = 4 leave the exact integer range");
  double angle = 0.0;
  for (std::int64_t k = k_min; k <= k_max; ++k) {
    const double width = theta / static_cast<double>(tower(k));
    const std::int64_t base = tower(k + 1);
    bands_.push_back({k, base, base + tower(k), angle, angle + width});
    angle += width;
  }
}

double ConeStaircase::total_angle() const {
  double total = 0.0;
  for (std::int64_t k = k_min_; k <= k_max_; ++k) total += theta_ * std::exp2(-std::exp2(static_cast<double>(k)));
  return total;
}

nlohmann::json ConeStaircase::descriptor() const {
  return {{"kind", kind()},       {"theta", theta_},         {"k_min", k_min_},
          {"k_max", k_max_},      {"total_angle", total_angle()}, {"points", size()}};
}

ConeFixedWidth::ConeFixedWidth(double theta, std::int64_t k0, std::int64_t j_max)
    : theta_(theta), k0_(k0), j_max_(j_max) {
  check_theta(theta);
  if (k0 < 0) throw ConfigError("k0: must be nonnegative");
  if (j_max <= k0) throw ConfigError("k_max: must exceed k0");
  if (j_max > 5) throw ConfigError("k_max: levels above 5 leave the exact integer range");
  const double width = theta / static_cast<double>(tower(k0));
  const std::int64_t slots = tower(k0);
  for (std::int64_t j = k0 + 1; j <= j_max && j - k0 - 1 < slots; ++j) {
    const auto slot = static_cast<double>(j - k0 - 1);
    const std::int64_t base = tower(j);
    bands_.push_back({j, base, base + tower(j - 1), slot * width, (slot + 1.0) * width});
  }
}

double ConeFixedWidth::chunk_area_log2(double theta, std::int64_t k0, std::int64_t j) {
  const double i = static_cast<double>(j - k0);
  return std::log2(theta) + (std::exp2(i) + std::exp2(i - 1.0) - 1.0) * std::exp2(static_cast<double>(k0));
}

nlohmann::json ConeFixedWidth::descriptor() const {
  return {{"kind", kind()}, {"theta", theta_}, {"k0", k0_}, {"k_max", j_max_}, {"points", size()}};
}

// ---------------------------------------------------------------------------
// Cartesian and random sets

PointSet gen_cartesian(const std::vector<std::int64_t>& xs, const std::vector<std::int64_t>& ys) {
  auto a = xs;
  auto b = ys;
  for (auto* v : {&a, &b}) {
    std::sort(v->begin(), v->end());
    v->erase(std::unique(v->begin(), v->end()), v->end());
    if (!v->empty() && v->front() < 0) throw ConfigError("cartesian factors must be subsets of N");
  }
  std::vector<Point> points;
  points.reserve(a.size() * b.size());
  for (auto x : a) {
    for (auto y : b) points.push_back({static_cast<double>(x), static_cast<double>(y)});
  }
  return PointSet(std::move(points));
}

PointSet gen_random_dimension(double alpha, std::int64_t l_max, std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha <= 2.0)) throw ConfigError("alpha: must lie in [0, 2]");
  if (l_max < 1 || l_max > (std::int64_t{1} << 30)) throw ConfigError("l_max: must lie in [1, 2^30]");
  std::mt19937_64 rng(seed);
  std::vector<Point> points;

  const std::int64_t side0 = std::min<std::int64_t>(1, l_max);
  for (std::int64_t x = 0; x <= side0; ++x) {
    for (std::int64_t y = 0; y <= side0; ++y) points.push_back({static_cast<double>(x), static_cast<double>(y)});
  }

  for (std::int64_t j = 1; (std::int64_t{1} << j) <= l_max; ++j) {
    const std::int64_t lo = std::int64_t{1} << j;
    const std::int64_t hi = std::min((std::int64_t{1} << (j + 1)) - 1, l_max);
    const double p = std::min(1.0, std::exp2(static_cast<double>(j) * (alpha - 2.0)));
    // L-shaped block: columns lo..hi at every height 0..hi, then columns
    // 0..lo-1 at heights lo..hi. Cells are walked in that linear order.
    const auto width = static_cast<std::uint64_t>(hi - lo + 1);
    const auto height = static_cast<std::uint64_t>(hi + 1);
    const std::uint64_t part1 = width * height;
    const std::uint64_t part2 = static_cast<std::uint64_t>(lo) * width;
    const std::uint64_t cells = part1 + part2;
    std::uint64_t idx = geometric_skip(rng, p);
    while (idx < cells) {
      std::int64_t x;
      std::int64_t y;
      if (idx < part1) {
        x = lo + static_cast<std::int64_t>(idx / height);
        y = static_cast<std::int64_t>(idx % height);
      } else {
        const std::uint64_t r = idx - part1;
        x = static_cast<std::int64_t>(r / width);
        y = lo + static_cast<std::int64_t>(r % width);
      }
      points.push_back({static_cast<double>(x), static_cast<double>(y)});
      const std::uint64_t skip = geometric_skip(rng, p);
      if (skip >= cells) break;
      idx += skip + 1;
    }
  }
  return PointSet(std::move(points));
}

std::vector<std::int64_t> gen_random_dimension_1d(double alpha, std::int64_t n_max, std::uint64_t seed) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw ConfigError("alpha: must lie in [0, 1]");
  if (n_max < 1) throw ConfigError("n_max: must be at least 1");
  std::mt19937_64 rng(seed);
  std::vector<std::int64_t> out{1};
  for (std::int64_t j = 1; (std::int64_t{1} << j) <= n_max; ++j) {
    const std::int64_t lo = std::int64_t{1} << j;
    const std::int64_t hi = std::min((std::int64_t{1} << (j + 1)) - 1, n_max);
    const double p = std::min(1.0, std::exp2(static_cast<double>(j) * (alpha - 1.0)));
    const auto cells = static_cast<std::uint64_t>(hi - lo + 1);
    std::uint64_t idx = geometric_skip(rng, p);
    while (idx < cells) {
      out.push_back(lo + static_cast<std::int64_t>(idx));
      const std::uint64_t skip = geometric_skip(rng, p);
      if (skip >= cells) break;
      idx += skip + 1;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spec front end

GeneratorParams parse_generator_params(GeneratorKind kind, const nlohmann::json& params) {
  if (!params.is_object()) throw ConfigError("params: expected a JSON object");
  GeneratorParams out;
  for (const auto& [key, value] : params.items()) {
    try {
      if (key == "m") out.m = value.get<double>();
      else if (key == "count") out.count = value.get<std::int64_t>();
      else if (key == "M" || key == "columns") out.columns = value.get<std::int64_t>();
      else if (key == "delta") out.delta = value.get<double>();
      else if (key == "levels" || key == "n_levels") out.levels = value.get<std::int64_t>();
      else if (key == "theta") out.theta = value.get<double>();
      else if (key == "k_min") out.k_min = value.get<std::int64_t>();
      else if (key == "k_max") out.k_max = value.get<std::int64_t>();
      else if (key == "k0") out.k0 = value.get<std::int64_t>();
      else if (key == "A") out.xs = value.get<std::vector<std::int64_t>>();
      else if (key == "B") out.ys = value.get<std::vector<std::int64_t>>();
      else if (key == "alpha") out.alpha = value.get<double>();
      else if (key == "l_max") out.l_max = value.get<std::int64_t>();
      else if (key == "seed") out.seed = value.get<std::uint64_t>();
      else throw ConfigError("params." + key + ": unknown parameter for " + to_string(kind));
    } catch (const nlohmann::json::exception&) {
      throw ConfigError("params." + key + ": wrong type");
    }
  }
  return out;
}

nlohmann::json to_json(GeneratorKind kind, const GeneratorParams& p) {
  switch (kind) {
    case GeneratorKind::unit_line: return {{"m", p.m}, {"count", p.count}};
    case GeneratorKind::parabolic_staircase: return {{"M", p.columns}};
    case GeneratorKind::zigzag: return {{"delta", p.delta}, {"levels", p.levels}};
    case GeneratorKind::cone_annuli:
    case GeneratorKind::cone_staircase:
      return {{"theta", p.theta}, {"k_min", p.k_min}, {"k_max", p.k_max}};
    case GeneratorKind::cone_fixed_width: return {{"theta", p.theta}, {"k0", p.k0}, {"k_max", p.k_max}};
    case GeneratorKind::cartesian: return {{"A", p.xs}, {"B", p.ys}};
    case GeneratorKind::random_dim: return {{"alpha", p.alpha}, {"l_max", p.l_max}, {"seed", p.seed}};
  }
  return nlohmann::json::object();
}

GeneratedSet generate(const GeneratorSpec& spec) {
  const GeneratorParams& p = spec.params;
  GeneratedSet out;
  out.info = {{"kind", to_string(spec.kind)}, {"params", to_json(spec.kind, p)}};

  std::shared_ptr<const ImplicitSet> implicit;
  switch (spec.kind) {
    case GeneratorKind::parabolic_staircase:
      implicit = std::make_shared<ParabolicStaircase>(p.columns);
      break;
    case GeneratorKind::cone_annuli:
      if (spec.mode == GenerationMode::materialize && p.k_max > 3) {
        throw ConfigError("k_max: materialize mode supports k_max <= 3 (about " +
                          format_estimate(ConeAnnuli::band_area_estimate(p.theta, p.k_max)) +
                          " points in the top band); use --mode implicit");
      }
      implicit = std::make_shared<ConeAnnuli>(p.theta, p.k_min, p.k_max);
      break;
    case GeneratorKind::cone_staircase:
      implicit = std::make_shared<ConeStaircase>(p.theta, p.k_min, p.k_max);
      break;
    case GeneratorKind::cone_fixed_width:
      implicit = std::make_shared<ConeFixedWidth>(p.theta, p.k0, p.k_max);
      break;
    case GeneratorKind::unit_line:
    case GeneratorKind::zigzag:
    case GeneratorKind::cartesian:
    case GeneratorKind::random_dim:
      if (spec.mode == GenerationMode::implicit) {
        throw ConfigError("mode: " + to_string(spec.kind) + " has no implicit form");
      }
      break;
  }

  if (implicit) {
    out.info["descriptor"] = implicit->descriptor();
    if (spec.mode == GenerationMode::materialize) out.points = implicit->materialize();
    out.implicit = std::move(implicit);
    return out;
  }

  switch (spec.kind) {
    case GeneratorKind::unit_line:
      out.points = gen_unit_line(p.m, p.count);
      break;
    case GeneratorKind::zigzag: {
      ZigzagResult z = gen_zigzag(p.delta, p.levels);
      nlohmann::json corners = nlohmann::json::array();
      for (const Point& c : z.trace.corners) corners.push_back({c.x, c.y});
      out.info["trace"] = {{"A", z.trace.a},           {"B", z.trace.b},
                           {"lambda1", z.trace.lambda1}, {"lambda2", z.trace.lambda2},
                           {"corners", corners},         {"levels_built", z.levels_built},
                           {"truncated", z.truncated},   {"stop_reason", z.stop_reason}};
      out.points = std::move(z.points);
      break;
    }
    case GeneratorKind::cartesian:
      out.points = gen_cartesian(p.xs, p.ys);
      break;
    case GeneratorKind::random_dim:
      out.points = gen_random_dimension(p.alpha, p.l_max, p.seed);
      break;
    default:
      break;
  }
  return out;
}

}  // namespace latslice
