#include "latslice/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>
#include <tuple>

#include "latslice/errors.hpp"

namespace latslice {

std::int64_t cell_of(double coordinate) {
  return static_cast<std::int64_t>(std::floor(coordinate));
}

// ---------------------------------------------------------------------------
// PointSet

PointSet::PointSet(std::vector<Point> points) : points_(std::move(points)) {
  for (const Point& p : points_) {
    if (!std::isfinite(p.x) || !std::isfinite(p.y)) {
      throw ConfigError("point coordinates must be finite");
    }
  }
  build_index();
}

PointSet::PointSet(const PointSet& other)
    : points_(other.points_),
      column_keys_(other.column_keys_),
      column_begin_(other.column_begin_),
      bbox_(other.bbox_),
      max_cell_occupancy_(other.max_cell_occupancy_),
      separation_checked_(other.separation_checked()) {}

PointSet& PointSet::operator=(const PointSet& other) {
  if (this != &other) {
    points_ = other.points_;
    column_keys_ = other.column_keys_;
    column_begin_ = other.column_begin_;
    bbox_ = other.bbox_;
    max_cell_occupancy_ = other.max_cell_occupancy_;
    separation_checked_.store(other.separation_checked());
  }
  return *this;
}

PointSet::PointSet(PointSet&& other) noexcept
    : points_(std::move(other.points_)),
      column_keys_(std::move(other.column_keys_)),
      column_begin_(std::move(other.column_begin_)),
      bbox_(other.bbox_),
      max_cell_occupancy_(other.max_cell_occupancy_),
      separation_checked_(other.separation_checked()) {}

PointSet& PointSet::operator=(PointSet&& other) noexcept {
  if (this != &other) {
    points_ = std::move(other.points_);
    column_keys_ = std::move(other.column_keys_);
    column_begin_ = std::move(other.column_begin_);
    bbox_ = other.bbox_;
    max_cell_occupancy_ = other.max_cell_occupancy_;
    separation_checked_.store(other.separation_checked());
  }
  return *this;
}

void PointSet::build_index() {
  std::sort(points_.begin(), points_.end(), [](const Point& a, const Point& b) {
    const auto ca = cell_of(a.x);
    const auto cb = cell_of(b.x);
    return std::tie(ca, a.y, a.x) < std::tie(cb, b.y, b.x);
  });

  column_keys_.clear();
  column_begin_.clear();
  bbox_ = Rect{};
  max_cell_occupancy_ = 0;
  if (points_.empty()) {
    column_begin_.push_back(0);
    return;
  }

  bbox_ = Rect{points_.front().x, points_.front().y, points_.front().x, points_.front().y};
  std::size_t run = 0;
  std::int64_t run_cx = 0;
  std::int64_t run_cy = 0;
  for (std::size_t i = 0; i < points_.size(); ++i) {
    const Point& p = points_[i];
    bbox_.xmin = std::min(bbox_.xmin, p.x);
    bbox_.xmax = std::max(bbox_.xmax, p.x);
    bbox_.ymin = std::min(bbox_.ymin, p.y);
    bbox_.ymax = std::max(bbox_.ymax, p.y);

    const std::int64_t cx = cell_of(p.x);
    const std::int64_t cy = cell_of(p.y);
    if (column_keys_.empty() || column_keys_.back() != cx) {
      column_keys_.push_back(cx);
      column_begin_.push_back(i);
    }
    // Within a column points are sorted by y, so a cell is a contiguous run.
    if (i > 0 && cx == run_cx && cy == run_cy) {
      ++run;
    } else {
      run = 1;
      run_cx = cx;
      run_cy = cy;
    }
    max_cell_occupancy_ = std::max(max_cell_occupancy_, run);
  }
  column_begin_.push_back(points_.size());
}

bool PointSet::in_first_quadrant() const {
  return points_.empty() || (bbox_.xmin >= 0.0 && bbox_.ymin >= 0.0);
}

std::size_t PointSet::first_column_at_or_after(std::int64_t cx) const {
  return static_cast<std::size_t>(
      std::lower_bound(column_keys_.begin(), column_keys_.end(), cx) - column_keys_.begin());
}

std::span<const Point> PointSet::column_slice(std::size_t column, double ylo, double yhi) const {
  const auto first = points_.begin() + static_cast<std::ptrdiff_t>(column_begin_[column]);
  const auto last = points_.begin() + static_cast<std::ptrdiff_t>(column_begin_[column + 1]);
  const auto lo =
      std::lower_bound(first, last, ylo, [](const Point& p, double y) { return p.y < y; });
  const auto hi =
      std::upper_bound(lo, last, yhi, [](double y, const Point& p) { return y < p.y; });
  return {lo, hi};
}

namespace {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

// Classic sweep for the closest pair; only used when no pair is within 1.
SeparationReport sweep_closest_pair(std::span<const Point> points) {
  std::vector<Point> by_x(points.begin(), points.end());
  std::sort(by_x.begin(), by_x.end(),
            [](const Point& a, const Point& b) { return std::tie(a.x, a.y) < std::tie(b.x, b.y); });

  SeparationReport report;
  report.min_distance = std::numeric_limits<double>::infinity();
  std::set<std::pair<double, double>> active;  // (y, x)
  std::size_t tail = 0;
  for (const Point& p : by_x) {
    while (tail < by_x.size() && by_x[tail].x < p.x - report.min_distance) {
      active.erase({by_x[tail].y, by_x[tail].x});
      ++tail;
    }
    auto it = active.lower_bound({p.y - report.min_distance, -std::numeric_limits<double>::infinity()});
    for (; it != active.end() && it->first <= p.y + report.min_distance; ++it) {
      const Point q{it->second, it->first};
      const double d = distance(p, q);
      if (d < report.min_distance) {
        report.min_distance = d;
        report.first = q;
        report.second = p;
      }
    }
    if (!active.insert({p.y, p.x}).second) {
      report.min_distance = 0.0;
      report.first = p;
      report.second = p;
      return report;
    }
  }
  return report;
}

}  // namespace

SeparationReport PointSet::validate_separation() const {
  if (points_.empty()) {
    throw ConfigError("validate_separation requires a non-empty point set");
  }
  SeparationReport report;
  report.min_distance = std::numeric_limits<double>::infinity();
  report.first = report.second = points_.front();

  // Any pair at distance <= 1 sits in neighbouring unit columns, so the local
  // scan is exact whenever it finds such a pair.
  for (std::size_t c = 0; c < column_keys_.size(); ++c) {
    const std::int64_t cx = column_keys_[c];
    for (std::size_t i = column_begin_[c]; i < column_begin_[c + 1]; ++i) {
      const Point& p = points_[i];
      for (std::size_t n = (c > 0 ? c - 1 : c); n < column_keys_.size() && column_keys_[n] <= cx + 1;
           ++n) {
        if (column_keys_[n] < cx - 1) continue;
        for (const Point& q : column_slice(n, p.y - 1.0, p.y + 1.0)) {
          if (&q == &p) continue;
          const double d = distance(p, q);
          if (d < report.min_distance) {
            report.min_distance = d;
            report.first = p;
            report.second = q;
          }
        }
      }
    }
  }

  if (!(report.min_distance <= 1.0) && points_.size() > 1) {
    report = sweep_closest_pair(points_);
  }
  report.valid = report.min_distance >= 1.0;
  if (report.valid) separation_checked_.store(true, std::memory_order_relaxed);
  return report;
}

// ---------------------------------------------------------------------------
// Tubes and lines

Tube Tube::standard(double u, double v) {
  if (!std::isfinite(u) || u == 0.0) throw ConfigError("tube slope parameter u must be finite and nonzero");
  if (!std::isfinite(v)) throw ConfigError("tube displacement v must be finite");
  return Tube{u, v, TubeOrientation::standard};
}

Tube Tube::horizontal(double v) {
  if (!std::isfinite(v)) throw ConfigError("tube displacement v must be finite");
  return Tube{0.0, v, TubeOrientation::horizontal};
}

double Tube::vertical_extent() const {
  if (orientation == TubeOrientation::horizontal) return 1.0;
  return std::sqrt(1.0 + 1.0 / (u * u));
}

double Tube::lower_edge(double x) const {
  if (orientation == TubeOrientation::horizontal) return v;
  return -x / u + v * vertical_extent();
}

double Tube::upper_edge(double x) const {
  if (orientation == TubeOrientation::horizontal) return v + 1.0;
  return -x / u + (v + 1.0) * vertical_extent();
}

bool tube_contains(const Tube& tube, Point p) {
  return tube.lower_edge(p.x) < p.y && p.y <= tube.upper_edge(p.x);
}

double tube_edge_distance(const Tube& tube) {
  if (tube.orientation == TubeOrientation::horizontal) return (tube.v + 1.0) - tube.v;
  const double k = tube.vertical_extent();
  const double intercept_gap = std::abs((tube.v + 1.0) * k - tube.v * k);
  const double slope = -1.0 / tube.u;
  return intercept_gap / std::sqrt(1.0 + slope * slope);
}

FloorLine FloorLine::make(double u, double v) {
  if (!std::isfinite(u) || !(u > 0.0)) throw ConfigError("floor line slope u must be positive");
  if (!std::isfinite(v) || v < 0.0) throw ConfigError("floor line intercept v must be nonnegative");
  return FloorLine{u, v};
}

// ---------------------------------------------------------------------------
// Boxes

BoxSpec BoxSpec::first_quadrant(double l) {
  if (!(l >= 0.0)) throw ConfigError("box size must be nonnegative");
  return BoxSpec{BoxKind::axis_first_quadrant, l};
}

BoxSpec BoxSpec::centered(double l) {
  if (!(l >= 0.0)) throw ConfigError("box size must be nonnegative");
  return BoxSpec{BoxKind::axis_centered, l};
}

BoxSpec BoxSpec::slanted(double n, double u, double v) {
  if (!(n >= 0.0)) throw ConfigError("box size must be nonnegative");
  if (!std::isfinite(u) || u == 0.0) throw ConfigError("slanted box needs finite nonzero u");
  BoxSpec box{BoxKind::slanted, n};
  box.u = u;
  box.v = v;
  return box;
}

BoxSpec BoxSpec::window(double x0, double y0, double l) {
  if (!(l >= 0.0)) throw ConfigError("box size must be nonnegative");
  BoxSpec box{BoxKind::axis_window, l};
  box.x0 = x0;
  box.y0 = y0;
  return box;
}

SlantedCoords slanted_coords(double u, Point p) {
  const double r = std::sqrt(1.0 + u * u);
  return {(p.y - u * p.x) / r, (p.x + u * p.y) / r};
}

namespace {

double slanted_center(const BoxSpec& box) {
  return (box.u > 0.0 ? 1.0 : -1.0) * (box.v + 0.5);
}

}  // namespace

Rect BoxSpec::bounds() const {
  switch (kind) {
    case BoxKind::axis_first_quadrant:
      return {0.0, 0.0, size, size};
    case BoxKind::axis_centered:
      return {-size, -size, size, size};
    case BoxKind::axis_window:
      return {x0, y0, x0 + size, y0 + size};
    case BoxKind::slanted: {
      const double r = std::sqrt(1.0 + u * u);
      const double c = slanted_center(*this);
      Rect out{std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
               -std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
      for (double along : {0.0, size}) {
        for (double across : {c - size / 2.0, c + size / 2.0}) {
          const double x = (-u * along + across) / r;
          const double y = (along + u * across) / r;
          out.xmin = std::min(out.xmin, x);
          out.xmax = std::max(out.xmax, x);
          out.ymin = std::min(out.ymin, y);
          out.ymax = std::max(out.ymax, y);
        }
      }
      // Rounding slack; membership is decided by box_contains.
      const double pad = 1e-9 * (1.0 + size + std::abs(c));
      out.xmin -= pad;
      out.ymin -= pad;
      out.xmax += pad;
      out.ymax += pad;
      return out;
    }
  }
  return {};
}

bool box_contains(const BoxSpec& box, Point p) {
  switch (box.kind) {
    case BoxKind::axis_first_quadrant:
      return p.x >= 0.0 && p.y >= 0.0 && p.x <= box.size && p.y <= box.size;
    case BoxKind::axis_centered:
      return p.x >= -box.size && p.y >= -box.size && p.x <= box.size && p.y <= box.size;
    case BoxKind::axis_window:
      return p.x >= box.x0 && p.y >= box.y0 && p.x <= box.x0 + box.size && p.y <= box.y0 + box.size;
    case BoxKind::slanted: {
      const SlantedCoords sc = slanted_coords(box.u, p);
      return sc.along >= 0.0 && sc.along <= box.size &&
             std::abs(sc.across - slanted_center(box)) <= box.size / 2.0;
    }
  }
  return false;
}

std::uint64_t box_count(const PointSet& set, const BoxSpec& box) {
  const Rect r = box.bounds();
  std::uint64_t count = 0;
  const bool axis = box.kind != BoxKind::slanted;
  set.for_each_in_columns(cell_of(r.xmin), cell_of(r.xmax), r.ymin, r.ymax, [&](const Point& p) {
    if (axis ? r.contains(p) : box_contains(box, p)) ++count;
  });
  return count;
}

// ---------------------------------------------------------------------------
// Tube slicing

namespace {

// Calls fn for each candidate point of the set lying in columns the tube
// crosses inside `window`; fn applies the exact predicates.
template <typename Fn>
void for_each_tube_candidate(const PointSet& set, const Tube& tube, Rect window, Fn&& fn) {
  if (set.empty()) return;
  const Rect& bb = set.bbox();
  window.xmin = std::max(window.xmin, bb.xmin);
  window.xmax = std::min(window.xmax, bb.xmax);
  window.ymin = std::max(window.ymin, bb.ymin);
  window.ymax = std::min(window.ymax, bb.ymax);
  if (window.empty()) return;

  if (tube.orientation == TubeOrientation::horizontal) {
    const double ylo = std::max(window.ymin, tube.v);
    const double yhi = std::min(window.ymax, tube.v + 1.0);
    if (yhi < ylo) return;
    set.for_each_in_columns(cell_of(window.xmin), cell_of(window.xmax), ylo, yhi, fn);
    return;
  }

  // x-range where the strip meets the window's height range.
  const double k = tube.vertical_extent();
  double xlo = std::numeric_limits<double>::infinity();
  double xhi = -xlo;
  for (double c : {tube.v * k, (tube.v + 1.0) * k}) {
    for (double y : {window.ymin - 1.0, window.ymax + 1.0}) {
      const double x = tube.u * (c - y);
      xlo = std::min(xlo, x);
      xhi = std::max(xhi, x);
    }
  }
  xlo = std::max(xlo - 1.0, window.xmin);
  xhi = std::min(xhi + 1.0, window.xmax);
  if (xhi < xlo) return;

  const std::int64_t cx_lo = cell_of(xlo);
  const std::int64_t cx_hi = cell_of(xhi);
  for (std::size_t c = set.first_column_at_or_after(cx_lo);
       c < set.column_count() && set.column_key(c) <= cx_hi; ++c) {
    const double x0 = static_cast<double>(set.column_key(c));
    const double x1 = x0 + 1.0;
    const double ylo = std::max(window.ymin, std::min(tube.lower_edge(x0), tube.lower_edge(x1)) - 0.5);
    const double yhi = std::min(window.ymax, std::max(tube.upper_edge(x0), tube.upper_edge(x1)) + 0.5);
    if (yhi < ylo) continue;
    for (const Point& p : set.column_slice(c, ylo, yhi)) fn(p);
  }
}

constexpr Rect kEverywhere{-std::numeric_limits<double>::infinity(),
                           -std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity(),
                           std::numeric_limits<double>::infinity()};

}  // namespace

PointSet slice_tube(const PointSet& set, const Tube& tube) {
  std::vector<Point> kept;
  for_each_tube_candidate(set, tube, kEverywhere, [&](const Point& p) {
    if (tube_contains(tube, p)) kept.push_back(p);
  });
  return PointSet(std::move(kept));
}

std::uint64_t tube_box_count(const PointSet& set, const Tube& tube, const BoxSpec& box) {
  std::uint64_t count = 0;
  for_each_tube_candidate(set, tube, box.bounds(), [&](const Point& p) {
    if (tube_contains(tube, p) && box_contains(box, p)) ++count;
  });
  return count;
}

// ---------------------------------------------------------------------------
// Floor lines

namespace {

// Visits matched heights in nondecreasing order: columns ascend, and inside a
// column candidates ascend in y.
template <typename Fn>
void for_each_floor_hit(const PointSet& set, const FloorLine& line, double x_max, Fn&& fn) {
  if (set.empty() || !(x_max >= 0.0)) return;
  const Rect& bb = set.bbox();
  const double xlo = std::max(0.0, bb.xmin);
  const double xhi = std::min(x_max, bb.xmax);
  if (xhi < xlo) return;
  const std::int64_t cx_lo = cell_of(xlo);
  const std::int64_t cx_hi = cell_of(xhi);
  for (std::size_t c = set.first_column_at_or_after(cx_lo);
       c < set.column_count() && set.column_key(c) <= cx_hi; ++c) {
    const double x0 = std::max(0.0, static_cast<double>(set.column_key(c)));
    const double x1 = static_cast<double>(set.column_key(c)) + 1.0;
    const double ylo = std::floor(line.u * x0 + line.v);
    const double yhi = std::floor(line.u * x1 + line.v);
    if (yhi < bb.ymin || ylo > bb.ymax) continue;
    for (const Point& p : set.column_slice(c, ylo, yhi)) {
      if (p.x < 0.0 || p.x > x_max) continue;
      if (p.y == std::floor(line.u * p.x + line.v)) fn(p.y);
    }
  }
}

}  // namespace

std::vector<std::int64_t> slice_floor_line(const PointSet& set, const FloorLine& line,
                                           double x_max) {
  std::vector<std::int64_t> heights;
  for_each_floor_hit(set, line, x_max, [&](double y) {
    const auto h = static_cast<std::int64_t>(y);
    if (heights.empty() || heights.back() != h) heights.push_back(h);
  });
  return heights;
}

std::size_t floor_line_count(const PointSet& set, const FloorLine& line, double x_max) {
  std::size_t count = 0;
  double last = std::numeric_limits<double>::quiet_NaN();
  for_each_floor_hit(set, line, x_max, [&](double y) {
    if (!(y == last)) {
      ++count;
      last = y;
    }
  });
  return count;
}

}  // namespace latslice
