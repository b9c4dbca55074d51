#pragma once

/**
 * @file geometry.hpp
 * @brief Points, unit-cell indexed point sets, tubes, floor lines and boxes.
 *
 * A PointSet is immutable once built. Its index sorts points by unit column
 * (floor x) and then by y, so every rectangle, tube or floor-line query only
 * touches the columns it crosses and, inside a column, a binary-searched y
 * range. All membership predicates are evaluated from their defining
 * formulas without tolerance.
 */

#include <atomic>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace latslice {

struct Point {
  double x = 0.0;
  double y = 0.0;

  friend constexpr bool operator==(const Point&, const Point&) = default;
};

struct Rect {
  double xmin = 0.0;
  double ymin = 0.0;
  double xmax = -1.0;
  double ymax = -1.0;

  [[nodiscard]] bool empty() const { return xmax < xmin || ymax < ymin; }
  [[nodiscard]] bool contains(Point p) const {
    return p.x >= xmin && p.x <= xmax && p.y >= ymin && p.y <= ymax;
  }
};

/// Exact minimum pairwise distance plus the pair realising it.
struct SeparationReport {
  double min_distance = 0.0;
  Point first;
  Point second;
  bool valid = false;  // min_distance >= 1
};

class PointSet {
 public:
  PointSet() = default;
  /// Throws ConfigError on non-finite coordinates.
  explicit PointSet(std::vector<Point> points);

  PointSet(const PointSet& other);
  PointSet& operator=(const PointSet& other);
  PointSet(PointSet&& other) noexcept;
  PointSet& operator=(PointSet&& other) noexcept;

  /// Points in index order: by unit column, then y, then x.
  [[nodiscard]] std::span<const Point> points() const { return points_; }
  [[nodiscard]] std::size_t size() const { return points_.size(); }
  [[nodiscard]] bool empty() const { return points_.empty(); }
  [[nodiscard]] const Rect& bbox() const { return bbox_; }
  [[nodiscard]] bool in_first_quadrant() const;

  /// Largest number of points sharing one unit cell.
  [[nodiscard]] std::size_t max_cell_occupancy() const { return max_cell_occupancy_; }
  [[nodiscard]] std::size_t column_count() const { return column_keys_.size(); }

  /// True once validate_separation has found min distance >= 1.
  [[nodiscard]] bool separation_checked() const {
    return separation_checked_.load(std::memory_order_relaxed);
  }

  /// Exact minimum pairwise distance. Requires a non-empty set.
  [[nodiscard]] SeparationReport validate_separation() const;

  /// Points with floor(x) in [cx_lo, cx_hi] and y in [ylo, yhi], column by column.
  template <typename Fn>
  void for_each_in_columns(std::int64_t cx_lo, std::int64_t cx_hi, double ylo, double yhi,
                           Fn&& fn) const;

  /// Points whose column is cx and whose y lies in [ylo, yhi].
  [[nodiscard]] std::span<const Point> column_slice(std::size_t column, double ylo,
                                                    double yhi) const;
  [[nodiscard]] std::int64_t column_key(std::size_t column) const { return column_keys_[column]; }
  /// Index of the first column whose key is >= cx.
  [[nodiscard]] std::size_t first_column_at_or_after(std::int64_t cx) const;

  /// Subset of points satisfying pred, keeping the index consistent.
  template <typename Pred>
  [[nodiscard]] PointSet filter(Pred&& pred) const;

 private:
  void build_index();

  std::vector<Point> points_;
  std::vector<std::int64_t> column_keys_;
  std::vector<std::size_t> column_begin_;  // size column_keys_.size() + 1
  Rect bbox_;
  std::size_t max_cell_occupancy_ = 0;
  mutable std::atomic<bool> separation_checked_{false};
};

[[nodiscard]] std::int64_t cell_of(double coordinate);

enum class TubeOrientation { standard, horizontal };

/// Width-one strip
///   -x/u + v*sqrt(1+1/u^2) < y <= -x/u + (v+1)*sqrt(1+1/u^2)
/// or, horizontally, v < y <= v+1. The perpendicular through the origin has
/// slope u and v is the displacement along it in width units.
struct Tube {
  double u = 1.0;
  double v = 0.0;
  TubeOrientation orientation = TubeOrientation::standard;

  /// Throws ConfigError unless u is finite and nonzero.
  static Tube standard(double u, double v);
  static Tube horizontal(double v);

  /// Vertical extent sqrt(1 + 1/u^2) of a standard tube.
  [[nodiscard]] double vertical_extent() const;
  /// Lower (open) and upper (closed) edge heights at abscissa x.
  [[nodiscard]] double lower_edge(double x) const;
  [[nodiscard]] double upper_edge(double x) const;
};

[[nodiscard]] bool tube_contains(const Tube& tube, Point p);

/// Perpendicular distance between the two edge lines.
[[nodiscard]] double tube_edge_distance(const Tube& tube);

/// The broken line y = floor(u*x + v), x >= 0.
struct FloorLine {
  double u = 1.0;
  double v = 0.0;

  /// Throws ConfigError unless u > 0 and v >= 0, both finite.
  static FloorLine make(double u, double v);
};

enum class BoxKind { axis_first_quadrant, axis_centered, slanted, axis_window };

/// Closed boxes: [0,l]^2, [-l,l]^2, [x0,x0+l]x[y0,y0+l], or the slanted
/// square B_n(u) that starts on the line y = u*x, has one pair of sides
/// parallel to the tube t_{u,v}, side n, and is centred on that tube.
struct BoxSpec {
  BoxKind kind = BoxKind::axis_first_quadrant;
  double size = 0.0;
  double u = 1.0;
  double v = 0.0;
  double x0 = 0.0;
  double y0 = 0.0;

  static BoxSpec first_quadrant(double l);
  static BoxSpec centered(double l);
  static BoxSpec slanted(double n, double u, double v = 0.0);
  static BoxSpec window(double x0, double y0, double l);

  /// Axis-aligned rectangle enclosing the box.
  [[nodiscard]] Rect bounds() const;
};

[[nodiscard]] bool box_contains(const BoxSpec& box, Point p);

/// Coordinates of p relative to the slanted frame of tube direction u:
/// along = distance above the line y = u*x, across = offset along (1,u).
struct SlantedCoords {
  double along;
  double across;
};
[[nodiscard]] SlantedCoords slanted_coords(double u, Point p);

[[nodiscard]] std::uint64_t box_count(const PointSet& set, const BoxSpec& box);

[[nodiscard]] PointSet slice_tube(const PointSet& set, const Tube& tube);
/// Number of points in set ∩ tube ∩ box without materialising the slice.
[[nodiscard]] std::uint64_t tube_box_count(const PointSet& set, const Tube& tube,
                                           const BoxSpec& box);

/// Distinct integer heights y with (x, y) in the set, 0 <= x <= x_max and
/// y = floor(u*x + v). Sorted ascending.
[[nodiscard]] std::vector<std::int64_t> slice_floor_line(const PointSet& set,
                                                         const FloorLine& line, double x_max);
/// Cardinality of slice_floor_line without allocating.
[[nodiscard]] std::size_t floor_line_count(const PointSet& set, const FloorLine& line,
                                           double x_max);

// ---------------------------------------------------------------------------

template <typename Fn>
void PointSet::for_each_in_columns(std::int64_t cx_lo, std::int64_t cx_hi, double ylo,
                                   double yhi, Fn&& fn) const {
  if (cx_hi < cx_lo) return;
  for (std::size_t c = first_column_at_or_after(cx_lo);
       c < column_keys_.size() && column_keys_[c] <= cx_hi; ++c) {
    for (const Point& p : column_slice(c, ylo, yhi)) fn(p);
  }
}

template <typename Pred>
PointSet PointSet::filter(Pred&& pred) const {
  std::vector<Point> kept;
  for (const Point& p : points_) {
    if (pred(p)) kept.push_back(p);
  }
  return PointSet(std::move(kept));
}

}  // namespace latslice
