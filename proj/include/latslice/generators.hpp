#pragma once

/**
 * @file generators.hpp
 * @brief Example sets: unit-spaced lines, the parabolic staircase, the
 * zig-zag cone, cone annuli / staircases, Cartesian grids and random sets of
 * prescribed mass dimension.
 *
 * Sets that explode past desk scale (the 2^(2^k) cone constructions) come in
 * an implicit form: a membership predicate plus exact counting by row
 * summation, which stays cheap because only the populated bands are visited.
 */

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "latslice/geometry.hpp"

namespace latslice {

enum class GeneratorKind {
  unit_line,
  parabolic_staircase,
  zigzag,
  cone_annuli,
  cone_staircase,
  cone_fixed_width,
  cartesian,
  random_dim,
};

enum class GenerationMode { materialize, implicit };

[[nodiscard]] GeneratorKind parse_generator_kind(const std::string& name);
[[nodiscard]] std::string to_string(GeneratorKind kind);
[[nodiscard]] GenerationMode parse_generation_mode(const std::string& name);

/// Lattice set known through a predicate and exact counting routines.
class ImplicitSet {
 public:
  virtual ~ImplicitSet() = default;

  [[nodiscard]] virtual std::string kind() const = 0;
  [[nodiscard]] virtual bool contains(Point p) const = 0;
  /// Exact count in an axis-aligned box (any kind except slanted).
  [[nodiscard]] virtual std::uint64_t count_in_box(const BoxSpec& box) const = 0;
  /// Exact count of set ∩ tube ∩ box.
  [[nodiscard]] virtual std::uint64_t count_in_tube(const Tube& tube, const BoxSpec& box) const = 0;
  [[nodiscard]] virtual Rect extent() const = 0;
  [[nodiscard]] virtual std::uint64_t size() const = 0;
  /// Throws ConfigError when the set exceeds max_points.
  [[nodiscard]] virtual PointSet materialize(std::uint64_t max_points = 50'000'000) const = 0;
  [[nodiscard]] virtual nlohmann::json descriptor() const = 0;
};

// --- Unit-spaced line ---------------------------------------------------------

/// count points spaced exactly one apart along y = m*x from the origin.
[[nodiscard]] PointSet gen_unit_line(double m, std::int64_t count);

// --- Parabolic staircase ------------------------------------------------------

/// Columns x = m^2 (1 <= m <= M) carrying the m points y = 0..m-1, so that
/// [0,N^2]^2 holds N(N+1)/2 points.
class ParabolicStaircase final : public ImplicitSet {
 public:
  explicit ParabolicStaircase(std::int64_t columns);

  [[nodiscard]] std::int64_t columns() const { return columns_; }
  [[nodiscard]] std::string kind() const override { return "parabolic_staircase"; }
  [[nodiscard]] bool contains(Point p) const override;
  [[nodiscard]] std::uint64_t count_in_box(const BoxSpec& box) const override;
  [[nodiscard]] std::uint64_t count_in_tube(const Tube& tube, const BoxSpec& box) const override;
  [[nodiscard]] Rect extent() const override;
  [[nodiscard]] std::uint64_t size() const override;
  [[nodiscard]] PointSet materialize(std::uint64_t max_points = 50'000'000) const override;
  [[nodiscard]] nlohmann::json descriptor() const override;

 private:
  std::int64_t columns_;
};

[[nodiscard]] PointSet gen_parabolic_staircase(std::int64_t columns);

// --- Zig-zag staircase in a cone ----------------------------------------------

struct ZigzagTrace {
  std::vector<Point> corners;  // corners[n] = [[1+AB, A], [B, 1]]^n (1, 1)
  double a = 0.0;              // 1 - cot(pi/4 + delta)
  double b = 0.0;              // tan(pi/4 + delta) - 1
  double lambda1 = 1.0;
  double lambda2 = 1.0;
  double cone_slope = 1.0;     // tan(pi/4 + delta)
};

struct ZigzagResult {
  PointSet points;
  ZigzagTrace trace;
  std::int64_t levels_built = 0;
  bool truncated = false;
  std::string stop_reason;
};

[[nodiscard]] ZigzagTrace zigzag_trace(double delta, std::int64_t levels);
/// Lattice staircase between y = x and y = x*tan(pi/4 + delta) from (1,1).
/// Stops early (truncated = true) once corners leave the exact-integer range
/// of doubles or the point budget is spent.
[[nodiscard]] ZigzagResult gen_zigzag(double delta, std::int64_t levels,
                                      std::uint64_t max_points = 50'000'000);

// --- Bands of lattice rows inside angular sectors -----------------------------

/// Rows [y_begin, y_end) whose lattice points lie in a sector measured from
/// the positive y-axis: angle_lo <= atan(x / y) < angle_hi.
struct SectorBand {
  std::int64_t level = 0;
  std::int64_t y_begin = 0;
  std::int64_t y_end = 0;
  double angle_lo = 0.0;
  double angle_hi = 0.0;
};

class SectorBandSet : public ImplicitSet {
 public:
  [[nodiscard]] const std::vector<SectorBand>& bands() const { return bands_; }
  /// Integer x-range of row y inside band; empty when xlo > xhi.
  [[nodiscard]] std::pair<std::int64_t, std::int64_t> row_range(const SectorBand& band,
                                                                std::int64_t y) const;
  [[nodiscard]] std::uint64_t band_count(const SectorBand& band) const;

  [[nodiscard]] bool contains(Point p) const override;
  [[nodiscard]] std::uint64_t count_in_box(const BoxSpec& box) const override;
  [[nodiscard]] std::uint64_t count_in_tube(const Tube& tube, const BoxSpec& box) const override;
  [[nodiscard]] Rect extent() const override;
  [[nodiscard]] std::uint64_t size() const override;
  [[nodiscard]] PointSet materialize(std::uint64_t max_points = 50'000'000) const override;

 protected:
  std::vector<SectorBand> bands_;
};

/// The cone of width theta about the y-axis, filled between
/// heights 2^(2^(k+1)) (inclusive) and 2^(2^k) + 2^(2^(k+1)) (exclusive).
class ConeAnnuli final : public SectorBandSet {
 public:
  ConeAnnuli(double theta, std::int64_t k_min, std::int64_t k_max);

  /// theta * 2^(3*2^k), the band area the construction aims for.
  [[nodiscard]] static double band_area_estimate(double theta, std::int64_t k);

  [[nodiscard]] std::string kind() const override { return "cone_annuli"; }
  [[nodiscard]] nlohmann::json descriptor() const override;

 private:
  double theta_;
  std::int64_t k_min_;
  std::int64_t k_max_;
};

/// Chunk k sits just above 2^(2^(k+1)), is 2^(2^k) rows tall and
/// spans angular width theta / 2^(2^k), each chunk to the right of the last.
class ConeStaircase final : public SectorBandSet {
 public:
  ConeStaircase(double theta, std::int64_t k_min, std::int64_t k_max);

  /// theta * sum_{k=k_min..k_max} 2^(-2^k).
  [[nodiscard]] double total_angle() const;
  [[nodiscard]] std::string kind() const override { return "cone_staircase"; }
  [[nodiscard]] nlohmann::json descriptor() const override;

 private:
  double theta_;
  std::int64_t k_min_;
  std::int64_t k_max_;
};

/// Fixed angular width theta / 2^(2^k0); level j (j > k0) sits
/// just above 2^(2^j), is 2^(2^(j-1)) rows tall and occupies the next slot.
class ConeFixedWidth final : public SectorBandSet {
 public:
  ConeFixedWidth(double theta, std::int64_t k0, std::int64_t j_max);

  /// log2 of theta * 2^((2^(j-k0) + 2^(j-k0-1) - 1) * 2^k0): the area of the
  /// chunk at level j predicted by the construction.
  [[nodiscard]] static double chunk_area_log2(double theta, std::int64_t k0, std::int64_t j);
  [[nodiscard]] std::string kind() const override { return "cone_fixed_width"; }
  [[nodiscard]] nlohmann::json descriptor() const override;

 private:
  double theta_;
  std::int64_t k0_;
  std::int64_t j_max_;
};

// --- Cartesian products and random sets -------------------------------------

/// All pairs (a, b), a in xs, b in ys. Values must be nonnegative.
[[nodiscard]] PointSet gen_cartesian(const std::vector<std::int64_t>& xs,
                                     const std::vector<std::int64_t>& ys);

/// Lattice points in [0, l_max]^2; a point with max(x, y) in [2^j, 2^(j+1))
/// is kept with probability min(1, 2^(j(alpha-2))), the block [0,2)^2 always.
[[nodiscard]] PointSet gen_random_dimension(double alpha, std::int64_t l_max, std::uint64_t seed);

/// One-dimensional analogue on {1..n_max}: n in [2^j, 2^(j+1)) kept with
/// probability 2^(j(alpha-1)).
[[nodiscard]] std::vector<std::int64_t> gen_random_dimension_1d(double alpha, std::int64_t n_max,
                                                                std::uint64_t seed);

// --- JSON-driven front end ---------------------------------------------------

struct GeneratorParams {
  double m = 1.0;
  std::int64_t count = 100;
  std::int64_t columns = 16;
  double delta = 0.2;
  std::int64_t levels = 10;
  double theta = 0.2;
  std::int64_t k_min = 0;
  std::int64_t k_max = 2;
  std::int64_t k0 = 1;
  std::vector<std::int64_t> xs;
  std::vector<std::int64_t> ys;
  double alpha = 1.5;
  std::int64_t l_max = 1024;
  std::uint64_t seed = 0;
};

/// Reads known keys from a JSON object; unknown keys raise ConfigError.
[[nodiscard]] GeneratorParams parse_generator_params(GeneratorKind kind, const nlohmann::json& params);
[[nodiscard]] nlohmann::json to_json(GeneratorKind kind, const GeneratorParams& params);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::unit_line;
  GeneratorParams params;
  GenerationMode mode = GenerationMode::materialize;
};

struct GeneratedSet {
  std::optional<PointSet> points;
  std::shared_ptr<const ImplicitSet> implicit;
  nlohmann::json info;  // generator-specific extras (zig-zag trace, ...)
};

[[nodiscard]] GeneratedSet generate(const GeneratorSpec& spec);

}  // namespace latslice
