#pragma once

/**
 * @file finite_field.hpp
 * @brief Brute-force incidence counting between subsets of F_p^2 and the
 * non-vertical lines y = u*x + v.
 *
 * Sets are dense p x p membership grids; p is limited to 10^4 and checked
 * for primality by trial division.
 */

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

namespace latslice {

[[nodiscard]] bool is_prime(std::int64_t n);

class FiniteFieldSet {
 public:
  /// Empty subset of F_p^2. Throws ConfigError unless p is a prime <= 10^4.
  explicit FiniteFieldSet(std::int64_t p);

  static FiniteFieldSet full(std::int64_t p);
  /// Each cell kept independently with probability density.
  static FiniteFieldSet random(std::int64_t p, double density, std::uint64_t seed);
  /// Coordinates must lie in [0, p).
  static FiniteFieldSet from_points(std::int64_t p, const std::vector<std::pair<std::int64_t, std::int64_t>>& pts);

  [[nodiscard]] std::int64_t p() const { return p_; }
  [[nodiscard]] std::uint64_t cardinality() const { return cardinality_; }
  [[nodiscard]] bool contains(std::int64_t x, std::int64_t y) const {
    return cells_[static_cast<std::size_t>(x * p_ + y)] != 0;
  }
  void insert(std::int64_t x, std::int64_t y);
  [[nodiscard]] std::vector<std::pair<std::int64_t, std::int64_t>> points() const;

 private:
  std::int64_t p_;
  std::vector<std::uint8_t> cells_;  // x-major
  std::uint64_t cardinality_ = 0;
};

/// The p points (x, u*x + v mod p), x = 0..p-1.
[[nodiscard]] std::vector<std::pair<std::int64_t, std::int64_t>> ff_line_points(std::int64_t p, std::int64_t u,
                                                                                std::int64_t v);

[[nodiscard]] std::uint64_t ff_slice_count(const FiniteFieldSet& set, std::int64_t u, std::int64_t v);

/// Slice counts of all p^2 lines, indexed u*p + v.
[[nodiscard]] std::vector<std::uint32_t> ff_all_slice_counts(const FiniteFieldSet& set);

/// Sum of ff_slice_count over all p^2 lines, enumerated line by line.
/// Throws InvariantViolation if it differs from |B| * p.
[[nodiscard]] std::uint64_t ff_double_count(const FiniteFieldSet& set);

struct ChebyshevResult {
  double k = 0.0;
  std::uint64_t good_lines = 0;   // lines with count <= k|B|/p
  std::uint64_t total_lines = 0;  // p^2
  double fraction = 0.0;
  double floor = 0.0;             // 1 - 1/k
  bool holds = false;             // fraction >= floor, compared exactly
};

/// Fraction of lines with count * p <= k * |B|. Requires |B| >= 1, k > 0.
[[nodiscard]] ChebyshevResult ff_chebyshev_fraction(const FiniteFieldSet& set, double k);

/// |A ∩ (u*B + v)| over F_p with set semantics. A and B are reduced mod p.
[[nodiscard]] std::uint64_t ff_affine_intersection(std::int64_t p, const std::vector<std::int64_t>& a,
                                                   const std::vector<std::int64_t>& b, std::int64_t u,
                                                   std::int64_t v);

/// The product set {(x, y) : x in B, y in A}.
[[nodiscard]] FiniteFieldSet ff_product_set(std::int64_t p, const std::vector<std::int64_t>& a,
                                            const std::vector<std::int64_t>& b);

/// Number of distinct heights y among the points of set on y = u*x + v.
[[nodiscard]] std::uint64_t ff_slice_height_count(const FiniteFieldSet& set, std::int64_t u, std::int64_t v);

enum class SetFamily { random_density, full, singleton };

struct ExceptionRow {
  std::int64_t p = 0;
  std::uint64_t cardinality = 0;
  ChebyshevResult chebyshev;
};

/// For each prime, builds one set of the family and measures the good
/// fraction with k = ln p (or k_fixed when positive).
[[nodiscard]] std::vector<ExceptionRow> ff_exception_limit_table(SetFamily family, const std::vector<std::int64_t>& primes,
                                                                 double density, std::uint64_t seed,
                                                                 double k_fixed = 0.0);

/// Parses "random:<density>:<seed>", "full" or "singleton".
[[nodiscard]] FiniteFieldSet parse_ff_set_source(std::int64_t p, const std::string& spec);

[[nodiscard]] nlohmann::json to_json(const ChebyshevResult& r);

}  // namespace latslice
