#include "latslice/finite_field.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <random>

#include "latslice/errors.hpp"
#include "latslice/parallel.hpp"

namespace latslice {

namespace {

constexpr std::int64_t kMaxPrime = 10'000;

std::int64_t mod(std::int64_t a, std::int64_t p) {
  const std::int64_t r = a % p;
  return r < 0 ? r + p : r;
}

void check_element(std::int64_t value, std::int64_t p, const char* name) {
  if (value < 0 || value >= p) {
    throw ConfigError(std::string(name) + ": " + std::to_string(value) + " is not in [0, " + std::to_string(p) + ")");
  }
}

}  // namespace

bool is_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

FiniteFieldSet::FiniteFieldSet(std::int64_t p) : p_(p) {
  if (!is_prime(p)) throw ConfigError("p: " + std::to_string(p) + " is not prime");
  if (p > kMaxPrime) throw ConfigError("p: primes above 10000 are not supported");
  cells_.assign(static_cast<std::size_t>(p * p), 0);
}

FiniteFieldSet FiniteFieldSet::full(std::int64_t p) {
  FiniteFieldSet set(p);
  std::fill(set.cells_.begin(), set.cells_.end(), 1);
  set.cardinality_ = static_cast<std::uint64_t>(p * p);
  return set;
}

FiniteFieldSet FiniteFieldSet::random(std::int64_t p, double density, std::uint64_t seed) {
  if (!(density >= 0.0 && density <= 1.0)) throw ConfigError("density: must lie in [0, 1]");
  FiniteFieldSet set(p);
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution keep(density);
  for (auto& cell : set.cells_) {
    cell = keep(rng) ? 1 : 0;
    set.cardinality_ += cell;
  }
  return set;
}

FiniteFieldSet FiniteFieldSet::from_points(std::int64_t p,
                                           const std::vector<std::pair<std::int64_t, std::int64_t>>& pts) {
  FiniteFieldSet set(p);
  for (const auto& [x, y] : pts) set.insert(x, y);
  return set;
}

void FiniteFieldSet::insert(std::int64_t x, std::int64_t y) {
  check_element(x, p_, "x");
  check_element(y, p_, "y");
  auto& cell = cells_[static_cast<std::size_t>(x * p_ + y)];
  if (cell == 0) {
    cell = 1;
    ++cardinality_;
  }
}

std::vector<std::pair<std::int64_t, std::int64_t>> FiniteFieldSet::points() const {
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  out.reserve(cardinality_);
  for (std::int64_t x = 0; x < p_; ++x) {
    for (std::int64_t y = 0; y < p_; ++y) {
      if (contains(x, y)) out.emplace_back(x, y);
    }
  }
  return out;
}

std::vector<std::pair<std::int64_t, std::int64_t>> ff_line_points(std::int64_t p, std::int64_t u, std::int64_t v) {
  if (!is_prime(p)) throw ConfigError("p: " + std::to_string(p) + " is not prime");
  check_element(u, p, "u");
  check_element(v, p, "v");
  std::vector<std::pair<std::int64_t, std::int64_t>> out;
  out.reserve(static_cast<std::size_t>(p));
  for (std::int64_t x = 0; x < p; ++x) out.emplace_back(x, (u * x + v) % p);
  return out;
}

std::uint64_t ff_slice_count(const FiniteFieldSet& set, std::int64_t u, std::int64_t v) {
  const std::int64_t p = set.p();
  check_element(u, p, "u");
  check_element(v, p, "v");
  std::uint64_t count = 0;
  std::int64_t y = v;
  for (std::int64_t x = 0; x < p; ++x) {
    count += set.contains(x, y) ? 1 : 0;
    y += u;
    if (y >= p) y -= p;
  }
  return count;
}

std::vector<std::uint32_t> ff_all_slice_counts(const FiniteFieldSet& set) {
  const std::int64_t p = set.p();
  const auto pts = set.points();
  std::vector<std::uint32_t> counts(static_cast<std::size_t>(p * p), 0);
  // A point (x, y) lies on exactly one line of slope u: the one with v = y - u*x.
  parallel_for(static_cast<std::size_t>(p), [&](std::size_t ui) {
    const auto u = static_cast<std::int64_t>(ui);
    std::uint32_t* row = counts.data() + ui * static_cast<std::size_t>(p);
    for (const auto& [x, y] : pts) ++row[mod(y - u * x, p)];
  });
  return counts;
}

std::uint64_t ff_double_count(const FiniteFieldSet& set) {
  const std::int64_t p = set.p();
  std::vector<std::uint64_t> per_slope(static_cast<std::size_t>(p), 0);
  parallel_for(static_cast<std::size_t>(p), [&](std::size_t ui) {
    for (std::int64_t v = 0; v < p; ++v) per_slope[ui] += ff_slice_count(set, static_cast<std::int64_t>(ui), v);
  });
  std::uint64_t total = 0;
  for (auto s : per_slope) total += s;
  const std::uint64_t expected = set.cardinality() * static_cast<std::uint64_t>(p);
  if (total != expected) {
    throw InvariantViolation("double count " + std::to_string(total) + " != |B|p = " + std::to_string(expected));
  }
  return total;
}

ChebyshevResult ff_chebyshev_fraction(const FiniteFieldSet& set, double k) {
  if (!(k > 0.0) || !std::isfinite(k)) throw ConfigError("k: must be a positive number");
  if (set.cardinality() == 0) throw ConfigError("set: Chebyshev fraction needs a nonempty set");
  const auto counts = ff_all_slice_counts(set);
  const auto p = static_cast<long double>(set.p());
  const long double limit = static_cast<long double>(k) * static_cast<long double>(set.cardinality());
  ChebyshevResult r;
  r.k = k;
  r.total_lines = counts.size();
  for (auto c : counts) {
    if (static_cast<long double>(c) * p <= limit) ++r.good_lines;
  }
  r.fraction = static_cast<double>(r.good_lines) / static_cast<double>(r.total_lines);
  r.floor = 1.0 - 1.0 / k;
  // good/total >= 1 - 1/k  <=>  k * bad <= total
  const auto bad = static_cast<long double>(r.total_lines - r.good_lines);
  r.holds = static_cast<long double>(k) * bad <= static_cast<long double>(r.total_lines);
  return r;
}

namespace {

std::vector<std::uint8_t> indicator(std::int64_t p, const std::vector<std::int64_t>& values) {
  std::vector<std::uint8_t> out(static_cast<std::size_t>(p), 0);
  for (auto a : values) out[static_cast<std::size_t>(mod(a, p))] = 1;
  return out;
}

}  // namespace

std::uint64_t ff_affine_intersection(std::int64_t p, const std::vector<std::int64_t>& a,
                                     const std::vector<std::int64_t>& b, std::int64_t u, std::int64_t v) {
  if (!is_prime(p)) throw ConfigError("p: " + std::to_string(p) + " is not prime");
  check_element(u, p, "u");
  check_element(v, p, "v");
  const auto in_a = indicator(p, a);
  const auto in_b = indicator(p, b);
  std::vector<std::uint8_t> image(static_cast<std::size_t>(p), 0);
  for (std::int64_t x = 0; x < p; ++x) {
    if (in_b[static_cast<std::size_t>(x)]) image[static_cast<std::size_t>((u * x + v) % p)] = 1;
  }
  std::uint64_t count = 0;
  for (std::size_t y = 0; y < image.size(); ++y) count += (image[y] && in_a[y]) ? 1 : 0;
  return count;
}

FiniteFieldSet ff_product_set(std::int64_t p, const std::vector<std::int64_t>& a,
                              const std::vector<std::int64_t>& b) {
  FiniteFieldSet set(p);
  const auto in_a = indicator(p, a);
  const auto in_b = indicator(p, b);
  for (std::int64_t x = 0; x < p; ++x) {
    if (!in_b[static_cast<std::size_t>(x)]) continue;
    for (std::int64_t y = 0; y < p; ++y) {
      if (in_a[static_cast<std::size_t>(y)]) set.insert(x, y);
    }
  }
  return set;
}

std::uint64_t ff_slice_height_count(const FiniteFieldSet& set, std::int64_t u, std::int64_t v) {
  const std::int64_t p = set.p();
  check_element(u, p, "u");
  check_element(v, p, "v");
  std::vector<std::uint8_t> seen(static_cast<std::size_t>(p), 0);
  std::uint64_t count = 0;
  for (std::int64_t x = 0; x < p; ++x) {
    const std::int64_t y = (u * x + v) % p;
    if (set.contains(x, y) && !seen[static_cast<std::size_t>(y)]) {
      seen[static_cast<std::size_t>(y)] = 1;
      ++count;
    }
  }
  return count;
}

std::vector<ExceptionRow> ff_exception_limit_table(SetFamily family, const std::vector<std::int64_t>& primes,
                                                   double density, std::uint64_t seed, double k_fixed) {
  for (std::size_t i = 1; i < primes.size(); ++i) {
    if (primes[i] <= primes[i - 1]) throw ConfigError("primes: must be increasing");
  }
  std::vector<ExceptionRow> rows;
  for (std::int64_t p : primes) {
    FiniteFieldSet set = [&] {
      switch (family) {
        case SetFamily::full: return FiniteFieldSet::full(p);
        case SetFamily::singleton: return FiniteFieldSet::from_points(p, {{1, 1}});
        case SetFamily::random_density: break;
      }
      return FiniteFieldSet::random(p, density, seed + static_cast<std::uint64_t>(p));
    }();
    if (set.cardinality() == 0) set.insert(0, 0);
    const double k = k_fixed > 0.0 ? k_fixed : std::log(static_cast<double>(p));
    rows.push_back({p, set.cardinality(), ff_chebyshev_fraction(set, k)});
  }
  return rows;
}

FiniteFieldSet parse_ff_set_source(std::int64_t p, const std::string& spec) {
  if (spec == "full") return FiniteFieldSet::full(p);
  if (spec == "singleton") return FiniteFieldSet::from_points(p, {{1 % p, 1 % p}});
  const std::string prefix = "random:";
  if (spec.rfind(prefix, 0) == 0) {
    const std::string rest = spec.substr(prefix.size());
    const auto colon = rest.find(':');
    if (colon == std::string::npos) throw ConfigError("set: expected random:<density>:<seed>");
    double density = 0.0;
    std::uint64_t seed = 0;
    const std::string d = rest.substr(0, colon);
    const std::string s = rest.substr(colon + 1);
    const auto r1 = std::from_chars(d.data(), d.data() + d.size(), density);
    const auto r2 = std::from_chars(s.data(), s.data() + s.size(), seed);
    if (r1.ec != std::errc{} || r1.ptr != d.data() + d.size() || r2.ec != std::errc{} ||
        r2.ptr != s.data() + s.size()) {
      throw ConfigError("set: expected random:<density>:<seed>, got '" + spec + "'");
    }
    return FiniteFieldSet::random(p, density, seed);
  }
  throw ConfigError("set: unknown source '" + spec + "'");
}

nlohmann::json to_json(const ChebyshevResult& r) {
  return {{"k", r.k},
          {"good_lines", r.good_lines},
          {"total_lines", r.total_lines},
          {"fraction", r.fraction},
          {"floor", r.floor},
          {"holds", r.holds}};
}

}  // namespace latslice
