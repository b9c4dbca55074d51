#include "latslice/repro.hpp"

#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <set>

#include "latslice/dimension.hpp"
#include "latslice/errors.hpp"
#include "latslice/finite_field.hpp"
#include "latslice/generators.hpp"
#include "latslice/survey.hpp"

namespace latslice {

namespace {

using Json = nlohmann::json;

std::uint64_t seed_offset(const Json& params) {
  return params.is_object() && params.contains("seed") ? params["seed"].get<std::uint64_t>() : 0;
}

// 100 random subsets per prime; density drawn per set, empty draws get one point.
std::vector<FiniteFieldSet> ff_battery(std::int64_t p, std::uint64_t seed, int count = 100) {
  std::mt19937_64 rng(seed * 7919 + static_cast<std::uint64_t>(p));
  std::uniform_real_distribution<double> density(0.0, 1.0);
  std::vector<FiniteFieldSet> out;
  for (int i = 0; i < count; ++i) {
    FiniteFieldSet set = FiniteFieldSet::random(p, density(rng), rng());
    if (set.cardinality() == 0) set.insert(static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(p)), 0);
    out.push_back(std::move(set));
  }
  return out;
}

CriterionResult make_result(int id, std::string name) {
  CriterionResult r;
  r.id = id;
  r.name = std::move(name);
  return r;
}

const std::vector<std::int64_t> kBatteryPrimes{3, 5, 7, 11, 13, 17, 31};

CriterionResult ff_identity(const std::vector<std::int64_t>& primes, std::uint64_t seed) {
  CriterionResult r = make_result(1, "ff-identity");
  std::uint64_t checked = 0;
  r.passed = true;
  for (auto p : primes) {
    for (const auto& set : ff_battery(p, seed)) {
      try {
        (void)ff_double_count(set);
        ++checked;
      } catch (const InvariantViolation& e) {
        r.passed = false;
        r.detail["failures"].push_back(e.what());
      }
    }
  }
  r.detail["primes"] = primes;
  r.detail["sets_checked"] = checked;
  r.summary = std::to_string(checked) + " sets: sum of slice counts equals |B|p";
  return r;
}

CriterionResult ff_chebyshev(const std::vector<std::int64_t>& primes, std::uint64_t seed) {
  CriterionResult r = make_result(2, "ff-chebyshev");
  r.passed = true;
  double worst_margin = std::numeric_limits<double>::infinity();
  std::uint64_t checked = 0;
  for (auto p : primes) {
    const double k = std::log(static_cast<double>(p));
    for (const auto& set : ff_battery(p, seed)) {
      const ChebyshevResult c = ff_chebyshev_fraction(set, k);
      worst_margin = std::min(worst_margin, c.fraction - c.floor);
      ++checked;
      if (!c.holds) {
        r.passed = false;
        r.detail["failures"].push_back({{"p", p}, {"cardinality", set.cardinality()}, {"result", to_json(c)}});
      }
    }
  }
  r.detail["sets_checked"] = checked;
  r.detail["worst_margin"] = worst_margin;
  r.summary = std::to_string(checked) + " sets: good fraction >= 1 - 1/ln p (worst margin " +
              std::to_string(worst_margin) + ")";
  return r;
}

CriterionResult ff_affine(std::uint64_t seed) {
  CriterionResult r = make_result(3, "ff-affine");
  r.passed = true;
  std::uint64_t checked = 0;
  for (std::int64_t p : {5, 11, 31}) {
    std::mt19937_64 rng(seed * 104729 + static_cast<std::uint64_t>(p));
    std::uniform_int_distribution<std::int64_t> elem(0, p - 1);
    std::bernoulli_distribution coin(0.5);
    for (int trial = 0; trial < 1000; ++trial) {
      std::vector<std::int64_t> a, b;
      for (std::int64_t x = 0; x < p; ++x) {
        if (coin(rng)) a.push_back(x);
        if (coin(rng)) b.push_back(x);
      }
      const auto u = elem(rng);
      const auto v = elem(rng);
      const auto direct = ff_affine_intersection(p, a, b, u, v);
      const auto sliced = ff_slice_height_count(ff_product_set(p, a, b), u, v);
      ++checked;
      if (direct != sliced) {
        r.passed = false;
        r.detail["failures"].push_back({{"p", p}, {"u", u}, {"v", v}, {"direct", direct}, {"slice", sliced}});
      }
    }
  }
  r.detail["cases"] = checked;
  r.summary = std::to_string(checked) + " cases: |A ∩ (uB+v)| equals the product-set line slice";
  return r;
}

CriterionResult tube_width(std::uint64_t seed) {
  CriterionResult r = make_result(4, "tube-width");
  std::mt19937_64 rng(seed + 4);
  std::uniform_real_distribution<double> log_u(std::log(1e-2), std::log(1e2));
  std::uniform_real_distribution<double> vd(-100.0, 100.0);
  double worst = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const Tube t = Tube::standard(std::exp(log_u(rng)), vd(rng));
    worst = std::max(worst, std::abs(tube_edge_distance(t) - 1.0));
  }
  r.passed = worst <= 1e-9;
  r.detail["max_abs_error"] = worst;
  r.summary = "10000 tubes: max |width - 1| = " + std::to_string(worst);
  return r;
}

CriterionResult example2_counts() {
  CriterionResult r = make_result(5, "example2-counts");
  const ParabolicStaircase staircase(1024);
  const PointSet points = staircase.materialize();
  r.passed = true;
  for (std::int64_t n = 1; n <= 1024; ++n) {
    const auto expected = static_cast<std::uint64_t>(n * (n + 1) / 2);
    const BoxSpec box = BoxSpec::first_quadrant(static_cast<double>(n * n));
    const auto implicit = staircase.count_in_box(box);
    const auto indexed = box_count(points, box);
    if (implicit != expected || indexed != expected) {
      r.passed = false;
      r.detail["failures"].push_back({{"N", n}, {"implicit", implicit}, {"indexed", indexed}});
    }
  }
  r.summary = "box [0,N^2]^2 holds N(N+1)/2 points for N = 1..1024";
  return r;
}

CriterionResult example2_dims() {
  CriterionResult r = make_result(6, "example2");
  const ParabolicStaircase staircase(1024);
  const double l = 1048576.0;
  const double ratio = log_ratio(staircase.count_in_box(BoxSpec::first_quadrant(l)), l);
  const double closed = std::log(524800.0) / std::log(1048576.0);
  const auto slice = tube_dim_along(staircase, Tube::horizontal(-0.5), dyadic_scales(l));
  r.passed = std::abs(ratio - closed) <= 1e-12 && slice.estimate >= 0.45 && slice.estimate <= 0.55;
  r.detail = {{"set_ratio", ratio},
              {"closed_form", closed},
              {"slice_estimate", slice.estimate},
              {"slice_ratios", slice.ratios}};
  r.summary = "set ratio " + std::to_string(ratio) + ", horizontal slice estimate " + std::to_string(slice.estimate);
  return r;
}

CriterionResult example3(std::uint64_t seed) {
  CriterionResult r = make_result(7, "example3");
  const ZigzagResult z = gen_zigzag(0.2, 30);
  const auto& corners = z.trace.corners;
  const double corner_ratio = corners[30].x / corners[29].x;
  const bool ratio_ok = std::abs(corner_ratio / z.trace.lambda1 - 1.0) <= 0.01;

  std::vector<double> scales;
  for (std::size_t n = 1; n < corners.size(); ++n) scales.push_back(corners[n].x);
  std::mt19937_64 rng(seed + 7);
  std::uniform_real_distribution<double> slope(1.0, z.trace.cone_slope);
  ProfileOptions options;
  options.method = EstimateMethod::regression_tail;

  bool counts_ok = true;
  double worst_estimate = 0.0;
  Json tubes = Json::array();
  for (int s = 0; s < 20; ++s) {
    const double m = slope(rng);
    const auto profile = tube_dim_along(z.points, Tube::standard(-1.0 / m, 0.0), scales, options);
    bool tube_ok = true;
    for (std::size_t i = 0; i < scales.size(); ++i) {
      if (static_cast<double>(profile.counts[i]) > 8.0 * std::log(scales[i])) tube_ok = false;
    }
    counts_ok = counts_ok && tube_ok;
    worst_estimate = std::max(worst_estimate, profile.estimate);
    tubes.push_back({{"slope", m},
                     {"final_count", profile.counts.back()},
                     {"estimate", profile.estimate},
                     {"ratio_max_tail", profile.ratio_max_tail},
                     {"counts_within_8ln", tube_ok}});
  }
  r.passed = ratio_ok && counts_ok && worst_estimate <= 0.15 && !z.truncated;
  r.detail = {{"lambda1", z.trace.lambda1},
              {"corner_ratio", corner_ratio},
              {"points", z.points.size()},
              {"worst_estimate", worst_estimate},
              {"tubes", tubes}};
  r.summary = "corner ratio " + std::to_string(corner_ratio) + " vs lambda1 " + std::to_string(z.trace.lambda1) +
              ", worst tube estimate " + std::to_string(worst_estimate);
  return r;
}

CriterionResult survey_bound() {
  CriterionResult r = make_result(8, "survey-bound");
  std::vector<Point> grid;
  for (int x = 0; x <= 256; ++x) {
    for (int y = 0; y <= 256; ++y) grid.push_back({static_cast<double>(x), static_cast<double>(y)});
  }
  SurveyConfig config;
  config.n = 256;
  config.m = 256.0;
  config.grid_u = 512;
  config.grid_v = 512;
  const SurveyReport s = survey_floor_lines(PointSet(std::move(grid)), config);
  const double n2_over_m = 256.0 * 256.0 / 256.0;
  r.passed = s.mean <= n2_over_m + s.resolution_term && s.good_fraction >= s.markov_floor;
  r.detail = {{"mean", s.mean},
              {"bound_N2_over_M", n2_over_m},
              {"bound_EN_over_M", s.bound},
              {"resolution_term", s.resolution_term},
              {"exact_mean", s.exact_mean},
              {"k", s.k},
              {"good_fraction", s.good_fraction},
              {"markov_floor", s.markov_floor}};
  r.summary = "mean " + std::to_string(s.mean) + " <= " + std::to_string(n2_over_m) + " + " +
              std::to_string(s.resolution_term) + "; good fraction " + std::to_string(s.good_fraction);
  return r;
}

PointSet oracle_set(std::mt19937_64& rng, int index) {
  std::uniform_int_distribution<int> size_pick(1, 100000);
  const int target = index == 0 ? 100000 : size_pick(rng);
  switch (index % 3) {
    case 0: {
      std::uniform_int_distribution<std::int64_t> coord(0, 2000);
      std::set<std::pair<std::int64_t, std::int64_t>> cells;
      while (static_cast<int>(cells.size()) < target) cells.emplace(coord(rng), coord(rng));
      std::vector<Point> pts;
      for (const auto& [x, y] : cells) pts.push_back({static_cast<double>(x), static_cast<double>(y)});
      return PointSet(std::move(pts));
    }
    case 1: {
      // About 5 l^alpha points in [0,l]^2; pick l to land near the target size.
      const double alpha = 1.0 + 0.9 * std::uniform_real_distribution<double>(0, 1)(rng);
      const auto l_max = std::max<std::int64_t>(16, static_cast<std::int64_t>(std::pow(target / 5.0, 1.0 / alpha)));
      return gen_random_dimension(alpha, l_max, rng());
    }
    default: {
      // Off-lattice points: one per lattice cell at a random offset.
      std::uniform_int_distribution<std::int64_t> coord(0, 1500);
      std::uniform_real_distribution<double> jitter(0.0, 0.999);
      std::set<std::pair<std::int64_t, std::int64_t>> cells;
      while (static_cast<int>(cells.size()) < target) cells.emplace(coord(rng), coord(rng));
      std::vector<Point> pts;
      for (const auto& [x, y] : cells) {
        pts.push_back({static_cast<double>(x) + jitter(rng), static_cast<double>(y) + jitter(rng)});
      }
      return PointSet(std::move(pts));
    }
  }
}

CriterionResult oracle(std::uint64_t seed) {
  CriterionResult r = make_result(9, "oracle");
  std::mt19937_64 rng(seed + 9);
  r.passed = true;
  std::uint64_t queries = 0;
  std::size_t largest = 0;
  for (int i = 0; i < 50; ++i) {
    const PointSet set = oracle_set(rng, i);
    largest = std::max(largest, set.size());
    const Rect bb = set.bbox();
    const double span = std::max(bb.xmax, bb.ymax) + 2.0;
    std::uniform_real_distribution<double> pos(-2.0, span);
    std::uniform_real_distribution<double> len(0.0, span);
    std::uniform_real_distribution<double> log_u(std::log(1e-2), std::log(1e2));
    std::uniform_real_distribution<double> vrange(-span, span);
    auto check = [&](std::uint64_t indexed, std::uint64_t naive, const std::string& what) {
      ++queries;
      if (indexed != naive) {
        r.passed = false;
        r.detail["failures"].push_back({{"set", i}, {"query", what}, {"indexed", indexed}, {"naive", naive}});
      }
    };
    for (int q = 0; q < 3; ++q) {
      const BoxSpec boxes[] = {
          BoxSpec::first_quadrant(len(rng)), BoxSpec::centered(len(rng)),
          BoxSpec::window(pos(rng), pos(rng), len(rng) / 4.0),
          BoxSpec::slanted(len(rng), (q % 2 ? 1.0 : -1.0) * std::exp(log_u(rng)), vrange(rng) / 4.0)};
      for (const BoxSpec& box : boxes) {
        std::uint64_t naive = 0;
        for (const Point& p : set.points()) naive += box_contains(box, p) ? 1 : 0;
        check(box_count(set, box), naive, "box");
      }
      const double su = (q % 2 ? -1.0 : 1.0) * std::exp(log_u(rng));
      const Tube tubes[] = {Tube::standard(su, vrange(rng) / std::sqrt(1.0 + 1.0 / (su * su))),
                            Tube::horizontal(std::floor(pos(rng)) + (q == 0 ? 0.0 : 0.5))};
      for (const Tube& tube : tubes) {
        std::vector<Point> naive;
        for (const Point& p : set.points()) {
          if (tube_contains(tube, p)) naive.push_back(p);
        }
        const PointSet sliced = slice_tube(set, tube);
        const bool same = sliced.size() == naive.size() &&
                          std::equal(sliced.points().begin(), sliced.points().end(), PointSet(naive).points().begin());
        check(same ? 1 : 0, 1, "tube");
      }
      const FloorLine line{std::exp(log_u(rng)), std::uniform_real_distribution<double>(0.0, 50.0)(rng)};
      const double x_max = len(rng);
      std::set<std::int64_t> heights;
      for (const Point& p : set.points()) {
        if (p.x >= 0.0 && p.x <= x_max && p.y == std::floor(line.u * p.x + line.v)) {
          heights.insert(static_cast<std::int64_t>(p.y));
        }
      }
      const auto got = slice_floor_line(set, line, x_max);
      check(std::vector<std::int64_t>(heights.begin(), heights.end()) == got ? 1 : 0, 1, "floor");
    }
  }
  r.detail = {{"sets", 50}, {"largest_set", largest}, {"queries", queries}};
  r.summary = "50 sets (largest " + std::to_string(largest) + " points), " + std::to_string(queries) +
              " indexed queries equal naive scans";
  return r;
}

CriterionResult levels() {
  CriterionResult r = make_result(10, "levels");
  const double slope = 2.0;
  const double u = -1.0 / slope;
  const double v = -0.5;
  const PointSet line = gen_unit_line(slope, 2048);
  LevelSearchConfig config{0.0, 1.0, 2048};
  const LevelProfile found = find_levels(line, u, v, config);

  bool strict = !found.levels.empty();
  const Tube tube = Tube::standard(u, v);
  for (std::size_t i = 0; i < found.levels.size(); ++i) {
    const auto m = static_cast<double>(found.levels[i]);
    const BoxSpec outer = BoxSpec::slanted(m, u, v);
    const BoxSpec inner = BoxSpec::slanted(m / 2.0, u, v);
    std::uint64_t recount = 0;
    for (const Point& p : line.points()) {
      if (tube_contains(tube, p) && box_contains(outer, p) && !box_contains(inner, p)) ++recount;
    }
    if (!(static_cast<double>(recount) > std::pow(m / 2.0, found.exponent))) strict = false;
  }

  // Points at distances k^2 along the same line: the tube grows like sqrt.
  std::vector<Point> sparse;
  const double c = 1.0 / std::sqrt(1.0 + slope * slope);
  for (int k = 2; k <= 45; ++k) sparse.push_back({k * k * c, k * k * slope * c});
  const LevelProfile none = find_levels(PointSet(std::move(sparse)), u, v, config);

  r.passed = strict && none.levels.empty();
  r.detail = {{"levels_found", found.levels.size()},
              {"first_levels", std::vector<std::int64_t>(found.levels.begin(),
                                                         found.levels.begin() +
                                                             static_cast<std::ptrdiff_t>(std::min<std::size_t>(8, found.levels.size())))},
              {"sparse_levels_found", none.levels.size()},
              {"search_bound", config.search_bound}};
  r.summary = std::to_string(found.levels.size()) + " levels on the unit line, all strict on recount; " +
              std::to_string(none.levels.size()) + " on the sparse line";
  return r;
}

CriterionResult ff_single_prime(std::int64_t p, std::uint64_t seed) {
  CriterionResult identity = ff_identity({p}, seed);
  CriterionResult cheb = ff_chebyshev({p}, seed);
  CriterionResult r = make_result(0, "ff");
  r.passed = identity.passed && cheb.passed;
  r.detail = {{"p", p}, {"identity", identity.detail}, {"chebyshev", cheb.detail}};
  r.summary = "p = " + std::to_string(p) + ": " + identity.summary + "; " + cheb.summary;
  return r;
}

template <typename Fn>
CriterionResult timed(Fn&& fn) {
  const auto start = std::chrono::steady_clock::now();
  CriterionResult r = fn();
  r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

std::vector<std::string> repro_names() {
  return {"ff-identity", "ff-chebyshev", "ff-affine", "tube-width", "example2-counts", "example2",
          "example3",    "survey-bound", "oracle",    "levels",     "ff",              "all"};
}

std::vector<CriterionResult> run_repro(const std::string& name, const nlohmann::json& params) {
  const std::uint64_t seed = seed_offset(params);
  const std::vector<std::pair<std::string, std::function<CriterionResult()>>> recipes{
      {"ff-identity", [&] { return ff_identity(kBatteryPrimes, seed); }},
      {"ff-chebyshev", [&] { return ff_chebyshev(kBatteryPrimes, seed); }},
      {"ff-affine", [&] { return ff_affine(seed); }},
      {"tube-width", [&] { return tube_width(seed); }},
      {"example2-counts", [] { return example2_counts(); }},
      {"example2", [] { return example2_dims(); }},
      {"example3", [&] { return example3(seed); }},
      {"survey-bound", [] { return survey_bound(); }},
      {"oracle", [&] { return oracle(seed); }},
      {"levels", [] { return levels(); }},
  };
  if (name == "ff") {
    std::int64_t p = 13;
    if (params.is_object() && params.contains("p")) p = params["p"].get<std::int64_t>();
    if (!is_prime(p)) throw ConfigError("p: " + std::to_string(p) + " is not prime");
    return {timed([&] { return ff_single_prime(p, seed); })};
  }
  std::vector<CriterionResult> out;
  for (const auto& [key, fn] : recipes) {
    if (name == "all" || name == key) out.push_back(timed(fn));
  }
  if (out.empty()) throw ConfigError("name: unknown recipe '" + name + "'");
  return out;
}

}  // namespace latslice
