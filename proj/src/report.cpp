#include "latslice/report.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <set>
#include <sstream>

#include "latslice/errors.hpp"
#include "latslice/finite_field.hpp"
#include "latslice/generators.hpp"
#include "latslice/parallel.hpp"
#include "latslice/point_io.hpp"
#include "latslice/repro.hpp"

#ifndef LATSLICE_VERSION
#define LATSLICE_VERSION "0.0.0"
#endif

namespace latslice {

namespace {

using Json = nlohmann::json;

void check_keys(const Json& params, std::initializer_list<const char*> allowed) {
  if (!params.is_object()) throw ConfigError("params: expected a JSON object");
  for (const auto& [key, value] : params.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw ConfigError(key + ": unknown parameter");
  }
}

template <typename T>
T get_or(const Json& params, const char* key, T fallback) {
  if (!params.contains(key) || params[key].is_null()) return fallback;
  try {
    return params[key].get<T>();
  } catch (const Json::exception&) {
    throw ConfigError(std::string(key) + ": wrong type");
  }
}

template <typename T>
T get_required(const Json& params, const char* key) {
  if (!params.contains(key)) throw ConfigError(std::string(key) + ": required");
  return get_or<T>(params, key, T{});
}

struct Input {
  std::optional<PointSet> points;
  std::shared_ptr<const ImplicitSet> implicit;
  Json info;
};

Input load_input(const Json& params) {
  Input input;
  if (params.contains("in")) {
    const auto path = get_required<std::string>(params, "in");
    input.points = PointSet(read_points(path));
    input.info = {{"source", path}, {"size", input.points->size()}};
    return input;
  }
  if (params.contains("generator")) {
    const Json& g = params["generator"];
    if (!g.is_object()) throw ConfigError("generator: expected an object");
    check_keys(g, {"kind", "params", "mode"});
    GeneratorSpec spec;
    spec.kind = parse_generator_kind(get_required<std::string>(g, "kind"));
    spec.params = parse_generator_params(spec.kind, g.value("params", Json::object()));
    spec.mode = parse_generation_mode(get_or<std::string>(g, "mode", "materialize"));
    GeneratedSet set = generate(spec);
    input.points = std::move(set.points);
    input.implicit = std::move(set.implicit);
    input.info = set.info;
    return input;
  }
  throw ConfigError("in: an input file or a generator is required");
}

const PointSet& require_points(Input& input) {
  if (!input.points) {
    if (!input.implicit) throw ConfigError("in: no input set");
    input.points = input.implicit->materialize();
  }
  return *input.points;
}

Json point_json(Point p) { return Json::array({p.x, p.y}); }

std::string timestamp_utc() {
  const auto now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::string points_text(std::span<const Point> points, const std::string& comment) {
  std::ostringstream out;
  format_points(out, points, comment);
  return out.str();
}

ProfileOptions profile_options(const Json& params) {
  ProfileOptions options;
  options.method = parse_estimate_method(get_or<std::string>(params, "method", "ratio_max_tail"));
  const auto window = get_or<std::int64_t>(params, "tail_window", 0);
  if (window < 0) throw ConfigError("tail_window: must be nonnegative");
  options.tail_window = static_cast<std::size_t>(window);
  return options;
}

// --- commands ------------------------------------------------------------

void run_generate(const RunConfig& config, Report& report) {
  const Json& params = config.params;
  check_keys(params, {"kind", "params", "mode"});
  GeneratorSpec spec;
  spec.kind = parse_generator_kind(get_required<std::string>(params, "kind"));
  spec.params = parse_generator_params(spec.kind, params.value("params", Json::object()));
  spec.mode = parse_generation_mode(get_or<std::string>(params, "mode", "materialize"));
  GeneratedSet set = generate(spec);

  report.results = set.info;
  report.results["mode"] = spec.mode == GenerationMode::materialize ? "materialize" : "implicit";
  if (set.points) {
    report.results["size"] = set.points->size();
    if (!set.points->empty()) {
      const SeparationReport sep = set.points->validate_separation();
      report.results["min_distance"] = sep.min_distance;
      report.results["separated"] = sep.valid;
    }
    if (!config.out.empty()) {
      report.files.emplace_back(config.out, points_text(set.points->points(), to_string(spec.kind) + " " +
                                                                               to_json(spec.kind, spec.params).dump()));
    }
  } else if (!config.out.empty()) {
    report.files.emplace_back(config.out, set.info.dump(2) + "\n");
  }
}

void run_validate(const RunConfig& config, Report& report) {
  check_keys(config.params, {"in", "generator"});
  Input input = load_input(config.params);
  const PointSet& set = require_points(input);
  report.results = {{"size", set.size()}, {"in_first_quadrant", set.in_first_quadrant()},
                    {"max_cell_occupancy", set.max_cell_occupancy()}};
  if (set.empty()) {
    report.results["separated"] = nullptr;
    report.results["note"] = "empty set: separation undefined";
    return;
  }
  const SeparationReport sep = set.validate_separation();
  report.results["min_distance"] = sep.min_distance;
  report.results["separated"] = sep.valid;
  if (set.size() >= 2) report.results["closest_pair"] = {point_json(sep.first), point_json(sep.second)};
}

void run_dim(const RunConfig& config, Report& report) {
  const Json& params = config.params;
  check_keys(params, {"in", "generator", "scales", "method", "box", "tail_window"});
  Input input = load_input(params);
  const auto scales = parse_scales(get_or<std::string>(params, "scales", "dyadic:1024"));
  const auto options = profile_options(params);
  const auto box = get_or<std::string>(params, "box", "first_quadrant");

  DimensionProfile profile;
  if (box == "counting") {
    profile = counting_dim_profile(require_points(input), scales, options);
  } else if (box == "first_quadrant" || box == "centered") {
    const bool centered = box == "centered";
    profile = input.points ? mass_dim_profile(*input.points, scales, centered, options)
                           : mass_dim_profile(*input.implicit, scales, centered, options);
  } else {
    throw ConfigError("box: expected first_quadrant, centered or counting");
  }
  report.results = {{"input", input.info}, {"box", box}, {"profile", to_json(profile)}};
  if (!config.out.empty()) report.files.emplace_back(config.out, format_profile_csv(profile));
}

Tube parse_tube(const Json& t) {
  if (!t.is_object()) throw ConfigError("tube: expected an object");
  check_keys(t, {"u", "v", "horizontal"});
  if (get_or<bool>(t, "horizontal", false)) return Tube::horizontal(get_or<double>(t, "v", 0.0));
  return Tube::standard(get_required<double>(t, "u"), get_or<double>(t, "v", 0.0));
}

void run_slice(const RunConfig& config, Report& report) {
  const Json& params = config.params;
  check_keys(params, {"in", "generator", "tube", "floor", "scales", "method", "tail_window"});
  Input input = load_input(params);
  if (params.contains("tube") == params.contains("floor")) {
    throw ConfigError("tube: give exactly one of tube or floor");
  }
  report.results["input"] = input.info;
  if (params.contains("floor")) {
    const Json& f = params["floor"];
    check_keys(f, {"u", "v", "x_max"});
    const FloorLine line = FloorLine::make(get_required<double>(f, "u"), get_or<double>(f, "v", 0.0));
    const double x_max = get_required<double>(f, "x_max");
    if (!(x_max > 0.0)) throw ConfigError("x_max: must be positive");
    const auto heights = slice_floor_line(require_points(input), line, x_max);
    report.results["floor"] = {{"u", line.u}, {"v", line.v}, {"x_max", x_max}, {"count", heights.size()}};
    if (!config.out.empty()) {
      std::ostringstream out;
      out << "# distinct heights on y = floor(" << format_double(line.u) << " x + " << format_double(line.v)
          << ")\n";
      for (auto h : heights) out << h << "\n";
      report.files.emplace_back(config.out, out.str());
    }
    return;
  }

  const Tube tube = parse_tube(params["tube"]);
  report.results["tube"] = {{"u", tube.u}, {"v", tube.v},
                            {"orientation", tube.orientation == TubeOrientation::horizontal ? "horizontal" : "standard"}};
  if (params.contains("scales")) {
    const auto scales = parse_scales(get_required<std::string>(params, "scales"));
    const auto options = profile_options(params);
    const DimensionProfile profile = input.points ? tube_dim_along(*input.points, tube, scales, options)
                                                  : tube_dim_along(*input.implicit, tube, scales, options);
    report.results["profile"] = to_json(profile);
  }
  if (input.points) {
    const PointSet slice = slice_tube(*input.points, tube);
    report.results["count"] = slice.size();
    if (!config.out.empty()) report.files.emplace_back(config.out, points_text(slice.points(), "tube slice"));
  } else if (!config.out.empty()) {
    throw ConfigError("out: implicit inputs only report profiles; drop --out or materialize");
  }
}

std::pair<std::int64_t, std::int64_t> parse_grid(const std::string& text) {
  const auto x = text.find('x');
  try {
    if (x == std::string::npos) throw std::invalid_argument(text);
    std::size_t used1 = 0, used2 = 0;
    const auto gu = std::stoll(text.substr(0, x), &used1);
    const auto gv = std::stoll(text.substr(x + 1), &used2);
    if (used1 != x || used2 != text.size() - x - 1) throw std::invalid_argument(text);
    return {gu, gv};
  } catch (const std::exception&) {
    throw ConfigError("grid: expected <gu>x<gv>, got '" + text + "'");
  }
}

void run_survey(const RunConfig& config, Report& report) {
  const Json& params = config.params;
  check_keys(params, {"in", "generator", "N", "M", "grid", "mc", "k", "keep_cells"});
  Input input = load_input(params);
  SurveyConfig sc;
  sc.n = get_required<std::int64_t>(params, "N");
  sc.m = get_required<double>(params, "M");
  std::tie(sc.grid_u, sc.grid_v) = parse_grid(get_or<std::string>(params, "grid", "64x64"));
  sc.mc_samples = get_or<std::int64_t>(params, "mc", 0);
  sc.seed = config.seed;
  if (params.contains("k")) sc.k_threshold = get_required<double>(params, "k");
  sc.keep_cells = !config.sidecar.empty();
  const SurveyReport s = survey_floor_lines(require_points(input), sc);
  report.results = to_json(s);
  report.results["input"] = input.info;
  report.assertions_passed = s.mean_within_bound() && s.good_fraction_within_bound();
  if (sc.keep_cells && !s.monte_carlo) {
    std::ostringstream out;
    out << "u,v,count\n";
    const double hu = sc.m / static_cast<double>(sc.grid_u);
    const double hv = sc.m / static_cast<double>(sc.grid_v);
    char buf[64];
    for (std::int64_t i = 0; i < sc.grid_u; ++i) {
      for (std::int64_t j = 0; j < sc.grid_v; ++j) {
        std::snprintf(buf, sizeof buf, "%.12g,%.12g,", (static_cast<double>(i) + 0.5) * hu,
                      (static_cast<double>(j) + 0.5) * hv);
        out << buf << s.cells[static_cast<std::size_t>(i * sc.grid_v + j)] << "\n";
      }
    }
    report.files.emplace_back(config.sidecar, out.str());
  }
}

FiniteFieldSet load_ff_set(std::int64_t p, const std::string& source) {
  if (source == "full" || source == "singleton" || source.rfind("random:", 0) == 0) {
    return parse_ff_set_source(p, source);
  }
  const std::string path = source.rfind("file:", 0) == 0 ? source.substr(5) : source;
  FiniteFieldSet set(p);
  for (const Point& q : read_points(path)) {
    if (q.x != std::floor(q.x) || q.y != std::floor(q.y)) throw ConfigError("set: coordinates must be integers");
    set.insert(static_cast<std::int64_t>(q.x), static_cast<std::int64_t>(q.y));
  }
  return set;
}

void run_ff(const RunConfig& config, Report& report) {
  const Json& params = config.params;
  check_keys(params, {"p", "set", "verify"});
  const auto p = get_required<std::int64_t>(params, "p");
  const FiniteFieldSet set = load_ff_set(p, get_or<std::string>(params, "set", "random:0.5:" + std::to_string(config.seed)));
  const FiniteFieldDimension dim = ff_dim(set.cardinality(), p);
  report.results = {{"p", p}, {"cardinality", set.cardinality()}, {"ff_dim", dim.value}, {"empty", dim.empty}};

  std::stringstream verify(get_or<std::string>(params, "verify", "identity"));
  std::string item;
  while (std::getline(verify, item, ',')) {
    if (item == "identity") {
      const std::uint64_t expected = set.cardinality() * static_cast<std::uint64_t>(p);
      try {
        const auto total = ff_double_count(set);
        report.results["identity"] = {{"sum", total}, {"expected", expected}, {"holds", true}};
      } catch (const InvariantViolation& e) {
        report.results["identity"] = {{"expected", expected}, {"holds", false}, {"error", e.what()}};
        report.assertions_passed = false;
      }
    } else if (item.rfind("chebyshev", 0) == 0) {
      double k = std::log(static_cast<double>(p));
      if (item.size() > 9) {
        if (item[9] != ':') throw ConfigError("verify: expected chebyshev:<k>");
        try {
          k = std::stod(item.substr(10));
        } catch (const std::exception&) {
          throw ConfigError("verify: bad k in '" + item + "'");
        }
      }
      if (set.cardinality() == 0) throw ConfigError("set: Chebyshev check needs a nonempty set");
      const ChebyshevResult c = ff_chebyshev_fraction(set, k);
      report.results["chebyshev"] = to_json(c);
      report.assertions_passed = report.assertions_passed && c.holds;
    } else {
      throw ConfigError("verify: unknown check '" + item + "'");
    }
  }
}

void run_levels(const RunConfig& config, Report& report) {
  const Json& params = config.params;
  check_keys(params, {"in", "generator", "u", "v", "alpha", "psi", "bound"});
  Input input = load_input(params);
  LevelSearchConfig lc;
  lc.alpha = get_or<double>(params, "alpha", 0.0);
  lc.psi = get_or<double>(params, "psi", 1.0);
  lc.search_bound = get_or<std::int64_t>(params, "bound", 1024);
  const LevelProfile profile =
      find_levels(require_points(input), get_required<double>(params, "u"), get_or<double>(params, "v", 0.0), lc);
  report.results = to_json(profile);
  report.results["input"] = input.info;
}

void run_repro_command(const RunConfig& config, Report& report) {
  const Json& params = config.params;
  check_keys(params, {"name", "p"});
  Json recipe_params = {{"seed", config.seed}};
  if (params.contains("p")) recipe_params["p"] = get_required<std::int64_t>(params, "p");
  const auto results = run_repro(get_required<std::string>(params, "name"), recipe_params);
  Json criteria = Json::array();
  Json timings = Json::object();
  bool all = true;
  for (const auto& r : results) {
    criteria.push_back({{"id", r.id}, {"name", r.name}, {"passed", r.passed}, {"summary", r.summary},
                        {"detail", r.detail}});
    timings[r.name] = r.seconds;
    all = all && r.passed;
  }
  report.results = {{"criteria", criteria}, {"all_passed", all}};
  report.provenance["timings_seconds"] = timings;
  report.assertions_passed = all;
}

bool writes_report_to_out(Command c) {
  return c == Command::validate || c == Command::survey || c == Command::ff || c == Command::levels ||
         c == Command::repro;
}

}  // namespace

Command parse_command(const std::string& name) {
  static const std::pair<const char*, Command> commands[] = {
      {"generate", Command::generate}, {"validate", Command::validate}, {"dim", Command::dim},
      {"slice", Command::slice},       {"survey", Command::survey},     {"ff", Command::ff},
      {"levels", Command::levels},     {"repro", Command::repro},
  };
  for (const auto& [key, c] : commands) {
    if (name == key) return c;
  }
  throw ConfigError("command: unknown command '" + name + "'");
}

std::string to_string(Command command) {
  switch (command) {
    case Command::generate: return "generate";
    case Command::validate: return "validate";
    case Command::dim: return "dim";
    case Command::slice: return "slice";
    case Command::survey: return "survey";
    case Command::ff: return "ff";
    case Command::levels: return "levels";
    case Command::repro: return "repro";
  }
  return "unknown";
}

Report run(const RunConfig& config) {
  Report report;
  report.command = config.command;
  report.config = {{"command", to_string(config.command)}, {"params", config.params}, {"seed", config.seed}};
  report.provenance = {{"artifact", "latslice"},
                       {"version", LATSLICE_VERSION},
                       {"timestamp", timestamp_utc()},
                       {"seed", config.seed},
                       {"threads", worker_count()}};
  switch (config.command) {
    case Command::generate: run_generate(config, report); break;
    case Command::validate: run_validate(config, report); break;
    case Command::dim: run_dim(config, report); break;
    case Command::slice: run_slice(config, report); break;
    case Command::survey: run_survey(config, report); break;
    case Command::ff: run_ff(config, report); break;
    case Command::levels: run_levels(config, report); break;
    case Command::repro: run_repro_command(config, report); break;
  }
  const std::filesystem::path json_path = writes_report_to_out(config.command) ? config.out : config.report;
  if (!json_path.empty()) report.files.emplace_back(json_path, to_json(report).dump(2) + "\n");
  return report;
}

nlohmann::json to_json(const Report& report) {
  return {{"command", to_string(report.command)},
          {"config", report.config},
          {"results", report.results},
          {"assertions_passed", report.assertions_passed},
          {"provenance", report.provenance}};
}

void write_outputs(const Report& report) {
  for (const auto& [path, contents] : report.files) write_file_atomic(path, contents);
}

int exit_code_for_current_exception() {
  try {
    throw;
  } catch (const ConfigError&) {
    return kExitConfig;
  } catch (const IoError&) {
    return kExitIo;
  } catch (const InvariantViolation&) {
    return kExitAssertion;
  } catch (const nlohmann::json::exception&) {
    return kExitConfig;
  } catch (const std::invalid_argument&) {
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error&) {
    return kExitIo;
  } catch (...) {
    return kExitAssertion;
  }
}

std::string format_profile_csv(const DimensionProfile& profile) {
  if (profile.scales.empty()) throw ConfigError("profile: empty");
  std::string out = "scale,count,ratio\n";
  for (std::size_t i = 0; i < profile.scales.size(); ++i) {
    out += format_double(profile.scales[i]) + "," + std::to_string(profile.counts[i]) + "," +
           format_double(profile.ratios[i]) + "\n";
  }
  return out;
}

void emit_profile_csv(const DimensionProfile& profile, const std::filesystem::path& path) {
  write_file_atomic(path, format_profile_csv(profile));
}

std::vector<std::tuple<double, std::uint64_t, double>> parse_profile_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != "scale,count,ratio") throw IoError("profile csv: missing header");
  std::vector<std::tuple<double, std::uint64_t, double>> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string a, b, c;
    if (!std::getline(fields, a, ',') || !std::getline(fields, b, ',') || !std::getline(fields, c)) {
      throw IoError("profile csv: malformed row '" + line + "'");
    }
    try {
      rows.emplace_back(std::stod(a), std::stoull(b), std::stod(c));
    } catch (const std::exception&) {
      throw IoError("profile csv: malformed row '" + line + "'");
    }
  }
  return rows;
}

nlohmann::json to_json(const DimensionProfile& profile) {
  return {{"scales", profile.scales},
          {"counts", profile.counts},
          {"ratios", profile.ratios},
          {"method", to_string(profile.method)},
          {"estimate", profile.estimate},
          {"ratio_max_tail", profile.ratio_max_tail},
          {"regression_tail", profile.regression_tail},
          {"tail_window", profile.tail_window},
          {"centered", profile.centered}};
}

nlohmann::json to_json(const SurveyReport& s) {
  Json config = {{"N", s.config.n},       {"M", s.config.m},  {"grid_u", s.config.grid_u},
                 {"grid_v", s.config.grid_v}, {"mc", s.config.mc_samples}, {"seed", s.config.seed}};
  Json out = {{"config", config},
              {"mode", s.monte_carlo ? "monte_carlo" : "grid"},
              {"set_size", s.set_size},
              {"k", s.k},
              {"bound", s.bound},
              {"threshold", s.threshold},
              {"mean", s.mean},
              {"exact_mean", s.exact_mean},
              {"exception_fraction", s.exception_fraction},
              {"good_fraction", s.good_fraction},
              {"markov_floor", s.markov_floor},
              {"max_count", s.max_count},
              {"mean_within_bound", s.mean_within_bound()},
              {"good_fraction_within_bound", s.good_fraction_within_bound()}};
  if (s.monte_carlo) {
    out["std_error"] = s.std_error;
  } else {
    out["resolution_term"] = s.resolution_term;
  }
  return out;
}

nlohmann::json to_json(const LevelProfile& profile) {
  return {{"u", profile.u},
          {"v", profile.v},
          {"exponent", profile.exponent},
          {"levels", profile.levels},
          {"annulus_counts", profile.annulus_counts}};
}

}  // namespace latslice
