// latslice: command-line front end. Each subcommand builds a RunConfig,
// runs it and writes the outputs atomically.

#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "latslice/errors.hpp"
#include "latslice/repro.hpp"
#include "latslice/report.hpp"

namespace {

using latslice::Command;
using latslice::RunConfig;
using Json = nlohmann::json;

struct InputFlags {
  std::string in;
  std::string gen;

  void add(CLI::App* cmd) {
    cmd->add_option("--in", in, "Point-set file (one \"x y\" pair per line)");
    cmd->add_option("--gen", gen, "Generator spec instead of a file, e.g. {\"kind\":\"zigzag\",\"params\":{...}}");
  }

  void apply(Json& params) const {
    if (!in.empty() && !gen.empty()) throw latslice::ConfigError("in: give --in or --gen, not both");
    if (!in.empty()) params["in"] = in;
    if (!gen.empty()) params["generator"] = parse_json(gen, "gen");
  }

  static Json parse_json(const std::string& text, const std::string& field) {
    try {
      return Json::parse(text);
    } catch (const Json::exception& e) {
      throw latslice::ConfigError(field + ": invalid JSON");
    }
  }
};

template <typename T>
void set_if(Json& params, const char* key, const std::optional<T>& value) {
  if (value) params[key] = *value;
}

void print_summary(const latslice::Report& report, bool to_stdout) {
  std::ostream& os = to_stdout ? std::cout : std::cerr;
  if (report.command == Command::repro) {
    for (const auto& c : report.results["criteria"]) {
      os << (c["passed"].get<bool>() ? "PASS " : "FAIL ") << c["name"].get<std::string>() << ": "
         << c["summary"].get<std::string>() << "\n";
    }
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Discrete slicing and dimension workbench for 1-separated planar sets", "latslice"};
  app.require_subcommand(1);
  app.set_version_flag("--version", LATSLICE_VERSION);

  RunConfig config;
  std::uint64_t seed = 0;
  std::string out, report_path, sidecar;
  app.add_option("--seed", seed, "Seed recorded in the report and used by seeded modes");

  // generate
  std::string kind, gen_params = "{}", mode = "materialize";
  auto* generate = app.add_subcommand("generate", "Build an example set");
  generate->add_option("--kind", kind, "unit_line, parabolic_staircase, zigzag, cone_annuli, cone_staircase, "
                                       "cone_fixed_width, cartesian, random_dim")
      ->required();
  generate->add_option("--params", gen_params, "Generator parameters as a JSON object");
  generate->add_option("--mode", mode, "materialize or implicit");
  generate->add_option("--out", out, "Point file, or JSON descriptor for implicit sets");
  generate->add_option("--report", report_path, "Optional JSON report");

  // validate
  InputFlags validate_in;
  auto* validate = app.add_subcommand("validate", "Exact minimum pairwise distance of a set");
  validate_in.add(validate);
  validate->add_option("--out", out, "JSON report (stdout when omitted)");

  // dim
  InputFlags dim_in;
  std::string scales = "dyadic:1024", method = "ratio_max_tail", box = "first_quadrant";
  std::optional<std::int64_t> tail_window;
  auto* dim = app.add_subcommand("dim", "Dimension profile: scale, count, log ratio");
  dim_in.add(dim);
  dim->add_option("--scales", scales, "dyadic:<max> or a comma-separated list");
  dim->add_option("--method", method, "ratio_max_tail or regression_tail");
  dim->add_option("--box", box, "first_quadrant, centered or counting");
  dim->add_option("--tail-window", tail_window, "Scales in the tail window (default a third)");
  dim->add_option("--out", out, "CSV with columns scale,count,ratio");
  dim->add_option("--report", report_path, "Optional JSON report");

  // slice
  InputFlags slice_in;
  std::optional<double> tube_u, tube_v, floor_u, floor_v, x_max;
  bool horizontal = false;
  std::optional<std::string> slice_scales;
  auto* slice = app.add_subcommand("slice", "Intersect a set with a tube or a floor line");
  slice_in.add(slice);
  slice->add_option("--u", tube_u, "Tube parameter u (nonzero)");
  slice->add_option("--v", tube_v, "Tube displacement v");
  slice->add_flag("--horizontal", horizontal, "Horizontal tube v < y <= v+1");
  slice->add_option("--floor-u", floor_u, "Floor line slope");
  slice->add_option("--floor-v", floor_v, "Floor line intercept");
  slice->add_option("--x-max", x_max, "Floor line abscissa bound");
  slice->add_option("--scales", slice_scales, "Also report the slice's mass profile at these scales");
  slice->add_option("--method", method, "ratio_max_tail or regression_tail");
  slice->add_option("--out", out, "Slice points (tube) or distinct heights (floor line)");
  slice->add_option("--report", report_path, "Optional JSON report");

  // survey
  InputFlags survey_in;
  std::int64_t survey_n = 0;
  double survey_m = 0.0;
  std::string grid = "64x64";
  std::optional<std::int64_t> mc;
  std::optional<double> k;
  auto* survey = app.add_subcommand("survey", "Average floor-line slice counts over (u,v) in (0,M]^2");
  survey_in.add(survey);
  survey->add_option("--N", survey_n, "Window side: E_N = set ∩ [0,N]^2")->required();
  survey->add_option("--M", survey_m, "Parameter box side")->required();
  survey->add_option("--grid", grid, "<gu>x<gv> midpoint grid");
  survey->add_option("--mc", mc, "Monte-Carlo sample count instead of the grid");
  survey->add_option("--k", k, "Exception threshold multiplier (default sqrt(ln M ln N))");
  survey->add_option("--out", out, "JSON report (stdout when omitted)");
  survey->add_option("--cells", sidecar, "Per-cell CSV u,v,count (grid mode)");

  // ff
  std::int64_t p = 0;
  std::optional<std::string> ff_set;
  std::string verify = "identity";
  auto* ff = app.add_subcommand("ff", "Brute-force line incidences over F_p^2");
  ff->add_option("--p", p, "Prime modulus")->required();
  ff->add_option("--set", ff_set, "File of \"x y\" pairs, random:<density>:<seed>, full or singleton");
  ff->add_option("--verify", verify, "Comma list of identity, chebyshev[:k]");
  ff->add_option("--out", out, "JSON report (stdout when omitted)");

  // levels
  InputFlags levels_in;
  double lu = 1.0, lv = 0.0, alpha = 0.0, psi = 1.0;
  std::int64_t bound = 1024;
  auto* levels = app.add_subcommand("levels", "Heights where a slanted annulus along a tube is overfull");
  levels_in.add(levels);
  levels->add_option("--u", lu, "Tube parameter u")->required();
  levels->add_option("--v", lv, "Tube displacement v");
  levels->add_option("--alpha", alpha, "alpha >= 0");
  levels->add_option("--psi", psi, "psi > 0");
  levels->add_option("--bound", bound, "Largest height examined");
  levels->add_option("--out", out, "JSON report (stdout when omitted)");

  // repro
  std::string recipe;
  std::optional<std::int64_t> repro_p;
  auto* repro = app.add_subcommand("repro", "Run a named reproduction recipe");
  repro->add_option("name", recipe, "Recipe name")->required()->check(CLI::IsMember(latslice::repro_names()));
  repro->add_option("--p", repro_p, "Prime for the ff recipe");
  repro->add_option("--out", out, "JSON report (stdout when omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "latslice: error: " << e.what() << "\n";
    return latslice::kExitConfig;
  }

  try {
    Json& params = config.params;
    if (generate->parsed()) {
      config.command = Command::generate;
      params = {{"kind", kind}, {"params", InputFlags::parse_json(gen_params, "params")}, {"mode", mode}};
    } else if (validate->parsed()) {
      config.command = Command::validate;
      validate_in.apply(params);
    } else if (dim->parsed()) {
      config.command = Command::dim;
      dim_in.apply(params);
      params["scales"] = scales;
      params["method"] = method;
      params["box"] = box;
      set_if(params, "tail_window", tail_window);
    } else if (slice->parsed()) {
      config.command = Command::slice;
      slice_in.apply(params);
      if (floor_u) {
        params["floor"] = {{"u", *floor_u}, {"v", floor_v.value_or(0.0)}};
        set_if(params["floor"], "x_max", x_max);
      } else if (horizontal) {
        params["tube"] = {{"horizontal", true}, {"v", tube_v.value_or(0.0)}};
      } else if (tube_u) {
        params["tube"] = {{"u", *tube_u}, {"v", tube_v.value_or(0.0)}};
      }
      set_if(params, "scales", slice_scales);
      if (slice_scales) params["method"] = method;
    } else if (survey->parsed()) {
      config.command = Command::survey;
      survey_in.apply(params);
      params["N"] = survey_n;
      params["M"] = survey_m;
      params["grid"] = grid;
      set_if(params, "mc", mc);
      set_if(params, "k", k);
    } else if (ff->parsed()) {
      config.command = Command::ff;
      params = {{"p", p}, {"verify", verify}};
      set_if(params, "set", ff_set);
    } else if (levels->parsed()) {
      config.command = Command::levels;
      levels_in.apply(params);
      params["u"] = lu;
      params["v"] = lv;
      params["alpha"] = alpha;
      params["psi"] = psi;
      params["bound"] = bound;
    } else if (repro->parsed()) {
      config.command = Command::repro;
      params = {{"name", recipe}};
      set_if(params, "p", repro_p);
    }
    config.seed = seed;
    config.out = out;
    config.report = report_path;
    config.sidecar = sidecar;

    const latslice::Report report = latslice::run(config);
    latslice::write_outputs(report);
    const bool report_to_stdout = config.out.empty() && config.command != Command::generate &&
                                  config.command != Command::dim && config.command != Command::slice;
    if (report_to_stdout) {
      std::cout << latslice::to_json(report).dump(2) << "\n";
    } else if (config.out.empty()) {
      std::cout << report.results.dump(2) << "\n";
    }
    print_summary(report, !report_to_stdout);
    if (!report.assertions_passed) {
      std::cerr << "latslice: assertion failed: see the report\n";
      return latslice::kExitAssertion;
    }
    return latslice::kExitOk;
  } catch (const std::exception& e) {
    const int code = latslice::exit_code_for_current_exception();
    std::cerr << "latslice: error: " << e.what() << "\n";
    return code;
  }
}
