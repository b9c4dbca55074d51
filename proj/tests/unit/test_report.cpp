#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "latslice/errors.hpp"
#include "latslice/point_io.hpp"
#include "latslice/report.hpp"
#include "latslice/repro.hpp"

using namespace latslice;
using Json = nlohmann::json;
namespace fs = std::filesystem;

namespace {

RunConfig make(Command c, Json params, std::uint64_t seed = 0) {
  RunConfig config;
  config.command = c;
  config.params = std::move(params);
  config.seed = seed;
  return config;
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

const Json staircase = {{"kind", "parabolic_staircase"}, {"params", {{"M", 64}}}};

}  // namespace

TEST_SUITE("report") {

TEST_CASE("commands parse and print") {
  for (const char* name : {"generate", "validate", "dim", "slice", "survey", "ff", "levels", "repro"}) {
    CHECK(to_string(parse_command(name)) == name);
  }
  CHECK_THROWS_AS((void)parse_command("plot"), ConfigError);
}

TEST_CASE("every command runs from a generator spec") {
  const Report gen = run(make(Command::generate, staircase));
  CHECK(gen.results["size"] == 64 * 65 / 2);

  const Report val = run(make(Command::validate, {{"generator", staircase}}));
  CHECK(val.results["min_distance"] == 1.0);
  CHECK(val.results["separated"] == true);

  const Report dim = run(make(Command::dim, {{"generator", staircase}, {"scales", "dyadic:4096"}}));
  CHECK(dim.results["profile"]["counts"].back() == 64 * 65 / 2);

  const Report slice = run(make(Command::slice, {{"generator", staircase}, {"tube", {{"horizontal", true}, {"v", -0.5}}}}));
  CHECK(slice.results["count"] == 64);

  const Report floor =
      run(make(Command::slice, {{"generator", staircase}, {"floor", {{"u", 0.001}, {"v", 0.5}, {"x_max", 400}}}}));
  CHECK(floor.results["floor"]["count"] == 1);

  const Report survey = run(make(Command::survey, {{"generator", staircase}, {"N", 256}, {"M", 16}, {"grid", "32x32"}}));
  CHECK(survey.assertions_passed);
  CHECK(survey.results["mean_within_bound"] == true);

  const Report ff = run(make(Command::ff, {{"p", 13}, {"set", "random:0.3:1"}, {"verify", "identity,chebyshev:3"}}));
  CHECK(ff.assertions_passed);
  CHECK(ff.results["identity"]["holds"] == true);
  CHECK(ff.results["chebyshev"]["holds"] == true);

  const Json line = {{"kind", "unit_line"}, {"params", {{"m", 2.0}, {"count", 256}}}};
  const Report levels = run(make(Command::levels, {{"generator", line}, {"u", -0.5}, {"v", -0.5}, {"bound", 256}}));
  CHECK(!levels.results["levels"].empty());

  const Report repro = run(make(Command::repro, {{"name", "ff"}, {"p", 13}}));
  CHECK(repro.assertions_passed);
  CHECK(repro.results["all_passed"] == true);
}

TEST_CASE("results are reproducible from the config") {
  const RunConfig configs[] = {
      make(Command::dim, {{"generator", {{"kind", "random_dim"}, {"params", {{"alpha", 1.4}, {"l_max", 512}, {"seed", 3}}}}},
                          {"box", "counting"}, {"scales", "dyadic:512"}}),
      make(Command::survey, {{"generator", staircase}, {"N", 128}, {"M", 8}, {"mc", 2000}}, 77),
      make(Command::ff, {{"p", 17}, {"set", "random:0.5:2"}, {"verify", "identity,chebyshev"}}),
  };
  for (const RunConfig& c : configs) {
    const Report a = run(c), b = run(c);
    CHECK(a.results.dump() == b.results.dump());
    CHECK(a.config == b.config);
  }
}

TEST_CASE("bad parameters name the offending field") {
  auto message = [](const RunConfig& c) -> std::string {
    try {
      (void)run(c);
    } catch (const ConfigError& e) {
      return e.what();
    }
    return "";
  };
  CHECK(message(make(Command::dim, {{"generator", staircase}, {"scale", "dyadic:8"}})).find("scale") == 0);
  CHECK(message(make(Command::dim, {{"generator", staircase}, {"method", "median"}})).find("method") != std::string::npos);
  CHECK(message(make(Command::survey, {{"generator", staircase}, {"M", 4}})).find("N") == 0);
  CHECK(message(make(Command::ff, {{"p", 15}})).find("p") != std::string::npos);
  CHECK(message(make(Command::ff, {{"p", "seven"}})).find("p: wrong type") == 0);
  CHECK(message(make(Command::validate, Json::object())).find("in") != std::string::npos);
  CHECK(message(make(Command::repro, {{"name", "everything"}})).find("name") != std::string::npos);
  CHECK(message(make(Command::generate, {{"kind", "zigzag"}, {"params", {{"delta", 2.0}}}})).find("delta") != std::string::npos);
}

TEST_CASE("unreadable input is an I/O error") {
  CHECK_THROWS_AS((void)run(make(Command::validate, {{"in", "/nonexistent/latslice.txt"}})), IoError);
  try {
    (void)run(make(Command::validate, {{"in", "/nonexistent/latslice.txt"}}));
  } catch (...) {
    CHECK(exit_code_for_current_exception() == kExitIo);
  }
  try {
    throw ConfigError("x");
  } catch (...) {
    CHECK(exit_code_for_current_exception() == kExitConfig);
  }
  try {
    throw InvariantViolation("x");
  } catch (...) {
    CHECK(exit_code_for_current_exception() == kExitAssertion);
  }
}

TEST_CASE("profile CSV layout and round trip") {
  const DimensionProfile p = make_profile({2, 4, 8}, {3, 10, 40}, false);
  const std::string csv = format_profile_csv(p);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 4);
  CHECK(csv.rfind("scale,count,ratio\n", 0) == 0);
  const auto rows = parse_profile_csv(csv);
  REQUIRE(rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(std::get<0>(rows[i]) == p.scales[i]);
    CHECK(std::get<1>(rows[i]) == p.counts[i]);
    CHECK(std::abs(std::get<2>(rows[i]) - p.ratios[i]) <= 1e-12);
  }
  CHECK_THROWS_AS((void)format_profile_csv(DimensionProfile{}), ConfigError);
  CHECK_THROWS_AS((void)parse_profile_csv("a,b\n"), IoError);
}

TEST_CASE("outputs are written where the command says") {
  const fs::path dir = fs::temp_directory_path() / "latslice_report_test";
  fs::create_directories(dir);

  RunConfig dim = make(Command::dim, {{"generator", staircase}, {"scales", "dyadic:4096"}});
  dim.out = dir / "profile.csv";
  dim.report = dir / "dim.json";
  const Report r = run(dim);
  CHECK(!fs::exists(dim.out));  // run() itself writes nothing
  write_outputs(r);
  const auto rows = parse_profile_csv(read_file(dim.out));
  CHECK(rows.size() == 12);  // 2, 4, ..., 4096
  const Json doc = Json::parse(read_file(dim.report));
  CHECK(doc["command"] == "dim");
  CHECK(doc["results"] == r.results);
  CHECK(doc["provenance"]["version"].is_string());

  RunConfig gen = make(Command::generate, staircase);
  gen.out = dir / "stairs.txt";
  write_outputs(run(gen));
  CHECK(read_points(gen.out).size() == 64 * 65 / 2);

  RunConfig implicit = make(Command::generate, {{"kind", "cone_annuli"}, {"params", {{"k_max", 4}}}, {"mode", "implicit"}});
  implicit.out = dir / "cone.json";
  write_outputs(run(implicit));
  CHECK(Json::parse(read_file(implicit.out))["kind"] == "cone_annuli");

  RunConfig from_file = make(Command::dim, {{"in", gen.out.string()}, {"scales", "dyadic:4096"}});
  CHECK(run(from_file).results["profile"] == r.results["profile"]);

  fs::remove_all(dir);
}

TEST_CASE("repro recipes are listed in order") {
  const auto names = repro_names();
  REQUIRE(names.size() == 12);
  CHECK(names[0] == "ff-identity");
  CHECK(names[9] == "levels");
  CHECK(names[10] == "ff");
  CHECK(names[11] == "all");
  CHECK_THROWS_AS((void)run_repro("nothing"), ConfigError);
}

}  // TEST_SUITE
