#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "latslice/errors.hpp"
#include "latslice/point_io.hpp"

using namespace latslice;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir() {
  const fs::path dir = fs::temp_directory_path() / "latslice_point_io_test";
  fs::create_directories(dir);
  return dir;
}

}  // namespace

TEST_SUITE("point_io") {

TEST_CASE("comments and blank lines are skipped") {
  std::istringstream in("# header\n\n1 2\n  # indented comment\n3.5\t-4\n");
  const auto pts = parse_points(in);
  REQUIRE(pts.size() == 2);
  CHECK(pts[0] == Point{1, 2});
  CHECK(pts[1] == Point{3.5, -4});
}

TEST_CASE("malformed lines name the source and line") {
  std::istringstream one("1 2\n3\n");
  try {
    (void)parse_points(one, "pts.txt");
    FAIL("expected a parse error");
  } catch (const IoError& e) {
    CHECK(std::string(e.what()).find("pts.txt:2") != std::string::npos);
  }
  std::istringstream extra("1 2 3\n");
  CHECK_THROWS_AS((void)parse_points(extra), IoError);
  std::istringstream junk("1 x\n");
  CHECK_THROWS_AS((void)parse_points(junk), IoError);
}

TEST_CASE("values round-trip bit-exactly") {
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> any(-1e9, 1e9);
  std::vector<Point> pts;
  for (int i = 0; i < 500; ++i) pts.push_back({any(rng), std::floor(any(rng))});
  pts.push_back({9007199254740992.0, 0.1});
  std::ostringstream out;
  format_points(out, pts, "round trip");
  std::istringstream in(out.str());
  CHECK(parse_points(in) == pts);
  CHECK(format_double(3.0) == "3");
  CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("atomic writes replace the file and leave no temp file") {
  const fs::path dir = scratch_dir();
  const fs::path target = dir / "set.txt";
  write_points(target, std::vector<Point>{{1, 1}, {2, 3}});
  write_points(target, std::vector<Point>{{5, 8}});
  const auto back = read_points(target);
  REQUIRE(back.size() == 1);
  CHECK(back[0] == Point{5, 8});
  std::size_t entries = 0;
  for (const auto& e : fs::directory_iterator(dir)) entries += e.path() == target ? 0 : 1;
  CHECK(entries == 0);
  fs::remove_all(dir);
}

TEST_CASE("missing files raise an I/O error") {
  CHECK_THROWS_AS((void)read_points("/nonexistent/latslice/pts.txt"), IoError);
  CHECK_THROWS_AS(write_file_atomic("/nonexistent/latslice/out.txt", "x"), IoError);
}

}  // TEST_SUITE
