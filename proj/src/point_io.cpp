#include "latslice/point_io.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <system_error>

#include "latslice/errors.hpp"

namespace latslice {

namespace {

bool parse_double(std::string_view token, double& out) {
  const char* first = token.data();
  const char* last = token.data() + token.size();
  if (first != last && *first == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc{} && ptr == last;
}

}  // namespace

std::string format_double(double value) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  if (ec != std::errc{}) throw IoError("cannot format number");
  return std::string(buf, ptr);
}

std::vector<Point> parse_points(std::istream& in, const std::string& source) {
  std::vector<Point> points;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto start = line.find_first_not_of(" \t\r");
    if (start == std::string::npos || line[start] == '#') continue;

    std::istringstream fields(line);
    std::string xs;
    std::string ys;
    std::string extra;
    fields >> xs >> ys;
    Point p;
    if (ys.empty() || (fields >> extra) || !parse_double(xs, p.x) || !parse_double(ys, p.y)) {
      throw IoError(source + ":" + std::to_string(line_no) + ": expected two numbers");
    }
    points.push_back(p);
  }
  return points;
}

void format_points(std::ostream& out, std::span<const Point> points, const std::string& comment) {
  if (!comment.empty()) out << "# " << comment << '\n';
  for (const Point& p : points) out << format_double(p.x) << ' ' << format_double(p.y) << '\n';
}

std::vector<Point> read_points(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open point file " + path.string());
  return parse_points(in, path.string());
}

void write_points(const std::filesystem::path& path, std::span<const Point> points,
                  const std::string& comment) {
  std::ostringstream out;
  format_points(out, points, comment);
  write_file_atomic(path, out.str());
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + path.string());
    out << contents;
    out.flush();
    if (!out) {
      std::error_code ignored;
      std::filesystem::remove(tmp, ignored);
      throw IoError("cannot write " + path.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw IoError("cannot write " + path.string());
  }
}

}  // namespace latslice
