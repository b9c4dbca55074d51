#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "latslice/geometry.hpp"

namespace latslice {

// Text format: one "x y" pair per line, whitespace separated; lines whose
// first non-blank character is '#' are comments. Values are written in
// shortest round-trip form, so integer coordinates come back bit-exact.

[[nodiscard]] std::vector<Point> parse_points(std::istream& in, const std::string& source = "<stream>");
void format_points(std::ostream& out, std::span<const Point> points, const std::string& comment = {});

[[nodiscard]] std::vector<Point> read_points(const std::filesystem::path& path);
void write_points(const std::filesystem::path& path, std::span<const Point> points,
                  const std::string& comment = {});

/// Shortest decimal representation that parses back to the same double.
[[nodiscard]] std::string format_double(double value);

/// Writes `contents` to a sibling temp file and renames it over `path`.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

}  // namespace latslice
