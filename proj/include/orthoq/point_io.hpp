#pragma once

#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "orthoq/core.hpp"

namespace orthoq {

// Point files are either CSV (`x,y` per line, decimal reals) or raw binary
// little-endian IEEE-754 doubles, x then y per point. Paths ending in `.bin`
// select the binary format; anything else is CSV.
enum class PointFormat { Csv, Binary };

PointFormat format_for_path(const std::filesystem::path& path);

class PointFileError : public std::runtime_error {
 public:
  PointFileError(const std::string& what, std::size_t line)
      : std::runtime_error(what), line_(line) {}
  // 1-based line (CSV) or record (binary) number; 0 when not tied to one.
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

std::vector<UnitPoint> read_points(const std::filesystem::path& path);
void write_points(const std::filesystem::path& path, std::span<const UnitPoint> points);

std::vector<UnitPoint> parse_points_csv(std::string_view text);
std::string format_points_csv(std::span<const UnitPoint> points);

}  // namespace orthoq
