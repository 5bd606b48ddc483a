#include "orthoq/point_io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace orthoq {
namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

double parse_real(std::string_view field, std::size_t line) {
  field = trim(field);
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
  if (ec != std::errc{} || ptr != field.data() + field.size()) {
    throw PointFileError("line " + std::to_string(line) + ": cannot parse '" + std::string(field) +
                             "' as a real number",
                         line);
  }
  return v;
}

void check_unit(const UnitPoint& p, std::size_t line) {
  if (!(p.x >= 0.0 && p.x <= 1.0 && p.y >= 0.0 && p.y <= 1.0)) {
    throw PointFileError("line " + std::to_string(line) + ": point outside the unit square", line);
  }
}

std::uint64_t to_little_endian(std::uint64_t v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    std::uint64_t r = 0;
    for (int k = 0; k < 8; ++k) r |= ((v >> (8 * k)) & 0xffu) << (8 * (7 - k));
    return r;
  }
}

}  // namespace

PointFormat format_for_path(const std::filesystem::path& path) {
  return path.extension() == ".bin" ? PointFormat::Binary : PointFormat::Csv;
}

std::vector<UnitPoint> parse_points_csv(std::string_view text) {
  std::vector<UnitPoint> pts;
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string_view::npos || line.find(',', comma + 1) != std::string_view::npos) {
      throw PointFileError("line " + std::to_string(line_no) + ": expected exactly two fields 'x,y'",
                           line_no);
    }
    UnitPoint p{parse_real(line.substr(0, comma), line_no), parse_real(line.substr(comma + 1), line_no)};
    check_unit(p, line_no);
    pts.push_back(p);
  }
  return pts;
}

std::string format_points_csv(std::span<const UnitPoint> points) {
  std::string out;
  out.reserve(points.size() * 40);
  std::array<char, 64> buf{};
  for (const auto& p : points) {
    auto r = std::to_chars(buf.data(), buf.data() + buf.size(), p.x);
    out.append(buf.data(), r.ptr);
    out.push_back(',');
    r = std::to_chars(buf.data(), buf.data() + buf.size(), p.y);
    out.append(buf.data(), r.ptr);
    out.push_back('\n');
  }
  return out;
}

std::vector<UnitPoint> read_points(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PointFileError("cannot open " + path.string(), 0);
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string data = ss.str();

  if (format_for_path(path) == PointFormat::Csv) return parse_points_csv(data);

  if (data.size() % 16 != 0) {
    throw PointFileError(path.string() + ": binary size is not a multiple of 16 bytes",
                         data.size() / 16 + 1);
  }
  std::vector<UnitPoint> pts(data.size() / 16);
  for (std::size_t k = 0; k < pts.size(); ++k) {
    std::uint64_t bx = 0, by = 0;
    std::memcpy(&bx, data.data() + 16 * k, 8);
    std::memcpy(&by, data.data() + 16 * k + 8, 8);
    pts[k].x = std::bit_cast<double>(to_little_endian(bx));
    pts[k].y = std::bit_cast<double>(to_little_endian(by));
    check_unit(pts[k], k + 1);
  }
  return pts;
}

void write_points(const std::filesystem::path& path, std::span<const UnitPoint> points) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw PointFileError("cannot write " + path.string(), 0);
  if (format_for_path(path) == PointFormat::Csv) {
    out << format_points_csv(points);
  } else {
    for (const auto& p : points) {
      const std::uint64_t bx = to_little_endian(std::bit_cast<std::uint64_t>(p.x));
      const std::uint64_t by = to_little_endian(std::bit_cast<std::uint64_t>(p.y));
      out.write(reinterpret_cast<const char*>(&bx), 8);
      out.write(reinterpret_cast<const char*>(&by), 8);
    }
  }
  if (!out) throw PointFileError("write failed for " + path.string(), 0);
}

}  // namespace orthoq
