#pragma once

// Flat text set files:
//
//   group 4x4          (or: box 4)
//   # comment
//   0,1
//   2,3
//
// The header is the first line; every later non-empty line not starting with
// '#' is one point as comma-separated integers. Serialisation writes the
// canonical form: header with 'x'-joined factors, points in lexicographic
// order, no comments.

#include <spectile/error.hpp>
#include <spectile/group.hpp>
#include <spectile/lifting.hpp>

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

namespace spectile {

struct SetFile {
  enum class Kind { group, box };

  Kind kind = Kind::group;
  GroupSpec spec{std::vector<std::uint64_t>{1}};
  std::vector<IntPoint> points;

  PointSet to_point_set() const {
    if (kind != Kind::group) throw ParseError("expected a 'group' set file, found a 'box' file");
    std::vector<GroupElement> pts;
    pts.reserve(points.size());
    for (const auto& p : points) pts.push_back(spec.element(p));
    return PointSet(spec, std::move(pts));
  }

  BoxedSet to_boxed_set() const {
    if (kind != Kind::box) throw ParseError("expected a 'box' set file, found a 'group' file");
    return BoxedSet(spec.orders(), points);
  }

  static SetFile from(const PointSet& s) {
    SetFile f;
    f.kind = Kind::group;
    f.spec = s.ambient();
    for (const auto& g : s) f.points.emplace_back(g.coords.begin(), g.coords.end());
    return f;
  }

  static SetFile from(const BoxedSet& s) {
    SetFile f;
    f.kind = Kind::box;
    f.spec = GroupSpec(s.extent());
    f.points = s.points();
    return f;
  }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

inline IntPoint parse_point(std::string_view line, std::size_t line_no) {
  IntPoint p;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    const auto field = trim(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos));
    std::int64_t v = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
      throw ParseError("line " + std::to_string(line_no) + ": malformed coordinate '" + std::string(field) + "'");
    }
    p.push_back(v);
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return p;
}

}  // namespace detail

inline SetFile parse_set_file(std::string_view text) {
  SetFile f;
  std::size_t pos = 0;
  std::size_t line_no = 0;
  bool have_header = false;
  while (pos <= text.size()) {
    auto nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    auto line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    if (!have_header) {
      const auto space = line.find(' ');
      const auto keyword = line.substr(0, space);
      if (space == std::string_view::npos || (keyword != "group" && keyword != "box")) {
        throw ParseError("line 1: expected 'group <spec>' or 'box <spec>'");
      }
      f.kind = keyword == "group" ? SetFile::Kind::group : SetFile::Kind::box;
      f.spec = parse_group_spec(detail::trim(line.substr(space + 1)));
      have_header = true;
      continue;
    }
    const auto body = detail::trim(line);
    if (body.empty() || body.front() == '#') continue;
    auto p = detail::parse_point(body, line_no);
    if (p.size() != f.spec.dimension()) {
      throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(f.spec.dimension()) +
                       " coordinates, got " + std::to_string(p.size()));
    }
    if (f.kind == SetFile::Kind::group) {
      // Stored reduced so that duplicates modulo n_i are caught here.
      const auto g = f.spec.element(p);
      p.assign(g.coords.begin(), g.coords.end());
    } else {
      for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] < 0 || static_cast<std::uint64_t>(p[i]) >= f.spec.orders()[i]) {
          throw ParseError("line " + std::to_string(line_no) + ": point outside the box");
        }
      }
    }
    f.points.push_back(std::move(p));
  }
  if (!have_header) throw ParseError("empty set file");

  auto sorted = f.points;
  std::sort(sorted.begin(), sorted.end());
  const auto dup = std::adjacent_find(sorted.begin(), sorted.end());
  if (dup != sorted.end()) throw ParseError("duplicate point " + BoxedSet::format(*dup));
  f.points = std::move(sorted);
  return f;
}

inline std::string serialize(const SetFile& f) {
  std::string out = f.kind == SetFile::Kind::group ? "group " : "box ";
  out += f.spec.to_string();
  out += '\n';
  auto pts = f.points;
  std::sort(pts.begin(), pts.end());
  for (const auto& p : pts) {
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) out += ',';
      out += std::to_string(p[i]);
    }
    out += '\n';
  }
  return out;
}

inline SetFile read_set_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_set_file(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

inline void write_set_file(const std::string& path, const SetFile& f) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write '" + path + "'");
  out << serialize(f);
}

}  // namespace spectile
