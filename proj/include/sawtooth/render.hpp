#pragma once

// SVG rendering of lozenge tilings.  Lattice coordinates (u, v) map to the
// plane through the 120-degree basis e1 = (1, 0), e2 = (cos 120, sin 120);
// the SVG y axis points down, so the picture is flipped vertically.

#include <array>
#include <sstream>
#include <string>
#include <vector>

#include "sawtooth/tilings.hpp"

namespace sawtooth {

namespace detail {

inline std::array<std::pair<double, double>, 4> tile_corners(const Tile& t) {
  // Lattice corners in (u, v); counterclockwise.
  std::array<std::pair<int, int>, 4> latt;
  switch (t.kind) {
    case Tile::Kind::vertical:
      latt = {{{t.u, t.v}, {t.u + 1, t.v + 1}, {t.u + 1, t.v + 2}, {t.u, t.v + 1}}};
      break;
    case Tile::Kind::left:
      latt = {{{t.u, t.v}, {t.u + 1, t.v}, {t.u + 1, t.v + 1}, {t.u, t.v + 1}}};
      break;
    default:
      latt = {{{t.u, t.v}, {t.u + 1, t.v}, {t.u + 2, t.v + 1}, {t.u + 1, t.v + 1}}};
  }
  std::array<std::pair<double, double>, 4> xy;
  for (std::size_t i = 0; i < 4; ++i) {
    const double u = latt[i].first, v = latt[i].second;
    xy[i] = {u - 0.5 * v, v * 0.8660254037844386};
  }
  return xy;
}

}  // namespace detail

// Triangle cells (two per tile) in (strip, index, up/down) form, computed
// from the tile's plane coordinates; used for interior-disjointness checks.
inline std::array<std::tuple<int, int, bool>, 2> tile_triangles(const Tile& t) {
  switch (t.kind) {
    case Tile::Kind::vertical:
      return {{{t.v, t.u, false}, {t.v + 1, t.u, true}}};  // down at (u,v), up at (u,v+1)
    case Tile::Kind::left:
      return {{{t.v, t.u, false}, {t.v, t.u, true}}};
    default:
      return {{{t.v, t.u, true}, {t.v, t.u + 1, false}}};
  }
}

struct SvgOptions {
  double unit = 24.0;   // pixels per lattice unit
  double margin = 12.0;
  const char* color_vertical = "#4878cf";
  const char* color_left = "#e8c26a";
  const char* color_right = "#c95f52";
};

inline std::string render_svg(const std::vector<Tile>& tiles, const SvgOptions& opt = {}) {
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& t : tiles)
    for (const auto& [x, y] : detail::tile_corners(t)) {
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  if (tiles.empty()) xmin = xmax = ymin = ymax = 0;

  const double w = (xmax - xmin) * opt.unit + 2 * opt.margin;
  const double h = (ymax - ymin) * opt.unit + 2 * opt.margin;
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h
      << "\" viewBox=\"0 0 " << w << " " << h << "\">\n";
  for (const auto& t : tiles) {
    const char* fill = t.kind == Tile::Kind::vertical ? opt.color_vertical
                       : t.kind == Tile::Kind::left   ? opt.color_left
                                                      : opt.color_right;
    out << "  <polygon class=\"" << tile_kind_name(t.kind) << "\" points=\"";
    bool first = true;
    for (const auto& [x, y] : detail::tile_corners(t)) {
      if (!first) out << ' ';
      first = false;
      out << (x - xmin) * opt.unit + opt.margin << ',' << (ymax - y) * opt.unit + opt.margin;
    }
    out << "\" fill=\"" << fill << "\" stroke=\"#222\" stroke-width=\"0.75\"/>\n";
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace sawtooth
