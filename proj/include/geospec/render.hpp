#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "geospec/analysis.hpp"
#include "geospec/errors.hpp"
#include "geospec/geometry.hpp"
#include "geospec/text.hpp"

namespace geospec {

struct Rgb {
  int r = 0, g = 0, b = 0;

  std::string hex() const {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", r, g, b);
    return buf;
  }

  // Perceived lightness proxy on the encoded channels; enough to order fills.
  double luminance() const { return 0.2126 * r + 0.7152 * g + 0.0722 * b; }
};

// Two-armed scale over [-1, 1] centered at 0: cool near-white for strong
// under-specialization through a warm midpoint into dark red for strong
// specialization. Luminance decreases monotonically with the value, so a
// darker fill always means a higher value.
struct DivergingScale {
  Rgb low{247, 251, 255};
  Rgb mid{244, 165, 130};
  Rgb high{103, 0, 31};

  Rgb color_at(double v) const {
    v = std::clamp(v, -1.0, 1.0);
    const Rgb& a = v <= 0.0 ? low : mid;
    const Rgb& b = v <= 0.0 ? mid : high;
    const double t = v <= 0.0 ? v + 1.0 : v;
    auto mix = [t](int x, int y) { return static_cast<int>(std::lround(x + (y - x) * t)); };
    return Rgb{mix(a.r, b.r), mix(a.g, b.g), mix(a.b, b.b)};
  }
};

// Plottable per-row quantities.
enum class AxisField { Docs, Cites, Rsi, Rci };

inline const char* axis_caption(AxisField f) {
  switch (f) {
    case AxisField::Docs: return "documents";
    case AxisField::Cites: return "citations";
    case AxisField::Rsi: return "RSI";
    case AxisField::Rci: return "RCI";
  }
  return "";
}

inline std::optional<double> axis_value(const IndicatorRow& row, AxisField f) {
  switch (f) {
    case AxisField::Docs: return static_cast<double>(row.focal_docs);
    case AxisField::Cites: return static_cast<double>(row.focal_cites);
    case AxisField::Rsi: return row.rsi.value();
    case AxisField::Rci:
      if (!row.rci.defined()) return std::nullopt;
      return row.rci.value();
  }
  return std::nullopt;
}

// Axis-constant guide line (vertical when on X, horizontal when on Y).
struct ReferenceLine {
  enum class Dim { X, Y };
  Dim dim = Dim::X;
  double value = 0.0;
};

struct ScatterSpec {
  AxisField x_axis = AxisField::Docs;   // docs or rsi
  AxisField y_axis = AxisField::Cites;  // cites or rci
  std::optional<AxisField> bubble_encoding;
  std::vector<ReferenceLine> reference_lines;
  std::size_t label_top_k = 0;
  int width = 840;
  int height = 600;
  DivergingScale scale;
};

struct ChoroplethSpec {
  NutsGeometry geometry;
  AxisField value = AxisField::Rsi;
  DivergingScale scale;
  std::string missing_fill = "#b0b0b0";
  int width = 900;
  int height = 620;
};

namespace detail {

inline std::string coord(double v) { return fmt_fixed(v, 2); }

inline std::string tick_label(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

struct Range {
  double lo = 0.0, hi = 1.0;

  void include(double v) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }

  void pad() {
    double span = hi - lo;
    if (span == 0.0) span = std::max(std::abs(hi), 1.0);
    lo -= 0.05 * span;
    hi += 0.05 * span;
  }

  double unit(double v) const { return (v - lo) / (hi - lo); }
};

inline Range data_range(const std::vector<double>& values) {
  Range r{values.front(), values.front()};
  for (double v : values) r.include(v);
  return r;
}

}  // namespace detail

// One circle per row on the configured axes, reference lines, and the
// top-k rows farthest from the data centroid annotated with their names.
// Output is a standalone SVG 1.1 document, byte-deterministic per input.
inline std::string render_scatter(const std::vector<IndicatorRow>& rows,
                                  const ScatterSpec& spec) {
  const bool x_ok = spec.x_axis == AxisField::Docs || spec.x_axis == AxisField::Rsi;
  const bool y_ok = spec.y_axis == AxisField::Cites || spec.y_axis == AxisField::Rci;
  if (!x_ok || !y_ok) throw std::invalid_argument("scatter axes must be docs/rsi vs cites/rci");

  struct Point {
    const IndicatorRow* row;
    double x, y, bubble;
  };
  std::vector<Point> points;
  for (const IndicatorRow& row : rows) {
    const auto x = axis_value(row, spec.x_axis);
    const auto y = axis_value(row, spec.y_axis);
    std::optional<double> b = std::optional<double>(0.0);
    if (spec.bubble_encoding) b = axis_value(row, *spec.bubble_encoding);
    if (x && y && b) points.push_back({&row, *x, *y, *b});
  }
  if (points.empty())
    throw Error(errc::empty_input, "no row carries values for the requested axes");

  std::vector<double> xs, ys;
  for (const Point& p : points) {
    xs.push_back(p.x);
    ys.push_back(p.y);
  }
  detail::Range xr = detail::data_range(xs);
  detail::Range yr = detail::data_range(ys);
  for (const ReferenceLine& line : spec.reference_lines)
    (line.dim == ReferenceLine::Dim::X ? xr : yr).include(line.value);
  xr.pad();
  yr.pad();

  const double ml = 72, mr = 24, mt = 24, mb = 56;
  const double pw = spec.width - ml - mr;
  const double ph = spec.height - mt - mb;
  auto px = [&](double x) { return ml + xr.unit(x) * pw; };
  auto py = [&](double y) { return mt + (1.0 - yr.unit(y)) * ph; };

  double bmin = 0.0, bmax = 0.0;
  if (spec.bubble_encoding && !points.empty()) {
    bmin = bmax = points.front().bubble;
    for (const Point& p : points) {
      bmin = std::min(bmin, p.bubble);
      bmax = std::max(bmax, p.bubble);
    }
  }
  auto radius = [&](double v) {
    if (!spec.bubble_encoding || bmax == bmin) return spec.bubble_encoding ? 6.0 : 4.5;
    return 3.0 + 11.0 * std::sqrt((v - bmin) / (bmax - bmin));
  };
  auto fill = [&](double v) {
    if (!spec.bubble_encoding) return std::string("#4878a8");
    if (*spec.bubble_encoding == AxisField::Rsi) return spec.scale.color_at(v).hex();
    return std::string("#64748b");
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width << ' '
      << spec.height << "\">\n"
      << "<rect width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" fill=\"#ffffff\"/>\n"
      << "<rect x=\"" << detail::coord(ml) << "\" y=\"" << detail::coord(mt) << "\" width=\""
      << detail::coord(pw) << "\" height=\"" << detail::coord(ph)
      << "\" fill=\"none\" stroke=\"#222222\" stroke-width=\"1\"/>\n";

  // Ticks.
  for (int i = 0; i <= 5; ++i) {
    const double tx = xr.lo + (xr.hi - xr.lo) * i / 5.0;
    const double ty = yr.lo + (yr.hi - yr.lo) * i / 5.0;
    svg << "<line x1=\"" << detail::coord(px(tx)) << "\" y1=\"" << detail::coord(mt + ph)
        << "\" x2=\"" << detail::coord(px(tx)) << "\" y2=\"" << detail::coord(mt + ph + 5)
        << "\" stroke=\"#222222\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << detail::coord(px(tx)) << "\" y=\"" << detail::coord(mt + ph + 18)
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">"
        << xml_escape(detail::tick_label(tx)) << "</text>\n"
        << "<line x1=\"" << detail::coord(ml - 5) << "\" y1=\"" << detail::coord(py(ty))
        << "\" x2=\"" << detail::coord(ml) << "\" y2=\"" << detail::coord(py(ty))
        << "\" stroke=\"#222222\" stroke-width=\"1\"/>\n"
        << "<text x=\"" << detail::coord(ml - 8) << "\" y=\"" << detail::coord(py(ty) + 3)
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">"
        << xml_escape(detail::tick_label(ty)) << "</text>\n";
  }
  svg << "<text x=\"" << detail::coord(ml + pw / 2) << "\" y=\""
      << detail::coord(spec.height - 12)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\">"
      << xml_escape(axis_caption(spec.x_axis)) << "</text>\n"
      << "<text x=\"16\" y=\"" << detail::coord(mt + ph / 2)
      << "\" font-family=\"sans-serif\" font-size=\"12\" text-anchor=\"middle\" "
      << "transform=\"rotate(-90 16 " << detail::coord(mt + ph / 2) << ")\">"
      << xml_escape(axis_caption(spec.y_axis)) << "</text>\n";

  for (const ReferenceLine& line : spec.reference_lines) {
    if (line.dim == ReferenceLine::Dim::X) {
      const std::string x = detail::coord(px(line.value));
      svg << "<line class=\"refline\" x1=\"" << x << "\" y1=\"" << detail::coord(mt)
          << "\" x2=\"" << x << "\" y2=\"" << detail::coord(mt + ph)
          << "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n";
    } else {
      const std::string y = detail::coord(py(line.value));
      svg << "<line class=\"refline\" x1=\"" << detail::coord(ml) << "\" y1=\"" << y
          << "\" x2=\"" << detail::coord(ml + pw) << "\" y2=\"" << y
          << "\" stroke=\"#888888\" stroke-width=\"1\" stroke-dasharray=\"5,4\"/>\n";
    }
  }

  for (const Point& p : points) {
    svg << "<circle cx=\"" << detail::coord(px(p.x)) << "\" cy=\"" << detail::coord(py(p.y))
        << "\" r=\"" << detail::coord(radius(p.bubble)) << "\" fill=\"" << fill(p.bubble)
        << "\" fill-opacity=\"0.75\" stroke=\"#333333\" stroke-width=\"0.5\"/>\n";
  }

  // Annotate the rows farthest from the centroid, measured in unit space so
  // both axes weigh equally.
  if (spec.label_top_k > 0) {
    double cx = 0.0, cy = 0.0;
    for (const Point& p : points) {
      cx += xr.unit(p.x);
      cy += yr.unit(p.y);
    }
    cx /= static_cast<double>(points.size());
    cy /= static_cast<double>(points.size());

    std::vector<const Point*> by_distance;
    for (const Point& p : points) by_distance.push_back(&p);
    auto dist = [&](const Point* p) {
      return std::hypot(xr.unit(p->x) - cx, yr.unit(p->y) - cy);
    };
    std::sort(by_distance.begin(), by_distance.end(), [&](const Point* a, const Point* b) {
      const double da = dist(a), db = dist(b);
      if (da != db) return da > db;
      return a->row->nuts < b->row->nuts;
    });
    const std::size_t k = std::min(spec.label_top_k, by_distance.size());
    for (std::size_t i = 0; i < k; ++i) {
      const Point& p = *by_distance[i];
      double dx = xr.unit(p.x) - cx;
      double dy = (1.0 - yr.unit(p.y)) - (1.0 - cy);
      const double norm = std::hypot(dx, dy);
      if (norm == 0.0) {
        dx = 1.0;
        dy = 0.0;
      } else {
        dx /= norm;
        dy /= norm;
      }
      const double off = radius(p.bubble) + 5.0;
      const double lx = px(p.x) + dx * off;
      const double ly = py(p.y) + dy * off + 3.0;
      svg << "<text x=\"" << detail::coord(lx) << "\" y=\"" << detail::coord(ly)
          << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\""
          << (dx >= 0.0 ? "start" : "end") << "\">" << xml_escape(p.row->name) << "</text>\n";
    }
  }

  svg << "</svg>\n";
  return svg.str();
}

// Fills each geometry polygon with the diverging color of its region's RSI;
// regions absent from the rows get the missing fill. A legend maps scale
// stops to values. Byte-deterministic per input.
inline std::string render_choropleth(const std::vector<IndicatorRow>& rows,
                                     const ChoroplethSpec& spec) {
  if (spec.value != AxisField::Rsi)
    throw std::invalid_argument("choropleth supports the RSI indicator");

  std::map<NutsCode, double> values;
  for (const IndicatorRow& row : rows) values.emplace(row.nuts, row.rsi.value());

  // Bounding box over every ring.
  bool any = false;
  double minx = 0, miny = 0, maxx = 0, maxy = 0;
  for (const RegionShape& shape : spec.geometry.shapes) {
    for (const PolygonGeom& poly : shape.polygons) {
      for (const Ring& ring : poly.rings) {
        for (const PlanarPoint& pt : ring.points) {
          if (!any) {
            minx = maxx = pt[0];
            miny = maxy = pt[1];
            any = true;
          }
          minx = std::min(minx, pt[0]);
          maxx = std::max(maxx, pt[0]);
          miny = std::min(miny, pt[1]);
          maxy = std::max(maxy, pt[1]);
        }
      }
    }
  }

  const double margin = 16.0;
  const double legend_h = 70.0;
  const double avail_w = spec.width - 2 * margin;
  const double avail_h = spec.height - legend_h - 2 * margin;
  const double bw = maxx - minx;
  const double bh = maxy - miny;
  double s = 1.0;
  if (any) {
    s = std::min(bw > 0 ? avail_w / bw : avail_w, bh > 0 ? avail_h / bh : avail_h);
    if (!(s > 0) || !std::isfinite(s)) s = 1.0;
  }
  const double ox = margin + (avail_w - bw * s) / 2.0;
  const double oy = margin + (avail_h - bh * s) / 2.0;
  auto tx = [&](double x) { return ox + (x - minx) * s; };
  auto ty = [&](double y) { return oy + (maxy - y) * s; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << spec.width
      << "\" height=\"" << spec.height << "\" viewBox=\"0 0 " << spec.width << ' '
      << spec.height << "\">\n"
      << "<rect width=\"" << spec.width << "\" height=\"" << spec.height
      << "\" fill=\"#ffffff\"/>\n";

  std::map<std::string, int> id_uses;
  for (const RegionShape& shape : spec.geometry.shapes) {
    std::string id = shape.nuts.str();
    const int n = ++id_uses[id];
    if (n > 1) id += "-" + std::to_string(n);
    const auto it = values.find(shape.nuts);
    const std::string fill =
        it == values.end() ? spec.missing_fill : spec.scale.color_at(it->second).hex();
    svg << "<path id=\"" << xml_escape(id) << "\" fill=\"" << fill
        << "\" fill-rule=\"evenodd\" stroke=\"#ffffff\" stroke-width=\"0.7\" d=\"";
    for (const PolygonGeom& poly : shape.polygons) {
      for (const Ring& ring : poly.rings) {
        for (std::size_t i = 0; i < ring.points.size(); ++i) {
          svg << (i == 0 ? 'M' : 'L') << detail::coord(tx(ring.points[i][0])) << ' '
              << detail::coord(ty(ring.points[i][1]));
        }
        svg << 'Z';
      }
    }
    svg << "\"/>\n";
  }

  // Legend: five scale stops plus the missing-data swatch.
  const double lx0 = margin;
  const double ly0 = spec.height - legend_h + 14.0;
  svg << "<text x=\"" << detail::coord(lx0) << "\" y=\"" << detail::coord(ly0 - 4)
      << "\" font-family=\"sans-serif\" font-size=\"12\">" << xml_escape(axis_caption(spec.value))
      << "</text>\n";
  const double stops[] = {-1.0, -0.5, 0.0, 0.5, 1.0};
  for (int i = 0; i < 5; ++i) {
    const double x = lx0 + i * 64.0;
    svg << "<rect x=\"" << detail::coord(x) << "\" y=\"" << detail::coord(ly0) << "\" width=\""
        << "36\" height=\"16\" fill=\"" << spec.scale.color_at(stops[i]).hex()
        << "\" stroke=\"#555555\" stroke-width=\"0.5\"/>\n"
        << "<text x=\"" << detail::coord(x + 18) << "\" y=\"" << detail::coord(ly0 + 30)
        << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">"
        << xml_escape(detail::tick_label(stops[i])) << "</text>\n";
  }
  const double mx = lx0 + 5 * 64.0 + 24.0;
  svg << "<rect x=\"" << detail::coord(mx) << "\" y=\"" << detail::coord(ly0)
      << "\" width=\"36\" height=\"16\" fill=\"" << spec.missing_fill
      << "\" stroke=\"#555555\" stroke-width=\"0.5\"/>\n"
      << "<text x=\"" << detail::coord(mx + 18) << "\" y=\"" << detail::coord(ly0 + 30)
      << "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"middle\">no data</text>\n";

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace geospec
