#include "geospec/render.hpp"

#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "geospec/geometry.hpp"
#include "test_support.hpp"

using namespace geospec;
using support::HasErrc;

namespace {

IndicatorRow row(const std::string& code, const std::string& name, double rsi,
                 std::optional<double> rci, std::uint64_t docs = 100,
                 std::uint64_t cites = 1000) {
  IndicatorRow r{NutsCode(code), name, "Country", docs, cites, docs * 4, {}, {}, {}, {}};
  r.aindx = activity_from_rsi(rsi);
  r.rsi = RsiValue(rsi);
  r.rci = rci ? RciValue(*rci) : RciValue::undefined();
  if (r.rci.defined()) r.quadrant = classify_quadrant(r.rsi, r.rci);
  return r;
}

ScatterSpec fig3_spec() {
  ScatterSpec spec;
  spec.x_axis = AxisField::Rsi;
  spec.y_axis = AxisField::Rci;
  spec.reference_lines = {{ReferenceLine::Dim::X, 0.0}, {ReferenceLine::Dim::Y, 1.0}};
  spec.label_top_k = 3;
  return spec;
}

const std::string kTwoRegionGeo = R"({
  "type": "FeatureCollection",
  "features": [
    {"type": "Feature", "properties": {"NUTS_ID": "AA001"},
     "geometry": {"type": "Polygon", "coordinates": [[[0,0],[10,0],[10,10],[0,10],[0,0]]]}},
    {"type": "Feature", "properties": {"NUTS_ID": "AA002"},
     "geometry": {"type": "Polygon", "coordinates": [[[12,0],[22,0],[22,10],[12,10],[12,0]]]}},
    {"type": "Feature", "properties": {"NUTS_ID": "AA003"},
     "geometry": {"type": "MultiPolygon", "coordinates":
       [[[[24,0],[30,0],[30,6],[24,6],[24,0]]], [[[32,0],[38,0],[38,6],[32,6],[32,0]]]]}}
  ]
})";

}  // namespace

TEST_CASE("diverging scale is centered and luminance-monotone") {
  const DivergingScale scale;
  CHECK(scale.color_at(0.0).hex() == scale.mid.hex());
  CHECK(scale.color_at(-1.0).hex() == scale.low.hex());
  CHECK(scale.color_at(1.0).hex() == scale.high.hex());
  CHECK(scale.color_at(-2.0).hex() == scale.low.hex());
  CHECK(scale.color_at(2.0).hex() == scale.high.hex());
  double prev = scale.color_at(-1.0).luminance();
  for (int i = 1; i <= 400; ++i) {
    const double v = -1.0 + i * 0.005;
    const double lum = scale.color_at(v).luminance();
    REQUIRE(lum <= prev + 1e-9);
    prev = lum;
  }
}

TEST_CASE("scatter renders one circle per surviving row") {
  const std::vector<IndicatorRow> rows = {
      row("AA001", "Alpha", 0.5, 2.0),
      row("AA002", "Beta", -0.3, 0.7),
      row("AA003", "Gamma", 0.1, std::nullopt),
  };
  const std::string svg = render_scatter(rows, fig3_spec());
  CHECK(support::count_occurrences(svg, "<circle") == 2);  // undefined rci dropped
  std::string err;
  CHECK(support::xml_well_formed(svg, &err));

  ScatterSpec fig1;
  fig1.x_axis = AxisField::Docs;
  fig1.y_axis = AxisField::Cites;
  fig1.bubble_encoding = AxisField::Rsi;
  const std::string bubble_svg = render_scatter(rows, fig1);
  CHECK(support::count_occurrences(bubble_svg, "<circle") == 3);
  CHECK(support::xml_well_formed(bubble_svg, &err));
}

TEST_CASE("scatter raises EmptyInput when nothing survives") {
  const std::vector<IndicatorRow> rows = {row("AA001", "Alpha", 0.5, std::nullopt)};
  REQUIRE_THROWS_MATCHES(render_scatter(rows, fig3_spec()), Error, HasErrc(errc::empty_input));
  REQUIRE_THROWS_MATCHES(render_scatter({}, fig3_spec()), Error, HasErrc(errc::empty_input));
}

TEST_CASE("scatter output is byte-deterministic") {
  const std::vector<IndicatorRow> rows = {
      row("AA001", "Alpha", 0.5, 2.0),
      row("AA002", "Beta", -0.3, 0.7),
      row("AA003", "Gamma & <Co>", 0.9, 4.4),
  };
  const std::string a = render_scatter(rows, fig3_spec());
  const std::string b = render_scatter(rows, fig3_spec());
  CHECK(a == b);
  CHECK(a.find("Gamma &amp; &lt;Co&gt;") != std::string::npos);
}

TEST_CASE("scatter handles degenerate layouts") {
  // A single row sitting exactly on both reference lines.
  const std::string one = render_scatter({row("AA001", "Alpha", 0.0, 1.0)}, fig3_spec());
  CHECK(support::count_occurrences(one, "<circle") == 1);
  CHECK(support::count_occurrences(one, "class=\"refline\"") == 2);
  std::string err;
  CHECK(support::xml_well_formed(one, &err));

  // Two coincident rows stay two circles and the file stays well-formed.
  const auto duplicated = std::vector<IndicatorRow>{row("AA001", "Alpha", 0.2, 1.5),
                                                    row("AA002", "Alpha twin", 0.2, 1.5)};
  const std::string two = render_scatter(duplicated, fig3_spec());
  CHECK(support::count_occurrences(two, "<circle") == 2);
  CHECK(support::xml_well_formed(two, &err));
}

TEST_CASE("scatter annotates the configured number of labels") {
  std::vector<IndicatorRow> rows;
  for (int i = 0; i < 12; ++i) {
    char code[6] = {};
    std::snprintf(code, sizeof code, "AA%03d", i);
    rows.push_back(row(code, "Region " + std::to_string(i), -0.8 + i * 0.15,
                       0.3 + 0.35 * i));
  }
  ScatterSpec spec = fig3_spec();
  spec.label_top_k = 4;
  const std::string svg = render_scatter(rows, spec);
  CHECK(support::count_occurrences(svg, "font-size=\"11\"") == 4);
}

TEST_CASE("scatter places points correctly against the reference lines") {
  // One high-impact unspecialized outlier among specialized low-impact rows.
  const std::vector<IndicatorRow> rows = {
      row("DK031", "Outlier", -0.2, 4.3),
      row("AA001", "Alpha", 0.5, 0.8),
      row("AA002", "Beta", 0.7, 0.6),
  };
  ScatterSpec spec = fig3_spec();
  spec.label_top_k = 0;
  const std::string svg = render_scatter(rows, spec);

  // Reference line pixel positions.
  auto axis_pos = [&](std::size_t nth) {
    std::size_t at = svg.find("class=\"refline\"");
    for (std::size_t i = 0; i < nth; ++i) at = svg.find("class=\"refline\"", at + 1);
    return at;
  };
  auto attr_after = [&](std::size_t from, const std::string& attr) {
    const std::size_t a = svg.find(attr + "=\"", from);
    const std::size_t start = a + attr.size() + 2;
    return std::stod(svg.substr(start, svg.find('"', start) - start));
  };
  const double x_zero = attr_after(axis_pos(0), "x1");   // vertical line at rsi = 0
  const double y_unit = attr_after(axis_pos(1), "y1");   // horizontal line at rci = 1

  std::vector<std::pair<double, double>> circles;
  for (std::size_t at = svg.find("<circle"); at != std::string::npos;
       at = svg.find("<circle", at + 1))
    circles.emplace_back(attr_after(at, "cx"), attr_after(at, "cy"));
  REQUIRE(circles.size() == 3);

  // Exactly one circle sits left of the rsi reference and above the rci one
  // (SVG y grows downward).
  std::size_t outliers = 0;
  for (const auto& [cx, cy] : circles)
    if (cx < x_zero && cy < y_unit) ++outliers;
  CHECK(outliers == 1);
}

TEST_CASE("scatter validates axis configuration") {
  ScatterSpec bad;
  bad.x_axis = AxisField::Cites;
  REQUIRE_THROWS_AS(render_scatter({row("AA001", "A", 0.1, 1.2)}, bad), std::invalid_argument);
}

TEST_CASE("geojson parsing reads polygons, multipolygons, and holes") {
  const std::string with_hole = R"({
    "type": "FeatureCollection",
    "features": [
      {"type": "Feature", "properties": {"NUTS_ID": "AA001"},
       "geometry": {"type": "Polygon", "coordinates":
         [[[0,0],[10,0],[10,10],[0,10],[0,0]], [[4,4],[6,4],[6,6],[4,6],[4,4]]]}}
    ]
  })";
  const NutsGeometry geo = parse_geojson(with_hole);
  REQUIRE(geo.shapes.size() == 1);
  REQUIRE(geo.shapes[0].polygons.size() == 1);
  CHECK(geo.shapes[0].polygons[0].rings.size() == 2);

  const NutsGeometry multi = parse_geojson(kTwoRegionGeo);
  REQUIRE(multi.shapes.size() == 3);
  CHECK(multi.shapes[2].polygons.size() == 2);
}

TEST_CASE("geojson parsing rejects bad input") {
  REQUIRE_THROWS_MATCHES(parse_geojson("{not json"), Error, HasErrc(errc::bad_geometry));
  REQUIRE_THROWS_MATCHES(parse_geojson(R"({"type": "Feature"})"), Error,
                         HasErrc(errc::bad_geometry));
  const std::string line = R"({
    "type": "FeatureCollection",
    "features": [{"type": "Feature", "properties": {"NUTS_ID": "AA001"},
      "geometry": {"type": "LineString", "coordinates": [[0,0],[1,1]]}}]
  })";
  REQUIRE_THROWS_MATCHES(parse_geojson(line), Error, HasErrc(errc::bad_geometry));
  const std::string no_key = R"({
    "type": "FeatureCollection",
    "features": [{"type": "Feature", "properties": {"name": "x"},
      "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1],[0,0]]]}}]
  })";
  REQUIRE_THROWS_MATCHES(parse_geojson(no_key), Error, HasErrc(errc::key_missing));
  const std::string bad_code = R"({
    "type": "FeatureCollection",
    "features": [{"type": "Feature", "properties": {"NUTS_ID": "bogus"},
      "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1],[0,0]]]}}]
  })";
  REQUIRE_THROWS_MATCHES(parse_geojson(bad_code), Error, HasErrc(errc::bad_nuts_code));
  const std::string short_ring = R"({
    "type": "FeatureCollection",
    "features": [{"type": "Feature", "properties": {"NUTS_ID": "AA001"},
      "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0]]]}}]
  })";
  REQUIRE_THROWS_MATCHES(parse_geojson(short_ring), Error, HasErrc(errc::bad_geometry));

  const std::string custom_key = R"({
    "type": "FeatureCollection",
    "features": [{"type": "Feature", "properties": {"code": "AA001"},
      "geometry": {"type": "Polygon", "coordinates": [[[0,0],[1,0],[1,1],[0,0]]]}}]
  })";
  CHECK(parse_geojson(custom_key, "code").shapes.size() == 1);
}

TEST_CASE("choropleth fills data regions and styles missing ones") {
  ChoroplethSpec spec;
  spec.geometry = parse_geojson(kTwoRegionGeo);
  const std::vector<IndicatorRow> rows = {row("AA001", "Alpha", 0.8, 1.0),
                                          row("AA002", "Beta", -0.6, 1.0)};
  const std::string svg = render_choropleth(rows, spec);
  std::string err;
  REQUIRE(support::xml_well_formed(svg, &err));

  const std::string fill_a = support::attr_of_id(svg, "AA001", "fill");
  const std::string fill_b = support::attr_of_id(svg, "AA002", "fill");
  const std::string fill_c = support::attr_of_id(svg, "AA003", "fill");
  CHECK(fill_a == spec.scale.color_at(0.8).hex());
  CHECK(fill_b == spec.scale.color_at(-0.6).hex());
  CHECK(fill_c == spec.missing_fill);

  // Deterministic output and a legend with the midpoint stop.
  CHECK(render_choropleth(rows, spec) == svg);
  CHECK(svg.find(spec.scale.color_at(0.0).hex()) != std::string::npos);
  CHECK(svg.find("no data") != std::string::npos);
}

TEST_CASE("choropleth at uniform zero renders the midpoint everywhere") {
  ChoroplethSpec spec;
  spec.geometry = parse_geojson(kTwoRegionGeo);
  const std::vector<IndicatorRow> rows = {row("AA001", "Alpha", 0.0, 1.0),
                                          row("AA002", "Beta", 0.0, 1.0),
                                          row("AA003", "Gamma", 0.0, 1.0)};
  const std::string svg = render_choropleth(rows, spec);
  const std::string mid = spec.scale.mid.hex();
  CHECK(support::attr_of_id(svg, "AA001", "fill") == mid);
  CHECK(support::attr_of_id(svg, "AA002", "fill") == mid);
  CHECK(support::attr_of_id(svg, "AA003", "fill") == mid);
}

TEST_CASE("choropleth geometry is fitted inside the viewport") {
  ChoroplethSpec spec;
  // Coordinates far from the origin and wildly out of viewport proportions.
  spec.geometry = parse_geojson(R"({
    "type": "FeatureCollection",
    "features": [
      {"type": "Feature", "properties": {"NUTS_ID": "AA001"},
       "geometry": {"type": "Polygon",
         "coordinates": [[[100000,500000],[180000,500000],[180000,502000],[100000,502000],[100000,500000]]]}},
      {"type": "Feature", "properties": {"NUTS_ID": "AA002"},
       "geometry": {"type": "Polygon",
         "coordinates": [[[100000,504000],[140000,504000],[140000,508000],[100000,508000],[100000,504000]]]}}
    ]
  })");
  const std::string svg =
      render_choropleth({row("AA001", "Alpha", 0.4, 1.0)}, spec);

  // Every path coordinate lands inside the SVG canvas.
  for (std::size_t at = svg.find(" d=\""); at != std::string::npos;
       at = svg.find(" d=\"", at + 1)) {
    const std::size_t start = at + 4;
    const std::size_t end = svg.find('"', start);
    std::istringstream path(svg.substr(start, end - start));
    char command;
    double x = 0.0, y = 0.0;
    while (path >> command) {
      if (command == 'Z') continue;
      REQUIRE((command == 'M' || command == 'L'));
      path >> x >> y;
      REQUIRE(x >= 0.0);
      REQUIRE(x <= spec.width);
      REQUIRE(y >= 0.0);
      REQUIRE(y <= spec.height);
    }
  }
}

TEST_CASE("choropleth luminance follows the rsi ordering") {
  ChoroplethSpec spec;
  spec.geometry = parse_geojson(kTwoRegionGeo);
  const std::vector<IndicatorRow> rows = {row("AA001", "Alpha", 0.9, 1.0),
                                          row("AA002", "Beta", 0.1, 1.0),
                                          row("AA003", "Gamma", -0.7, 1.0)};
  const std::string svg = render_choropleth(rows, spec);
  auto luminance_of = [&](const std::string& id) {
    const std::string hex = support::attr_of_id(svg, id, "fill");
    const int r = std::stoi(hex.substr(1, 2), nullptr, 16);
    const int g = std::stoi(hex.substr(3, 2), nullptr, 16);
    const int b = std::stoi(hex.substr(5, 2), nullptr, 16);
    return Rgb{r, g, b}.luminance();
  };
  CHECK(luminance_of("AA001") < luminance_of("AA002"));
  CHECK(luminance_of("AA002") < luminance_of("AA003"));
}
