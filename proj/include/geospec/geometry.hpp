#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "geospec/dataset.hpp"
#include "geospec/errors.hpp"

namespace geospec {

using PlanarPoint = std::array<double, 2>;

struct Ring {
  std::vector<PlanarPoint> points;
};

// One polygon: exterior ring first, holes after.
struct PolygonGeom {
  std::vector<Ring> rings;
};

// All polygons belonging to one NUTS region.
struct RegionShape {
  NutsCode nuts;
  std::vector<PolygonGeom> polygons;
};

// Planar (pre-projected) NUTS-3 geometries in file order.
struct NutsGeometry {
  std::vector<RegionShape> shapes;
};

namespace detail {

inline Ring parse_ring(const nlohmann::json& coords) {
  if (!coords.is_array() || coords.size() < 3)
    throw Error(errc::bad_geometry, "ring must be an array of at least 3 positions");
  Ring ring;
  ring.points.reserve(coords.size());
  for (const auto& pos : coords) {
    if (!pos.is_array() || pos.size() < 2 || !pos[0].is_number() || !pos[1].is_number())
      throw Error(errc::bad_geometry, "position must be an array of at least 2 numbers");
    ring.points.push_back({pos[0].get<double>(), pos[1].get<double>()});
  }
  return ring;
}

inline PolygonGeom parse_polygon(const nlohmann::json& coords) {
  if (!coords.is_array() || coords.empty())
    throw Error(errc::bad_geometry, "polygon must carry at least one ring");
  PolygonGeom poly;
  for (const auto& ring : coords) poly.rings.push_back(parse_ring(ring));
  return poly;
}

}  // namespace detail

// Parses a GeoJSON FeatureCollection of Polygon/MultiPolygon features into
// planar region shapes. `nuts_property` names the feature property holding
// the NUTS code.
inline NutsGeometry parse_geojson(const std::string& text,
                                  const std::string& nuts_property = "NUTS_ID") {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw Error(errc::bad_geometry, std::string("not valid JSON: ") + e.what());
  }
  if (!doc.is_object() || doc.value("type", "") != "FeatureCollection" ||
      !doc.contains("features") || !doc["features"].is_array())
    throw Error(errc::bad_geometry, "expected a GeoJSON FeatureCollection");

  NutsGeometry geometry;
  for (const auto& feature : doc["features"]) {
    if (!feature.is_object() || feature.value("type", "") != "Feature")
      throw Error(errc::bad_geometry, "features array must contain Feature objects");

    const auto props = feature.find("properties");
    if (props == feature.end() || !props->is_object() || !props->contains(nuts_property) ||
        !(*props)[nuts_property].is_string())
      throw Error(errc::key_missing,
                  "feature lacks a string property '" + nuts_property + "'");
    const std::string code = (*props)[nuts_property].get<std::string>();
    if (!NutsCode::valid(code))
      throw Error(errc::bad_nuts_code, "'" + code + "' is not a valid NUTS-3 code");

    const auto geom = feature.find("geometry");
    if (geom == feature.end() || !geom->is_object())
      throw Error(errc::bad_geometry, "feature '" + code + "' has no geometry object");
    const std::string type = geom->value("type", "");
    const auto coords = geom->find("coordinates");
    if (coords == geom->end())
      throw Error(errc::bad_geometry, "feature '" + code + "' has no coordinates");

    RegionShape shape{NutsCode(code), {}};
    if (type == "Polygon") {
      shape.polygons.push_back(detail::parse_polygon(*coords));
    } else if (type == "MultiPolygon") {
      if (!coords->is_array() || coords->empty())
        throw Error(errc::bad_geometry, "MultiPolygon of '" + code + "' is empty");
      for (const auto& poly : *coords) shape.polygons.push_back(detail::parse_polygon(poly));
    } else {
      throw Error(errc::bad_geometry,
                  "feature '" + code + "' is " + (type.empty() ? "untyped" : type) +
                      ", only Polygon and MultiPolygon are mappable");
    }
    geometry.shapes.push_back(std::move(shape));
  }
  return geometry;
}

}  // namespace geospec
