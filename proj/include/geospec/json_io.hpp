#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "geospec/analysis.hpp"
#include "geospec/text.hpp"

namespace geospec {

// JSON mirror of the indicator CSV schema, plus display-rounded variants
// (`*_display`: RSI and AIndx at 3 decimals, RCI at 2). Undefined RCI and
// absent quadrant serialize as null.
inline nlohmann::ordered_json row_to_json(const IndicatorRow& row) {
  nlohmann::ordered_json j;
  j["nuts_code"] = row.nuts.str();
  j["region_name"] = row.name;
  j["country"] = row.country;
  j["focal_docs"] = row.focal_docs;
  j["focal_cites"] = row.focal_cites;
  j["aindx"] = row.aindx.value();
  j["rsi"] = row.rsi.value();
  if (row.rci.defined())
    j["rci"] = row.rci.value();
  else
    j["rci"] = nullptr;
  if (row.quadrant)
    j["quadrant"] = to_string(*row.quadrant);
  else
    j["quadrant"] = nullptr;
  j["aindx_display"] = fmt_fixed(row.aindx.value(), 3);
  j["rsi_display"] = fmt_fixed(row.rsi.value(), 3);
  if (row.rci.defined())
    j["rci_display"] = fmt_fixed(row.rci.value(), 2);
  else
    j["rci_display"] = nullptr;
  return j;
}

inline nlohmann::ordered_json rows_to_json(const std::vector<IndicatorRow>& rows) {
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const IndicatorRow& row : rows) arr.push_back(row_to_json(row));
  return arr;
}

inline nlohmann::ordered_json report_to_json(
    const std::map<QuadrantProfile, std::vector<IndicatorRow>>& buckets) {
  nlohmann::ordered_json j = nlohmann::ordered_json::object();
  for (const auto& [profile, rows] : buckets) j[to_string(profile)] = rows_to_json(rows);
  return j;
}

}  // namespace geospec
