#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "geospec/csv.hpp"
#include "geospec/dataset.hpp"
#include "geospec/indicators.hpp"
#include "geospec/text.hpp"

namespace geospec {

// Focal/baseline field pair, reference totals, and the inclusion thresholds
// used by ranking (baseline docs) and quadrant reporting (focal docs).
struct AnalysisConfig {
  FieldLevel focal{"AI"};
  FieldLevel baseline{"COMPU"};
  ReferenceTotals reference;
  std::uint64_t min_baseline_docs = 200;
  std::uint64_t min_focal_docs = 100;
};

// Per-region indicator values for one focal/baseline pair.
struct IndicatorRow {
  NutsCode nuts;
  std::string name;
  std::string country;
  std::uint64_t focal_docs = 0;
  std::uint64_t focal_cites = 0;
  std::uint64_t baseline_docs = 0;
  ActivityIndexValue aindx;
  RsiValue rsi;
  RciValue rci;
  std::optional<QuadrantProfile> quadrant;
};

namespace detail {

inline bool row_before(const IndicatorRow& a, const IndicatorRow& b) {
  if (a.rsi.value() != b.rsi.value()) return a.rsi.value() > b.rsi.value();
  return a.nuts < b.nuts;
}

}  // namespace detail

// Computes one row per region that carries both levels with baseline docs
// > 0. Regions that cannot be assessed are skipped; a human-readable notice
// per skip is appended to `notices` when provided. Output is ordered by
// descending RSI, ties by ascending NUTS code.
inline std::vector<IndicatorRow> compute_rows(const std::vector<RegionRecord>& records,
                                              const AnalysisConfig& config,
                                              std::vector<std::string>* notices = nullptr) {
  if (config.focal == config.baseline)
    throw std::invalid_argument("focal and baseline levels must differ");
  const FieldCounts& ref_focal = config.reference.at(config.focal);
  const FieldCounts& ref_baseline = config.reference.at(config.baseline);

  auto notice = [&](const RegionRecord& rec, const std::string& why) {
    if (notices)
      notices->push_back("skipped " + rec.nuts.str() + " (" + rec.name + "): " + why);
  };

  std::vector<IndicatorRow> rows;
  rows.reserve(records.size());
  for (const RegionRecord& rec : records) {
    const FieldCounts* focal = rec.find_level(config.focal);
    const FieldCounts* baseline = rec.find_level(config.baseline);
    if (!focal) {
      notice(rec, "no counts for focal level " + config.focal.id());
      continue;
    }
    if (!baseline) {
      notice(rec, "no counts for baseline level " + config.baseline.id());
      continue;
    }
    if (baseline->docs == 0) {
      notice(rec, "baseline level " + config.baseline.id() + " has zero documents");
      continue;
    }
    if (focal->docs > baseline->docs)
      throw Error(errc::inconsistent_counts,
                  "focal docs exceed baseline docs for region " + rec.nuts.str());

    IndicatorRow row{rec.nuts, rec.name, rec.country, focal->docs,
                     focal->cites, baseline->docs, {}, {}, {}, {}};
    row.aindx = activity_index(focal->docs, baseline->docs, ref_focal.docs, ref_baseline.docs);
    row.rsi = rsi_from_activity(row.aindx);
    row.rci =
        relative_citation_impact(focal->cites, focal->docs, ref_focal.cites, ref_focal.docs);
    if (row.rci.defined()) row.quadrant = classify_quadrant(row.rsi, row.rci);
    rows.push_back(std::move(row));
  }
  std::sort(rows.begin(), rows.end(), detail::row_before);
  return rows;
}

// Rows with baseline docs >= config.min_baseline_docs, descending RSI,
// truncated to top_n.
inline std::vector<IndicatorRow> rank_rsi(const std::vector<IndicatorRow>& rows,
                                          const AnalysisConfig& config, std::size_t top_n) {
  if (top_n == 0) throw std::invalid_argument("top_n must be positive");
  std::vector<IndicatorRow> ranked;
  for (const IndicatorRow& row : rows)
    if (row.baseline_docs >= config.min_baseline_docs) ranked.push_back(row);
  std::sort(ranked.begin(), ranked.end(), detail::row_before);
  if (ranked.size() > top_n)
    ranked.erase(ranked.begin() + static_cast<std::ptrdiff_t>(top_n), ranked.end());
  return ranked;
}

// Buckets rows with focal docs >= config.min_focal_docs and a defined RCI by
// quadrant. All five buckets are always present.
inline std::map<QuadrantProfile, std::vector<IndicatorRow>> quadrant_report(
    const std::vector<IndicatorRow>& rows, const AnalysisConfig& config) {
  std::map<QuadrantProfile, std::vector<IndicatorRow>> buckets;
  for (QuadrantProfile q :
       {QuadrantProfile::SpecializedHighImpact, QuadrantProfile::SpecializedLowImpact,
        QuadrantProfile::UnspecializedHighImpact, QuadrantProfile::UnspecializedLowImpact,
        QuadrantProfile::Boundary})
    buckets[q];
  for (const IndicatorRow& row : rows) {
    if (row.focal_docs < config.min_focal_docs || !row.rci.defined()) continue;
    buckets[classify_quadrant(row.rsi, row.rci)].push_back(row);
  }
  return buckets;
}

inline const char* indicator_csv_header() {
  return "nuts_code,region_name,country,focal_docs,focal_cites,aindx,rsi,rci,quadrant";
}

// Serializes rows in the indicator CSV schema; numeric values keep full
// round-trip precision, undefined RCI and absent quadrant become empty
// fields.
inline std::string rows_to_csv(const std::vector<IndicatorRow>& rows) {
  std::ostringstream out;
  out << indicator_csv_header() << '\n';
  for (const IndicatorRow& row : rows) {
    csv::write_record(
        out, {row.nuts.str(), row.name, row.country, std::to_string(row.focal_docs),
              std::to_string(row.focal_cites), fmt_double(row.aindx.value()),
              fmt_double(row.rsi.value()),
              row.rci.defined() ? fmt_double(row.rci.value()) : std::string(),
              row.quadrant ? std::string(to_string(*row.quadrant)) : std::string()});
  }
  return out.str();
}

}  // namespace geospec
