#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "geospec/csv.hpp"
#include "geospec/errors.hpp"
#include "geospec/indicators.hpp"

namespace geospec {

// Eurostat NUTS-3 identifier: two uppercase country letters followed by
// three uppercase alphanumerics.
class NutsCode {
 public:
  explicit NutsCode(std::string code) : code_(std::move(code)) {
    if (!valid(code_))
      throw Error(errc::bad_nuts_code, "'" + code_ + "' is not a valid NUTS-3 code");
  }

  static bool valid(const std::string& s) {
    if (s.size() != 5) return false;
    auto upper = [](char c) { return c >= 'A' && c <= 'Z'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!upper(s[0]) || !upper(s[1])) return false;
    for (std::size_t i = 2; i < 5; ++i)
      if (!upper(s[i]) && !digit(s[i])) return false;
    return true;
  }

  const std::string& str() const { return code_; }
  auto operator<=>(const NutsCode&) const = default;

 private:
  std::string code_;
};

// Thematic aggregation level. ALL, COMPU, and AI are the built-in nested
// chain; any other token is an arbitrary topic code.
class FieldLevel {
 public:
  explicit FieldLevel(std::string id) : id_(std::move(id)) {
    if (id_.empty()) throw Error(errc::malformed_row, "field level token must be non-empty");
  }

  const std::string& id() const { return id_; }
  auto operator<=>(const FieldLevel&) const = default;

 private:
  std::string id_;
};

// One NUTS-3 region with its per-level counts.
struct RegionRecord {
  NutsCode nuts;
  std::string name;
  std::string country;
  std::map<FieldLevel, FieldCounts> counts;

  const FieldCounts* find_level(const FieldLevel& level) const {
    auto it = counts.find(level);
    return it == counts.end() ? nullptr : &it->second;
  }

  bool operator==(const RegionRecord&) const = default;
};

enum class Provenance { ComputedFromDataset, SuppliedExternally };

inline const char* to_string(Provenance p) {
  return p == Provenance::ComputedFromDataset ? "ComputedFromDataset" : "SuppliedExternally";
}

// Aggregate counts for the reference population (per level).
struct ReferenceTotals {
  std::map<FieldLevel, FieldCounts> counts;
  Provenance provenance = Provenance::ComputedFromDataset;

  const FieldCounts& at(const FieldLevel& level) const {
    auto it = counts.find(level);
    if (it == counts.end())
      throw Error(errc::missing_level, "reference totals carry no level '" + level.id() + "'");
    return it->second;
  }
};

namespace detail {

inline std::uint64_t parse_count(const std::string& text, const char* column, std::size_t line) {
  std::uint64_t value = 0;
  const char* begin = text.data();
  const char* end = begin + text.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || text.empty())
    throw Error(errc::malformed_row,
                std::string(column) + " must be a base-10 non-negative integer, got '" + text + "'",
                line);
  return value;
}

inline void strip_bom(std::string& s) {
  if (s.size() >= 3 && s[0] == '\xEF' && s[1] == '\xBB' && s[2] == '\xBF') s.erase(0, 3);
}

// AI is nested in COMPU which is nested in ALL; document counts must respect
// that whenever two chain levels are present together.
inline void check_nesting(const RegionRecord& rec) {
  static const char* chain[] = {"AI", "COMPU", "ALL"};
  for (std::size_t inner = 0; inner < 3; ++inner) {
    for (std::size_t outer = inner + 1; outer < 3; ++outer) {
      const FieldCounts* in = rec.find_level(FieldLevel(chain[inner]));
      const FieldCounts* out = rec.find_level(FieldLevel(chain[outer]));
      if (in && out && in->docs > out->docs)
        throw Error(errc::nesting_violation,
                    std::string(chain[inner]) + " docs (" + std::to_string(in->docs) +
                        ") exceed " + chain[outer] + " docs (" + std::to_string(out->docs) +
                        ") for region " + rec.nuts.str());
    }
  }
}

}  // namespace detail

// Parses the long-format dataset CSV
// (`nuts_code,region_name,country,level,docs,cites`, first line header).
// Returns one record per region, sorted by NUTS code.
inline std::vector<RegionRecord> parse_dataset(std::istream& in) {
  csv::Reader reader(in);
  std::vector<std::string> fields;
  if (!reader.next(fields))
    throw Error(errc::malformed_row, "empty input, expected a header row", 1);
  detail::strip_bom(fields[0]);
  static const std::vector<std::string> header = {"nuts_code", "region_name", "country",
                                                  "level",     "docs",        "cites"};
  if (fields != header)
    throw Error(errc::malformed_row,
                "header must be 'nuts_code,region_name,country,level,docs,cites'",
                reader.record_line());

  std::map<NutsCode, RegionRecord> by_code;
  std::set<std::pair<std::string, std::string>> seen;
  while (reader.next(fields)) {
    const std::size_t line = reader.record_line();
    if (fields.size() != 6)
      throw Error(errc::malformed_row,
                  "expected 6 columns, got " + std::to_string(fields.size()), line);
    if (!NutsCode::valid(fields[0]))
      throw Error(errc::bad_nuts_code, "'" + fields[0] + "' is not a valid NUTS-3 code", line);
    NutsCode code(fields[0]);
    if (fields[3].empty())
      throw Error(errc::malformed_row, "level token must be non-empty", line);
    FieldLevel level(fields[3]);
    FieldCounts counts{detail::parse_count(fields[4], "docs", line),
                       detail::parse_count(fields[5], "cites", line)};
    if (counts.cites > 0 && counts.docs == 0)
      throw Error(errc::malformed_row, "citations recorded without any documents", line);

    if (!seen.emplace(code.str(), level.id()).second)
      throw Error(errc::duplicate_key,
                  "repeated code+level " + code.str() + "/" + level.id(), line);

    auto it = by_code.find(code);
    if (it == by_code.end()) {
      it = by_code.emplace(code, RegionRecord{code, fields[1], fields[2], {}}).first;
    } else if (it->second.name != fields[1] || it->second.country != fields[2]) {
      throw Error(errc::malformed_row,
                  "conflicting name or country for region " + code.str(), line);
    }
    it->second.counts.emplace(level, counts);
  }

  std::vector<RegionRecord> records;
  records.reserve(by_code.size());
  for (auto& [code, rec] : by_code) {
    detail::check_nesting(rec);
    records.push_back(std::move(rec));
  }
  return records;
}

// Writes records back in the dataset CSV schema, rows sorted by code then
// level. parse_dataset(write_dataset(records)) reproduces `records`.
inline void write_dataset(const std::vector<RegionRecord>& records, std::ostream& out) {
  out << "nuts_code,region_name,country,level,docs,cites\n";
  std::vector<const RegionRecord*> sorted;
  sorted.reserve(records.size());
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const RegionRecord* a, const RegionRecord* b) { return a->nuts < b->nuts; });
  for (const RegionRecord* rec : sorted) {
    for (const auto& [level, counts] : rec->counts) {
      csv::write_record(out, {rec->nuts.str(), rec->name, rec->country, level.id(),
                              std::to_string(counts.docs), std::to_string(counts.cites)});
    }
  }
}

// Exact integer sums of every requested level over all records.
inline ReferenceTotals compute_reference(const std::vector<RegionRecord>& records,
                                         const std::set<FieldLevel>& levels) {
  ReferenceTotals totals;
  totals.provenance = Provenance::ComputedFromDataset;
  for (const FieldLevel& level : levels) {
    std::uint64_t docs = 0;
    std::uint64_t cites = 0;
    bool present = false;
    for (const RegionRecord& rec : records) {
      if (const FieldCounts* fc = rec.find_level(level)) {
        docs += fc->docs;
        cites += fc->cites;
        present = true;
      }
    }
    if (!present)
      throw Error(errc::missing_level, "level '" + level.id() + "' occurs in no record");
    totals.counts.emplace(level, FieldCounts{docs, cites});
  }
  return totals;
}

// Reads externally supplied totals (`level,docs,cites` rows; a literal
// header line is accepted and skipped).
inline ReferenceTotals load_reference(std::istream& in) {
  ReferenceTotals totals;
  totals.provenance = Provenance::SuppliedExternally;
  csv::Reader reader(in);
  std::vector<std::string> fields;
  bool first = true;
  while (reader.next(fields)) {
    const std::size_t line = reader.record_line();
    if (first) {
      detail::strip_bom(fields[0]);
      first = false;
      if (fields == std::vector<std::string>{"level", "docs", "cites"}) continue;
    }
    if (fields.size() != 3)
      throw Error(errc::malformed_row,
                  "expected 3 columns, got " + std::to_string(fields.size()), line);
    if (fields[0].empty())
      throw Error(errc::malformed_row, "level token must be non-empty", line);
    FieldLevel level(fields[0]);
    FieldCounts counts{detail::parse_count(fields[1], "docs", line),
                       detail::parse_count(fields[2], "cites", line)};
    if (counts.cites > 0 && counts.docs == 0)
      throw Error(errc::malformed_row, "citations recorded without any documents", line);
    if (!totals.counts.emplace(level, counts).second)
      throw Error(errc::duplicate_key, "repeated level " + level.id(), line);
  }
  return totals;
}

}  // namespace geospec
