#include "geospec/analysis.hpp"

#include <random>
#include <sstream>

#include <catch2/catch_amalgamated.hpp>

#include "geospec/json_io.hpp"
#include "test_support.hpp"

using namespace geospec;
using support::HasErrc;

namespace {

RegionRecord region(const std::string& code, std::uint64_t focal_docs,
                    std::uint64_t focal_cites, std::uint64_t baseline_docs,
                    std::uint64_t baseline_cites) {
  RegionRecord rec{NutsCode(code), "Name " + code, "Country", {}};
  rec.counts.emplace(FieldLevel("AI"), FieldCounts{focal_docs, focal_cites});
  rec.counts.emplace(FieldLevel("COMPU"), FieldCounts{baseline_docs, baseline_cites});
  return rec;
}

AnalysisConfig config_for(const std::vector<RegionRecord>& records) {
  AnalysisConfig config;
  config.reference = compute_reference(records, {config.focal, config.baseline});
  return config;
}

}  // namespace

TEST_CASE("compute_rows matches a hand-built three-region dataset") {
  // X holds double the reference focal share: (20/100) vs (30/300).
  const std::vector<RegionRecord> records = {
      region("AA001", 20, 400, 100, 600),
      region("AA002", 5, 40, 100, 300),
      region("AA003", 5, 10, 100, 200),
  };
  const AnalysisConfig config = config_for(records);
  const auto rows = compute_rows(records, config);
  REQUIRE(rows.size() == 3);
  CHECK(rows[0].nuts.str() == "AA001");
  CHECK(rows[0].aindx.value() == Catch::Approx(2.0).epsilon(1e-14));
  CHECK(rows[0].rsi.value() == Catch::Approx(1.0 / 3.0).epsilon(1e-14));
  // X cites/paper = 20, reference mean = 450/30 = 15.
  CHECK(rows[0].rci.value() == Catch::Approx(20.0 / 15.0).epsilon(1e-12));
  CHECK(rows[0].quadrant == QuadrantProfile::SpecializedHighImpact);
}

TEST_CASE("zero focal output maps to the RSI floor with undefined impact") {
  const std::vector<RegionRecord> records = {
      region("AA001", 0, 0, 100, 600),
      region("AA002", 10, 100, 100, 300),
  };
  const auto rows = compute_rows(records, config_for(records));
  REQUIRE(rows.size() == 2);
  const IndicatorRow& zero = rows[1];
  CHECK(zero.nuts.str() == "AA001");
  CHECK(zero.rsi.value() == -1.0);
  CHECK_FALSE(zero.rci.defined());
  CHECK_FALSE(zero.quadrant.has_value());
}

TEST_CASE("regions lacking a level are skipped with a notice") {
  std::vector<RegionRecord> records = {region("AA001", 10, 50, 100, 200)};
  RegionRecord no_focal{NutsCode("AA002"), "No focal", "C", {}};
  no_focal.counts.emplace(FieldLevel("COMPU"), FieldCounts{100, 200});
  RegionRecord no_baseline{NutsCode("AA003"), "No baseline", "C", {}};
  no_baseline.counts.emplace(FieldLevel("AI"), FieldCounts{10, 50});
  RegionRecord zero_baseline{NutsCode("AA004"), "Zero baseline", "C", {}};
  zero_baseline.counts.emplace(FieldLevel("AI"), FieldCounts{0, 0});
  zero_baseline.counts.emplace(FieldLevel("COMPU"), FieldCounts{0, 0});
  records.push_back(no_focal);
  records.push_back(no_baseline);
  records.push_back(zero_baseline);

  std::vector<std::string> notices;
  const auto rows = compute_rows(records, config_for(records), &notices);
  REQUIRE(rows.size() == 1);
  REQUIRE(notices.size() == 3);
  CHECK(notices[0].find("AA002") != std::string::npos);
  CHECK(notices[1].find("AA003") != std::string::npos);
  CHECK(notices[2].find("AA004") != std::string::npos);
}

TEST_CASE("compute_rows orders by descending rsi with code tie-break") {
  const std::vector<RegionRecord> records = {
      region("AA004", 10, 10, 100, 100),
      region("AA001", 30, 30, 100, 100),
      region("AA003", 10, 10, 100, 100),
      region("AA002", 20, 20, 100, 100),
  };
  const auto rows = compute_rows(records, config_for(records));
  REQUIRE(rows.size() == 4);
  CHECK(rows[0].nuts.str() == "AA001");
  CHECK(rows[1].nuts.str() == "AA002");
  CHECK(rows[2].nuts.str() == "AA003");  // tie with AA004 resolved by code
  CHECK(rows[3].nuts.str() == "AA004");
}

TEST_CASE("compute_rows propagates a degenerate reference") {
  const std::vector<RegionRecord> records = {region("AA001", 10, 0, 100, 0)};
  AnalysisConfig config = config_for(records);
  REQUIRE_THROWS_MATCHES(compute_rows(records, config), Error,
                         HasErrc(errc::degenerate_reference));
}

TEST_CASE("compute_rows rejects identical focal and baseline") {
  const std::vector<RegionRecord> records = {region("AA001", 10, 10, 100, 100)};
  AnalysisConfig config = config_for(records);
  config.baseline = config.focal;
  REQUIRE_THROWS_AS(compute_rows(records, config), std::invalid_argument);
}

TEST_CASE("rank_rsi filters, sorts, and truncates") {
  std::vector<RegionRecord> records = {
      region("AA001", 50, 100, 400, 800),   // rsi high, eligible
      region("AA002", 10, 20, 150, 300),    // below baseline threshold
      region("AA003", 20, 40, 1000, 2000),  // eligible
      region("AA004", 1, 2, 5000, 9000),    // eligible, low rsi
  };
  AnalysisConfig config = config_for(records);
  config.min_baseline_docs = 200;
  const auto rows = compute_rows(records, config);

  const auto top = rank_rsi(rows, config, 20);
  REQUIRE(top.size() == 3);
  CHECK(top[0].nuts.str() == "AA001");
  CHECK(top[1].nuts.str() == "AA003");
  CHECK(top[2].nuts.str() == "AA004");

  const auto top1 = rank_rsi(rows, config, 1);
  REQUIRE(top1.size() == 1);
  CHECK(top1[0].nuts.str() == "AA001");

  // Prefix property: growing top_n only appends.
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto prefix = rank_rsi(rows, config, n);
    REQUIRE(prefix.size() == n);
    for (std::size_t i = 0; i < n; ++i) CHECK(prefix[i].nuts == top[i].nuts);
  }

  AnalysisConfig open = config;
  open.min_baseline_docs = 0;
  CHECK(rank_rsi(rows, open, 20).size() == 4);

  AnalysisConfig strict = config;
  strict.min_baseline_docs = 100000;
  CHECK(rank_rsi(rows, strict, 20).empty());

  REQUIRE_THROWS_AS(rank_rsi(rows, config, 0), std::invalid_argument);
}

TEST_CASE("filtering and ranking commute") {
  std::mt19937 rng(31);
  std::vector<RegionRecord> records;
  for (int i = 0; i < 30; ++i) {
    char code[6] = {};
    std::snprintf(code, sizeof code, "CC%03d", i);
    const std::uint64_t baseline = 50 + rng() % 1000;
    const std::uint64_t focal = rng() % (baseline + 1);
    records.push_back(region(code, focal, focal * (rng() % 10), baseline, baseline * 3));
  }
  AnalysisConfig config = config_for(records);
  config.min_baseline_docs = 300;
  const auto rows = compute_rows(records, config);

  auto filtered_first = rows;
  std::erase_if(filtered_first,
                [&](const IndicatorRow& r) { return r.baseline_docs < config.min_baseline_docs; });
  const auto route_a = rank_rsi(filtered_first, config, 10);
  const auto route_b = rank_rsi(rows, config, 10);
  REQUIRE(route_a.size() == route_b.size());
  for (std::size_t i = 0; i < route_a.size(); ++i) CHECK(route_a[i].nuts == route_b[i].nuts);
}

TEST_CASE("quadrant_report buckets and excludes consistently") {
  std::vector<RegionRecord> records = {
      region("AA001", 200, 4000, 400, 5000),  // specialized high impact
      region("AA002", 150, 100, 3000, 4000),  // unspecialized low impact
      region("AA003", 20, 400, 100, 500),     // below focal threshold
      region("AA004", 0, 0, 500, 1000),       // rci undefined
      region("AA005", 120, 2500, 2500, 9000), // unspecialized high impact
  };
  AnalysisConfig config = config_for(records);
  config.min_focal_docs = 100;
  const auto rows = compute_rows(records, config);
  const auto buckets = quadrant_report(rows, config);

  REQUIRE(buckets.size() == 5);
  std::size_t included = 0;
  for (const auto& [profile, members] : buckets) {
    included += members.size();
    for (const IndicatorRow& row : members) {
      REQUIRE(row.focal_docs >= config.min_focal_docs);
      REQUIRE(row.rci.defined());
      CHECK(classify_quadrant(row.rsi, row.rci) == profile);
    }
  }
  std::size_t excluded = 0;
  for (const IndicatorRow& row : rows)
    if (row.focal_docs < config.min_focal_docs || !row.rci.defined()) ++excluded;
  CHECK(included + excluded == rows.size());
  CHECK(included == 3);

  CHECK(buckets.at(QuadrantProfile::SpecializedHighImpact).size() == 1);
  CHECK(buckets.at(QuadrantProfile::SpecializedHighImpact)[0].nuts.str() == "AA001");
  CHECK(buckets.at(QuadrantProfile::UnspecializedHighImpact).size() == 1);
  CHECK(buckets.at(QuadrantProfile::UnspecializedLowImpact).size() == 1);

  const auto empty = quadrant_report({}, config);
  REQUIRE(empty.size() == 5);
  for (const auto& [profile, members] : empty) CHECK(members.empty());
}

TEST_CASE("indicator rows serialize to the documented CSV schema") {
  const std::vector<RegionRecord> records = {
      region("AA001", 20, 400, 100, 600),
      region("AA002", 0, 0, 200, 300),
  };
  const auto rows = compute_rows(records, config_for(records));
  const std::string csv = rows_to_csv(rows);

  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "nuts_code,region_name,country,focal_docs,focal_cites,aindx,rsi,rci,quadrant");
  REQUIRE(std::getline(lines, line));
  CHECK(line.starts_with("AA001,Name AA001,Country,20,400,"));
  REQUIRE(std::getline(lines, line));
  // Undefined rci and absent quadrant serialize as empty fields.
  CHECK(line.ends_with(",,"));
  CHECK_FALSE(std::getline(lines, line));

  // Full precision: the rsi column parses back to the exact double.
  const std::string row1 = rows_to_csv({rows[0]});
  const std::size_t header_end = row1.find('\n');
  std::istringstream in(row1.substr(header_end + 1));
  std::vector<std::string> fields;
  std::string field;
  while (std::getline(in, field, ',')) fields.push_back(field);
  CHECK(std::stod(fields[6]) == rows[0].rsi.value());
}

TEST_CASE("indicator rows serialize to JSON with display variants") {
  const std::vector<RegionRecord> records = {
      region("AA001", 20, 400, 100, 600),
      region("AA002", 0, 0, 200, 300),
      region("AA003", 10, 50, 100, 300),
  };
  const auto rows = compute_rows(records, config_for(records));
  const nlohmann::ordered_json arr = rows_to_json(rows);
  REQUIRE(arr.size() == 3);

  const auto& first = arr[0];
  CHECK(first["nuts_code"] == "AA001");
  CHECK(first["rsi"].get<double>() == rows[0].rsi.value());
  CHECK(first["rsi_display"] == "0.455");
  CHECK(first["rci_display"] == "1.33");
  CHECK(first["quadrant"] == "SpecializedHighImpact");

  const auto& last = arr[2];
  CHECK(last["nuts_code"] == "AA002");
  CHECK(last["rci"].is_null());
  CHECK(last["quadrant"].is_null());
  CHECK(last["rci_display"].is_null());
  CHECK(last["rsi_display"] == "-1.000");

  CHECK(rows_to_json(rows).dump(2) == arr.dump(2));
}

TEST_CASE("display rounding never emits negative zero") {
  CHECK(fmt_fixed(-0.0001, 3) == "0.000");
  CHECK(fmt_fixed(-0.0051, 2) == "-0.01");
  CHECK(fmt_fixed(0.0, 3) == "0.000");
}
