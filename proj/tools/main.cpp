// geospec: regional specialization and citation-impact indicators from
// region x field publication counts, with ranked tables, quadrant reports,
// and SVG figures.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "geospec/analysis.hpp"
#include "geospec/dataset.hpp"
#include "geospec/geometry.hpp"
#include "geospec/json_io.hpp"
#include "geospec/render.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

// Input/flag problems exit with status 2; anything else is internal (1).
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct RunConfig {
  std::string input;
  std::optional<std::string> reference;
  std::string focal = "AI";
  std::string baseline = "COMPU";
  std::uint64_t min_baseline_docs = 200;
  std::uint64_t min_focal_docs = 100;
  std::string out_dir = "out";
  std::uint64_t top = 20;
  std::optional<std::string> geojson;
  std::string nuts_property = "NUTS_ID";
  std::optional<std::string> config_file;
};

// Raw flag storage plus the CLI11 option handles needed to tell "set on the
// command line" from "left at default".
struct Flags {
  std::string input, reference, focal, baseline, out_dir, config, geojson, nuts_property;
  std::uint64_t min_baseline_docs = 0, min_focal_docs = 0, top = 0;
  CLI::Option *input_o = nullptr, *reference_o = nullptr, *focal_o = nullptr,
              *baseline_o = nullptr, *out_dir_o = nullptr, *config_o = nullptr,
              *geojson_o = nullptr, *nuts_property_o = nullptr, *min_baseline_o = nullptr,
              *min_focal_o = nullptr, *top_o = nullptr;

  void attach_common(CLI::App* cmd) {
    input_o = cmd->add_option("--input", input, "dataset CSV (long format)");
    reference_o = cmd->add_option("--reference", reference,
                                  "reference totals CSV overriding dataset-derived totals");
    focal_o = cmd->add_option("--focal", focal, "focal field level (default AI)");
    baseline_o = cmd->add_option("--baseline", baseline, "baseline field level (default COMPU)");
    min_baseline_o = cmd->add_option("--min-baseline-docs", min_baseline_docs,
                                     "minimum baseline documents for ranking (default 200)");
    min_focal_o = cmd->add_option("--min-focal-docs", min_focal_docs,
                                  "minimum focal documents for quadrant reports (default 100)");
    out_dir_o = cmd->add_option("--out-dir", out_dir, "output directory (default out)");
    config_o = cmd->add_option("--config", config,
                               "key = value config file merged under the flags");
  }
};

std::uint64_t parse_uint(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long long v = std::stoull(text, &used);
    if (used != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw UsageError(what + " must be a non-negative integer, got '" + text + "'");
  }
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot open config file " + path);
  std::map<std::string, std::string> entries;
  std::string line;
  std::size_t lineno = 0;
  auto trim = [](std::string s) {
    const auto first = s.find_first_not_of(" \t\r");
    const auto last = s.find_last_not_of(" \t\r");
    return first == std::string::npos ? std::string() : s.substr(first, last - first + 1);
  };
  while (std::getline(in, line)) {
    ++lineno;
    const std::string stripped = trim(line);
    if (stripped.empty() || stripped[0] == '#') continue;
    const auto eq = stripped.find('=');
    if (eq == std::string::npos)
      throw UsageError(path + ": line " + std::to_string(lineno) +
                       ": expected 'key = value'");
    entries[trim(stripped.substr(0, eq))] = trim(stripped.substr(eq + 1));
  }
  return entries;
}

void apply_config_entries(const std::map<std::string, std::string>& entries,
                          const std::string& path, RunConfig& config) {
  for (const auto& [key, value] : entries) {
    if (key == "input") config.input = value;
    else if (key == "reference") config.reference = value;
    else if (key == "focal") config.focal = value;
    else if (key == "baseline") config.baseline = value;
    else if (key == "min-baseline-docs") config.min_baseline_docs = parse_uint(value, key);
    else if (key == "min-focal-docs") config.min_focal_docs = parse_uint(value, key);
    else if (key == "out-dir") config.out_dir = value;
    else if (key == "top") config.top = parse_uint(value, key);
    else if (key == "geojson") config.geojson = value;
    else if (key == "nuts-property") config.nuts_property = value;
    else throw UsageError(path + ": unknown config key '" + key + "'");
  }
}

RunConfig resolve_config(const Flags& flags) {
  RunConfig config;

  std::optional<std::string> config_path;
  if (flags.config_o->count()) {
    config_path = flags.config;
  } else if (const char* env = std::getenv("GEOSPEC_CONFIG"); env && *env) {
    config_path = env;
  }
  if (config_path) {
    apply_config_entries(read_config_file(*config_path), *config_path, config);
    config.config_file = *config_path;
  }

  if (flags.input_o->count()) config.input = flags.input;
  if (flags.reference_o->count()) config.reference = flags.reference;
  if (flags.focal_o->count()) config.focal = flags.focal;
  if (flags.baseline_o->count()) config.baseline = flags.baseline;
  if (flags.min_baseline_o->count()) config.min_baseline_docs = flags.min_baseline_docs;
  if (flags.min_focal_o->count()) config.min_focal_docs = flags.min_focal_docs;
  if (flags.out_dir_o->count()) config.out_dir = flags.out_dir;
  if (flags.top_o && flags.top_o->count()) config.top = flags.top;
  if (flags.geojson_o && flags.geojson_o->count()) config.geojson = flags.geojson;
  if (flags.nuts_property_o && flags.nuts_property_o->count())
    config.nuts_property = flags.nuts_property;

  if (config.input.empty()) throw UsageError("--input is required");
  if (!fs::exists(config.input)) throw UsageError("input file not found: " + config.input);
  if (config.reference && !fs::exists(*config.reference))
    throw UsageError("reference file not found: " + *config.reference);
  if (config.geojson && !fs::exists(*config.geojson))
    throw UsageError("geojson file not found: " + *config.geojson);
  if (config.focal == config.baseline)
    throw UsageError("focal and baseline levels must differ (both are '" + config.focal + "')");
  if (config.top == 0) throw UsageError("--top must be at least 1");
  std::error_code ec;
  fs::create_directories(config.out_dir, ec);
  if (ec) throw UsageError("cannot create output directory " + config.out_dir);
  return config;
}

// Everything the subcommands share: parsed records, reference totals, and
// the computed indicator rows.
struct Session {
  RunConfig config;
  std::vector<geospec::RegionRecord> records;
  geospec::AnalysisConfig analysis;
  std::vector<geospec::IndicatorRow> rows;
  std::vector<std::string> notices;
};

Session open_session(const RunConfig& config) {
  Session session{config, {}, {}, {}, {}};

  std::ifstream in(config.input, std::ios::binary);
  if (!in) throw UsageError("cannot open input file " + config.input);
  try {
    session.records = geospec::parse_dataset(in);
  } catch (const geospec::Error& e) {
    throw UsageError(config.input + ": " + e.what());
  }

  session.analysis.focal = geospec::FieldLevel(config.focal);
  session.analysis.baseline = geospec::FieldLevel(config.baseline);
  session.analysis.min_baseline_docs = config.min_baseline_docs;
  session.analysis.min_focal_docs = config.min_focal_docs;

  try {
    if (config.reference) {
      std::ifstream ref(*config.reference, std::ios::binary);
      if (!ref) throw UsageError("cannot open reference file " + *config.reference);
      session.analysis.reference = geospec::load_reference(ref);
    } else {
      session.analysis.reference = geospec::compute_reference(
          session.records, {session.analysis.focal, session.analysis.baseline});
    }
    session.analysis.reference.at(session.analysis.focal);
    session.analysis.reference.at(session.analysis.baseline);
  } catch (const geospec::Error& e) {
    throw UsageError((config.reference ? *config.reference : config.input) + ": " + e.what());
  }

  try {
    session.rows = geospec::compute_rows(session.records, session.analysis, &session.notices);
  } catch (const geospec::Error& e) {
    throw UsageError(config.input + ": " + e.what());
  }
  for (const std::string& notice : session.notices) std::cerr << "notice: " << notice << "\n";
  return session;
}

void write_text(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw std::runtime_error("failed while writing " + path.string());
}

ordered_json run_metadata(const Session& session, const std::string& command,
                          const std::vector<std::string>& outputs) {
  const RunConfig& c = session.config;
  ordered_json j;
  j["command"] = command;
  ordered_json cfg;
  cfg["input"] = c.input;
  cfg["reference"] = c.reference ? ordered_json(*c.reference) : ordered_json(nullptr);
  cfg["focal"] = c.focal;
  cfg["baseline"] = c.baseline;
  cfg["min_baseline_docs"] = c.min_baseline_docs;
  cfg["min_focal_docs"] = c.min_focal_docs;
  cfg["top"] = c.top;
  cfg["out_dir"] = c.out_dir;
  cfg["geojson"] = c.geojson ? ordered_json(*c.geojson) : ordered_json(nullptr);
  cfg["nuts_property"] = c.nuts_property;
  cfg["config_file"] = c.config_file ? ordered_json(*c.config_file) : ordered_json(nullptr);
  j["config"] = cfg;

  ordered_json level_counts = ordered_json::object();
  std::map<std::string, std::size_t> counts;
  for (const auto& rec : session.records)
    for (const auto& [level, fc] : rec.counts) ++counts[level.id()];
  for (const auto& [id, n] : counts) level_counts[id] = n;
  j["dataset"] = {{"regions", session.records.size()}, {"levels", level_counts}};

  ordered_json ref;
  ref["provenance"] = geospec::to_string(session.analysis.reference.provenance);
  for (const auto& [level, fc] : session.analysis.reference.counts)
    ref[level.id()] = {{"docs", fc.docs}, {"cites", fc.cites}};
  j["reference"] = ref;

  j["analysis"] = {{"rows", session.rows.size()}, {"notices", session.notices}};
  j["outputs"] = outputs;
  return j;
}

void finish_run(const Session& session, const std::string& command,
                const std::vector<std::string>& outputs) {
  const fs::path dir(session.config.out_dir);
  write_text(dir / "run.json", run_metadata(session, command, outputs).dump(2) + "\n");
}

int cmd_compute(const Session& session) {
  const fs::path dir(session.config.out_dir);
  write_text(dir / "indicators.csv", geospec::rows_to_csv(session.rows));
  write_text(dir / "indicators.json", geospec::rows_to_json(session.rows).dump(2) + "\n");
  finish_run(session, "compute", {"indicators.csv", "indicators.json"});
  return 0;
}

int cmd_rank(const Session& session) {
  const auto ranked =
      geospec::rank_rsi(session.rows, session.analysis, session.config.top);
  const fs::path dir(session.config.out_dir);
  write_text(dir / "rank.csv", geospec::rows_to_csv(ranked));
  write_text(dir / "rank.json", geospec::rows_to_json(ranked).dump(2) + "\n");
  finish_run(session, "rank", {"rank.csv", "rank.json"});
  return 0;
}

std::string correlation_note(const std::vector<geospec::IndicatorRow>& rows,
                             std::uint64_t min_focal_docs) {
  double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
  std::size_t n = 0;
  for (const auto& row : rows) {
    if (!row.rci.defined() || row.focal_docs < min_focal_docs) continue;
    const double x = row.rsi.value();
    const double y = row.rci.value();
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
    ++n;
  }
  if (n < 2) return "not computable on fewer than two regions";
  const double num = static_cast<double>(n) * sxy - sx * sy;
  const double den = std::sqrt(static_cast<double>(n) * sxx - sx * sx) *
                     std::sqrt(static_cast<double>(n) * syy - sy * sy);
  if (den == 0.0) return "not computable (degenerate variance)";
  std::ostringstream out;
  out << "Pearson r = " << geospec::fmt_fixed(num / den, 3) << " over " << n << " regions";
  return out.str();
}

std::string classify_report(const Session& session,
                            const std::map<geospec::QuadrantProfile,
                                           std::vector<geospec::IndicatorRow>>& buckets) {
  using geospec::QuadrantProfile;
  std::ostringstream md;
  md << "# Specialization and impact profile report\n\n";
  md << "Focal level `" << session.config.focal << "` against baseline `"
     << session.config.baseline << "`; " << session.records.size()
     << " regions in the dataset, " << session.rows.size()
     << " with computable indicators, quadrant filter at >= "
     << session.config.min_focal_docs << " focal documents.\n\n";

  md << "## Quadrant membership\n\n";
  md << "| profile | condition | regions |\n|---|---|---|\n";
  const std::pair<QuadrantProfile, const char*> conditions[] = {
      {QuadrantProfile::SpecializedHighImpact, "RSI > 0, RCI > 1"},
      {QuadrantProfile::SpecializedLowImpact, "RSI > 0, RCI < 1"},
      {QuadrantProfile::UnspecializedHighImpact, "RSI < 0, RCI > 1"},
      {QuadrantProfile::UnspecializedLowImpact, "RSI < 0, RCI < 1"},
      {QuadrantProfile::Boundary, "RSI = 0 or RCI = 1"},
  };
  for (const auto& [profile, condition] : conditions)
    md << "| " << geospec::to_string(profile) << " | " << condition << " | "
       << buckets.at(profile).size() << " |\n";
  md << "\n";

  for (const auto& [profile, condition] : conditions) {
    const auto& members = buckets.at(profile);
    if (members.empty()) continue;
    md << "### " << geospec::to_string(profile) << " (" << condition << ")\n\n";
    const std::size_t shown = std::min<std::size_t>(members.size(), 10);
    for (std::size_t i = 0; i < shown; ++i) {
      const auto& row = members[i];
      md << "- " << row.name << " (" << row.nuts.str() << ", " << row.country
         << "): RSI " << geospec::fmt_fixed(row.rsi.value(), 3) << ", RCI "
         << geospec::fmt_fixed(row.rci.value(), 2) << "\n";
    }
    if (members.size() > shown)
      md << "- ... and " << members.size() - shown << " more\n";
    md << "\n";
  }

  md << "## Observations\n\n";
  md << "- Specialization vs impact correlation: "
     << correlation_note(session.rows, session.config.min_focal_docs) << ".\n";

  const auto ranked = geospec::rank_rsi(session.rows, session.analysis,
                                        session.config.top);
  if (!ranked.empty()) {
    std::map<std::string, std::size_t> by_country;
    for (const auto& row : ranked) ++by_country[row.country];
    md << "- Top-" << ranked.size() << " RSI table country mix:";
    bool first = true;
    for (const auto& [country, n] : by_country) {
      md << (first ? " " : ", ") << country << " (" << n << ")";
      first = false;
    }
    md << ".\n";
  }

  const geospec::IndicatorRow* top_impact = nullptr;
  for (const auto& row : session.rows) {
    if (!row.rci.defined() || row.focal_docs < session.config.min_focal_docs) continue;
    if (!top_impact || row.rci.value() > top_impact->rci.value()) top_impact = &row;
  }
  if (top_impact)
    md << "- Highest relative citation impact: " << top_impact->name << " ("
       << top_impact->nuts.str() << "), RCI "
       << geospec::fmt_fixed(top_impact->rci.value(), 2) << " at RSI "
       << geospec::fmt_fixed(top_impact->rsi.value(), 3) << ".\n";
  return md.str();
}

int cmd_classify(const Session& session) {
  const auto buckets = geospec::quadrant_report(session.rows, session.analysis);
  const fs::path dir(session.config.out_dir);

  std::vector<geospec::IndicatorRow> flattened;
  for (const auto& [profile, members] : buckets)
    flattened.insert(flattened.end(), members.begin(), members.end());
  write_text(dir / "quadrants.csv", geospec::rows_to_csv(flattened));
  write_text(dir / "quadrants.json", geospec::report_to_json(buckets).dump(2) + "\n");
  write_text(dir / "report.md", classify_report(session, buckets));
  finish_run(session, "classify", {"quadrants.csv", "quadrants.json", "report.md"});
  return 0;
}

int cmd_plot(const Session& session, const std::string& figure) {
  const fs::path dir(session.config.out_dir);
  std::string name;
  std::string svg;
  if (figure == "fig1") {
    geospec::ScatterSpec spec;
    spec.x_axis = geospec::AxisField::Docs;
    spec.y_axis = geospec::AxisField::Cites;
    spec.bubble_encoding = geospec::AxisField::Rsi;
    spec.label_top_k = 5;
    svg = geospec::render_scatter(session.rows, spec);
    name = "fig1.svg";
  } else if (figure == "fig3") {
    geospec::ScatterSpec spec;
    spec.x_axis = geospec::AxisField::Rsi;
    spec.y_axis = geospec::AxisField::Rci;
    spec.reference_lines = {{geospec::ReferenceLine::Dim::X, 0.0},
                            {geospec::ReferenceLine::Dim::Y, 1.0}};
    spec.label_top_k = 5;
    std::vector<geospec::IndicatorRow> filtered;
    for (const auto& row : session.rows)
      if (row.focal_docs >= session.config.min_focal_docs) filtered.push_back(row);
    svg = geospec::render_scatter(filtered, spec);
    name = "fig3.svg";
  } else {  // map
    if (!session.config.geojson)
      throw UsageError("plot map requires --geojson with NUTS-3 geometries");
    geospec::ChoroplethSpec spec;
    try {
      std::ifstream in(*session.config.geojson, std::ios::binary);
      std::ostringstream buf;
      buf << in.rdbuf();
      spec.geometry = geospec::parse_geojson(buf.str(), session.config.nuts_property);
    } catch (const geospec::Error& e) {
      throw UsageError(*session.config.geojson + ": " + e.what());
    }
    svg = geospec::render_choropleth(session.rows, spec);
    name = "map.svg";
  }
  write_text(dir / name, svg);
  finish_run(session, "plot " + figure, {name});
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"regional specialization (RSI) and citation impact (RCI) analytics"};
  app.require_subcommand(1);

  Flags compute_flags, rank_flags, classify_flags, plot_flags;

  CLI::App* compute = app.add_subcommand("compute", "write the full indicator table");
  compute_flags.attach_common(compute);

  CLI::App* rank = app.add_subcommand("rank", "write the top-N regions by RSI");
  rank_flags.attach_common(rank);
  rank_flags.top_o = rank->add_option("--top", rank_flags.top, "table length (default 20)");

  CLI::App* classify = app.add_subcommand("classify", "write the quadrant report");
  classify_flags.attach_common(classify);

  CLI::App* plot = app.add_subcommand("plot", "render an SVG figure");
  std::string figure;
  plot->add_option("figure", figure, "fig1 (output vs cites), fig3 (RSI vs RCI), or map")
      ->required()
      ->check(CLI::IsMember({"fig1", "fig3", "map"}));
  plot_flags.attach_common(plot);
  plot_flags.geojson_o =
      plot->add_option("--geojson", plot_flags.geojson, "NUTS-3 geometry (map only)");
  plot_flags.nuts_property_o = plot->add_option(
      "--nuts-property", plot_flags.nuts_property,
      "feature property holding the NUTS code (default NUTS_ID)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (compute->parsed()) return cmd_compute(open_session(resolve_config(compute_flags)));
    if (rank->parsed()) return cmd_rank(open_session(resolve_config(rank_flags)));
    if (classify->parsed()) return cmd_classify(open_session(resolve_config(classify_flags)));
    if (plot->parsed()) {
      RunConfig config = resolve_config(plot_flags);
      if (figure == "map" && !config.geojson)
        throw UsageError("plot map requires --geojson with NUTS-3 geometries");
      return cmd_plot(open_session(config), figure);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const geospec::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
