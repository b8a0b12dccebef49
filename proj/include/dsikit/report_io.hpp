#pragma once

#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dsikit/dataset.hpp"
#include "dsikit/evaluation.hpp"

namespace dsikit {

/// One dataset's scores: a row per index, a column per clustering method.
struct ScoreMatrix {
  std::vector<std::string> method_names;
  std::vector<ScoreRow> rows;

  [[nodiscard]] const ScoreRow* find(std::string_view index_name) const {
    for (const auto& r : rows)
      if (r.index.name == index_name) return &r;
    return nullptr;
  }

  friend bool operator==(const ScoreMatrix&, const ScoreMatrix&) = default;
};

namespace detail {

inline IndexDescriptor descriptor_for(std::string_view name, Direction direction) {
  if (auto known = find_index(name); known && known->name == name) {
    known->direction = direction;
    return *known;
  }
  return IndexDescriptor{std::string(name), direction,
                         name == "ARI" ? IndexKind::external : IndexKind::internal, false};
}

inline double parse_score(std::string_view cell, std::size_t line_no) {
  double v = 0.0;
  if (cell == "inf" || cell == "+inf") return std::numeric_limits<double>::infinity();
  if (cell == "-inf") return -std::numeric_limits<double>::infinity();
  if (!parse_double(cell, v)) {
    throw InputError("score matrix line " + std::to_string(line_no) + ": bad score '" + std::string(cell) + "'");
  }
  return v;
}

inline std::string format_score(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return format_double(v);
}

}  // namespace detail

/// Score-matrix CSV: a header `index,direction,<method>...`, then one row per
/// index: name, `max` or `min`, and one score per method (`inf`/`-inf` allowed).
inline ScoreMatrix parse_score_matrix(std::istream& in) {
  ScoreMatrix m;
  std::string line;
  std::size_t line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split(line, ',');
    if (header) {
      if (cells.size() < 4) throw InputError("score matrix header needs at least 2 method columns");
      for (std::size_t i = 2; i < cells.size(); ++i) m.method_names.emplace_back(cells[i]);
      header = false;
      continue;
    }
    if (cells.size() != m.method_names.size() + 2) {
      throw InputError("score matrix line " + std::to_string(line_no) + ": expected " +
                       std::to_string(m.method_names.size() + 2) + " fields, found " +
                       std::to_string(cells.size()) + " (non-rectangular matrix)");
    }
    Direction dir;
    if (cells[1] == "max" || cells[1] == "+") {
      dir = Direction::max_optimal;
    } else if (cells[1] == "min" || cells[1] == "-") {
      dir = Direction::min_optimal;
    } else {
      throw InputError("score matrix line " + std::to_string(line_no) + ": direction must be max or min");
    }
    ScoreRow row{detail::descriptor_for(cells[0], dir), {}, m.method_names};
    for (std::size_t i = 2; i < cells.size(); ++i) row.scores.push_back(detail::parse_score(cells[i], line_no));
    m.rows.push_back(std::move(row));
  }
  if (header) throw InputError("empty score matrix");
  return m;
}

inline ScoreMatrix load_score_matrix(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open score matrix '" + path.string() + "'");
  return parse_score_matrix(in);
}

inline void write_score_matrix(std::ostream& out, const ScoreMatrix& m) {
  out << "index,direction";
  for (const auto& name : m.method_names) out << ',' << name;
  out << '\n';
  for (const auto& row : m.rows) {
    out << row.index.name << ',' << direction_name(row.index.direction);
    for (double s : row.scores) out << ',' << detail::format_score(s);
    out << '\n';
  }
}

// ---------------------------------------------------------------------------
// Evaluation reports

inline constexpr std::string_view kFooterLabel = "Total (rank)";

/// CSV report: a `# plan=` line, a header of index names, one row per dataset,
/// the footer row with "total (rank)" cells, then `skipped,<dataset>,<reason>` lines.
inline void write_report_csv(std::ostream& out, const EvaluationReport& r) {
  out << "# plan=" << plan_name(r.plan) << '\n';
  out << "dataset";
  for (const auto& name : r.indices) out << ',' << name;
  out << '\n';
  for (const auto& row : r.rows) {
    out << row.dataset;
    for (int v : row.outcomes) out << ',' << v;
    out << '\n';
  }
  out << kFooterLabel;
  for (std::size_t j = 0; j < r.totals.size(); ++j) out << ',' << r.totals[j] << " (" << r.final_ranks[j] << ')';
  out << '\n';
  for (const auto& s : r.skipped) out << "skipped," << s.dataset << ',' << s.reason << '\n';
}

inline EvaluationReport parse_report_csv(std::istream& in) {
  EvaluationReport r;
  std::string line;
  bool have_header = false;
  bool have_footer = false;
  auto fail = [](const std::string& what) { throw InputError("report CSV: " + what); };
  auto to_long = [&](std::string_view s) {
    long v = 0;
    auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc{} || p != s.data() + s.size()) fail("bad integer '" + std::string(s) + "'");
    return v;
  };

  while (std::getline(in, line)) {
    if (detail::trim(line).empty()) continue;
    if (line.rfind("# plan=", 0) == 0) {
      r.plan = parse_plan(detail::trim(std::string_view(line).substr(7)));
      continue;
    }
    if (line.rfind("skipped,", 0) == 0) {
      const auto rest = std::string_view(line).substr(8);
      const auto comma = rest.find(',');
      r.skipped.push_back({std::string(rest.substr(0, comma)),
                           comma == std::string_view::npos ? std::string() : std::string(rest.substr(comma + 1))});
      continue;
    }
    const auto cells = detail::split(line, ',');
    if (!have_header) {
      for (std::size_t i = 1; i < cells.size(); ++i) r.indices.emplace_back(cells[i]);
      have_header = true;
      continue;
    }
    if (cells.size() != r.indices.size() + 1) fail("row width mismatch");
    if (cells[0] == kFooterLabel) {
      for (std::size_t i = 1; i < cells.size(); ++i) {
        const auto open = cells[i].find(" (");
        if (open == std::string_view::npos || cells[i].back() != ')') fail("bad footer cell");
        r.totals.push_back(to_long(cells[i].substr(0, open)));
        r.final_ranks.push_back(static_cast<int>(to_long(cells[i].substr(open + 2, cells[i].size() - open - 3))));
      }
      have_footer = true;
      continue;
    }
    ReportRow row{std::string(cells[0]), {}};
    for (std::size_t i = 1; i < cells.size(); ++i) row.outcomes.push_back(static_cast<int>(to_long(cells[i])));
    r.rows.push_back(std::move(row));
  }
  if (!have_header || !have_footer) fail("missing header or footer");
  return r;
}

inline nlohmann::json report_to_json(const EvaluationReport& r) {
  nlohmann::json j;
  j["plan"] = plan_name(r.plan);
  j["indices"] = r.indices;
  j["rows"] = nlohmann::json::array();
  for (const auto& row : r.rows) j["rows"].push_back({{"dataset", row.dataset}, {"outcomes", row.outcomes}});
  j["totals"] = r.totals;
  j["final_ranks"] = r.final_ranks;
  j["skipped"] = nlohmann::json::array();
  for (const auto& s : r.skipped) j["skipped"].push_back({{"dataset", s.dataset}, {"reason", s.reason}});

  auto& p = j["provenance"];
  p["version"] = r.provenance.version;
  p["methods"] = r.provenance.methods;
  p["seed"] = r.provenance.seed ? nlohmann::json(*r.provenance.seed) : nlohmann::json(nullptr);
  p["inputs"] = nlohmann::json::array();
  for (const auto& [path, hash] : r.provenance.inputs) p["inputs"].push_back({{"path", path}, {"fnv1a64", hash}});
  return j;
}

inline EvaluationReport report_from_json(const nlohmann::json& j) {
  try {
    EvaluationReport r;
    r.plan = parse_plan(j.at("plan").get<std::string>());
    r.indices = j.at("indices").get<std::vector<std::string>>();
    for (const auto& row : j.at("rows"))
      r.rows.push_back({row.at("dataset").get<std::string>(), row.at("outcomes").get<std::vector<int>>()});
    r.totals = j.at("totals").get<std::vector<long>>();
    r.final_ranks = j.at("final_ranks").get<std::vector<int>>();
    for (const auto& s : j.at("skipped"))
      r.skipped.push_back({s.at("dataset").get<std::string>(), s.at("reason").get<std::string>()});
    if (j.contains("provenance")) {
      const auto& p = j.at("provenance");
      r.provenance.version = p.value("version", "");
      r.provenance.methods = p.value("methods", std::vector<std::string>{});
      if (p.contains("seed") && !p.at("seed").is_null()) r.provenance.seed = p.at("seed").get<std::uint64_t>();
      if (p.contains("inputs"))
        for (const auto& in : p.at("inputs"))
          r.provenance.inputs.emplace_back(in.at("path").get<std::string>(), in.at("fnv1a64").get<std::string>());
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("report JSON: ") + e.what());
  }
}

}  // namespace dsikit
