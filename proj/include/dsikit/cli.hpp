#pragma once

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dsikit/clustering.hpp"
#include "dsikit/dataset.hpp"
#include "dsikit/evaluation.hpp"
#include "dsikit/indices.hpp"
#include "dsikit/pairwise.hpp"
#include "dsikit/report_io.hpp"
#include "dsikit/separability.hpp"
#include "dsikit/version.hpp"

namespace dsikit::cli {

enum ExitCode : int { kOk = 0, kInputError = 2, kDomainError = 3 };

inline const std::vector<std::string>& default_indices() {
  static const std::vector<std::string> names = {"dsi", "dunn", "ch", "db", "silhouette", "wb", "i"};
  return names;
}

/// FNV-1a 64-bit digest of a file's bytes, as 16 hex digits.
inline std::string file_digest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "'");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  char buf[4096];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    for (std::streamsize i = 0; i < in.gcount(); ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 0x100000001b3ULL;
    }
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

namespace detail {

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  for (auto cell : dsikit::detail::split(s, ',')) {
    if (!cell.empty()) out.emplace_back(cell);
  }
  return out;
}

inline nlohmann::json json_number(double v) {
  if (std::isfinite(v)) return v;
  return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}

/// Resolves requested index names, rejecting unknown and non-native ones.
inline std::vector<IndexDescriptor> resolve_indices(const std::vector<std::string>& names) {
  std::vector<IndexDescriptor> out;
  for (const auto& name : names) {
    auto desc = find_index(name);
    if (!desc) throw DomainError("unknown index '" + name + "'");
    if (!desc->native) {
      throw DomainError(desc->name + ": index not implemented natively; supply via score-matrix file");
    }
    out.push_back(*desc);
  }
  return out;
}

struct MethodSpec {
  enum class Kind { kmeans, ward, external } kind = Kind::kmeans;
  std::string name;
  std::optional<std::size_t> k;
  std::optional<std::uint64_t> seed;
  std::filesystem::path dir;
};

/// `kmeans[:k=N][:seed=S]`, `ward[:k=N]` or `external:DIR` (labels read from
/// DIR/<dataset>.labels).
inline MethodSpec parse_method(const std::string& token) {
  MethodSpec m;
  m.name = token;
  if (token.rfind("external:", 0) == 0) {
    m.kind = MethodSpec::Kind::external;
    m.dir = token.substr(9);
    if (m.dir.empty()) throw InputError("external method needs a directory: external:DIR");
    m.name = std::filesystem::path(m.dir).lexically_normal().filename().string();
    if (m.name.empty()) m.name = m.dir.parent_path().filename().string();
    return m;
  }
  auto parts = dsikit::detail::split(token, ':');
  if (parts[0] == "kmeans") {
    m.kind = MethodSpec::Kind::kmeans;
  } else if (parts[0] == "ward") {
    m.kind = MethodSpec::Kind::ward;
  } else {
    throw InputError("unknown clustering method '" + token + "' (expected kmeans, ward or external:DIR)");
  }
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string_view::npos) throw InputError("bad method parameter '" + std::string(parts[i]) + "'");
    const auto key = parts[i].substr(0, eq);
    const std::string value(parts[i].substr(eq + 1));
    try {
      if (key == "k") {
        m.k = std::stoull(value);
      } else if (key == "seed" && m.kind == MethodSpec::Kind::kmeans) {
        m.seed = std::stoull(value);
      } else {
        throw InputError("unknown method parameter '" + std::string(key) + "'");
      }
    } catch (const std::logic_error&) {
      throw InputError("bad value in method parameter '" + std::string(parts[i]) + "'");
    }
  }
  return m;
}

inline std::vector<std::filesystem::path> list_datasets(const std::string& spec) {
  std::vector<std::filesystem::path> out;
  if (std::filesystem::is_directory(spec)) {
    for (const auto& entry : std::filesystem::directory_iterator(spec)) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") out.push_back(entry.path());
    }
    std::sort(out.begin(), out.end());
    if (out.empty()) throw InputError("no .csv datasets in '" + spec + "'");
    return out;
  }
  for (const auto& item : split_list(spec)) out.emplace_back(item);
  if (out.empty()) throw InputError("no datasets given");
  return out;
}

struct CommonData {
  bool header = false;
  std::string label_column = "last";
  char delimiter = ',';
  bool standardize = false;

  void add_to(CLI::App& cmd) {
    cmd.add_flag("--header", header, "Input CSV files have a header row");
    cmd.add_option("--label-column", label_column, "Label column: last, none or a 0-based index")
        ->capture_default_str();
    cmd.add_option("--delimiter", delimiter, "CSV field delimiter")->capture_default_str();
    cmd.add_flag("--standardize", standardize, "Z-score every feature column before clustering/scoring");
  }

  [[nodiscard]] CsvOptions csv() const { return {header, LabelColumn::parse(label_column), delimiter}; }

  [[nodiscard]] Dataset load(const std::filesystem::path& path) const {
    auto ds = load_csv(path, csv());
    if (standardize) ds.data = dsikit::standardize(ds.data);
    return ds;
  }
};

// ---------------------------------------------------------------------------

struct ScoreArgs {
  CommonData common;
  std::string data;
  std::string labels;
  bool labels_from_data = false;
  std::string indices;
  std::string format = "csv";
  std::size_t pair_budget = PairwiseOptions{}.pair_budget;
  std::uint64_t seed = 0;
};

inline int cmd_score(const ScoreArgs& a, std::ostream& out, std::ostream& err) {
  if (a.labels.empty() == !a.labels_from_data) {
    throw InputError("give exactly one of --labels FILE or --labels-from-data");
  }
  const auto descriptors =
      resolve_indices(a.indices.empty() ? default_indices() : split_list(a.indices));
  const Dataset ds = a.common.load(a.data);

  LabelVector labels;
  if (a.labels_from_data) {
    if (!ds.truth) throw InputError("--labels-from-data needs a label column in " + a.data);
    labels = *ds.truth;
  } else {
    labels = load_external_labels(a.labels, ds.data.rows());
  }

  const PairwiseOptions popt{a.pair_budget, a.seed};
  nlohmann::json scores = nlohmann::json::array();
  std::ostringstream csv;
  csv << "index,direction,value,degenerate\n";
  for (const auto& d : descriptors) {
    IndexScore s;
    nlohmann::json entry;
    if (d.kind == IndexKind::external) {
      if (a.labels_from_data || !ds.truth) {
        throw DomainError("ARI needs both --labels and ground-truth labels in the data file");
      }
      s = {adjusted_rand_index(*ds.truth, labels), false};
    } else if (d.name == "DSI") {
      const auto r = dsi(ds.data, labels, popt);
      s = {r.value, false};
      if (!r.skipped_classes.empty()) {
        err << "warning: DSI skipped singleton classes:";
        for (int c : r.skipped_classes) err << ' ' << c;
        err << '\n';
      }
      entry["skipped_classes"] = r.skipped_classes;
      entry["subsampled"] = r.subsampled;
    } else {
      s = compute_index(d.name, ds.data, labels, popt);
    }
    entry["index"] = d.name;
    entry["direction"] = direction_name(d.direction);
    entry["value"] = json_number(s.value);
    entry["degenerate"] = s.degenerate;
    scores.push_back(entry);
    csv << d.name << ',' << direction_name(d.direction) << ',' << dsikit::detail::format_score(s.value) << ','
        << (s.degenerate ? 1 : 0) << '\n';
  }

  if (a.format == "json") {
    nlohmann::json j;
    j["scores"] = scores;
    j["provenance"] = {{"version", kVersion},
                       {"seed", a.seed},
                       {"inputs", nlohmann::json::array()}};
    j["provenance"]["inputs"].push_back({{"path", a.data}, {"fnv1a64", file_digest(a.data)}});
    if (!a.labels.empty()) j["provenance"]["inputs"].push_back({{"path", a.labels}, {"fnv1a64", file_digest(a.labels)}});
    out << j.dump(2) << '\n';
  } else {
    out << csv.str();
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct EvaluateArgs {
  CommonData common;
  std::string datasets;
  std::string methods = "kmeans,ward";
  std::string indices;
  std::string plan = "rankdiff";
  std::string k = "truth";
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string format = "csv";
  std::size_t pair_budget = PairwiseOptions{}.pair_budget;
};

inline void emit_report(std::ostream& out, const EvaluationReport& report, const std::string& format) {
  if (format == "json") {
    out << report_to_json(report).dump(2) << '\n';
  } else {
    write_report_csv(out, report);
  }
}

inline int cmd_evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  const Plan plan = parse_plan(a.plan);
  const auto descriptors =
      resolve_indices(a.indices.empty() ? default_indices() : split_list(a.indices));
  std::vector<MethodSpec> methods;
  for (const auto& token : split_list(a.methods)) methods.push_back(parse_method(token));
  if (methods.size() < 2) throw InputError("evaluation needs at least 2 clustering methods");
  std::optional<std::size_t> fixed_k;
  if (a.k != "truth") {
    try {
      fixed_k = std::stoull(a.k);
    } catch (const std::logic_error&) {
      throw InputError("--k must be 'truth' or a positive integer");
    }
  }

  const auto paths = list_datasets(a.datasets);
  const PairwiseOptions popt{a.pair_budget, a.seed};
  std::vector<std::string> index_names;
  for (const auto& d : descriptors) index_names.push_back(d.name);
  std::vector<std::string> method_names;
  for (const auto& m : methods) method_names.push_back(m.name);

  if (!a.out_dir.empty()) std::filesystem::create_directories(a.out_dir);

  Provenance prov;
  prov.version = std::string(kVersion);
  prov.seed = a.seed;
  prov.methods = method_names;

  std::vector<ReportRow> rows;
  std::vector<SkippedDataset> skipped;
  for (const auto& path : paths) {
    prov.inputs.emplace_back(path.string(), file_digest(path));
    const Dataset ds = a.common.load(path);
    if (!ds.truth) {
      err << "warning: skipping " << ds.name << ": no ground-truth labels\n";
      skipped.push_back({ds.name, "no ground-truth labels"});
      continue;
    }

    std::vector<LabelVector> clusterings;
    std::string failure;
    for (const auto& m : methods) {
      const std::size_t k = m.k.value_or(fixed_k.value_or(ds.truth->class_count()));
      try {
        switch (m.kind) {
          case MethodSpec::Kind::kmeans:
            clusterings.push_back(kmeans(ds.data, k, m.seed.value_or(a.seed)));
            break;
          case MethodSpec::Kind::ward:
            clusterings.push_back(ward(ds.data, k));
            break;
          case MethodSpec::Kind::external: {
            const auto file = m.dir / (ds.name + ".labels");
            prov.inputs.emplace_back(file.string(), file_digest(file));
            clusterings.push_back(load_external_labels(file, ds.data.rows()));
            break;
          }
        }
      } catch (const std::exception& e) {
        failure = m.name + ": " + e.what();
        break;
      }
    }
    if (!failure.empty()) {
      err << "warning: skipping " << ds.name << ": " << failure << '\n';
      skipped.push_back({ds.name, failure});
      continue;
    }

    ScoreMatrix matrix{method_names, {}};
    ScoreRow ari{*find_index("ARI"), {}, method_names};
    for (const auto& labels : clusterings) ari.scores.push_back(adjusted_rand_index(*ds.truth, labels));
    matrix.rows.push_back(ari);

    ReportRow row{ds.name, {}};
    for (const auto& d : descriptors) {
      ScoreRow cvi{d, {}, method_names};
      for (const auto& labels : clusterings) {
        double v = std::numeric_limits<double>::infinity();
        try {
          v = compute_index(d.name, ds.data, labels, popt).value;
        } catch (const DomainError& e) {
          err << "warning: " << ds.name << ": " << d.name << " undefined (" << e.what() << ")\n";
        }
        cvi.scores.push_back(v);
      }
      row.outcomes.push_back(compare_row(cvi, ari, plan));
      matrix.rows.push_back(std::move(cvi));
    }
    rows.push_back(std::move(row));

    if (!a.out_dir.empty()) {
      std::ofstream f(std::filesystem::path(a.out_dir) / (ds.name + ".scores.csv"));
      write_score_matrix(f, matrix);
    }
  }

  if (rows.empty()) throw DomainError("no dataset could be evaluated (all skipped)");
  auto report = aggregate(index_names, std::move(rows), plan);
  report.skipped = std::move(skipped);
  report.provenance = std::move(prov);

  if (!a.out_dir.empty()) {
    std::ofstream csv(std::filesystem::path(a.out_dir) / "report.csv");
    write_report_csv(csv, report);
    std::ofstream json(std::filesystem::path(a.out_dir) / "report.json");
    json << report_to_json(report).dump(2) << '\n';
  }
  emit_report(out, report, a.format);
  return kOk;
}

// ---------------------------------------------------------------------------

struct CompareArgs {
  std::string scores;
  std::string truth_row = "ARI";
  std::string plan = "rankdiff";
  std::string format = "csv";
};

/// Compares every non-truth row of a score matrix with the truth row.
inline EvaluationReport compare_matrix(const ScoreMatrix& m, const std::string& dataset,
                                       const std::string& truth_row, Plan plan) {
  const ScoreRow* truth = m.find(truth_row);
  if (!truth) throw InputError("score matrix has no truth row '" + truth_row + "'");
  std::vector<std::string> names;
  ReportRow row{dataset, {}};
  for (const auto& r : m.rows) {
    if (&r == truth) continue;
    names.push_back(r.index.name);
    row.outcomes.push_back(compare_row(r, *truth, plan));
  }
  if (names.empty()) throw InputError("score matrix has no rows besides the truth row");
  return aggregate(std::move(names), {std::move(row)}, plan);
}

inline int cmd_compare(const CompareArgs& a, std::ostream& out) {
  const auto m = load_score_matrix(a.scores);
  auto report = compare_matrix(m, std::filesystem::path(a.scores).stem().string(), a.truth_row, parse_plan(a.plan));
  report.provenance.version = std::string(kVersion);
  report.provenance.inputs.emplace_back(a.scores, file_digest(a.scores));
  emit_report(out, report, a.format);
  return kOk;
}

// ---------------------------------------------------------------------------

struct SynthArgs {
  std::string shape;
  std::size_t n = 200;
  std::size_t k = 0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  std::string output;
};

inline int cmd_synth(const SynthArgs& a, std::ostream& out) {
  const auto ds = generate_synthetic(parse_shape(a.shape), a.n, a.k, a.noise, a.seed);
  if (a.output.empty()) {
    write_csv(out, ds);
  } else {
    std::ofstream f(a.output);
    if (!f) throw InputError("cannot write '" + a.output + "'");
    write_csv(f, ds);
  }
  return kOk;
}

// ---------------------------------------------------------------------------

struct DumpArgs {
  CommonData common;
  std::string data;
  std::string labels;
  int class_id = 0;
  std::string kind = "icd";
};

/// Prints one class's intra-class or complement between-class distances, one per line.
inline int cmd_dump(const DumpArgs& a, std::ostream& out) {
  const Dataset ds = a.common.load(a.data);
  LabelVector labels;
  if (!a.labels.empty()) {
    labels = load_external_labels(a.labels, ds.data.rows());
  } else if (ds.truth) {
    labels = *ds.truth;
  } else {
    throw InputError("no labels: pass --labels or a label column");
  }
  if (a.class_id < 0 || static_cast<std::size_t>(a.class_id) >= labels.class_count()) {
    throw DomainError("unknown class id " + std::to_string(a.class_id));
  }
  DistanceSample sample;
  if (a.kind == "icd") {
    const auto members = labels.members();
    auto icd = icd_set(ds.data, members[static_cast<std::size_t>(a.class_id)]);
    if (!icd) throw DomainError("class " + std::to_string(a.class_id) + " has fewer than 2 points");
    sample = std::move(*icd);
  } else if (a.kind == "bcd") {
    sample = class_complement_bcd(ds.data, labels, a.class_id);
  } else {
    throw InputError("--kind must be icd or bcd");
  }
  for (double v : sample.values) out << dsikit::detail::format_double(v) << '\n';
  return kOk;
}

}  // namespace detail

/// Runs the command line `args` (without the program name). Returns the
/// process exit code: 0 success, 2 input/usage errors, 3 domain errors.
inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cluster validity toolkit: DSI, baseline indices and CVI evaluation", "dsikit"};
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker threads (default: DSIKIT_THREADS or all cores)");
  app.set_version_flag("--version", std::string(kVersion));

  detail::ScoreArgs score;
  auto* sc = app.add_subcommand("score", "Score one labeling of a dataset with internal indices");
  sc->add_option("--data", score.data, "Dataset CSV")->required();
  sc->add_option("--labels", score.labels, "Label file (one label per line)");
  sc->add_flag("--labels-from-data", score.labels_from_data, "Use the dataset's label column");
  sc->add_option("--index", score.indices, "Comma-separated indices (default: all native)");
  sc->add_option("--format", score.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sc->add_option("--pair-budget", score.pair_budget, "Max materialized distance pairs per set");
  sc->add_option("--seed", score.seed, "Seed for pair subsampling");
  score.common.add_to(*sc);

  detail::EvaluateArgs eval;
  auto* ev = app.add_subcommand("evaluate", "Cluster datasets, score every index and compare with ARI");
  ev->add_option("--datasets", eval.datasets, "Directory of .csv files or comma-separated list")->required();
  ev->add_option("--methods", eval.methods, "kmeans[:k=N][:seed=S], ward[:k=N], external:DIR")->capture_default_str();
  ev->add_option("--indices", eval.indices, "Comma-separated indices (default: all native)");
  ev->add_option("--plan", eval.plan, "hit or rankdiff")->capture_default_str();
  ev->add_option("--k", eval.k, "'truth' or a fixed cluster count")->capture_default_str();
  ev->add_option("--seed", eval.seed, "Seed for k-means and pair subsampling")->capture_default_str();
  ev->add_option("--out", eval.out_dir, "Directory for score matrices and report files");
  ev->add_option("--format", eval.format, "Report format on stdout: csv or json")->check(CLI::IsMember({"csv", "json"}));
  ev->add_option("--pair-budget", eval.pair_budget, "Max materialized distance pairs per set");
  eval.common.add_to(*ev);

  detail::CompareArgs cmp;
  auto* cm = app.add_subcommand("compare", "Compare score-matrix rows with a truth row");
  cm->add_option("--scores", cmp.scores, "Score-matrix CSV")->required();
  cm->add_option("--truth-row", cmp.truth_row, "Name of the ground-truth row")->capture_default_str();
  cm->add_option("--plan", cmp.plan, "hit or rankdiff")->capture_default_str();
  cm->add_option("--format", cmp.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));

  detail::SynthArgs syn;
  auto* sy = app.add_subcommand("synth", "Generate a seeded synthetic dataset");
  sy->add_option("--shape", syn.shape, "blobs, rings, spirals or moons")->required();
  sy->add_option("--n", syn.n, "Number of points")->capture_default_str();
  sy->add_option("--k", syn.k, "Number of clusters (0: shape default)")->capture_default_str();
  sy->add_option("--noise", syn.noise, "Gaussian noise standard deviation")->capture_default_str();
  sy->add_option("--seed", syn.seed, "Random seed")->capture_default_str();
  sy->add_option("-o,--output", syn.output, "Output CSV (default: stdout)");

  detail::DumpArgs dump;
  auto* dp = app.add_subcommand("dump", "Print a class's ICD or complement-BCD distances");
  dp->add_option("--data", dump.data, "Dataset CSV")->required();
  dp->add_option("--labels", dump.labels, "Label file (default: dataset label column)");
  dp->add_option("--class", dump.class_id, "Class id")->capture_default_str();
  dp->add_option("--kind", dump.kind, "icd or bcd")->capture_default_str();
  dump.common.add_to(*dp);

  std::vector<std::string> argv_store{"dsikit"};
  argv_store.insert(argv_store.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& s : argv_store) argv.push_back(s.data());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  struct ThreadOverride {
    explicit ThreadOverride(unsigned n) : active(n != 0) {
      if (active) set_thread_count(n);
    }
    ~ThreadOverride() {
      if (active) set_thread_count(0);
    }
    bool active;
  } thread_override(threads);

  try {
    if (*sc) return detail::cmd_score(score, out, err);
    if (*ev) return detail::cmd_evaluate(eval, out, err);
    if (*cm) return detail::cmd_compare(cmp, out);
    if (*sy) return detail::cmd_synth(syn, out);
    return detail::cmd_dump(dump, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kInputError;
  }
}

}  // namespace dsikit::cli
