// Command line surface: extract-meta, build-db, recommend, validate,
// sensitivity, best-set. Machine-readable JSON/CSV goes to --output (or
// stdout), human-readable progress to stderr. Exit codes: 0 success,
// 1 usage error, 2 data error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fssrec/fssrec.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace {

struct CommonOpts {
  double alpha = 0.0;
  double beta = 0.0;
  std::string k_spec = "auto";
  std::size_t top_r = 3;
  std::string output;
  bool csv_no_header = false;
  std::string class_column;  // empty = last column
};

fssrec::ClassColumnRef class_column_ref(const std::string& spec) {
  if (spec.empty()) return fssrec::ClassColumnRef::last();
  try {
    std::size_t pos = 0;
    const unsigned long idx = std::stoul(spec, &pos);
    if (pos == spec.size()) return fssrec::ClassColumnRef::by_index(idx);
  } catch (const std::exception&) {
  }
  return fssrec::ClassColumnRef::by_name(spec);
}

fssrec::Dataset load_any(const fs::path& path, const CommonOpts& opts) {
  const std::string ext = path.extension().string();
  if (ext == ".arff") return fssrec::load_arff(path);
  if (ext == ".csv")
    return fssrec::load_csv(path, !opts.csv_no_header, class_column_ref(opts.class_column));
  throw fssrec::DataError(path.string() + ": unsupported extension (expected .arff or .csv)");
}

std::size_t resolve_k(const std::string& spec, std::size_t available) {
  if (spec == "auto") return fssrec::auto_k(available);
  const auto k = static_cast<std::size_t>(std::stoul(spec));
  return k;
}

void emit(const std::string& text, const std::string& output) {
  if (output.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(output);
  if (!out) throw fssrec::DataError(output + ": cannot open for writing");
  out << text;
}

ordered_json meta_json(const fssrec::MetaFeatureVector& meta) {
  ordered_json j;
  const auto values = meta.values();
  for (std::size_t p = 0; p < fssrec::kMetaFeatureCount; ++p)
    j[fssrec::kMetaFeatureNames[p]] = values[p];
  return j;
}

ordered_json recommendation_json(const std::string& dataset_name,
                                 const fssrec::Recommendation& rec) {
  ordered_json j;
  j["dataset"] = dataset_name;
  j["alpha"] = rec.params.alpha;
  j["beta"] = rec.params.beta;
  j["k"] = rec.k;
  j["query"] = meta_json(rec.query_meta);
  j["neighbors"] = ordered_json::array();
  for (const auto& nb : rec.neighbors)
    j["neighbors"].push_back(
        {{"name", nb.dataset_name}, {"distance", nb.distance}, {"weight", nb.weight}});
  j["ranking"] = ordered_json::array();
  for (const auto& [alg, score] : rec.ranking)
    j["ranking"].push_back({{"algorithm", fssrec::to_token(alg)}, {"score", score}});
  j["top"] = ordered_json::array();
  for (const auto& [alg, score] : rec.top())
    j["top"].push_back({{"algorithm", fssrec::to_token(alg)}, {"score", score}});
  return j;
}

ordered_json report_json(const fssrec::EvaluationReport& report) {
  ordered_json j;
  j["G"] = report.evaluated;
  j["k"] = report.k;
  j["r"] = report.r;
  j["alpha"] = report.params.alpha;
  j["beta"] = report.params.beta;
  j["datasets"] = ordered_json::array();
  for (const auto& row : report.rows) {
    ordered_json d;
    d["name"] = row.name;
    d["recommended"] = ordered_json::array();
    for (auto alg : row.recommended) d["recommended"].push_back(fssrec::to_token(alg));
    d["hits"] = row.hits;
    d["hit_top"] = row.hit_top;
    d["rpr"] = row.rpr;
    j["datasets"].push_back(std::move(d));
  }
  j["hit_ratio_by_position"] = report.hit_ratio_by_position;
  j["hit_ratio_top"] = report.hit_ratio_top;
  j["mean_rpr"] = report.mean_rpr;
  return j;
}

std::string report_csv(const fssrec::EvaluationReport& report) {
  std::string csv = "name";
  for (std::size_t i = 1; i <= report.r; ++i) csv += ",rec" + std::to_string(i);
  for (std::size_t i = 1; i <= report.r; ++i) csv += ",hit" + std::to_string(i);
  csv += ",hit_top,rpr\n";
  for (const auto& row : report.rows) {
    csv += row.name;
    for (auto alg : row.recommended) csv += std::string(",") + fssrec::to_token(alg);
    for (int h : row.hits) csv += "," + std::to_string(h);
    csv += "," + std::to_string(row.hit_top) + "," +
           fssrec::detail::format_double(row.rpr) + "\n";
  }
  return csv;
}

int run_extract_meta(const std::string& dataset_path, const CommonOpts& opts) {
  const auto ds = load_any(dataset_path, opts);
  const auto meta = fssrec::extract(ds);
  emit(meta_json(meta).dump(2) + "\n", opts.output);
  std::cerr << ds.name << ": " << ds.instance_count() << " instances, "
            << ds.feature_count() << " predictive features, " << ds.class_count()
            << " classes\n";
  return 0;
}

int run_build_db(const std::string& dir, const std::string& learner_token,
                 int passes, int folds, std::uint64_t seed,
                 const std::vector<std::string>& selector_tokens,
                 const CommonOpts& opts) {
  const auto learner = fssrec::learner_from_token(learner_token);
  if (!learner) throw CLI::ValidationError("--learner", "unknown learner '" + learner_token + "'");

  std::vector<fssrec::AlgorithmId> roster;
  if (selector_tokens.empty()) {
    roster.assign(fssrec::kDefaultRoster.begin(), fssrec::kDefaultRoster.end());
  } else {
    for (const auto& tok : selector_tokens) {
      const auto alg = fssrec::algorithm_from_token(tok);
      if (!alg) throw CLI::ValidationError("--selectors", "unknown selector '" + tok + "'");
      roster.push_back(*alg);
    }
  }
  if (roster.size() < 2)
    throw CLI::ValidationError("--selectors", "need at least 2 selectors");

  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (!e.is_regular_file()) continue;
    const auto ext = e.path().extension().string();
    if (ext == ".arff" || ext == ".csv") files.push_back(e.path());
  }
  if (files.empty()) throw fssrec::DataError(dir + ": no .arff or .csv files");
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

  fssrec::MetaDb db;
  db.learner = *learner;
  db.cv = {passes, folds, seed};
  db.roster = roster;
  for (const auto& f : files) {
    const auto ds = load_any(f, opts);
    std::cerr << "building " << ds.name << " (" << roster.size() << " algorithms x "
              << passes * folds << " folds)\n";
    db.entries.push_back(fssrec::build_entry(ds, roster, *learner, db.cv));
  }
  fssrec::save(db, opts.output.empty() ? "metadb.json" : opts.output);
  std::cerr << "meta-DB with " << db.entries.size() << " entries written to "
            << (opts.output.empty() ? "metadb.json" : opts.output) << "\n";
  return 0;
}

int run_recommend(const std::string& db_path, const std::string& dataset_path,
                  const CommonOpts& opts) {
  const auto db = fssrec::load_metadb(db_path);
  const auto ds = load_any(dataset_path, opts);
  const std::size_t k = resolve_k(opts.k_spec, db.entries.size());
  const auto rec = fssrec::recommend(db, ds, {opts.alpha, opts.beta}, k, opts.top_r);
  emit(recommendation_json(ds.name, rec).dump(2) + "\n", opts.output);
  std::cerr << "top " << rec.top_r << " for " << ds.name << " (k=" << k << "):";
  for (const auto& [alg, score] : rec.top()) std::cerr << " " << fssrec::to_token(alg);
  std::cerr << "\n";
  return 0;
}

int run_validate(const std::string& db_path, const std::string& csv_path,
                 const CommonOpts& opts) {
  const auto db = fssrec::load_metadb(db_path);
  const std::size_t k = resolve_k(opts.k_spec, db.entries.size() - 1);
  const auto report =
      fssrec::loo_validate(db, {opts.alpha, opts.beta}, k, opts.top_r);
  emit(report_json(report).dump(2) + "\n", opts.output);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path);
    if (!out) throw fssrec::DataError(csv_path + ": cannot open for writing");
    out << report_csv(report);
  }
  std::cerr << "leave-one-out over " << report.evaluated << " entries (k=" << k
            << "): top-1 hit ratio " << report.hit_ratio_by_position[0]
            << ", top-" << report.r << " hit ratio " << report.hit_ratio_top
            << ", mean RPR " << report.mean_rpr << "\n";
  return 0;
}

int run_sensitivity(const std::string& db_path, const CommonOpts& opts) {
  const auto db = fssrec::load_metadb(db_path);
  const auto sens = fssrec::k_sensitivity(db, {opts.alpha, opts.beta});
  std::string csv = "# advisory_k_band," + std::to_string(sens.advisory_band.first) +
                    "," + std::to_string(sens.advisory_band.second) + "\n";
  csv += "k,mean_rpr,acceptable\n";
  for (std::size_t i = 0; i < sens.k_values.size(); ++i)
    csv += std::to_string(sens.k_values[i]) + "," +
           fssrec::detail::format_double(sens.mean_rpr[i]) + "," +
           (sens.acceptable[i] ? "1" : "0") + "\n";
  emit(csv, opts.output);
  std::cerr << "k sweep over " << sens.k_values.size() << " values; advisory band ["
            << sens.advisory_band.first << ", " << sens.advisory_band.second << "]\n";
  return 0;
}

int run_best_set(const std::string& db_path, const std::string& name, double level,
                 const CommonOpts& opts) {
  const auto db = fssrec::load_metadb(db_path);
  auto one = [&](const std::string& dataset) {
    const auto opt = fssrec::optimal_set(db, dataset, {opts.alpha, opts.beta}, level);
    ordered_json j;
    j["dataset"] = opt.dataset_name;
    j["best"] = fssrec::to_token(opt.best);
    j["members"] = ordered_json::array();
    for (auto alg : opt.members) j["members"].push_back(fssrec::to_token(alg));
    j["significance_level"] = opt.significance_level;
    return j;
  };
  ordered_json out;
  if (!name.empty()) {
    out = one(name);
    std::cerr << "optimal set for " << name << ": " << out["members"].size()
              << " of " << db.roster.size() << " algorithms\n";
  } else {
    out = ordered_json::array();
    for (const auto& e : db.entries) out.push_back(one(e.dataset_name));
    std::cerr << "optimal sets for " << db.entries.size() << " datasets\n";
  }
  emit(out.dump(2) + "\n", opts.output);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Feature subset selection algorithm recommendation toolkit"};
  app.require_subcommand(1);

  CommonOpts opts;
  std::string dataset_path, db_path, datasets_dir, csv_path, best_name;
  std::string learner_token = "nb";
  std::vector<std::string> selector_tokens;
  int passes = 5, folds = 10;
  std::uint64_t seed = 42;
  double level = 0.05;

  auto add_common = [&](CLI::App* cmd, bool with_earr) {
    cmd->add_option("--output", opts.output, "Write the report here instead of stdout");
    if (with_earr) {
      cmd->add_option("--alpha", opts.alpha, "Runtime weight")->check(CLI::NonNegativeNumber);
      cmd->add_option("--beta", opts.beta, "Feature-count weight")->check(CLI::NonNegativeNumber);
    }
  };
  auto add_loader = [&](CLI::App* cmd) {
    cmd->add_flag("--csv-no-header", opts.csv_no_header, "CSV input has no header row");
    cmd->add_option("--class-column", opts.class_column,
                    "CSV class column, by 0-based index or by name (default: last)");
  };
  auto check_k = [&](const std::string& spec) -> std::string {
    if (spec == "auto") return "";
    try {
      std::size_t pos = 0;
      const unsigned long k = std::stoul(spec, &pos);
      if (pos == spec.size() && k >= 1) return "";
    } catch (const std::exception&) {
    }
    return "--k must be a positive integer or 'auto'";
  };

  auto* cmd_extract = app.add_subcommand("extract-meta", "Emit the 13 meta-features of a dataset");
  cmd_extract->add_option("--dataset", dataset_path, "Input .arff or .csv")->required();
  add_loader(cmd_extract);
  add_common(cmd_extract, false);

  auto* cmd_build = app.add_subcommand("build-db", "Build a meta-knowledge database from a dataset directory");
  cmd_build->add_option("--datasets", datasets_dir, "Directory of .arff/.csv files")->required();
  cmd_build->add_option("--learner", learner_token, "Classifier: nb or ib1");
  cmd_build->add_option("--passes", passes, "Cross-validation passes")->check(CLI::PositiveNumber);
  cmd_build->add_option("--folds", folds, "Folds per pass")->check(CLI::Range(2, 1000000));
  cmd_build->add_option("--seed", seed, "Fold shuffling seed");
  cmd_build->add_option("--selectors", selector_tokens, "Roster subset (default: all 7)")->delimiter(',');
  add_loader(cmd_build);
  add_common(cmd_build, false);

  auto* cmd_recommend = app.add_subcommand("recommend", "Recommend algorithms for a new dataset");
  cmd_recommend->add_option("--db", db_path, "Meta-DB file")->required();
  cmd_recommend->add_option("--dataset", dataset_path, "Query dataset")->required();
  cmd_recommend->add_option("--k", opts.k_spec, "Neighbor count or 'auto'")->check(check_k);
  cmd_recommend->add_option("--top", opts.top_r, "Number of recommendations")->check(CLI::PositiveNumber);
  add_loader(cmd_recommend);
  add_common(cmd_recommend, true);

  auto* cmd_validate = app.add_subcommand("validate", "Leave-one-out validation of a meta-DB");
  cmd_validate->add_option("--db", db_path, "Meta-DB file")->required();
  cmd_validate->add_option("--k", opts.k_spec, "Neighbor count or 'auto'")->check(check_k);
  cmd_validate->add_option("--top", opts.top_r, "Number of recommendations")->check(CLI::PositiveNumber);
  cmd_validate->add_option("--csv", csv_path, "Also write a per-dataset CSV here");
  add_common(cmd_validate, true);

  auto* cmd_sensitivity = app.add_subcommand("sensitivity", "Sweep every k and test which hold up");
  cmd_sensitivity->add_option("--db", db_path, "Meta-DB file")->required();
  add_common(cmd_sensitivity, true);

  auto* cmd_best = app.add_subcommand("best-set", "Statistically optimal algorithm set per dataset");
  cmd_best->add_option("--db", db_path, "Meta-DB file")->required();
  cmd_best->add_option("--name", best_name, "Single dataset (default: all)");
  cmd_best->add_option("--level", level, "Significance level")->check(CLI::Range(0.0, 1.0));
  add_common(cmd_best, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);  // prints help or the usage diagnostic
    return code == 0 ? 0 : 1;
  }

  try {
    if (cmd_extract->parsed()) return run_extract_meta(dataset_path, opts);
    if (cmd_build->parsed())
      return run_build_db(datasets_dir, learner_token, passes, folds, seed,
                          selector_tokens, opts);
    if (cmd_recommend->parsed()) return run_recommend(db_path, dataset_path, opts);
    if (cmd_validate->parsed()) return run_validate(db_path, csv_path, opts);
    if (cmd_sensitivity->parsed()) return run_sensitivity(db_path, opts);
    if (cmd_best->parsed()) return run_best_set(db_path, best_name, level, opts);
  } catch (const CLI::Error& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
