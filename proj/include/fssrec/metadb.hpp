#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "fssrec/dataset.hpp"
#include "fssrec/discretize.hpp"
#include "fssrec/earr.hpp"
#include "fssrec/folds.hpp"
#include "fssrec/learners.hpp"
#include "fssrec/metafeatures.hpp"
#include "fssrec/selectors.hpp"

namespace fssrec {

inline constexpr int kMetaDbSchemaVersion = 1;

struct CvSpec {
  int passes = 5;
  int folds = 10;
  std::uint64_t seed = 42;
};

using FoldRecord = PerfTriple;

// One historical dataset: its meta-features plus the fold-level raw
// (acc, t, n) triples per roster algorithm. Storing triples instead of
// finished scores lets any (alpha, beta) be queried later without
// re-running feature selection.
struct MetaDbEntry {
  std::string dataset_name;
  MetaFeatureVector meta;
  std::vector<std::vector<FoldRecord>> records;  // [roster position][fold]
};

struct MetaDb {
  int schema_version = kMetaDbSchemaVersion;
  LearnerId learner = LearnerId::nb;
  CvSpec cv;
  std::vector<AlgorithmId> roster;
  std::vector<MetaDbEntry> entries;
};

inline void validate(const MetaDb& db) {
  if (db.roster.size() < 2) throw DataError("meta-DB roster needs at least 2 algorithms");
  if (db.entries.empty()) throw DataError("meta-DB has no entries");
  std::set<std::string> names;
  for (const auto& entry : db.entries) {
    if (!names.insert(entry.dataset_name).second)
      throw DataError("duplicate meta-DB entry '" + entry.dataset_name + "'");
    if (entry.records.size() != db.roster.size())
      throw DataError("entry '" + entry.dataset_name + "' covers " +
                      std::to_string(entry.records.size()) + " algorithms, roster has " +
                      std::to_string(db.roster.size()));
    const std::size_t folds = entry.records.front().size();
    for (std::size_t a = 0; a < entry.records.size(); ++a) {
      const auto& recs = entry.records[a];
      if (recs.empty() || recs.size() != folds)
        throw DataError("entry '" + entry.dataset_name +
                        "' has inconsistent record counts for algorithm '" +
                        to_token(db.roster[a]) + "'");
      for (const auto& r : recs)
        if (!(r.acc > 0.0 && r.acc <= 1.0) || !(r.t > 0.0) || r.n < 1)
          throw DataError("entry '" + entry.dataset_name +
                          "' has an out-of-range record for algorithm '" +
                          to_token(db.roster[a]) + "'");
    }
  }
}

// Test seams: scripted selection/scoring and deterministic runtimes.
struct BuildHooks {
  std::function<SelectionResult(AlgorithmId, const Dataset& train,
                                const Dataset& train_disc, std::uint64_t seed)>
      select;
  std::function<AccuracyScore(LearnerId, const Dataset& train, const Dataset& test)>
      score;
  std::function<double(AlgorithmId, int pass, int fold)> runtime_override;
};

namespace detail {

inline bool every_training_split_has_two_classes(const Dataset& ds,
                                                 const std::vector<int>& assignment,
                                                 int folds) {
  const auto total = ds.class_histogram();
  std::vector<std::vector<std::size_t>> per_fold(
      static_cast<std::size_t>(folds), std::vector<std::size_t>(total.size(), 0));
  for (std::size_t i = 0; i < assignment.size(); ++i)
    per_fold[static_cast<std::size_t>(assignment[i])]
            [static_cast<std::size_t>(ds.class_labels[i])]++;
  for (int f = 0; f < folds; ++f) {
    std::size_t classes = 0;
    for (std::size_t c = 0; c < total.size(); ++c)
      if (total[c] - per_fold[static_cast<std::size_t>(f)][c] > 0) ++classes;
    if (classes < 2) return false;
  }
  return true;
}

}  // namespace detail

// Runs the full cross-validated measurement for one dataset: per pass and
// fold, each roster algorithm selects on the training bins (timed), both
// splits are projected onto the selection, and the learner is scored on
// the reduced test bin. A pass whose training complement would be
// single-class is redrawn with a fresh sub-seed, at most 5 retries.
// Deterministic given (ds, roster, learner, cv) except for measured
// runtimes; hooks can pin those too.
inline MetaDbEntry build_entry(const Dataset& ds, const std::vector<AlgorithmId>& roster,
                               LearnerId learner, const CvSpec& cv,
                               const BuildHooks& hooks = {}) {
  if (cv.passes < 1) throw DataError(ds.name + ": cv.passes must be >= 1");
  if (cv.folds < 2) throw DataError(ds.name + ": cv.folds must be >= 2");
  if (roster.empty()) throw DataError(ds.name + ": empty algorithm roster");
  if (ds.instance_count() < static_cast<std::size_t>(cv.folds))
    throw DataError(ds.name + ": too few instances for " + std::to_string(cv.folds) +
                    "-fold cross-validation");

  MetaDbEntry entry;
  entry.dataset_name = ds.name;
  entry.meta = extract(ds);
  entry.records.assign(roster.size(), {});
  for (auto& r : entry.records)
    r.reserve(static_cast<std::size_t>(cv.passes) * static_cast<std::size_t>(cv.folds));

  for (int pass = 0; pass < cv.passes; ++pass) {
    std::vector<int> assignment;
    bool usable = false;
    for (int attempt = 0; attempt <= 5 && !usable; ++attempt) {
      assignment = stratified_pass_assignment(ds, cv.folds, cv.seed, pass, attempt);
      usable = detail::every_training_split_has_two_classes(ds, assignment, cv.folds);
    }
    if (!usable)
      throw DataError(ds.name + ": could not draw a pass without single-class training splits");

    for (int fold = 0; fold < cv.folds; ++fold) {
      std::vector<std::size_t> train_rows, test_rows;
      for (std::size_t i = 0; i < assignment.size(); ++i)
        (assignment[i] == fold ? test_rows : train_rows).push_back(i);
      const Dataset train = subset_rows(ds, train_rows);
      const Dataset test = subset_rows(ds, test_rows);
      const Dataset train_disc = mdl_discretize(train);

      for (std::size_t a = 0; a < roster.size(); ++a) {
        const std::uint64_t seed =
            mix_seed(mix_seed(cv.seed, static_cast<std::uint64_t>(pass),
                              static_cast<std::uint64_t>(fold)),
                     static_cast<std::uint64_t>(a));
        const SelectionResult sel =
            hooks.select ? hooks.select(roster[a], train, train_disc, seed)
                         : select_on(roster[a], train, train_disc, seed);
        const Dataset train_proj = project(train, sel.selected);
        const Dataset test_proj = project(test, sel.selected);
        const AccuracyScore score = hooks.score
                                        ? hooks.score(learner, train_proj, test_proj)
                                        : train_and_score(learner, train_proj, test_proj);
        FoldRecord rec;
        // zero accuracies would break the ratio in the score; clamp to half
        // of the smallest observable nonzero accuracy on this bin
        rec.acc = score.correct == 0
                      ? 1.0 / (2.0 * static_cast<double>(score.total))
                      : score.acc;
        rec.t = std::max(hooks.runtime_override
                             ? hooks.runtime_override(roster[a], pass, fold)
                             : sel.runtime_s,
                         kRuntimeFloorSeconds);
        rec.n = static_cast<int>(sel.selected.size());
        entry.records[a].push_back(rec);
      }
    }
  }
  return entry;
}

inline std::size_t roster_index(const MetaDb& db, AlgorithmId id) {
  for (std::size_t a = 0; a < db.roster.size(); ++a)
    if (db.roster[a] == id) return a;
  throw DataError(std::string("algorithm '") + to_token(id) + "' is not in the roster");
}

// One entry's mean scores in roster order: the per-fold roster scores
// averaged over all passes and folds.
inline std::vector<double> entry_earr_scores(const MetaDbEntry& entry,
                                             const EarrParams& p) {
  const std::size_t m = entry.records.size();
  const std::size_t folds = entry.records.front().size();
  std::vector<double> sums(m, 0.0);
  std::vector<PerfTriple> fold_triples(m);
  for (std::size_t f = 0; f < folds; ++f) {
    for (std::size_t a = 0; a < m; ++a) fold_triples[a] = entry.records[a][f];
    const auto scores = fold_earr_scores(fold_triples, p);
    for (std::size_t a = 0; a < m; ++a) sums[a] += scores[a];
  }
  for (double& s : sums) s /= static_cast<double>(folds);
  return sums;
}

inline std::map<std::string, std::vector<double>> earr_view(const MetaDb& db,
                                                            const EarrParams& p) {
  std::map<std::string, std::vector<double>> view;
  for (const auto& entry : db.entries)
    view.emplace(entry.dataset_name, entry_earr_scores(entry, p));
  return view;
}

namespace detail {

inline nlohmann::ordered_json meta_to_json(const MetaFeatureVector& meta) {
  nlohmann::ordered_json j;
  const auto values = meta.values();
  for (std::size_t p = 0; p < kMetaFeatureCount; ++p) j[kMetaFeatureNames[p]] = values[p];
  return j;
}

inline MetaFeatureVector meta_from_json(const nlohmann::json& j, const std::string& who) {
  std::array<double, kMetaFeatureCount> values{};
  for (std::size_t p = 0; p < kMetaFeatureCount; ++p) {
    if (!j.contains(kMetaFeatureNames[p]))
      throw DataError("entry '" + who + "' is missing meta-feature '" +
                      kMetaFeatureNames[p] + "'");
    values[p] = j.at(kMetaFeatureNames[p]).get<double>();
  }
  return MetaFeatureVector::from_values(values);
}

}  // namespace detail

inline nlohmann::ordered_json to_json(const MetaDb& db) {
  validate(db);
  nlohmann::ordered_json j;
  j["schema_version"] = db.schema_version;
  j["learner"] = to_token(db.learner);
  j["cv"] = {{"passes", db.cv.passes}, {"folds", db.cv.folds}, {"seed", db.cv.seed}};
  j["algorithms"] = nlohmann::ordered_json::array();
  for (AlgorithmId a : db.roster) j["algorithms"].push_back(to_token(a));
  j["entries"] = nlohmann::ordered_json::array();
  for (const auto& entry : db.entries) {
    nlohmann::ordered_json e;
    e["dataset"] = entry.dataset_name;
    e["meta"] = detail::meta_to_json(entry.meta);
    nlohmann::ordered_json records;
    for (std::size_t a = 0; a < db.roster.size(); ++a) {
      nlohmann::ordered_json list = nlohmann::ordered_json::array();
      for (const auto& r : entry.records[a])
        list.push_back({{"acc", r.acc}, {"t", r.t}, {"n", r.n}});
      records[to_token(db.roster[a])] = std::move(list);
    }
    e["records"] = std::move(records);
    j["entries"].push_back(std::move(e));
  }
  return j;
}

inline void save(const MetaDb& db, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw DataError(path.string() + ": cannot open for writing");
  out << to_json(db).dump(2) << '\n';
}

inline MetaDb from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("schema_version"))
    throw DataError("malformed meta-DB file: missing schema_version");
  MetaDb db;
  db.schema_version = j.at("schema_version").get<int>();
  if (db.schema_version != kMetaDbSchemaVersion)
    throw DataError("unsupported meta-DB schema_version " +
                    std::to_string(db.schema_version) + " (expected " +
                    std::to_string(kMetaDbSchemaVersion) + ")");
  try {
    const auto learner = learner_from_token(j.at("learner").get<std::string>());
    if (!learner) throw DataError("unknown learner '" + j.at("learner").get<std::string>() + "'");
    db.learner = *learner;
    db.cv.passes = j.at("cv").at("passes").get<int>();
    db.cv.folds = j.at("cv").at("folds").get<int>();
    db.cv.seed = j.at("cv").at("seed").get<std::uint64_t>();
    for (const auto& tok : j.at("algorithms")) {
      const auto alg = algorithm_from_token(tok.get<std::string>());
      if (!alg) throw DataError("unknown algorithm '" + tok.get<std::string>() + "' in roster");
      db.roster.push_back(*alg);
    }
    for (const auto& e : j.at("entries")) {
      MetaDbEntry entry;
      entry.dataset_name = e.at("dataset").get<std::string>();
      entry.meta = detail::meta_from_json(e.at("meta"), entry.dataset_name);
      const auto& records = e.at("records");
      for (AlgorithmId a : db.roster) {
        if (!records.contains(to_token(a)))
          throw DataError("entry '" + entry.dataset_name +
                          "' is missing records for algorithm '" + to_token(a) + "'");
        std::vector<FoldRecord> list;
        for (const auto& r : records.at(to_token(a)))
          list.push_back({r.at("acc").get<double>(), r.at("t").get<double>(),
                          r.at("n").get<int>()});
        entry.records.push_back(std::move(list));
      }
      db.entries.push_back(std::move(entry));
    }
  } catch (const nlohmann::json::exception& ex) {
    throw DataError(std::string("malformed meta-DB file: ") + ex.what());
  }
  validate(db);
  return db;
}

inline MetaDb load_metadb(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw DataError(path.string() + ": cannot open file");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw DataError(path.string() + ": malformed meta-DB file: " + ex.what());
  }
  return from_json(j);
}

}  // namespace fssrec
