#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "fssrec/metadb.hpp"
#include "fssrec/recommender.hpp"
#include "fssrec/stats.hpp"

namespace fssrec {

// The best algorithm for a dataset together with every algorithm that is
// not significantly worse under Friedman + Holm testing on the fold-level
// scores.
struct OptimalSet {
  std::string dataset_name;
  AlgorithmId best = AlgorithmId::cfs_sfs;
  std::vector<AlgorithmId> members;  // includes best
  double significance_level = 0.05;

  bool contains(AlgorithmId id) const {
    return std::find(members.begin(), members.end(), id) != members.end();
  }
};

// Blocks are the entry's folds, treatments the roster algorithms, scores
// the fold-level mean adjusted ratios. If Friedman cannot reject, the
// whole roster is the optimal set; otherwise the best algorithm (highest
// mean score, ties to roster order) plus the Holm survivors.
inline OptimalSet optimal_set(const MetaDb& db, const std::string& dataset_name,
                              const EarrParams& p, double level = 0.05) {
  const auto it = std::find_if(db.entries.begin(), db.entries.end(),
                               [&](const MetaDbEntry& e) {
                                 return e.dataset_name == dataset_name;
                               });
  if (it == db.entries.end())
    throw DataError("unknown dataset '" + dataset_name + "' in meta-DB");
  const MetaDbEntry& entry = *it;

  const std::size_t m = entry.records.size();
  const std::size_t folds = entry.records.front().size();
  std::vector<std::vector<double>> blocks(folds, std::vector<double>(m));
  std::vector<PerfTriple> fold_triples(m);
  std::vector<double> mean_scores(m, 0.0);
  for (std::size_t f = 0; f < folds; ++f) {
    for (std::size_t a = 0; a < m; ++a) fold_triples[a] = entry.records[a][f];
    blocks[f] = fold_earr_scores(fold_triples, p);
    for (std::size_t a = 0; a < m; ++a) mean_scores[a] += blocks[f][a];
  }
  const std::size_t best_idx = static_cast<std::size_t>(
      std::max_element(mean_scores.begin(), mean_scores.end()) - mean_scores.begin());

  OptimalSet opt;
  opt.dataset_name = dataset_name;
  opt.best = db.roster[best_idx];
  opt.significance_level = level;

  const FriedmanResult fr = friedman_test(blocks);
  if (!fr.rejects(level)) {
    opt.members = db.roster;
    return opt;
  }
  auto keep = holm_vs_best(fr.mean_ranks, folds, level);
  if (std::find(keep.begin(), keep.end(), best_idx) == keep.end())
    keep.push_back(best_idx);
  std::sort(keep.begin(), keep.end());
  for (std::size_t a : keep) opt.members.push_back(db.roster[a]);
  return opt;
}

inline int hit(AlgorithmId recommended, const OptimalSet& opt) {
  return opt.contains(recommended) ? 1 : 0;
}

// How close the recommended algorithm's true score is to the dataset's
// best true score; 1 exactly when the recommendation is optimal.
inline double rpr(double rec_score, double opt_score) { return rec_score / opt_score; }

struct DatasetEval {
  std::string name;
  std::vector<AlgorithmId> recommended;  // top r, best first
  std::vector<int> hits;                 // per recommendation position
  int hit_top = 0;                       // any of the top r hits
  double rpr = 0;                        // of the first recommendation
};

struct EvaluationReport {
  std::size_t evaluated = 0;  // number of held-out datasets, G
  std::size_t k = 0;
  std::size_t r = 0;
  EarrParams params;
  std::vector<DatasetEval> rows;
  std::vector<double> hit_ratio_by_position;
  double hit_ratio_top = 0;
  double mean_rpr = 0;
};

// Hold each entry out in turn: recommend from the remaining entries (the
// standardization refits on them), then score the recommendations against
// the held-out entry's own optimal set and true scores.
inline EvaluationReport loo_validate(const MetaDb& db, const EarrParams& p,
                                     std::size_t k, std::size_t r,
                                     double level = 0.05) {
  const std::size_t n = db.entries.size();
  if (n < 3) throw DataError("leave-one-out needs at least 3 entries");
  if (k < 1 || k > n - 1)
    throw DataError("k = " + std::to_string(k) + " is out of range [1, " +
                    std::to_string(n - 1) + "]");

  EvaluationReport report;
  report.evaluated = n;
  report.k = k;
  report.r = std::min(r, db.roster.size());
  report.params = p;
  report.hit_ratio_by_position.assign(report.r, 0.0);

  const auto true_scores = earr_view(db, p);
  for (std::size_t i = 0; i < n; ++i) {
    MetaDb rest = db;
    rest.entries.erase(rest.entries.begin() + static_cast<std::ptrdiff_t>(i));
    const auto rec = recommend(rest, db.entries[i].meta, p, k, report.r);
    const auto opt = optimal_set(db, db.entries[i].dataset_name, p, level);
    const auto& scores = true_scores.at(db.entries[i].dataset_name);
    const double best_score = *std::max_element(scores.begin(), scores.end());

    DatasetEval row;
    row.name = db.entries[i].dataset_name;
    for (std::size_t j = 0; j < report.r; ++j) {
      row.recommended.push_back(rec.ranking[j].first);
      row.hits.push_back(hit(rec.ranking[j].first, opt));
    }
    row.hit_top = std::any_of(row.hits.begin(), row.hits.end(), [](int h) { return h; })
                      ? 1
                      : 0;
    row.rpr = rpr(scores[roster_index(db, rec.ranking[0].first)], best_score);

    for (std::size_t j = 0; j < report.r; ++j)
      report.hit_ratio_by_position[j] += row.hits[j];
    report.hit_ratio_top += row.hit_top;
    report.mean_rpr += row.rpr;
    report.rows.push_back(std::move(row));
  }
  for (double& h : report.hit_ratio_by_position) h /= static_cast<double>(n);
  report.hit_ratio_top /= static_cast<double>(n);
  report.mean_rpr /= static_cast<double>(n);
  return report;
}

// The 28-47% neighborhood band, snapped to integers with a small epsilon
// so that e.g. 0.28 * 25 lands on 7, not 8.
inline std::pair<std::size_t, std::size_t> advisory_k_band(std::size_t n) {
  const double nd = static_cast<double>(n);
  return {static_cast<std::size_t>(std::ceil(0.28 * nd - 1e-9)),
          static_cast<std::size_t>(std::floor(0.47 * nd + 1e-9))};
}

struct KSensitivity {
  std::vector<std::size_t> k_values;  // 1 .. N-1
  std::vector<double> mean_rpr;       // per k
  std::vector<bool> acceptable;       // per k: not significantly worse than the best k
  std::pair<std::size_t, std::size_t> advisory_band;
  FriedmanResult friedman;
};

// Leave-one-out over every possible k, then a Friedman test across the
// per-dataset first-recommendation performance ratios; when it rejects,
// Holm against the best k marks which k values hold up.
inline KSensitivity k_sensitivity(const MetaDb& db, const EarrParams& p,
                                  double level = 0.05) {
  const std::size_t n = db.entries.size();
  if (n < 4) throw DataError("k sensitivity needs at least 4 entries");

  KSensitivity out;
  out.advisory_band = advisory_k_band(n);
  std::vector<std::vector<double>> blocks(n, std::vector<double>(n - 1));
  for (std::size_t k = 1; k <= n - 1; ++k) {
    const auto report = loo_validate(db, p, k, 1, level);
    out.k_values.push_back(k);
    out.mean_rpr.push_back(report.mean_rpr);
    for (std::size_t i = 0; i < n; ++i) blocks[i][k - 1] = report.rows[i].rpr;
  }
  out.friedman = friedman_test(blocks);
  out.acceptable.assign(n - 1, true);
  if (out.friedman.rejects(level)) {
    out.acceptable.assign(n - 1, false);
    for (std::size_t t : holm_vs_best(out.friedman.mean_ranks, n, level))
      out.acceptable[t] = true;
  }
  return out;
}

}  // namespace fssrec
