#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "fssrec/metadb.hpp"
#include "fssrec/metafeatures.hpp"

namespace fssrec {

// Added to every distance before inversion so that exact meta-feature
// matches (distance 0) get finite weights; coincident neighbors share
// weight equally in the limit.
inline constexpr double kDistanceEpsilon = 1e-9;

struct Neighbor {
  std::string dataset_name;
  double distance = 0;
  double weight = 0;
};

// Midpoint of the empirically useful neighborhood band (28-47% of the
// historical collection), clamped to the valid range.
inline std::size_t auto_k(std::size_t available) {
  if (available == 0) return 1;
  const auto k = static_cast<std::size_t>(std::lround(0.375 * static_cast<double>(available)));
  return std::clamp<std::size_t>(k, 1, available);
}

// The k entries closest to the query under the L1 distance on 0-1
// standardized meta-features. Standardization is fitted on the given db's
// entries; the query is mapped with the same record and clamped into
// [0,1]. Distance ties keep db entry order. Weights are normalized inverse
// distances and sum to 1.
inline std::vector<Neighbor> nearest_neighbors(const MetaDb& db,
                                               const MetaFeatureVector& query,
                                               std::size_t k) {
  const std::size_t n = db.entries.size();
  if (k < 1 || k > n)
    throw DataError("k = " + std::to_string(k) + " is out of range [1, " +
                    std::to_string(n) + "]");
  std::vector<MetaFeatureVector> metas;
  metas.reserve(n);
  for (const auto& e : db.entries) metas.push_back(e.meta);
  const auto [standardized, record] = standardize(metas);
  const auto q = record.apply(query);

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::vector<double> dist(n);
  for (std::size_t i = 0; i < n; ++i) dist[i] = l1_distance(standardized[i], q);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return dist[a] < dist[b]; });

  std::vector<Neighbor> out;
  out.reserve(k);
  double inv_sum = 0.0;
  for (std::size_t i = 0; i < k; ++i) inv_sum += 1.0 / (dist[order[i]] + kDistanceEpsilon);
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t idx = order[i];
    out.push_back({db.entries[idx].dataset_name, dist[idx],
                   (1.0 / (dist[idx] + kDistanceEpsilon)) / inv_sum});
  }
  return out;
}

struct Recommendation {
  std::vector<std::pair<AlgorithmId, double>> ranking;  // score descending
  std::size_t top_r = 0;                                // first top_r entries of ranking
  std::vector<Neighbor> neighbors;
  MetaFeatureVector query_meta;
  EarrParams params;
  std::size_t k = 0;

  std::vector<std::pair<AlgorithmId, double>> top() const {
    return {ranking.begin(), ranking.begin() + static_cast<std::ptrdiff_t>(top_r)};
  }
};

// Estimate each roster algorithm's score on the query as the
// distance-weighted average of its scores on the k nearest entries, then
// rank descending. Score ties keep roster order; r is capped at the roster
// size.
inline Recommendation recommend(const MetaDb& db, const MetaFeatureVector& query_meta,
                                const EarrParams& p, std::size_t k, std::size_t r) {
  if (r < 1) throw DataError("top-r must be >= 1");
  Recommendation rec;
  rec.query_meta = query_meta;
  rec.params = p;
  rec.k = k;
  rec.neighbors = nearest_neighbors(db, query_meta, k);

  const std::size_t m = db.roster.size();
  std::vector<double> estimated(m, 0.0);
  for (const auto& nb : rec.neighbors) {
    const auto it = std::find_if(db.entries.begin(), db.entries.end(),
                                 [&](const MetaDbEntry& e) {
                                   return e.dataset_name == nb.dataset_name;
                                 });
    const auto scores = entry_earr_scores(*it, p);
    for (std::size_t a = 0; a < m; ++a) estimated[a] += nb.weight * scores[a];
  }

  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return estimated[a] > estimated[b];
  });
  for (std::size_t a : order) rec.ranking.emplace_back(db.roster[a], estimated[a]);
  rec.top_r = std::min(r, m);
  return rec;
}

inline Recommendation recommend(const MetaDb& db, const Dataset& query,
                                const EarrParams& p, std::size_t k, std::size_t r) {
  return recommend(db, extract(query), p, k, r);
}

}  // namespace fssrec
