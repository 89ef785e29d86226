#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fssrec/dataset.hpp"
#include "fssrec/error.hpp"

namespace fssrec {

enum class LearnerId { nb, ib1 };

inline const char* to_token(LearnerId id) {
  return id == LearnerId::nb ? "nb" : "ib1";
}

inline std::optional<LearnerId> learner_from_token(const std::string& token) {
  if (token == "nb") return LearnerId::nb;
  if (token == "ib1") return LearnerId::ib1;
  return std::nullopt;
}

struct AccuracyScore {
  std::size_t correct = 0;
  std::size_t total = 0;
  double acc = 0.0;
};

namespace detail {

inline void require_same_schema(const Dataset& train, const Dataset& test) {
  if (train.feature_count() != test.feature_count() ||
      train.class_count() != test.class_count())
    throw DataError("train/test schema mismatch between '" + train.name + "' and '" +
                    test.name + "'");
  for (std::size_t f = 0; f < train.feature_count(); ++f)
    if (train.columns[f].kind != test.columns[f].kind)
      throw DataError("train/test column kind mismatch at feature " + std::to_string(f));
}

// Naive Bayes with add-one smoothing on priors and nominal likelihoods,
// and per-class Gaussian densities (variance floored at 1e-9) on numeric
// features. Missing feature values are skipped in the product. A class
// that never observed a numeric feature backs off to the pooled Gaussian,
// so the prior decides; a feature nobody observed is skipped outright.
class NaiveBayesModel {
 public:
  explicit NaiveBayesModel(const Dataset& train) : train_(train) {
    const std::size_t t = train.class_count();
    const std::size_t n = train.instance_count();
    const auto class_counts = train.class_histogram();
    log_prior_.resize(t);
    for (std::size_t c = 0; c < t; ++c)
      log_prior_[c] = std::log((static_cast<double>(class_counts[c]) + 1.0) /
                               (static_cast<double>(n) + static_cast<double>(t)));

    const std::size_t f_count = train.feature_count();
    nominal_counts_.resize(f_count);
    gauss_.resize(f_count);
    for (std::size_t f = 0; f < f_count; ++f) {
      const auto& col = train.columns[f];
      if (col.kind == ColumnKind::nominal) {
        nominal_counts_[f].assign(t, std::vector<std::size_t>(col.categories.size(), 0));
        for (std::size_t i = 0; i < n; ++i)
          if (!col.missing(i))
            nominal_counts_[f][static_cast<std::size_t>(train.class_labels[i])]
                             [static_cast<std::size_t>(col.nominal[i])]++;
      } else {
        gauss_[f].assign(t + 1, Gaussian{});  // last slot pools every class
        for (std::size_t i = 0; i < n; ++i) {
          if (col.missing(i)) continue;
          auto& g = gauss_[f][static_cast<std::size_t>(train.class_labels[i])];
          g.count++;
          g.sum += col.numeric[i];
          g.sum_sq += col.numeric[i] * col.numeric[i];
          auto& pooled = gauss_[f][t];
          pooled.count++;
          pooled.sum += col.numeric[i];
          pooled.sum_sq += col.numeric[i] * col.numeric[i];
        }
        for (auto& g : gauss_[f]) {
          if (g.count == 0) continue;
          g.mean = g.sum / static_cast<double>(g.count);
          g.var = std::max(g.sum_sq / static_cast<double>(g.count) - g.mean * g.mean,
                           1e-9);
        }
      }
    }
  }

  int predict(const Dataset& test, std::size_t row) const {
    const std::size_t t = train_.class_count();
    int best_class = 0;
    double best_lp = -std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < t; ++c) {
      double lp = log_prior_[c];
      for (std::size_t f = 0; f < train_.feature_count(); ++f) {
        const auto& col = test.columns[f];
        if (col.missing(row)) continue;
        if (col.kind == ColumnKind::nominal) {
          const auto& counts = nominal_counts_[f][c];
          std::size_t class_total = 0;
          for (std::size_t v : counts) class_total += v;
          const std::size_t v = static_cast<std::size_t>(col.nominal[row]);
          lp += std::log((static_cast<double>(counts[v]) + 1.0) /
                         (static_cast<double>(class_total) +
                          static_cast<double>(counts.size())));
        } else {
          const auto& g =
              gauss_[f][c].count > 0 ? gauss_[f][c] : gauss_[f][t];
          if (g.count == 0) continue;
          const double d = col.numeric[row] - g.mean;
          lp += -0.5 * std::log(2.0 * M_PI * g.var) - d * d / (2.0 * g.var);
        }
      }
      if (lp > best_lp) {
        best_lp = lp;
        best_class = static_cast<int>(c);
      }
    }
    return best_class;
  }

 private:
  struct Gaussian {
    std::size_t count = 0;
    double sum = 0, sum_sq = 0, mean = 0, var = 0;
  };
  const Dataset& train_;
  std::vector<double> log_prior_;
  std::vector<std::vector<std::vector<std::size_t>>> nominal_counts_;  // [f][c][v]
  std::vector<std::vector<Gaussian>> gauss_;                           // [f][c]
};

// 1-nearest-neighbor under the heterogeneous distance: |a-b|/range for
// numeric (range from the training split; zero range contributes 0), 0/1
// mismatch for nominal, and 1 for any pair involving a missing value.
// Distance ties go to the lowest training index.
class NearestNeighborModel {
 public:
  explicit NearestNeighborModel(const Dataset& train) : train_(train) {
    range_.assign(train.feature_count(), 0.0);
    for (std::size_t f = 0; f < train.feature_count(); ++f) {
      const auto& col = train.columns[f];
      if (col.kind != ColumnKind::numeric) continue;
      double lo = std::numeric_limits<double>::infinity();
      double hi = -std::numeric_limits<double>::infinity();
      for (double v : col.numeric) {
        if (std::isnan(v)) continue;
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi > lo) range_[f] = hi - lo;
    }
  }

  int predict(const Dataset& test, std::size_t row) const {
    double best_dist = std::numeric_limits<double>::infinity();
    std::size_t best_idx = 0;
    for (std::size_t i = 0; i < train_.instance_count(); ++i) {
      double d = 0.0;
      for (std::size_t f = 0; f < train_.feature_count(); ++f) {
        const auto& tr = train_.columns[f];
        const auto& te = test.columns[f];
        if (tr.missing(i) || te.missing(row)) {
          d += 1.0;
        } else if (tr.kind == ColumnKind::numeric) {
          d += range_[f] > 0.0 ? std::abs(tr.numeric[i] - te.numeric[row]) / range_[f]
                               : 0.0;
        } else {
          d += tr.nominal[i] == te.nominal[row] ? 0.0 : 1.0;
        }
      }
      if (d < best_dist) {
        best_dist = d;
        best_idx = i;
      }
    }
    return train_.class_labels[best_idx];
  }

 private:
  const Dataset& train_;
  std::vector<double> range_;
};

}  // namespace detail

inline AccuracyScore train_and_score(LearnerId learner, const Dataset& train,
                                     const Dataset& test) {
  detail::require_same_schema(train, test);
  if (train.instance_count() == 0) throw DataError("empty training set");
  if (test.instance_count() == 0) throw DataError("empty test set");

  AccuracyScore score;
  score.total = test.instance_count();
  if (learner == LearnerId::nb) {
    detail::NaiveBayesModel model(train);
    for (std::size_t i = 0; i < test.instance_count(); ++i)
      if (model.predict(test, i) == test.class_labels[i]) score.correct++;
  } else {
    detail::NearestNeighborModel model(train);
    for (std::size_t i = 0; i < test.instance_count(); ++i)
      if (model.predict(test, i) == test.class_labels[i]) score.correct++;
  }
  score.acc = static_cast<double>(score.correct) / static_cast<double>(score.total);
  return score;
}

}  // namespace fssrec
