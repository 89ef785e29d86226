#include <catch_amalgamated.hpp>

#include <cmath>
#include <numeric>
#include <vector>

#include "fssrec/learners.hpp"
#include "fssrec/rng.hpp"
#include "helpers.hpp"

using namespace fssrec;
using Catch::Matchers::WithinAbs;

namespace {

// 6 nominal instances whose add-one posterior table is small enough to
// work out by hand; see the comments in the prediction test.
Dataset nb_toy_train() {
  return testutil::make_dataset(
      "nbtoy",
      {testutil::nominal_column("f1", {0, 0, 0, 1, 1, 1}, 2),
       testutil::nominal_column("f2", {0, 1, 0, 1, 0, 1}, 2)},
      {0, 0, 0, 1, 1, 1}, 2);
}

Dataset random_mixed_dataset(Rng& rng, std::size_t n) {
  std::vector<double> x;
  std::vector<int> nom, labels;
  for (std::size_t i = 0; i < n; ++i) {
    x.push_back(static_cast<double>(rng.below(100)) / 10.0);
    nom.push_back(static_cast<int>(rng.below(3)));
    labels.push_back(static_cast<int>(rng.below(2)));
  }
  labels[0] = 0;
  labels[1] = 1;
  return testutil::make_dataset(
      "mix",
      {testutil::numeric_column("x", x), testutil::nominal_column("n", nom, 3)},
      labels, 2);
}

}  // namespace

TEST_CASE("ib1 is perfect on its own training data") {
  auto ds = testutil::make_dataset(
      "self",
      {testutil::numeric_column("x", {1, 2, 3, 4, 5}),
       testutil::nominal_column("n", {0, 1, 2, 0, 1}, 3)},
      {0, 1, 0, 1, 0}, 2);
  const AccuracyScore s = train_and_score(LearnerId::ib1, ds, ds);
  CHECK(s.acc == 1.0);
  CHECK(s.correct == 5);
}

TEST_CASE("a single training instance predicts its own label everywhere") {
  auto train = testutil::make_dataset(
      "one", {testutil::numeric_column("x", {3.0})}, {1}, 2);
  auto test = testutil::make_dataset(
      "many", {testutil::numeric_column("x", {-10, 0, 3, 99})}, {1, 1, 1, 1}, 2);
  CHECK(train_and_score(LearnerId::ib1, train, test).acc == 1.0);
  CHECK(train_and_score(LearnerId::nb, train, test).acc == 1.0);
}

TEST_CASE("naive bayes matches the hand-computed posterior table") {
  // Priors: (3+1)/(6+2) = 1/2 each. Likelihoods with add-one over 2 values:
  //   P(f1=v|c): 4/5 when v==c's block, else 1/5
  //   P(f2=0|0) = 3/5, P(f2=1|0) = 2/5, P(f2=0|1) = 2/5, P(f2=1|1) = 3/5
  // Scores: (0,0): c0 .5*.8*.6=.24  vs c1 .5*.2*.4=.04  -> 0
  //         (0,1): c0 .16 vs c1 .06 -> 0
  //         (1,0): c0 .06 vs c1 .16 -> 1
  //         (1,1): c0 .04 vs c1 .24 -> 1
  const Dataset train = nb_toy_train();
  auto grid = testutil::make_dataset(
      "grid",
      {testutil::nominal_column("f1", {0, 0, 1, 1}, 2),
       testutil::nominal_column("f2", {0, 1, 0, 1}, 2)},
      {0, 0, 1, 1}, 2);
  CHECK(train_and_score(LearnerId::nb, train, grid).acc == 1.0);

  // flip one expected label: exactly one prediction now counts as wrong
  auto flipped = grid;
  flipped.class_labels = {0, 1, 1, 1};
  CHECK_THAT(train_and_score(LearnerId::nb, train, flipped).acc,
             WithinAbs(0.75, 1e-12));
}

TEST_CASE("naive bayes separates well-spread gaussians") {
  auto train = testutil::make_dataset(
      "gauss", {testutil::numeric_column("x", {0, 1, 0.5, 10, 11, 10.5})},
      {0, 0, 0, 1, 1, 1}, 2);
  auto test = testutil::make_dataset(
      "probe", {testutil::numeric_column("x", {0.2, 10.8, -1, 12})}, {0, 1, 0, 1}, 2);
  CHECK(train_and_score(LearnerId::nb, train, test).acc == 1.0);
}

TEST_CASE("accuracy is invariant under instance reordering") {
  // distance ties are broken by training index, so tie-free numeric data
  // is the regime where reordering cannot matter for ib1; naive bayes only
  // counts, so any data works there
  Rng rng(4242);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<double> xs, ys;
    std::vector<int> labels;
    for (int i = 0; i < 20; ++i) {
      xs.push_back(static_cast<double>(i) + static_cast<double>(rng.below(9)) / 10.0);
      ys.push_back(static_cast<double>(rng.below(1000)) / 7.0);
      labels.push_back(static_cast<int>(rng.below(2)));
    }
    labels[0] = 0;
    labels[1] = 1;
    const auto train = testutil::make_dataset(
        "t", {testutil::numeric_column("x", xs), testutil::numeric_column("y", ys)},
        labels, 2);
    const auto probe = testutil::make_dataset(
        "p",
        {testutil::numeric_column("x", {0.05, 7.3, 19.2}),
         testutil::numeric_column("y", {3.0, 88.0, 140.0})},
        {0, 1, 0}, 2);
    std::vector<std::size_t> perm_train(20), perm_probe(3);
    std::iota(perm_train.begin(), perm_train.end(), 0);
    std::iota(perm_probe.begin(), perm_probe.end(), 0);
    rng.shuffle(perm_train);
    rng.shuffle(perm_probe);
    const Dataset train2 = subset_rows(train, perm_train);
    const Dataset probe2 = subset_rows(probe, perm_probe);
    for (LearnerId learner : {LearnerId::nb, LearnerId::ib1}) {
      const double a = train_and_score(learner, train, probe).acc;
      const double b = train_and_score(learner, train2, probe2).acc;
      REQUIRE_THAT(a, WithinAbs(b, 1e-12));
    }
    // naive bayes on tie-heavy mixed data too: counts ignore order
    const Dataset mixed_train = random_mixed_dataset(rng, 20);
    const Dataset mixed_test = random_mixed_dataset(rng, 10);
    const double a = train_and_score(LearnerId::nb, mixed_train, mixed_test).acc;
    const double b = train_and_score(
        LearnerId::nb, subset_rows(mixed_train, perm_train), mixed_test).acc;
    REQUIRE_THAT(a, WithinAbs(b, 1e-12));
  }
}

TEST_CASE("naive bayes predictions survive duplicating the training set") {
  // add-one smoothing shifts the smoothed probabilities slightly under
  // duplication, so the check runs on comfortably separated data where the
  // predicted labels have room
  const Dataset toy = nb_toy_train();
  auto grid = testutil::make_dataset(
      "grid",
      {testutil::nominal_column("f1", {0, 0, 1, 1}, 2),
       testutil::nominal_column("f2", {0, 1, 0, 1}, 2)},
      {0, 0, 1, 1}, 2);
  auto gauss = testutil::make_dataset(
      "gauss", {testutil::numeric_column("x", {0, 1, 0.5, 10, 11, 10.5})},
      {0, 0, 0, 1, 1, 1}, 2);
  auto probe = testutil::make_dataset(
      "probe", {testutil::numeric_column("x", {0.2, 10.8, -1, 12})}, {0, 1, 0, 1}, 2);

  std::vector<std::size_t> twice(12);
  for (std::size_t i = 0; i < 12; ++i) twice[i] = i % 6;
  CHECK(train_and_score(LearnerId::nb, toy, grid).acc ==
        train_and_score(LearnerId::nb, subset_rows(toy, twice), grid).acc);
  CHECK(train_and_score(LearnerId::nb, gauss, probe).acc ==
        train_and_score(LearnerId::nb, subset_rows(gauss, twice), probe).acc);
}

TEST_CASE("ib1 scores 1 when the test rows are training rows") {
  Rng rng(31337);
  const Dataset train = random_mixed_dataset(rng, 30);
  const Dataset test = subset_rows(train, {3, 7, 11, 19});
  CHECK(train_and_score(LearnerId::ib1, train, test).acc == 1.0);
}

TEST_CASE("ib1 breaks distance ties toward the lowest training index") {
  auto train = testutil::make_dataset(
      "tie", {testutil::numeric_column("x", {0.0, 2.0})}, {0, 1}, 2);
  auto probe = testutil::make_dataset(
      "probe", {testutil::numeric_column("x", {1.0})}, {0}, 2);
  CHECK(train_and_score(LearnerId::ib1, train, probe).acc == 1.0);
}

TEST_CASE("ib1 treats missing values as maximally distant") {
  auto train = testutil::make_dataset(
      "miss",
      {testutil::numeric_column("x", {0.0, std::numeric_limits<double>::quiet_NaN()})},
      {0, 1}, 2);
  auto probe = testutil::make_dataset(
      "probe", {testutil::numeric_column("x", {0.0})}, {0}, 2);
  CHECK(train_and_score(LearnerId::ib1, train, probe).acc == 1.0);
}

TEST_CASE("learner errors") {
  auto train = testutil::make_dataset(
      "t", {testutil::numeric_column("x", {1, 2})}, {0, 1}, 2);
  SECTION("empty test set") {
    auto empty = testutil::make_dataset(
        "e", {testutil::numeric_column("x", {})}, {}, 2);
    CHECK_THROWS_AS(train_and_score(LearnerId::nb, train, empty), DataError);
  }
  SECTION("schema mismatch") {
    auto other = testutil::make_dataset(
        "o",
        {testutil::numeric_column("x", {1}), testutil::numeric_column("y", {2})},
        {0}, 2);
    CHECK_THROWS_AS(train_and_score(LearnerId::ib1, train, other), DataError);
  }
}
