#include <catch_amalgamated.hpp>

#include <algorithm>
#include <map>
#include <numeric>

#include <json.hpp>

#include "fssrec/metadb.hpp"
#include "fssrec/rng.hpp"
#include "helpers.hpp"

using namespace fssrec;
using Catch::Matchers::WithinAbs;

namespace {

Dataset toy_dataset(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x;
  std::vector<int> nom, labels;
  for (std::size_t i = 0; i < n; ++i) {
    const int cls = static_cast<int>(i % 2);
    labels.push_back(cls);
    x.push_back(static_cast<double>(cls) * 5.0 +
                static_cast<double>(rng.below(30)) / 10.0);
    nom.push_back(static_cast<int>(rng.below(3)));
  }
  return testutil::make_dataset(
      "toy" + std::to_string(seed),
      {testutil::numeric_column("x", x), testutil::nominal_column("n", nom, 3)},
      labels, 2);
}

std::vector<AlgorithmId> full_roster() {
  return {kDefaultRoster.begin(), kDefaultRoster.end()};
}

MetaDb synthetic_db(const std::vector<std::vector<FoldRecord>>& shared_records,
                    std::size_t entries) {
  MetaDb db;
  db.roster = full_roster();
  db.roster.resize(shared_records.size());
  for (std::size_t e = 0; e < entries; ++e) {
    MetaDbEntry entry;
    entry.dataset_name = "d" + std::to_string(e);
    entry.meta.instances = 10.0 + static_cast<double>(e);
    entry.records = shared_records;
    db.entries.push_back(std::move(entry));
  }
  return db;
}

}  // namespace

TEST_CASE("build_entry produces passes*folds records per algorithm") {
  const Dataset ds = toy_dataset(30, 1);
  SECTION("one pass, two folds") {
    const MetaDbEntry e = build_entry(ds, full_roster(), LearnerId::nb, {1, 2, 7});
    REQUIRE(e.records.size() == 7);
    for (const auto& recs : e.records) CHECK(recs.size() == 2);
  }
  SECTION("five passes, ten folds") {
    const MetaDbEntry e = build_entry(ds, full_roster(), LearnerId::nb, {5, 10, 7});
    for (const auto& recs : e.records) CHECK(recs.size() == 50);
  }
}

TEST_CASE("build_entry is reproducible apart from wall-clock runtimes") {
  const Dataset ds = toy_dataset(24, 2);
  const auto a = build_entry(ds, full_roster(), LearnerId::ib1, {2, 4, 99});
  const auto b = build_entry(ds, full_roster(), LearnerId::ib1, {2, 4, 99});
  REQUIRE(a.records.size() == b.records.size());
  for (std::size_t alg = 0; alg < a.records.size(); ++alg) {
    for (std::size_t f = 0; f < a.records[alg].size(); ++f) {
      REQUIRE(a.records[alg][f].acc == b.records[alg][f].acc);
      REQUIRE(a.records[alg][f].n == b.records[alg][f].n);
    }
  }
}

TEST_CASE("scripted hooks flow through to the records verbatim") {
  const Dataset ds = toy_dataset(20, 3);
  BuildHooks hooks;
  std::size_t select_calls = 0;
  hooks.select = [&](AlgorithmId alg, const Dataset&, const Dataset&, std::uint64_t) {
    ++select_calls;
    SelectionResult r;
    r.selected = {0};
    r.algorithm = alg;
    r.runtime_s = 1.0;
    return r;
  };
  hooks.score = [](LearnerId, const Dataset&, const Dataset& test) {
    AccuracyScore s;
    s.total = test.instance_count();
    s.correct = s.total;
    s.acc = 1.0;
    return s;
  };
  hooks.runtime_override = [](AlgorithmId alg, int pass, int fold) {
    return 0.125 * static_cast<double>(static_cast<int>(alg) + 1) +
           0.001 * static_cast<double>(pass * 100 + fold);
  };
  const MetaDbEntry e = build_entry(ds, full_roster(), LearnerId::nb, {2, 2, 5}, hooks);
  CHECK(select_calls == 7 * 4);
  for (std::size_t alg = 0; alg < 7; ++alg) {
    std::size_t r = 0;
    for (int pass = 0; pass < 2; ++pass) {
      for (int fold = 0; fold < 2; ++fold, ++r) {
        CHECK(e.records[alg][r].acc == 1.0);
        CHECK(e.records[alg][r].n == 1);
        CHECK(e.records[alg][r].t ==
              0.125 * static_cast<double>(alg + 1) +
                  0.001 * static_cast<double>(pass * 100 + fold));
      }
    }
  }
}

TEST_CASE("build_entry rejects a lone minority instance") {
  // class counts {9,1}: the training split opposite the minority's fold is
  // single-class for every shuffle, so all redraws fail
  std::vector<int> labels(9, 0);
  labels.push_back(1);
  auto ds = testutil::make_dataset(
      "lone", {testutil::numeric_column("x", {1, 2, 3, 4, 5, 6, 7, 8, 9, 10})},
      labels, 2);
  CHECK_THROWS_WITH(build_entry(ds, full_roster(), LearnerId::nb, {1, 2, 1}),
                    Catch::Matchers::ContainsSubstring("single-class"));
}

TEST_CASE("earr_view") {
  SECTION("identical records score 1 everywhere") {
    const std::vector<std::vector<FoldRecord>> recs(
        4, std::vector<FoldRecord>(6, FoldRecord{0.8, 0.5, 3}));
    const MetaDb db = synthetic_db(recs, 2);
    const auto view = earr_view(db, {0.1, 0.1});
    for (const auto& [name, scores] : view)
      for (double s : scores) CHECK_THAT(s, WithinAbs(1.0, 1e-12));
  }
  SECTION("zero weights rank by the accuracy ratios") {
    Rng rng(55);
    std::vector<std::vector<FoldRecord>> recs(5);
    for (auto& algrecs : recs)
      for (int f = 0; f < 8; ++f)
        algrecs.push_back({0.1 + static_cast<double>(rng.below(900)) / 1000.0,
                           0.001 + static_cast<double>(rng.below(100)),
                           1 + static_cast<int>(rng.below(9))});
    const MetaDb db = synthetic_db(recs, 1);
    const auto view = earr_view(db, {});
    const auto& scores = view.at("d0");
    for (double s : scores) CHECK(s > 0.0);

    // independent oracle: ranking by mean over folds of acc_i * sum_j 1/acc_j
    std::vector<double> oracle(5, 0.0);
    for (int f = 0; f < 8; ++f) {
      double inv_sum = 0.0;
      for (std::size_t a = 0; a < 5; ++a) inv_sum += 1.0 / recs[a][f].acc;
      for (std::size_t a = 0; a < 5; ++a) oracle[a] += recs[a][f].acc * inv_sum;
    }
    std::vector<std::size_t> by_view(5), by_oracle(5);
    std::iota(by_view.begin(), by_view.end(), 0);
    std::iota(by_oracle.begin(), by_oracle.end(), 0);
    std::stable_sort(by_view.begin(), by_view.end(),
                     [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::stable_sort(by_oracle.begin(), by_oracle.end(),
                     [&](std::size_t a, std::size_t b) { return oracle[a] > oracle[b]; });
    CHECK(by_view == by_oracle);
  }
  SECTION("re-querying under new weights re-runs nothing") {
    const Dataset ds = toy_dataset(20, 4);
    BuildHooks hooks;
    std::size_t select_calls = 0;
    hooks.select = [&](AlgorithmId alg, const Dataset&, const Dataset&, std::uint64_t) {
      ++select_calls;
      SelectionResult r;
      r.selected = {0};
      r.algorithm = alg;
      return r;
    };
    MetaDb db;
    db.roster = full_roster();
    db.entries.push_back(build_entry(ds, db.roster, LearnerId::nb, {1, 2, 5}, hooks));
    const std::size_t after_build = select_calls;
    earr_view(db, {0.0, 0.0});
    earr_view(db, {0.1, 0.1});
    CHECK(select_calls == after_build);
  }
}

TEST_CASE("save/load round-trips exactly") {
  const Dataset d1 = toy_dataset(20, 6);
  const Dataset d2 = toy_dataset(26, 7);
  MetaDb db;
  db.learner = LearnerId::ib1;
  db.cv = {1, 2, 123};
  db.roster = full_roster();
  db.entries.push_back(build_entry(d1, db.roster, db.learner, db.cv));
  db.entries.push_back(build_entry(d2, db.roster, db.learner, db.cv));

  const auto path = std::filesystem::temp_directory_path() / "fssrec_roundtrip.json";
  save(db, path);
  const MetaDb loaded = load_metadb(path);
  std::filesystem::remove(path);

  CHECK(loaded.schema_version == db.schema_version);
  CHECK(loaded.learner == db.learner);
  CHECK(loaded.cv.passes == db.cv.passes);
  CHECK(loaded.cv.folds == db.cv.folds);
  CHECK(loaded.cv.seed == db.cv.seed);
  CHECK(loaded.roster == db.roster);
  REQUIRE(loaded.entries.size() == db.entries.size());
  for (std::size_t e = 0; e < db.entries.size(); ++e) {
    CHECK(loaded.entries[e].dataset_name == db.entries[e].dataset_name);
    CHECK(loaded.entries[e].meta.values() == db.entries[e].meta.values());
    REQUIRE(loaded.entries[e].records.size() == db.entries[e].records.size());
    for (std::size_t a = 0; a < db.entries[e].records.size(); ++a) {
      for (std::size_t f = 0; f < db.entries[e].records[a].size(); ++f) {
        const auto& x = db.entries[e].records[a][f];
        const auto& y = loaded.entries[e].records[a][f];
        REQUIRE(x.acc == y.acc);  // bit-exact through the JSON text
        REQUIRE(x.t == y.t);
        REQUIRE(x.n == y.n);
      }
    }
  }
  // serialization itself is deterministic
  CHECK(to_json(db).dump(2) == to_json(loaded).dump(2));
}

TEST_CASE("load rejects bad files with distinct diagnostics") {
  const std::vector<std::vector<FoldRecord>> recs(
      2, std::vector<FoldRecord>(2, FoldRecord{0.5, 0.1, 1}));
  MetaDb db = synthetic_db(recs, 2);

  SECTION("unknown schema version") {
    auto j = to_json(db);
    j["schema_version"] = 99;
    testutil::TempFile f("schema", ".json", j.dump());
    CHECK_THROWS_WITH(load_metadb(f.path().string()),
                      Catch::Matchers::ContainsSubstring("schema_version 99"));
  }
  SECTION("a dropped algorithm record block names dataset and algorithm") {
    auto j = to_json(db);
    j["entries"][1]["records"].erase("cfs-sbs");
    testutil::TempFile f("dropped", ".json", j.dump());
    CHECK_THROWS_WITH(load_metadb(f.path().string()),
                      Catch::Matchers::ContainsSubstring("'d1'") &&
                          Catch::Matchers::ContainsSubstring("'cfs-sbs'"));
  }
  SECTION("garbage is a malformed-file error") {
    testutil::TempFile f("garbage", ".json", "{not json");
    CHECK_THROWS_WITH(load_metadb(f.path().string()),
                      Catch::Matchers::ContainsSubstring("malformed"));
  }
  SECTION("validate rejects duplicate entry names") {
    MetaDb dup = db;
    dup.entries[1].dataset_name = dup.entries[0].dataset_name;
    CHECK_THROWS_WITH(validate(dup), Catch::Matchers::ContainsSubstring("duplicate"));
  }
  SECTION("validate rejects out-of-range records") {
    MetaDb bad = db;
    bad.entries[0].records[0][0].acc = 0.0;
    CHECK_THROWS_WITH(validate(bad),
                      Catch::Matchers::ContainsSubstring("out-of-range"));
  }
}
