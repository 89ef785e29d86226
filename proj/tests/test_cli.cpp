#include <catch_amalgamated.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "fssrec/metadb.hpp"
#include "helpers.hpp"

using namespace fssrec;
namespace fs = std::filesystem;

namespace {

int cli(const std::string& args) {
  const std::string cmd = std::string(FSSREC_CLI_PATH) + " " + args + " 2>/dev/null";
  const int status = std::system(cmd.c_str());
  return WEXITSTATUS(status);
}

fs::path workdir() {
  const fs::path p = fs::temp_directory_path() / "fssrec_cli_tests";
  fs::create_directories(p);
  return p;
}

nlohmann::json slurp_json(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  nlohmann::json j;
  in >> j;
  return j;
}

// A small synthetic db on disk: 5 entries, 3 algorithms, 4 fold records.
fs::path synthetic_db_file() {
  MetaDb db;
  db.roster = {AlgorithmId::cfs_sfs, AlgorithmId::fcbf, AlgorithmId::relieff};
  for (int i = 0; i < 5; ++i) {
    MetaDbEntry e;
    e.dataset_name = "d" + std::to_string(i);
    e.meta.instances = 10.0 * (i + 1);
    e.meta.mi_bar = 0.1 * i;
    for (std::size_t a = 0; a < 3; ++a) {
      const double acc = 0.5 + 0.1 * static_cast<double>((a + i) % 3);
      e.records.push_back(std::vector<FoldRecord>(4, FoldRecord{acc, 0.01, 2}));
    }
    db.entries.push_back(std::move(e));
  }
  const fs::path p = workdir() / "synthetic_db.json";
  save(db, p);
  return p;
}

}  // namespace

TEST_CASE("extract-meta emits the thirteen keys") {
  const fs::path out = workdir() / "meta.json";
  REQUIRE(cli("extract-meta --dataset " +
              (fs::path(FSSREC_DATA_DIR) / "iris.arff").string() + " --output " +
              out.string()) == 0);
  const auto j = slurp_json(out);
  CHECK(j["I"] == 150.0);
  CHECK(j["F"] == 5.0);
  CHECK(j["T"] == 3.0);
  CHECK(j["D"] == 30.0);
  CHECK(j.size() == 13);
}

TEST_CASE("recommend with defaults returns a top-3 report") {
  const fs::path db = synthetic_db_file();
  const fs::path query = workdir() / "query.csv";
  {
    std::ofstream q(query);
    q << "x,y,label\n1,2,p\n2,1,q\n3,4,p\n4,3,q\n5,6,p\n6,5,q\n";
  }
  const fs::path out = workdir() / "rec.json";
  REQUIRE(cli("recommend --db " + db.string() + " --dataset " + query.string() +
              " --output " + out.string()) == 0);
  const auto j = slurp_json(out);
  CHECK(j["top"].size() == 3);
  CHECK(j["ranking"].size() == 3);
  CHECK(j["k"] == 2);  // auto: round(0.375 * 5)
  CHECK(j["neighbors"].size() == 2);
  double total = 0;
  for (const auto& nb : j["neighbors"]) total += nb["weight"].get<double>();
  CHECK(std::abs(total - 1.0) < 1e-9);
}

TEST_CASE("usage errors exit with 1") {
  const fs::path db = synthetic_db_file();
  CHECK(cli("recommend --db " + db.string() + " --dataset x.arff --k 0") == 1);
  CHECK(cli("frobnicate") == 1);
  CHECK(cli("recommend") == 1);  // missing required flags
  CHECK(cli("--help") == 0);
}

TEST_CASE("data errors exit with 2") {
  CHECK(cli("recommend --db /nonexistent/db.json --dataset also_missing.arff") == 2);
  CHECK(cli("extract-meta --dataset /nonexistent/x.arff") == 2);
  const fs::path db = synthetic_db_file();
  // k beyond the collection size is a data-level failure
  CHECK(cli("validate --db " + db.string() + " --k 99") == 2);
}

TEST_CASE("validate writes a JSON report and a CSV") {
  const fs::path db = synthetic_db_file();
  const fs::path out = workdir() / "report.json";
  const fs::path csv = workdir() / "report.csv";
  REQUIRE(cli("validate --db " + db.string() + " --k 2 --top 2 --output " +
              out.string() + " --csv " + csv.string()) == 0);
  const auto j = slurp_json(out);
  CHECK(j["G"] == 5);
  CHECK(j["datasets"].size() == 5);
  CHECK(j["hit_ratio_top"].get<double>() >= 0.0);
  CHECK(j["hit_ratio_top"].get<double>() <= 1.0);

  std::ifstream in(csv);
  std::string line;
  std::getline(in, line);
  CHECK(line == "name,rec1,rec2,hit1,hit2,hit_top,rpr");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 5);
}

TEST_CASE("validate resolves k=auto against the leave-one-out pool") {
  const fs::path db = synthetic_db_file();
  const fs::path out = workdir() / "auto_report.json";
  REQUIRE(cli("validate --db " + db.string() + " --k auto --output " + out.string()) ==
          0);
  CHECK(slurp_json(out)["k"] == 2);  // round(0.375 * 4) with 5 entries
}

TEST_CASE("sensitivity needs at least four entries") {
  MetaDb db;
  db.roster = {AlgorithmId::cfs_sfs, AlgorithmId::fcbf};
  for (int i = 0; i < 3; ++i) {
    MetaDbEntry e;
    e.dataset_name = "d" + std::to_string(i);
    e.meta.instances = i;
    e.records.assign(2, std::vector<FoldRecord>(2, FoldRecord{0.5, 0.1, 1}));
    db.entries.push_back(std::move(e));
  }
  const fs::path p = workdir() / "tiny_db.json";
  save(db, p);
  CHECK(cli("sensitivity --db " + p.string()) == 2);
}

TEST_CASE("sensitivity writes the k sweep with the advisory band") {
  const fs::path db = synthetic_db_file();
  const fs::path out = workdir() / "sweep.csv";
  REQUIRE(cli("sensitivity --db " + db.string() + " --output " + out.string()) == 0);
  std::ifstream in(out);
  std::string line;
  std::getline(in, line);
  CHECK(line.rfind("# advisory_k_band,", 0) == 0);
  std::getline(in, line);
  CHECK(line == "k,mean_rpr,acceptable");
  int rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 4);  // k = 1..N-1
}

TEST_CASE("best-set reports one or all datasets") {
  const fs::path db = synthetic_db_file();
  const fs::path out = workdir() / "best.json";
  REQUIRE(cli("best-set --db " + db.string() + " --name d0 --output " + out.string()) ==
          0);
  const auto one = slurp_json(out);
  CHECK(one["dataset"] == "d0");
  CHECK(one["members"].size() >= 1);

  REQUIRE(cli("best-set --db " + db.string() + " --output " + out.string()) == 0);
  CHECK(slurp_json(out).size() == 5);
}

TEST_CASE("build-db honors a selector subset") {
  const fs::path dir = workdir() / "mini";
  fs::create_directories(dir);
  {
    std::ofstream a(dir / "tiny_a.arff");
    a << "@relation a\n@attribute x numeric\n@attribute y numeric\n"
         "@attribute class {p,q}\n@data\n";
    for (int i = 0; i < 12; ++i)
      a << i << "," << (11 - i) << "," << (i % 2 == 0 ? "p" : "q") << "\n";
  }
  {
    std::ofstream b(dir / "tiny_b.csv");
    b << "u,v,label\n";
    for (int i = 0; i < 12; ++i)
      b << i * 2 << "," << i * i << "," << (i < 6 ? "m" : "n") << "\n";
  }
  const fs::path out = workdir() / "mini_db.json";
  REQUIRE(cli("build-db --datasets " + dir.string() +
              " --selectors fcbf,signific --passes 1 --folds 3 --seed 5 --output " +
              out.string()) == 0);
  const MetaDb db = load_metadb(out);
  CHECK(db.roster == std::vector<AlgorithmId>{AlgorithmId::fcbf, AlgorithmId::signific});
  REQUIRE(db.entries.size() == 2);
  CHECK(db.entries[0].dataset_name == "tiny_a");  // sorted by file name
  CHECK(db.entries[1].dataset_name == "tiny_b");
  for (const auto& e : db.entries)
    for (const auto& recs : e.records) CHECK(recs.size() == 3);
}
