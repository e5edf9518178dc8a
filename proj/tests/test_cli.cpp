#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "porank/cli.hpp"
#include "porank/partial_order.hpp"
#include "porank/report.hpp"

using namespace porank;
namespace fs = std::filesystem;

namespace {

int run(std::vector<std::string> args) {
  args.insert(args.begin(), "porank");
  return run_cli(args);
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::path("cli_scratch") / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  for (std::string l; std::getline(ss, l);) out.push_back(l);
  return out;
}

}  // namespace

TEST_CASE("parse_grid") {
  CHECK(parse_grid("0.25:0.25:2").size() == 8);
  CHECK(parse_grid("0.5:0.5:2") == std::vector<double>{0.5, 1.0, 1.5, 2.0});
  CHECK(parse_grid("1") == std::vector<double>{1.0});
  CHECK_THROWS(parse_grid("1:0:2"));
  CHECK_THROWS(parse_grid("a:b:c"));
  CHECK_THROWS(parse_grid("2:1:1"));
}

TEST_CASE("argument errors") {
  CHECK(run({}) == kExitError);
  CHECK(run({"--help"}) == kExitOk);
  CHECK(run({"fit", "--input", "missing.csv", "--out", "x.json"}) == kExitError);
  CHECK(run({"frobnicate"}) == kExitError);
}

TEST_CASE("simulate is deterministic and honours its flags") {
  const auto dir = scratch("simulate");
  const std::vector<std::string> base = {"simulate", "--n", "20", "--N", "10000", "--lambda-star", "1", "--seed", "7"};
  auto a = base, b = base;
  a.insert(a.end(), {"--out", (dir / "a").string()});
  b.insert(b.end(), {"--out", (dir / "b").string()});
  REQUIRE(run(a) == kExitOk);
  REQUIRE(run(b) == kExitOk);
  CHECK(slurp(dir / "a.csv") == slurp(dir / "b.csv"));
  CHECK(slurp(dir / "a.truth.json") == slurp(dir / "b.truth.json"));

  REQUIRE(run({"simulate", "--n", "5", "--N", "2000", "--lambda-star", "0", "--out", (dir / "z").string()}) == kExitOk);
  const auto rows = lines(slurp(dir / "z.csv"));
  REQUIRE(rows.size() == 2001);
  for (std::size_t k = 1; k < rows.size(); ++k) CHECK(rows[k].substr(rows[k].rfind(',') + 1) != "0");

  REQUIRE(run({"simulate", "--n", "4", "--N", "50", "--replications", "20", "--out", (dir / "rep").string()}) == kExitOk);
  for (int r = 0; r < 20; ++r) {
    const std::string tag = (r < 10 ? "rep_r0" : "rep_r") + std::to_string(r);
    CHECK(fs::exists(dir / (tag + ".csv")));
    CHECK(fs::exists(dir / (tag + ".truth.json")));
  }
  CHECK_FALSE(fs::exists(dir / "rep_r20.csv"));
}

TEST_CASE("fit writes its outputs and routes the threshold") {
  const auto dir = scratch("fit");
  const auto data = (dir / "d").string();
  REQUIRE(run({"simulate", "--n", "8", "--N", "4000", "--score-scale", "1", "--seed", "3", "--out", data}) == kExitOk);

  const auto fit_json = (dir / "fit.json").string();
  const auto dot = (dir / "order.dot").string();
  REQUIRE(run({"fit", "--model", "bradley-terry", "--input", data + ".csv", "--out", fit_json, "--dot", dot}) == kExitOk);
  CHECK(fs::exists(fit_json));
  CHECK(fs::exists(dir / "fit.levels.json"));
  CHECK(slurp(dot).rfind("digraph", 0) == 0);
  const auto j = read_json_file(fit_json);
  CHECK(j.at("converged").get<bool>());
  CHECK(j.at("items").size() == 8);
  CHECK_FALSE(j.at("Delta").is_null());

  const auto cons_json = (dir / "cons.json").string();
  const auto cons_dot = (dir / "cons.dot").string();
  REQUIRE(run({"fit", "--input", data + ".csv", "--out", cons_json, "--dot", cons_dot, "--threshold", "conservative"}) == kExitOk);
  const StoredFit stored = stored_fit_from_json(read_json_file(cons_json));
  REQUIRE(stored.bounds);
  const auto expected_order = lambda_cut(stored.scores, stored.bounds->lambda_lower);
  CHECK(slurp(cons_dot) ==
        export_dot(expected_order, level_decomposition(expected_order, stored.scores), stored.items));
  CHECK(read_json_file(cons_json).at("threshold").at("value").get<double>() == stored.bounds->lambda_lower);

  // export-dag reproduces the same picture from the stored fit.
  const auto again = (dir / "again.dot").string();
  REQUIRE(run({"export-dag", "--fit", cons_json, "--threshold", "conservative", "--dot", again}) == kExitOk);
  CHECK(slurp(again) == slurp(cons_dot));

  const auto fixed_json = (dir / "fixed.json").string();
  REQUIRE(run({"fit", "--input", data + ".csv", "--out", fixed_json, "--threshold", "fixed:0"}) == kExitOk);
  CHECK(read_json_file(fixed_json).at("levels").size() == 8);
  CHECK(run({"fit", "--input", data + ".csv", "--out", fixed_json, "--threshold", "fixed:-1"}) == kExitError);
  CHECK(run({"fit", "--input", data + ".csv", "--out", (dir / "no/such/dir.json").string()}) == kExitError);
}

TEST_CASE("all-tie data exits with the non-convergence code") {
  const auto dir = scratch("ties");
  std::ofstream(dir / "t.csv") << "left,right,label\na,b,0\nb,c,0\nc,a,0\n";
  const auto out = (dir / "t.json").string();
  CHECK(run({"fit", "--model", "uniform", "--input", (dir / "t.csv").string(), "--out", out}) == kExitNotConverged);
  const auto j = read_json_file(out);
  CHECK(j.at("lambda_capped").get<bool>());
  CHECK(j.at("diagnostics").dump().find("lambda cap") != std::string::npos);
}

TEST_CASE("evaluate") {
  const auto dir = scratch("evaluate");
  SUBCASE("lambda grid gives eight rows per rule") {
    const auto prefix = (dir / "grid").string();
    REQUIRE(run({"evaluate", "--lambda-grid", "0.25:0.25:2", "--fit-models", "bradley-terry", "--replications", "2",
                 "--n", "6", "--N", "600", "--score-scale", "1", "--out", prefix}) == kExitOk);
    const auto rows = lines(slurp(prefix + "_fdr_power.csv"));
    REQUIRE(rows.size() == 1 + 8 * 3);
    for (const char* rule : {",mle,", ",conservative,", ",aggressive,"}) {
      int hits = 0;
      for (const auto& r : rows) hits += r.find(rule) != std::string::npos;
      CHECK(hits == 8);
    }
    CHECK(slurp(prefix + ".txt").find("Mean Macro-F1 by lambda*") != std::string::npos);
  }
  SUBCASE("table report has the four statistics") {
    const auto prefix = (dir / "table").string();
    REQUIRE(run({"evaluate", "--lambda-star", "1", "--replications", "2", "--n", "6", "--N", "800", "--out", prefix}) == kExitOk);
    const auto text = slurp(prefix + ".txt");
    for (const char* word : {"min", "mean", "max", "std", "bradley-terry", "uniform", "thurstone-mosteller"})
      CHECK(text.find(word) != std::string::npos);
    CHECK(read_json_file(prefix + ".json").at("runs").size() == 3);
  }
  SUBCASE("perfect scores against their own truth") {
    const auto sim = (dir / "sim").string();
    REQUIRE(run({"simulate", "--n", "7", "--N", "100", "--seed", "2", "--out", sim}) == kExitOk);
    const auto truth = read_json_file(sim + ".truth.json");
    nlohmann::json fake = {{"items", truth.at("items")},
                           {"scores", truth.at("scores_star")},
                           {"lambda", truth.at("lambda_star")},
                           {"Delta", nullptr}};
    std::ofstream(dir / "perfect.json") << fake.dump();
    const auto out = (dir / "perfect_eval").string();
    REQUIRE(run({"evaluate", "--fit", (dir / "perfect.json").string(), "--truth", sim + ".truth.json", "--out", out}) == kExitOk);
    const auto j = read_json_file(out + ".json");
    CHECK(j.at("macro_f1").get<double>() == 1.0);
    CHECK(j.at("micro_f1").get<double>() == 1.0);
    CHECK(j.at("fdr").get<double>() == 0.0);
    CHECK(j.at("power").get<double>() == 1.0);
    CHECK(j.at("correctness").get<double>() == 1.0);
    CHECK(j.at("completeness").get<double>() == 1.0);
    // Rules that need variance estimates fail cleanly without them.
    CHECK(run({"evaluate", "--fit", (dir / "perfect.json").string(), "--truth", sim + ".truth.json", "--threshold",
               "aggressive", "--out", out}) == kExitError);
  }
}

TEST_CASE("alpha-cut") {
  const auto dir = scratch("alpha");
  std::ofstream(dir / "a.csv") << "left,right,label\nx,y,1\nx,y,1\ny,x,1\ny,z,1\nz,y,0\n";
  const auto out = (dir / "a.json").string();
  REQUIRE(run({"alpha-cut", "--input", (dir / "a.csv").string(), "--alpha", "0.6", "--out", out, "--dot",
               (dir / "a.dot").string()}) == kExitOk);
  const auto j = read_json_file(out);
  CHECK(j.at("relation").size() == 2);
  CHECK(j.at("is_partial_order").get<bool>() == false);
  CHECK(run({"alpha-cut", "--input", (dir / "a.csv").string(), "--alpha", "0.4", "--out", out}) == kExitError);
}
