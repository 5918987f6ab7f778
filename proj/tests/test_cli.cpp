#include <doctest.h>

#include "treelip/cli.hpp"
#include "treelip/report.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace treelip;
using namespace treelip::cli;

namespace {

struct Outcome {
  int code;
  std::string out;
  std::string err;
};

Outcome run_config(const RunConfig& config) {
  std::ostringstream out, err;
  const int code = run(config, out, err);
  return {code, out.str(), err.str()};
}

RunConfig symbol_command(Command c, std::string symbol, std::string tree = "") {
  RunConfig config;
  config.command = c;
  config.symbol_text = std::move(symbol);
  config.tree_source = std::move(tree);
  return config;
}

}  // namespace

TEST_CASE("command names") {
  for (auto c : {Command::gen_tree, Command::norm, Command::classify, Command::spectrum,
                 Command::essnorm, Command::verify_weights, Command::verify_space}) {
    CHECK(parse_command(to_string(c)) == c);
  }
  CHECK_FALSE(parse_command("frobnicate").has_value());
}

TEST_CASE("validation") {
  RunConfig c = symbol_command(Command::classify, "expr = 1");
  CHECK_NOTHROW(validate(c));
  c.k = 0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.k = 8;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.k = 2;
  c.window = 1;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.window = 8;
  c.tolerance = 0.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
  c.tolerance = 1e-3;
  c.symbol_file = "x.sym";
  CHECK_THROWS_AS(validate(c), ConfigError);

  RunConfig none;
  none.command = Command::spectrum;
  CHECK_THROWS_AS(validate(none), ConfigError);
  RunConfig gen;
  gen.command = Command::gen_tree;
  CHECK_THROWS_AS(validate(gen), ConfigError);
  RunConfig norm;
  norm.command = Command::norm;
  CHECK_THROWS_AS(validate(norm), ConfigError);
}

TEST_CASE("gen-tree") {
  RunConfig c;
  c.command = Command::gen_tree;
  c.tree_source = "regular:q=2,depth=6";
  const auto r = run_config(c);
  CHECK(r.code == kExitDefinite);
  CHECK(r.out.rfind("tree v127\n", 0) == 0);
  c.tree_source = "regular:q=2";
  const auto bad = run_config(c);
  CHECK(bad.code == kExitError);
  CHECK(bad.err.rfind("error: ", 0) == 0);
}

TEST_CASE("norm") {
  RunConfig c;
  c.command = Command::norm;
  c.func = "dsl: expr = 1; root = 1";
  const auto r = run_config(c);
  REQUIRE(r.code == kExitDefinite);
  const Json doc = Json::parse(r.out);
  CHECK(doc["schema"] == 1);
  CHECK(doc["command"] == "norm");
  CHECK(doc["report"]["value"] == 1.0);
  CHECK(doc["config"]["k"] == 1);
}

TEST_CASE("norm from a function file") {
  const auto dir = std::filesystem::temp_directory_path() / "treelip_test_cli";
  std::filesystem::create_directories(dir);
  const auto path = (dir / "f.txt").string();
  std::ofstream(path) << "func k=2\n0 1\n1 1\n2 1\n";
  RunConfig c;
  c.command = Command::norm;
  c.func = path;
  c.tree_source = "regular:q=2,depth=2";
  const Json doc = Json::parse(run_config(c).out);
  CHECK(doc["config"]["k"] == 2);
  c.k = 1;
  CHECK(Json::parse(run_config(c).out)["config"]["k"] == 1);
  std::filesystem::remove_all(dir);
}

TEST_CASE("classify") {
  const auto r = run_config(symbol_command(Command::classify, "expr = 0; root = 0"));
  REQUIRE(r.code == kExitDefinite);
  const Json doc = Json::parse(r.out);
  const Json& rep = doc["report"];
  CHECK(rep["bounded_verdict"]["verdict"] == "yes");
  CHECK(rep["compact_verdict"]["verdict"] == "yes");
  CHECK(rep["bounded_below_verdict"]["verdict"] == "no");
  CHECK(doc["tree"]["vertices"] == 257);
  CHECK(doc["config"]["symbol"] == "expr = 0; root = 0");

  // Byte-identical reruns.
  const auto again = run_config(symbol_command(Command::classify, "expr = 0; root = 0"));
  CHECK(again.out == r.out);

  const auto unbounded = run_config(symbol_command(Command::classify, "expr = ell(1, n)"));
  CHECK(unbounded.code == kExitDefinite);
  CHECK(Json::parse(unbounded.out)["report"]["bounded_verdict"]["verdict"] == "no");

  const auto parse_error = run_config(symbol_command(Command::classify, "expr = n +"));
  CHECK(parse_error.code == kExitError);
  CHECK(parse_error.err.find("1:10") != std::string::npos);
}

TEST_CASE("spectrum refusal and pretty output") {
  const auto refused = run_config(symbol_command(Command::spectrum, "expr = 1/n", "regular:q=1,depth=40"));
  CHECK(refused.code == kExitInconclusive);
  CHECK(Json::parse(refused.out)["report"].contains("refused"));

  RunConfig c = symbol_command(Command::spectrum, "expr = 0; patch 1 = 2", "regular:q=2,depth=4");
  const auto ok = run_config(c);
  CHECK(ok.code == kExitDefinite);
  c.pretty = true;
  const auto pretty = run_config(c);
  CHECK(pretty.code == kExitDefinite);
  CHECK(pretty.out.find('{') == std::string::npos);
}

TEST_CASE("essnorm and output file") {
  const auto dir = std::filesystem::temp_directory_path() / "treelip_test_cli_out";
  std::filesystem::create_directories(dir);
  RunConfig c = symbol_command(Command::essnorm, "expr = 2; root = 2");
  c.output = (dir / "out.json").string();
  std::ostringstream out, err;
  CHECK(run(c, out, err) == kExitDefinite);
  CHECK(out.str().empty());
  std::ifstream in(*c.output);
  const Json doc = Json::parse(in);
  CHECK(doc["report"]["lower"] == 2.0);
  CHECK(doc["report"]["upper"] == 2.0);
  CHECK(doc["report"].contains("witness"));
  std::filesystem::remove_all(dir);
}

TEST_CASE("verify commands") {
  RunConfig c;
  c.command = Command::verify_space;
  c.seed = 3;
  const auto r = run_config(c);
  CHECK(r.code == kExitDefinite);
  CHECK(Json::parse(r.out)["pass"] == true);

  c.command = Command::verify_weights;
  c.k = 2;
  c.max_n = 2'000;
  const auto w = run_config(c);
  CHECK(w.code == kExitDefinite);
  const Json doc = Json::parse(w.out);
  CHECK(doc["pass"] == true);
  CHECK(doc["config"]["max_n"] == 2000);
}
