#include "doctest.h"

#include <fstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "modulo/itinerary.hpp"
#include "modulo/metacontroller.hpp"
#include "modulo/query.hpp"
#include "support/fixtures.hpp"
#include "support/process.hpp"

using namespace modulo;
using modulo::test::ProcessResult;
using modulo::test::TempDir;
using modulo::test::mini_sandbox_dir;
using modulo::test::run_process;
using modulo::test::witness_plan;
using modulo::test::witness_query;

namespace {

ProcessResult cli(std::vector<std::string> args) {
  args.insert(args.begin(), MODULO_CLI_PATH);
  return run_process(args);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  REQUIRE(out.good());
  out << content;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

std::size_t count_lines(const std::string& text) {
  std::size_t n = 0;
  for (char c : text)
    if (c == '\n') ++n;
  return n;
}

std::string witness_query_line() { return query_to_json(witness_query()).dump(); }

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("plan with the greedy generator solves the witness query") {
  TempDir tmp;
  write_text(tmp.file("query.jsonl"), witness_query_line() + "\n");

  ProcessResult result = cli({"plan", "--sandbox", mini_sandbox_dir().string(), "--queries",
                              tmp.file("query.jsonl").string(), "--generator", "greedy",
                              "--out", tmp.file("out").string()});
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("all_passed: yes") != std::string::npos);

  SessionResult session = load_session(tmp.file("out") / "session.jsonl");
  CHECK(session.all_passed);
  CHECK(session.iterations_used == 1);

  ReformatResult plan = parse_plan_text(read_text(tmp.file("out") / "plan.json"));
  REQUIRE(plan.plan.has_value());
  CHECK(*plan.plan == witness_plan());
}

TEST_CASE("plan accepts a natural-language query inline") {
  TempDir tmp;
  ProcessResult result =
      cli({"plan", "--sandbox", mini_sandbox_dir().string(), "--query",
           "Can you create a travel plan for 1 person departing from CityA and heading to "
           "CityB for 2 days, from March 13th to March 14th, 2022, with a budget of $10,000?",
           "--nl", "--generator", "greedy", "--out", tmp.file("out").string()});
  CHECK(result.exit_code == 0);
  CHECK(result.output.find("all_passed: yes") != std::string::npos);
}

TEST_CASE("plan exits nonzero when the script never produces a plan") {
  TempDir tmp;
  write_text(tmp.file("query.jsonl"), witness_query_line() + "\n");
  write_text(tmp.file("script.txt"), "I would rather chat about the weather.\n");

  ProcessResult result = cli({"plan", "--sandbox", mini_sandbox_dir().string(), "--queries",
                              tmp.file("query.jsonl").string(), "--generator",
                              "scripted:" + tmp.file("script.txt").string(), "--out",
                              tmp.file("out").string()});
  CHECK(result.exit_code == 1);
  CHECK(result.output.find("all_passed: no") != std::string::npos);

  std::string trace = read_text(tmp.file("out") / "session.jsonl");
  CHECK(count_lines(trace) == 12);
  CHECK_FALSE(std::filesystem::exists(tmp.file("out") / "plan.json"));
}

TEST_CASE("eval over the synthetic corpus reports a perfect greedy run") {
  TempDir tmp;
  modulo::test::build_corpus_sandbox(tmp.file("sandbox"));
  modulo::test::write_corpus_queries(tmp.file("queries.jsonl"), 20);

  ProcessResult result = cli({"eval", "--sandbox", tmp.file("sandbox").string(), "--queries",
                              tmp.file("queries.jsonl").string(), "--generator", "greedy",
                              "--out", tmp.file("out").string()});
  CHECK(result.exit_code == 0);

  nlohmann::json report = nlohmann::json::parse(read_text(tmp.file("out") / "report.json"));
  CHECK(report["corpus_size"] == 20);
  CHECK(report["delivery_rate"] == 100.0);
  CHECK(report["final_pass_rate"] == 100.0);

  for (const char* name : {"report.json", "report.csv", "report.md", "frequency.csv",
                           "cooccurrence.csv", "pass_by_iteration.csv", "session_001.jsonl",
                           "session_020.jsonl"}) {
    CHECK(std::filesystem::exists(tmp.file("out") / name));
  }
  CHECK_FALSE(std::filesystem::exists(tmp.file("out") / "session_021.jsonl"));

  ProcessResult rerun = cli({"eval", "--sandbox", tmp.file("sandbox").string(), "--queries",
                             tmp.file("queries.jsonl").string(), "--generator", "greedy",
                             "--jobs", "4", "--out", tmp.file("out2").string()});
  CHECK(rerun.exit_code == 0);
  CHECK(read_text(tmp.file("out2") / "report.json") ==
        read_text(tmp.file("out") / "report.json"));
  CHECK(read_text(tmp.file("out2") / "session_007.jsonl") ==
        read_text(tmp.file("out") / "session_007.jsonl"));
}

TEST_CASE("check prints one verdict line per critic") {
  TempDir tmp;
  write_text(tmp.file("plan.json"), serialize_plan(witness_plan()) + "\n");

  ProcessResult pass = cli({"check", tmp.file("plan.json").string(), "--sandbox",
                            mini_sandbox_dir().string(), "--query", witness_query_line()});
  CHECK(pass.exit_code == 0);
  CHECK(count_lines(pass.output) == 9);
  CHECK(pass.output.find("fail") == std::string::npos);
  CHECK(pass.output.find("valid_format\tformat\tpass") != std::string::npos);

  Query tight = witness_query();
  tight.budget = Money::from_dollars(150);
  ProcessResult fail = cli({"check", tmp.file("plan.json").string(), "--sandbox",
                            mini_sandbox_dir().string(), "--query",
                            query_to_json(tight).dump()});
  CHECK(fail.exit_code == 1);
  CHECK(fail.output.find("valid_cost\thard\tfail\t[valid_cost]") != std::string::npos);

  write_text(tmp.file("garbled.txt"), "no plan here, only prose\n");
  ProcessResult malformed = cli({"check", tmp.file("garbled.txt").string(), "--sandbox",
                                 mini_sandbox_dir().string(), "--query", witness_query_line()});
  CHECK(malformed.exit_code == 1);
  CHECK(count_lines(malformed.output) == 1);
  CHECK(malformed.output.find("valid_format\tformat\tfail") != std::string::npos);
}

TEST_CASE("stats tallies firings and pass-by-iteration from trace files") {
  TempDir tmp;
  write_text(tmp.file("query.jsonl"), witness_query_line() + "\n");
  Query tight = witness_query();
  tight.budget = Money::from_dollars(150);
  write_text(tmp.file("tight.jsonl"), query_to_json(tight).dump() + "\n");
  write_text(tmp.file("script.txt"), serialize_plan(witness_plan()) + "\n");

  ProcessResult ok = cli({"plan", "--sandbox", mini_sandbox_dir().string(), "--queries",
                          tmp.file("query.jsonl").string(), "--generator", "greedy", "--out",
                          tmp.file("a").string()});
  REQUIRE(ok.exit_code == 0);
  ProcessResult stuck = cli({"plan", "--sandbox", mini_sandbox_dir().string(), "--queries",
                             tmp.file("tight.jsonl").string(), "--generator",
                             "scripted:" + tmp.file("script.txt").string(), "--out",
                             tmp.file("b").string()});
  REQUIRE(stuck.exit_code == 1);

  ProcessResult stats = cli({"stats", "--out", tmp.file("stats").string(),
                             (tmp.file("a") / "session.jsonl").string(),
                             (tmp.file("b") / "session.jsonl").string()});
  CHECK(stats.exit_code == 0);

  std::string freq = read_text(tmp.file("stats") / "frequency.csv");
  CHECK(freq.find("valid_cost,10") != std::string::npos);
  CHECK(freq.find("valid_format,0") != std::string::npos);

  std::string passes = read_text(tmp.file("stats") / "pass_by_iteration.csv");
  CHECK(passes.find("1,50") != std::string::npos);
  CHECK(std::filesystem::exists(tmp.file("stats") / "cooccurrence.csv"));

  ProcessResult missing = cli({"stats", "--out", tmp.file("stats").string(),
                               tmp.file("no_such_trace.jsonl").string()});
  CHECK(missing.exit_code == 2);
  CHECK(missing.output.find("no_such_trace.jsonl") != std::string::npos);
}

TEST_CASE("extract-prompt prints the named critic's prompt") {
  ProcessResult ok = cli({"extract-prompt", "valid_cost"});
  CHECK(ok.exit_code == 0);
  CHECK(ok.output.find("get_total_cost") != std::string::npos);

  ProcessResult unknown = cli({"extract-prompt", "valid_vibes"});
  CHECK(unknown.exit_code == 2);
  CHECK(unknown.output.find("valid_cuisine") != std::string::npos);
}

TEST_CASE("critics list covers the catalog") {
  ProcessResult plain = cli({"critics", "list"});
  CHECK(plain.exit_code == 0);
  CHECK(count_lines(plain.output) == 9);
  CHECK(plain.output.rfind("valid_format\tformat\t", 0) == 0);

  ProcessResult as_json = cli({"critics", "list", "--json"});
  CHECK(as_json.exit_code == 0);
  nlohmann::json catalog = nlohmann::json::parse(as_json.output);
  REQUIRE(catalog.size() == 9);
  CHECK(catalog[0]["id"] == "valid_format");
  CHECK(catalog[8]["group"] == "hard");
}

TEST_CASE("usage errors exit nonzero") {
  CHECK(cli({}).exit_code != 0);
  CHECK(cli({"plan"}).exit_code != 0);
  CHECK(cli({"plan", "--sandbox", "/no/such/dir", "--query", "{}"}).exit_code != 0);

  TempDir tmp;
  ProcessResult no_queries =
      cli({"eval", "--sandbox", mini_sandbox_dir().string(), "--out", tmp.file("o").string()});
  CHECK(no_queries.exit_code == 2);
  CHECK(no_queries.output.find("no queries") != std::string::npos);

  write_text(tmp.file("query.jsonl"), witness_query_line() + "\n");
  ProcessResult bad_generator =
      cli({"plan", "--sandbox", mini_sandbox_dir().string(), "--queries",
           tmp.file("query.jsonl").string(), "--generator", "telepathy"});
  CHECK(bad_generator.exit_code == 2);
  CHECK(bad_generator.output.find("telepathy") != std::string::npos);
}

}  // TEST_SUITE
