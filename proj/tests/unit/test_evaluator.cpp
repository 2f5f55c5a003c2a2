#include "doctest.h"

#include <algorithm>

#include "modulo/evaluator.hpp"
#include "modulo/generator.hpp"
#include "support/fixtures.hpp"

using namespace modulo;
using modulo::test::mini_sandbox;
using modulo::test::witness_plan;
using modulo::test::witness_query;

namespace {

ConstraintInstance ci(const std::string& id, CriticGroup group, bool passed) {
  return ConstraintInstance{id, group, passed};
}

std::vector<ConstraintInstance> instances(int commonsense_pass, int commonsense_fail,
                                          int hard_pass, int hard_fail) {
  std::vector<ConstraintInstance> out;
  int n = 0;
  for (int i = 0; i < commonsense_pass; ++i)
    out.push_back(ci("cs_" + std::to_string(n++), CriticGroup::commonsense, true));
  for (int i = 0; i < commonsense_fail; ++i)
    out.push_back(ci("cs_" + std::to_string(n++), CriticGroup::commonsense, false));
  for (int i = 0; i < hard_pass; ++i)
    out.push_back(ci("hard_" + std::to_string(n++), CriticGroup::hard, true));
  for (int i = 0; i < hard_fail; ++i)
    out.push_back(ci("hard_" + std::to_string(n++), CriticGroup::hard, false));
  return out;
}

SessionResult scripted_session(const Query& q, const std::string& reply,
                               CriticSelector selector = CriticSelector::All) {
  ScriptedGenerator gen({reply});
  return run_session(q, gen, selector, mini_sandbox());
}

std::size_t id_index(const EvalReport& report, const std::string& id) {
  for (std::size_t i = 0; i < report.cooccurrence_ids.size(); ++i) {
    if (report.cooccurrence_ids[i] == id) return i;
  }
  REQUIRE(false);
  return 0;
}

}  // namespace

TEST_SUITE("evaluator") {

TEST_CASE("micro pools instances while macro counts whole queries") {
  std::vector<QueryOutcome> outcomes = {
      QueryOutcome{true, 2, instances(8, 0, 2, 0)},
      QueryOutcome{true, 3, instances(7, 1, 2, 0)},
  };
  EvalReport report;
  aggregate_outcomes(outcomes, 10, report);

  CHECK(report.corpus_size == 2);
  CHECK(report.delivery_rate == doctest::Approx(100.0));
  CHECK(report.commonsense_micro == doctest::Approx(93.75));
  CHECK(report.commonsense_macro == doctest::Approx(50.0));
  CHECK(report.hard_micro == doctest::Approx(100.0));
  CHECK(report.hard_macro == doctest::Approx(100.0));
  CHECK(report.final_pass_rate == doctest::Approx(50.0));

  REQUIRE(report.pass_by_iteration.size() == 10);
  CHECK(report.pass_by_iteration[0] == doctest::Approx(0.0));
  CHECK(report.pass_by_iteration[1] == doctest::Approx(50.0));
  CHECK(report.pass_by_iteration[9] == doctest::Approx(50.0));
}

TEST_CASE("undelivered queries fail every applicable instance") {
  std::vector<QueryOutcome> outcomes = {
      QueryOutcome{false, 10, instances(0, 4, 0, 1)},
      QueryOutcome{false, 10, instances(0, 4, 0, 1)},
  };
  EvalReport report;
  aggregate_outcomes(outcomes, 10, report);
  CHECK(report.delivery_rate == doctest::Approx(0.0));
  CHECK(report.commonsense_micro == doctest::Approx(0.0));
  CHECK(report.commonsense_macro == doctest::Approx(0.0));
  CHECK(report.hard_micro == doctest::Approx(0.0));
  CHECK(report.hard_macro == doctest::Approx(0.0));
  CHECK(report.final_pass_rate == doctest::Approx(0.0));
  for (double rate : report.pass_by_iteration) CHECK(rate == doctest::Approx(0.0));
}

TEST_CASE("a clean corpus scores 100 everywhere") {
  std::vector<QueryOutcome> outcomes = {QueryOutcome{true, 1, instances(4, 0, 3, 0)}};
  EvalReport report;
  aggregate_outcomes(outcomes, 10, report);
  CHECK(report.delivery_rate == doctest::Approx(100.0));
  CHECK(report.commonsense_micro == doctest::Approx(100.0));
  CHECK(report.commonsense_macro == doctest::Approx(100.0));
  CHECK(report.hard_micro == doctest::Approx(100.0));
  CHECK(report.hard_macro == doctest::Approx(100.0));
  CHECK(report.final_pass_rate == doctest::Approx(100.0));
  for (double rate : report.pass_by_iteration) CHECK(rate == doctest::Approx(100.0));
}

TEST_CASE("an empty group reads as 100, not division by zero") {
  std::vector<QueryOutcome> outcomes = {QueryOutcome{true, 1, instances(4, 0, 0, 0)}};
  EvalReport report;
  aggregate_outcomes(outcomes, 5, report);
  CHECK(report.hard_micro == doctest::Approx(100.0));
  CHECK(report.hard_macro == doctest::Approx(100.0));
}

TEST_CASE("metrics ignore outcome order") {
  std::vector<QueryOutcome> outcomes = {
      QueryOutcome{true, 1, instances(4, 0, 1, 0)},
      QueryOutcome{true, 4, instances(3, 1, 1, 1)},
      QueryOutcome{false, 10, instances(0, 4, 0, 1)},
  };
  EvalReport forward, backward;
  aggregate_outcomes(outcomes, 10, forward);
  std::reverse(outcomes.begin(), outcomes.end());
  aggregate_outcomes(outcomes, 10, backward);
  CHECK(forward.delivery_rate == backward.delivery_rate);
  CHECK(forward.commonsense_micro == backward.commonsense_micro);
  CHECK(forward.commonsense_macro == backward.commonsense_macro);
  CHECK(forward.hard_micro == backward.hard_micro);
  CHECK(forward.hard_macro == backward.hard_macro);
  CHECK(forward.final_pass_rate == backward.final_pass_rate);
  CHECK(forward.pass_by_iteration == backward.pass_by_iteration);
}

TEST_CASE("pass_by_iteration is nondecreasing and ends at the final rate") {
  std::vector<QueryOutcome> outcomes = {
      QueryOutcome{true, 1, instances(2, 0, 1, 0)},
      QueryOutcome{true, 4, instances(2, 0, 1, 0)},
      QueryOutcome{true, 9, instances(2, 0, 1, 0)},
      QueryOutcome{true, 10, instances(2, 0, 0, 1)},
  };
  EvalReport report;
  aggregate_outcomes(outcomes, 10, report);
  for (std::size_t k = 1; k < report.pass_by_iteration.size(); ++k) {
    CHECK(report.pass_by_iteration[k] >= report.pass_by_iteration[k - 1]);
  }
  CHECK(report.pass_by_iteration.back() == doctest::Approx(report.final_pass_rate));
  CHECK(report.pass_by_iteration[0] == doctest::Approx(25.0));
  CHECK(report.pass_by_iteration[3] == doctest::Approx(50.0));
  CHECK(report.pass_by_iteration[8] == doctest::Approx(75.0));
}

TEST_CASE("applicable constraints follow the query's stated preferences") {
  auto ids_of = [](const Query& q) {
    std::vector<std::string> ids;
    for (const auto& info : applicable_constraints(q)) ids.push_back(info.id);
    return ids;
  };

  CHECK(ids_of(witness_query()) ==
        std::vector<std::string>{"complete_information", "diverse_restaurants",
                                 "diverse_attractions", "is_valid_information", "valid_cost"});

  Query full = witness_query();
  full.local_constraint = LocalConstraint{};
  full.local_constraint->room_type = "entire room";
  full.local_constraint->house_rule = "pets";
  full.local_constraint->cuisine = std::vector<std::string>{"French"};
  full.local_constraint->transportation = "no flight";
  CHECK(ids_of(full) == std::vector<std::string>{
                            "complete_information", "diverse_restaurants", "diverse_attractions",
                            "is_valid_information", "valid_cost", "is_valid_accommodation",
                            "valid_cuisine", "valid_transportation"});

  Query house_only = witness_query();
  house_only.local_constraint = LocalConstraint{};
  house_only.local_constraint->house_rule = "parties";
  CHECK(ids_of(house_only) ==
        std::vector<std::string>{"complete_information", "diverse_restaurants",
                                 "diverse_attractions", "is_valid_information", "valid_cost",
                                 "is_valid_accommodation"});

  Query cuisine_only = witness_query();
  cuisine_only.local_constraint = LocalConstraint{};
  cuisine_only.local_constraint->cuisine = std::vector<std::string>{"Italian"};
  CHECK(ids_of(cuisine_only) ==
        std::vector<std::string>{"complete_information", "diverse_restaurants",
                                 "diverse_attractions", "is_valid_information", "valid_cost",
                                 "valid_cuisine"});
}

TEST_CASE("corpus evaluation re-judges final plans and tallies firings") {
  Query tight = witness_query();
  tight.budget = Money::from_dollars(150);
  std::vector<SessionResult> sessions = {
      scripted_session(witness_query(), serialize_plan(witness_plan())),
      scripted_session(tight, serialize_plan(witness_plan())),
  };

  EvalReport report = evaluate_corpus(sessions, mini_sandbox());
  CHECK(report.corpus_size == 2);
  CHECK(report.delivery_rate == doctest::Approx(100.0));
  CHECK(report.commonsense_micro == doctest::Approx(100.0));
  CHECK(report.commonsense_macro == doctest::Approx(100.0));
  CHECK(report.hard_micro == doctest::Approx(50.0));
  CHECK(report.hard_macro == doctest::Approx(50.0));
  CHECK(report.final_pass_rate == doctest::Approx(50.0));
  REQUIRE(report.pass_by_iteration.size() == 10);
  CHECK(report.pass_by_iteration[0] == doctest::Approx(50.0));
  CHECK(report.pass_by_iteration[9] == doctest::Approx(50.0));

  CHECK(report.critic_frequency.size() == 9);
  CHECK(report.critic_frequency.at("valid_cost") == 10);
  CHECK(report.critic_frequency.at("valid_format") == 0);
  CHECK(report.critic_frequency.at("complete_information") == 0);

  std::size_t cost = id_index(report, "valid_cost");
  CHECK(report.cooccurrence[cost][cost] == 10);
  std::size_t format = id_index(report, "valid_format");
  CHECK(report.cooccurrence[format][format] == 0);
  CHECK(report.cooccurrence[cost][format] == 0);

  REQUIRE(report.per_query.size() == 2);
  CHECK(report.per_query[0].delivered);
  CHECK(report.per_query[0].iterations_used == 1);
  CHECK(report.per_query[1].iterations_used == 10);
}

TEST_CASE("final metrics are judged under the full critic set even for narrow sessions") {
  Query tight = witness_query();
  tight.budget = Money::from_dollars(150);
  SessionResult session = scripted_session(tight, serialize_plan(witness_plan()),
                                           CriticSelector::Json);
  CHECK(session.all_passed);
  CHECK(session.iterations_used == 1);

  EvalReport report = evaluate_corpus({session}, mini_sandbox());
  CHECK(report.delivery_rate == doctest::Approx(100.0));
  CHECK(report.final_pass_rate == doctest::Approx(0.0));
  CHECK(report.hard_micro == doctest::Approx(0.0));
  CHECK(report.critic_frequency.at("valid_cost") == 0);
}

TEST_CASE("delivered outcomes carry one instance per applicable constraint") {
  SessionResult session = scripted_session(witness_query(), serialize_plan(witness_plan()));
  EvalReport report = evaluate_corpus({session}, mini_sandbox());
  REQUIRE(report.per_query.size() == 1);
  const QueryOutcome& outcome = report.per_query[0];
  CHECK(outcome.delivered);

  auto expected = applicable_constraints(witness_query());
  REQUIRE(outcome.instances.size() == expected.size());
  for (std::size_t i = 0; i < expected.size(); ++i) {
    CHECK(outcome.instances[i].id == expected[i].id);
    CHECK(outcome.instances[i].group == expected[i].group);
    CHECK(outcome.instances[i].passed);
  }
}

TEST_CASE("undelivered sessions synthesize failed instances") {
  SessionResult session = scripted_session(witness_query(), "never a plan, sorry");
  CHECK_FALSE(session.delivered);

  EvalReport report = evaluate_corpus({session}, mini_sandbox());
  CHECK(report.delivery_rate == doctest::Approx(0.0));
  CHECK(report.final_pass_rate == doctest::Approx(0.0));
  REQUIRE(report.per_query.size() == 1);
  CHECK(report.per_query[0].instances.size() == 5);
  for (const auto& inst : report.per_query[0].instances) CHECK_FALSE(inst.passed);
  CHECK(report.critic_frequency.at("valid_format") == 10);
}

TEST_CASE("co-occurrence counts critics that fire in the same iteration") {
  Query picky = witness_query();
  picky.budget = Money::from_dollars(150);
  picky.local_constraint = LocalConstraint{};
  picky.local_constraint->cuisine = std::vector<std::string>{"French"};
  SessionResult session = scripted_session(picky, serialize_plan(witness_plan()));

  EvalReport report = evaluate_corpus({session}, mini_sandbox());
  std::size_t cost = id_index(report, "valid_cost");
  std::size_t cuisine = id_index(report, "valid_cuisine");
  CHECK(report.critic_frequency.at("valid_cost") == 10);
  CHECK(report.critic_frequency.at("valid_cuisine") == 10);
  CHECK(report.cooccurrence[cost][cuisine] == 10);
  CHECK(report.cooccurrence[cuisine][cost] == 10);
  CHECK(report.cooccurrence[cost][cost] == 10);
  CHECK(report.cooccurrence[cuisine][cuisine] == 10);
  std::size_t format = id_index(report, "valid_format");
  CHECK(report.cooccurrence[cost][format] == 0);
}

TEST_CASE("percent rendering strips trailing zeros") {
  CHECK(render_percent(100.0) == "100");
  CHECK(render_percent(84.9) == "84.9");
  CHECK(render_percent(93.75) == "93.75");
  CHECK(render_percent(25.6) == "25.6");
  CHECK(render_percent(0.0) == "0");
  CHECK(render_percent(50.0) == "50");
  CHECK(render_percent(100.0 / 3.0) == "33.33");
}

TEST_CASE("markdown and csv reports list the six columns in order") {
  EvalReport report;
  report.corpus_size = 180;
  report.delivery_rate = 100.0;
  report.commonsense_micro = 84.9;
  report.commonsense_macro = 25.6;
  report.hard_micro = 51.9;
  report.hard_macro = 24.4;
  report.final_pass_rate = 4.4;

  std::string md = render_report(report, ReportFormat::markdown);
  CHECK(md ==
        "| Delivery Rate | Commonsense (micro) | Commonsense (macro) | Hard (micro) | "
        "Hard (macro) | Final Pass Rate |\n"
        "| --- | --- | --- | --- | --- | --- |\n"
        "| 100 | 84.9 | 25.6 | 51.9 | 24.4 | 4.4 |\n");

  std::string csv = render_report(report, ReportFormat::csv);
  CHECK(csv ==
        "delivery_rate,commonsense_micro,commonsense_macro,hard_micro,hard_macro,"
        "final_pass_rate\n100,84.9,25.6,51.9,24.4,4.4\n");

  std::string json_text = render_report(report, ReportFormat::json);
  nlohmann::json parsed = nlohmann::json::parse(json_text);
  CHECK(parsed["delivery_rate"] == 100.0);
  CHECK(parsed["commonsense"]["micro"] == 84.9);
}

TEST_CASE("analytics CSVs are shaped for spreadsheets") {
  Query tight = witness_query();
  tight.budget = Money::from_dollars(150);
  SessionResult session = scripted_session(tight, serialize_plan(witness_plan()));
  EvalReport report = evaluate_corpus({session}, mini_sandbox());

  std::string freq = render_frequency_csv(report);
  CHECK(freq.rfind("critic_id,fired\n", 0) == 0);
  CHECK(freq.find("valid_cost,10") != std::string::npos);
  CHECK(freq.find("valid_format,0") != std::string::npos);

  std::string cooc = render_cooccurrence_csv(report);
  CHECK(cooc.rfind("critic_id,valid_format,", 0) == 0);
  CHECK(cooc.find("\nvalid_cost,") != std::string::npos);

  std::string passes = render_pass_by_iteration_csv(report);
  CHECK(passes.rfind("iteration,pass_rate\n", 0) == 0);
  CHECK(passes.find("1,0\n") != std::string::npos);
  CHECK(passes.find("10,0\n") != std::string::npos);
}

TEST_CASE("reports round-trip through JSON") {
  Query tight = witness_query();
  tight.budget = Money::from_dollars(150);
  std::vector<SessionResult> sessions = {
      scripted_session(witness_query(), serialize_plan(witness_plan())),
      scripted_session(tight, serialize_plan(witness_plan())),
  };
  EvalReport report = evaluate_corpus(sessions, mini_sandbox());
  EvalReport back = report_from_json(report_to_json(report));
  CHECK(back == report);

  EvalReport reparsed = report_from_json(nlohmann::json::parse(report_to_json(report).dump()));
  CHECK(reparsed == report);
}

}  // TEST_SUITE
