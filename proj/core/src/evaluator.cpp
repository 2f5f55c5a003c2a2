#include "modulo/evaluator.hpp"

#include <algorithm>
#include <cstdio>
#include <set>

#include "modulo/errors.hpp"

namespace modulo {

namespace {

double percent(std::size_t numerator, std::size_t denominator) {
  if (denominator == 0) return 100.0;
  return 100.0 * static_cast<double>(numerator) / static_cast<double>(denominator);
}

bool group_passed(const QueryOutcome& outcome, CriticGroup group) {
  if (!outcome.delivered) return false;
  return std::all_of(outcome.instances.begin(), outcome.instances.end(),
                     [&](const ConstraintInstance& inst) {
                       return inst.group != group || inst.passed;
                     });
}

bool all_passed(const QueryOutcome& outcome) {
  if (!outcome.delivered) return false;
  return std::all_of(outcome.instances.begin(), outcome.instances.end(),
                     [](const ConstraintInstance& inst) { return inst.passed; });
}

std::size_t catalog_index(const std::vector<std::string>& ids, const std::string& id) {
  return static_cast<std::size_t>(std::find(ids.begin(), ids.end(), id) - ids.begin());
}

}  // namespace

std::vector<CriticInfo> applicable_constraints(const Query& q) {
  std::vector<CriticInfo> out;
  for (const CriticInfo& info : critic_catalog()) {
    switch (info.group) {
      case CriticGroup::format:
        break;  // format gates delivery; it is not a scored constraint
      case CriticGroup::commonsense:
        out.push_back(info);
        break;
      case CriticGroup::hard: {
        bool applicable = false;
        if (info.id == "valid_cost") applicable = true;
        if (q.local_constraint) {
          if (info.id == "is_valid_accommodation")
            applicable = q.local_constraint->room_type.has_value() ||
                         q.local_constraint->house_rule.has_value();
          if (info.id == "valid_cuisine") applicable = q.local_constraint->cuisine.has_value();
          if (info.id == "valid_transportation")
            applicable = q.local_constraint->transportation.has_value();
        }
        if (applicable) out.push_back(info);
        break;
      }
    }
  }
  return out;
}

void aggregate_outcomes(const std::vector<QueryOutcome>& outcomes, int max_k,
                        EvalReport& report) {
  report.corpus_size = outcomes.size();
  report.per_query = outcomes;

  std::size_t delivered = 0, final_pass = 0;
  std::size_t cs_passed = 0, cs_total = 0, hard_passed = 0, hard_total = 0;
  std::size_t cs_macro = 0, hard_macro = 0;
  for (const QueryOutcome& outcome : outcomes) {
    if (outcome.delivered) ++delivered;
    if (all_passed(outcome)) ++final_pass;
    if (group_passed(outcome, CriticGroup::commonsense)) ++cs_macro;
    if (group_passed(outcome, CriticGroup::hard)) ++hard_macro;
    for (const ConstraintInstance& inst : outcome.instances) {
      if (inst.group == CriticGroup::commonsense) {
        ++cs_total;
        if (inst.passed) ++cs_passed;
      } else if (inst.group == CriticGroup::hard) {
        ++hard_total;
        if (inst.passed) ++hard_passed;
      }
    }
  }

  const std::size_t n = outcomes.size();
  report.delivery_rate = n ? percent(delivered, n) : 0.0;
  report.commonsense_micro = n ? percent(cs_passed, cs_total) : 0.0;
  report.commonsense_macro = n ? percent(cs_macro, n) : 0.0;
  report.hard_micro = n ? percent(hard_passed, hard_total) : 0.0;
  report.hard_macro = n ? percent(hard_macro, n) : 0.0;
  report.final_pass_rate = n ? percent(final_pass, n) : 0.0;

  report.pass_by_iteration.assign(static_cast<std::size_t>(std::max(max_k, 0)), 0.0);
  for (int k = 1; k <= max_k; ++k) {
    std::size_t within = 0;
    for (const QueryOutcome& outcome : outcomes) {
      if (all_passed(outcome) && outcome.iterations_used <= k) ++within;
    }
    report.pass_by_iteration[static_cast<std::size_t>(k - 1)] = n ? percent(within, n) : 0.0;
  }
}

EvalReport evaluate_corpus(const std::vector<SessionResult>& sessions, const Sandbox& sb,
                           const CriticOptions& options) {
  EvalReport report;

  // Per-query outcome table, judged under the full critic set.
  std::vector<QueryOutcome> outcomes;
  int max_k = 0;
  for (const SessionResult& session : sessions) {
    max_k = std::max(max_k, session.max_iterations);
    QueryOutcome outcome;
    outcome.iterations_used = session.iterations_used;
    outcome.delivered = session.delivered && session.final_plan.has_value();

    std::vector<CriticInfo> applicable = applicable_constraints(session.query);
    if (!outcome.delivered) {
      for (const CriticInfo& info : applicable)
        outcome.instances.push_back({info.id, info.group, false});
    } else {
      ReformatResult input;
      input.plan = session.final_plan;
      std::vector<CriticVerdict> verdicts =
          run_critics(CriticSelector::All, input, session.query, sb, options);
      for (const CriticInfo& info : applicable) {
        bool passed = false;
        bool found = false;
        for (const CriticVerdict& v : verdicts) {
          if (v.critic_id == info.id) {
            passed = v.passed;
            found = true;
          }
        }
        // A format failure leaves a single verdict; unfound constraints count
        // as failed, which matches judging an unusable plan.
        outcome.instances.push_back({info.id, info.group, found && passed});
      }
    }
    outcomes.push_back(std::move(outcome));
  }
  aggregate_outcomes(outcomes, max_k, report);
  tally_firings(sessions, report);
  return report;
}

void tally_firings(const std::vector<SessionResult>& sessions, EvalReport& report) {
  const auto& catalog = critic_catalog();
  report.critic_frequency.clear();
  report.cooccurrence_ids.clear();
  for (const CriticInfo& info : catalog) {
    report.critic_frequency[info.id] = 0;
    report.cooccurrence_ids.push_back(info.id);
  }
  report.cooccurrence.assign(catalog.size(), std::vector<std::size_t>(catalog.size(), 0));
  for (const SessionResult& session : sessions) {
    for (const IterationTrace& trace : session.traces) {
      std::vector<std::size_t> fired;
      for (const CriticVerdict& v : trace.verdicts) {
        if (v.passed) continue;
        ++report.critic_frequency[v.critic_id];
        fired.push_back(catalog_index(report.cooccurrence_ids, v.critic_id));
      }
      for (std::size_t a : fired)
        for (std::size_t b : fired) report.cooccurrence[a][b] += 1;
    }
  }
}

std::string render_percent(double value) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", value);
  std::string s = buf;
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string render_report(const EvalReport& report, ReportFormat format) {
  if (format == ReportFormat::json) return report_to_json(report).dump(2) + "\n";

  const std::vector<std::pair<std::string, double>> columns = {
      {"Delivery Rate", report.delivery_rate},
      {"Commonsense (micro)", report.commonsense_micro},
      {"Commonsense (macro)", report.commonsense_macro},
      {"Hard (micro)", report.hard_micro},
      {"Hard (macro)", report.hard_macro},
      {"Final Pass Rate", report.final_pass_rate},
  };

  if (format == ReportFormat::csv) {
    std::string out = "delivery_rate,commonsense_micro,commonsense_macro,hard_micro,hard_macro,"
                      "final_pass_rate\n";
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) out += ",";
      out += render_percent(columns[i].second);
    }
    out += "\n";
    return out;
  }

  std::string out = "|";
  for (const auto& [label, value] : columns) out += " " + label + " |";
  out += "\n|";
  for (std::size_t i = 0; i < columns.size(); ++i) out += " --- |";
  out += "\n|";
  for (const auto& [label, value] : columns) out += " " + render_percent(value) + " |";
  out += "\n";
  return out;
}

std::string render_frequency_csv(const EvalReport& report) {
  std::string out = "critic_id,fired\n";
  for (const std::string& id : report.cooccurrence_ids) {
    auto it = report.critic_frequency.find(id);
    std::size_t count = it == report.critic_frequency.end() ? 0 : it->second;
    out += id + "," + std::to_string(count) + "\n";
  }
  return out;
}

std::string render_cooccurrence_csv(const EvalReport& report) {
  std::string out = "critic_id";
  for (const std::string& id : report.cooccurrence_ids) out += "," + id;
  out += "\n";
  for (std::size_t row = 0; row < report.cooccurrence.size(); ++row) {
    out += report.cooccurrence_ids[row];
    for (std::size_t col = 0; col < report.cooccurrence[row].size(); ++col)
      out += "," + std::to_string(report.cooccurrence[row][col]);
    out += "\n";
  }
  return out;
}

std::string render_pass_by_iteration_csv(const EvalReport& report) {
  std::string out = "iteration,pass_rate\n";
  for (std::size_t k = 0; k < report.pass_by_iteration.size(); ++k)
    out += std::to_string(k + 1) + "," + render_percent(report.pass_by_iteration[k]) + "\n";
  return out;
}

nlohmann::json report_to_json(const EvalReport& report) {
  nlohmann::ordered_json j;
  j["corpus_size"] = report.corpus_size;
  j["delivery_rate"] = report.delivery_rate;
  j["commonsense"] = {{"micro", report.commonsense_micro}, {"macro", report.commonsense_macro}};
  j["hard"] = {{"micro", report.hard_micro}, {"macro", report.hard_macro}};
  j["final_pass_rate"] = report.final_pass_rate;

  nlohmann::ordered_json per_query = nlohmann::ordered_json::array();
  for (const QueryOutcome& outcome : report.per_query) {
    nlohmann::ordered_json row;
    row["delivered"] = outcome.delivered;
    row["iterations_used"] = outcome.iterations_used;
    nlohmann::ordered_json instances = nlohmann::ordered_json::array();
    for (const ConstraintInstance& inst : outcome.instances) {
      instances.push_back({{"id", inst.id},
                           {"group", to_string(inst.group)},
                           {"passed", inst.passed}});
    }
    row["instances"] = std::move(instances);
    per_query.push_back(std::move(row));
  }
  j["per_query"] = std::move(per_query);

  nlohmann::ordered_json frequency;
  for (const std::string& id : report.cooccurrence_ids) {
    auto it = report.critic_frequency.find(id);
    frequency[id] = it == report.critic_frequency.end() ? 0 : it->second;
  }
  j["critic_frequency"] = std::move(frequency);
  j["cooccurrence"] = {{"ids", report.cooccurrence_ids}, {"counts", report.cooccurrence}};
  j["pass_by_iteration"] = report.pass_by_iteration;
  return j;
}

EvalReport report_from_json(const nlohmann::json& j) {
  EvalReport report;
  report.corpus_size = j.at("corpus_size").get<std::size_t>();
  report.delivery_rate = j.at("delivery_rate").get<double>();
  report.commonsense_micro = j.at("commonsense").at("micro").get<double>();
  report.commonsense_macro = j.at("commonsense").at("macro").get<double>();
  report.hard_micro = j.at("hard").at("micro").get<double>();
  report.hard_macro = j.at("hard").at("macro").get<double>();
  report.final_pass_rate = j.at("final_pass_rate").get<double>();
  for (const auto& row : j.at("per_query")) {
    QueryOutcome outcome;
    outcome.delivered = row.at("delivered").get<bool>();
    outcome.iterations_used = row.at("iterations_used").get<int>();
    for (const auto& inst : row.at("instances")) {
      ConstraintInstance instance;
      instance.id = inst.at("id").get<std::string>();
      std::string group = inst.at("group").get<std::string>();
      instance.group = group == "hard"          ? CriticGroup::hard
                       : group == "commonsense" ? CriticGroup::commonsense
                                                : CriticGroup::format;
      instance.passed = inst.at("passed").get<bool>();
      outcome.instances.push_back(std::move(instance));
    }
    report.per_query.push_back(std::move(outcome));
  }
  for (const auto& [id, count] : j.at("critic_frequency").items())
    report.critic_frequency[id] = count.get<std::size_t>();
  report.cooccurrence_ids = j.at("cooccurrence").at("ids").get<std::vector<std::string>>();
  report.cooccurrence =
      j.at("cooccurrence").at("counts").get<std::vector<std::vector<std::size_t>>>();
  report.pass_by_iteration = j.at("pass_by_iteration").get<std::vector<double>>();
  return report;
}

}  // namespace modulo
