#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "modulo/critics.hpp"
#include "modulo/metacontroller.hpp"

namespace modulo {

// One applicable constraint instance, judged on a query's final plan.
struct ConstraintInstance {
  std::string id;
  CriticGroup group = CriticGroup::commonsense;
  bool passed = false;

  bool operator==(const ConstraintInstance&) const = default;
};

// Per-query verdict-table row. The metric formulas read only this shape, so
// synthetic tables exercise them independently of the critic catalog.
struct QueryOutcome {
  bool delivered = false;
  int iterations_used = 0;
  std::vector<ConstraintInstance> instances;  // applicable constraints only

  bool operator==(const QueryOutcome&) const = default;
};

struct EvalReport {
  std::size_t corpus_size = 0;
  double delivery_rate = 0.0;
  double commonsense_micro = 0.0;
  double commonsense_macro = 0.0;
  double hard_micro = 0.0;
  double hard_macro = 0.0;
  double final_pass_rate = 0.0;
  std::vector<QueryOutcome> per_query;
  std::map<std::string, std::size_t> critic_frequency;   // over the full catalog
  std::vector<std::string> cooccurrence_ids;             // registry order
  std::vector<std::vector<std::size_t>> cooccurrence;    // (C1,C2) fired together; diag = firings
  std::vector<double> pass_by_iteration;                 // entry k-1: pass rate within <= k

  bool operator==(const EvalReport&) const = default;
};

// The constraints that count for a query: every commonsense critic, plus the
// hard critics the query's local_constraint activates (budget always counts).
std::vector<CriticInfo> applicable_constraints(const Query& q);

// Fills the six metric columns, per_query, and pass_by_iteration (length
// max_k) from an outcome table. A query passes a group when it is delivered
// and every instance of that group passed; micro rates pool instances across
// the corpus. Zero-instance denominators read as 100.
void aggregate_outcomes(const std::vector<QueryOutcome>& outcomes, int max_k,
                        EvalReport& report);

// Full corpus evaluation: re-judges every final plan under the complete critic
// set (the sandbox is needed for exactly that), then aggregates metrics,
// firing frequencies and co-occurrence over all iterations of all sessions.
EvalReport evaluate_corpus(const std::vector<SessionResult>& sessions, const Sandbox& sb,
                           const CriticOptions& options = {});

// Fills critic_frequency, cooccurrence_ids, and cooccurrence from the traces
// alone. Needs no sandbox, so trace files can be analyzed after the fact.
void tally_firings(const std::vector<SessionResult>& sessions, EvalReport& report);

enum class ReportFormat { json, csv, markdown };

// Percentage rendering used in every report: two decimals, trailing zeros and
// dot stripped ("100", "84.9", "93.75").
std::string render_percent(double value);

std::string render_report(const EvalReport& report, ReportFormat format);
std::string render_frequency_csv(const EvalReport& report);
std::string render_cooccurrence_csv(const EvalReport& report);
std::string render_pass_by_iteration_csv(const EvalReport& report);

nlohmann::json report_to_json(const EvalReport& report);
EvalReport report_from_json(const nlohmann::json& j);

}  // namespace modulo
