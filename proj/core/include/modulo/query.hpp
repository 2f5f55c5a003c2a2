#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "modulo/dates.hpp"
#include "modulo/money.hpp"

namespace modulo {

class PlanGenerator;

/// Per-query preferences. Absent members mean "no preference stated".
struct LocalConstraint {
  std::optional<std::string> house_rule;             // e.g. "parties", "pets"
  std::optional<std::vector<std::string>> cuisine;   // e.g. {"Mexican"}
  std::optional<std::string> room_type;              // e.g. "entire room"
  std::optional<std::string> transportation;         // "no flight" | "no self-driving"

  bool empty() const { return !house_rule && !cuisine && !room_type && !transportation; }
  bool operator==(const LocalConstraint&) const = default;
};

struct Query {
  std::string org;
  std::string dest;
  int days = 0;
  int visiting_city_number = 1;
  int people_number = 1;
  std::optional<LocalConstraint> local_constraint;
  Money budget;
  std::vector<Date> date_range;  // one entry per day

  bool operator==(const Query&) const = default;
};

/// Checks Query invariants (days >= 1, budget > 0, |date_range| = days, ...);
/// returns a message for the first violation, nullopt when all hold.
std::optional<std::string> check_query_invariants(const Query& q);

/// Parses the templated natural-language query phrasing, e.g.
///
///   "Can you create a travel plan for 1 person departing from Washington
///    and heading to Myrtle Beach for 3 days, from March 13th to March 15th,
///    2022, with a budget of $1,400?"
///
/// Constraint clauses: "with a preference for Mexican cuisine", "staying in
/// an entire room", "the accommodation should allow parties", "no flight" /
/// "no self-driving". Throws ParseError naming the first unmatched clause.
Query parse_query(const std::string& text);

/// Recovers Query fields from free text. Tries parse_query first; when the
/// deterministic grammar does not match, asks the generator to emit the fields
/// as JSON and validates the reply, retrying up to max_extract_retries times.
/// Throws ExtractionError when no reply passes the invariants.
Query extract_query_fields(const std::string& text, PlanGenerator& gen,
                           int max_extract_retries = 2);

/// Prompt sent by extract_query_fields; exposed for tests and offline use.
std::string query_extraction_prompt(const std::string& text);

nlohmann::json query_to_json(const Query& q);
Query query_from_json(const nlohmann::json& j);  // throws ParseError on invariant violation

/// JSON-lines corpus, one structured query per line. Blank lines are skipped.
std::vector<Query> load_query_file(const std::filesystem::path& path);

}  // namespace modulo
