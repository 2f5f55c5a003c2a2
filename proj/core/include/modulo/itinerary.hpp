#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "modulo/sandbox.hpp"

namespace modulo {

class PlanGenerator;

/// One day of an itinerary. Every field is always present; "-" is the
/// canonical empty marker inside string fields and is a present value, not an
/// absent one.
struct DayPlan {
  int day = 0;
  int people_number = 0;
  std::string current_city;     // "CityB" or "from CityA to CityB" on travel days
  std::string transportation;   // grammar below, or "-"
  std::string breakfast;        // "Name, City" or "-"
  std::string attraction;       // semicolon-separated "Name, City" entries or "-"
  std::string lunch;
  std::string dinner;
  std::string accommodation;    // "Name, City" or "-"

  bool operator==(const DayPlan&) const = default;
};

using Itinerary = std::vector<DayPlan>;

enum class ViolationKind { missing_key, wrong_type, malformed_value, bad_day_sequence };

std::string to_string(ViolationKind kind);

struct SchemaViolation {
  std::optional<int> day;  // 1-based day number when attributable
  std::string field;
  ViolationKind kind = ViolationKind::missing_key;
  std::string message;
};

/// Validates a parsed JSON document against the itinerary schema: an array of
/// day objects, each carrying all nine keys with well-typed values, day
/// numbers consecutive from 1, and one people_number across the trip.
/// Violations are data, not errors; an empty list means the document conforms.
std::vector<SchemaViolation> validate_schema(const nlohmann::json& doc);

struct ReformatFailure {
  std::string reason;  // "no_json_found" | "invalid_json" | "schema_violations"
  std::vector<SchemaViolation> violations;
  std::string detail;
};

struct ReformatResult {
  std::optional<Itinerary> plan;
  std::optional<ReformatFailure> failure;
  bool ok() const { return plan.has_value(); }
};

/// Deterministic reformatter: extracts a JSON document from generator text
/// (fenced ```json blocks, or the first balanced array/object), parses it,
/// schema-validates it, and builds the Itinerary. Returns a ReformatFailure
/// instead of throwing; the failure is what fires the Format critic.
ReformatResult parse_plan_text(const std::string& text);

/// Same, with a generator-backed fallback: when deterministic extraction finds
/// no JSON, the generator is asked once per attempt to rewrite the text into
/// schema JSON.
ReformatResult parse_plan_text(const std::string& text, PlanGenerator* rewrite_fallback,
                               int max_rewrites = 1);

/// Canonical serialization: fixed key order (day, people_number, current_city,
/// transportation, breakfast, attraction, lunch, dinner, accommodation),
/// 2-space indent, byte-identical for equal values. parse_plan_text inverts it.
std::string serialize_plan(const Itinerary& it);
nlohmann::json plan_to_json(const Itinerary& it);

// ---------------------------------------------------------------------------
// Field grammars
// ---------------------------------------------------------------------------

/// transportation: "<mode>, from <A> to <B>" with optional
/// ", Flight Number: <id>, Departure Time: <hh:mm>, Arrival Time: <hh:mm>".
/// Keyword match is case-insensitive. Unparseable strings are judged by the
/// Transportation critic, not the Format critic.
struct TransportLeg {
  TransportMode mode = TransportMode::flight;
  std::string from;
  std::string to;
  std::optional<std::string> flight_number;
  std::optional<int> departure_time;  // minutes since midnight
  std::optional<int> arrival_time;
};

std::optional<TransportLeg> parse_transport_field(const std::string& text);
std::string format_transport_field(const TransportLeg& leg);

/// current_city travel-day grammar: "from <A> to <B>" (case-insensitive
/// keywords). Returns nullopt for plain single-city values.
struct CityMove {
  std::string from;
  std::string to;
};
std::optional<CityMove> parse_city_move(const std::string& text);

/// "Name, City" convention used by meal/attraction/accommodation fields.
/// The city part is optional; entries without a comma carry no city.
struct NamedPlace {
  std::string name;
  std::optional<std::string> city;
};
NamedPlace parse_named_place(const std::string& text);

/// Splits a semicolon-separated attraction field into entries ("-" yields
/// an empty list).
std::vector<NamedPlace> parse_attraction_field(const std::string& text);

constexpr const char* kEmptyMarker = "-";
bool is_empty_marker(const std::string& field);

}  // namespace modulo
