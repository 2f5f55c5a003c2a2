#include "modulo/itinerary.hpp"

#include <algorithm>
#include <cctype>

#include "modulo/errors.hpp"
#include "modulo/generator.hpp"

namespace modulo {

namespace {

std::string trim(std::string_view s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

std::string fold(std::string_view s) {
  std::string out = trim(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool starts_with_ci(std::string_view text, std::string_view prefix) {
  if (text.size() < prefix.size()) return false;
  for (std::size_t i = 0; i < prefix.size(); ++i) {
    if (std::tolower(static_cast<unsigned char>(text[i])) !=
        std::tolower(static_cast<unsigned char>(prefix[i])))
      return false;
  }
  return true;
}

std::vector<std::string> split_trimmed(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find(sep, start);
    std::string piece = pos == std::string::npos ? text.substr(start)
                                                 : text.substr(start, pos - start);
    out.push_back(trim(piece));
    if (pos == std::string::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

bool is_empty_marker(const std::string& field) { return trim(field) == kEmptyMarker; }

std::string to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::missing_key: return "missing_key";
    case ViolationKind::wrong_type: return "wrong_type";
    case ViolationKind::malformed_value: return "malformed_value";
    case ViolationKind::bad_day_sequence: return "bad_day_sequence";
  }
  return "malformed_value";
}

// ---------------------------------------------------------------------------
// Schema validation
// ---------------------------------------------------------------------------

namespace {

constexpr const char* kStringKeys[] = {"current_city", "transportation", "breakfast",
                                       "attraction",   "lunch",          "dinner",
                                       "accommodation"};

}  // namespace

std::vector<SchemaViolation> validate_schema(const nlohmann::json& doc) {
  std::vector<SchemaViolation> out;
  if (!doc.is_array()) {
    out.push_back({std::nullopt, "$", ViolationKind::wrong_type,
                   "top-level value must be an array of day objects"});
    return out;
  }
  std::optional<long long> people;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    const auto& entry = doc[i];
    int day_number = static_cast<int>(i) + 1;
    if (!entry.is_object()) {
      out.push_back({day_number, "$", ViolationKind::wrong_type,
                     "day " + std::to_string(day_number) + " must be an object"});
      continue;
    }
    // integer keys
    for (const char* key : {"day", "people_number"}) {
      if (!entry.contains(key)) {
        out.push_back({day_number, key, ViolationKind::missing_key,
                       "day " + std::to_string(day_number) + " is missing key '" + key + "'"});
      } else if (!entry[key].is_number_integer()) {
        out.push_back({day_number, key, ViolationKind::wrong_type,
                       "day " + std::to_string(day_number) + " key '" + key +
                           "' must be an integer"});
      } else if (entry[key].get<long long>() < 1) {
        out.push_back({day_number, key, ViolationKind::malformed_value,
                       "day " + std::to_string(day_number) + " key '" + key +
                           "' must be at least 1"});
      }
    }
    for (const char* key : kStringKeys) {
      if (!entry.contains(key)) {
        out.push_back({day_number, key, ViolationKind::missing_key,
                       "day " + std::to_string(day_number) + " is missing key '" + key + "'"});
      } else if (!entry[key].is_string()) {
        out.push_back({day_number, key, ViolationKind::wrong_type,
                       "day " + std::to_string(day_number) + " key '" + key +
                           "' must be a string"});
      } else if (trim(entry[key].get<std::string>()).empty()) {
        out.push_back({day_number, key, ViolationKind::malformed_value,
                       "day " + std::to_string(day_number) + " key '" + key +
                           "' is empty; use \"-\" when there is nothing to plan"});
      }
    }
    if (entry.contains("day") && entry["day"].is_number_integer() &&
        entry["day"].get<long long>() != day_number) {
      out.push_back({day_number, "day", ViolationKind::bad_day_sequence,
                     "day numbers must run 1.." + std::to_string(doc.size()) +
                         " consecutively; position " + std::to_string(day_number) + " has day " +
                         std::to_string(entry["day"].get<long long>())});
    }
    if (entry.contains("people_number") && entry["people_number"].is_number_integer() &&
        entry["people_number"].get<long long>() >= 1) {
      long long value = entry["people_number"].get<long long>();
      if (!people) {
        people = value;
      } else if (*people != value) {
        out.push_back({day_number, "people_number", ViolationKind::malformed_value,
                       "people_number must match across days (day " + std::to_string(day_number) +
                           " has " + std::to_string(value) + ", day 1 has " +
                           std::to_string(*people) + ")"});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// JSON extraction from generator text
// ---------------------------------------------------------------------------

namespace {

// Finds the end of a balanced JSON array/object starting at `start`,
// respecting string literals and escapes. Returns npos when unbalanced.
std::size_t find_balanced_end(const std::string& text, std::size_t start) {
  char open = text[start];
  char close = open == '[' ? ']' : '}';
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = start; i < text.size(); ++i) {
    char c = text[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') in_string = true;
    else if (c == open) ++depth;
    else if (c == close && --depth == 0) return i;
  }
  return std::string::npos;
}

struct Extracted {
  std::optional<nlohmann::json> doc;
  bool saw_candidate = false;
};

Extracted try_parse_span(const std::string& text) {
  Extracted result;
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '[' && text[i] != '{') continue;
    result.saw_candidate = true;
    std::size_t end = find_balanced_end(text, i);
    if (end == std::string::npos) continue;
    nlohmann::json parsed =
        nlohmann::json::parse(text.substr(i, end - i + 1), nullptr, /*allow_exceptions=*/false);
    if (!parsed.is_discarded()) {
      result.doc = std::move(parsed);
      return result;
    }
  }
  return result;
}

Extracted extract_json_document(const std::string& text) {
  // Fenced blocks first: generators habitually wrap the plan in ``` fences.
  Extracted best;
  std::size_t pos = 0;
  while ((pos = text.find("```", pos)) != std::string::npos) {
    std::size_t content_start = text.find('\n', pos + 3);
    if (content_start == std::string::npos) break;
    std::size_t fence_end = text.find("```", content_start);
    if (fence_end == std::string::npos) break;
    Extracted attempt =
        try_parse_span(text.substr(content_start + 1, fence_end - content_start - 1));
    best.saw_candidate |= attempt.saw_candidate;
    if (attempt.doc) return attempt;
    pos = fence_end + 3;
  }
  Extracted whole = try_parse_span(text);
  whole.saw_candidate |= best.saw_candidate;
  return whole;
}

Itinerary itinerary_from_json(const nlohmann::json& doc) {
  Itinerary it;
  for (const auto& entry : doc) {
    DayPlan day;
    day.day = entry["day"].get<int>();
    day.people_number = entry["people_number"].get<int>();
    day.current_city = trim(entry["current_city"].get<std::string>());
    day.transportation = trim(entry["transportation"].get<std::string>());
    day.breakfast = trim(entry["breakfast"].get<std::string>());
    day.attraction = trim(entry["attraction"].get<std::string>());
    day.lunch = trim(entry["lunch"].get<std::string>());
    day.dinner = trim(entry["dinner"].get<std::string>());
    day.accommodation = trim(entry["accommodation"].get<std::string>());
    it.push_back(std::move(day));
  }
  return it;
}

std::string rewrite_prompt(const std::string& text) {
  return
      "Rewrite the travel plan below as a JSON array with one object per day. "
      "Each object must carry exactly these keys: day (integer, starting at 1), "
      "people_number (integer), current_city (string; \"from A to B\" on travel days), "
      "transportation, breakfast, attraction, lunch, dinner, accommodation (all strings; "
      "use \"-\" when a slot has nothing planned). Reply with the JSON array only.\n\n"
      "Plan:\n" + text + "\n";
}

}  // namespace

ReformatResult parse_plan_text(const std::string& text) {
  return parse_plan_text(text, nullptr, 0);
}

ReformatResult parse_plan_text(const std::string& text, PlanGenerator* rewrite_fallback,
                               int max_rewrites) {
  Extracted extracted = extract_json_document(text);
  if (!extracted.doc && rewrite_fallback) {
    std::string source = text;
    for (int attempt = 0; attempt < max_rewrites && !extracted.doc; ++attempt) {
      source = rewrite_fallback->generate(rewrite_prompt(source));
      extracted = extract_json_document(source);
    }
  }
  if (!extracted.doc) {
    ReformatResult result;
    result.failure = ReformatFailure{
        extracted.saw_candidate ? "invalid_json" : "no_json_found",
        {},
        extracted.saw_candidate ? "text contains brackets but no parseable JSON document"
                                : "no JSON document found in generator reply"};
    return result;
  }
  std::vector<SchemaViolation> violations = validate_schema(*extracted.doc);
  if (!violations.empty()) {
    ReformatResult result;
    result.failure =
        ReformatFailure{"schema_violations", std::move(violations), "plan JSON violates schema"};
    return result;
  }
  ReformatResult result;
  result.plan = itinerary_from_json(*extracted.doc);
  return result;
}

// ---------------------------------------------------------------------------
// Canonical serialization
// ---------------------------------------------------------------------------

nlohmann::json plan_to_json(const Itinerary& it) {
  nlohmann::ordered_json doc = nlohmann::ordered_json::array();
  for (const DayPlan& day : it) {
    nlohmann::ordered_json entry;
    entry["day"] = day.day;
    entry["people_number"] = day.people_number;
    entry["current_city"] = day.current_city;
    entry["transportation"] = day.transportation;
    entry["breakfast"] = day.breakfast;
    entry["attraction"] = day.attraction;
    entry["lunch"] = day.lunch;
    entry["dinner"] = day.dinner;
    entry["accommodation"] = day.accommodation;
    doc.push_back(std::move(entry));
  }
  return doc;
}

std::string serialize_plan(const Itinerary& it) { return plan_to_json(it).dump(2); }

// ---------------------------------------------------------------------------
// Field grammars
// ---------------------------------------------------------------------------

std::optional<CityMove> parse_city_move(const std::string& text) {
  std::string t = trim(text);
  if (!starts_with_ci(t, "from ")) return std::nullopt;
  std::string rest = t.substr(5);
  std::string low = fold(rest);
  std::size_t pos = low.find(" to ");
  if (pos == std::string::npos) return std::nullopt;
  CityMove move;
  move.from = trim(rest.substr(0, pos));
  move.to = trim(rest.substr(pos + 4));
  if (move.from.empty() || move.to.empty()) return std::nullopt;
  return move;
}

std::optional<TransportLeg> parse_transport_field(const std::string& text) {
  if (is_empty_marker(text)) return std::nullopt;
  std::vector<std::string> segments = split_trimmed(trim(text), ',');
  if (segments.size() < 2) return std::nullopt;
  auto mode = transport_mode_from_string(segments[0]);
  if (!mode) return std::nullopt;
  auto move = parse_city_move(segments[1]);
  if (!move) return std::nullopt;

  TransportLeg leg;
  leg.mode = *mode;
  leg.from = move->from;
  leg.to = move->to;
  for (std::size_t i = 2; i < segments.size(); ++i) {
    const std::string& seg = segments[i];
    std::size_t colon = seg.find(':');
    if (colon == std::string::npos) return std::nullopt;
    std::string key = fold(seg.substr(0, colon));
    std::string value = trim(seg.substr(colon + 1));
    if (key == "flight number") {
      leg.flight_number = value;
    } else if (key == "departure time") {
      leg.departure_time = parse_time_of_day(value);
      if (!leg.departure_time) return std::nullopt;
    } else if (key == "arrival time") {
      leg.arrival_time = parse_time_of_day(value);
      if (!leg.arrival_time) return std::nullopt;
    } else {
      return std::nullopt;
    }
  }
  return leg;
}

std::string format_transport_field(const TransportLeg& leg) {
  std::string mode = to_string(leg.mode);
  mode[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(mode[0])));
  std::string out = mode + ", from " + leg.from + " to " + leg.to;
  if (leg.flight_number) out += ", Flight Number: " + *leg.flight_number;
  if (leg.departure_time) out += ", Departure Time: " + format_time_of_day(*leg.departure_time);
  if (leg.arrival_time) out += ", Arrival Time: " + format_time_of_day(*leg.arrival_time);
  return out;
}

NamedPlace parse_named_place(const std::string& text) {
  std::string t = trim(text);
  std::size_t comma = t.rfind(',');
  if (comma == std::string::npos) return NamedPlace{t, std::nullopt};
  NamedPlace place;
  place.name = trim(t.substr(0, comma));
  std::string city = trim(t.substr(comma + 1));
  if (city.empty()) return NamedPlace{t, std::nullopt};
  place.city = city;
  return place;
}

std::vector<NamedPlace> parse_attraction_field(const std::string& text) {
  std::vector<NamedPlace> out;
  if (is_empty_marker(text)) return out;
  for (const std::string& piece : split_trimmed(trim(text), ';')) {
    if (piece.empty() || piece == kEmptyMarker) continue;
    out.push_back(parse_named_place(piece));
  }
  return out;
}

}  // namespace modulo
