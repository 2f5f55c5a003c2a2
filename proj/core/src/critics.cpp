#include "modulo/critics.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <sstream>

#include "modulo/errors.hpp"

namespace modulo {

namespace {

std::string join(const std::vector<std::string>& parts, const std::string& sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

std::string fold_text(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

// Per-day route facts shared by several critics.
struct DayFacts {
  bool travel = false;
  std::string from;
  std::string to;
  std::string end_city;               // where that night is spent
  bool transport_present = false;     // transportation field not "-"
  std::optional<TransportLeg> leg;    // parsed transportation, nullopt when unusable
};

std::vector<DayFacts> analyze(const Itinerary& it) {
  std::vector<DayFacts> facts(it.size());
  for (std::size_t i = 0; i < it.size(); ++i) {
    DayFacts& f = facts[i];
    if (auto move = parse_city_move(it[i].current_city)) {
      f.travel = true;
      f.from = move->from;
      f.to = move->to;
      f.end_city = move->to;
    } else {
      f.end_city = it[i].current_city;
    }
    f.transport_present = !is_empty_marker(it[i].transportation);
    if (f.transport_present) f.leg = parse_transport_field(it[i].transportation);
  }
  return facts;
}

const char* kMealSlots[3] = {"breakfast", "lunch", "dinner"};

const std::string& meal_field(const DayPlan& day, int slot) {
  switch (slot) {
    case 0: return day.breakfast;
    case 1: return day.lunch;
    default: return day.dinner;
  }
}

std::string day_slot(int day, const std::string& slot) {
  return "day " + std::to_string(day) + " " + slot;
}

CriticVerdict verdict(const CriticInfo& info, bool passed, const std::string& message) {
  CriticVerdict v;
  v.critic_id = info.id;
  v.group = info.group;
  v.passed = passed;
  if (!passed) v.backprompt = "[" + info.id + "] " + message;
  return v;
}

// --- individual critics, each returning (passed, failure message) -----------

std::pair<bool, std::string> check_complete_information(const Itinerary& it,
                                                        const CriticOptions& opt) {
  std::vector<std::string> missing;
  for (std::size_t i = 0; i < it.size(); ++i) {
    const DayPlan& day = it[i];
    bool first = i == 0;
    bool last = i + 1 == it.size();
    if (is_empty_marker(day.breakfast) && !(first && opt.meal_mask.optional_breakfast_first_day))
      missing.push_back(day_slot(day.day, "breakfast"));
    if (is_empty_marker(day.lunch)) missing.push_back(day_slot(day.day, "lunch"));
    if (is_empty_marker(day.dinner) && !(last && opt.meal_mask.optional_dinner_final_day))
      missing.push_back(day_slot(day.day, "dinner"));
    if (is_empty_marker(day.attraction)) missing.push_back(day_slot(day.day, "attraction"));
    if (is_empty_marker(day.accommodation) && !last)
      missing.push_back(day_slot(day.day, "accommodation"));
  }
  if (missing.empty()) return {true, ""};
  return {false, "these required entries are \"-\": " + join(missing, ", ") +
                     "; fill every required slot with a real choice"};
}

std::pair<bool, std::string> check_diverse_restaurants(const Itinerary& it) {
  std::map<std::string, std::string> first_seen;  // folded name -> original
  std::vector<std::string> repeated;
  for (const DayPlan& day : it) {
    for (int slot = 0; slot < 3; ++slot) {
      const std::string& value = meal_field(day, slot);
      if (is_empty_marker(value)) continue;
      NamedPlace place = parse_named_place(value);
      std::string key = fold_text(place.name);
      auto [pos, inserted] = first_seen.emplace(key, place.name);
      if (!inserted &&
          std::find(repeated.begin(), repeated.end(), pos->second) == repeated.end())
        repeated.push_back(pos->second);
    }
  }
  if (repeated.empty()) return {true, ""};
  return {false, "restaurants repeat across meals: " + join(repeated, ", ") +
                     "; pick a different restaurant for every meal of the trip"};
}

std::pair<bool, std::string> check_diverse_attractions(const Itinerary& it) {
  std::map<std::string, std::string> first_seen;
  std::vector<std::string> repeated;
  for (const DayPlan& day : it) {
    for (const NamedPlace& place : parse_attraction_field(day.attraction)) {
      std::string key = fold_text(place.name);
      auto [pos, inserted] = first_seen.emplace(key, place.name);
      if (!inserted &&
          std::find(repeated.begin(), repeated.end(), pos->second) == repeated.end())
        repeated.push_back(pos->second);
    }
  }
  if (repeated.empty()) return {true, ""};
  return {false, "attractions repeat across the trip: " + join(repeated, ", ") +
                     "; visit each attraction at most once"};
}

std::pair<bool, std::string> check_valid_information(const Itinerary& it,
                                                     const std::vector<DayFacts>& facts,
                                                     const Query& q, const Sandbox& sb) {
  std::vector<std::string> problems;
  if (static_cast<int>(it.size()) != q.days)
    problems.push_back("the plan covers " + std::to_string(it.size()) + " days but the trip lasts " +
                       std::to_string(q.days));

  std::string here = q.org;
  std::set<std::string> visited;
  for (std::size_t i = 0; i < it.size(); ++i) {
    const DayPlan& day = it[i];
    const DayFacts& f = facts[i];
    if (f.travel) {
      if (normalize_city(f.from) != normalize_city(here))
        problems.push_back("day " + std::to_string(day.day) + " travels from " + f.from +
                           " but the trip is in " + here + " that morning");
      here = f.to;
      if (!f.transport_present || !f.leg) {
        problems.push_back("day " + std::to_string(day.day) +
                           " changes city without usable transportation");
      } else {
        if (normalize_city(f.leg->from) != normalize_city(f.from) ||
            normalize_city(f.leg->to) != normalize_city(f.to))
          problems.push_back("day " + std::to_string(day.day) + " transportation runs " +
                             f.leg->from + " to " + f.leg->to + " but the day moves " + f.from +
                             " to " + f.to);
        if (f.leg->mode == TransportMode::flight) {
          if (!f.leg->flight_number) {
            problems.push_back("day " + std::to_string(day.day) +
                               " flies without naming a flight number");
          } else {
            bool found = false;
            if (i < q.date_range.size()) {
              for (const FlightRecord* rec :
                   sb.find_flights(f.leg->from, f.leg->to, q.date_range[i])) {
                if (fold_text(rec->flight_number) == fold_text(*f.leg->flight_number)) found = true;
              }
            }
            if (!found) {
              std::string date = i < q.date_range.size() ? q.date_range[i].iso() : "that day";
              problems.push_back("day " + std::to_string(day.day) + " flight " +
                                 *f.leg->flight_number + " does not operate from " + f.leg->from +
                                 " to " + f.leg->to + " on " + date);
            }
          }
        }
      }
    } else {
      if (i == 0) {
        problems.push_back("day 1 must start by traveling from " + q.org);
        here = f.end_city;
      } else if (normalize_city(f.end_city) != normalize_city(here)) {
        problems.push_back("day " + std::to_string(day.day) + " is in " + f.end_city +
                           " but the previous day ended in " + here);
        here = f.end_city;
      }
      if (f.transport_present)
        problems.push_back("day " + std::to_string(day.day) +
                           " lists transportation but stays in one city");
    }
    if (normalize_city(here) != normalize_city(q.org)) visited.insert(normalize_city(here));

    for (int slot = 0; slot < 3; ++slot) {
      const std::string& value = meal_field(day, slot);
      if (is_empty_marker(value)) continue;
      NamedPlace place = parse_named_place(value);
      if (!place.city || !sb.find_restaurant_by_name(place.name, *place.city))
        problems.push_back(day_slot(day.day, kMealSlots[slot]) + " \"" + value +
                           "\" is not a restaurant in the sandbox");
    }
    for (const NamedPlace& place : parse_attraction_field(day.attraction)) {
      if (!place.city || !sb.find_attraction_by_name(place.name, *place.city))
        problems.push_back(day_slot(day.day, "attraction") + " \"" + place.name +
                           "\" is not an attraction in the sandbox");
    }
    if (!is_empty_marker(day.accommodation)) {
      NamedPlace place = parse_named_place(day.accommodation);
      if (!place.city || !sb.find_accommodation_by_name(place.name, *place.city))
        problems.push_back(day_slot(day.day, "accommodation") + " \"" + day.accommodation +
                           "\" is not an accommodation in the sandbox");
    }
  }
  if (!it.empty() && normalize_city(here) != normalize_city(q.org))
    problems.push_back("the trip ends in " + here + " but must return to " + q.org);
  if (static_cast<int>(visited.size()) != q.visiting_city_number)
    problems.push_back("the plan visits " + std::to_string(visited.size()) +
                       " distinct cities but the trip requires " +
                       std::to_string(q.visiting_city_number));

  if (problems.empty()) return {true, ""};
  return {false, join(problems, "; ")};
}

std::pair<bool, std::string> check_valid_cost(const Itinerary& it, const Query& q,
                                              const Sandbox& sb) {
  Money total = get_total_cost(it, q, sb);
  if (total <= q.budget) return {true, ""};
  Money overage = total - q.budget;
  return {false, "the total cost $" + total.str() + " exceeds the budget $" + q.budget.str() +
                     " by $" + overage.str() + "; choose cheaper options"};
}

std::pair<bool, std::string> check_valid_accommodation(const Itinerary& it,
                                                       const std::vector<DayFacts>& facts,
                                                       const Query& q, const Sandbox& sb) {
  std::vector<std::string> problems;
  const std::string* room_type =
      q.local_constraint && q.local_constraint->room_type ? &*q.local_constraint->room_type
                                                          : nullptr;
  const std::string* house_rule =
      q.local_constraint && q.local_constraint->house_rule ? &*q.local_constraint->house_rule
                                                           : nullptr;

  std::size_t i = 0;
  while (i < it.size()) {
    if (is_empty_marker(it[i].accommodation)) {
      ++i;
      continue;
    }
    NamedPlace place = parse_named_place(it[i].accommodation);
    std::size_t run_start = i;
    std::size_t j = i + 1;
    while (j < it.size() && !is_empty_marker(it[j].accommodation)) {
      NamedPlace next = parse_named_place(it[j].accommodation);
      if (fold_text(next.name) != fold_text(place.name)) break;
      if (place.city && next.city && normalize_city(*next.city) != normalize_city(*place.city))
        break;
      ++j;
    }
    std::size_t nights = j - run_start;
    int day_number = it[run_start].day;

    if (!place.city) {
      problems.push_back("day " + std::to_string(day_number) + " accommodation \"" +
                         it[run_start].accommodation + "\" does not name its city");
      i = j;
      continue;
    }
    if (normalize_city(*place.city) != normalize_city(facts[run_start].end_city))
      problems.push_back("day " + std::to_string(day_number) + " accommodation is in " +
                         *place.city + " but that night is spent in " + facts[run_start].end_city);
    const AccommodationRecord* rec = sb.find_accommodation_by_name(place.name, *place.city);
    if (!rec) {
      problems.push_back("day " + std::to_string(day_number) + " accommodation \"" +
                         it[run_start].accommodation + "\" is not in the sandbox");
      i = j;
      continue;
    }
    if (room_type) {
      bool matches = fold_text(*room_type) == "not shared room"
                         ? fold_text(rec->room_type) != "shared room"
                         : fold_text(rec->room_type) == fold_text(*room_type);
      if (!matches)
        problems.push_back("accommodation \"" + rec->name + "\" has room type \"" +
                           rec->room_type + "\" but the trip requires \"" + *room_type + "\"");
    }
    if (house_rule &&
        fold_text(rec->house_rules).find("no " + fold_text(*house_rule)) != std::string::npos)
      problems.push_back("accommodation \"" + rec->name + "\" does not allow " + *house_rule);
    if (static_cast<int>(nights) < rec->minimum_nights)
      problems.push_back("accommodation \"" + rec->name + "\" requires at least " +
                         std::to_string(rec->minimum_nights) + " consecutive nights but is booked for " +
                         std::to_string(nights));
    i = j;
  }
  if (problems.empty()) return {true, ""};
  return {false, join(problems, "; ")};
}

std::pair<bool, std::string> check_valid_cuisine(const Itinerary& it, const Query& q,
                                                 const Sandbox& sb) {
  if (!q.local_constraint || !q.local_constraint->cuisine ||
      q.local_constraint->cuisine->empty())
    return {true, ""};
  std::set<std::string> covered;
  for (const DayPlan& day : it) {
    for (int slot = 0; slot < 3; ++slot) {
      const std::string& value = meal_field(day, slot);
      if (is_empty_marker(value)) continue;
      NamedPlace place = parse_named_place(value);
      if (!place.city) continue;
      if (const RestaurantRecord* rec = sb.find_restaurant_by_name(place.name, *place.city)) {
        for (const std::string& tag : rec->cuisines) covered.insert(fold_text(tag));
      }
    }
  }
  std::vector<std::string> missing;
  for (const std::string& want : *q.local_constraint->cuisine) {
    if (!covered.count(fold_text(want))) missing.push_back(want);
  }
  if (missing.empty()) return {true, ""};
  return {false, "no chosen restaurant serves: " + join(missing, ", ") +
                     "; every requested cuisine must appear at least once"};
}

std::pair<bool, std::string> check_valid_transportation(const Itinerary& it,
                                                        const std::vector<DayFacts>& facts,
                                                        const Query& q,
                                                        const CriticOptions& opt) {
  std::vector<std::string> problems;
  std::string forbidden;
  if (q.local_constraint && q.local_constraint->transportation)
    forbidden = fold_text(*q.local_constraint->transportation);
  bool saw_flight = false;
  bool saw_drive = false;
  for (std::size_t i = 0; i < it.size(); ++i) {
    if (!facts[i].transport_present) continue;
    if (!facts[i].leg) {
      problems.push_back("day " + std::to_string(it[i].day) + " transportation \"" +
                         it[i].transportation +
                         "\" is not \"<mode>, from <city> to <city>\"");
      continue;
    }
    TransportMode mode = facts[i].leg->mode;
    if (mode == TransportMode::flight) saw_flight = true;
    if (mode == TransportMode::self_driving) saw_drive = true;
    if (forbidden == "no flight" && mode == TransportMode::flight)
      problems.push_back("day " + std::to_string(it[i].day) +
                         " flies but the trip requires no flight");
    if (forbidden == "no self-driving" && mode == TransportMode::self_driving)
      problems.push_back("day " + std::to_string(it[i].day) +
                         " self-drives but the trip requires no self-driving");
  }
  if (opt.flag_mode_conflict && saw_flight && saw_drive)
    problems.push_back(
        "the trip mixes self-driving and flight; a car taken on one leg cannot be abandoned");
  if (problems.empty()) return {true, ""};
  return {false, join(problems, "; ")};
}

std::string format_failure_message(const ReformatFailure& failure) {
  if (failure.reason == "no_json_found")
    return "the reply contains no JSON itinerary; reply with a JSON array of day objects only";
  if (failure.reason == "invalid_json")
    return "the reply's JSON does not parse: " + failure.detail +
           "; reply with a valid JSON array of day objects";
  std::vector<std::string> parts;
  for (const SchemaViolation& v : failure.violations) parts.push_back(v.message);
  return "the plan JSON breaks the schema: " + join(parts, "; ");
}

}  // namespace

std::string to_string(CriticGroup group) {
  switch (group) {
    case CriticGroup::format: return "format";
    case CriticGroup::commonsense: return "commonsense";
    case CriticGroup::hard: return "hard";
  }
  return "format";
}

std::optional<CriticSelector> selector_from_string(std::string_view text) {
  std::string folded = fold_text(std::string(text));
  if (folded == "all") return CriticSelector::All;
  if (folded == "common") return CriticSelector::Common;
  if (folded == "hard") return CriticSelector::Hard;
  if (folded == "json") return CriticSelector::Json;
  return std::nullopt;
}

std::string to_string(CriticSelector selector) {
  switch (selector) {
    case CriticSelector::All: return "all";
    case CriticSelector::Common: return "common";
    case CriticSelector::Hard: return "hard";
    case CriticSelector::Json: return "json";
  }
  return "all";
}

const std::vector<CriticInfo>& critic_catalog() {
  static const std::vector<CriticInfo> kCatalog = {
      {"valid_format", CriticGroup::format,
       "the reply parses into the day-plan JSON schema"},
      {"complete_information", CriticGroup::commonsense,
       "every required slot holds a real entry, not \"-\""},
      {"diverse_restaurants", CriticGroup::commonsense,
       "no restaurant repeats across the trip's meals"},
      {"diverse_attractions", CriticGroup::commonsense,
       "no attraction repeats across the trip"},
      {"is_valid_information", CriticGroup::commonsense,
       "route, dates and every named entity check out against the sandbox"},
      {"valid_cost", CriticGroup::hard, "the total trip cost stays within the budget"},
      {"is_valid_accommodation", CriticGroup::hard,
       "hotels match the room type and house rules and their minimum-night terms"},
      {"valid_cuisine", CriticGroup::hard,
       "every requested cuisine is served at least once"},
      {"valid_transportation", CriticGroup::hard,
       "no forbidden transport mode and no conflicting modes in one trip"},
  };
  return kCatalog;
}

std::vector<CriticInfo> select_critics(CriticSelector selector) {
  std::vector<CriticInfo> out;
  for (const CriticInfo& info : critic_catalog()) {
    bool keep = false;
    switch (selector) {
      case CriticSelector::All: keep = true; break;
      case CriticSelector::Json: keep = info.group == CriticGroup::format; break;
      case CriticSelector::Common:
        keep = info.group == CriticGroup::format || info.group == CriticGroup::commonsense;
        break;
      case CriticSelector::Hard:
        keep = info.group == CriticGroup::format || info.group == CriticGroup::hard;
        break;
    }
    if (keep) out.push_back(info);
  }
  return out;
}

nlohmann::json catalog_to_json() {
  nlohmann::json out = nlohmann::json::array();
  for (const CriticInfo& info : critic_catalog()) {
    out.push_back({{"id", info.id},
                   {"group", to_string(info.group)},
                   {"description", info.description}});
  }
  return out;
}

Money get_total_cost(const Itinerary& it, const Query& q, const Sandbox& sb) {
  Money total;
  for (const DayPlan& day : it) {
    if (!is_empty_marker(day.transportation)) {
      if (auto leg = parse_transport_field(day.transportation)) {
        try {
          total = total + get_cost_of_transport(sb, leg->from, leg->to, leg->mode,
                                                q.people_number, leg->flight_number);
        } catch (const std::exception&) {
          // unknown legs cost nothing; Validate Itinerary reports them
        }
      }
    }
    for (int slot = 0; slot < 3; ++slot) {
      const std::string& value = meal_field(day, slot);
      if (is_empty_marker(value)) continue;
      NamedPlace place = parse_named_place(value);
      if (!place.city) continue;
      if (const RestaurantRecord* rec = sb.find_restaurant_by_name(place.name, *place.city))
        total = total + rec->average_cost * q.people_number;
    }
    if (!is_empty_marker(day.accommodation)) {
      NamedPlace place = parse_named_place(day.accommodation);
      if (place.city) {
        if (const AccommodationRecord* rec =
                sb.find_accommodation_by_name(place.name, *place.city)) {
          std::int64_t rooms =
              (q.people_number + rec->maximum_occupancy - 1) / rec->maximum_occupancy;
          total = total + rec->price * rooms;
        }
      }
    }
  }
  return total;
}

std::vector<CriticVerdict> run_critics(CriticSelector selector, const ReformatResult& input,
                                       const Query& q, const Sandbox& sb,
                                       const CriticOptions& options) {
  const CriticInfo& format_info = critic_catalog().front();
  if (!input.ok()) {
    return {verdict(format_info, false, format_failure_message(*input.failure))};
  }
  const Itinerary& it = *input.plan;
  if (auto violations = validate_schema(plan_to_json(it)); !violations.empty()) {
    ReformatFailure failure;
    failure.reason = "schema_violations";
    failure.violations = std::move(violations);
    return {verdict(format_info, false, format_failure_message(failure))};
  }
  std::vector<DayFacts> facts = analyze(it);

  std::vector<CriticVerdict> out;
  for (const CriticInfo& info : select_critics(selector)) {
    std::pair<bool, std::string> result{true, ""};
    if (info.id == "valid_format") {
      result = {true, ""};  // a parsed plan already passed the schema
    } else if (info.id == "complete_information") {
      result = check_complete_information(it, options);
    } else if (info.id == "diverse_restaurants") {
      result = check_diverse_restaurants(it);
    } else if (info.id == "diverse_attractions") {
      result = check_diverse_attractions(it);
    } else if (info.id == "is_valid_information") {
      result = check_valid_information(it, facts, q, sb);
    } else if (info.id == "valid_cost") {
      result = check_valid_cost(it, q, sb);
    } else if (info.id == "is_valid_accommodation") {
      result = check_valid_accommodation(it, facts, q, sb);
    } else if (info.id == "valid_cuisine") {
      result = check_valid_cuisine(it, q, sb);
    } else if (info.id == "valid_transportation") {
      result = check_valid_transportation(it, facts, q, options);
    }
    out.push_back(verdict(info, result.first, result.second));
  }
  return out;
}

}  // namespace modulo
