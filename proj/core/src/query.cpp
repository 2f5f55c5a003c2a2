#include "modulo/query.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <regex>
#include <sstream>

#include "modulo/errors.hpp"

namespace modulo {

namespace {

std::string fold(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string trim(const std::string& s) {
  std::size_t b = 0, e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

int word_number(const std::string& word) {
  static const std::pair<const char*, int> kWords[] = {
      {"one", 1}, {"two", 2}, {"three", 3}, {"four", 4},   {"five", 5},
      {"six", 6}, {"seven", 7}, {"eight", 8}, {"nine", 9}, {"ten", 10}};
  for (const auto& [name, value] : kWords) {
    if (word == name) return value;
  }
  return -1;
}

const std::vector<std::string>& cuisine_vocabulary() {
  static const std::vector<std::string> kCuisines = {
      "Chinese", "American", "Italian", "Mexican", "Indian", "Mediterranean", "French"};
  return kCuisines;
}

std::string strip_ordinal(std::string day) {
  for (const char* suffix : {"st", "nd", "rd", "th"}) {
    if (day.size() > 2 && day.ends_with(suffix)) return day.substr(0, day.size() - 2);
  }
  return day;
}

}  // namespace

std::optional<std::string> check_query_invariants(const Query& q) {
  if (q.org.empty()) return "origin city is empty";
  if (q.dest.empty()) return "destination is empty";
  if (q.days < 1) return "days must be at least 1";
  if (q.visiting_city_number < 1) return "visiting_city_number must be at least 1";
  if (q.people_number < 1) return "people_number must be at least 1";
  if (q.budget <= Money{}) return "budget must be positive";
  if (q.date_range.size() != static_cast<std::size_t>(q.days))
    return "date_range must list one date per day (got " +
           std::to_string(q.date_range.size()) + " dates for " + std::to_string(q.days) +
           " days)";
  for (std::size_t i = 1; i < q.date_range.size(); ++i) {
    if (q.date_range[i] != q.date_range[i - 1].plus_days(1))
      return "date_range must be consecutive calendar days";
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Natural-language parsing
// ---------------------------------------------------------------------------

Query parse_query(const std::string& text) {
  if (trim(text).empty()) throw ParseError("query text is empty");
  const std::string low = fold(text);
  Query q;

  // trip duration: "for 3 days" / "a 3-day trip"
  {
    static const std::regex re(R"((?:for|a)\s+(\d+)[-\s]day(?:s)?)", std::regex::icase);
    std::smatch m;
    if (std::regex_search(text, m, re)) {
      q.days = std::stoi(m[1]);
    } else {
      throw ParseError("could not find the trip duration clause (e.g. \"for 3 days\")");
    }
  }

  // route: "departing from X and heading to Y" | "trip from X to Y"
  {
    static const std::regex departing(
        R"(departing\s+from\s+(.+?)\s+and\s+heading\s+to\s+(.+?)\s*(?:,|\.|for\b|\bfrom\b|$))",
        std::regex::icase);
    static const std::regex trip_from(
        R"(trip\s+from\s+(.+?)\s+to\s+(.+?)\s*(?:,|\.|for\b|\bwith\b|\brunning\b|$))",
        std::regex::icase);
    std::smatch m;
    if (std::regex_search(text, m, departing) || std::regex_search(text, m, trip_from)) {
      q.org = trim(m[1]);
      q.dest = trim(m[2]);
    } else {
      throw ParseError(
          "could not find the route clause (e.g. \"departing from Washington and heading to "
          "Myrtle Beach\")");
    }
  }

  // travelers: "for 1 person" / "for one traveler" / "for 2 people"
  {
    static const std::regex re(R"((?:for|of)\s+(\d+|one|two|three|four|five|six|seven|eight|nine|ten)\s+(?:person|people|traveler|travelers|adults?))",
                               std::regex::icase);
    std::smatch m;
    if (std::regex_search(text, m, re)) {
      std::string token = fold(m[1]);
      int n = std::isdigit(static_cast<unsigned char>(token[0])) ? std::stoi(token)
                                                                 : word_number(token);
      if (n < 1) throw ParseError("could not read the traveler count");
      q.people_number = n;
    } else {
      q.people_number = 1;  // the canonical single-traveler phrasing omits the clause
    }
  }

  // visiting cities: "visiting 2 cities" (defaults to 1)
  {
    static const std::regex re(R"(visit(?:ing)?\s+(\d+)\s+cities)", std::regex::icase);
    std::smatch m;
    q.visiting_city_number = std::regex_search(text, m, re) ? std::stoi(m[1]) : 1;
  }

  // budget: "budget of $1,400" / "$1,400 budget"
  {
    static const std::regex re(R"(\$\s*([\d,]+(?:\.\d{1,2})?))");
    std::smatch m;
    if (!std::regex_search(text, m, re))
      throw ParseError("could not find the budget clause (e.g. \"with a budget of $1,400\")");
    auto budget = Money::parse(m[1].str());
    if (!budget || *budget <= Money{}) throw ParseError("budget must be a positive amount");
    q.budget = *budget;
  }

  // dates: "from March 13th to March 15th, 2022" / "running from March 13th to 15th, 2022"
  {
    static const std::regex re(
        R"((January|February|March|April|May|June|July|August|September|October|November|December)\s+(\d{1,2})(?:st|nd|rd|th)?\s+to\s+(?:(January|February|March|April|May|June|July|August|September|October|November|December)\s+)?(\d{1,2})(?:st|nd|rd|th)?\s*,?\s*(\d{4}))",
        std::regex::icase);
    std::smatch m;
    if (!std::regex_search(text, m, re))
      throw ParseError(
          "could not find the date clause (e.g. \"from March 13th to March 15th, 2022\")");
    int year = std::stoi(m[5]);
    unsigned start_day = static_cast<unsigned>(std::stoi(strip_ordinal(m[2])));
    auto start = Date::from_month_name(m[1].str(), start_day, year);
    if (!start) throw ParseError("unrecognized start date in the date clause");
    std::string end_month = m[3].matched ? m[3].str() : m[1].str();
    unsigned end_day = static_cast<unsigned>(std::stoi(strip_ordinal(m[4])));
    auto end = Date::from_month_name(end_month, end_day, year);
    if (!end) throw ParseError("unrecognized end date in the date clause");
    for (int i = 0; i < q.days; ++i) q.date_range.push_back(start->plus_days(i));
    if (q.date_range.back() != *end)
      throw ParseError("date clause does not span the stated number of days");
  }

  // local constraints
  LocalConstraint lc;
  if (low.find("cuisine") != std::string::npos || low.find("food") != std::string::npos) {
    std::vector<std::string> found;
    for (const std::string& tag : cuisine_vocabulary()) {
      if (low.find(fold(tag)) != std::string::npos) found.push_back(tag);
    }
    if (!found.empty()) lc.cuisine = std::move(found);
  }
  for (const char* room : {"not shared room", "entire room", "private room", "shared room"}) {
    if (low.find(room) != std::string::npos) {
      lc.room_type = room;
      break;  // "not shared room" checked first so "shared room" cannot shadow it
    }
  }
  {
    static const std::regex re(R"(allow(?:s|ing)?\s+(parties|smoking|children under 10|pets|visitors))",
                               std::regex::icase);
    std::smatch m;
    if (std::regex_search(text, m, re)) lc.house_rule = fold(m[1]);
  }
  if (low.find("no flight") != std::string::npos ||
      low.find("avoid flight") != std::string::npos || low.find("avoid flying") != std::string::npos) {
    lc.transportation = "no flight";
  } else if (low.find("no self-driving") != std::string::npos ||
             low.find("avoid self-driving") != std::string::npos) {
    lc.transportation = "no self-driving";
  }
  if (!lc.empty()) q.local_constraint = std::move(lc);

  if (auto violation = check_query_invariants(q)) throw ParseError(*violation);
  return q;
}

// ---------------------------------------------------------------------------
// JSON round-trip
// ---------------------------------------------------------------------------

nlohmann::json query_to_json(const Query& q) {
  nlohmann::ordered_json j;
  j["org"] = q.org;
  j["dest"] = q.dest;
  j["days"] = q.days;
  j["visiting_city_number"] = q.visiting_city_number;
  j["people_number"] = q.people_number;
  if (q.local_constraint) {
    nlohmann::ordered_json lc;
    lc["house_rule"] = q.local_constraint->house_rule
                           ? nlohmann::ordered_json(*q.local_constraint->house_rule)
                           : nlohmann::ordered_json(nullptr);
    if (q.local_constraint->cuisine) {
      lc["cuisine"] = *q.local_constraint->cuisine;
    } else {
      lc["cuisine"] = nullptr;
    }
    lc["room_type"] = q.local_constraint->room_type
                          ? nlohmann::ordered_json(*q.local_constraint->room_type)
                          : nlohmann::ordered_json(nullptr);
    lc["transportation"] = q.local_constraint->transportation
                               ? nlohmann::ordered_json(*q.local_constraint->transportation)
                               : nlohmann::ordered_json(nullptr);
    j["local_constraint"] = std::move(lc);
  } else {
    j["local_constraint"] = nullptr;
  }
  j["budget"] = q.budget.dollars();
  nlohmann::ordered_json dates = nlohmann::ordered_json::array();
  for (const Date& d : q.date_range) dates.push_back(d.iso());
  j["date_range"] = std::move(dates);
  return j;
}

Query query_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw ParseError("query JSON must be an object");
  Query q;
  auto need = [&](const char* key) -> const nlohmann::json& {
    if (!j.contains(key)) throw ParseError(std::string("query JSON is missing '") + key + "'");
    return j.at(key);
  };
  q.org = need("org").get<std::string>();
  q.dest = need("dest").get<std::string>();
  q.days = need("days").get<int>();
  q.visiting_city_number =
      j.contains("visiting_city_number") ? j.at("visiting_city_number").get<int>() : 1;
  q.people_number = j.contains("people_number") ? j.at("people_number").get<int>() : 1;
  if (j.contains("local_constraint") && !j.at("local_constraint").is_null()) {
    const auto& lc_json = j.at("local_constraint");
    LocalConstraint lc;
    if (lc_json.contains("house_rule") && !lc_json.at("house_rule").is_null())
      lc.house_rule = lc_json.at("house_rule").get<std::string>();
    if (lc_json.contains("cuisine") && !lc_json.at("cuisine").is_null())
      lc.cuisine = lc_json.at("cuisine").get<std::vector<std::string>>();
    if (lc_json.contains("room_type") && !lc_json.at("room_type").is_null())
      lc.room_type = lc_json.at("room_type").get<std::string>();
    if (lc_json.contains("transportation") && !lc_json.at("transportation").is_null())
      lc.transportation = lc_json.at("transportation").get<std::string>();
    if (!lc.empty()) q.local_constraint = std::move(lc);
  }
  const auto& budget = need("budget");
  if (budget.is_string()) {
    auto parsed = Money::parse(budget.get<std::string>());
    if (!parsed) throw ParseError("unparseable budget string");
    q.budget = *parsed;
  } else {
    q.budget = Money::from_dollars(budget.get<double>());
  }
  for (const auto& iso : need("date_range")) {
    auto date = Date::from_iso(iso.get<std::string>());
    if (!date) throw ParseError("unparseable date '" + iso.get<std::string>() + "' in date_range");
    q.date_range.push_back(*date);
  }
  if (auto violation = check_query_invariants(q)) throw ParseError(*violation);
  return q;
}

std::vector<Query> load_query_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open query file " + path.string());
  std::vector<Query> out;
  std::string line;
  std::size_t line_number = 0;
  while (std::getline(in, line)) {
    ++line_number;
    if (trim(line).empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded())
      throw ParseError(path.string() + ":" + std::to_string(line_number) + ": invalid JSON");
    try {
      out.push_back(query_from_json(j));
    } catch (const std::exception& e) {
      throw ParseError(path.string() + ":" + std::to_string(line_number) + ": " + e.what());
    }
  }
  return out;
}

}  // namespace modulo
