#include <algorithm>
#include <set>

#include "modulo/generator.hpp"
#include "modulo/itinerary.hpp"
#include "modulo/sandbox.hpp"

namespace modulo {

namespace {

std::string fold(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

bool mode_allowed(const Query& q, TransportMode mode) {
  if (!q.local_constraint || !q.local_constraint->transportation) return true;
  std::string rule = fold(*q.local_constraint->transportation);
  if (rule == "no flight" && mode == TransportMode::flight) return false;
  if (rule == "no self-driving" && mode == TransportMode::self_driving) return false;
  return true;
}

struct LegChoice {
  bool found = false;
  TransportLeg leg;
  Money cost;
};

// Cheapest way from `from` to `to` on `date`. Flights win ties against ground
// modes of equal price; within a mode, ties break by (price, name).
LegChoice pick_leg(const Sandbox& sb, const Query& q, const std::string& from,
                   const std::string& to, const Date& date, bool exclude_flight,
                   bool exclude_drive) {
  LegChoice best;
  if (mode_allowed(q, TransportMode::flight) && !exclude_flight) {
    const FlightRecord* cheapest = nullptr;
    for (const FlightRecord* rec : sb.find_flights(from, to, date)) {
      if (!cheapest || rec->price < cheapest->price ||
          (rec->price == cheapest->price && rec->flight_number < cheapest->flight_number))
        cheapest = rec;
    }
    if (cheapest) {
      best.found = true;
      best.leg.mode = TransportMode::flight;
      best.leg.from = from;
      best.leg.to = to;
      best.leg.flight_number = cheapest->flight_number;
      best.leg.departure_time = cheapest->dep_time;
      best.leg.arrival_time = cheapest->arr_time;
      best.cost = cheapest->price * q.people_number;
      return best;  // flights preferred whenever one exists
    }
  }
  for (TransportMode mode : {TransportMode::taxi, TransportMode::self_driving}) {
    if (!mode_allowed(q, mode)) continue;
    if (mode == TransportMode::self_driving && exclude_drive) continue;
    try {
      Money cost = get_cost_of_transport(sb, from, to, mode, q.people_number);
      if (!best.found || cost < best.cost ||
          (cost == best.cost && to_string(mode) < to_string(best.leg.mode))) {
        best.found = true;
        best.leg = TransportLeg{mode, from, to, std::nullopt, std::nullopt, std::nullopt};
        best.cost = cost;
      }
    } catch (const std::exception&) {
      // no distance record; mode unavailable on this route
    }
  }
  return best;
}

const AccommodationRecord* pick_hotel(const Sandbox& sb, const Query& q,
                                      const std::string& city, int nights) {
  const AccommodationRecord* best = nullptr;
  for (const AccommodationRecord* rec : sb.find_accommodations(city)) {
    if (rec->minimum_nights > nights) continue;
    if (q.local_constraint && q.local_constraint->room_type) {
      const std::string want = fold(*q.local_constraint->room_type);
      bool matches = want == "not shared room" ? fold(rec->room_type) != "shared room"
                                               : fold(rec->room_type) == want;
      if (!matches) continue;
    }
    if (q.local_constraint && q.local_constraint->house_rule &&
        fold(rec->house_rules).find("no " + fold(*q.local_constraint->house_rule)) !=
            std::string::npos)
      continue;
    if (!best || rec->price < best->price ||
        (rec->price == best->price && rec->name < best->name))
      best = rec;
  }
  return best;
}

}  // namespace

GreedyGenerator::GreedyGenerator(const Sandbox& sandbox, Query query)
    : sandbox_(sandbox), query_(std::move(query)) {}

std::string GreedyGenerator::generate(const std::string&) {
  const Query& q = query_;
  const Sandbox& sb = sandbox_;
  const int days = q.days;
  Itinerary plan(static_cast<std::size_t>(std::max(days, 1)));

  // Route skeleton: out on day 1, back on the last day, destination between.
  for (int i = 0; i < days; ++i) {
    DayPlan& day = plan[static_cast<std::size_t>(i)];
    day.day = i + 1;
    day.people_number = q.people_number;
    day.transportation = kEmptyMarker;
    day.breakfast = kEmptyMarker;
    day.attraction = kEmptyMarker;
    day.lunch = kEmptyMarker;
    day.dinner = kEmptyMarker;
    day.accommodation = kEmptyMarker;
    if (days == 1) {
      day.current_city = "from " + q.org + " to " + q.dest;
    } else if (i == 0) {
      day.current_city = "from " + q.org + " to " + q.dest;
    } else if (i == days - 1) {
      day.current_city = "from " + q.dest + " to " + q.org;
    } else {
      day.current_city = q.dest;
    }
  }

  // Transport legs. The return leg must not conflict with the outbound mode.
  LegChoice out;
  if (!q.date_range.empty()) {
    out = pick_leg(sb, q, q.org, q.dest, q.date_range.front(), false, false);
    if (out.found) plan.front().transportation = format_transport_field(out.leg);
  }
  if (days > 1 && static_cast<int>(q.date_range.size()) >= days) {
    bool exclude_flight = out.found && out.leg.mode == TransportMode::self_driving;
    bool exclude_drive = out.found && out.leg.mode == TransportMode::flight;
    LegChoice back = pick_leg(sb, q, q.dest, q.org, q.date_range.back(), exclude_flight,
                              exclude_drive);
    if (back.found) plan.back().transportation = format_transport_field(back.leg);
  }

  // Hotel: every night is spent in the destination city.
  int nights = std::max(days - 1, 0);
  if (nights > 0) {
    if (const AccommodationRecord* hotel = pick_hotel(sb, q, q.dest, nights)) {
      for (int i = 0; i < nights; ++i)
        plan[static_cast<std::size_t>(i)].accommodation = hotel->name + ", " + hotel->city;
    }
  }

  // Meals: cheapest distinct restaurants; requested cuisines covered first.
  std::vector<const RestaurantRecord*> pool = sb.find_restaurants(q.dest);
  std::sort(pool.begin(), pool.end(), [](const RestaurantRecord* a, const RestaurantRecord* b) {
    if (a->average_cost != b->average_cost) return a->average_cost < b->average_cost;
    return a->name < b->name;
  });
  std::set<const RestaurantRecord*> used;
  std::vector<std::pair<int, int>> slots;  // (day index, meal slot)
  for (int i = 0; i < days; ++i) {
    bool first = i == 0, last = i == days - 1;
    if (!first) slots.emplace_back(i, 0);
    slots.emplace_back(i, 1);
    if (!last) slots.emplace_back(i, 2);
  }
  std::vector<const RestaurantRecord*> picks;
  if (q.local_constraint && q.local_constraint->cuisine) {
    for (const std::string& want : *q.local_constraint->cuisine) {
      if (picks.size() >= slots.size()) break;
      for (const RestaurantRecord* rec : pool) {
        if (used.count(rec)) continue;
        bool serves = std::any_of(rec->cuisines.begin(), rec->cuisines.end(),
                                  [&](const std::string& tag) { return fold(tag) == fold(want); });
        if (serves) {
          picks.push_back(rec);
          used.insert(rec);
          break;
        }
      }
    }
  }
  for (const RestaurantRecord* rec : pool) {
    if (picks.size() >= slots.size()) break;
    if (!used.count(rec)) {
      picks.push_back(rec);
      used.insert(rec);
    }
  }
  for (std::size_t s = 0; s < slots.size() && s < picks.size(); ++s) {
    auto [day_index, slot] = slots[s];
    std::string value = picks[s]->name + ", " + picks[s]->city;
    DayPlan& day = plan[static_cast<std::size_t>(day_index)];
    if (slot == 0)
      day.breakfast = value;
    else if (slot == 1)
      day.lunch = value;
    else
      day.dinner = value;
  }

  // Attractions: one distinct attraction per day, cheapest-first has no
  // meaning here so ties break lexically.
  std::vector<const AttractionRecord*> sights = sb.find_attractions(q.dest);
  std::sort(sights.begin(), sights.end(),
            [](const AttractionRecord* a, const AttractionRecord* b) { return a->name < b->name; });
  for (int i = 0; i < days && i < static_cast<int>(sights.size()); ++i)
    plan[static_cast<std::size_t>(i)].attraction =
        sights[static_cast<std::size_t>(i)]->name + ", " + sights[static_cast<std::size_t>(i)]->city;

  return serialize_plan(plan);
}

}  // namespace modulo
