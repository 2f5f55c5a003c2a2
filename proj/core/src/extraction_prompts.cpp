#include <string>

#include "modulo/critics.hpp"
#include "modulo/errors.hpp"

namespace modulo {

namespace {

const char* kSchemaBlock =
    "The plan is a JSON array of day objects. Every day object carries exactly these keys:\n"
    "  day (integer, 1-based and consecutive), people_number (integer, same on every day),\n"
    "  current_city (string; \"from <city> to <city>\" on travel days),\n"
    "  transportation (string; \"<mode>, from <city> to <city>\" with optional \"Flight Number:"
    " <id>\", \"Departure Time: <hh:mm>\", \"Arrival Time: <hh:mm>\" segments),\n"
    "  breakfast, lunch, dinner (strings; \"<name>, <city>\"),\n"
    "  attraction (string; semicolon-separated \"<name>, <city>\" entries),\n"
    "  accommodation (string; \"<name>, <city>\").\n"
    "The string \"-\" marks an intentionally empty slot.\n";

const char* kDataBlock =
    "Sandbox dataframes and their keys:\n"
    "  flights: Flight Number, Price, DepTime, ArrTime, ActualElapsedTime, FlightDate,"
    " OriginCityName, DestCityName, Distance\n"
    "  accommodations: NAME, price, room type, house_rules, minimum nights, maximum occupancy,"
    " review rate number, city\n"
    "  restaurants: Name, Average Cost, Cuisines, Aggregate Rating, City\n"
    "  attractions: Name, Latitude, Longitude, Address, Phone, Website, City\n"
    "  distances: origin_city, dest_city, distance, duration, available_modes\n";

const char* kToolsBlock =
    "Helper functions you may call:\n"
    "  get_total_cost(plan, query, sandbox) calculates the total cost of the trip: transport"
    " legs, meals, and room-nights.\n"
    "  get_cost_of_transport(source, destination, mode_of_travel, people, flight_number) prices"
    " one leg.\n"
    "  find_flights(origin, dest, date), find_accommodations(city), find_restaurants(city),"
    " find_attractions(city), find_distance(origin, dest) look rows up in the sandbox.\n";

std::string task_statement(const CriticInfo& info) {
  if (info.id == "valid_cost")
    return "Use get_total_cost to compute the trip's total cost and compare it against"
           " query.budget; the plan passes only when the total does not exceed the budget.";
  if (info.id == "is_valid_accommodation")
    return "Check every accommodation entry: it must exist in the sandbox for the city where"
           " that night is spent, match the query's room_type and house_rule constraints when"
           " set, and be booked for at least its minimum nights.";
  if (info.id == "is_valid_information")
    return "Check the trip's structure: the day count matches the query, day 1 departs the"
           " origin city, consecutive days connect, the final day returns to the origin, the"
           " number of distinct visited cities matches, and every named flight, restaurant,"
           " attraction and accommodation exists in the sandbox for its stated city and date.";
  if (info.id == "valid_cuisine")
    return "Collect the cuisines of every chosen restaurant and check that each cuisine in"
           " query.local_constraint.cuisine appears at least once.";
  if (info.id == "valid_transportation")
    return "Check that no day uses a transport mode the query forbids, and that the trip never"
           " mixes self-driving with flights.";
  if (info.id == "complete_information")
    return "Check that no required slot holds \"-\": meals apart from the first day's breakfast"
           " and the last day's dinner, at least one attraction per day, and accommodation on"
           " every night of the trip.";
  if (info.id == "diverse_restaurants")
    return "Check that no restaurant name appears in more than one meal slot across the trip.";
  if (info.id == "diverse_attractions")
    return "Check that no attraction name appears more than once across the trip.";
  return "Check that the reply parses as the plan schema above: a JSON array of day objects"
         " with all nine keys present and well typed on every day.";
}

}  // namespace

std::string emit_extraction_prompt(const std::string& critic_id) {
  const CriticInfo* info = nullptr;
  for (const CriticInfo& candidate : critic_catalog()) {
    if (candidate.id == critic_id) info = &candidate;
  }
  if (!info) {
    std::string known;
    for (const CriticInfo& candidate : critic_catalog()) {
      if (!known.empty()) known += ", ";
      known += candidate.id;
    }
    throw LookupError("unknown critic id \"" + critic_id + "\"; known ids: " + known);
  }

  std::string prompt;
  prompt += "Write a Python function named " + info->id +
            "(plan, query, sandbox) that returns a tuple (passed: bool, feedback: str).\n\n";
  prompt += kSchemaBlock;
  prompt += "\n";
  prompt += kDataBlock;
  prompt += "\n";
  prompt += kToolsBlock;
  prompt += "\nTask: ";
  prompt += task_statement(*info);
  prompt +=
      "\nWhen the check fails, the feedback string must name the violated constraint and the"
      " offending values. Return the function body only.\n";
  return prompt;
}

}  // namespace modulo
