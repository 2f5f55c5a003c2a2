#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "modulo/dates.hpp"
#include "modulo/money.hpp"

namespace modulo {

// ---------------------------------------------------------------------------
// Domain records
// ---------------------------------------------------------------------------

struct FlightRecord {
  std::string flight_number;
  Money price;           // per person
  int dep_time = 0;      // minutes since midnight
  int arr_time = 0;      // minutes since midnight
  int elapsed = 0;       // minutes
  Date flight_date;
  std::string origin_city;
  std::string dest_city;
  double distance_miles = 0.0;
};

struct AccommodationRecord {
  std::string name;
  Money price;  // per room-night
  std::string room_type;
  std::string house_rules;
  int minimum_nights = 1;
  int maximum_occupancy = 1;
  std::string city;
};

struct RestaurantRecord {
  std::string name;
  Money average_cost;  // per person per meal
  std::vector<std::string> cuisines;
  double rating = 0.0;
  std::string city;
};

struct AttractionRecord {
  std::string name;
  double latitude = 0.0;
  double longitude = 0.0;
  std::string address;
  std::string phone;
  std::string website;
  std::string city;
};

enum class TransportMode { flight, self_driving, taxi };

std::optional<TransportMode> transport_mode_from_string(std::string_view text);
std::string to_string(TransportMode mode);

struct DistanceRecord {
  std::string origin_city;
  std::string dest_city;
  double distance_miles = 0.0;
  int duration_minutes = 0;
  std::vector<TransportMode> available_modes;  // ground modes only
};

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

/// Ground-transport pricing knobs. The dataset files carry no taxi or
/// self-driving prices, so costs come from these per-mile rates; defaults are
/// deliberate stand-ins and every key can be overridden in sandbox.toml.
struct TransportCostConfig {
  double taxi_rate_per_mile = 1.0;
  double drive_rate_per_mile = 0.05;
  int taxi_capacity = 4;
  int car_capacity = 5;
};

struct LoadDiagnostic {
  std::string file;
  std::size_t row = 0;  // 1-based data row number (header excluded)
  std::string message;
};

struct LoadReport {
  std::map<std::string, std::size_t> row_counts;  // per dataset file
  std::vector<LoadDiagnostic> diagnostics;        // rejected rows
};

/// Trim + ASCII casefold; the canonical key for every city comparison.
std::string normalize_city(std::string_view city);

/// Immutable, indexed view over the five dataset files. Lookups are total:
/// unknown keys return empty lists. Result order is file order, so repeated
/// identical lookups return identically ordered results.
class Sandbox {
public:
  std::vector<const FlightRecord*> find_flights(std::string_view origin, std::string_view dest,
                                                const Date& date) const;
  std::vector<const FlightRecord*> find_flights_any_date(std::string_view origin,
                                                         std::string_view dest) const;
  const FlightRecord* find_flight_by_number(std::string_view flight_number,
                                            std::string_view origin,
                                            std::string_view dest) const;

  std::vector<const AccommodationRecord*> find_accommodations(std::string_view city) const;
  std::vector<const RestaurantRecord*> find_restaurants(std::string_view city) const;
  std::vector<const AttractionRecord*> find_attractions(std::string_view city) const;

  const AccommodationRecord* find_accommodation_by_name(std::string_view name,
                                                        std::string_view city) const;
  const RestaurantRecord* find_restaurant_by_name(std::string_view name,
                                                  std::string_view city) const;
  const AttractionRecord* find_attraction_by_name(std::string_view name,
                                                  std::string_view city) const;

  const DistanceRecord* find_distance(std::string_view origin, std::string_view dest) const;

  const std::vector<FlightRecord>& flights() const { return flights_; }
  const std::vector<AccommodationRecord>& accommodations() const { return accommodations_; }
  const std::vector<RestaurantRecord>& restaurants() const { return restaurants_; }
  const std::vector<AttractionRecord>& attractions() const { return attractions_; }
  const std::vector<DistanceRecord>& distances() const { return distances_; }

  const TransportCostConfig& transport_config() const { return transport_config_; }
  const LoadReport& load_report() const { return report_; }

private:
  friend Sandbox load_sandbox(const std::filesystem::path&);
  friend Sandbox load_sandbox(const std::filesystem::path&, const TransportCostConfig&);
  void build_indexes();

  std::vector<FlightRecord> flights_;
  std::vector<AccommodationRecord> accommodations_;
  std::vector<RestaurantRecord> restaurants_;
  std::vector<AttractionRecord> attractions_;
  std::vector<DistanceRecord> distances_;
  TransportCostConfig transport_config_;
  LoadReport report_;

  std::unordered_map<std::string, std::vector<std::size_t>> flights_by_route_;  // "a|b"
  std::unordered_map<std::string, std::vector<std::size_t>> accommodations_by_city_;
  std::unordered_map<std::string, std::vector<std::size_t>> restaurants_by_city_;
  std::unordered_map<std::string, std::vector<std::size_t>> attractions_by_city_;
  std::unordered_map<std::string, std::size_t> distance_by_route_;
};

/// Loads flights.csv, accommodations.csv, restaurants.csv, attractions.csv
/// and distances.csv from `root`, plus transport rates from sandbox.toml when
/// present. Malformed rows are skipped and reported with their row number;
/// a missing file or a file with zero valid rows throws LoadError.
Sandbox load_sandbox(const std::filesystem::path& root);
Sandbox load_sandbox(const std::filesystem::path& root, const TransportCostConfig& config);

/// Parses the `key = value` config format used by sandbox.toml. Unknown keys
/// are ignored; section headers ("[transport]") only qualify the key names.
std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path);
TransportCostConfig transport_config_from_map(const std::map<std::string, std::string>& kv);

// ---------------------------------------------------------------------------
// Cost tooling
// ---------------------------------------------------------------------------

/// Trip-leg cost for `people` travelers.
///   flight       price(flight_number) x people
///   taxi         round_to_cents(distance x taxi_rate)  x ceil(people / taxi_capacity)
///   self-driving round_to_cents(distance x drive_rate) x ceil(people / car_capacity)
/// Throws LookupError for an unknown flight number or missing distance record,
/// std::invalid_argument when a flight is requested without a flight number.
Money get_cost_of_transport(const Sandbox& sb, std::string_view origin, std::string_view dest,
                            TransportMode mode, int people,
                            const std::optional<std::string>& flight_number = std::nullopt);

}  // namespace modulo
