#include "modulo/sandbox.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include "modulo/csv.hpp"
#include "modulo/errors.hpp"

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

std::string route_key(std::string_view origin, std::string_view dest) {
  return normalize_city(origin) + '\x1f' + normalize_city(dest);
}

std::optional<double> parse_double(std::string_view text) {
  std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  double value = 0.0;
  const char* begin = t.data();
  const char* end = begin + t.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc{} || ptr != end) return std::nullopt;
  return value;
}

std::optional<int> parse_int(std::string_view text) {
  std::string t = trim(text);
  if (t.empty()) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), value);
  if (ec != std::errc{} || ptr != t.data() + t.size()) return std::nullopt;
  return value;
}

// Column access by header name; real benchmark files carry extra columns
// (e.g. "review rate number") which are simply ignored.
class RowView {
public:
  RowView(const std::vector<std::string>& header, const std::vector<std::string>& row)
      : header_(header), row_(row) {}

  const std::string* get(std::string_view column) const {
    for (std::size_t i = 0; i < header_.size(); ++i) {
      if (header_[i] == column) return i < row_.size() ? &row_[i] : nullptr;
    }
    return nullptr;
  }

private:
  const std::vector<std::string>& header_;
  const std::vector<std::string>& row_;
};

struct RowError {
  std::string message;
};

using Diag = std::function<void(const std::string&)>;

std::optional<std::string> required(const RowView& row, std::string_view column, const Diag& diag) {
  const std::string* value = row.get(column);
  if (!value || trim(*value).empty()) {
    diag("missing value for column '" + std::string(column) + "'");
    return std::nullopt;
  }
  return trim(*value);
}

std::vector<std::string> split_list(std::string_view text, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t pos = text.find(sep, start);
    std::string_view piece =
        pos == std::string_view::npos ? text.substr(start) : text.substr(start, pos - start);
    std::string item = trim(piece);
    if (!item.empty()) out.push_back(item);
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

}  // namespace

std::string normalize_city(std::string_view city) { return fold(city); }

std::optional<TransportMode> transport_mode_from_string(std::string_view text) {
  std::string t = fold(text);
  std::replace(t.begin(), t.end(), '_', '-');
  std::replace(t.begin(), t.end(), ' ', '-');
  if (t == "flight") return TransportMode::flight;
  if (t == "self-driving") return TransportMode::self_driving;
  if (t == "taxi") return TransportMode::taxi;
  return std::nullopt;
}

std::string to_string(TransportMode mode) {
  switch (mode) {
    case TransportMode::flight: return "flight";
    case TransportMode::self_driving: return "self-driving";
    case TransportMode::taxi: return "taxi";
  }
  return "flight";
}

// ---------------------------------------------------------------------------
// Loading
// ---------------------------------------------------------------------------

namespace {

void load_flights(const csv::Table& table, std::vector<FlightRecord>& out, const Diag& diag) {
  for (const auto& raw : table.rows) {
    RowView row(table.header, raw);
    auto number = required(row, "Flight Number", diag);
    auto price = required(row, "Price", diag);
    auto dep = required(row, "DepTime", diag);
    auto arr = required(row, "ArrTime", diag);
    auto elapsed = required(row, "ActualElapsedTime", diag);
    auto date = required(row, "FlightDate", diag);
    auto origin = required(row, "OriginCityName", diag);
    auto dest = required(row, "DestCityName", diag);
    auto distance = required(row, "Distance", diag);
    if (!number || !price || !dep || !arr || !elapsed || !date || !origin || !dest || !distance)
      continue;

    FlightRecord rec;
    rec.flight_number = *number;
    auto money = Money::parse(*price);
    auto dep_min = parse_time_of_day(*dep);
    auto arr_min = parse_time_of_day(*arr);
    auto elapsed_min = parse_duration_minutes(*elapsed);
    auto flight_date = Date::from_iso(*date);
    auto dist = parse_double(*distance);
    if (!money) { diag("unparseable Price '" + *price + "'"); continue; }
    if (!dep_min) { diag("unparseable DepTime '" + *dep + "'"); continue; }
    if (!arr_min) { diag("unparseable ArrTime '" + *arr + "'"); continue; }
    if (!elapsed_min) { diag("unparseable ActualElapsedTime '" + *elapsed + "'"); continue; }
    if (!flight_date) { diag("unparseable FlightDate '" + *date + "'"); continue; }
    if (!dist) { diag("unparseable Distance '" + *distance + "'"); continue; }
    if (*money < Money{}) { diag("negative Price"); continue; }
    if (*dist < 0) { diag("negative Distance"); continue; }
    if (normalize_city(*origin) == normalize_city(*dest)) {
      diag("origin equals destination");
      continue;
    }
    rec.price = *money;
    rec.dep_time = *dep_min;
    rec.arr_time = *arr_min;
    rec.elapsed = *elapsed_min;
    rec.flight_date = *flight_date;
    rec.origin_city = *origin;
    rec.dest_city = *dest;
    rec.distance_miles = *dist;
    out.push_back(std::move(rec));
  }
}

void load_accommodations(const csv::Table& table, std::vector<AccommodationRecord>& out,
                         const Diag& diag) {
  for (const auto& raw : table.rows) {
    RowView row(table.header, raw);
    auto name = required(row, "NAME", diag);
    auto price = required(row, "price", diag);
    auto room_type = required(row, "room type", diag);
    auto min_nights = required(row, "minimum nights", diag);
    auto max_occ = required(row, "maximum occupancy", diag);
    auto city = required(row, "city", diag);
    if (!name || !price || !room_type || !min_nights || !max_occ || !city) continue;

    const std::string* rules = row.get("house_rules");
    auto money = Money::parse(*price);
    auto nights = parse_int(*min_nights);
    auto occupancy = parse_int(*max_occ);
    if (!money) { diag("unparseable price '" + *price + "'"); continue; }
    if (!nights) { diag("unparseable minimum nights '" + *min_nights + "'"); continue; }
    if (!occupancy) { diag("unparseable maximum occupancy '" + *max_occ + "'"); continue; }
    if (*money < Money{}) { diag("negative price"); continue; }
    if (*nights < 1) { diag("minimum nights below 1"); continue; }
    if (*occupancy < 1) { diag("maximum occupancy below 1"); continue; }

    AccommodationRecord rec;
    rec.name = *name;
    rec.price = *money;
    rec.room_type = *room_type;
    rec.house_rules = rules ? trim(*rules) : "";
    rec.minimum_nights = *nights;
    rec.maximum_occupancy = *occupancy;
    rec.city = *city;
    out.push_back(std::move(rec));
  }
}

void load_restaurants(const csv::Table& table, std::vector<RestaurantRecord>& out,
                      const Diag& diag) {
  for (const auto& raw : table.rows) {
    RowView row(table.header, raw);
    auto name = required(row, "Name", diag);
    auto cost = required(row, "Average Cost", diag);
    auto cuisines = required(row, "Cuisines", diag);
    auto rating = required(row, "Aggregate Rating", diag);
    auto city = required(row, "City", diag);
    if (!name || !cost || !cuisines || !rating || !city) continue;

    auto money = Money::parse(*cost);
    auto stars = parse_double(*rating);
    if (!money) { diag("unparseable Average Cost '" + *cost + "'"); continue; }
    if (!stars) { diag("unparseable Aggregate Rating '" + *rating + "'"); continue; }
    if (*money < Money{}) { diag("negative Average Cost"); continue; }

    RestaurantRecord rec;
    rec.name = *name;
    rec.average_cost = *money;
    rec.cuisines = split_list(*cuisines, ',');
    rec.rating = *stars;
    rec.city = *city;
    out.push_back(std::move(rec));
  }
}

void load_attractions(const csv::Table& table, std::vector<AttractionRecord>& out,
                      const Diag& diag) {
  for (const auto& raw : table.rows) {
    RowView row(table.header, raw);
    auto name = required(row, "Name", diag);
    auto lat = required(row, "Latitude", diag);
    auto lon = required(row, "Longitude", diag);
    auto city = required(row, "City", diag);
    if (!name || !lat || !lon || !city) continue;

    auto latitude = parse_double(*lat);
    auto longitude = parse_double(*lon);
    if (!latitude) { diag("unparseable Latitude '" + *lat + "'"); continue; }
    if (!longitude) { diag("unparseable Longitude '" + *lon + "'"); continue; }
    if (*latitude < -90.0 || *latitude > 90.0) { diag("Latitude out of range"); continue; }
    if (*longitude < -180.0 || *longitude > 180.0) { diag("Longitude out of range"); continue; }

    const std::string* address = row.get("Address");
    const std::string* phone = row.get("Phone");
    const std::string* website = row.get("Website");

    AttractionRecord rec;
    rec.name = *name;
    rec.latitude = *latitude;
    rec.longitude = *longitude;
    rec.address = address ? trim(*address) : "";
    rec.phone = phone ? trim(*phone) : "";
    rec.website = website ? trim(*website) : "";
    rec.city = *city;
    out.push_back(std::move(rec));
  }
}

void load_distances(const csv::Table& table, std::vector<DistanceRecord>& out, const Diag& diag) {
  for (const auto& raw : table.rows) {
    RowView row(table.header, raw);
    auto origin = required(row, "origin_city", diag);
    auto dest = required(row, "dest_city", diag);
    auto distance = required(row, "distance", diag);
    auto duration = required(row, "duration", diag);
    auto modes = required(row, "available_modes", diag);
    if (!origin || !dest || !distance || !duration || !modes) continue;

    auto dist = parse_double(*distance);
    auto minutes = parse_duration_minutes(*duration);
    if (!dist) { diag("unparseable distance '" + *distance + "'"); continue; }
    if (!minutes) { diag("unparseable duration '" + *duration + "'"); continue; }
    if (*dist < 0) { diag("negative distance"); continue; }

    DistanceRecord rec;
    rec.origin_city = *origin;
    rec.dest_city = *dest;
    rec.distance_miles = *dist;
    rec.duration_minutes = *minutes;
    bool modes_ok = true;
    for (const auto& piece : split_list(*modes, ';')) {
      auto mode = transport_mode_from_string(piece);
      if (!mode || *mode == TransportMode::flight) {
        diag("unknown ground mode '" + piece + "'");
        modes_ok = false;
        break;
      }
      rec.available_modes.push_back(*mode);
    }
    if (!modes_ok) continue;
    out.push_back(std::move(rec));
  }
}

}  // namespace

std::map<std::string, std::string> parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open config " + path.string());
  std::map<std::string, std::string> kv;
  std::string line;
  std::string section;
  while (std::getline(in, line)) {
    std::string t = trim(line);
    if (t.empty() || t[0] == '#') continue;
    if (t.front() == '[' && t.back() == ']') {
      section = trim(t.substr(1, t.size() - 2));
      continue;
    }
    std::size_t eq = t.find('=');
    if (eq == std::string::npos) continue;
    std::string key = trim(t.substr(0, eq));
    std::string value = trim(t.substr(eq + 1));
    if (!value.empty() && value.front() == '"' && value.back() == '"' && value.size() >= 2)
      value = value.substr(1, value.size() - 2);
    if (!section.empty()) key = section + "." + key;
    kv[key] = value;
  }
  return kv;
}

TransportCostConfig transport_config_from_map(const std::map<std::string, std::string>& kv) {
  TransportCostConfig cfg;
  auto lookup = [&](const std::string& name) -> std::optional<std::string> {
    auto qualified = kv.find("transport." + name);
    if (qualified != kv.end()) return qualified->second;
    auto bare = kv.find(name);
    if (bare != kv.end()) return bare->second;
    return std::nullopt;
  };
  if (auto v = lookup("taxi_rate_per_mile")) {
    if (auto d = parse_double(*v)) cfg.taxi_rate_per_mile = *d;
  }
  if (auto v = lookup("drive_rate_per_mile")) {
    if (auto d = parse_double(*v)) cfg.drive_rate_per_mile = *d;
  }
  if (auto v = lookup("taxi_capacity")) {
    if (auto n = parse_int(*v)) cfg.taxi_capacity = *n;
  }
  if (auto v = lookup("car_capacity")) {
    if (auto n = parse_int(*v)) cfg.car_capacity = *n;
  }
  return cfg;
}

Sandbox load_sandbox(const std::filesystem::path& root) {
  TransportCostConfig cfg;
  auto config_path = root / "sandbox.toml";
  if (std::filesystem::exists(config_path))
    cfg = transport_config_from_map(parse_config_file(config_path));
  return load_sandbox(root, cfg);
}

Sandbox load_sandbox(const std::filesystem::path& root, const TransportCostConfig& config) {
  Sandbox sb;
  sb.transport_config_ = config;

  auto load_one = [&](const char* file, auto loader, auto& storage) {
    auto path = root / file;
    if (!std::filesystem::exists(path)) throw LoadError("missing dataset file " + path.string());
    csv::Table table = csv::read_file(path);
    std::size_t row_number = 0;
    // Row numbers restart per diagnostic batch: the loader calls diag within
    // the row it is currently parsing.
    std::size_t current = 0;
    auto diag = [&](const std::string& message) {
      sb.report_.diagnostics.push_back({file, current, message});
    };
    // Wrap the loader so each row knows its 1-based index.
    csv::Table one;
    one.header = table.header;
    for (const auto& row : table.rows) {
      ++row_number;
      current = row_number;
      one.rows.assign(1, row);
      loader(one, storage, diag);
    }
    sb.report_.row_counts[file] = storage.size();
    if (storage.empty()) throw LoadError(std::string("no valid rows in ") + path.string());
  };

  load_one("flights.csv", [](auto&&... a) { load_flights(a...); }, sb.flights_);
  load_one("accommodations.csv", [](auto&&... a) { load_accommodations(a...); },
           sb.accommodations_);
  load_one("restaurants.csv", [](auto&&... a) { load_restaurants(a...); }, sb.restaurants_);
  load_one("attractions.csv", [](auto&&... a) { load_attractions(a...); }, sb.attractions_);
  load_one("distances.csv", [](auto&&... a) { load_distances(a...); }, sb.distances_);

  sb.build_indexes();
  return sb;
}

void Sandbox::build_indexes() {
  for (std::size_t i = 0; i < flights_.size(); ++i)
    flights_by_route_[route_key(flights_[i].origin_city, flights_[i].dest_city)].push_back(i);
  for (std::size_t i = 0; i < accommodations_.size(); ++i)
    accommodations_by_city_[normalize_city(accommodations_[i].city)].push_back(i);
  for (std::size_t i = 0; i < restaurants_.size(); ++i)
    restaurants_by_city_[normalize_city(restaurants_[i].city)].push_back(i);
  for (std::size_t i = 0; i < attractions_.size(); ++i)
    attractions_by_city_[normalize_city(attractions_[i].city)].push_back(i);
  for (std::size_t i = 0; i < distances_.size(); ++i) {
    // first record wins for duplicate directed pairs
    distance_by_route_.emplace(route_key(distances_[i].origin_city, distances_[i].dest_city), i);
  }
}

std::vector<const FlightRecord*> Sandbox::find_flights(std::string_view origin,
                                                       std::string_view dest,
                                                       const Date& date) const {
  std::vector<const FlightRecord*> out;
  auto it = flights_by_route_.find(route_key(origin, dest));
  if (it == flights_by_route_.end()) return out;
  for (std::size_t i : it->second) {
    if (flights_[i].flight_date == date) out.push_back(&flights_[i]);
  }
  return out;
}

std::vector<const FlightRecord*> Sandbox::find_flights_any_date(std::string_view origin,
                                                                std::string_view dest) const {
  std::vector<const FlightRecord*> out;
  auto it = flights_by_route_.find(route_key(origin, dest));
  if (it == flights_by_route_.end()) return out;
  for (std::size_t i : it->second) out.push_back(&flights_[i]);
  return out;
}

const FlightRecord* Sandbox::find_flight_by_number(std::string_view flight_number,
                                                   std::string_view origin,
                                                   std::string_view dest) const {
  std::string wanted = fold(flight_number);
  for (const FlightRecord* rec : find_flights_any_date(origin, dest)) {
    if (fold(rec->flight_number) == wanted) return rec;
  }
  return nullptr;
}

std::vector<const AccommodationRecord*> Sandbox::find_accommodations(std::string_view city) const {
  std::vector<const AccommodationRecord*> out;
  auto it = accommodations_by_city_.find(normalize_city(city));
  if (it == accommodations_by_city_.end()) return out;
  for (std::size_t i : it->second) out.push_back(&accommodations_[i]);
  return out;
}

std::vector<const RestaurantRecord*> Sandbox::find_restaurants(std::string_view city) const {
  std::vector<const RestaurantRecord*> out;
  auto it = restaurants_by_city_.find(normalize_city(city));
  if (it == restaurants_by_city_.end()) return out;
  for (std::size_t i : it->second) out.push_back(&restaurants_[i]);
  return out;
}

std::vector<const AttractionRecord*> Sandbox::find_attractions(std::string_view city) const {
  std::vector<const AttractionRecord*> out;
  auto it = attractions_by_city_.find(normalize_city(city));
  if (it == attractions_by_city_.end()) return out;
  for (std::size_t i : it->second) out.push_back(&attractions_[i]);
  return out;
}

const AccommodationRecord* Sandbox::find_accommodation_by_name(std::string_view name,
                                                               std::string_view city) const {
  std::string wanted = fold(name);
  for (const AccommodationRecord* rec : find_accommodations(city)) {
    if (fold(rec->name) == wanted) return rec;
  }
  return nullptr;
}

const RestaurantRecord* Sandbox::find_restaurant_by_name(std::string_view name,
                                                         std::string_view city) const {
  std::string wanted = fold(name);
  for (const RestaurantRecord* rec : find_restaurants(city)) {
    if (fold(rec->name) == wanted) return rec;
  }
  return nullptr;
}

const AttractionRecord* Sandbox::find_attraction_by_name(std::string_view name,
                                                         std::string_view city) const {
  std::string wanted = fold(name);
  for (const AttractionRecord* rec : find_attractions(city)) {
    if (fold(rec->name) == wanted) return rec;
  }
  return nullptr;
}

const DistanceRecord* Sandbox::find_distance(std::string_view origin, std::string_view dest) const {
  auto it = distance_by_route_.find(route_key(origin, dest));
  if (it == distance_by_route_.end()) return nullptr;
  return &distances_[it->second];
}

Money get_cost_of_transport(const Sandbox& sb, std::string_view origin, std::string_view dest,
                            TransportMode mode, int people,
                            const std::optional<std::string>& flight_number) {
  if (people < 1) throw std::invalid_argument("people must be positive");
  const TransportCostConfig& cfg = sb.transport_config();
  auto groups = [&](int capacity) {
    return static_cast<std::int64_t>((people + capacity - 1) / capacity);
  };
  switch (mode) {
    case TransportMode::flight: {
      if (!flight_number) throw std::invalid_argument("flight cost requires a flight number");
      const FlightRecord* rec = sb.find_flight_by_number(*flight_number, origin, dest);
      if (!rec)
        throw LookupError("no flight " + *flight_number + " from " + std::string(origin) +
                          " to " + std::string(dest));
      return rec->price * people;
    }
    case TransportMode::taxi:
    case TransportMode::self_driving: {
      const DistanceRecord* rec = sb.find_distance(origin, dest);
      if (!rec)
        throw LookupError("no distance record from " + std::string(origin) + " to " +
                          std::string(dest));
      double rate = mode == TransportMode::taxi ? cfg.taxi_rate_per_mile : cfg.drive_rate_per_mile;
      int capacity = mode == TransportMode::taxi ? cfg.taxi_capacity : cfg.car_capacity;
      Money per_group = Money::from_dollars(rec->distance_miles * rate);
      return per_group * groups(capacity);
    }
  }
  throw std::invalid_argument("unknown transport mode");
}

}  // namespace modulo
