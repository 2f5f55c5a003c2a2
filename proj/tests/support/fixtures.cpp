#include "support/fixtures.hpp"

#include <cstdlib>
#include <fstream>
#include <stdexcept>

namespace modulo::test {
namespace {

const std::vector<std::string> kCorpusCities = {"Asheville", "Boulder",  "Carmel",
                                                "Denton",    "Eugene",   "Fairfield"};
const std::vector<std::string> kCuisines = {"Chinese", "American", "Mediterranean",
                                            "Mexican", "Italian",  "French",
                                            "Indian"};

std::string corpus_date(int offset) {
  return Date{2022, 3, 13 + static_cast<unsigned>(offset)}.iso();
}

}  // namespace

std::filesystem::path test_data_dir() {
  return std::filesystem::path(MODULO_TEST_DATA_DIR);
}

std::filesystem::path mini_sandbox_dir() { return test_data_dir() / "mini_sandbox"; }

const Sandbox& mini_sandbox() {
  static const Sandbox sb = load_sandbox(mini_sandbox_dir());
  return sb;
}

Query witness_query() {
  Query q;
  q.org = "CityA";
  q.dest = "CityB";
  q.days = 2;
  q.visiting_city_number = 1;
  q.people_number = 1;
  q.budget = Money::from_dollars(10000);
  q.date_range = {Date{2022, 3, 13}, Date{2022, 3, 14}};
  return q;
}

Itinerary witness_plan() {
  Itinerary plan;
  DayPlan d1;
  d1.day = 1;
  d1.people_number = 1;
  d1.current_city = "from CityA to CityB";
  d1.transportation =
      "Flight, from CityA to CityB, Flight Number: F101, Departure Time: 17:30, "
      "Arrival Time: 19:35";
  d1.breakfast = "-";
  d1.attraction = "Old Fort, CityB";
  d1.lunch = "Lotus Garden, CityB";
  d1.dinner = "Corner Bistro, CityB";
  d1.accommodation = "Harbor House, CityB";
  plan.push_back(d1);

  DayPlan d2;
  d2.day = 2;
  d2.people_number = 1;
  d2.current_city = "from CityB to CityA";
  d2.transportation =
      "Flight, from CityB to CityA, Flight Number: F103, Departure Time: 18:00, "
      "Arrival Time: 20:05";
  d2.breakfast = "Casa Verde, CityB";
  d2.attraction = "River Walk, CityB";
  d2.lunch = "Harbor Grill, CityB";
  d2.dinner = "-";
  d2.accommodation = "-";
  plan.push_back(d2);
  return plan;
}

TempDir::TempDir() {
  auto base = std::filesystem::temp_directory_path() / "modulo-test-XXXXXX";
  std::string tmpl = base.string();
  if (!::mkdtemp(tmpl.data())) {
    throw std::runtime_error("mkdtemp failed for " + tmpl);
  }
  path_ = tmpl;
}

TempDir::~TempDir() {
  std::error_code ec;
  std::filesystem::remove_all(path_, ec);
}

void build_corpus_sandbox(const std::filesystem::path& dir, unsigned seed) {
  std::filesystem::create_directories(dir);
  const auto& cities = kCorpusCities;
  const int n = static_cast<int>(cities.size());

  {
    std::ofstream out(dir / "flights.csv");
    out << "Flight Number,Price,DepTime,ArrTime,ActualElapsedTime,FlightDate,"
           "OriginCityName,DestCityName,Distance\n";
    int number = 100;
    for (int day = 0; day < 4; ++day) {
      for (int a = 0; a < n; ++a) {
        for (int b = 0; b < n; ++b) {
          if (a == b) continue;
          int price = 90 + ((number * 37 + static_cast<int>(seed)) % 140);
          out << "F" << number << ',' << price << ".00,08:30,10:45,135,"
              << corpus_date(day) << ',' << cities[a] << ',' << cities[b]
              << ',' << (150 + 10 * (a + b)) << '\n';
          ++number;
        }
      }
    }
  }

  {
    std::ofstream out(dir / "accommodations.csv");
    out << "NAME,price,room type,house_rules,minimum nights,maximum occupancy,"
           "review rate number,city\n";
    const std::vector<std::string> room_types = {"entire room", "private room",
                                                 "entire room", "shared room"};
    const std::vector<std::string> house_rules = {
        "No smoking & No pets", "No parties & No visitors",
        "No children under 10", "No smoking"};
    const std::vector<int> min_nights = {1, 1, 2, 3};
    for (int a = 0; a < n; ++a) {
      for (int j = 0; j < 4; ++j) {
        int price = 60 + ((a * 4 + j) * 25 + static_cast<int>(seed)) % 120;
        out << cities[a] << " Stay " << (j + 1) << ',' << price << ".00,"
            << room_types[j] << ',' << house_rules[j] << ',' << min_nights[j]
            << ',' << (j % 4 + 2) << ",4," << cities[a] << '\n';
      }
    }
  }

  {
    std::ofstream out(dir / "restaurants.csv");
    out << "Name,Average Cost,Cuisines,Aggregate Rating,City\n";
    for (int a = 0; a < n; ++a) {
      for (int j = 0; j < 12; ++j) {
        int cost = 8 + ((a * 12 + j) * 7 + static_cast<int>(seed)) % 30;
        out << cities[a] << " Table " << (j + 1) << ',' << cost << ".00,"
            << kCuisines[j % kCuisines.size()] << ",4.2," << cities[a] << '\n';
      }
    }
  }

  {
    std::ofstream out(dir / "attractions.csv");
    out << "Name,Latitude,Longitude,Address,Phone,Website,City\n";
    for (int a = 0; a < n; ++a) {
      for (int j = 0; j < 8; ++j) {
        out << cities[a] << " Landmark " << (j + 1) << ",35.1,-82." << (10 + j)
            << ',' << (100 + j) << " Main St,555-010" << j << ",example.org,"
            << cities[a] << '\n';
      }
    }
  }

  {
    std::ofstream out(dir / "distances.csv");
    out << "origin_city,dest_city,distance,duration,available_modes\n";
    for (int a = 0; a < n; ++a) {
      for (int b = 0; b < n; ++b) {
        if (a == b) continue;
        out << cities[a] << ',' << cities[b] << ',' << (90 + 13 * (a + b))
            << ",2 hours 10 minutes,self-driving;taxi\n";
      }
    }
  }
}

void write_corpus_queries(const std::filesystem::path& path, int count) {
  const auto& cities = kCorpusCities;
  const int n = static_cast<int>(cities.size());
  std::ofstream out(path);
  for (int i = 0; i < count; ++i) {
    Query q;
    int a = i % n;
    int b = (i + 1 + i / n) % n;
    if (b == a) b = (b + 1) % n;
    q.org = cities[a];
    q.dest = cities[b];
    q.days = 2 + i % 3;
    q.visiting_city_number = 1;
    q.people_number = 1 + i % 4;
    q.budget = Money::from_dollars(9000 + 100 * i);
    for (int d = 0; d < q.days; ++d) {
      q.date_range.push_back(Date{2022, 3, 13 + static_cast<unsigned>(d)});
    }
    switch (i % 5) {
      case 0: {
        LocalConstraint lc;
        lc.cuisine = std::vector<std::string>{kCuisines[i % kCuisines.size()],
                                              kCuisines[(i + 3) % kCuisines.size()]};
        q.local_constraint = lc;
        break;
      }
      case 1: {
        LocalConstraint lc;
        lc.room_type = (i % 2 == 1) ? "entire room" : "private room";
        q.local_constraint = lc;
        break;
      }
      case 2: {
        LocalConstraint lc;
        const std::vector<std::string> rules = {"parties", "smoking", "pets",
                                                "visitors", "children under 10"};
        lc.house_rule = rules[(i / 5) % rules.size()];
        q.local_constraint = lc;
        break;
      }
      case 3: {
        LocalConstraint lc;
        lc.transportation = (i % 2 == 1) ? "no self-driving" : "no flight";
        q.local_constraint = lc;
        break;
      }
      default:
        break;
    }
    out << query_to_json(q).dump() << '\n';
  }
}

Itinerary random_itinerary(std::mt19937& rng) {
  auto pick = [&rng](const std::vector<std::string>& pool) {
    std::uniform_int_distribution<std::size_t> dist(0, pool.size() - 1);
    return pool[dist(rng)];
  };
  auto roll = [&rng](int bound) {
    std::uniform_int_distribution<int> dist(0, bound - 1);
    return dist(rng);
  };

  const std::vector<std::string> cities = {"CityA", "CityB", "CityC", "CityX"};
  const std::vector<std::string> flight_numbers = {"F100", "F101", "F102", "F103",
                                                   "F104", "F105", "F900"};
  const std::vector<std::string> meals = {
      "-",
      "Corner Bistro, CityB",
      "Harbor Grill, CityB",
      "Casa Verde, CityB",
      "Lotus Garden, CityB",
      "Bean Counter, CityA",
      "Quiet Corner, CityC",
      "Phantom Diner, CityB",
  };
  const std::vector<std::string> hotels = {
      "-",
      "Harbor House, CityB",
      "Seaside Inn, CityB",
      "Old Mill Lodge, CityA",
      "Hilltop Rooms, CityC",
      "Ghost Hotel, CityB",
  };
  const std::vector<std::string> attractions = {
      "-",
      "Old Fort, CityB",
      "River Walk, CityB",
      "Science Museum, CityB",
      "Art House, CityA",
      "Stone Bridge, CityC",
  };

  Itinerary plan;
  int days = 1 + roll(3);
  int people = 1 + roll(4);
  for (int d = 1; d <= days; ++d) {
    DayPlan day;
    day.day = d;
    day.people_number = people;
    std::string from = pick(cities);
    std::string to = pick(cities);
    int kind = roll(4);
    if (kind == 0 || from == to) {
      day.current_city = pick(cities);
      day.transportation = "-";
    } else {
      day.current_city = "from " + from + " to " + to;
      switch (kind) {
        case 1:
          day.transportation = "Flight, from " + from + " to " + to +
                               ", Flight Number: " + pick(flight_numbers);
          break;
        case 2:
          day.transportation = "Taxi, from " + from + " to " + to;
          break;
        default:
          day.transportation = "Self-driving, from " + from + " to " + to;
          break;
      }
    }
    day.breakfast = pick(meals);
    day.lunch = pick(meals);
    day.dinner = pick(meals);
    day.attraction = pick(attractions);
    day.accommodation = pick(hotels);
    plan.push_back(day);
  }
  return plan;
}

}  // namespace modulo::test
