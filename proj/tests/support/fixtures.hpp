#pragma once

#include <filesystem>
#include <random>
#include <string>
#include <vector>

#include "modulo/itinerary.hpp"
#include "modulo/query.hpp"
#include "modulo/sandbox.hpp"

namespace modulo::test {

/// Directory holding the checked-in CSV fixtures.
std::filesystem::path test_data_dir();
std::filesystem::path mini_sandbox_dir();

/// The mini sandbox, loaded once per process.
const Sandbox& mini_sandbox();

/// Two-day CityA -> CityB trip over 2022-03-13..14 for one person with a
/// generous budget; the cheapest plan the mini sandbox admits passes every
/// critic.
Query witness_query();

/// The itinerary the greedy generator produces for witness_query(); passes
/// all critics against the mini sandbox. Total cost $360.
Itinerary witness_plan();

/// Creates a unique directory under the system temp dir and removes it,
/// recursively, on destruction.
class TempDir {
 public:
  TempDir();
  ~TempDir();
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;

  const std::filesystem::path& path() const { return path_; }
  std::filesystem::path file(const std::string& name) const { return path_ / name; }

 private:
  std::filesystem::path path_;
};

/// Writes a six-city sandbox (flights between every city pair on each trip
/// date, four hotels / twelve restaurants / eight attractions per city) into
/// `dir`. Deterministic for a given seed.
void build_corpus_sandbox(const std::filesystem::path& dir, unsigned seed = 0);

/// Writes `count` structured queries (JSON lines) that the greedy generator
/// can solve against the corpus sandbox: distinct city pairs, 2-4 days,
/// 1-4 travelers, mixed local constraints, generous budgets.
void write_corpus_queries(const std::filesystem::path& path, int count = 20);

/// A schema-valid itinerary with randomized contents drawn from mini-sandbox
/// names plus unknown entities, empty markers, and odd routes. Exercises the
/// cost model; makes no promise about passing any critic.
Itinerary random_itinerary(std::mt19937& rng);

}  // namespace modulo::test
