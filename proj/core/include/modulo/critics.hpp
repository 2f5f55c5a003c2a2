#pragma once

#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "modulo/itinerary.hpp"
#include "modulo/money.hpp"
#include "modulo/query.hpp"
#include "modulo/sandbox.hpp"

namespace modulo {

enum class CriticGroup { format, commonsense, hard };

std::string to_string(CriticGroup group);

// Binary verdict paired with corrective feedback. A passing verdict carries
// an empty backprompt; a failing one names the constraint and the offending
// values, prefixed with "[<critic_id>] " so feedback stays attributable after
// consolidation.
struct CriticVerdict {
  std::string critic_id;
  CriticGroup group = CriticGroup::format;
  bool passed = false;
  std::string backprompt;
};

enum class CriticSelector { All, Common, Hard, Json };

std::optional<CriticSelector> selector_from_string(std::string_view text);
std::string to_string(CriticSelector selector);

struct CriticInfo {
  std::string id;
  CriticGroup group;
  std::string description;
};

// Registry order: format first, then commonsense, then hard. Verdict order
// and backprompt consolidation both follow this order.
const std::vector<CriticInfo>& critic_catalog();

// Catalog entries active under a selector, in registry order. The format
// critic is a member of every selection.
std::vector<CriticInfo> select_critics(CriticSelector selector);

nlohmann::json catalog_to_json();

// Which meal slots may legitimately be "-". Arrival and departure days skip
// meals in real trips, so the default excuses the first breakfast and the
// last dinner.
struct MealMask {
  bool optional_breakfast_first_day = true;
  bool optional_dinner_final_day = true;

  static MealMask strict() { return MealMask{false, false}; }
};

struct CriticOptions {
  MealMask meal_mask;
  bool flag_mode_conflict = true;  // self-driving and flight in one trip
};

// Total trip cost: transport legs, meals, and room-nights. "-" slots and
// unlookupable names contribute zero; the Validate Itinerary critic is the
// place where unknown names turn into failures.
Money get_total_cost(const Itinerary& it, const Query& q, const Sandbox& sb);

// Runs the selected critics against a reformatter outcome. When the input is
// a reformat failure or the format critic fails, the single format verdict is
// the entire result; no other critic sees an unparseable plan.
std::vector<CriticVerdict> run_critics(CriticSelector selector, const ReformatResult& input,
                                       const Query& q, const Sandbox& sb,
                                       const CriticOptions& options = {});

// Prompt asking an LLM to write the named critic against the documented plan
// schema and sandbox helpers. Pure templating; throws LookupError for ids
// outside the catalog.
std::string emit_extraction_prompt(const std::string& critic_id);

}  // namespace modulo
