#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "modulo/critics.hpp"
#include "modulo/generator.hpp"
#include "modulo/itinerary.hpp"
#include "modulo/query.hpp"
#include "modulo/sandbox.hpp"

namespace modulo {

// The pieces of one generation prompt. render() concatenates them in a fixed
// order, so equal bundles render byte-identically.
struct PromptBundle {
  std::string instructions;
  std::string context;           // sandbox rows relevant to the query
  std::string output_format;
  std::string few_shot;
  std::string backprompt_block;  // empty on the first iteration

  std::string render() const;
};

// Prompt for one iteration: trip statement, the sandbox rows for the route
// (both directions, trip dates), schema instructions, a one-day worked
// example, and the consolidated feedback from the previous iteration.
PromptBundle build_prompt(const Query& q, const Sandbox& sb,
                          const std::vector<std::string>& backprompts);

// Backprompts of the failing verdicts, in verdict order, exact duplicates
// collapsed to their first occurrence.
std::vector<std::string> consolidate_backprompts(const std::vector<CriticVerdict>& verdicts);

struct IterationTrace {
  int iteration = 0;  // 1-based
  std::string prompt;
  std::string reply;
  ReformatResult reformat;
  std::vector<CriticVerdict> verdicts;
};

struct SessionOptions {
  int max_iterations = 10;
  CriticOptions critic_options;
  std::uint64_t seed = 0;  // recorded in the trace header for reproducibility
};

struct SessionResult {
  Query query;
  std::string generator;                 // the generator's description string
  CriticSelector selector = CriticSelector::All;
  int max_iterations = 10;
  std::uint64_t seed = 0;
  std::optional<Itinerary> final_plan;   // last parseable plan, if any
  bool delivered = false;                // some iteration produced a parseable plan
  bool all_passed = false;               // some iteration satisfied every selected critic
  bool aborted = false;                  // generator became unavailable mid-session
  std::string abort_reason;
  int iterations_used = 0;
  std::vector<IterationTrace> traces;
};

// The generate-test loop: prompt, generate, reformat, criticize, repeat until
// every selected critic passes or the budget runs out. Generator failure
// aborts the session, keeping the partial trace.
SessionResult run_session(const Query& q, PlanGenerator& gen, CriticSelector selector,
                          const Sandbox& sb, const SessionOptions& options = {});

// JSON-lines trace: a header line, one line per iteration, a result line.
void write_session_jsonl(const SessionResult& session, std::ostream& out);
void save_session(const SessionResult& session, const std::filesystem::path& path);
SessionResult read_session_jsonl(std::istream& in);
SessionResult load_session(const std::filesystem::path& path);

}  // namespace modulo
