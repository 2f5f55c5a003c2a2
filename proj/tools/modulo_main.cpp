#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "modulo/critics.hpp"
#include "modulo/errors.hpp"
#include "modulo/evaluator.hpp"
#include "modulo/generator.hpp"
#include "modulo/itinerary.hpp"
#include "modulo/metacontroller.hpp"
#include "modulo/query.hpp"
#include "modulo/sandbox.hpp"

namespace fs = std::filesystem;
using namespace modulo;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitPredicateFailed = 1;
constexpr int kExitError = 2;

struct RunConfig {
  std::string sandbox_dir;
  std::string queries_file;
  std::string query_inline;
  bool nl = false;
  std::string generator = "greedy";
  std::string critics = "all";
  int max_iters = 10;
  std::string out_dir = ".";
  int jobs = 1;
  std::uint64_t seed = 0;
};

CriticSelector parse_selector(const std::string& text) {
  if (auto selector = selector_from_string(text)) return *selector;
  throw std::runtime_error("unknown critic selector '" + text +
                           "' (expected all, common, hard, or json)");
}

std::string script_path_of(const std::string& generator_spec) {
  constexpr std::string_view prefix = "scripted:";
  if (generator_spec.rfind(prefix, 0) == 0)
    return generator_spec.substr(prefix.size());
  return {};
}

void require_known_generator(const std::string& spec) {
  if (spec == "greedy" || spec == "llm") return;
  if (!script_path_of(spec).empty()) return;
  throw std::runtime_error("unknown generator '" + spec +
                           "' (expected llm, greedy, or scripted:<file>)");
}

std::vector<Query> load_queries(const RunConfig& cfg) {
  std::vector<Query> queries;
  if (!cfg.query_inline.empty()) {
    if (cfg.nl)
      queries.push_back(parse_query(cfg.query_inline));
    else
      queries.push_back(query_from_json(nlohmann::json::parse(cfg.query_inline)));
  } else if (!cfg.queries_file.empty()) {
    if (cfg.nl) {
      std::ifstream in(cfg.queries_file);
      if (!in) throw LoadError("cannot open query file " + cfg.queries_file);
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        queries.push_back(parse_query(line));
      }
    } else {
      queries = load_query_file(cfg.queries_file);
    }
  }
  if (queries.empty())
    throw std::runtime_error("no queries given (use --query or --queries)");
  return queries;
}

Query load_single_query(const RunConfig& cfg, const char* command) {
  std::vector<Query> queries = load_queries(cfg);
  if (queries.size() != 1)
    throw std::runtime_error(std::string(command) + " expects exactly one query, got " +
                             std::to_string(queries.size()) + " (use eval for corpora)");
  return queries.front();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw LoadError("cannot write " + path.string());
  out << content;
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw LoadError("cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void write_telemetry(const LlmGenerator& gen, const fs::path& out_dir) {
  LlmTelemetry t = gen.telemetry();
  nlohmann::json j;
  j["requests"] = t.requests;
  j["retries"] = t.retries;
  j["failures"] = t.failures;
  write_file(out_dir / "telemetry.json", j.dump(2) + "\n");
}

// Runs one session with a generator instance of the configured kind. Scripted
// generators replay the script from the top for every query, so corpus runs
// stay deterministic under any parallelism degree.
SessionResult run_one(const RunConfig& cfg, const Query& q, const Sandbox& sb,
                      LlmGenerator* shared_llm) {
  SessionOptions options;
  options.max_iterations = cfg.max_iters;
  options.seed = cfg.seed;
  CriticSelector selector = parse_selector(cfg.critics);
  if (shared_llm) return run_session(q, *shared_llm, selector, sb, options);
  if (cfg.generator == "greedy") {
    GreedyGenerator gen(sb, q);
    return run_session(q, gen, selector, sb, options);
  }
  ScriptedGenerator gen = ScriptedGenerator::from_file(script_path_of(cfg.generator));
  return run_session(q, gen, selector, sb, options);
}

int cmd_plan(const RunConfig& cfg) {
  require_known_generator(cfg.generator);
  Sandbox sb = load_sandbox(cfg.sandbox_dir);
  Query q = load_single_query(cfg, "plan");

  std::optional<LlmGenerator> llm;
  if (cfg.generator == "llm") llm.emplace(LlmConfig{});

  SessionResult session = run_one(cfg, q, sb, llm ? &*llm : nullptr);

  fs::create_directories(cfg.out_dir);
  fs::path out_dir = cfg.out_dir;
  save_session(session, out_dir / "session.jsonl");
  if (session.final_plan)
    write_file(out_dir / "plan.json", serialize_plan(*session.final_plan) + "\n");
  if (llm) write_telemetry(*llm, out_dir);

  std::cout << "delivered: " << (session.delivered ? "yes" : "no") << "\n"
            << "all_passed: " << (session.all_passed ? "yes" : "no") << "\n"
            << "iterations_used: " << session.iterations_used << "\n";
  if (session.aborted) std::cout << "aborted: " << session.abort_reason << "\n";
  return session.all_passed ? kExitOk : kExitPredicateFailed;
}

int cmd_eval(const RunConfig& cfg) {
  require_known_generator(cfg.generator);
  Sandbox sb = load_sandbox(cfg.sandbox_dir);
  std::vector<Query> queries = load_queries(cfg);

  std::optional<LlmGenerator> llm;
  if (cfg.generator == "llm") llm.emplace(LlmConfig{});

  std::vector<SessionResult> sessions(queries.size());
  std::atomic<std::size_t> next{0};
  std::mutex error_mu;
  std::string first_error;
  auto worker = [&] {
    for (std::size_t i; (i = next.fetch_add(1)) < queries.size();) {
      try {
        sessions[i] = run_one(cfg, queries[i], sb, llm ? &*llm : nullptr);
      } catch (const std::exception& e) {
        std::lock_guard lock(error_mu);
        if (first_error.empty()) first_error = e.what();
        return;
      }
    }
  };
  std::size_t thread_count = std::min<std::size_t>(std::max(cfg.jobs, 1), queries.size());
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < thread_count; ++t) pool.emplace_back(worker);
  for (std::thread& t : pool) t.join();
  if (!first_error.empty()) throw std::runtime_error(first_error);

  fs::create_directories(cfg.out_dir);
  fs::path out_dir = cfg.out_dir;
  for (std::size_t i = 0; i < sessions.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "session_%03zu.jsonl", i + 1);
    save_session(sessions[i], out_dir / name);
  }

  EvalReport report = evaluate_corpus(sessions, sb);
  write_file(out_dir / "report.json", render_report(report, ReportFormat::json));
  write_file(out_dir / "report.csv", render_report(report, ReportFormat::csv));
  write_file(out_dir / "report.md", render_report(report, ReportFormat::markdown));
  write_file(out_dir / "frequency.csv", render_frequency_csv(report));
  write_file(out_dir / "cooccurrence.csv", render_cooccurrence_csv(report));
  write_file(out_dir / "pass_by_iteration.csv", render_pass_by_iteration_csv(report));
  if (llm) write_telemetry(*llm, out_dir);

  std::cout << render_report(report, ReportFormat::markdown);
  return kExitOk;
}

int cmd_check(const RunConfig& cfg, const std::string& plan_file) {
  Sandbox sb = load_sandbox(cfg.sandbox_dir);
  Query q = load_single_query(cfg, "check");
  ReformatResult input = parse_plan_text(read_file(plan_file));
  std::vector<CriticVerdict> verdicts = run_critics(parse_selector(cfg.critics), input, q, sb);

  bool all_passed = true;
  for (const CriticVerdict& v : verdicts) {
    all_passed = all_passed && v.passed;
    std::cout << v.critic_id << "\t" << to_string(v.group) << "\t"
              << (v.passed ? "pass" : "fail");
    if (!v.backprompt.empty()) std::cout << "\t" << v.backprompt;
    std::cout << "\n";
  }
  return all_passed ? kExitOk : kExitPredicateFailed;
}

int cmd_stats(const std::string& out_dir_arg, const std::vector<std::string>& trace_files) {
  std::vector<SessionResult> sessions;
  sessions.reserve(trace_files.size());
  for (const std::string& path : trace_files) sessions.push_back(load_session(path));

  EvalReport report;
  tally_firings(sessions, report);
  int max_k = 0;
  for (const SessionResult& s : sessions) max_k = std::max(max_k, s.max_iterations);
  report.pass_by_iteration.assign(static_cast<std::size_t>(std::max(max_k, 0)), 0.0);
  for (int k = 1; k <= max_k; ++k) {
    std::size_t within = 0;
    for (const SessionResult& s : sessions) {
      if (s.all_passed && s.iterations_used <= k) ++within;
    }
    if (!sessions.empty())
      report.pass_by_iteration[static_cast<std::size_t>(k - 1)] =
          100.0 * static_cast<double>(within) / static_cast<double>(sessions.size());
  }

  fs::create_directories(out_dir_arg);
  fs::path out_dir = out_dir_arg;
  write_file(out_dir / "frequency.csv", render_frequency_csv(report));
  write_file(out_dir / "cooccurrence.csv", render_cooccurrence_csv(report));
  write_file(out_dir / "pass_by_iteration.csv", render_pass_by_iteration_csv(report));

  std::cout << (out_dir / "frequency.csv").string() << "\n"
            << (out_dir / "cooccurrence.csv").string() << "\n"
            << (out_dir / "pass_by_iteration.csv").string() << "\n";
  return kExitOk;
}

int cmd_extract_prompt(const std::string& critic_id) {
  std::string prompt = emit_extraction_prompt(critic_id);
  std::cout << prompt;
  if (prompt.empty() || prompt.back() != '\n') std::cout << "\n";
  return kExitOk;
}

int cmd_critics_list(bool as_json) {
  if (as_json) {
    std::cout << catalog_to_json().dump(2) << "\n";
    return kExitOk;
  }
  for (const CriticInfo& info : critic_catalog()) {
    std::cout << info.id << "\t" << to_string(info.group) << "\t" << info.description << "\n";
  }
  return kExitOk;
}

void add_query_options(CLI::App* cmd, RunConfig& cfg) {
  CLI::Option* file = cmd->add_option("--queries", cfg.queries_file,
                                      "Query corpus, one JSON object per line");
  CLI::Option* inline_query =
      cmd->add_option("--query", cfg.query_inline, "One query, inline");
  file->excludes(inline_query);
  inline_query->excludes(file);
  cmd->add_flag("--nl", cfg.nl, "Treat queries as natural-language sentences");
}

void add_run_options(CLI::App* cmd, RunConfig& cfg) {
  cmd->add_option("--generator", cfg.generator, "llm | greedy | scripted:<file>")
      ->capture_default_str();
  cmd->add_option("--critics", cfg.critics, "all | common | hard | json")
      ->capture_default_str();
  cmd->add_option("--max-iters", cfg.max_iters, "Iteration budget per session")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  cmd->add_option("--out", cfg.out_dir, "Output directory")->capture_default_str();
  cmd->add_option("--seed", cfg.seed, "Seed recorded in session headers")
      ->capture_default_str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Generate-test travel itinerary planner"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string plan_file;
  std::string critic_id;
  std::string stats_out = ".";
  std::vector<std::string> trace_files;
  bool catalog_json = false;

  CLI::App* plan_cmd = app.add_subcommand("plan", "Run one generate-test session");
  plan_cmd->add_option("--sandbox", cfg.sandbox_dir, "Dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_query_options(plan_cmd, cfg);
  add_run_options(plan_cmd, cfg);

  CLI::App* eval_cmd = app.add_subcommand("eval", "Evaluate a query corpus");
  eval_cmd->add_option("--sandbox", cfg.sandbox_dir, "Dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_query_options(eval_cmd, cfg);
  add_run_options(eval_cmd, cfg);
  eval_cmd->add_option("--jobs", cfg.jobs, "Concurrent sessions")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();

  CLI::App* check_cmd = app.add_subcommand("check", "Judge an existing plan file");
  check_cmd->add_option("plan_file", plan_file, "Plan file (JSON or raw reply text)")
      ->required()
      ->check(CLI::ExistingFile);
  check_cmd->add_option("--sandbox", cfg.sandbox_dir, "Dataset directory")
      ->required()
      ->check(CLI::ExistingDirectory);
  add_query_options(check_cmd, cfg);
  check_cmd->add_option("--critics", cfg.critics, "all | common | hard | json")
      ->capture_default_str();

  CLI::App* stats_cmd = app.add_subcommand("stats", "Analytics over session trace files");
  stats_cmd->add_option("traces", trace_files, "Session .jsonl files")
      ->required()
      ->expected(-1);
  stats_cmd->add_option("--out", stats_out, "Output directory")->capture_default_str();

  CLI::App* extract_cmd =
      app.add_subcommand("extract-prompt", "Print a critic extraction prompt");
  extract_cmd->add_option("critic_id", critic_id, "Catalog critic id")->required();

  CLI::App* critics_cmd = app.add_subcommand("critics", "Critic catalog utilities");
  critics_cmd->require_subcommand(1);
  CLI::App* list_cmd = critics_cmd->add_subcommand("list", "List the critic catalog");
  list_cmd->add_flag("--json", catalog_json, "Emit the catalog as JSON");

  CLI11_PARSE(app, argc, argv);

  try {
    if (plan_cmd->parsed()) return cmd_plan(cfg);
    if (eval_cmd->parsed()) return cmd_eval(cfg);
    if (check_cmd->parsed()) return cmd_check(cfg, plan_file);
    if (stats_cmd->parsed()) return cmd_stats(stats_out, trace_files);
    if (extract_cmd->parsed()) return cmd_extract_prompt(critic_id);
    if (list_cmd->parsed()) return cmd_critics_list(catalog_json);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitError;
  }
  return kExitError;
}
