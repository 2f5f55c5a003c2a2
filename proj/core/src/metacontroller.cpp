#include "modulo/metacontroller.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "modulo/errors.hpp"

namespace modulo {

namespace {

std::string money_str(const Money& m) { return "$" + m.str(); }

std::string minutes_str(int minutes) { return format_time_of_day(minutes); }

void render_flights(std::string& out, const Sandbox& sb, const std::string& from,
                    const std::string& to, const std::vector<Date>& dates) {
  for (const Date& date : dates) {
    for (const FlightRecord* rec : sb.find_flights(from, to, date)) {
      out += "  " + rec->flight_number + ": " + rec->origin_city + " to " + rec->dest_city +
             " on " + rec->flight_date.iso() + ", departs " + minutes_str(rec->dep_time) +
             ", arrives " + minutes_str(rec->arr_time) + ", " + money_str(rec->price) +
             " per person\n";
    }
  }
}

void render_city_block(std::string& out, const Sandbox& sb, const std::string& city) {
  for (const AccommodationRecord* rec : sb.find_accommodations(city)) {
    out += "  " + rec->name + ", " + rec->city + ": " + money_str(rec->price) +
           " per room-night, " + rec->room_type + ", house rules: " + rec->house_rules +
           ", minimum nights " + std::to_string(rec->minimum_nights) + ", sleeps " +
           std::to_string(rec->maximum_occupancy) + "\n";
  }
  for (const RestaurantRecord* rec : sb.find_restaurants(city)) {
    out += "  " + rec->name + ", " + rec->city + ": " + money_str(rec->average_cost) +
           " per person, cuisines: ";
    for (std::size_t i = 0; i < rec->cuisines.size(); ++i) {
      if (i) out += ", ";
      out += rec->cuisines[i];
    }
    out += "\n";
  }
  for (const AttractionRecord* rec : sb.find_attractions(city)) {
    out += "  " + rec->name + ", " + rec->city + "\n";
  }
}

nlohmann::json verdicts_to_json(const std::vector<CriticVerdict>& verdicts) {
  nlohmann::json out = nlohmann::json::array();
  for (const CriticVerdict& v : verdicts) {
    out.push_back({{"critic_id", v.critic_id},
                   {"group", to_string(v.group)},
                   {"passed", v.passed},
                   {"backprompt", v.backprompt}});
  }
  return out;
}

std::vector<CriticVerdict> verdicts_from_json(const nlohmann::json& j) {
  std::vector<CriticVerdict> out;
  for (const auto& item : j) {
    CriticVerdict v;
    v.critic_id = item.at("critic_id").get<std::string>();
    std::string group = item.at("group").get<std::string>();
    v.group = group == "hard"          ? CriticGroup::hard
              : group == "commonsense" ? CriticGroup::commonsense
                                       : CriticGroup::format;
    v.passed = item.at("passed").get<bool>();
    v.backprompt = item.at("backprompt").get<std::string>();
    out.push_back(std::move(v));
  }
  return out;
}

nlohmann::json reformat_to_json(const ReformatResult& r) {
  nlohmann::json out;
  out["ok"] = r.ok();
  if (!r.ok()) {
    out["reason"] = r.failure->reason;
    out["detail"] = r.failure->detail;
    nlohmann::json violations = nlohmann::json::array();
    for (const SchemaViolation& v : r.failure->violations) violations.push_back(v.message);
    out["violations"] = std::move(violations);
  }
  return out;
}

}  // namespace

std::string PromptBundle::render() const {
  std::string out = instructions;
  out += "\n";
  out += context;
  out += "\n";
  out += output_format;
  out += "\n";
  out += few_shot;
  if (!backprompt_block.empty()) {
    out += "\n";
    out += backprompt_block;
  }
  return out;
}

PromptBundle build_prompt(const Query& q, const Sandbox& sb,
                          const std::vector<std::string>& backprompts) {
  PromptBundle bundle;

  std::string& ins = bundle.instructions;
  ins += "Plan a " + std::to_string(q.days) + "-day trip from " + q.org + " to " + q.dest +
         " for " + std::to_string(q.people_number) +
         (q.people_number == 1 ? " person" : " people") + ", ";
  ins += q.date_range.empty()
             ? ""
             : q.date_range.front().iso() + " to " + q.date_range.back().iso() + ", ";
  ins += "budget " + money_str(q.budget) + ".";
  if (q.local_constraint) {
    if (q.local_constraint->room_type)
      ins += " Accommodation must be: " + *q.local_constraint->room_type + ".";
    if (q.local_constraint->house_rule)
      ins += " Accommodation must allow: " + *q.local_constraint->house_rule + ".";
    if (q.local_constraint->cuisine) {
      ins += " Cuisines to cover:";
      for (const std::string& c : *q.local_constraint->cuisine) ins += " " + c;
      ins += ".";
    }
    if (q.local_constraint->transportation)
      ins += " Transportation rule: " + *q.local_constraint->transportation + ".";
  }

  std::string& ctx = bundle.context;
  ctx += "Available options:\n";
  ctx += "Flights:\n";
  render_flights(ctx, sb, q.org, q.dest, q.date_range);
  render_flights(ctx, sb, q.dest, q.org, q.date_range);
  for (const auto& [from, to] : {std::pair{q.org, q.dest}, std::pair{q.dest, q.org}}) {
    if (const DistanceRecord* rec = sb.find_distance(from, to)) {
      ctx += "Ground route " + rec->origin_city + " to " + rec->dest_city + ": " +
             std::to_string(rec->distance_miles) + " miles, modes:";
      for (TransportMode mode : rec->available_modes) ctx += " " + to_string(mode);
      ctx += "\n";
    }
  }
  ctx += "In " + q.dest + ":\n";
  render_city_block(ctx, sb, q.dest);
  if (normalize_city(q.org) != normalize_city(q.dest)) {
    ctx += "In " + q.org + ":\n";
    render_city_block(ctx, sb, q.org);
  }

  bundle.output_format =
      "Reply with a JSON array only: one object per day with keys day, people_number,"
      " current_city, transportation, breakfast, attraction, lunch, dinner, accommodation."
      " Write current_city as \"from <city> to <city>\" on travel days. Write transportation"
      " as \"<mode>, from <city> to <city>\" plus \"Flight Number: <id>\", \"Departure Time:"
      " <hh:mm>\", \"Arrival Time: <hh:mm>\" segments for flights. Name places as \"<name>,"
      " <city>\"; separate several attractions with \";\". Use \"-\" for an empty slot.";

  bundle.few_shot =
      "Example day:\n"
      "{\n"
      "  \"day\": 1,\n"
      "  \"people_number\": 2,\n"
      "  \"current_city\": \"from CityA to CityB\",\n"
      "  \"transportation\": \"Flight, from CityA to CityB, Flight Number: F100, Departure"
      " Time: 08:00, Arrival Time: 10:05\",\n"
      "  \"breakfast\": \"-\",\n"
      "  \"attraction\": \"Old Fort, CityB\",\n"
      "  \"lunch\": \"Corner Bistro, CityB\",\n"
      "  \"dinner\": \"Harbor Grill, CityB\",\n"
      "  \"accommodation\": \"Seaside Inn, CityB\"\n"
      "}";

  if (!backprompts.empty()) {
    std::string& block = bundle.backprompt_block;
    block += "The previous plan was rejected. Fix these problems:\n";
    for (const std::string& bp : backprompts) block += bp + "\n";
  }
  return bundle;
}

std::vector<std::string> consolidate_backprompts(const std::vector<CriticVerdict>& verdicts) {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const CriticVerdict& v : verdicts) {
    if (v.passed) continue;
    if (seen.insert(v.backprompt).second) out.push_back(v.backprompt);
  }
  return out;
}

SessionResult run_session(const Query& q, PlanGenerator& gen, CriticSelector selector,
                          const Sandbox& sb, const SessionOptions& options) {
  SessionResult session;
  session.query = q;
  session.generator = gen.description();
  session.selector = selector;
  session.max_iterations = options.max_iterations;
  session.seed = options.seed;

  std::vector<std::string> backprompts;
  for (int iteration = 1; iteration <= options.max_iterations; ++iteration) {
    IterationTrace trace;
    trace.iteration = iteration;
    trace.prompt = build_prompt(q, sb, backprompts).render();
    try {
      trace.reply = gen.generate(trace.prompt);
    } catch (const GeneratorUnavailable& e) {
      session.aborted = true;
      session.abort_reason = e.what();
      break;
    }
    trace.reformat = parse_plan_text(trace.reply);
    trace.verdicts = run_critics(selector, trace.reformat, q, sb, options.critic_options);

    if (trace.reformat.ok()) {
      session.final_plan = trace.reformat.plan;
      session.delivered = true;
    }
    bool all_passed = std::all_of(trace.verdicts.begin(), trace.verdicts.end(),
                                  [](const CriticVerdict& v) { return v.passed; });
    backprompts = consolidate_backprompts(trace.verdicts);
    session.traces.push_back(std::move(trace));
    if (all_passed) {
      session.all_passed = true;
      break;
    }
  }
  session.iterations_used = static_cast<int>(session.traces.size());
  return session;
}

// --- JSON-lines trace io -----------------------------------------------------

void write_session_jsonl(const SessionResult& session, std::ostream& out) {
  nlohmann::json header;
  header["type"] = "header";
  header["query"] = query_to_json(session.query);
  header["generator"] = session.generator;
  header["critics"] = to_string(session.selector);
  header["max_iterations"] = session.max_iterations;
  header["seed"] = session.seed;
  out << header.dump() << "\n";

  for (const IterationTrace& trace : session.traces) {
    nlohmann::json line;
    line["type"] = "iteration";
    line["iteration"] = trace.iteration;
    line["prompt"] = trace.prompt;
    line["reply"] = trace.reply;
    line["reformat"] = reformat_to_json(trace.reformat);
    line["verdicts"] = verdicts_to_json(trace.verdicts);
    out << line.dump() << "\n";
  }

  nlohmann::json result;
  result["type"] = "result";
  result["delivered"] = session.delivered;
  result["all_passed"] = session.all_passed;
  result["aborted"] = session.aborted;
  result["abort_reason"] = session.abort_reason;
  result["iterations_used"] = session.iterations_used;
  result["final_plan"] =
      session.final_plan ? plan_to_json(*session.final_plan) : nlohmann::json(nullptr);
  out << result.dump() << "\n";
}

void save_session(const SessionResult& session, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw LoadError("cannot write session trace " + path.string());
  write_session_jsonl(session, out);
}

SessionResult read_session_jsonl(std::istream& in) {
  SessionResult session;
  bool saw_header = false, saw_result = false;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded() || !j.contains("type"))
      throw ParseError("session trace line is not a typed JSON object");
    const std::string type = j.at("type").get<std::string>();
    if (type == "header") {
      session.query = query_from_json(j.at("query"));
      session.generator = j.at("generator").get<std::string>();
      if (auto sel = selector_from_string(j.at("critics").get<std::string>()))
        session.selector = *sel;
      session.max_iterations = j.at("max_iterations").get<int>();
      session.seed = j.at("seed").get<std::uint64_t>();
      saw_header = true;
    } else if (type == "iteration") {
      IterationTrace trace;
      trace.iteration = j.at("iteration").get<int>();
      trace.prompt = j.at("prompt").get<std::string>();
      trace.reply = j.at("reply").get<std::string>();
      const auto& rf = j.at("reformat");
      if (rf.at("ok").get<bool>()) {
        trace.reformat = parse_plan_text(trace.reply);
      } else {
        ReformatFailure failure;
        failure.reason = rf.at("reason").get<std::string>();
        failure.detail = rf.at("detail").get<std::string>();
        trace.reformat.failure = std::move(failure);
      }
      trace.verdicts = verdicts_from_json(j.at("verdicts"));
      session.traces.push_back(std::move(trace));
    } else if (type == "result") {
      session.delivered = j.at("delivered").get<bool>();
      session.all_passed = j.at("all_passed").get<bool>();
      session.aborted = j.at("aborted").get<bool>();
      session.abort_reason = j.at("abort_reason").get<std::string>();
      session.iterations_used = j.at("iterations_used").get<int>();
      if (!j.at("final_plan").is_null()) {
        ReformatResult parsed = parse_plan_text(j.at("final_plan").dump());
        if (!parsed.ok()) throw ParseError("session trace carries an unparseable final plan");
        session.final_plan = parsed.plan;
      }
      saw_result = true;
    } else {
      throw ParseError("unknown session trace line type \"" + type + "\"");
    }
  }
  if (!saw_header) throw ParseError("session trace has no header line");
  if (!saw_result) throw ParseError("session trace has no result line");
  return session;
}

SessionResult load_session(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open session trace " + path.string());
  try {
    return read_session_jsonl(in);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

}  // namespace modulo
