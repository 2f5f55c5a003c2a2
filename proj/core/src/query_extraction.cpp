#include <string>

#include <nlohmann/json.hpp>

#include "modulo/errors.hpp"
#include "modulo/generator.hpp"
#include "modulo/query.hpp"

namespace modulo {

namespace {

// Pulls the first balanced JSON object out of free text. Generator replies
// routinely wrap the object in prose or code fences.
std::optional<nlohmann::json> first_json_object(const std::string& text) {
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '{') continue;
    int depth = 0;
    bool in_string = false;
    for (std::size_t j = i; j < text.size(); ++j) {
      char c = text[j];
      if (in_string) {
        if (c == '\\') {
          ++j;
        } else if (c == '"') {
          in_string = false;
        }
        continue;
      }
      if (c == '"') {
        in_string = true;
      } else if (c == '{') {
        ++depth;
      } else if (c == '}') {
        if (--depth == 0) {
          auto j_parsed = nlohmann::json::parse(text.substr(i, j - i + 1), nullptr,
                                                /*allow_exceptions=*/false);
          if (!j_parsed.is_discarded()) return j_parsed;
          break;
        }
      }
    }
  }
  return std::nullopt;
}

}  // namespace

std::string query_extraction_prompt(const std::string& text) {
  std::string prompt;
  prompt +=
      "Given the trip request below, extract its fields into a single JSON "
      "object with exactly these keys:\n";
  prompt +=
      "  org (string), dest (string), days (integer), visiting_city_number "
      "(integer), people_number (integer),\n";
  prompt +=
      "  local_constraint (object with keys house_rule, cuisine, room_type, "
      "transportation; use null for any\n";
  prompt +=
      "  preference the request does not state, or null for the whole object "
      "when none are stated),\n";
  prompt += "  budget (number, dollars), date_range (array of YYYY-MM-DD strings, one per day).\n";
  prompt += "Reply with the JSON object only.\n\n";
  prompt += "Trip request:\n";
  prompt += text;
  prompt += "\n";
  return prompt;
}

Query extract_query_fields(const std::string& text, PlanGenerator& gen,
                           int max_extract_retries) {
  try {
    return parse_query(text);
  } catch (const ParseError&) {
    // fall through to generator-backed extraction
  }

  const std::string prompt = query_extraction_prompt(text);
  std::string last_error = "generator produced no reply";
  for (int attempt = 0; attempt <= max_extract_retries; ++attempt) {
    std::string reply;
    try {
      reply = gen.generate(prompt);
    } catch (const GeneratorUnavailable& e) {
      throw ExtractionError(std::string("generator unavailable during extraction: ") + e.what());
    }
    auto obj = first_json_object(reply);
    if (!obj) {
      last_error = "reply contained no JSON object";
      continue;
    }
    try {
      return query_from_json(*obj);
    } catch (const std::exception& e) {
      last_error = e.what();
    }
  }
  throw ExtractionError("query extraction failed after " +
                        std::to_string(max_extract_retries + 1) + " attempts: " + last_error);
}

}  // namespace modulo
