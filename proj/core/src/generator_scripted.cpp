#include <fstream>
#include <sstream>

#include "modulo/errors.hpp"
#include "modulo/generator.hpp"

namespace modulo {

ScriptedGenerator::ScriptedGenerator(std::vector<std::string> responses)
    : responses_(std::move(responses)) {}

ScriptedGenerator ScriptedGenerator::from_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw LoadError("cannot open script file " + path.string());
  std::vector<std::string> responses;
  std::string current;
  std::string line;
  bool any_line = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line == "---") {
      responses.push_back(current);
      current.clear();
      any_line = false;
      continue;
    }
    if (any_line) current += '\n';
    current += line;
    any_line = true;
  }
  if (any_line || responses.empty()) responses.push_back(current);
  return ScriptedGenerator(std::move(responses));
}

std::string ScriptedGenerator::generate(const std::string& prompt) {
  std::lock_guard lock(mu_);
  prompts_.push_back(prompt);
  if (responses_.empty()) throw GeneratorUnavailable("script has no responses");
  std::size_t index = cursor_ < responses_.size() ? cursor_ : responses_.size() - 1;
  ++cursor_;
  return responses_[index];
}

std::vector<std::string> ScriptedGenerator::prompts_seen() const {
  std::lock_guard lock(mu_);
  return prompts_;
}

std::size_t ScriptedGenerator::calls() const {
  std::lock_guard lock(mu_);
  return cursor_;
}

}  // namespace modulo
