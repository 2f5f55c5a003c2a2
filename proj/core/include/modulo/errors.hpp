#pragma once

#include <stdexcept>
#include <string>

namespace modulo {

/// Fatal dataset load problem: missing file, empty index, unreadable config.
class LoadError : public std::runtime_error {
public:
  explicit LoadError(const std::string& what) : std::runtime_error(what) {}
};

/// A natural-language query did not match the templated grammar.
class ParseError : public std::runtime_error {
public:
  explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

/// A sandbox lookup that the caller asserted would succeed did not.
class LookupError : public std::runtime_error {
public:
  explicit LookupError(const std::string& what) : std::runtime_error(what) {}
};

/// The plan generator could not produce a reply (auth failure, retries
/// exhausted, timeout).
class GeneratorUnavailable : public std::runtime_error {
public:
  explicit GeneratorUnavailable(const std::string& what) : std::runtime_error(what) {}
};

/// A query could not be recovered from free text within the retry budget.
class ExtractionError : public std::runtime_error {
public:
  explicit ExtractionError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace modulo
