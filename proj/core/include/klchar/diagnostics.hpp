#pragma once

#include <stdexcept>
#include <string>

namespace klchar {

// Base class for every error this library reports deliberately.
struct error : std::runtime_error {
  explicit error(const std::string& what) : std::runtime_error(what) {}
};

// Malformed input: descriptors, element strings, weights, cache files.
struct parse_error : error {
  explicit parse_error(const std::string& what) : error(what) {}
};

// A mathematical precondition was violated (invalid rank, non-dominant
// weight, non-finitary subset, datum/dimension mismatch, ...).
struct domain_error : error {
  explicit domain_error(const std::string& what) : error(what) {}
};

// Refusal to evaluate a formula outside its asserted range of validity.
// The message names the violated guard.
struct guard_error : error {
  explicit guard_error(const std::string& what) : error(what) {}
};

// A canonical-basis provider could not supply a required element.
struct provider_error : error {
  explicit provider_error(const std::string& what) : error(what) {}
};

// A cell query fell outside the computed truncation ball.
struct truncation_error : error {
  explicit truncation_error(const std::string& what) : error(what) {}
};

// Persistent cache file problems: version mismatch, corrupt entries.
struct cache_error : error {
  explicit cache_error(const std::string& what) : error(what) {}
};

// Always-on contract check (not compiled out in release builds).
inline void require(bool cond, const std::string& msg) {
  if (!cond) throw domain_error(msg);
}

[[noreturn]] inline void internal_error(const std::string& msg) {
  throw error("internal error: " + msg);
}

}  // namespace klchar
