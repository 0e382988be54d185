#pragma once

#include <string>
#include <vector>

#include "klchar/rootdata.hpp"
#include "klchar/weyl.hpp"

namespace klchar::cli {

// A fully parsed command invocation.  Round-trips through JSON exactly.
struct JobSpec {
  std::string command;  // weylchar | tiltchar | simplechar | klpoly | asppoly |
                        // blocks | cells | humphreys | translate-check |
                        // cache-stats | cache-verify | cache-import
  std::string datum;
  Int p = 0;
  std::vector<Weight> lambdas;
  std::string y_arg;  // element argument: "e", "w0", a word "0,1", or the
  std::string w_arg;  // full "w=[...];t=(...)" grammar
  Int bound = 8;
  std::string provider_path;      // p-canonical table for tiltchar/cells
  std::string mode = "traditional";  // humphreys
  GenSubset j_set;                // translate-check
  GenSubset k_set;
  Int max_length = -1;            // translate-check sweep bound (-1: single pair)
  bool finite = false;            // cells over the finite Weyl group
  bool assume_lusztig = false;
  std::string format = "json";    // json | text
  std::string cache_dir;          // empty: persistent cache disabled
  std::string import_path;        // cache-import argument

  friend bool operator==(const JobSpec&, const JobSpec&) = default;
};

std::string spec_to_json(const JobSpec& spec);
JobSpec spec_from_json(const std::string& text);

struct RunResult {
  int exit_code = 0;
  std::string output;       // report, in the requested format
  std::string diagnostics;  // warnings and error messages
};

// Executes a job.  Deterministic: identical spec and cache state produce
// byte-identical output.  Exit codes: 0 success, 1 internal error,
// 2 parse/usage/cache-format error, 3 guard refusal, 4 incomplete provider,
// 5 out-of-truncation.
RunResult run(const JobSpec& spec);

// Element argument forms accepted by the CLI.
ExtElt parse_element_arg(const WeylContext& ctx, const std::string& text);

bool is_prime(Int p);

}  // namespace klchar::cli
