// Command-line front end: exact character combinatorics for reductive
// groups in characteristic p (Kazhdan-Lusztig polynomials, tilting and
// simple characters, blocks, cells, support predictions).

#include <cstdlib>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "klchar/cli.hpp"

namespace {

using klchar::cli::JobSpec;

std::string default_cache_dir() {
  if (const char* env = std::getenv("KLCHAR_CACHE_DIR")) return env;
  if (const char* xdg = std::getenv("XDG_DATA_HOME"))
    return std::string(xdg) + "/klchar";
  if (const char* home = std::getenv("HOME"))
    return std::string(home) + "/.local/share/klchar";
  return {};
}

std::vector<klchar::Weight> parse_lambdas(const std::vector<std::string>& raw) {
  std::vector<klchar::Weight> out;
  for (const std::string& text : raw) {
    klchar::Weight w;
    std::string token;
    std::istringstream is(text);
    while (std::getline(is, token, ',')) {
      try {
        w.push_back(std::stoll(token));
      } catch (const std::exception&) {
        throw klchar::parse_error("bad weight coordinate '" + token + "'");
      }
    }
    if (w.empty()) throw klchar::parse_error("empty weight argument");
    out.push_back(std::move(w));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "klchar - exact Kazhdan-Lusztig combinatorics and characters for "
      "reductive groups in characteristic p"};
  app.require_subcommand(1);

  JobSpec spec;
  spec.cache_dir = default_cache_dir();

  std::vector<std::string> lambda_args;
  bool no_cache = false;

  app.add_option("--cache-dir", spec.cache_dir,
                 "cache directory (default: $KLCHAR_CACHE_DIR or the user data dir)");
  app.add_flag("--no-cache", no_cache, "disable the persistent cache");
  app.add_option("--format", spec.format, "output format: json or text")
      ->check(CLI::IsMember({"json", "text"}));

  const auto add_datum = [&](CLI::App* cmd) {
    cmd->add_option("datum", spec.datum, "root datum descriptor, e.g. A2sc or B3adj")
        ->required();
  };
  const auto add_p = [&](CLI::App* cmd) {
    cmd->add_option("--p", spec.p, "characteristic (prime)")->required();
  };
  const auto add_lambda = [&](CLI::App* cmd) {
    cmd->add_option("--lambda", lambda_args,
                    "weight coordinates, comma separated (fundamental-weight "
                    "basis for *sc, simple-root basis for *adj)")
        ->required();
  };
  const auto add_provider = [&](CLI::App* cmd) {
    cmd->add_option("--provider", spec.provider_path,
                    "p-canonical basis table (KLCACHE format); default is the KL basis");
  };

  CLI::App* weylchar = app.add_subcommand("weylchar", "Weyl character of N(lambda)");
  add_datum(weylchar);
  add_lambda(weylchar);

  CLI::App* tiltchar = app.add_subcommand("tiltchar", "indecomposable tilting character");
  add_datum(tiltchar);
  add_p(tiltchar);
  add_lambda(tiltchar);
  add_provider(tiltchar);

  CLI::App* simplechar = app.add_subcommand("simplechar", "simple character via the Lusztig formula");
  add_datum(simplechar);
  add_p(simplechar);
  add_lambda(simplechar);
  simplechar->add_flag("--assume-lusztig", spec.assume_lusztig,
                       "override the validity guard (loud warning)");

  CLI::App* klpoly = app.add_subcommand("klpoly", "Kazhdan-Lusztig polynomial h_{y,w}");
  add_datum(klpoly);
  klpoly->add_option("--y", spec.y_arg, "element: e, w0, a word like 0,1, or w=[..];t=(..)")
      ->required();
  klpoly->add_option("--w", spec.w_arg, "element (same forms)")->required();

  CLI::App* asppoly = app.add_subcommand("asppoly", "antispherical polynomial n_{y,w}");
  add_datum(asppoly);
  asppoly->add_option("--y", spec.y_arg, "element in W_aff^0")->required();
  asppoly->add_option("--w", spec.w_arg, "element in W_aff^0")->required();

  CLI::App* blocks = app.add_subcommand("blocks", "block position in the fundamental domain");
  add_datum(blocks);
  add_p(blocks);
  add_lambda(blocks);
  blocks->add_option("--bound", spec.bound, "length bound for the dominant orbit listing");

  CLI::App* cells = app.add_subcommand("cells", "truncated two-sided cells");
  add_datum(cells);
  cells->add_option("--bound", spec.bound, "truncation ball radius")->required();
  cells->add_flag("--finite", spec.finite, "run on the finite Weyl group instead of W_aff");
  add_provider(cells);

  CLI::App* humphreys = app.add_subcommand("humphreys", "cell-level support prediction");
  add_datum(humphreys);
  add_p(humphreys);
  add_lambda(humphreys);
  humphreys->add_option("--mode", spec.mode, "traditional or relative")
      ->check(CLI::IsMember({"traditional", "relative"}));
  humphreys->add_option("--bound", spec.bound, "truncation ball radius");

  CLI::App* translate = app.add_subcommand("translate-check",
                                           "verify the c/d translation identities");
  add_datum(translate);
  add_p(translate);
  translate->add_option("--j", spec.j_set, "subset J (generator indices)");
  translate->add_option("--k", spec.k_set, "subset K (generator indices)")->required();
  translate->add_option("--y", spec.y_arg, "element of W_aff^K");
  translate->add_option("--w", spec.w_arg, "element of W_aff^K");
  translate->add_option("--max-length", spec.max_length,
                        "sweep all pairs in W_aff^K up to this length instead");
  add_provider(translate);

  CLI::App* cache = app.add_subcommand("cache", "persistent cache administration");
  cache->require_subcommand(1);
  CLI::App* cache_stats = cache->add_subcommand("stats", "entry counts per cache file");
  add_datum(cache_stats);
  CLI::App* cache_verify = cache->add_subcommand("verify", "re-validate every cached element");
  add_datum(cache_verify);
  CLI::App* cache_import = cache->add_subcommand("import", "validate and install a table");
  add_datum(cache_import);
  cache_import->add_option("table", spec.import_path, "p-canonical table file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    app.exit(e);
    return 2;
  }

  try {
    spec.lambdas = parse_lambdas(lambda_args);
  } catch (const klchar::parse_error& e) {
    std::cerr << "parse error: " << e.what() << '\n';
    return 2;
  }
  if (no_cache) spec.cache_dir.clear();

  if (weylchar->parsed()) spec.command = "weylchar";
  if (tiltchar->parsed()) spec.command = "tiltchar";
  if (simplechar->parsed()) spec.command = "simplechar";
  if (klpoly->parsed()) spec.command = "klpoly";
  if (asppoly->parsed()) spec.command = "asppoly";
  if (blocks->parsed()) spec.command = "blocks";
  if (cells->parsed()) spec.command = "cells";
  if (humphreys->parsed()) spec.command = "humphreys";
  if (translate->parsed()) spec.command = "translate-check";
  if (cache->parsed()) {
    if (cache_stats->parsed()) spec.command = "cache-stats";
    if (cache_verify->parsed()) spec.command = "cache-verify";
    if (cache_import->parsed()) spec.command = "cache-import";
  }

  const auto result = klchar::cli::run(spec);
  if (!result.output.empty()) std::cout << result.output;
  if (!result.diagnostics.empty()) std::cerr << result.diagnostics << '\n';
  return result.exit_code;
}
