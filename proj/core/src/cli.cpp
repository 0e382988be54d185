#include "klchar/cli.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "klchar/antispherical.hpp"
#include "klchar/cachefile.hpp"
#include "klchar/cells.hpp"
#include "klchar/characters.hpp"
#include "klchar/hecke.hpp"

namespace klchar::cli {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

bool is_prime(Int p) {
  if (p < 2) return false;
  for (Int d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

std::string spec_to_json(const JobSpec& s) {
  ordered_json j;
  j["command"] = s.command;
  j["datum"] = s.datum;
  j["p"] = s.p;
  j["lambdas"] = s.lambdas;
  j["y"] = s.y_arg;
  j["w"] = s.w_arg;
  j["bound"] = s.bound;
  j["provider"] = s.provider_path;
  j["mode"] = s.mode;
  j["J"] = s.j_set;
  j["K"] = s.k_set;
  j["max_length"] = s.max_length;
  j["finite"] = s.finite;
  j["assume_lusztig"] = s.assume_lusztig;
  j["format"] = s.format;
  j["cache_dir"] = s.cache_dir;
  j["import"] = s.import_path;
  return j.dump();
}

JobSpec spec_from_json(const std::string& text) {
  ordered_json j;
  try {
    j = ordered_json::parse(text);
  } catch (const std::exception& e) {
    throw parse_error(std::string("bad job spec JSON: ") + e.what());
  }
  JobSpec s;
  try {
    s.command = j.at("command").get<std::string>();
    s.datum = j.at("datum").get<std::string>();
    s.p = j.at("p").get<Int>();
    s.lambdas = j.at("lambdas").get<std::vector<Weight>>();
    s.y_arg = j.at("y").get<std::string>();
    s.w_arg = j.at("w").get<std::string>();
    s.bound = j.at("bound").get<Int>();
    s.provider_path = j.at("provider").get<std::string>();
    s.mode = j.at("mode").get<std::string>();
    s.j_set = j.at("J").get<GenSubset>();
    s.k_set = j.at("K").get<GenSubset>();
    s.max_length = j.at("max_length").get<Int>();
    s.finite = j.at("finite").get<bool>();
    s.assume_lusztig = j.at("assume_lusztig").get<bool>();
    s.format = j.at("format").get<std::string>();
    s.cache_dir = j.at("cache_dir").get<std::string>();
    s.import_path = j.at("import").get<std::string>();
  } catch (const std::exception& e) {
    throw parse_error(std::string("incomplete job spec: ") + e.what());
  }
  return s;
}

ExtElt parse_element_arg(const WeylContext& ctx, const std::string& text) {
  if (text.empty()) throw parse_error("empty element argument");
  if (text == "e") return ctx.identity();
  if (text == "w0") return ctx.longest_element(ctx.finite_gens());
  if (text.rfind("w=[", 0) == 0) return ctx.parse_element(text);
  if (text[0] == 's' && text.size() > 1) {
    try {
      return ctx.gen(std::stoi(text.substr(1)));
    } catch (const std::exception&) {
      throw parse_error("bad generator name: " + text);
    }
  }
  // Word over S_aff indices, comma separated.
  std::vector<GenIndex> word;
  std::istringstream is(text);
  std::string token;
  while (std::getline(is, token, ',')) {
    try {
      word.push_back(std::stoi(token));
    } catch (const std::exception&) {
      throw parse_error("bad word token '" + token + "' in element argument");
    }
  }
  try {
    return ctx.from_word(word);
  } catch (const domain_error& e) {
    throw parse_error(std::string("bad element word: ") + e.what());
  }
}

namespace {

// ---------------------------------------------------------------------
// Cache directory handling.  Writers take an advisory lock file; readers
// rely on the atomic rename used by writers.

class CacheLock {
 public:
  explicit CacheLock(const fs::path& dir) : path_(dir / "lock") {
    for (int attempt = 0; attempt < 100; ++attempt) {
      const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
      if (fd >= 0) {
        ::close(fd);
        held_ = true;
        return;
      }
      // Remove stale locks (owner died) after a minute.
      std::error_code ec;
      const auto mtime = fs::last_write_time(path_, ec);
      if (!ec && fs::file_time_type::clock::now() - mtime > std::chrono::seconds(60)) {
        fs::remove(path_, ec);
        continue;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(100));
    }
    throw cache_error("could not acquire cache lock at " + path_.string());
  }
  ~CacheLock() {
    if (held_) {
      std::error_code ec;
      fs::remove(path_, ec);
    }
  }
  CacheLock(const CacheLock&) = delete;
  CacheLock& operator=(const CacheLock&) = delete;

 private:
  fs::path path_;
  bool held_ = false;
};

void atomic_write(const fs::path& target, const std::function<void(const fs::path&)>& writer) {
  const fs::path tmp = target.string() + ".tmp";
  writer(tmp);
  fs::rename(tmp, target);
}

// ---------------------------------------------------------------------

struct Session {
  std::shared_ptr<const WeylContext> weyl;
  std::shared_ptr<HeckeContext> hecke;
  std::shared_ptr<AntisphericalContext> antispherical;
  std::shared_ptr<CharacterContext> chars;
  std::shared_ptr<CellContext> cells;
  std::shared_ptr<const CanonicalBasisProvider> provider;
  fs::path cache_dir;  // empty: disabled
  fs::path kl_path, as_path;
  std::size_t kl_loaded = 0, as_loaded = 0;

  explicit Session(const JobSpec& spec) {
    auto rd = RootDatum::from_descriptor(spec.datum);
    weyl = std::make_shared<const WeylContext>(std::move(rd));
    hecke = std::make_shared<HeckeContext>(weyl);
    antispherical = std::make_shared<AntisphericalContext>(weyl, hecke);
    chars = std::make_shared<CharacterContext>(weyl, hecke, antispherical);
    cells = std::make_shared<CellContext>(weyl, chars);

    if (!spec.cache_dir.empty()) {
      cache_dir = spec.cache_dir;
      fs::create_directories(cache_dir);
      kl_path = cache_dir / (spec.datum + ".klcache");
      as_path = cache_dir / (spec.datum + ".ascache");
      // verify reads the files itself so that a corrupt cache is a
      // reportable finding rather than a startup failure
      if (spec.command != "cache-verify") {
        if (fs::exists(kl_path)) {
          hecke->cache_load(kl_path);
          kl_loaded = hecke->cached_count();
        }
        if (fs::exists(as_path)) {
          antispherical->cache_load(as_path);
          as_loaded = antispherical->cached_count();
        }
      }
    }

    if (!spec.provider_path.empty())
      provider = TableBasisProvider::load(spec.provider_path, weyl);
    else
      provider = std::make_shared<KLBasisProvider>(hecke);
  }

  void persist() const {
    if (cache_dir.empty()) return;
    if (hecke->cached_count() == kl_loaded && antispherical->cached_count() == as_loaded)
      return;
    CacheLock lock(cache_dir);
    atomic_write(kl_path, [&](const fs::path& p) { hecke->cache_store(p); });
    atomic_write(as_path, [&](const fs::path& p) { antispherical->cache_store(p); });
  }
};

std::string bigint_str(const BigInt& v) { return v.str(); }

ordered_json weight_json(const Weight& w) { return ordered_json(w); }

std::string weight_text(const Weight& w) {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) os << ',';
    os << w[i];
  }
  os << ')';
  return os.str();
}

std::string convention(const RootDatum& rd) {
  return rd.flavor() == LatticeFlavor::simply_connected ? "fundamental-weight basis"
                                                        : "simple-root basis";
}

ordered_json character_json(const SignedCharacter& ch) {
  ordered_json arr = ordered_json::array();
  for (const auto& [w, m] : ch) {
    ordered_json entry;
    entry["weight"] = weight_json(w);
    entry["mult"] = m;
    arr.push_back(std::move(entry));
  }
  return arr;
}

std::string character_text(const SignedCharacter& ch) {
  std::ostringstream os;
  for (const auto& [w, m] : ch) os << weight_text(w) << ": " << m << '\n';
  return os.str();
}

ordered_json row_json(const Session& s, const std::map<ExtElt, BigInt>& coeffs) {
  ordered_json arr = ordered_json::array();
  std::map<std::pair<Int, std::string>, const BigInt*> sorted;
  for (const auto& [y, c] : coeffs)
    sorted.emplace(std::make_pair(s.weyl->length(y), s.weyl->serialize(y)), &c);
  for (const auto& [key, c] : sorted) {
    ordered_json entry;
    entry["y"] = key.second;
    entry["coeff"] = c->str();
    arr.push_back(std::move(entry));
  }
  return arr;
}

Weight single_lambda(const Session& s, const JobSpec& spec) {
  require(spec.lambdas.size() == 1, "exactly one --lambda expected");
  const Weight& l = spec.lambdas[0];
  require(static_cast<int>(l.size()) == s.weyl->datum().rank(),
          "--lambda has wrong number of coordinates for " + spec.datum);
  return l;
}

void require_prime(Int p) {
  if (!is_prime(p)) throw parse_error("p must be a prime >= 2; got " + std::to_string(p));
}

// ---------------------------------------------------------------------
// Command implementations.  Each returns the JSON report; the text form is
// derived afterwards.

ordered_json cmd_weylchar(Session& s, const JobSpec& spec) {
  const Weight lambda = single_lambda(s, spec);
  const Character ch = s.chars->weyl_character(lambda);
  const BigInt dim = s.chars->weyl_dimension(lambda);
  require(char_mass(ch) == dim, "character mass disagrees with the dimension product");
  ordered_json j;
  j["schema"] = "weylchar/1";
  j["datum"] = spec.datum;
  j["convention"] = convention(s.weyl->datum());
  j["lambda"] = weight_json(lambda);
  j["dimension"] = bigint_str(dim);
  j["character"] = character_json(ch);
  return j;
}

ordered_json cmd_tiltchar(Session& s, const JobSpec& spec) {
  require_prime(spec.p);
  const Weight lambda = single_lambda(s, spec);
  const auto result = s.chars->tilting_character(lambda, spec.p, *s.provider);
  ordered_json j;
  j["schema"] = "tiltchar/1";
  j["datum"] = spec.datum;
  j["convention"] = convention(s.weyl->datum());
  j["p"] = spec.p;
  j["lambda"] = weight_json(lambda);
  j["basis"] = result.basis_label;
  ordered_json block;
  block["base"] = weight_json(result.block.base);
  block["J"] = result.block.J;
  j["block"] = std::move(block);
  j["w"] = s.weyl->serialize(result.w);
  j["w_word"] = s.weyl->word_string(result.w);
  j["row"] = row_json(s, result.row.coeffs);
  j["induced_expansion"] = character_json(result.induced);
  j["character"] = character_json(result.ch);
  j["dimension"] = bigint_str(char_mass(result.ch));
  return j;
}

ordered_json cmd_simplechar(Session& s, const JobSpec& spec) {
  require_prime(spec.p);
  const Weight lambda = single_lambda(s, spec);
  const auto result = s.chars->simple_character(lambda, spec.p, spec.assume_lusztig);
  ordered_json j;
  j["schema"] = "simplechar/1";
  j["datum"] = spec.datum;
  j["convention"] = convention(s.weyl->datum());
  j["p"] = spec.p;
  j["lambda"] = weight_json(lambda);
  j["basis"] = "KL (valid for p >> 0)";
  j["guard"] = "<w.0 + rho, alpha^vee> <= p(p-h+2)";
  j["induced_expansion"] = character_json(result.induced);
  j["character"] = character_json(result.ch);
  j["dimension"] = bigint_str(result.dimension);
  j["warnings"] = result.warnings;
  return j;
}

ordered_json cmd_klpoly(Session& s, const JobSpec& spec) {
  const ExtElt y = parse_element_arg(*s.weyl, spec.y_arg);
  const ExtElt w = parse_element_arg(*s.weyl, spec.w_arg);
  const LaurentPoly h = s.hecke->kl_poly(y, w);
  ordered_json j;
  j["schema"] = "klpoly/1";
  j["datum"] = spec.datum;
  j["y"] = s.weyl->serialize(y);
  j["w"] = s.weyl->serialize(w);
  j["poly"] = h.pretty();
  j["poly_terms"] = h.cache_str();
  j["mu"] = h.coeff(1).str();
  return j;
}

ordered_json cmd_asppoly(Session& s, const JobSpec& spec) {
  const ExtElt y = parse_element_arg(*s.weyl, spec.y_arg);
  const ExtElt w = parse_element_arg(*s.weyl, spec.w_arg);
  const LaurentPoly n = s.antispherical->poly(y, w);
  const BigInt value = s.antispherical->value_at_one(y, w);
  require(n.eval_one() == value,
          "antispherical polynomial and alternating sum disagree at v = 1");
  ordered_json j;
  j["schema"] = "asppoly/1";
  j["datum"] = spec.datum;
  j["y"] = s.weyl->serialize(y);
  j["w"] = s.weyl->serialize(w);
  j["poly"] = n.pretty();
  j["poly_terms"] = n.cache_str();
  j["value_at_one"] = value.str();
  return j;
}

ordered_json cmd_blocks(Session& s, const JobSpec& spec) {
  require_prime(spec.p);
  const Weight lambda = single_lambda(s, spec);
  const auto [bp, x] = s.chars->to_fundamental_domain(lambda, spec.p);
  ordered_json j;
  j["schema"] = "blocks/1";
  j["datum"] = spec.datum;
  j["convention"] = convention(s.weyl->datum());
  j["p"] = spec.p;
  j["lambda"] = weight_json(lambda);
  j["base"] = weight_json(bp.base);
  j["J"] = bp.J;
  j["x"] = s.weyl->serialize(x);
  j["x_word"] = s.weyl->word_string(x);
  ordered_json orbit = ordered_json::array();
  for (const auto& [w, mu] : s.chars->orbit_dominant(bp, spec.bound)) {
    ordered_json entry;
    entry["w_word"] = s.weyl->word_string(w);
    entry["weight"] = weight_json(mu);
    orbit.push_back(std::move(entry));
  }
  j["dominant_orbit"] = std::move(orbit);
  j["orbit_bound"] = spec.bound;
  return j;
}

ordered_json cmd_cells(Session& s, const JobSpec& spec) {
  const GenSubset gens = spec.finite ? s.weyl->finite_gens() : s.weyl->all_gens();
  const CellGraph g = s.cells->build_cell_graph(spec.bound, *s.provider, gens);
  const CellPartition part = s.cells->cell_partition(g);
  ordered_json j;
  j["schema"] = "cells/1";
  j["datum"] = spec.datum;
  j["bound"] = spec.bound;
  j["finite"] = spec.finite;
  j["basis"] = s.provider->label();
  ordered_json cells = ordered_json::array();
  for (const auto& cell : part.cells) {
    ordered_json c;
    c["id"] = cell.id;
    ordered_json members = ordered_json::array();
    for (int vi : cell.members)
      members.push_back(s.weyl->word_string(g.vertices[static_cast<size_t>(vi)]));
    c["members"] = std::move(members);
    c["complete"] = cell.complete;
    cells.push_back(std::move(c));
  }
  j["cells"] = std::move(cells);
  ordered_json warnings = ordered_json::array();
  for (const auto& cell : part.cells)
    if (!cell.complete)
      warnings.push_back("cell " + cell.id + " is truncated at bound " +
                         std::to_string(spec.bound));
  j["warnings"] = std::move(warnings);
  return j;
}

ordered_json cmd_humphreys(Session& s, const JobSpec& spec) {
  require_prime(spec.p);
  const Weight lambda = single_lambda(s, spec);
  const CellGraph g = s.cells->build_cell_graph(spec.bound, *s.provider, s.weyl->all_gens());
  const CellPartition part = s.cells->cell_partition(g);
  const HumphreysReport rep = s.cells->humphreys_cell(lambda, spec.p, g, part, spec.mode);
  ordered_json j;
  j["schema"] = "humphreys/1";
  j["datum"] = spec.datum;
  j["convention"] = convention(s.weyl->datum());
  j["p"] = spec.p;
  j["mode"] = rep.mode;
  j["lambda"] = weight_json(lambda);
  j["element"] = s.weyl->serialize(rep.element);
  j["affine_part_word"] = s.weyl->word_string(rep.affine_part);
  j["cell"] = rep.cell_id;
  j["cell_complete"] = rep.cell_complete;
  j["bound"] = spec.bound;
  if (rep.orbit_label)
    j["orbit"] = *rep.orbit_label;
  else
    j["orbit"] = nullptr;
  j["provenance"] = rep.provenance;
  j["warnings"] = rep.warnings;
  return j;
}

ordered_json cmd_translate_check(Session& s, const JobSpec& spec) {
  require_prime(spec.p);
  ordered_json j;
  j["schema"] = "translate-check/1";
  j["datum"] = spec.datum;
  j["p"] = spec.p;
  j["J"] = spec.j_set;
  j["K"] = spec.k_set;

  std::vector<std::pair<ExtElt, ExtElt>> pairs;
  if (spec.max_length >= 0) {
    const auto reps = s.weyl->enumerate_min_reps(spec.k_set, spec.max_length);
    for (const ExtElt& w : reps)
      for (const ExtElt& y : reps)
        if (s.weyl->length(y) <= s.weyl->length(w)) pairs.emplace_back(y, w);
  } else {
    pairs.emplace_back(parse_element_arg(*s.weyl, spec.y_arg),
                       parse_element_arg(*s.weyl, spec.w_arg));
  }

  bool all_ok = true;
  ordered_json checks = ordered_json::array();
  for (const auto& [y, w] : pairs) {
    const auto rep = s.chars->translation_identity_check(spec.j_set, spec.k_set, y, w,
                                                         spec.p, *s.provider);
    ordered_json c;
    c["y_word"] = s.weyl->word_string(y);
    c["w_word"] = s.weyl->word_string(w);
    c["c_lhs"] = rep.c_lhs.str();
    c["c_rhs"] = rep.c_rhs.str();
    c["c_ok"] = rep.c_ok;
    c["d_lhs"] = rep.d_lhs.str();
    ordered_json rhs = ordered_json::array();
    for (const BigInt& v : rep.d_rhs) rhs.push_back(v.str());
    c["d_rhs"] = std::move(rhs);
    c["d_ok"] = rep.d_ok;
    c["lusztig_guard_held"] = rep.guard_held;
    all_ok = all_ok && rep.c_ok && rep.d_ok;
    checks.push_back(std::move(c));
  }
  j["checks"] = std::move(checks);
  j["all_ok"] = all_ok;
  return j;
}

ordered_json cmd_cache_stats(Session& s, const JobSpec& spec) {
  ordered_json j;
  j["schema"] = "cache/1";
  j["datum"] = spec.datum;
  j["cache_dir"] = s.cache_dir.string();
  ordered_json files = ordered_json::array();
  const auto add = [&](const fs::path& p, const char* kind, std::size_t entries) {
    ordered_json f;
    f["path"] = p.string();
    f["kind"] = kind;
    f["entries"] = entries;
    f["present"] = fs::exists(p);
    files.push_back(std::move(f));
  };
  require(!s.cache_dir.empty(), "cache commands need a cache directory");
  add(s.kl_path, "KLCACHE", s.kl_loaded);
  add(s.as_path, "ASCACHE", s.as_loaded);
  j["files"] = std::move(files);
  return j;
}

ordered_json cmd_cache_verify(Session& s, const JobSpec& spec) {
  require(!s.cache_dir.empty(), "cache commands need a cache directory");
  ordered_json j;
  j["schema"] = "cache/1";
  j["datum"] = spec.datum;
  std::vector<std::string> defects;
  std::size_t checked = 0;

  cachefile::EntryMap kl_entries, as_entries;
  if (fs::exists(s.kl_path)) {
    try {
      kl_entries = cachefile::read(s.kl_path, "KLCACHE", *s.weyl);
    } catch (const cache_error& e) {
      defects.push_back(e.what());
    }
    for (const auto& [w, m] : kl_entries) {
      ++checked;
      // Self-duality is the defining property; re-verify it per entry.
      HeckeElt elt{CoeffMap(m)};
      if (!(s.hecke->bar(elt) == elt))
        defects.push_back("entry " + s.weyl->serialize(w) + " is not bar-self-dual");
      const auto diag = m.find(w);
      if (diag == m.end() || !diag->second.is_one())
        defects.push_back("entry " + s.weyl->serialize(w) + " lacks a unit diagonal");
      for (const auto& [y, p] : m) {
        if (!(y == w) && p.min_exp() <= 0)
          defects.push_back("entry " + s.weyl->serialize(w) +
                            " has non-positive degree at " + s.weyl->serialize(y));
        if (!s.weyl->bruhat_leq(y, w))
          defects.push_back("entry " + s.weyl->serialize(w) + " has support above it at " +
                            s.weyl->serialize(y));
      }
    }
  }
  if (fs::exists(s.as_path)) {
    try {
      as_entries = cachefile::read(s.as_path, "ASCACHE", *s.weyl);
    } catch (const cache_error& e) {
      defects.push_back(e.what());
    }
    for (const auto& [w, m] : as_entries) {
      ++checked;
      if (!s.weyl->is_min_in_W_coset(w))
        defects.push_back("antispherical entry " + s.weyl->serialize(w) +
                          " is not a minimal coset representative");
      const auto diag = m.find(w);
      if (diag == m.end() || !diag->second.is_one())
        defects.push_back("antispherical entry " + s.weyl->serialize(w) +
                          " lacks a unit diagonal");
    }
  }
  j["entries_checked"] = checked;
  j["defects"] = defects;
  j["ok"] = defects.empty();
  return j;
}

ordered_json cmd_cache_import(Session& s, const JobSpec& spec) {
  require(!s.cache_dir.empty(), "cache commands need a cache directory");
  require(!spec.import_path.empty(), "cache-import needs a table path");
  const auto table = TableBasisProvider::load(spec.import_path, s.weyl);
  const fs::path target = s.cache_dir / (spec.datum + ".ptable-" + table->table_hash() + ".klc");
  fs::copy_file(spec.import_path, target, fs::copy_options::overwrite_existing);
  ordered_json j;
  j["schema"] = "cache/1";
  j["datum"] = spec.datum;
  j["imported"] = target.string();
  j["table_hash"] = table->table_hash();
  j["entries"] = table->size();
  return j;
}

// "(c1,...,cn)" form of a JSON weight array.
std::string weight_tuple(const ordered_json& arr) {
  std::ostringstream os;
  os << '(';
  for (size_t i = 0; i < arr.size(); ++i) {
    if (i) os << ',';
    os << arr[i].get<Int>();
  }
  os << ')';
  return os.str();
}

std::string text_report(const std::string& command, const ordered_json& j) {
  std::ostringstream os;
  if (command == "weylchar" || command == "tiltchar" || command == "simplechar") {
    if (j.contains("basis")) os << "basis: " << j["basis"].get<std::string>() << '\n';
    if (j.contains("block"))
      os << "block base " << weight_tuple(j["block"]["base"]) << " J "
         << j["block"]["J"].dump() << " w " << j["w_word"].get<std::string>() << '\n';
    if (j.contains("row")) {
      os << j["w"].get<std::string>() << " -> {";
      bool first = true;
      for (const auto& e : j["row"]) {
        if (!first) os << ", ";
        first = false;
        os << e["y"].get<std::string>() << ": " << e["coeff"].get<std::string>();
      }
      os << "}\n";
    }
    os << "dimension: " << j["dimension"].get<std::string>() << '\n';
    if (j.contains("induced_expansion")) {
      os << "induced expansion:\n";
      for (const auto& e : j["induced_expansion"])
        os << "  " << weight_tuple(e["weight"]) << ": " << e["mult"].dump() << '\n';
    }
    os << "character:\n";
    for (const auto& e : j["character"])
      os << "  " << weight_tuple(e["weight"]) << ": " << e["mult"].dump() << '\n';
    if (j.contains("warnings"))
      for (const auto& wmsg : j["warnings"]) os << "warning: " << wmsg.get<std::string>() << '\n';
    return os.str();
  }
  if (command == "klpoly" || command == "asppoly") {
    os << j["poly"].get<std::string>() << '\n';
    return os.str();
  }
  if (command == "cells") {
    for (const auto& c : j["cells"]) {
      os << "cell " << c["id"].get<std::string>() << (c["complete"].get<bool>() ? "" : " (incomplete)")
         << ":";
      for (const auto& m : c["members"]) os << ' ' << m.get<std::string>();
      os << '\n';
    }
    return os.str();
  }
  // Generic fallback: pretty JSON.
  return j.dump(2) + "\n";
}

}  // namespace

RunResult run(const JobSpec& spec) {
  RunResult result;
  try {
    if (spec.format != "json" && spec.format != "text")
      throw parse_error("unknown output format: " + spec.format);
    Session session(spec);
    ordered_json j;
    if (spec.command == "weylchar")
      j = cmd_weylchar(session, spec);
    else if (spec.command == "tiltchar")
      j = cmd_tiltchar(session, spec);
    else if (spec.command == "simplechar")
      j = cmd_simplechar(session, spec);
    else if (spec.command == "klpoly")
      j = cmd_klpoly(session, spec);
    else if (spec.command == "asppoly")
      j = cmd_asppoly(session, spec);
    else if (spec.command == "blocks")
      j = cmd_blocks(session, spec);
    else if (spec.command == "cells")
      j = cmd_cells(session, spec);
    else if (spec.command == "humphreys")
      j = cmd_humphreys(session, spec);
    else if (spec.command == "translate-check")
      j = cmd_translate_check(session, spec);
    else if (spec.command == "cache-stats")
      j = cmd_cache_stats(session, spec);
    else if (spec.command == "cache-verify")
      j = cmd_cache_verify(session, spec);
    else if (spec.command == "cache-import")
      j = cmd_cache_import(session, spec);
    else
      throw parse_error("unknown command: " + spec.command);

    session.persist();
    result.output = spec.format == "json" ? j.dump(2) + "\n" : text_report(spec.command, j);
    result.exit_code = 0;
    // cache verification reports its defect list and still fails the run
    if (j.contains("ok") && j["ok"].is_boolean() && !j["ok"].get<bool>()) {
      result.exit_code = 2;
      result.diagnostics = "cache error: verification found " +
                           std::to_string(j["defects"].size()) + " defect(s)";
    }
  } catch (const guard_error& e) {
    result.exit_code = 3;
    result.diagnostics = std::string("guard refusal: ") + e.what();
  } catch (const provider_error& e) {
    result.exit_code = 4;
    result.diagnostics = std::string("incomplete provider: ") + e.what();
  } catch (const truncation_error& e) {
    result.exit_code = 5;
    result.diagnostics = std::string("out of truncation: ") + e.what();
  } catch (const parse_error& e) {
    result.exit_code = 2;
    result.diagnostics = std::string("parse error: ") + e.what();
  } catch (const cache_error& e) {
    result.exit_code = 2;
    result.diagnostics = std::string("cache error: ") + e.what();
  } catch (const domain_error& e) {
    result.exit_code = 2;
    result.diagnostics = std::string("invalid request: ") + e.what();
  } catch (const std::exception& e) {
    result.exit_code = 1;
    result.diagnostics = std::string("internal error: ") + e.what();
  }
  return result;
}

}  // namespace klchar::cli
