// Acceptance suite: one pass/fail line per criterion, nonzero exit if any
// fails.  Every expected value is produced by an independent oracle or a
// closed form, never by the code path under test.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace klchar;
namespace fs = std::filesystem;

namespace {

int failures = 0;

struct Criterion {
  int number;
  std::string description;
  bool passed = true;
  std::string detail;
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();

  Criterion(int n, std::string d) : number(n), description(std::move(d)) {}

  void expect(bool ok, const std::string& what) {
    if (!ok && passed) {
      passed = false;
      detail = what;
    }
  }

  ~Criterion() {
    const auto elapsed = std::chrono::duration_cast<std::chrono::milliseconds>(
                             std::chrono::steady_clock::now() - start)
                             .count();
    std::cout << "criterion " << number << ": " << (passed ? "PASS" : "FAIL") << " - "
              << description << " [" << elapsed << " ms]";
    if (!passed) {
      std::cout << " - " << detail;
      ++failures;
    }
    std::cout << std::endl;
  }
};

void criterion1_kl_oracle() {
  Criterion c(1, "recursive KL elements equal the brute-force bar-fixed-point solver "
                 "(finite A2, finite B2, affine A1/A2 balls of length <= 8); < 60 s cold");
  struct Case {
    const char* datum;
    bool finite;
    Int bound;
  };
  for (const Case cs : {Case{"A2sc", true, 3}, Case{"B2sc", true, 4},
                        Case{"A1sc", false, 8}, Case{"A2sc", false, 8}}) {
    const auto t = fixtures::make_tower(cs.datum);
    const auto ball =
        cs.finite ? t.weyl->ball(cs.bound, t.weyl->finite_gens()) : t.weyl->ball(cs.bound);
    for (const ExtElt& w : ball) {
      const CoeffMap& computed = *t.hecke->kl_element(w);
      const CoeffMap expected = oracles::bruteforce_selfdual(*t.hecke, w);
      c.expect(computed == expected,
               std::string(cs.datum) + (cs.finite ? " finite " : " affine ") +
                   "mismatch at w = " + t.weyl->serialize(w));
      if (!c.passed) return;
    }
  }
  const auto elapsed = std::chrono::steady_clock::now() - c.start;
  c.expect(elapsed < std::chrono::seconds(60), "runtime budget of 60 s exceeded");
}

void criterion2_antispherical_two_path() {
  Criterion c(2, "antispherical polynomials at v=1 equal the signed sums over W "
                 "(affine A1 length <= 8, affine A2 length <= 6)");
  struct Case {
    const char* datum;
    Int bound;
  };
  for (const Case cs : {Case{"A1sc", 8}, Case{"A2sc", 6}}) {
    const auto t = fixtures::make_tower(cs.datum);
    const auto reps = t.weyl->enumerate_min_reps({}, cs.bound);
    for (const ExtElt& w : reps) {
      for (const ExtElt& y : reps) {
        if (t.weyl->length(y) > t.weyl->length(w)) continue;
        const BigInt via_module = t.as->poly(y, w).eval_one();
        const BigInt via_hecke = t.as->value_at_one(y, w);
        c.expect(via_module == via_hecke,
                 std::string(cs.datum) + " mismatch at y = " + t.weyl->serialize(y) +
                     ", w = " + t.weyl->serialize(w));
        if (!c.passed) return;
      }
    }
  }
}

void criterion3_sl2_tilting() {
  Criterion c(3, "rank-one tilting characters match the closed form for p in {3,5,7}, "
                 "lambda <= 2p-2; < 5 s");
  const auto t = fixtures::make_tower("A1sc");
  for (const Int p : {3, 5, 7}) {
    for (Int lambda = 0; lambda <= 2 * p - 2; ++lambda) {
      const auto result = t.chars->tilting_character(Weight{lambda}, p, *t.kl_provider);
      c.expect(result.ch == oracles::sl2_tilting(lambda, p),
               "mismatch at p = " + std::to_string(p) + ", lambda = " + std::to_string(lambda));
      if (!c.passed) return;
    }
  }
  const auto elapsed = std::chrono::steady_clock::now() - c.start;
  c.expect(elapsed < std::chrono::seconds(5), "runtime budget of 5 s exceeded");
}

void criterion4_sl2_simple() {
  Criterion c(4, "rank-one simple characters match the Steinberg-built oracle for p = 5, "
                 "all dominant lambda < 25");
  const auto t = fixtures::make_tower("A1sc");
  for (Int lambda = 0; lambda < 25; ++lambda) {
    const auto result = t.chars->simple_character(Weight{lambda}, 5);
    c.expect(result.ch == oracles::sl2_simple(lambda, 5),
             "mismatch at lambda = " + std::to_string(lambda));
    if (!c.passed) return;
  }
}

void criterion5_translation_identities() {
  Criterion c(5, "c- and d-translation identities (J empty, every singleton K, length <= 6, "
                 "u-independence) hold for affine A1/A2 at p = 5 and 7");
  for (const char* datum : {"A1sc", "A2sc"}) {
    const auto t = fixtures::make_tower(datum);
    for (const Int p : {5, 7}) {
      for (GenIndex k = 0; k < static_cast<GenIndex>(t.weyl->simple_reflections().size());
           ++k) {
        const GenSubset ks{k};
        const auto reps = t.weyl->enumerate_min_reps(ks, 6);
        for (const ExtElt& w : reps) {
          for (const ExtElt& y : reps) {
            if (t.weyl->length(y) > t.weyl->length(w)) continue;
            const auto rep =
                t.chars->translation_identity_check({}, ks, y, w, p, *t.kl_provider);
            c.expect(rep.c_ok && rep.d_ok,
                     std::string(datum) + " p=" + std::to_string(p) + " K={" +
                         std::to_string(k) + "} failed at y = " + t.weyl->serialize(y) +
                         ", w = " + t.weyl->serialize(w));
            if (!c.passed) return;
          }
        }
      }
    }
  }
}

void criterion6_linkage() {
  Criterion c(6, "induced expansions of 100 random tilting characters stay inside one "
                 "dot-orbit (rank <= 2, p in {5,7})");
  std::mt19937 rng(0xC0FFEE);
  const char* data[] = {"A1sc", "A2sc", "B2sc"};
  std::vector<fixtures::Tower> towers;
  for (const char* d : data) towers.push_back(fixtures::make_tower(d));
  for (int trial = 0; trial < 100; ++trial) {
    const auto& t = towers[trial % 3];
    const Int p = trial % 2 == 0 ? 5 : 7;
    const Weight lambda = fixtures::random_dominant(rng, t, 8);
    const auto result = t.chars->tilting_character(lambda, p, *t.kl_provider);
    const auto expansion = t.chars->decompose_into_induced(
        SignedCharacter(result.ch.begin(), result.ch.end()));
    for (const auto& [mu, coeff] : expansion) {
      const auto [bp, x] = t.chars->to_fundamental_domain(mu, p);
      c.expect(t.weyl->datum().is_dominant(mu), "expansion weight not dominant");
      c.expect(bp.base == result.block.base,
               "expansion left the dot-orbit at trial " + std::to_string(trial));
      if (!c.passed) return;
    }
  }
}

void criterion7_weyl_dimension() {
  Criterion c(7, "character mass equals the Weyl dimension product for 50 random dominant "
                 "weights per datum in {A1, A2, B2, G2}");
  std::mt19937 rng(0xFEEDFACE);
  for (const char* d : {"A1sc", "A2sc", "B2sc", "G2sc"}) {
    const auto t = fixtures::make_tower(d);
    for (int trial = 0; trial < 50; ++trial) {
      const Weight lambda = fixtures::random_dominant(rng, t, 10);
      const BigInt mass = char_mass(t.chars->weyl_character(lambda));
      c.expect(mass == t.chars->weyl_dimension(lambda),
               std::string(d) + " dimension mismatch at trial " + std::to_string(trial));
      if (!c.passed) return;
    }
  }
}

void criterion8_cells() {
  Criterion c(8, "affine A1 cells at bounds 4..10 are {e} (complete) plus its complement "
                 "(incomplete), stable across bounds; finite A2 has three cells; < 120 s");
  const auto t = fixtures::make_tower("A1sc");
  for (Int bound = 4; bound <= 10; ++bound) {
    const auto g = t.cells->build_cell_graph(bound, *t.kl_provider);
    const auto part = t.cells->cell_partition(g);
    c.expect(part.cells.size() == 2,
             "expected two cells at bound " + std::to_string(bound) + ", found " +
                 std::to_string(part.cells.size()));
    if (!c.passed) return;
    c.expect(part.cells[0].id == "[]" && part.cells[0].members.size() == 1 &&
                 part.cells[0].complete,
             "identity cell malformed at bound " + std::to_string(bound));
    c.expect(part.cells[1].members.size() == g.vertices.size() - 1 && !part.cells[1].complete,
             "complement cell malformed at bound " + std::to_string(bound));
    if (!c.passed) return;
  }
  const auto a2 = fixtures::make_tower("A2sc");
  const auto g = a2.cells->build_cell_graph(3, *a2.kl_provider, a2.weyl->finite_gens());
  const auto part = a2.cells->cell_partition(g);
  c.expect(part.cells.size() == 3, "finite A2 should split into three cells, found " +
                                       std::to_string(part.cells.size()));
  const auto elapsed = std::chrono::steady_clock::now() - c.start;
  c.expect(elapsed < std::chrono::seconds(120), "runtime budget of 120 s exceeded");
}

void criterion9_row_invariants() {
  Criterion c(9, "tilting rows are unitriangular and nonnegative; characters have "
                 "multiplicity one at the top weight and support below it");
  std::mt19937 rng(0xC0FFEE);  // same stream shape as criterion 6
  const char* data[] = {"A1sc", "A2sc", "B2sc"};
  std::vector<fixtures::Tower> towers;
  for (const char* d : data) towers.push_back(fixtures::make_tower(d));

  const auto check_one = [&](const fixtures::Tower& t, const Weight& lambda, Int p) {
    const auto [bp, w] = t.chars->to_fundamental_domain(lambda, p);
    const auto row = t.chars->tilting_row(bp, w, *t.kl_provider);
    const auto self = row.coeffs.find(w);
    c.expect(self != row.coeffs.end() && self->second == 1, "diagonal entry is not one");
    for (const auto& [y, d] : row.coeffs) c.expect(d >= 0, "negative tilting multiplicity");
    const auto result = t.chars->tilting_character(lambda, p, *t.kl_provider);
    const auto top = result.ch.find(lambda);
    c.expect(top != result.ch.end() && top->second == 1,
             "character multiplicity at the top weight is not one");
    for (const auto& [mu, m] : result.ch)
      c.expect(t.weyl->datum().dominance_leq(mu, lambda), "support escaped the top weight");
  };

  // the lambda set of criterion 3
  const auto a1 = fixtures::make_tower("A1sc");
  for (const Int p : {3, 5, 7})
    for (Int lambda = 0; lambda <= 2 * p - 2 && c.passed; ++lambda)
      check_one(a1, Weight{lambda}, p);
  // the lambda set of criterion 6
  for (int trial = 0; trial < 100 && c.passed; ++trial) {
    const auto& t = towers[trial % 3];
    const Int p = trial % 2 == 0 ? 5 : 7;
    check_one(t, fixtures::random_dominant(rng, t, 8), p);
  }
}

void criterion10_cache_integrity() {
  Criterion c(10, "store/load/verify round-trip over >= 500 cached elements with zero "
                  "defects; injected corruption is detected");
  const auto t = fixtures::make_tower("A2sc");
  const auto ball = t.weyl->ball(18);
  c.expect(ball.size() >= 500, "ball is unexpectedly small: " + std::to_string(ball.size()));
  for (const ExtElt& w : ball) t.hecke->kl_element(w);
  c.expect(t.hecke->cached_count() >= 500, "fewer than 500 cached elements");

  std::string tmpl = (fs::temp_directory_path() / "klchar-acceptance-XXXXXX").string();
  const fs::path dir = mkdtemp(tmpl.data());
  const fs::path file = dir / "A2sc.klcache";
  t.hecke->cache_store(file);

  const auto fresh = fixtures::make_tower("A2sc");
  fresh.hecke->cache_load(file);
  c.expect(fresh.hecke->snapshot() == t.hecke->snapshot(), "round-trip changed the cache");

  // full verification pass: self-duality, unitriangularity, Bruhat support
  std::size_t defects = 0;
  for (const auto& [w, m] : fresh.hecke->snapshot()) {
    HeckeElt elt{CoeffMap(m)};
    if (!(fresh.hecke->bar(elt) == elt)) ++defects;
    const auto diag = m.find(w);
    if (diag == m.end() || !diag->second.is_one()) ++defects;
    for (const auto& [y, p] : m)
      if (!(y == w) && p.min_exp() <= 0) ++defects;
  }
  c.expect(defects == 0, std::to_string(defects) + " defects after round-trip");

  // corruption injection must be detected and reported
  {
    std::ifstream in(file);
    std::string contents((std::istreambuf_iterator<char>(in)), {});
    in.close();
    const size_t pos = contents.rfind(" | ");
    contents.replace(pos, 3, " ! ");
    const fs::path bad = dir / "corrupt.klcache";
    std::ofstream(bad) << contents;
    bool detected = false;
    try {
      const auto probe = fixtures::make_tower("A2sc");
      probe.hecke->cache_load(bad);
    } catch (const cache_error&) {
      detected = true;
    }
    c.expect(detected, "corrupted entry was loaded without complaint");
  }
  std::error_code ec;
  fs::remove_all(dir, ec);
}

}  // namespace

int main() {
  std::cout << "acceptance suite (exact arithmetic throughout, fixed seeds)\n";
  criterion1_kl_oracle();
  criterion2_antispherical_two_path();
  criterion3_sl2_tilting();
  criterion4_sl2_simple();
  criterion5_translation_identities();
  criterion6_linkage();
  criterion7_weyl_dimension();
  criterion8_cells();
  criterion9_row_invariants();
  criterion10_cache_integrity();
  if (failures) {
    std::cout << failures << " criterion(s) failed" << std::endl;
    return 1;
  }
  std::cout << "all criteria passed" << std::endl;
  return 0;
}
