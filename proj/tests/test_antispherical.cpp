#include <doctest.h>

#include <random>

#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace klchar;

TEST_CASE("action rules on basis vectors") {
  const auto t = fixtures::make_tower("A1sc");
  const auto& AS = *t.as;
  const auto& W = *t.weyl;
  const ASElt n_e = AS.unit();
  // finite generator: eigenvalue -v
  CHECK(AS.mult_gen(n_e, 1) == n_e.scaled(-LaurentPoly::v(1)));
  // affine generator: walk up
  const ASElt n_s0 = AS.mult_gen(n_e, 0);
  CHECK(n_s0 == HeckeElt::basis(W.gen(0)));
  // walk down: N_e + (v^-1 - v) N_{s0}
  ASElt expected = n_e;
  expected += n_s0.scaled(LaurentPoly::v(-1) - LaurentPoly::v(1));
  CHECK(AS.mult_gen(n_s0, 0) == expected);
}

TEST_CASE("module axiom: the quadratic relation acts consistently") {
  for (const char* d : {"A1sc", "A2sc"}) {
    const auto t = fixtures::make_tower(d);
    const auto& AS = *t.as;
    const auto& W = *t.weyl;
    const LaurentPoly corr = LaurentPoly::v(-1) - LaurentPoly::v(1);
    for (const ExtElt& w : W.enumerate_min_reps({}, 8)) {
      const ASElt n = HeckeElt::basis(w);
      for (GenIndex s : W.all_gens()) {
        const ASElt once = AS.mult_gen(n, s);
        const ASElt twice = AS.mult_gen(once, s);
        // n (H_s H_s) = n (H_e + (v^-1 - v) H_s)
        ASElt rhs = n;
        rhs += once.scaled(corr);
        CHECK(twice == rhs);
      }
    }
  }
}

TEST_CASE("action of full Hecke elements factors through products") {
  const auto t = fixtures::make_tower("A2sc");
  const auto& AS = *t.as;
  const auto& H = *t.hecke;
  const auto& W = *t.weyl;
  std::mt19937 rng(31);
  const auto ball = W.ball(4);
  for (int trial = 0; trial < 25; ++trial) {
    const ExtElt& z = ball[rng() % ball.size()];
    const GenIndex s = static_cast<GenIndex>(rng() % W.simple_reflections().size());
    const ASElt lhs = AS.act(AS.unit(), H.multiply(H.std_basis(z), H.std_basis(W.gen(s))));
    const ASElt rhs = AS.mult_gen(AS.act(AS.unit(), H.std_basis(z)), s);
    CHECK(lhs == rhs);
  }
}

TEST_CASE("projection sends length-additive products to sign twists") {
  const auto t = fixtures::make_tower("A2sc");
  const auto& AS = *t.as;
  const auto& H = *t.hecke;
  const auto& W = *t.weyl;
  for (const ExtElt& u : W.parabolic_subgroup(W.finite_gens())) {
    for (const ExtElt& w : W.enumerate_min_reps({}, 4)) {
      const ExtElt uw = W.multiply(u, w);
      if (W.length(uw) != W.length(u) + W.length(w)) continue;
      const ASElt image = AS.act(AS.unit(), H.std_basis(uw));
      LaurentPoly sign = LaurentPoly::one();
      for (Int i = 0; i < W.length(u); ++i) sign = sign * -LaurentPoly::v(1);
      CHECK(image == HeckeElt::basis(w).scaled(sign));
    }
  }
}

TEST_CASE("canonical basis examples in affine rank one") {
  const auto t = fixtures::make_tower("A1sc");
  const auto& AS = *t.as;
  const auto& W = *t.weyl;
  CHECK(*AS.canonical(W.identity()) == CoeffMap{{W.identity(), LaurentPoly::one()}});
  const ExtElt s0 = W.gen(0);
  const ExtElt s0s = W.multiply(s0, W.gen(1));
  CHECK(*AS.canonical(s0) ==
        CoeffMap{{s0, LaurentPoly::one()}, {W.identity(), LaurentPoly::v(1)}});
  CHECK(*AS.canonical(s0s) == CoeffMap{{s0s, LaurentPoly::one()}, {s0, LaurentPoly::v(1)}});
}

TEST_CASE("canonical elements solve the duality fixed point") {
  for (const char* d : {"A1sc", "A2sc"}) {
    const auto t = fixtures::make_tower(d);
    const Int bound = std::string(d) == "A1sc" ? 6 : 4;
    for (const ExtElt& w : t.weyl->enumerate_min_reps({}, bound)) {
      CHECK(*t.as->canonical(w) ==
            oracles::bruteforce_selfdual_antispherical(*t.as, *t.hecke, w));
    }
  }
}

TEST_CASE("two-path agreement at v = 1 on a small range") {
  const auto t = fixtures::make_tower("A1sc");
  const auto reps = t.weyl->enumerate_min_reps({}, 5);
  for (const ExtElt& w : reps)
    for (const ExtElt& y : reps) {
      CHECK(t.as->poly(y, w).eval_one() == t.as->value_at_one(y, w));
    }
}

TEST_CASE("explicit alternating sums in rank one") {
  const auto t = fixtures::make_tower("A1sc");
  const auto& W = *t.weyl;
  CHECK(t.as->value_at_one(W.identity(), W.gen(0)) == 1);   // n_{e,s0}(1) = 1
  CHECK(t.as->poly(W.gen(0), W.gen(0)).eval_one() == 1);
  CHECK(t.as->value_at_one(W.gen(0), W.identity()) == 0);   // y not below w
}

TEST_CASE("degree bounds mirror the Hecke ones") {
  const auto t = fixtures::make_tower("A2sc");
  for (const ExtElt& w : t.weyl->enumerate_min_reps({}, 5)) {
    const auto n = t.as->canonical(w);
    for (const auto& [y, p] : *n) {
      CHECK(t.weyl->is_min_in_W_coset(y));
      if (y == w)
        CHECK(p.is_one());
      else {
        CHECK(p.min_exp() >= 1);
        CHECK(p.max_exp() <= static_cast<int>(t.weyl->length(w) - t.weyl->length(y)));
      }
    }
  }
}

TEST_CASE("indexing outside the minimal representatives is rejected") {
  const auto t = fixtures::make_tower("A1sc");
  CHECK_THROWS_AS(t.as->canonical(t.weyl->gen(1)), domain_error);
}
