#pragma once

#include <memory>
#include <random>
#include <string>

#include "klchar/antispherical.hpp"
#include "klchar/cells.hpp"
#include "klchar/characters.hpp"
#include "klchar/hecke.hpp"
#include "klchar/weyl.hpp"

namespace fixtures {

using namespace klchar;

struct Tower {
  std::shared_ptr<const WeylContext> weyl;
  std::shared_ptr<HeckeContext> hecke;
  std::shared_ptr<AntisphericalContext> as;
  std::shared_ptr<CharacterContext> chars;
  std::shared_ptr<CellContext> cells;
  std::shared_ptr<KLBasisProvider> kl_provider;
};

inline Tower make_tower(const std::string& descriptor) {
  Tower t;
  t.weyl = std::make_shared<const WeylContext>(RootDatum::from_descriptor(descriptor));
  t.hecke = std::make_shared<HeckeContext>(t.weyl);
  t.as = std::make_shared<AntisphericalContext>(t.weyl, t.hecke);
  t.chars = std::make_shared<CharacterContext>(t.weyl, t.hecke, t.as);
  t.cells = std::make_shared<CellContext>(t.weyl, t.chars);
  t.kl_provider = std::make_shared<KLBasisProvider>(t.hecke);
  return t;
}

// Dominant weight with pairings against the simple coroots in
// [0, max_pairing]; rejection-samples for lattices where not every pairing
// vector is realized.
inline Weight random_dominant(std::mt19937& rng, const RootDatum& rd, Int max_pairing) {
  std::uniform_int_distribution<Int> dist(0, max_pairing);
  for (;;) {
    IntVec pairings(static_cast<size_t>(rd.rank()));
    for (auto& c : pairings) c = dist(rng);
    if (const auto w = rd.weight_with_simple_pairings(pairings)) return *w;
  }
}

inline Weight random_dominant(std::mt19937& rng, const Tower& t, Int max_pairing) {
  return random_dominant(rng, t.weyl->datum(), max_pairing);
}

inline ExtElt nontrivial_omega(const Tower& t) {
  for (const ExtElt& o : t.weyl->omega())
    if (!o.is_identity()) return o;
  throw domain_error("Omega is trivial for this datum");
}

}  // namespace fixtures
