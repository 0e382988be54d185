#pragma once

// Test-side oracles, independent of the implementation paths they check:
//  - word-graph BFS lengths (no closed-form length involved),
//  - brute-force self-dual basis solvers (bar fixed point + triangular
//    elimination, no mu-recursion),
//  - the alternating-sum character formula evaluated by literal division,
//  - rank-one closed forms for induced/tilting/simple characters,
//  - subword-enumeration Bruhat comparison.

#include <map>
#include <unordered_map>
#include <vector>

#include "klchar/antispherical.hpp"
#include "klchar/characters.hpp"
#include "klchar/hecke.hpp"
#include "klchar/weyl.hpp"

namespace oracles {

using namespace klchar;

// Word lengths by breadth-first search over the generator graph.
std::unordered_map<ExtElt, Int, ExtEltHash> bfs_lengths(const WeylContext& ctx, Int radius,
                                                        const GenSubset& gens);

// Self-dual basis element attached to w, solved from bar-invariance and the
// degree constraints by triangular elimination over the support of bar(H_w).
CoeffMap bruteforce_selfdual(const HeckeContext& h, const ExtElt& w);

// Antispherical analogue.
CoeffMap bruteforce_selfdual_antispherical(const AntisphericalContext& as,
                                           const HeckeContext& h, const ExtElt& w);

// Weyl character by dividing the alternating sums (practical in rank <= 2).
Character altsum_weyl_character(const CharacterContext& chars, const Weight& lambda);

// Rank-one closed forms (weights are single coordinates in the
// fundamental-weight basis).
Character sl2_induced(Int m);
Character sl2_tilting(Int lambda, Int p);
Character sl2_simple(Int lambda, Int p);

// Bruhat order by enumerating all subwords of a reduced word of x.
bool subword_bruhat_leq(const WeylContext& ctx, const ExtElt& y, const ExtElt& x);

}  // namespace oracles
