#include "oracles.hpp"

#include <algorithm>
#include <deque>

namespace oracles {

std::unordered_map<ExtElt, Int, ExtEltHash> bfs_lengths(const WeylContext& ctx, Int radius,
                                                        const GenSubset& gens) {
  std::unordered_map<ExtElt, Int, ExtEltHash> dist;
  std::deque<ExtElt> frontier{ctx.identity()};
  dist.emplace(ctx.identity(), 0);
  while (!frontier.empty()) {
    const ExtElt cur = frontier.front();
    frontier.pop_front();
    const Int d = dist.at(cur);
    if (d == radius) continue;
    for (GenIndex s : gens) {
      ExtElt nxt = ctx.multiply(cur, ctx.gen(s));
      if (dist.emplace(nxt, d + 1).second) frontier.push_back(std::move(nxt));
    }
  }
  return dist;
}

namespace {

// Shared triangular solve: given the unitriangular bar matrix r_{z,y} of a
// candidate support (as coefficient maps of bar images), find the unique
// family P with P_top = 1, P_z in vZ[v] for z != top, and
// P_z - bar(P_z) = sum_{y > z} bar(P_y) r_{z,y}.
CoeffMap solve_selfdual(const WeylContext& ctx, const ExtElt& top,
                        const std::map<ExtElt, CoeffMap>& bar_images) {
  std::vector<ExtElt> order;
  for (const auto& [y, img] : bar_images) order.push_back(y);
  std::sort(order.begin(), order.end(), [&ctx](const ExtElt& a, const ExtElt& b) {
    const Int la = ctx.length(a), lb = ctx.length(b);
    if (la != lb) return la > lb;
    return a < b;
  });

  std::map<ExtElt, LaurentPoly> p;
  for (const ExtElt& z : order) {
    if (z == top) {
      p.emplace(z, LaurentPoly::one());
      continue;
    }
    LaurentPoly f;
    for (const auto& [y, py] : p) {
      const auto img = bar_images.find(y);
      if (img == bar_images.end()) continue;
      const auto rzy = img->second.find(z);
      if (rzy == img->second.end()) continue;
      f += py.bar() * rzy->second;
    }
    // f must be antisymmetric under bar; its positive part is P_z.
    require(f.bar() == -f, "self-duality system is inconsistent");
    p.emplace(z, f.positive_part());
  }

  CoeffMap out;
  for (auto& [z, poly] : p)
    if (!poly.is_zero()) out.emplace(z, std::move(poly));
  return out;
}

}  // namespace

CoeffMap bruteforce_selfdual(const HeckeContext& h, const ExtElt& w) {
  const WeylContext& ctx = h.weyl();
  // bar(H_w) is supported on the whole Bruhat interval below w.
  std::map<ExtElt, CoeffMap> bar_images;
  std::deque<ExtElt> work{w};
  bar_images.emplace(w, *h.bar_basis(w));
  while (!work.empty()) {
    const ExtElt cur = work.front();
    work.pop_front();
    for (const auto& [z, r] : bar_images.at(cur)) {
      if (bar_images.count(z)) continue;
      bar_images.emplace(z, *h.bar_basis(z));
      work.push_back(z);
    }
  }
  return solve_selfdual(ctx, w, bar_images);
}

CoeffMap bruteforce_selfdual_antispherical(const AntisphericalContext& as,
                                           const HeckeContext& h, const ExtElt& w) {
  const WeylContext& ctx = h.weyl();
  const auto bar_image_of = [&](const ExtElt& y) {
    // bar(N_y) = N_e . bar(H_y), computed through the module action.
    const ASElt img = as.act(as.unit(), HeckeElt{CoeffMap(*h.bar_basis(y))});
    return img.coeffs();
  };
  std::map<ExtElt, CoeffMap> bar_images;
  std::deque<ExtElt> work{w};
  bar_images.emplace(w, bar_image_of(w));
  while (!work.empty()) {
    const ExtElt cur = work.front();
    work.pop_front();
    for (const auto& [z, r] : bar_images.at(cur)) {
      if (bar_images.count(z)) continue;
      bar_images.emplace(z, bar_image_of(z));
      work.push_back(z);
    }
  }
  return solve_selfdual(ctx, w, bar_images);
}

Character altsum_weyl_character(const CharacterContext& chars, const Weight& lambda) {
  const WeylContext& ctx = chars.weyl();
  const RootDatum& rd = ctx.datum();
  require(rd.is_dominant(lambda), "oracle needs a dominant weight");

  Weight rho_check(static_cast<size_t>(rd.rank()), 0);
  for (const auto& pr : rd.positive_roots()) rho_check = vec_add(rho_check, pr.coroot);
  const auto htkey = [&](const Weight& w) { return vec_dot(w, rho_check); };

  const auto signed_orbit_sum = [&](const Weight& l) {
    SignedCharacter out;
    const Weight shifted = vec_add(vec_scale(l, 2), rd.rho_doubled());
    for (const ExtElt& u : ctx.parabolic_subgroup(ctx.finite_gens())) {
      Weight e = vec_sub(u.fin().apply(shifted), rd.rho_doubled());
      for (Int& c : e) {
        require(c % 2 == 0, "oracle parity failure");
        c /= 2;
      }
      out[e] += ctx.length(u) % 2 == 0 ? 1 : -1;
      if (out[e] == 0) out.erase(e);
    }
    return out;
  };

  SignedCharacter num = signed_orbit_sum(lambda);
  const SignedCharacter den = signed_orbit_sum(rd.zero_weight());

  Character quotient;
  while (!num.empty()) {
    auto best = num.begin();
    for (auto it = num.begin(); it != num.end(); ++it) {
      if (htkey(it->first) > htkey(best->first) ||
          (htkey(it->first) == htkey(best->first) && it->first > best->first))
        best = it;
    }
    const Weight mu = best->first;
    const Int c = best->second;
    quotient[mu] += c;
    for (const auto& [nu, m] : den) {
      const Weight key = vec_add(mu, nu);
      num[key] -= c * m;
      if (num[key] == 0) num.erase(key);
    }
  }
  Character out;
  for (const auto& [w, m] : quotient) {
    require(m > 0, "oracle produced a nonpositive multiplicity");
    out.emplace(w, m);
  }
  return out;
}

Character sl2_induced(Int m) {
  require(m >= 0, "sl2 oracle needs a dominant weight");
  Character out;
  for (Int k = -m; k <= m; k += 2) out.emplace(Weight{k}, 1);
  return out;
}

Character sl2_tilting(Int lambda, Int p) {
  require(lambda >= 0 && lambda <= 2 * p - 2, "sl2 tilting oracle covers 0 <= lambda <= 2p-2");
  if (lambda <= p - 1) return sl2_induced(lambda);
  return char_add(sl2_induced(lambda), sl2_induced(2 * p - 2 - lambda));
}

Character sl2_simple(Int lambda, Int p) {
  require(lambda >= 0, "sl2 oracle needs a dominant weight");
  if (lambda == 0) return Character{{Weight{0}, 1}};
  // Steinberg digits: L(sum a_i p^i) = tensor of twisted L(a_i) with each
  // a_i <= p-1, and L(a) = N(a) in the restricted range.
  Character out{{Weight{0}, 1}};
  Int power = 1;
  for (Int rest = lambda; rest > 0; rest /= p, power *= p) {
    const Int digit = rest % p;
    out = char_mul(out, frobenius_twist(sl2_induced(digit), power));
  }
  return out;
}

bool subword_bruhat_leq(const WeylContext& ctx, const ExtElt& y, const ExtElt& x) {
  const auto word = ctx.reduced_word(x);
  require(word.size() <= 20, "subword oracle limited to short words");
  for (std::uint32_t mask = 0; mask < (1u << word.size()); ++mask) {
    ExtElt prod = ctx.identity();
    for (size_t i = 0; i < word.size(); ++i)
      if (mask & (1u << i)) prod = ctx.multiply(prod, ctx.gen(word[i]));
    if (prod == y) return true;
  }
  return false;
}

}  // namespace oracles
