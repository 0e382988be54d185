#include "klchar/hecke.hpp"

#include <mutex>

namespace klchar {

namespace {

// v^-1 - v, the eigenvalue correction in the quadratic relation.
LaurentPoly quad_correction() {
  return LaurentPoly::v(-1) - LaurentPoly::v(1);
}

}  // namespace

HeckeContext::HeckeContext(std::shared_ptr<const WeylContext> w) : w_(std::move(w)) {
  require(w_ != nullptr, "HeckeContext needs a Weyl context");
}

HeckeElt HeckeContext::std_basis(const ExtElt& w) const {
  require(w_->is_affine(w), "standard basis elements are indexed by affine elements");
  return HeckeElt::basis(w);
}

HeckeElt HeckeContext::mult_gen_right(const HeckeElt& h, GenIndex s) const {
  const ExtElt& gen = w_->gen(s);
  const LaurentPoly corr = quad_correction();
  HeckeElt out;
  for (const auto& [w, c] : h.coeffs()) {
    ExtElt ws = w_->multiply(w, gen);
    if (w_->length(ws) > w_->length(w)) {
      out.add_term(ws, c);
    } else {
      out.add_term(ws, c);
      out.add_term(w, c * corr);
    }
  }
  return out;
}

HeckeElt HeckeContext::mult_gen_left(GenIndex s, const HeckeElt& h) const {
  const ExtElt& gen = w_->gen(s);
  const LaurentPoly corr = quad_correction();
  HeckeElt out;
  for (const auto& [w, c] : h.coeffs()) {
    ExtElt sw = w_->multiply(gen, w);
    if (w_->length(sw) > w_->length(w)) {
      out.add_term(sw, c);
    } else {
      out.add_term(sw, c);
      out.add_term(w, c * corr);
    }
  }
  return out;
}

HeckeElt HeckeContext::multiply(const HeckeElt& a, const HeckeElt& b) const {
  HeckeElt out;
  for (const auto& [y, c] : b.coeffs()) {
    HeckeElt acc = a;
    for (GenIndex s : w_->reduced_word(y)) acc = mult_gen_right(acc, s);
    out += acc.scaled(c);
  }
  return out;
}

std::shared_ptr<const CoeffMap> HeckeContext::bar_basis(const ExtElt& w) const {
  {
    std::shared_lock lock(bar_mutex_);
    const auto it = bar_memo_.find(w);
    if (it != bar_memo_.end()) return it->second;
  }
  std::shared_ptr<const CoeffMap> result;
  const GenIndex s = w_->first_descent(w, Side::left);
  if (s < 0) {
    result = std::make_shared<const CoeffMap>(
        CoeffMap{{w_->identity(), LaurentPoly::one()}});
  } else {
    // bar(H_w) = bar(H_s) bar(H_{sw}) = (H_s + (v - v^-1)) bar(H_{sw})
    const auto rest = bar_basis(w_->multiply(w_->gen(s), w));
    HeckeElt r{CoeffMap(*rest)};
    HeckeElt prod = mult_gen_left(s, r);
    prod += r.scaled(LaurentPoly::v(1) - LaurentPoly::v(-1));
    result = std::make_shared<const CoeffMap>(prod.coeffs());
  }
  std::unique_lock lock(bar_mutex_);
  auto [it, inserted] = bar_memo_.emplace(w, std::move(result));
  return it->second;
}

HeckeElt HeckeContext::bar(const HeckeElt& h) const {
  HeckeElt out;
  for (const auto& [w, c] : h.coeffs()) {
    require(w_->is_affine(w), "bar involution works coset by coset");
    const LaurentPoly cb = c.bar();
    for (const auto& [y, p] : *bar_basis(w)) out.add_term(y, p * cb);
  }
  return out;
}

std::shared_ptr<const CoeffMap> HeckeContext::memo_find(const ExtElt& w) const {
  std::shared_lock lock(mutex_);
  const auto it = memo_.find(w);
  return it == memo_.end() ? nullptr : it->second;
}

std::shared_ptr<const CoeffMap> HeckeContext::memo_insert(
    const ExtElt& w, std::shared_ptr<const CoeffMap> value) const {
  std::unique_lock lock(mutex_);
  auto [it, inserted] = memo_.emplace(w, std::move(value));
  return it->second;  // idempotent: first writer wins, values coincide
}

std::shared_ptr<const CoeffMap> HeckeContext::compute_kl(const ExtElt& w) const {
  const GenIndex s = w_->first_descent(w, Side::left);
  if (s < 0)
    return std::make_shared<const CoeffMap>(
        CoeffMap{{w_->identity(), LaurentPoly::one()}});

  const ExtElt sw = w_->multiply(w_->gen(s), w);
  const auto base = kl_element(sw);

  // (H_s + v) * klbasis(sw), then subtract mu-corrections at the terms with
  // left descent s.
  HeckeElt base_elt{CoeffMap(*base)};
  HeckeElt prod = mult_gen_left(s, base_elt);
  prod += base_elt.scaled(LaurentPoly::v(1));

  for (const auto& [y, p] : *base) {
    if (w_->length(w_->multiply(w_->gen(s), y)) >= w_->length(y)) continue;
    const BigInt m = p.coeff(1);
    if (m == 0) continue;
    const auto lower = kl_element(y);
    HeckeElt correction{CoeffMap(*lower)};
    prod = prod - correction.scaled(LaurentPoly::monomial(0, m));
  }

  // Structural sanity: unit coefficient at w, strictly positive exponents
  // below it.
  for (const auto& [y, p] : prod.coeffs()) {
    if (y == w) {
      if (!p.is_one()) internal_error("KL recursion lost the unit leading term");
    } else if (p.min_exp() <= 0) {
      internal_error("KL recursion produced a non-positive lower degree");
    }
  }
  return std::make_shared<const CoeffMap>(prod.coeffs());
}

std::shared_ptr<const CoeffMap> HeckeContext::kl_element(const ExtElt& w) const {
  require(w_->is_affine(w), "kl_element expects an affine element");
  if (auto hit = memo_find(w)) return hit;
  return memo_insert(w, compute_kl(w));
}

CoeffMap HeckeContext::kl_element_coeffs(const ExtElt& w) const {
  if (w_->is_affine(w)) return *kl_element(w);
  const auto [omega, affine] = w_->omega_decompose(w);
  CoeffMap out;
  for (const auto& [y, p] : *kl_element(affine))
    out.emplace(w_->multiply(omega, y), p);
  return out;
}

LaurentPoly HeckeContext::kl_poly(const ExtElt& y, const ExtElt& w) const {
  const auto m = kl_element(w);
  const auto it = m->find(y);
  return it == m->end() ? LaurentPoly::zero() : it->second;
}

BigInt HeckeContext::mu(const ExtElt& y, const ExtElt& w) const {
  return kl_poly(y, w).coeff(1);
}

std::size_t HeckeContext::cached_count() const {
  std::shared_lock lock(mutex_);
  return memo_.size();
}

cachefile::EntryMap HeckeContext::snapshot() const {
  std::shared_lock lock(mutex_);
  cachefile::EntryMap out;
  for (const auto& [w, m] : memo_) out.emplace(w, *m);
  return out;
}

void HeckeContext::cache_store(const std::filesystem::path& path) const {
  cachefile::write(path, "KLCACHE", *w_, snapshot());
}

void HeckeContext::cache_load(const std::filesystem::path& path) const {
  const auto entries = cachefile::read(path, "KLCACHE", *w_);
  for (const auto& [w, m] : entries) {
    const auto it = m.find(w);
    if (it == m.end() || !it->second.is_one())
      throw cache_error("cache entry for " + w_->serialize(w) +
                        " lacks a unit diagonal coefficient");
    for (const auto& [y, p] : m)
      if (!(y == w) && p.min_exp() <= 0)
        throw cache_error("cache entry for " + w_->serialize(w) +
                          " has a non-positive degree at " + w_->serialize(y));
    memo_insert(w, std::make_shared<const CoeffMap>(m));
  }
}

std::shared_ptr<TableBasisProvider> TableBasisProvider::load(
    const std::filesystem::path& path, std::shared_ptr<const WeylContext> w) {
  auto out = std::make_shared<TableBasisProvider>();
  out->w_ = w;
  out->hash_ = cachefile::file_hash(path);
  const auto entries = cachefile::read(path, "KLCACHE", *w);
  for (const auto& [key, m] : entries) {
    const auto diag = m.find(key);
    if (diag == m.end() || !diag->second.is_one())
      throw provider_error("table entry for " + w->serialize(key) +
                           " is not unitriangular (coefficient at the index itself must be 1)");
    for (const auto& [y, p] : m) {
      if (!w->bruhat_leq(y, key))
        throw provider_error("table entry for " + w->serialize(key) +
                             " has support outside the Bruhat interval at " + w->serialize(y));
    }
    out->entries_.emplace(key, std::make_shared<const CoeffMap>(m));
  }
  return out;
}

std::shared_ptr<const CoeffMap> TableBasisProvider::element(const ExtElt& w) const {
  const auto it = entries_.find(w);
  if (it == entries_.end())
    throw provider_error("provider table is missing the element " + w_->serialize(w));
  return it->second;
}

}  // namespace klchar
