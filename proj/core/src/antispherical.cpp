#include "klchar/antispherical.hpp"

namespace klchar {

AntisphericalContext::AntisphericalContext(std::shared_ptr<const WeylContext> w,
                                           std::shared_ptr<const HeckeContext> h)
    : w_(std::move(w)), h_(std::move(h)) {
  require(w_ != nullptr && h_ != nullptr, "AntisphericalContext needs both contexts");
}

ASElt AntisphericalContext::mult_gen(const ASElt& n, GenIndex s) const {
  const ExtElt& gen = w_->gen(s);
  const LaurentPoly corr = LaurentPoly::v(-1) - LaurentPoly::v(1);
  const LaurentPoly minus_v = -LaurentPoly::v(1);
  ASElt out;
  for (const auto& [w, c] : n.coeffs()) {
    ExtElt ws = w_->multiply(w, gen);
    if (!w_->is_min_in_W_coset(ws)) {
      out.add_term(w, c * minus_v);
    } else if (w_->length(ws) > w_->length(w)) {
      out.add_term(ws, c);
    } else {
      out.add_term(ws, c);
      out.add_term(w, c * corr);
    }
  }
  return out;
}

ASElt AntisphericalContext::act(const ASElt& n, const HeckeElt& h) const {
  ASElt out;
  for (const auto& [y, c] : h.coeffs()) {
    ASElt acc = n;
    for (GenIndex s : w_->reduced_word(y)) acc = mult_gen(acc, s);
    out += acc.scaled(c);
  }
  return out;
}

std::shared_ptr<const CoeffMap> AntisphericalContext::compute_canonical(const ExtElt& w) const {
  const GenIndex s = w_->first_descent(w, Side::right);
  if (s < 0)
    return std::make_shared<const CoeffMap>(
        CoeffMap{{w_->identity(), LaurentPoly::one()}});

  const ExtElt ws = w_->multiply(w, w_->gen(s));
  const auto base = canonical(ws);

  ASElt base_elt{CoeffMap(*base)};
  ASElt prod = mult_gen(base_elt, s);
  prod += base_elt.scaled(LaurentPoly::v(1));

  for (const auto& [y, p] : *base) {
    if (w_->length(w_->multiply(y, w_->gen(s))) >= w_->length(y)) continue;
    const BigInt m = p.coeff(1);
    if (m == 0) continue;
    const auto lower = canonical(y);
    prod = prod - ASElt{CoeffMap(*lower)}.scaled(LaurentPoly::monomial(0, m));
  }

  for (const auto& [y, p] : prod.coeffs()) {
    if (y == w) {
      if (!p.is_one()) internal_error("antispherical recursion lost the unit leading term");
    } else if (p.min_exp() <= 0) {
      internal_error("antispherical recursion produced a non-positive lower degree");
    }
  }
  return std::make_shared<const CoeffMap>(prod.coeffs());
}

std::shared_ptr<const CoeffMap> AntisphericalContext::canonical(const ExtElt& w) const {
  require(w_->is_affine(w), "antispherical elements are indexed by affine elements");
  require(w_->is_min_in_W_coset(w),
          "antispherical canonical basis is indexed by W_aff^0: " + w_->serialize(w));
  {
    std::shared_lock lock(mutex_);
    const auto it = memo_.find(w);
    if (it != memo_.end()) return it->second;
  }
  auto value = compute_canonical(w);
  std::unique_lock lock(mutex_);
  auto [it, inserted] = memo_.emplace(w, std::move(value));
  return it->second;
}

LaurentPoly AntisphericalContext::poly(const ExtElt& y, const ExtElt& w) const {
  const auto m = canonical(w);
  const auto it = m->find(y);
  return it == m->end() ? LaurentPoly::zero() : it->second;
}

BigInt AntisphericalContext::value_at_one(const ExtElt& y, const ExtElt& w) const {
  const auto kl = h_->kl_element(w);
  BigInt total = 0;
  for (const ExtElt& z : w_->parabolic_subgroup(w_->finite_gens())) {
    const auto it = kl->find(w_->multiply(z, y));
    if (it == kl->end()) continue;
    const BigInt v = it->second.eval_one();
    if (w_->length(z) % 2 == 0)
      total += v;
    else
      total -= v;
  }
  return total;
}

std::size_t AntisphericalContext::cached_count() const {
  std::shared_lock lock(mutex_);
  return memo_.size();
}

cachefile::EntryMap AntisphericalContext::snapshot() const {
  std::shared_lock lock(mutex_);
  cachefile::EntryMap out;
  for (const auto& [w, m] : memo_) out.emplace(w, *m);
  return out;
}

void AntisphericalContext::cache_store(const std::filesystem::path& path) const {
  cachefile::write(path, "ASCACHE", *w_, snapshot());
}

void AntisphericalContext::cache_load(const std::filesystem::path& path) const {
  const auto entries = cachefile::read(path, "ASCACHE", *w_);
  for (const auto& [w, m] : entries) {
    const auto it = m.find(w);
    if (it == m.end() || !it->second.is_one())
      throw cache_error("antispherical cache entry for " + w_->serialize(w) +
                        " lacks a unit diagonal coefficient");
    std::unique_lock lock(mutex_);
    memo_.emplace(w, std::make_shared<const CoeffMap>(m));
  }
}

}  // namespace klchar
