#pragma once

#include <filesystem>
#include <memory>
#include <shared_mutex>
#include <string>
#include <unordered_map>

#include "klchar/cachefile.hpp"
#include "klchar/laurent.hpp"
#include "klchar/weyl.hpp"

namespace klchar {

// Element of the affine Hecke algebra in the standard basis: a finite
// map ExtElt -> LaurentPoly with no zero values.  The algebra is handled
// one W_aff-coset at a time, so all keys here are affine elements.
class HeckeElt {
 public:
  HeckeElt() = default;
  explicit HeckeElt(CoeffMap m) : c_(std::move(m)) {}
  static HeckeElt basis(const ExtElt& w) {
    HeckeElt h;
    h.c_.emplace(w, LaurentPoly::one());
    return h;
  }

  const CoeffMap& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  LaurentPoly coeff(const ExtElt& w) const {
    const auto it = c_.find(w);
    return it == c_.end() ? LaurentPoly::zero() : it->second;
  }

  void add_term(const ExtElt& w, const LaurentPoly& p) {
    if (p.is_zero()) return;
    auto [it, inserted] = c_.emplace(w, p);
    if (!inserted) {
      it->second += p;
      if (it->second.is_zero()) c_.erase(it);
    }
  }

  HeckeElt& operator+=(const HeckeElt& o) {
    for (const auto& [w, p] : o.c_) add_term(w, p);
    return *this;
  }
  HeckeElt operator+(const HeckeElt& o) const {
    HeckeElt out(*this);
    out += o;
    return out;
  }
  HeckeElt operator-(const HeckeElt& o) const { return *this + o.scaled(-LaurentPoly::one()); }
  HeckeElt scaled(const LaurentPoly& p) const {
    HeckeElt out;
    if (p.is_zero()) return out;
    for (const auto& [w, q] : c_) out.c_.emplace(w, q * p);
    return out;
  }

  friend bool operator==(const HeckeElt& a, const HeckeElt& b) { return a.c_ == b.c_; }

 private:
  CoeffMap c_;
};

// Elements of the antispherical module have the same shape (keys restricted
// to the minimal coset representatives W_aff^0).
using ASElt = HeckeElt;

// Capability to produce a distinguished basis element attached to w as its
// coefficient map in the standard basis.  The default realization is the
// Kazhdan-Lusztig basis; tables of p-canonical elements can be dropped in.
class CanonicalBasisProvider {
 public:
  virtual ~CanonicalBasisProvider() = default;
  // Throws provider_error when the element is not available.
  virtual std::shared_ptr<const CoeffMap> element(const ExtElt& w) const = 0;
  virtual std::string label() const = 0;
};

// The affine Hecke algebra over Z[v, v^-1] with the Kazhdan-Lusztig basis,
// memoized per element.  All methods are const; the internal memo tables
// tolerate concurrent readers and serialize writers, and inserts are
// idempotent, so results do not depend on thread interleaving.
class HeckeContext {
 public:
  explicit HeckeContext(std::shared_ptr<const WeylContext> w);

  const WeylContext& weyl() const { return *w_; }
  std::shared_ptr<const WeylContext> weyl_ptr() const { return w_; }

  HeckeElt unit() const { return HeckeElt::basis(w_->identity()); }
  HeckeElt std_basis(const ExtElt& w) const;

  // H . H_s and H_s . H per the quadratic relation, term by term.
  HeckeElt mult_gen_right(const HeckeElt& h, GenIndex s) const;
  HeckeElt mult_gen_left(GenIndex s, const HeckeElt& h) const;
  // General product; expands the right factor along reduced words.
  HeckeElt multiply(const HeckeElt& a, const HeckeElt& b) const;

  // Ring-antilinear bar involution: v -> v^-1, H_s -> H_s + (v - v^-1) H_e.
  HeckeElt bar(const HeckeElt& h) const;
  // bar(H_w) in the standard basis, memoized.
  std::shared_ptr<const CoeffMap> bar_basis(const ExtElt& w) const;

  // Coefficients of the self-dual basis element attached to w; requires w
  // affine.  Memoized and served from the persistent cache when loaded.
  std::shared_ptr<const CoeffMap> kl_element(const ExtElt& w) const;
  // Extended elements: the coefficients of the affine part, with every key
  // translated by the same Omega factor.
  CoeffMap kl_element_coeffs(const ExtElt& w) const;

  LaurentPoly kl_poly(const ExtElt& y, const ExtElt& w) const;
  BigInt mu(const ExtElt& y, const ExtElt& w) const;

  std::size_t cached_count() const;
  cachefile::EntryMap snapshot() const;
  void cache_store(const std::filesystem::path& path) const;
  // Validates entries (unit diagonal, positive lower degrees) and merges.
  void cache_load(const std::filesystem::path& path) const;

 private:
  std::shared_ptr<const CoeffMap> memo_find(const ExtElt& w) const;
  std::shared_ptr<const CoeffMap> memo_insert(const ExtElt& w,
                                              std::shared_ptr<const CoeffMap> value) const;
  std::shared_ptr<const CoeffMap> compute_kl(const ExtElt& w) const;

  std::shared_ptr<const WeylContext> w_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<ExtElt, std::shared_ptr<const CoeffMap>, ExtEltHash> memo_;
  mutable std::shared_mutex bar_mutex_;
  mutable std::unordered_map<ExtElt, std::shared_ptr<const CoeffMap>, ExtEltHash> bar_memo_;
};

// Default provider: the Kazhdan-Lusztig basis itself.
class KLBasisProvider final : public CanonicalBasisProvider {
 public:
  explicit KLBasisProvider(std::shared_ptr<const HeckeContext> h) : h_(std::move(h)) {}
  std::shared_ptr<const CoeffMap> element(const ExtElt& w) const override {
    return h_->kl_element(w);
  }
  std::string label() const override { return "KL (valid for p >> 0)"; }

 private:
  std::shared_ptr<const HeckeContext> h_;
};

// Provider backed by an imported table file (same format as the KL cache).
// Entries are validated on load: unit coefficient at w and support inside
// the Bruhat interval below w.
class TableBasisProvider final : public CanonicalBasisProvider {
 public:
  static std::shared_ptr<TableBasisProvider> load(const std::filesystem::path& path,
                                                  std::shared_ptr<const WeylContext> w);

  std::shared_ptr<const CoeffMap> element(const ExtElt& w) const override;
  std::string label() const override { return "p-canonical (table " + hash_ + ")"; }
  const std::string& table_hash() const { return hash_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::shared_ptr<const WeylContext> w_;
  std::unordered_map<ExtElt, std::shared_ptr<const CoeffMap>, ExtEltHash> entries_;
  std::string hash_;
};

}  // namespace klchar
