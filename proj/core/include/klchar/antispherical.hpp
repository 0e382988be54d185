#pragma once

#include <filesystem>
#include <memory>
#include <shared_mutex>
#include <unordered_map>

#include "klchar/hecke.hpp"

namespace klchar {

// The antispherical right module over the affine Hecke algebra, with basis
// (N_w) indexed by the minimal coset representatives W_aff^0, its canonical
// basis, and the alternating-sum values that feed tilting multiplicities.
class AntisphericalContext {
 public:
  AntisphericalContext(std::shared_ptr<const WeylContext> w,
                       std::shared_ptr<const HeckeContext> h);

  const WeylContext& weyl() const { return *w_; }

  ASElt unit() const { return HeckeElt::basis(w_->identity()); }

  // N . H_s:  N_{ws} when the length goes up inside W_aff^0,
  //           N_{ws} + (v^-1 - v) N_w when it goes down,
  //           (-v) N_w when ws leaves W_aff^0.
  ASElt mult_gen(const ASElt& n, GenIndex s) const;
  // Right action of a full Hecke element, expanded along reduced words.
  ASElt act(const ASElt& n, const HeckeElt& h) const;

  // Coefficients of the self-dual element attached to w in (N_y); requires
  // w in W_aff^0.  Memoized.
  std::shared_ptr<const CoeffMap> canonical(const ExtElt& w) const;

  // n_{y,w}, read off the canonical element.
  LaurentPoly poly(const ExtElt& y, const ExtElt& w) const;
  // Independent route: sum over z in W of (-1)^{l(z)} h_{zy,w}(1).
  BigInt value_at_one(const ExtElt& y, const ExtElt& w) const;

  std::size_t cached_count() const;
  cachefile::EntryMap snapshot() const;
  void cache_store(const std::filesystem::path& path) const;
  void cache_load(const std::filesystem::path& path) const;

 private:
  std::shared_ptr<const CoeffMap> compute_canonical(const ExtElt& w) const;

  std::shared_ptr<const WeylContext> w_;
  std::shared_ptr<const HeckeContext> h_;
  mutable std::shared_mutex mutex_;
  mutable std::unordered_map<ExtElt, std::shared_ptr<const CoeffMap>, ExtEltHash> memo_;
};

}  // namespace klchar
