#pragma once

#include <compare>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "klchar/rootdata.hpp"

namespace klchar {

// Element of the finite Weyl group as the integer matrix of its action on
// the basis of X.  The inverse travels along so that composition never has
// to invert anything; equality and ordering look at the matrix only.
class FinWeylElt {
 public:
  FinWeylElt() = default;
  static FinWeylElt identity(int n) { return FinWeylElt(IntMat::identity(n), IntMat::identity(n)); }
  static FinWeylElt from_matrix(IntMat m) {
    IntMat inv = invert_unimodular(m);
    return FinWeylElt(std::move(m), std::move(inv));
  }
  // For involutions (reflections) the matrix is its own inverse.
  static FinWeylElt involution(IntMat m) { return FinWeylElt(m, m); }

  const IntMat& matrix() const { return m_; }
  Weight apply(const Weight& w) const { return mat_apply(m_, w); }
  Weight apply_inverse(const Weight& w) const { return mat_apply(inv_, w); }
  FinWeylElt compose(const FinWeylElt& o) const {
    return FinWeylElt(mat_mul(m_, o.m_), mat_mul(o.inv_, inv_));
  }
  FinWeylElt inverse() const { return FinWeylElt(inv_, m_); }
  bool is_identity() const {
    for (int i = 0; i < m_.rows; ++i)
      for (int j = 0; j < m_.cols; ++j)
        if (m_.at(i, j) != (i == j ? 1 : 0)) return false;
    return true;
  }

  friend bool operator==(const FinWeylElt& x, const FinWeylElt& y) { return x.m_ == y.m_; }
  friend std::strong_ordering operator<=>(const FinWeylElt& x, const FinWeylElt& y) {
    return x.m_ <=> y.m_;
  }

 private:
  FinWeylElt(IntMat m, IntMat inv) : m_(std::move(m)), inv_(std::move(inv)) {}
  IntMat m_, inv_;
};

// Element of W_ext = W x| X, stored as the pair (w, mu) representing w t_mu.
// Affine elements are exactly those with mu in ZPhi.
class ExtElt {
 public:
  ExtElt() = default;
  ExtElt(FinWeylElt fin, Weight trans) : fin_(std::move(fin)), trans_(std::move(trans)) {}

  const FinWeylElt& fin() const { return fin_; }
  const Weight& trans() const { return trans_; }
  bool is_finite() const { return vec_is_zero(trans_); }
  bool is_identity() const { return is_finite() && fin_.is_identity(); }

  friend bool operator==(const ExtElt& x, const ExtElt& y) {
    return x.trans_ == y.trans_ && x.fin_ == y.fin_;
  }
  friend std::strong_ordering operator<=>(const ExtElt& x, const ExtElt& y) {
    if (auto c = x.trans_ <=> y.trans_; c != 0) return c;
    return x.fin_ <=> y.fin_;
  }

  std::size_t hash() const {
    std::size_t h = 1469598103934665603ULL;
    for (Int v : fin_.matrix().a) h = hash_combine(h, static_cast<std::size_t>(v));
    for (Int v : trans_) h = hash_combine(h, static_cast<std::size_t>(v));
    return h;
  }

 private:
  FinWeylElt fin_;
  Weight trans_;
};

struct ExtEltHash {
  std::size_t operator()(const ExtElt& x) const { return x.hash(); }
};

enum class Side { left, right };

// Generator indices: 0 is the affine reflection s_0, 1..rank are the finite
// simple reflections in Bourbaki order.
using GenIndex = int;
using GenSubset = std::vector<GenIndex>;  // sorted, no duplicates

// Group operations for W, W_aff and W_ext over a fixed root datum.  The
// context is immutable apart from internal memo tables, which are guarded;
// it can be shared freely between threads.
class WeylContext {
 public:
  explicit WeylContext(RootDatum rd);

  const RootDatum& datum() const { return rd_; }
  int num_gens() const { return rd_.rank() + 1; }

  ExtElt identity() const;
  ExtElt translation(const Weight& mu) const;
  // S_aff; index 0 is the affine generator t_theta s_theta with theta^vee
  // the highest coroot.
  const std::vector<ExtElt>& simple_reflections() const { return gens_; }
  const ExtElt& gen(GenIndex i) const;
  GenSubset finite_gens() const;     // {1, ..., rank}
  GenSubset all_gens() const;        // {0, ..., rank}

  ExtElt multiply(const ExtElt& x, const ExtElt& y) const;
  ExtElt inverse(const ExtElt& x) const;

  // Linear action of the finite part; rejects elements with a translation
  // part unless finite_part_only is set.
  Weight act(const ExtElt& x, const Weight& w, bool finite_part_only = false) const;

  // Level-p dot action (w t_mu) . lambda = w(lambda + p mu + rho) - rho,
  // evaluated exactly in doubled coordinates.
  Weight dot_act(const ExtElt& x, const Weight& lambda, Int p) const;

  Int length(const ExtElt& x) const;
  bool is_affine(const ExtElt& x) const { return rd_.in_root_lattice(x.trans()); }

  GenSubset descents(const ExtElt& x, Side side) const;
  // Smallest descent index or -1.
  GenIndex first_descent(const ExtElt& x, Side side) const;

  bool bruhat_leq(const ExtElt& y, const ExtElt& x) const;

  // Reduced word over S_aff indices (greedy smallest left descent); the
  // element must be affine.
  std::vector<GenIndex> reduced_word(const ExtElt& x) const;
  ExtElt from_word(std::span<const GenIndex> word) const;

  bool is_min_in_W_coset(const ExtElt& x) const;  // no left descent in S
  // ell(u x y) = ell(u) + ell(x) + ell(y) for all u in W, y in W_J, checked
  // by full enumeration of both finite groups.
  bool is_strongly_minimal(const ExtElt& x, const GenSubset& j) const;

  // All strongly minimal representatives of length <= bound, ordered by
  // (length, lexicographic reduced word).
  std::vector<ExtElt> enumerate_min_reps(const GenSubset& j, Int bound) const;

  // Finite standard parabolic W_J; throws domain_error if J is not
  // finitary (detected by bounded closure).
  std::vector<ExtElt> parabolic_subgroup(const GenSubset& j) const;
  ExtElt longest_element(const GenSubset& j) const;
  // W_K^J: elements of W_K minimal in their coset y W_J.
  std::vector<ExtElt> coset_min_reps(const GenSubset& k, const GenSubset& j) const;

  // BFS ball of the subgroup generated by gens, radius = word-length bound;
  // sorted by (length, reduced word).
  std::vector<ExtElt> ball(Int bound, const GenSubset& gens) const;
  std::vector<ExtElt> ball(Int bound) const { return ball(bound, all_gens()); }

  // The finite group Omega of length-zero elements of W_ext.
  const std::vector<ExtElt>& omega() const { return omega_; }
  // Unique factorization x = omega * a with a affine.
  std::pair<ExtElt, ExtElt> omega_decompose(const ExtElt& x) const;

  // Stable textual form "w=[col;col;...];t=(c,...)".
  std::string serialize(const ExtElt& x) const;
  ExtElt parse_element(std::string_view text) const;

  // Generators fixing lambda under the level-p dot action.
  GenSubset dot_stabilizer_gens(const Weight& lambda, Int p) const;

  // Word in generator indices; convenience for tests and the CLI.
  std::string word_string(const ExtElt& x) const;

 private:
  void build_generators();
  void build_omega();
  Int length_impl(const FinWeylElt& w, const Weight& mu) const;

  RootDatum rd_;
  std::vector<ExtElt> gens_;
  std::vector<ExtElt> omega_;
  mutable std::mutex memo_mutex_;
  mutable std::map<GenSubset, std::vector<ExtElt>> parabolic_memo_;
};

}  // namespace klchar
