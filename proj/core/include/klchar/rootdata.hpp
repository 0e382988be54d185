#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "klchar/intmath.hpp"

namespace klchar {

enum class Series : char { A = 'A', B = 'B', C = 'C', D = 'D', E = 'E', F = 'F', G = 'G' };

enum class LatticeFlavor { simply_connected, adjoint };

// A weight is a coordinate vector in the fixed basis of the character
// lattice X: the fundamental-weight basis for simply connected data, the
// simple-root basis for adjoint data.  Coweights use the dual basis of Y.
using Weight = IntVec;

struct PositiveRoot {
  Weight root;          // coordinates in the basis of X
  Weight coroot;        // coordinates in the dual basis of Y
  IntVec root_coeffs;   // expansion of the root in simple roots
  IntVec coroot_coeffs; // expansion of the coroot in simple coroots
  Int height = 0;       // sum of root_coeffs
};

// Root datum of a simple algebraic group, fixed once at construction.
// Immutable afterwards: safe to share across threads.
class RootDatum {
 public:
  static RootDatum build(Series series, int rank, LatticeFlavor flavor);

  // Textual descriptor, e.g. "A2sc" or "B3adj"; used in cache headers and
  // on the command line.
  static RootDatum from_descriptor(std::string_view descriptor);
  const std::string& descriptor() const { return descriptor_; }

  Series series() const { return series_; }
  int rank() const { return rank_; }
  LatticeFlavor flavor() const { return flavor_; }
  int x_rank() const { return rank_; }

  // cartan(i, j) = pairing(simple_root(j), simple_coroot(i)).
  const IntMat& cartan() const { return cartan_; }
  const Weight& simple_root(int i) const { return simple_roots_[i]; }
  const Weight& simple_coroot(int i) const { return simple_coroots_[i]; }

  // Complete list of positive roots paired with their coroots, ordered by
  // (height, lexicographic root coordinates).
  const std::vector<PositiveRoot>& positive_roots() const { return positive_; }

  // The positive root whose coroot is the highest coroot.
  const PositiveRoot& highest_coroot_root() const { return positive_[highest_coroot_index_]; }
  // The highest root of the root system itself.
  const PositiveRoot& highest_root() const { return positive_[highest_root_index_]; }

  Int pairing(const Weight& weight, const Weight& coroot) const;

  // True iff hi - lo is a nonnegative integer combination of positive roots.
  bool dominance_leq(const Weight& lo, const Weight& hi) const;
  bool is_dominant(const Weight& w) const;

  // 2*rho in X coordinates.  rho itself may be half-integral, so all affine
  // arithmetic works with doubled coordinates and halves on output.
  const Weight& rho_doubled() const { return rho_doubled_; }

  Int coxeter_number() const { return coxeter_number_; }

  Weight zero_weight() const { return Weight(static_cast<size_t>(rank_), 0); }

  // Expansion of a weight in simple roots if it lies in ZPhi.
  std::optional<IntVec> root_coefficients(const Weight& w) const;
  bool in_root_lattice(const Weight& w) const { return root_coefficients(w).has_value(); }

  // Sign of a root given by X coordinates; nullopt if not a root.
  std::optional<bool> root_is_positive(const Weight& root_coords) const;

  // Solves cartan^T * c = rhs for integral c (coroot-lattice membership).
  std::optional<IntVec> coroot_coefficients(const Weight& coweight) const;

  // The weight with prescribed pairings against the simple coroots, if it
  // exists in X.
  std::optional<Weight> weight_with_simple_pairings(const IntVec& pairings) const;

 private:
  RootDatum() = default;
  void finish_construction();

  Series series_ = Series::A;
  int rank_ = 0;
  LatticeFlavor flavor_ = LatticeFlavor::simply_connected;
  std::string descriptor_;
  IntMat cartan_;
  std::vector<Weight> simple_roots_;
  std::vector<Weight> simple_coroots_;
  std::vector<PositiveRoot> positive_;
  Weight rho_doubled_;
  Int coxeter_number_ = 0;
  int highest_coroot_index_ = -1;
  int highest_root_index_ = -1;
  std::vector<std::vector<Rational>> cartan_inverse_;
  std::vector<std::vector<Rational>> cartan_transpose_inverse_;
  // root coordinates -> (index into positive_, sign)
  struct VecHash {
    std::size_t operator()(const IntVec& v) const {
      std::size_t h = 1469598103934665603ULL;
      for (Int x : v) h = hash_combine(h, static_cast<std::size_t>(x));
      return h;
    }
  };
  std::unordered_map<IntVec, std::pair<int, bool>, VecHash> root_index_;
};

std::string to_string(Series s);
std::string to_string(LatticeFlavor f);

}  // namespace klchar
