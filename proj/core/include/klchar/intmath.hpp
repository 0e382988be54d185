#pragma once

#include <cstdint>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "klchar/diagnostics.hpp"

namespace klchar {

using Int = std::int64_t;
using BigInt = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;
using IntVec = std::vector<Int>;

// Dense row-major integer matrix.  Dimensions stay tiny (the rank of a root
// system), so no attempt is made at anything clever.
struct IntMat {
  int rows = 0;
  int cols = 0;
  std::vector<Int> a;

  IntMat() = default;
  IntMat(int r, int c) : rows(r), cols(c), a(static_cast<size_t>(r) * c, 0) {}

  Int& at(int i, int j) { return a[static_cast<size_t>(i) * cols + j]; }
  Int at(int i, int j) const { return a[static_cast<size_t>(i) * cols + j]; }

  static IntMat identity(int n) {
    IntMat m(n, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  friend bool operator==(const IntMat& x, const IntMat& y) {
    return x.rows == y.rows && x.cols == y.cols && x.a == y.a;
  }
  friend auto operator<=>(const IntMat& x, const IntMat& y) = default;
};

IntMat mat_mul(const IntMat& x, const IntMat& y);
IntVec mat_apply(const IntMat& m, const IntVec& v);

// Exact inverse over the rationals; throws domain_error if singular.
std::vector<std::vector<Rational>> invert_rational(const IntMat& m);

// Inverse of a matrix with determinant +-1; throws if the inverse is not
// integral.
IntMat invert_unimodular(const IntMat& m);

// Solves m * x = rhs exactly; returns x iff the solution is integral.
bool solve_integral(const std::vector<std::vector<Rational>>& inverse,
                    const IntVec& rhs, IntVec& out);

// Vector helpers used for weights and coweights throughout.
IntVec vec_add(const IntVec& x, const IntVec& y);
IntVec vec_sub(const IntVec& x, const IntVec& y);
IntVec vec_scale(const IntVec& x, Int c);
Int vec_dot(const IntVec& x, const IntVec& y);
bool vec_is_zero(const IntVec& x);

std::size_t hash_combine(std::size_t seed, std::size_t value);

}  // namespace klchar
