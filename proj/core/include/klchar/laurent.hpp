#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "klchar/intmath.hpp"

namespace klchar {

// Integer Laurent polynomial in one variable v.  Terms are kept sorted by
// exponent with no zero coefficients, so representation equality is value
// equality.  Coefficients are arbitrary precision.
class LaurentPoly {
 public:
  LaurentPoly() = default;

  static LaurentPoly zero() { return LaurentPoly(); }
  static LaurentPoly one() { return monomial(0, 1); }
  static LaurentPoly v(int exp = 1) { return monomial(exp, 1); }
  static LaurentPoly monomial(int exp, BigInt coeff);

  bool is_zero() const { return terms_.empty(); }
  bool is_one() const {
    return terms_.size() == 1 && terms_[0].first == 0 && terms_[0].second == 1;
  }
  const std::vector<std::pair<int, BigInt>>& terms() const { return terms_; }

  BigInt coeff(int exp) const;
  int min_exp() const;  // requires nonzero
  int max_exp() const;  // requires nonzero

  LaurentPoly operator-() const;
  LaurentPoly operator+(const LaurentPoly& o) const;
  LaurentPoly operator-(const LaurentPoly& o) const;
  LaurentPoly operator*(const LaurentPoly& o) const;
  LaurentPoly& operator+=(const LaurentPoly& o);
  LaurentPoly& operator-=(const LaurentPoly& o);

  LaurentPoly scaled(const BigInt& c) const;
  LaurentPoly shifted(int exp) const;  // multiply by v^exp

  // v -> v^{-1}
  LaurentPoly bar() const;
  BigInt eval_one() const;

  // Terms with strictly positive exponent.
  LaurentPoly positive_part() const;

  friend bool operator==(const LaurentPoly& a, const LaurentPoly& b) {
    return a.terms_ == b.terms_;
  }

  // Cache form: comma-separated "exp^coeff" pairs sorted by exponent; the
  // zero polynomial prints as "0^0".
  std::string cache_str() const;
  static LaurentPoly parse_cache(std::string_view text);

  // Human-readable form, e.g. "v^3 + 2v - v^-1".
  std::string pretty() const;

 private:
  void normalize();
  std::vector<std::pair<int, BigInt>> terms_;
};

}  // namespace klchar
