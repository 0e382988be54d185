#include "klchar/laurent.hpp"

#include <algorithm>
#include <sstream>

#include "klchar/diagnostics.hpp"

namespace klchar {

LaurentPoly LaurentPoly::monomial(int exp, BigInt coeff) {
  LaurentPoly p;
  if (coeff != 0) p.terms_.emplace_back(exp, std::move(coeff));
  return p;
}

BigInt LaurentPoly::coeff(int exp) const {
  const auto it = std::lower_bound(
      terms_.begin(), terms_.end(), exp,
      [](const auto& term, int e) { return term.first < e; });
  if (it == terms_.end() || it->first != exp) return 0;
  return it->second;
}

int LaurentPoly::min_exp() const {
  require(!terms_.empty(), "min_exp of zero polynomial");
  return terms_.front().first;
}

int LaurentPoly::max_exp() const {
  require(!terms_.empty(), "max_exp of zero polynomial");
  return terms_.back().first;
}

void LaurentPoly::normalize() {
  std::sort(terms_.begin(), terms_.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<std::pair<int, BigInt>> out;
  out.reserve(terms_.size());
  for (auto& [e, c] : terms_) {
    if (!out.empty() && out.back().first == e)
      out.back().second += c;
    else
      out.emplace_back(e, std::move(c));
    if (!out.empty() && out.back().second == 0) out.pop_back();
  }
  terms_ = std::move(out);
}

LaurentPoly LaurentPoly::operator-() const {
  LaurentPoly out(*this);
  for (auto& [e, c] : out.terms_) c = -c;
  return out;
}

LaurentPoly& LaurentPoly::operator+=(const LaurentPoly& o) {
  // Merge of two sorted term lists.
  std::vector<std::pair<int, BigInt>> out;
  out.reserve(terms_.size() + o.terms_.size());
  size_t i = 0, j = 0;
  while (i < terms_.size() || j < o.terms_.size()) {
    if (j == o.terms_.size() ||
        (i < terms_.size() && terms_[i].first < o.terms_[j].first)) {
      out.push_back(std::move(terms_[i++]));
    } else if (i == terms_.size() || o.terms_[j].first < terms_[i].first) {
      out.push_back(o.terms_[j++]);
    } else {
      BigInt c = terms_[i].second + o.terms_[j].second;
      if (c != 0) out.emplace_back(terms_[i].first, std::move(c));
      ++i;
      ++j;
    }
  }
  terms_ = std::move(out);
  return *this;
}

LaurentPoly& LaurentPoly::operator-=(const LaurentPoly& o) { return *this += -o; }

LaurentPoly LaurentPoly::operator+(const LaurentPoly& o) const {
  LaurentPoly out(*this);
  out += o;
  return out;
}

LaurentPoly LaurentPoly::operator-(const LaurentPoly& o) const {
  LaurentPoly out(*this);
  out -= o;
  return out;
}

LaurentPoly LaurentPoly::operator*(const LaurentPoly& o) const {
  LaurentPoly out;
  for (const auto& [e1, c1] : terms_)
    for (const auto& [e2, c2] : o.terms_)
      out.terms_.emplace_back(e1 + e2, c1 * c2);
  out.normalize();
  return out;
}

LaurentPoly LaurentPoly::scaled(const BigInt& c) const {
  if (c == 0) return LaurentPoly();
  LaurentPoly out(*this);
  for (auto& [e, x] : out.terms_) x *= c;
  return out;
}

LaurentPoly LaurentPoly::shifted(int exp) const {
  LaurentPoly out(*this);
  for (auto& [e, x] : out.terms_) e += exp;
  return out;
}

LaurentPoly LaurentPoly::bar() const {
  LaurentPoly out(*this);
  for (auto& [e, x] : out.terms_) e = -e;
  std::reverse(out.terms_.begin(), out.terms_.end());
  return out;
}

BigInt LaurentPoly::eval_one() const {
  BigInt acc = 0;
  for (const auto& [e, c] : terms_) acc += c;
  return acc;
}

LaurentPoly LaurentPoly::positive_part() const {
  LaurentPoly out;
  for (const auto& [e, c] : terms_)
    if (e > 0) out.terms_.emplace_back(e, c);
  return out;
}

std::string LaurentPoly::cache_str() const {
  if (terms_.empty()) return "0^0";
  std::ostringstream os;
  for (size_t i = 0; i < terms_.size(); ++i) {
    if (i) os << ',';
    os << terms_[i].first << '^' << terms_[i].second;
  }
  return os.str();
}

LaurentPoly LaurentPoly::parse_cache(std::string_view text) {
  if (text == "0^0") return LaurentPoly();
  LaurentPoly out;
  size_t pos = 0;
  int prev_exp = 0;
  bool have_prev = false;
  while (pos <= text.size()) {
    size_t next = text.find(',', pos);
    if (next == std::string_view::npos) next = text.size();
    const std::string token(text.substr(pos, next - pos));
    const size_t caret = token.find('^');
    if (token.empty() || caret == std::string::npos)
      throw cache_error("malformed polynomial token '" + token + "'");
    int exp = 0;
    try {
      exp = std::stoi(token.substr(0, caret));
    } catch (...) {
      throw cache_error("bad exponent in polynomial token '" + token + "'");
    }
    BigInt coeff;
    try {
      coeff = BigInt(token.substr(caret + 1));
    } catch (...) {
      throw cache_error("bad coefficient in polynomial token '" + token + "'");
    }
    if (coeff == 0) throw cache_error("zero coefficient stored in polynomial");
    if (have_prev && exp <= prev_exp)
      throw cache_error("polynomial exponents not strictly increasing");
    prev_exp = exp;
    have_prev = true;
    out.terms_.emplace_back(exp, std::move(coeff));
    if (next == text.size()) break;
    pos = next + 1;
  }
  return out;
}

std::string LaurentPoly::pretty() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  for (size_t k = terms_.size(); k-- > 0;) {
    const auto& [e, c] = terms_[k];
    const bool first = k + 1 == terms_.size();
    BigInt a = c;
    if (first) {
      if (a < 0) {
        os << '-';
        a = -a;
      }
    } else {
      os << (a < 0 ? " - " : " + ");
      if (a < 0) a = -a;
    }
    if (a != 1 || e == 0) os << a.str();
    if (e != 0) {
      os << 'v';
      if (e != 1) os << '^' << e;
    }
  }
  return os.str();
}

}  // namespace klchar
