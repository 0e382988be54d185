#include "klchar/intmath.hpp"

namespace klchar {

IntMat mat_mul(const IntMat& x, const IntMat& y) {
  require(x.cols == y.rows, "matrix dimension mismatch in product");
  IntMat out(x.rows, y.cols);
  for (int i = 0; i < x.rows; ++i)
    for (int k = 0; k < x.cols; ++k) {
      const Int xik = x.at(i, k);
      if (xik == 0) continue;
      for (int j = 0; j < y.cols; ++j) out.at(i, j) += xik * y.at(k, j);
    }
  return out;
}

IntVec mat_apply(const IntMat& m, const IntVec& v) {
  require(m.cols == static_cast<int>(v.size()),
          "matrix/vector dimension mismatch");
  IntVec out(static_cast<size_t>(m.rows), 0);
  for (int i = 0; i < m.rows; ++i) {
    Int acc = 0;
    for (int j = 0; j < m.cols; ++j) acc += m.at(i, j) * v[j];
    out[i] = acc;
  }
  return out;
}

std::vector<std::vector<Rational>> invert_rational(const IntMat& m) {
  require(m.rows == m.cols, "only square matrices can be inverted");
  const int n = m.rows;
  std::vector<std::vector<Rational>> work(n, std::vector<Rational>(2 * n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) work[i][j] = m.at(i, j);
    work[i][n + i] = 1;
  }
  for (int col = 0; col < n; ++col) {
    int pivot = -1;
    for (int r = col; r < n; ++r)
      if (work[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) throw domain_error("singular matrix");
    std::swap(work[col], work[pivot]);
    const Rational inv = Rational(1) / work[col][col];
    for (int j = 0; j < 2 * n; ++j) work[col][j] *= inv;
    for (int r = 0; r < n; ++r) {
      if (r == col || work[r][col] == 0) continue;
      const Rational f = work[r][col];
      for (int j = 0; j < 2 * n; ++j) work[r][j] -= f * work[col][j];
    }
  }
  std::vector<std::vector<Rational>> out(n, std::vector<Rational>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out[i][j] = work[i][n + j];
  return out;
}

IntMat invert_unimodular(const IntMat& m) {
  const auto inv = invert_rational(m);
  const int n = m.rows;
  IntMat out(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const Rational& q = inv[i][j];
      require(denominator(q) == 1, "matrix inverse is not integral");
      out.at(i, j) = static_cast<Int>(numerator(q));
    }
  return out;
}

bool solve_integral(const std::vector<std::vector<Rational>>& inverse,
                    const IntVec& rhs, IntVec& out) {
  const size_t n = inverse.size();
  require(rhs.size() == n, "dimension mismatch in linear solve");
  out.assign(n, 0);
  for (size_t i = 0; i < n; ++i) {
    Rational acc = 0;
    for (size_t j = 0; j < n; ++j) acc += inverse[i][j] * rhs[j];
    if (denominator(acc) != 1) return false;
    out[i] = static_cast<Int>(numerator(acc));
  }
  return true;
}

IntVec vec_add(const IntVec& x, const IntVec& y) {
  require(x.size() == y.size(), "weight dimension mismatch");
  IntVec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] + y[i];
  return out;
}

IntVec vec_sub(const IntVec& x, const IntVec& y) {
  require(x.size() == y.size(), "weight dimension mismatch");
  IntVec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] - y[i];
  return out;
}

IntVec vec_scale(const IntVec& x, Int c) {
  IntVec out(x.size());
  for (size_t i = 0; i < x.size(); ++i) out[i] = x[i] * c;
  return out;
}

Int vec_dot(const IntVec& x, const IntVec& y) {
  require(x.size() == y.size(), "pairing dimension mismatch");
  Int acc = 0;
  for (size_t i = 0; i < x.size(); ++i) acc += x[i] * y[i];
  return acc;
}

bool vec_is_zero(const IntVec& x) {
  for (Int v : x)
    if (v != 0) return false;
  return true;
}

std::size_t hash_combine(std::size_t seed, std::size_t value) {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 6) + (seed >> 2));
}

}  // namespace klchar
