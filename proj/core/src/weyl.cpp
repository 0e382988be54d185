#include "klchar/weyl.hpp"

#include <algorithm>
#include <cstdlib>
#include <deque>
#include <set>
#include <sstream>

namespace klchar {

namespace {

IntMat reflection_matrix(const RootDatum& rd, const Weight& root, const Weight& coroot) {
  const int n = rd.x_rank();
  IntMat m(n, n);
  for (int j = 0; j < n; ++j) {
    // s(e_j) = e_j - <e_j, coroot> root
    for (int i = 0; i < n; ++i)
      m.at(i, j) = (i == j ? 1 : 0) - coroot[j] * root[i];
  }
  return m;
}

BigInt det_bareiss(const IntMat& m) {
  const int n = m.rows;
  std::vector<std::vector<BigInt>> a(n, std::vector<BigInt>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a[i][j] = m.at(i, j);
  BigInt prev = 1;
  int sign = 1;
  for (int k = 0; k < n - 1; ++k) {
    if (a[k][k] == 0) {
      int swap_row = -1;
      for (int r = k + 1; r < n; ++r)
        if (a[r][k] != 0) {
          swap_row = r;
          break;
        }
      if (swap_row < 0) return 0;
      std::swap(a[k], a[swap_row]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i)
      for (int j = k + 1; j < n; ++j)
        a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) / prev;
    prev = a[k][k];
  }
  return sign * a[n - 1][n - 1];
}

}  // namespace

WeylContext::WeylContext(RootDatum rd) : rd_(std::move(rd)) {
  build_generators();
  build_omega();
}

void WeylContext::build_generators() {
  const int r = rd_.rank();
  gens_.clear();
  gens_.reserve(static_cast<size_t>(r) + 1);

  // s_0 = t_theta s_theta = s_theta t_{-theta}, theta^vee the highest coroot.
  const PositiveRoot& hc = rd_.highest_coroot_root();
  FinWeylElt s_theta = FinWeylElt::involution(reflection_matrix(rd_, hc.root, hc.coroot));
  gens_.emplace_back(std::move(s_theta), vec_scale(hc.root, -1));

  for (int i = 0; i < r; ++i) {
    FinWeylElt s = FinWeylElt::involution(
        reflection_matrix(rd_, rd_.simple_root(i), rd_.simple_coroot(i)));
    gens_.emplace_back(std::move(s), rd_.zero_weight());
  }

  for (const ExtElt& g : gens_)
    require(length(g) == 1, "generator does not have length one");
}

void WeylContext::build_omega() {
  omega_.clear();
  const int r = rd_.rank();
  const auto& positive = rd_.positive_roots();

  for (unsigned mask = 0; mask < (1u << r); ++mask) {
    IntVec pairings(static_cast<size_t>(r), 0);
    for (int i = 0; i < r; ++i)
      if (mask & (1u << i)) pairings[i] = -1;

    // Candidate translation with the prescribed simple pairings.
    const auto nu_opt = rd_.weight_with_simple_pairings(pairings);
    if (!nu_opt) continue;
    const Weight& nu = *nu_opt;

    // Length zero forces <nu, alpha^vee> in {0, -1} for every positive
    // coroot; collect the inversion set the finite part must have.
    bool feasible = true;
    std::set<Weight> inversions;
    for (const auto& pr : positive) {
      const Int v = vec_dot(nu, pr.coroot);
      if (v == -1)
        inversions.insert(pr.root);
      else if (v != 0) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;

    // Reconstruct w with N(w) = inversions, peeling one simple root at a
    // time: if alpha_i in N(w) then w = w' s_i with N(w') = s_i(N(w) - a_i).
    std::vector<GenIndex> letters;
    std::set<Weight> d = inversions;
    bool ok = true;
    while (!d.empty()) {
      int found = -1;
      for (int i = 0; i < r; ++i)
        if (d.count(rd_.simple_root(i))) {
          found = i;
          break;
        }
      if (found < 0) {
        ok = false;
        break;
      }
      letters.push_back(found + 1);
      std::set<Weight> next;
      const ExtElt& s = gens_[static_cast<size_t>(found) + 1];
      for (const Weight& root : d) {
        if (root == rd_.simple_root(found)) continue;
        next.insert(s.fin().apply(root));
      }
      d = std::move(next);
    }
    if (!ok) continue;

    std::reverse(letters.begin(), letters.end());
    FinWeylElt w = FinWeylElt::identity(r);
    for (GenIndex i : letters) w = w.compose(gens_[static_cast<size_t>(i)].fin());

    ExtElt candidate(w, nu);
    if (length(candidate) != 0) continue;
    omega_.push_back(std::move(candidate));
  }

  std::sort(omega_.begin(), omega_.end());

  // |Omega| = [X : ZPhi], which is |det(Cartan)| for the simply connected
  // lattice and 1 for the adjoint one.
  BigInt expected = 1;
  if (rd_.flavor() == LatticeFlavor::simply_connected) {
    expected = det_bareiss(rd_.cartan());
    if (expected < 0) expected = -expected;
  }
  require(BigInt(omega_.size()) == expected,
          "constructed Omega has wrong order for " + rd_.descriptor());
}

ExtElt WeylContext::identity() const {
  return ExtElt(FinWeylElt::identity(rd_.x_rank()), rd_.zero_weight());
}

ExtElt WeylContext::translation(const Weight& mu) const {
  require(static_cast<int>(mu.size()) == rd_.x_rank(), "translation dimension mismatch");
  return ExtElt(FinWeylElt::identity(rd_.x_rank()), mu);
}

const ExtElt& WeylContext::gen(GenIndex i) const {
  require(i >= 0 && i < static_cast<int>(gens_.size()),
          "generator index out of range: " + std::to_string(i));
  return gens_[static_cast<size_t>(i)];
}

GenSubset WeylContext::finite_gens() const {
  GenSubset j(static_cast<size_t>(rd_.rank()));
  for (int i = 0; i < rd_.rank(); ++i) j[i] = i + 1;
  return j;
}

GenSubset WeylContext::all_gens() const {
  GenSubset j(static_cast<size_t>(rd_.rank()) + 1);
  for (int i = 0; i <= rd_.rank(); ++i) j[i] = i;
  return j;
}

ExtElt WeylContext::multiply(const ExtElt& x, const ExtElt& y) const {
  require(static_cast<int>(x.trans().size()) == rd_.x_rank() &&
              x.trans().size() == y.trans().size(),
          "element datum mismatch in product");
  // (w t_mu)(w' t_nu) = ww' t_{w'^{-1}(mu) + nu}
  return ExtElt(x.fin().compose(y.fin()),
                vec_add(y.fin().apply_inverse(x.trans()), y.trans()));
}

ExtElt WeylContext::inverse(const ExtElt& x) const {
  // (w t_mu)^{-1} = w^{-1} t_{-w(mu)}
  return ExtElt(x.fin().inverse(), vec_scale(x.fin().apply(x.trans()), -1));
}

Weight WeylContext::act(const ExtElt& x, const Weight& w, bool finite_part_only) const {
  require(finite_part_only || x.is_finite(),
          "act: element has a translation part; pass finite_part_only to use "
          "the finite part alone");
  return x.fin().apply(w);
}

Weight WeylContext::dot_act(const ExtElt& x, const Weight& lambda, Int p) const {
  require(p >= 2, "dot action needs p >= 2");
  const Weight& rho2 = rd_.rho_doubled();
  Weight doubled = vec_add(vec_add(vec_scale(lambda, 2), vec_scale(x.trans(), 2 * p)), rho2);
  Weight image = vec_sub(x.fin().apply(doubled), rho2);
  for (Int& c : image) {
    require(c % 2 == 0, "dot action produced a non-integral weight");
    c /= 2;
  }
  return image;
}

Int WeylContext::length_impl(const FinWeylElt& w, const Weight& mu) const {
  Int total = 0;
  for (const auto& pr : rd_.positive_roots()) {
    const Int n = vec_dot(mu, pr.coroot);
    const auto sign = rd_.root_is_positive(w.apply(pr.root));
    if (!sign) internal_error("finite part does not permute the root system");
    const Int term = n + (*sign ? 0 : 1);
    total += term < 0 ? -term : term;
  }
  return total;
}

Int WeylContext::length(const ExtElt& x) const { return length_impl(x.fin(), x.trans()); }

GenSubset WeylContext::descents(const ExtElt& x, Side side) const {
  GenSubset out;
  const Int lx = length(x);
  for (GenIndex i = 0; i < static_cast<GenIndex>(gens_.size()); ++i) {
    const ExtElt y = side == Side::left ? multiply(gens_[static_cast<size_t>(i)], x)
                                        : multiply(x, gens_[static_cast<size_t>(i)]);
    if (length(y) < lx) out.push_back(i);
  }
  return out;
}

GenIndex WeylContext::first_descent(const ExtElt& x, Side side) const {
  const Int lx = length(x);
  for (GenIndex i = 0; i < static_cast<GenIndex>(gens_.size()); ++i) {
    const ExtElt y = side == Side::left ? multiply(gens_[static_cast<size_t>(i)], x)
                                        : multiply(x, gens_[static_cast<size_t>(i)]);
    if (length(y) < lx) return i;
  }
  return -1;
}

bool WeylContext::bruhat_leq(const ExtElt& y0, const ExtElt& x0) const {
  ExtElt x = x0, y = y0;
  if (!is_affine(x) || !is_affine(y)) {
    auto [ox, ax] = omega_decompose(x);
    auto [oy, ay] = omega_decompose(y);
    require(ox == oy, "Bruhat comparison requires equal Omega parts");
    x = std::move(ax);
    y = std::move(ay);
  }
  while (true) {
    if (x == y) return true;
    const Int lx = length(x);
    const Int ly = length(y);
    if (ly >= lx) return false;
    const GenIndex s = first_descent(x, Side::left);
    if (s < 0) internal_error("positive-length element without a descent");
    const ExtElt sy = multiply(gens_[static_cast<size_t>(s)], y);
    if (length(sy) < ly) y = sy;
    x = multiply(gens_[static_cast<size_t>(s)], x);
  }
}

std::vector<GenIndex> WeylContext::reduced_word(const ExtElt& x0) const {
  require(is_affine(x0), "reduced words exist only for affine elements");
  std::vector<GenIndex> word;
  ExtElt x = x0;
  Int lx = length(x);
  while (lx > 0) {
    const GenIndex s = first_descent(x, Side::left);
    if (s < 0) internal_error("positive-length element without a descent");
    word.push_back(s);
    x = multiply(gens_[static_cast<size_t>(s)], x);
    --lx;
  }
  require(x.is_identity(), "reduced word peeling did not reach the identity");
  return word;
}

ExtElt WeylContext::from_word(std::span<const GenIndex> word) const {
  ExtElt x = identity();
  for (GenIndex i : word) x = multiply(x, gen(i));
  return x;
}

bool WeylContext::is_min_in_W_coset(const ExtElt& x) const {
  const Int lx = length(x);
  for (int i = 1; i <= rd_.rank(); ++i)
    if (length(multiply(gens_[static_cast<size_t>(i)], x)) < lx) return false;
  return true;
}

bool WeylContext::is_strongly_minimal(const ExtElt& x, const GenSubset& j) const {
  const auto& w_full = parabolic_subgroup(finite_gens());
  const auto& w_j = parabolic_subgroup(j);
  const Int lx = length(x);
  for (const ExtElt& u : w_full) {
    const Int lu = length(u);
    const ExtElt ux = multiply(u, x);
    for (const ExtElt& y : w_j) {
      if (length(multiply(ux, y)) != lu + lx + length(y)) return false;
    }
  }
  return true;
}

std::vector<ExtElt> WeylContext::enumerate_min_reps(const GenSubset& j, Int bound) const {
  std::vector<ExtElt> out;
  for (const ExtElt& x : ball(bound))
    if (is_strongly_minimal(x, j)) out.push_back(x);
  return out;
}

std::vector<ExtElt> WeylContext::parabolic_subgroup(const GenSubset& j) const {
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    auto it = parabolic_memo_.find(j);
    if (it != parabolic_memo_.end()) return it->second;
  }
  constexpr size_t kMaxParabolic = 1u << 18;
  std::unordered_map<ExtElt, char, ExtEltHash> seen;
  std::deque<ExtElt> work;
  ExtElt e = identity();
  seen.emplace(e, 1);
  work.push_back(e);
  while (!work.empty()) {
    ExtElt cur = work.front();
    work.pop_front();
    for (GenIndex i : j) {
      ExtElt nxt = multiply(cur, gen(i));
      if (seen.emplace(nxt, 1).second) {
        if (seen.size() > kMaxParabolic)
          throw domain_error("subset is not finitary (or W_J exceeds the enumeration cap)");
        work.push_back(nxt);
      }
    }
  }
  std::vector<ExtElt> out;
  out.reserve(seen.size());
  for (const auto& [x, _] : seen) out.push_back(x);
  std::sort(out.begin(), out.end(), [this](const ExtElt& a, const ExtElt& b) {
    const Int la = length(a), lb = length(b);
    if (la != lb) return la < lb;
    return a < b;
  });
  {
    std::lock_guard<std::mutex> lock(memo_mutex_);
    parabolic_memo_.emplace(j, out);
  }
  return out;
}

ExtElt WeylContext::longest_element(const GenSubset& j) const {
  const auto group = parabolic_subgroup(j);  // sorted by length
  require(!group.empty(), "empty parabolic subgroup");
  const ExtElt& best = group.back();
  if (group.size() > 1)
    require(length(group[group.size() - 2]) < length(best),
            "longest element is not unique");
  return best;
}

std::vector<ExtElt> WeylContext::coset_min_reps(const GenSubset& k, const GenSubset& j) const {
  require(std::includes(k.begin(), k.end(), j.begin(), j.end()),
          "coset_min_reps needs J contained in K");
  std::vector<ExtElt> out;
  for (const ExtElt& y : parabolic_subgroup(k)) {
    const Int ly = length(y);
    bool minimal = true;
    for (GenIndex s : j)
      if (length(multiply(y, gen(s))) < ly) {
        minimal = false;
        break;
      }
    if (minimal) out.push_back(y);
  }
  return out;
}

std::vector<ExtElt> WeylContext::ball(Int bound, const GenSubset& gens) const {
  require(bound >= 0, "ball radius must be nonnegative");
  std::unordered_map<ExtElt, Int, ExtEltHash> seen;
  std::deque<ExtElt> work;
  ExtElt e = identity();
  seen.emplace(e, 0);
  work.push_back(e);
  while (!work.empty()) {
    ExtElt cur = work.front();
    work.pop_front();
    for (GenIndex i : gens) {
      ExtElt nxt = multiply(cur, gen(i));
      const Int l = length(nxt);
      if (l > bound) continue;
      if (seen.emplace(nxt, l).second) work.push_back(nxt);
    }
  }
  std::vector<std::pair<std::vector<GenIndex>, ExtElt>> keyed;
  keyed.reserve(seen.size());
  for (const auto& [x, _] : seen) keyed.emplace_back(reduced_word(x), x);
  std::sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) {
    if (a.first.size() != b.first.size()) return a.first.size() < b.first.size();
    return a.first < b.first;
  });
  std::vector<ExtElt> out;
  out.reserve(keyed.size());
  for (auto& [w, x] : keyed) out.push_back(std::move(x));
  return out;
}

std::pair<ExtElt, ExtElt> WeylContext::omega_decompose(const ExtElt& x) const {
  for (const ExtElt& o : omega_) {
    ExtElt a = multiply(inverse(o), x);
    if (is_affine(a)) return {o, std::move(a)};
  }
  internal_error("element has no Omega factorization");
}

std::string WeylContext::serialize(const ExtElt& x) const {
  std::ostringstream os;
  const IntMat& m = x.fin().matrix();
  os << "w=[";
  for (int j = 0; j < m.cols; ++j) {
    if (j) os << ';';
    for (int i = 0; i < m.rows; ++i) {
      if (i) os << ',';
      os << m.at(i, j);
    }
  }
  os << "];t=(";
  for (size_t i = 0; i < x.trans().size(); ++i) {
    if (i) os << ',';
    os << x.trans()[i];
  }
  os << ')';
  return os.str();
}

namespace {

IntVec parse_int_list(std::string_view text, char sep) {
  IntVec out;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t next = text.find(sep, pos);
    if (next == std::string_view::npos) next = text.size();
    const std::string token(text.substr(pos, next - pos));
    if (token.empty()) throw parse_error("empty integer token in element string");
    char* end = nullptr;
    const long long v = std::strtoll(token.c_str(), &end, 10);
    if (end == nullptr || *end != '\0')
      throw parse_error("bad integer '" + token + "' in element string");
    out.push_back(static_cast<Int>(v));
    if (next == text.size()) break;
    pos = next + 1;
  }
  return out;
}

}  // namespace

ExtElt WeylContext::parse_element(std::string_view text) const {
  const int n = rd_.x_rank();
  if (text.substr(0, 3) != "w=[")
    throw parse_error("element string must start with 'w=[': " + std::string(text));
  const size_t close = text.find("];t=(");
  if (close == std::string_view::npos || text.back() != ')')
    throw parse_error("malformed element string: " + std::string(text));
  const std::string_view cols = text.substr(3, close - 3);
  const std::string_view trans = text.substr(close + 5, text.size() - close - 6);

  IntMat m(n, n);
  size_t pos = 0;
  for (int j = 0; j < n; ++j) {
    size_t next = cols.find(';', pos);
    if (next == std::string_view::npos) next = cols.size();
    const IntVec col = parse_int_list(cols.substr(pos, next - pos), ',');
    if (static_cast<int>(col.size()) != n)
      throw parse_error("matrix column has wrong dimension in element string");
    for (int i = 0; i < n; ++i) m.at(i, j) = col[i];
    pos = next + 1;
  }
  const IntVec t = parse_int_list(trans, ',');
  if (static_cast<int>(t.size()) != n)
    throw parse_error("translation part has wrong dimension in element string");

  FinWeylElt fin;
  try {
    fin = FinWeylElt::from_matrix(m);
  } catch (const domain_error&) {
    throw parse_error("finite part is not invertible over the integers");
  }
  for (const auto& pr : rd_.positive_roots())
    if (!rd_.root_is_positive(fin.apply(pr.root)))
      throw parse_error("finite part does not permute the root system");
  return ExtElt(std::move(fin), t);
}

GenSubset WeylContext::dot_stabilizer_gens(const Weight& lambda, Int p) const {
  GenSubset out;
  for (GenIndex i = 0; i < static_cast<GenIndex>(gens_.size()); ++i)
    if (dot_act(gens_[static_cast<size_t>(i)], lambda, p) == lambda) out.push_back(i);
  return out;
}

std::string WeylContext::word_string(const ExtElt& x) const {
  std::ostringstream os;
  os << '[';
  const auto word = reduced_word(x);
  for (size_t i = 0; i < word.size(); ++i) {
    if (i) os << ',';
    os << word[i];
  }
  os << ']';
  return os.str();
}

}  // namespace klchar
