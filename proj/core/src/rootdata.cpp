#include "klchar/rootdata.hpp"

#include <algorithm>
#include <deque>

namespace klchar {

namespace {

bool valid_pair(Series s, int rank) {
  switch (s) {
    case Series::A: return rank >= 1;
    case Series::B: return rank >= 2;
    case Series::C: return rank >= 2;
    case Series::D: return rank >= 4;
    case Series::E: return rank == 6 || rank == 7 || rank == 8;
    case Series::F: return rank == 4;
    case Series::G: return rank == 2;
  }
  return false;
}

// Cartan matrix in the convention cartan(i, j) = <alpha_j, alpha_i^vee>,
// with Bourbaki numbering of the simple roots.
IntMat cartan_matrix(Series s, int n) {
  IntMat c(n, n);
  for (int i = 0; i < n; ++i) c.at(i, i) = 2;
  auto chain_edge = [&](int i, int j) {
    c.at(i, j) = -1;
    c.at(j, i) = -1;
  };
  switch (s) {
    case Series::A:
      for (int i = 0; i + 1 < n; ++i) chain_edge(i, i + 1);
      break;
    case Series::B:
      for (int i = 0; i + 1 < n; ++i) chain_edge(i, i + 1);
      c.at(n - 1, n - 2) = -2;  // alpha_n short
      break;
    case Series::C:
      for (int i = 0; i + 1 < n; ++i) chain_edge(i, i + 1);
      c.at(n - 2, n - 1) = -2;  // alpha_n long
      break;
    case Series::D:
      for (int i = 0; i + 2 < n; ++i) chain_edge(i, i + 1);
      chain_edge(n - 3, n - 1);
      break;
    case Series::E:
      chain_edge(0, 2);
      chain_edge(2, 3);
      chain_edge(3, 4);
      chain_edge(4, 5);
      if (n >= 7) chain_edge(5, 6);
      if (n == 8) chain_edge(6, 7);
      chain_edge(1, 3);
      break;
    case Series::F:
      chain_edge(0, 1);
      chain_edge(1, 2);
      chain_edge(2, 3);
      c.at(2, 1) = -2;  // alpha_1, alpha_2 long; alpha_3, alpha_4 short
      break;
    case Series::G:
      c.at(0, 1) = -3;  // alpha_1 short, alpha_2 long
      c.at(1, 0) = -1;
      break;
  }
  return c;
}

}  // namespace

std::string to_string(Series s) { return std::string(1, static_cast<char>(s)); }

std::string to_string(LatticeFlavor f) {
  return f == LatticeFlavor::simply_connected ? "sc" : "adj";
}

RootDatum RootDatum::build(Series series, int rank, LatticeFlavor flavor) {
  if (!valid_pair(series, rank))
    throw domain_error("invalid series/rank pair: " + to_string(series) +
                       std::to_string(rank));
  RootDatum rd;
  rd.series_ = series;
  rd.rank_ = rank;
  rd.flavor_ = flavor;
  rd.descriptor_ = to_string(series) + std::to_string(rank) + to_string(flavor);
  rd.cartan_ = cartan_matrix(series, rank);
  rd.finish_construction();
  return rd;
}

RootDatum RootDatum::from_descriptor(std::string_view d) {
  if (d.size() < 3) throw parse_error("malformed datum descriptor: " + std::string(d));
  const char sc = d[0];
  if (sc < 'A' || sc > 'G')
    throw parse_error("unknown series in descriptor: " + std::string(d));
  size_t i = 1;
  int rank = 0;
  while (i < d.size() && d[i] >= '0' && d[i] <= '9') {
    rank = rank * 10 + (d[i] - '0');
    ++i;
  }
  const std::string_view tail = d.substr(i);
  LatticeFlavor flavor;
  if (tail == "sc")
    flavor = LatticeFlavor::simply_connected;
  else if (tail == "adj")
    flavor = LatticeFlavor::adjoint;
  else
    throw parse_error("descriptor must end in 'sc' or 'adj': " + std::string(d));
  if (rank <= 0) throw parse_error("missing rank in descriptor: " + std::string(d));
  try {
    return build(static_cast<Series>(sc), rank, flavor);
  } catch (const domain_error& e) {
    throw parse_error(std::string(e.what()) + " (descriptor " + std::string(d) + ")");
  }
}

void RootDatum::finish_construction() {
  const int n = rank_;
  simple_roots_.resize(n);
  simple_coroots_.resize(n);
  for (int j = 0; j < n; ++j) {
    Weight root(static_cast<size_t>(n), 0);
    Weight coroot(static_cast<size_t>(n), 0);
    if (flavor_ == LatticeFlavor::simply_connected) {
      for (int i = 0; i < n; ++i) root[i] = cartan_.at(i, j);
      coroot[j] = 1;
    } else {
      root[j] = 1;
      for (int i = 0; i < n; ++i) coroot[i] = cartan_.at(j, i);
    }
    simple_roots_[j] = std::move(root);
    simple_coroots_[j] = std::move(coroot);
  }

  cartan_inverse_ = invert_rational(cartan_);
  {
    IntMat t(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) t.at(i, j) = cartan_.at(j, i);
    cartan_transpose_inverse_ = invert_rational(t);
  }

  // Orbit closure of the simple (root, coroot) pairs under all simple
  // reflections; this produces the whole root system.
  struct Item {
    Weight root, coroot;
    IntVec rc, cc;
  };
  std::unordered_map<IntVec, Item, VecHash> seen;
  std::deque<IntVec> work;
  for (int i = 0; i < n; ++i) {
    Item it;
    it.root = simple_roots_[i];
    it.coroot = simple_coroots_[i];
    it.rc.assign(static_cast<size_t>(n), 0);
    it.cc.assign(static_cast<size_t>(n), 0);
    it.rc[i] = 1;
    it.cc[i] = 1;
    seen.emplace(it.root, it);
    work.push_back(it.root);
  }
  while (!work.empty()) {
    const Item cur = seen.at(work.front());
    work.pop_front();
    for (int j = 0; j < n; ++j) {
      Item nxt;
      const Int a = vec_dot(cur.root, simple_coroots_[j]);
      const Int b = vec_dot(simple_roots_[j], cur.coroot);
      nxt.root = vec_sub(cur.root, vec_scale(simple_roots_[j], a));
      nxt.rc = cur.rc;
      nxt.rc[j] -= a;
      nxt.coroot = vec_sub(cur.coroot, vec_scale(simple_coroots_[j], b));
      nxt.cc = cur.cc;
      nxt.cc[j] -= b;
      if (seen.emplace(nxt.root, nxt).second) work.push_back(nxt.root);
    }
  }

  positive_.clear();
  for (const auto& [coords, it] : seen) {
    bool pos = true;
    for (Int c : it.rc) pos = pos && c >= 0;
    if (!pos) continue;
    PositiveRoot pr;
    pr.root = it.root;
    pr.coroot = it.coroot;
    pr.root_coeffs = it.rc;
    pr.coroot_coeffs = it.cc;
    pr.height = 0;
    for (Int c : it.rc) pr.height += c;
    positive_.push_back(std::move(pr));
  }
  std::sort(positive_.begin(), positive_.end(),
            [](const PositiveRoot& x, const PositiveRoot& y) {
              if (x.height != y.height) return x.height < y.height;
              return x.root < y.root;
            });

  root_index_.clear();
  for (int i = 0; i < static_cast<int>(positive_.size()); ++i) {
    root_index_.emplace(positive_[i].root, std::make_pair(i, true));
    root_index_.emplace(vec_scale(positive_[i].root, -1), std::make_pair(i, false));
  }

  rho_doubled_ = zero_weight();
  for (const auto& pr : positive_) rho_doubled_ = vec_add(rho_doubled_, pr.root);

  Int max_height = 0, max_coheight = 0;
  for (int i = 0; i < static_cast<int>(positive_.size()); ++i) {
    if (positive_[i].height > max_height) {
      max_height = positive_[i].height;
      highest_root_index_ = i;
    }
    Int ch = 0;
    for (Int c : positive_[i].coroot_coeffs) ch += c;
    if (ch > max_coheight) {
      max_coheight = ch;
      highest_coroot_index_ = i;
    }
  }
  coxeter_number_ = 1 + max_height;

  // Sanity: the defining pairing identity and <2 rho, alpha_i^vee> = 2.
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j)
      require(vec_dot(simple_roots_[i], simple_coroots_[j]) == cartan_.at(j, i),
              "Cartan pairing identity failed");
    require(vec_dot(rho_doubled_, simple_coroots_[i]) == 2,
            "rho pairing identity failed");
  }
}

Int RootDatum::pairing(const Weight& weight, const Weight& coroot) const {
  return vec_dot(weight, coroot);
}

std::optional<IntVec> RootDatum::root_coefficients(const Weight& w) const {
  require(static_cast<int>(w.size()) == rank_, "weight dimension mismatch");
  if (flavor_ == LatticeFlavor::adjoint) return w;
  IntVec out;
  if (!solve_integral(cartan_inverse_, w, out)) return std::nullopt;
  return out;
}

std::optional<IntVec> RootDatum::coroot_coefficients(const Weight& cw) const {
  require(static_cast<int>(cw.size()) == rank_, "coweight dimension mismatch");
  if (flavor_ == LatticeFlavor::simply_connected) return cw;
  IntVec out;
  if (!solve_integral(cartan_transpose_inverse_, cw, out)) return std::nullopt;
  return out;
}

std::optional<Weight> RootDatum::weight_with_simple_pairings(const IntVec& pairings) const {
  require(static_cast<int>(pairings.size()) == rank_, "pairing vector dimension mismatch");
  if (flavor_ == LatticeFlavor::simply_connected) return pairings;
  // Adjoint coordinates: <nu, alpha_i^vee> = (cartan * nu)_i.
  IntVec out;
  if (!solve_integral(cartan_inverse_, pairings, out)) return std::nullopt;
  return out;
}

bool RootDatum::dominance_leq(const Weight& lo, const Weight& hi) const {
  const auto coeffs = root_coefficients(vec_sub(hi, lo));
  if (!coeffs) return false;
  for (Int c : *coeffs)
    if (c < 0) return false;
  return true;
}

bool RootDatum::is_dominant(const Weight& w) const {
  for (int i = 0; i < rank_; ++i)
    if (vec_dot(w, simple_coroots_[i]) < 0) return false;
  return true;
}

std::optional<bool> RootDatum::root_is_positive(const Weight& coords) const {
  const auto it = root_index_.find(coords);
  if (it == root_index_.end()) return std::nullopt;
  return it->second.second;
}

}  // namespace klchar
