#include "klchar/cells.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

namespace klchar {

CellContext::CellContext(std::shared_ptr<const WeylContext> w,
                         std::shared_ptr<const CharacterContext> chars)
    : w_(std::move(w)), chars_(std::move(chars)) {
  require(w_ && chars_, "CellContext needs its contexts");
}

std::map<ExtElt, LaurentPoly> CellContext::expand_in_canonical(
    const HeckeElt& h, const CanonicalBasisProvider& provider) const {
  CoeffMap rest = h.coeffs();
  std::map<ExtElt, LaurentPoly> out;
  while (!rest.empty()) {
    // Peel the (length, key)-maximal term; canonical elements are
    // unitriangular, so this strictly descends.
    auto best = rest.begin();
    Int best_len = w_->length(best->first);
    for (auto it = std::next(rest.begin()); it != rest.end(); ++it) {
      const Int l = w_->length(it->first);
      if (l > best_len || (l == best_len && it->first > best->first)) {
        best = it;
        best_len = l;
      }
    }
    const ExtElt top = best->first;
    const LaurentPoly c = best->second;
    const auto elem = provider.element(top);
    for (const auto& [y, p] : *elem) {
      auto it = rest.find(y);
      if (it == rest.end()) {
        LaurentPoly q = -(p * c);
        if (!q.is_zero()) rest.emplace(y, std::move(q));
      } else {
        it->second -= p * c;
        if (it->second.is_zero()) rest.erase(it);
      }
    }
    out.emplace(top, c);
  }
  return out;
}

CellGraph CellContext::build_cell_graph(Int bound,
                                        const CanonicalBasisProvider& provider) const {
  return build_cell_graph(bound, provider, w_->all_gens());
}

CellGraph CellContext::build_cell_graph(Int bound, const CanonicalBasisProvider& provider,
                                        const GenSubset& gens) const {
  require(bound >= 0, "cell graph bound must be nonnegative");
  CellGraph g;
  g.bound = bound;
  g.gens = gens;
  g.vertices = w_->ball(bound, gens);
  for (int i = 0; i < static_cast<int>(g.vertices.size()); ++i)
    g.index.emplace(g.vertices[i], i);
  g.escapes.assign(g.vertices.size(), false);

  const LaurentPoly v = LaurentPoly::v(1);
  struct PerVertex {
    std::vector<CellGraph::Edge> edges;
    bool escapes = false;
  };
  std::vector<PerVertex> results(g.vertices.size());

  const auto process = [&](int vi) {
    const ExtElt& x = g.vertices[static_cast<size_t>(vi)];
    const HeckeElt cx{CoeffMap(*provider.element(x))};
    PerVertex& res = results[static_cast<size_t>(vi)];
    // Hecke contexts are not needed here: the generator factor is always
    // H_s + v, so both products follow from the quadratic relation.
    for (GenIndex s : g.gens) {
      for (int side = 0; side < 2; ++side) {
        const bool right = side == 1;
        HeckeElt prod;
        {
          const ExtElt& gen = w_->gen(s);
          const LaurentPoly corr = LaurentPoly::v(-1) - LaurentPoly::v(1);
          for (const auto& [w, c] : cx.coeffs()) {
            ExtElt moved = right ? w_->multiply(w, gen) : w_->multiply(gen, w);
            if (w_->length(moved) > w_->length(w)) {
              prod.add_term(moved, c);
            } else {
              prod.add_term(moved, c);
              prod.add_term(w, c * corr);
            }
          }
          prod += cx.scaled(v);
        }
        for (const auto& [target, coeff] : expand_in_canonical(prod, provider)) {
          if (coeff.is_zero()) continue;
          const auto it = g.index.find(target);
          if (it == g.index.end()) {
            res.escapes = true;
            continue;
          }
          res.edges.push_back({vi, it->second, s, right});
        }
      }
    }
  };

  const unsigned workers = std::min<unsigned>(std::max(1u, std::thread::hardware_concurrency()),
                                              static_cast<unsigned>(g.vertices.size()) + 1);
  if (workers <= 1 || g.vertices.size() < 8) {
    for (int vi = 0; vi < static_cast<int>(g.vertices.size()); ++vi) process(vi);
  } else {
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr failure;
    std::mutex failure_mutex;
    for (unsigned t = 0; t < workers; ++t)
      pool.emplace_back([&] {
        for (;;) {
          const int vi = next.fetch_add(1);
          if (vi >= static_cast<int>(g.vertices.size())) return;
          try {
            process(vi);
          } catch (...) {
            std::lock_guard<std::mutex> lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            return;
          }
        }
      });
    for (auto& th : pool) th.join();
    if (failure) std::rethrow_exception(failure);
  }

  for (int vi = 0; vi < static_cast<int>(g.vertices.size()); ++vi) {
    auto& res = results[static_cast<size_t>(vi)];
    g.escapes[static_cast<size_t>(vi)] = res.escapes;
    g.edges.insert(g.edges.end(), res.edges.begin(), res.edges.end());
  }
  return g;
}

CellPartition CellContext::cell_partition(const CellGraph& g) const {
  const int n = static_cast<int>(g.vertices.size());
  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  for (const auto& e : g.edges)
    if (e.from != e.to) adj[static_cast<size_t>(e.from)].push_back(e.to);

  // Iterative Tarjan.
  std::vector<int> idx(static_cast<size_t>(n), -1), low(static_cast<size_t>(n), 0);
  std::vector<bool> on_stack(static_cast<size_t>(n), false);
  std::vector<int> stack, scc_of(static_cast<size_t>(n), -1);
  int counter = 0, scc_count = 0;
  struct Frame {
    int v;
    size_t child;
  };
  for (int root = 0; root < n; ++root) {
    if (idx[static_cast<size_t>(root)] != -1) continue;
    std::vector<Frame> frames{{root, 0}};
    idx[static_cast<size_t>(root)] = low[static_cast<size_t>(root)] = counter++;
    stack.push_back(root);
    on_stack[static_cast<size_t>(root)] = true;
    while (!frames.empty()) {
      Frame& f = frames.back();
      const auto& children = adj[static_cast<size_t>(f.v)];
      if (f.child < children.size()) {
        const int u = children[f.child++];
        if (idx[static_cast<size_t>(u)] == -1) {
          idx[static_cast<size_t>(u)] = low[static_cast<size_t>(u)] = counter++;
          stack.push_back(u);
          on_stack[static_cast<size_t>(u)] = true;
          frames.push_back({u, 0});
        } else if (on_stack[static_cast<size_t>(u)]) {
          low[static_cast<size_t>(f.v)] =
              std::min(low[static_cast<size_t>(f.v)], idx[static_cast<size_t>(u)]);
        }
      } else {
        if (low[static_cast<size_t>(f.v)] == idx[static_cast<size_t>(f.v)]) {
          for (;;) {
            const int u = stack.back();
            stack.pop_back();
            on_stack[static_cast<size_t>(u)] = false;
            scc_of[static_cast<size_t>(u)] = scc_count;
            if (u == f.v) break;
          }
          ++scc_count;
        }
        const int v = f.v;
        frames.pop_back();
        if (!frames.empty())
          low[static_cast<size_t>(frames.back().v)] =
              std::min(low[static_cast<size_t>(frames.back().v)], low[static_cast<size_t>(v)]);
      }
    }
  }

  // Regroup deterministically: cells ordered by their minimal vertex, which
  // is minimal in (length, word) order because the ball is.
  std::vector<std::vector<int>> members(static_cast<size_t>(scc_count));
  for (int vi = 0; vi < n; ++vi) members[static_cast<size_t>(scc_of[static_cast<size_t>(vi)])].push_back(vi);
  std::vector<int> order(static_cast<size_t>(scc_count));
  for (int c = 0; c < scc_count; ++c) order[static_cast<size_t>(c)] = c;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return members[static_cast<size_t>(a)].front() < members[static_cast<size_t>(b)].front();
  });

  CellPartition part;
  part.bound = g.bound;
  part.cell_of.assign(static_cast<size_t>(n), -1);
  for (int rank = 0; rank < scc_count; ++rank) {
    const int c = order[static_cast<size_t>(rank)];
    CellPartition::Cell cell;
    cell.members = members[static_cast<size_t>(c)];
    std::sort(cell.members.begin(), cell.members.end());
    cell.id = w_->word_string(g.vertices[static_cast<size_t>(cell.members.front())]);
    cell.complete = true;
    for (int vi : cell.members) {
      part.cell_of[static_cast<size_t>(vi)] = rank;
      cell.complete = cell.complete && !g.escapes[static_cast<size_t>(vi)];
    }
    part.cells.push_back(std::move(cell));
  }
  return part;
}

const CellPartition::Cell& CellContext::extend_to_wext(const CellGraph& g,
                                                       const CellPartition& part,
                                                       const ExtElt& x) const {
  const auto [omega, affine] = w_->omega_decompose(x);
  const auto it = g.index.find(affine);
  if (it == g.index.end())
    throw truncation_error("affine part " + w_->serialize(affine) +
                           " lies outside the truncation ball (bound " +
                           std::to_string(g.bound) + ")");
  return part.cells[static_cast<size_t>(part.cell_of[static_cast<size_t>(it->second)])];
}

std::optional<std::string> CellContext::orbit_label(const CellPartition& part,
                                                    int cell_index) const {
  const RootDatum& rd = w_->datum();
  // Packaged labels exist only where an independent validation oracle
  // does; currently that is rank one (two cells, two nilpotent orbits).
  if (rd.series() == Series::A && rd.rank() == 1) {
    const int identity_cell = part.cell_of.empty() ? -1 : part.cell_of[0];
    return cell_index == identity_cell ? "regular nilpotent orbit" : "zero orbit";
  }
  return std::nullopt;
}

HumphreysReport CellContext::humphreys_cell(const Weight& lambda, Int p, const CellGraph& g,
                                            const CellPartition& part,
                                            const std::string& mode) const {
  const RootDatum& rd = w_->datum();
  if (p <= rd.coxeter_number())
    throw guard_error("support predictor requires p > h; here p = " + std::to_string(p) +
                      ", h = " + std::to_string(rd.coxeter_number()));
  require(rd.is_dominant(lambda), "support predictor takes a dominant weight");

  HumphreysReport rep;
  rep.mode = mode;
  rep.lambda = lambda;
  rep.p = p;
  rep.provenance =
      "cell-level prediction per the Humphreys support conjecture (proposed "
      "conjecture; not a computed support variety)";

  if (mode == "traditional") {
    auto [bp, x] = chars_->to_fundamental_domain(lambda, p);
    if (!bp.J.empty())
      throw domain_error(
          "traditional mode needs a regular weight (trivial dot-stabilizer); facet type is "
          "nonempty here");
    // Minimal representative of the block position in its W-coset.
    ExtElt w = x;
    for (;;) {
      int drop = -1;
      const Int lw = w_->length(w);
      for (int i = 1; i <= rd.rank(); ++i)
        if (w_->length(w_->multiply(w_->gen(i), w)) < lw) {
          drop = i;
          break;
        }
      if (drop < 0) break;
      w = w_->multiply(w_->gen(drop), w);
    }
    rep.element = w;
  } else if (mode == "relative") {
    // Minimal element of the double coset W t_lambda W.
    ExtElt w = w_->translation(lambda);
    for (;;) {
      const Int lw = w_->length(w);
      int move = -1;
      bool left = true;
      for (int i = 1; i <= rd.rank() && move < 0; ++i)
        if (w_->length(w_->multiply(w_->gen(i), w)) < lw) move = i;
      if (move < 0) {
        left = false;
        for (int i = 1; i <= rd.rank() && move < 0; ++i)
          if (w_->length(w_->multiply(w, w_->gen(i))) < lw) move = i;
      }
      if (move < 0) break;
      w = left ? w_->multiply(w_->gen(move), w) : w_->multiply(w, w_->gen(move));
    }
    rep.element = w;
  } else {
    throw domain_error("unknown support predictor mode: " + mode);
  }

  const auto [omega, affine] = w_->omega_decompose(rep.element);
  rep.affine_part = affine;
  const auto& cell = extend_to_wext(g, part, rep.element);
  rep.cell_id = cell.id;
  rep.cell_complete = cell.complete;
  const int ci = part.cell_of[static_cast<size_t>(g.index.at(affine))];
  rep.orbit_label = orbit_label(part, ci);
  if (!rep.orbit_label)
    rep.warnings.push_back("no packaged nilpotent-orbit table for " + rd.descriptor() +
                           "; reporting the cell only");
  if (!cell.complete)
    rep.warnings.push_back(
        "the cell is truncated at bound " + std::to_string(g.bound) +
        "; equivalences beyond the ball are not visible");
  return rep;
}

}  // namespace klchar
