#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "klchar/characters.hpp"
#include "klchar/hecke.hpp"

namespace klchar {

// Directed graph of the based-ideal preorder, truncated to a word-length
// ball: an edge x -> y records that the canonical element of y appears in
// a product of the canonical element of x with a generator's.
struct CellGraph {
  struct Edge {
    int from = 0;
    int to = 0;
    GenIndex gen = 0;
    bool right_side = false;  // witness: which product produced the edge
  };
  std::vector<ExtElt> vertices;  // the ball, ordered by (length, word)
  std::map<ExtElt, int> index;
  std::vector<Edge> edges;
  // Vertices whose one-step products reach outside the ball.
  std::vector<bool> escapes;
  Int bound = 0;
  GenSubset gens;  // generating set used (S_aff, or S for finite groups)
};

struct CellPartition {
  struct Cell {
    std::string id;  // serialization of the (length, word)-minimal member
    std::vector<int> members;
    bool complete = false;
  };
  std::vector<int> cell_of;  // vertex index -> index into cells
  std::vector<Cell> cells;   // ordered by their minimal member
  Int bound = 0;
};

struct HumphreysReport {
  std::string mode;  // "traditional" | "relative"
  Weight lambda;
  Int p = 0;
  ExtElt element;          // the cell-indexing element
  ExtElt affine_part;      // its affine factor
  std::string cell_id;
  bool cell_complete = false;
  std::optional<std::string> orbit_label;  // from a packaged table, if any
  std::vector<std::string> warnings;
  std::string provenance;
};

// Truncated two-sided cells of the canonical basis, their extension to
// W_ext, and the cell-level support predictor.
class CellContext {
 public:
  CellContext(std::shared_ptr<const WeylContext> w,
              std::shared_ptr<const CharacterContext> chars);

  // Edge set over the ball of the given radius; edge generation walks the
  // products with generators only (transitivity supplies the rest).
  // Parallelizes over vertices; the result is schedule-independent.
  CellGraph build_cell_graph(Int bound, const CanonicalBasisProvider& provider,
                             const GenSubset& gens) const;
  CellGraph build_cell_graph(Int bound, const CanonicalBasisProvider& provider) const;

  // Strongly connected components of the truncated preorder.  A cell is
  // flagged complete when no member's one-step products leave the ball.
  CellPartition cell_partition(const CellGraph& g) const;

  // Cell of an extended element: the cell of its affine factor.  Throws
  // truncation_error when that factor is outside the ball.
  const CellPartition::Cell& extend_to_wext(const CellGraph& g, const CellPartition& part,
                                            const ExtElt& x) const;

  // Support predictor at the cell level; p > h required.  In traditional
  // mode lambda must be a regular weight and the element is the minimal
  // representative of its block position; in relative mode the element is
  // the minimal element of W t_lambda W.
  HumphreysReport humphreys_cell(const Weight& lambda, Int p, const CellGraph& g,
                                 const CellPartition& part, const std::string& mode) const;

  // Expansion of a product in the provider basis (unitriangular descent).
  std::map<ExtElt, LaurentPoly> expand_in_canonical(const HeckeElt& h,
                                                    const CanonicalBasisProvider& provider) const;

  // Packaged nilpotent-orbit labels for this datum, if shipped.
  std::optional<std::string> orbit_label(const CellPartition& part, int cell_index) const;

 private:
  std::shared_ptr<const WeylContext> w_;
  std::shared_ptr<const CharacterContext> chars_;
};

}  // namespace klchar
