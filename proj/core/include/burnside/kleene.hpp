#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "burnside/limits.hpp"
#include "burnside/monoid.hpp"

namespace burnside {

// Finite directed multigraph with edges labeled either by elements of one
// finite monoid or by rectangular matrices between per-vertex dimensions
// (label of an edge v -> w has shape dims[v] x dims[w]; path values multiply
// in path order).
struct LabeledGraph {
  struct Edge {
    int from = 0, to = 0;
    int label_elt = -1;            // monoid mode
    std::optional<Mat> label_mat;  // matrix mode
  };

  int vertices = 0;
  std::vector<Edge> edges;
  std::shared_ptr<const FinMonoid> monoid;  // set iff monoid mode
  std::optional<Field> field;               // set iff matrix mode
  std::vector<int> dims;                    // per vertex, matrix mode

  bool monoid_mode() const noexcept { return monoid != nullptr; }
  void validate() const;
};

// For every ordered vertex pair (v, w), the set of path values over all
// walks from v to w, with the empty walk contributing the identity on the
// diagonal. Values are kept sorted by canonical key.
struct PathImageTable {
  int vertices = 0;
  bool monoid_mode = true;
  std::vector<int> elimination_order;  // empty when built by brute force
  std::vector<std::vector<std::string>> keys;  // cell (v,w) at v*vertices+w
  std::vector<std::vector<int>> elements;      // payload, monoid mode
  std::vector<std::vector<Mat>> mats;          // payload, matrix mode
  std::uint64_t steps = 0;

  const std::vector<std::string>& cell(int v, int w) const;
  std::size_t total() const;
  bool same_sets(const PathImageTable& other) const;
};

// Vertex-elimination closure: repeatedly removes a vertex x, extending every
// cell (v, w) by cell(v,x) * star(cell(x,x)) * cell(x,w) computed from the
// previous level. order must be a permutation of the vertices; the overload
// without one eliminates in ascending index order. Raises LimitExceeded.
PathImageTable image_homsets(const LabeledGraph& graph, const std::vector<int>& order,
                             const Limits& limits = {});
PathImageTable image_homsets(const LabeledGraph& graph, const Limits& limits = {});

// Oracle: breadth-first walk extension to the same fixpoint.
PathImageTable image_homsets_bruteforce(const LabeledGraph& graph, const Limits& limits = {});

// As above, but walks may pass through (strictly inside the walk) only the
// allowed vertices; endpoints are unrestricted.
PathImageTable image_homsets_bruteforce_restricted(const LabeledGraph& graph,
                                                   const std::vector<int>& allowed,
                                                   const Limits& limits = {});

// Smallest product-closed subset containing the seed and the identity,
// ascending element order. The empty seed yields {identity}.
std::vector<int> submonoid_closure(const FinMonoid& m, const std::vector<int>& seed,
                                   const Limits& limits = {});
// Matrix variant over square matrices of one size; key-sorted result.
std::vector<Mat> submonoid_closure(const Field& field, int dim, const std::vector<Mat>& seed,
                                   const Limits& limits = {});

}  // namespace burnside
