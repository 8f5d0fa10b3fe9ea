#pragma once

#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "burnside/limits.hpp"
#include "burnside/monoid.hpp"

namespace burnside {

// Context for the arrow calculus over a surjection phi: M -> N. Two modes:
//
//  - enumerated: M is fully enumerated and phi is an explicit MonoidHom;
//    arrow identity is decided by the full triple-product table over the
//    fibers of the two coordinates.
//
//  - block: M is generated by block upper triangular matrices [[A,B],[0,C]]
//    and phi projects onto the block diagonal; N is the enumerated closure
//    of the projections. Arrow identity is decided by the φ-parts plus the
//    product X*B*V, where X is the top block of the left coordinate and V
//    the bottom block of the right coordinate. For coordinates with equal
//    φ-parts this product coincides with the triple-product criterion, so
//    both modes name the same arrows.
class KernelContext {
 public:
  static KernelContext enumerated(MonoidHom phi);

  struct BlockResult;
  // Closes the diagonal projections into N first; a budget hit there yields
  // an empty context with the partial stats.
  static BlockResult block(const Field& field, int top, int bottom, std::vector<Mat> gens,
                           const Limits& limits = {});

  bool is_enumerated() const noexcept { return phi_.has_value(); }
  const MonoidHom& phi() const;
  const FinMonoid& n_monoid() const;  // N in either mode
  int top() const noexcept { return top_; }
  int bottom() const noexcept { return bottom_; }
  const std::vector<Mat>& block_gens() const { return gens_; }
  const Field& block_field() const;

  // Generator count for arrow words (input positions).
  std::size_t generator_count() const;

 private:
  KernelContext() = default;
  std::optional<MonoidHom> phi_;                 // enumerated mode
  std::shared_ptr<const FinMonoid> diag_;        // block mode: N
  std::optional<Field> field_;
  int top_ = 0, bottom_ = 0;
  std::vector<Mat> gens_;
};

struct KernelContext::BlockResult {
  std::optional<KernelContext> context;
  ClosureStats diag_stats;
};

struct KernelArrow {
  int n1 = 0, n2 = 0;  // triple coordinates, indices into N
  int src = -1, dst = -1;  // object ids
  int m_elt = -1;              // representative, enumerated mode
  std::optional<Mat> m_mat;    // representative, block mode
  std::vector<int> word;       // generator input positions composing to m
  std::string key;
};

// The arrow structure closed under composition: objects are the pairs of N
// elements incident to some generated arrow (plus the unit object), each
// carrying its identity arrow.
struct KernelCat {
  std::vector<std::pair<int, int>> objects;
  std::vector<KernelArrow> arrows;
  std::vector<int> identity_of;            // per object, arrow index
  std::vector<std::vector<int>> from, into;  // per object, ascending arrow ids
  int unit_object = -1;  // object (1,1)
  bool complete = true;

  int object_index(int p, int q) const;
  int find_arrow(const std::string& key) const;

  std::vector<int> self_arrows(int obj) const;  // ascending

  // Interning lookups maintained by the closure builder.
  std::map<std::pair<int, int>, int> object_lookup;
  std::unordered_map<std::string, int> arrow_lookup;
};

// Canonical arrow name for the triple [n1, m, n2]; equal exactly when the
// triples are identified.
std::string arrow_key(const KernelContext& ctx, int n1, int m_elt, int n2);
std::string arrow_key(const KernelContext& ctx, int n1, const Mat& m, int n2);

struct KernelClosure {
  KernelCat cat;
  ClosureStats stats;
};

// Closes the generating arrows {[n1, x, n2] : x generator} over all
// coordinate pairs under composition, breadth-deterministically (worklist
// ordered by source object id, then key bytes).
KernelClosure kernel_category(const KernelContext& ctx, const Limits& limits = {});

// f then g; requires dst(f) == src(g), else NonComposable. The result is
// interned in cat if new.
int compose_arrows(const KernelContext& ctx, KernelCat& cat, int f, int g);
// Lookup-only variant for a closed category (Internal if the composite is
// not already present).
int compose_lookup(const KernelContext& ctx, const KernelCat& cat, int f, int g);

// Monoid of self-arrows at an object of a complete category.
FinMonoid endo_monoid(const KernelContext& ctx, const KernelCat& cat, int obj);

struct InjectivityReport {
  bool injective = true;
  std::size_t checked = 0;
  std::optional<std::pair<std::string, std::string>> collision;  // element names
};

// Distinctness of m -> [1, m, 1] over all of M (enumerated mode) or over the
// supplied elements (block mode). A collision is a soundness bug.
InjectivityReport embed_via_unit(const KernelContext& ctx);
InjectivityReport embed_via_unit(const KernelContext& ctx, const std::vector<Mat>& elements);

struct KernelFiniteness {
  bool certifying = false;     // closure ran to completion
  std::size_t objects = 0;
  std::size_t arrows = 0;      // upper bound for |M| when certifying
  std::optional<std::size_t> direct_order;  // |M| when known (enumerated mode)
  ClosureStats stats;
};

KernelFiniteness finiteness_via_kernel(const KernelContext& ctx, const Limits& limits = {});

}  // namespace burnside
