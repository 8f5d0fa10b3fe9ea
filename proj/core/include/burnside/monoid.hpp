#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "burnside/limits.hpp"
#include "burnside/matrix.hpp"

namespace burnside {

struct ClosureResult;

// A finite monoid enumerated by interning: element 0 is the identity and
// every element records the (parent, generator) step that first produced it,
// so elements are ordered breadth-first by word length with ties broken by
// (left factor index, generator index). Multiplication always goes through
// the generator-column Cayley table; the full table is materialized only on
// request and only for small sizes.
class FinMonoid {
 public:
  // Builds from an explicit multiplication table (row-major, size n*n).
  // Validates identity laws, generator reachability, table range, and
  // associativity (exhaustive for n <= 200, sampled above).
  static FinMonoid from_table(std::vector<std::string> keys, const std::vector<int>& table,
                              int identity, std::vector<int> generators, bool validate = true);

  std::size_t size() const noexcept { return keys_.size(); }
  bool complete() const noexcept { return complete_; }
  int identity() const noexcept { return identity_; }
  // Element index per input generator position (duplicates allowed).
  const std::vector<int>& generators() const noexcept { return gens_; }

  int mul(int a, int b) const;
  // a * generators()[g]; the closure's native operation.
  int gen_product(int a, int g) const;

  const std::string& key(int i) const;
  int find(const std::string& key) const;  // -1 if absent
  // Word over input generator positions composing to element i (empty for
  // the identity).
  std::vector<int> word(int i) const;
  // Discovery chain: element i was first reached as parent(i) * generator
  // last_generator(i); both are -1 for the identity.
  int parent(int i) const;
  int last_generator(int i) const;

  bool has_table() const noexcept { return !table_.empty(); }
  // Materializes the full table via one dynamic-programming sweep over the
  // Cayley graph; no-op if already present or size exceeds the threshold.
  void ensure_table(std::size_t threshold = 4096);

  bool has_carrier() const noexcept { return !carrier_.empty(); }
  const Mat& carrier(int i) const;
  void attach_carrier(std::vector<Mat> mats);

  // Present for monoids built as sub-closures of an ambient monoid: element
  // i corresponds to ambient element ambient_map()[i].
  const std::vector<int>& ambient_map() const noexcept { return ambient_map_; }

  const std::vector<std::int32_t>& gen_table() const noexcept { return gen_table_; }

  // Least e >= 1 with x^e idempotent-cycle closure: returns the order of x
  // (least e >= 1 with x^e = identity) or 0 if no power is the identity.
  std::uint64_t element_order(int x) const;

 private:
  FinMonoid() = default;

  int intern(std::string key, int parent, int lastgen);

  std::vector<std::string> keys_;
  std::unordered_map<std::string, int> index_;
  std::vector<int> parent_;
  std::vector<int> lastgen_;
  std::vector<int> gens_;
  std::vector<std::int32_t> gen_table_;  // size() * gens_.size(), -1 = unfilled
  std::vector<std::int32_t> table_;      // full table when materialized
  std::vector<Mat> carrier_;
  std::vector<int> ambient_map_;
  int identity_ = 0;
  bool complete_ = true;

  friend ClosureResult close_matrices(const std::vector<Mat>&, const Limits&);
  friend ClosureResult close_elements(const FinMonoid&, const std::vector<int>&, const Limits&);
};

struct ClosureStats {
  std::uint64_t steps = 0;          // products formed
  std::size_t frontier_at_stop = 0; // unprocessed elements when stopped
  bool complete = true;
};

struct ClosureResult {
  FinMonoid monoid;  // partial when !stats.complete (mul unusable)
  ClosureStats stats;
};

// Breadth-first generator closure of matrices (identity adjoined as element
// 0 whether or not it is listed).
ClosureResult close_matrices(const std::vector<Mat>& gens, const Limits& limits = {});

// Closure of a subset of an ambient monoid; elements keep the ambient keys
// and carriers, and ambient_map() gives the correspondence.
ClosureResult close_elements(const FinMonoid& ambient, const std::vector<int>& gens,
                             const Limits& limits = {});

// Surjective monoid homomorphism with materialized fibers.
struct MonoidHom {
  std::shared_ptr<const FinMonoid> domain;
  std::shared_ptr<const FinMonoid> codomain;
  std::vector<int> image;                   // per domain element
  std::vector<std::vector<int>> preimages;  // per codomain element, ascending
};

// Quotient by a labeling: codomain elements are the distinct labels in first
// occurrence order. Raises NotAHomomorphism (with a violating pair) when the
// labeling is not a congruence. label_carrier, if given, attaches the first
// occurrence's matrix to each codomain element.
MonoidHom hom_from_labels(std::shared_ptr<const FinMonoid> domain,
                          const std::vector<std::string>& labels,
                          const std::vector<Mat>* label_carrier = nullptr);

// Hom onto an independently built codomain; preimages may be empty there.
// Verifies identity preservation and multiplicativity over all pairs.
MonoidHom hom_from_map(std::shared_ptr<const FinMonoid> domain,
                       std::shared_ptr<const FinMonoid> codomain, const std::vector<int>& image);

MonoidHom hom_identity(std::shared_ptr<const FinMonoid> m);
MonoidHom hom_to_trivial(std::shared_ptr<const FinMonoid> m);

// Domain must carry square matrices that are block upper triangular for the
// given sizes; maps each element to its block-diagonal part.
MonoidHom hom_block_diagonal(std::shared_ptr<const FinMonoid> domain,
                             const std::vector<int>& block_sizes);

// {m : n1 * phi(m) = n1 and phi(m) * n2 = n2}, ascending domain indices.
std::vector<int> stabilizer_pair(const MonoidHom& phi, int n1, int n2);

enum class TraceClass { Trivial, ElementaryAbelianP, GeneralFinite };

// Quotient of the (n1, n2) stabilizer by the relation identifying m, m' when
// m1 m m2 = m1 m' m2 for every m1 in the fiber of n1 and m2 in the fiber of
// n2. The relation is a congruence on the stabilizer, so the quotient is a
// monoid.
struct TraceMonoid {
  int n1 = 0, n2 = 0;
  std::vector<int> stabilizer;             // domain element indices, ascending
  std::vector<int> class_of;               // per stabilizer position
  std::vector<std::vector<int>> classes;   // member domain indices, ascending
  std::vector<int> class_rep;              // least member per class
  std::vector<std::vector<int>> table;     // quotient multiplication
  int identity_class = 0;
  TraceClass tag = TraceClass::Trivial;
  std::uint64_t tag_p = 0;  // exponent when tag == ElementaryAbelianP
  std::size_t size() const noexcept { return classes.size(); }
};

TraceMonoid trace_monoid(const MonoidHom& phi, int n1, int n2);

}  // namespace burnside
