#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "burnside/kernel_category.hpp"
#include "burnside/limits.hpp"
#include "burnside/matrix.hpp"
#include "burnside/monoid.hpp"
#include "burnside/triangular.hpp"

namespace burnside {

// First dim^2 linearly independent elements of a closure, in discovery
// order, with the Gram matrix of the trace form, its inverse, and the dual
// basis they define.
struct BurnsideBasisData {
  std::vector<int> indices;                // element ids inside the closure
  std::vector<std::vector<int>> words;     // generator words, same order
  std::vector<Mat> basis;
  Mat gram;        // d[i][j] = tr(s_i s_j)
  Mat gram_inv;
  std::vector<Mat> dual;                   // s_i* = sum_j c[i][j] s_j
  int scanned = 0;

  BurnsideBasisData(const Field& f, int need)
      : gram(f, need, need), gram_inv(f, need, need) {}
};

// Scans the closure in element order. Raises DoesNotSpan when the carrier
// does not contain dim^2 independent elements, DegenerateGram when the trace
// form is singular on the found basis (an internal inconsistency: the form
// is perfect on a full matrix algebra).
BurnsideBasisData burnside_basis(const FinMonoid& closure);

// Coefficients of s in the basis: alpha_i = sum_j c[i][j] tr(s s_j).
// Verifies sum alpha_i s_i == s exactly and raises NotInSpan otherwise.
std::vector<Scalar> reconstruct_coeffs(const Mat& s, const BurnsideBasisData& data);

// A finite set of scalars known to contain every trace, either enumerated
// from an explicit closure or taken a priori from what periodicity permits.
struct TraceSet {
  std::vector<Scalar> values;       // sorted, unique; empty when only counted
  mpz_class count = 0;
  bool enumerated = false;
  std::vector<std::uint64_t> unity_orders;  // rationals only
};

TraceSet trace_set(const std::vector<Mat>& elements);

// Rationals: the integers in [-n, n] plus the root-of-unity orders k with
// totient(k) <= n. Finite fields: every field element (enumerated when the
// order is at most 4096, counted otherwise).
TraceSet admissible_traces(int n, const Field& f);

// |traces| ^ (n^2): the order bound a spanning trace-bounded closure obeys.
mpz_class irreducible_bound(const TraceSet& traces, int n);

// Orders k with totient(k) <= n.
std::vector<std::uint64_t> unity_order_set(int n);

// lcm of unity_order_set(n): a universal period multiple for rational
// periodic n x n matrices.
std::uint64_t rational_period_lcm(int n);

// Power-walk length that certifies non-periodicity over the rationals when
// no repeat appears: n + rational_period_lcm(n) + 1.
std::uint64_t certified_power_cap(int n, const Field& f);

// Trace-block pairing for a block upper triangular product m1 * m = m2-side:
// given m = [[A,B],[0,C]] and stabilizer witnesses with top blocks X (row
// side, X A = X), Y C = Y, and column side A U = U, C V = V, the pairing is
// X * B * V. Raises NotInStabilizer when the fixed-point identities fail.
Mat block_trace_embedding(const Mat& m, const Mat& x, const Mat& y, const Mat& u, const Mat& v,
                          int top);

// A priori structure of the trace pairing image: torsion-free target in
// characteristic zero forces triviality; characteristic p forces an
// elementary abelian p-group.
std::pair<TraceClass, std::uint64_t> trace_classification(const Field& f);

enum class Verdict { Finite, NonPeriodicWitness, Inconclusive };

std::string verdict_name(Verdict v);

struct GeneratorPowerReport {
  int generator = 0;            // input position
  std::optional<PowerPeriod> period;
  std::uint64_t cap_used = 0;
  bool certified = false;       // cap long enough to prove non-periodicity
  std::uint64_t steps = 0;
};

struct BlockReport {
  int index = 0;
  int size = 0;
  std::string path;             // basis | basis-apriori | extension | closure | incomplete
  bool spans = false;
  int algebra_dim = 0;
  std::optional<std::size_t> order;    // block closure order when complete
  std::optional<BurnsideBasisData> basis;
  std::optional<TraceSet> traces;      // the set used for the bound
  std::optional<mpz_class> bound;
  std::string note;

  // extension path: the block generators lifted to ext_field split further.
  std::optional<Field> ext_field;
  std::vector<int> ext_block_sizes;
  std::vector<BlockReport> sub_blocks;
};

struct NonPeriodicityWitness {
  Mat element;
  std::vector<int> word;        // generator input positions
  std::string reason;
};

struct FinitenessReport {
  Verdict verdict = Verdict::Inconclusive;
  std::optional<std::size_t> order;
  std::optional<NonPeriodicityWitness> witness;
  std::vector<GeneratorPowerReport> generator_powers;
  std::optional<FlagDecomposition> flag;
  std::vector<BlockReport> blocks;
  std::optional<std::size_t> kernel_arrows;
  std::string kernel_note;
  ClosureStats closure_stats;
  Limits limits_used;
  std::string note;
};

// Decides finiteness of the matrix monoid generated by gens (identity
// adjoined): certified non-periodicity witnesses over the rationals, block
// triangularization with per-block trace bounds, direct closure for the
// exact order, and a kernel-category cross check on small instances.
FinitenessReport decide_finiteness(const std::vector<Mat>& gens, const Limits& limits);

// Renders a word over generator input positions as "g1*g3" (1-based);
// the empty word renders as "1".
std::string word_string(const std::vector<int>& word);

// Product of gens along the word; identity for the empty word.
Mat word_product(const std::vector<Mat>& gens, const std::vector<int>& word);

}  // namespace burnside
