#pragma once

#include <vector>

#include "burnside/matrix.hpp"

namespace burnside {

// Result of the common-invariant-subspace search. A found basis spans a
// proper nonzero subspace W with g W <= W for every generator (column
// vectors, left action). When nothing is found the spanned unital algebra
// dimension is reported instead.
struct InvariantSearch {
  std::vector<std::vector<Scalar>> basis;  // echelonized
  int algebra_dim = -1;
  bool found() const noexcept { return !basis.empty(); }
};

// Deterministic seed sweep: standard basis vectors; eigen-kernels
// ker(g - lambda I) per generator for the eigenvalue candidates a periodic
// matrix admits (over the rationals 1, -1, 0; over small finite fields every
// element, identity first); generator columns and rows; finally eight
// seeded-PRNG vectors. Each seed is spun up to its cyclic module; the first
// proper nonzero result wins.
InvariantSearch invariant_subspace(const std::vector<Mat>& gens);

struct SpanningCheck {
  bool spans = false;
  int dim = 0;                    // dimension of the spanned unital algebra
  std::vector<Mat> algebra_basis; // independent products, discovery order
  std::vector<std::vector<int>> basis_words;  // generator words, same order
};

// Does the unital algebra generated by the matrices reach the full n x n
// algebra? Breadth-first product enumeration with incremental independence.
SpanningCheck spanning_check(const std::vector<Mat>& gens);

// Change of basis exhibiting a maximal flag of common invariant subspaces:
// q_inv * g * q is block upper triangular with the given sizes for every
// generator, and each diagonal block admits no further splitting the search
// can see. The complement at each level is completed with the
// lexicographically first standard basis vectors.
struct FlagDecomposition {
  Mat q, q_inv;
  std::vector<int> block_sizes;
  std::vector<Mat> conjugated;

  FlagDecomposition(Mat q_, Mat q_inv_, std::vector<int> sizes, std::vector<Mat> conj)
      : q(std::move(q_)), q_inv(std::move(q_inv_)), block_sizes(std::move(sizes)),
        conjugated(std::move(conj)) {}
};

FlagDecomposition triangularize(const std::vector<Mat>& gens);

// Diagonal block j of a block upper triangular matrix.
Mat diag_block(const Mat& m, const std::vector<int>& sizes, int j);

// Zero below every diagonal block, exactly.
bool is_block_upper_triangular(const Mat& m, const std::vector<int>& sizes);

}  // namespace burnside
