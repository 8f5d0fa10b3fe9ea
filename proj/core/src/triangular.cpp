#include "burnside/triangular.hpp"

#include <algorithm>
#include <random>
#include <utility>

#include "burnside/errors.hpp"

namespace burnside {

namespace {

void validate_gens(const std::vector<Mat>& gens) {
  if (gens.empty()) fail(Errc::ShapeMismatch, "generator list is empty");
  const Mat& g0 = gens.front();
  if (g0.rows() != g0.cols()) fail(Errc::ShapeMismatch, "generators must be square");
  for (const Mat& g : gens) {
    if (g.rows() != g0.rows() || g.cols() != g0.cols())
      fail(Errc::ShapeMismatch, "generators must share one size");
    if (g.field() != g0.field()) fail(Errc::FieldMismatch, "generators must share one field");
  }
}

std::vector<Scalar> apply(const Mat& g, const std::vector<Scalar>& v) {
  const int n = g.rows();
  std::vector<Scalar> out;
  out.reserve(n);
  for (int r = 0; r < n; ++r) {
    Scalar acc = g.field().zero();
    for (int c = 0; c < n; ++c) {
      if (g.at(r, c).is_zero() || v[c].is_zero()) continue;
      acc = acc + g.at(r, c) * v[c];
    }
    out.push_back(std::move(acc));
  }
  return out;
}

bool is_zero_vec(const std::vector<Scalar>& v) {
  return std::all_of(v.begin(), v.end(), [](const Scalar& s) { return s.is_zero(); });
}

// Smallest g-stable subspace containing the seed.
EchelonBasis spin_up(const std::vector<Mat>& gens, const std::vector<Scalar>& seed) {
  const Field& f = gens.front().field();
  const int n = gens.front().rows();
  EchelonBasis eb(f, n);
  // The queue holds the unreduced vectors; together they span eb, so closing
  // their images closes the span.
  std::vector<std::vector<Scalar>> queue;
  if (eb.insert(seed)) queue.push_back(seed);
  for (std::size_t i = 0; i < queue.size(); ++i) {
    if (eb.dim() == n) break;
    const std::vector<Scalar> v = queue[i];
    for (const Mat& g : gens) {
      std::vector<Scalar> w = apply(g, v);
      if (eb.insert(w)) queue.push_back(std::move(w));
    }
  }
  return eb;
}

// Eigenvalue candidates for a periodic matrix: over the rationals only
// roots of x^a (x^b - 1) that are rational, i.e. 1, -1, 0; over a small
// finite field every element, identity first.
std::vector<Scalar> eigen_candidates(const Field& f) {
  std::vector<Scalar> out;
  if (f.is_rationals()) {
    out.push_back(f.one());
    out.push_back(f.from_int(-1));
    out.push_back(f.zero());
    return out;
  }
  if (f.order() > 64) return out;
  out.push_back(f.one());
  for (const Scalar& e : f.elements(64))
    if (!e.is_one()) out.push_back(e);
  return out;
}

std::vector<std::vector<Scalar>> seed_vectors(const std::vector<Mat>& gens) {
  const Field& f = gens.front().field();
  const int n = gens.front().rows();
  std::vector<std::vector<Scalar>> seeds;

  for (int i = 0; i < n; ++i) {
    std::vector<Scalar> e(static_cast<std::size_t>(n), f.zero());
    e[i] = f.one();
    seeds.push_back(std::move(e));
  }

  for (const Scalar& lambda : eigen_candidates(f)) {
    for (const Mat& g : gens) {
      Mat shifted = g - Mat::identity(f, n).scaled(lambda);
      for (auto& v : nullspace(shifted)) seeds.push_back(std::move(v));
    }
  }

  for (const Mat& g : gens)
    for (int c = 0; c < n; ++c) seeds.push_back(g.col_vector(c));
  for (const Mat& g : gens)
    for (int r = 0; r < n; ++r) seeds.push_back(g.row_vector(r));

  std::mt19937 rng(0x5eed);
  for (int k = 0; k < 8; ++k) {
    std::vector<Scalar> v;
    v.reserve(n);
    for (int i = 0; i < n; ++i) {
      if (f.is_rationals()) {
        v.push_back(f.from_int(static_cast<long>(rng() % 7) - 3));
      } else {
        mpz_class idx = static_cast<unsigned long>(rng());
        v.push_back(f.element(idx % f.order()));
      }
    }
    seeds.push_back(std::move(v));
  }
  return seeds;
}

}  // namespace

InvariantSearch invariant_subspace(const std::vector<Mat>& gens) {
  validate_gens(gens);
  const int n = gens.front().rows();
  InvariantSearch result;
  if (n <= 1) {
    result.algebra_dim = spanning_check(gens).dim;
    return result;
  }
  for (const auto& seed : seed_vectors(gens)) {
    if (is_zero_vec(seed)) continue;
    EchelonBasis eb = spin_up(gens, seed);
    if (eb.dim() > 0 && eb.dim() < n) {
      result.basis = eb.rows();
      return result;
    }
  }
  result.algebra_dim = spanning_check(gens).dim;
  return result;
}

SpanningCheck spanning_check(const std::vector<Mat>& gens) {
  validate_gens(gens);
  const Field& f = gens.front().field();
  const int n = gens.front().rows();
  const int full = n * n;

  SpanningCheck out;
  EchelonBasis eb(f, full);
  std::vector<Mat> queue;
  std::vector<std::vector<int>> words;

  Mat id = Mat::identity(f, n);
  if (eb.insert(id.vectorize())) {
    queue.push_back(id);
    words.push_back({});
    out.algebra_basis.push_back(id);
    out.basis_words.push_back({});
  }
  for (std::size_t i = 0; i < queue.size(); ++i) {
    if (eb.dim() == full) break;
    for (std::size_t gi = 0; gi < gens.size(); ++gi) {
      Mat p = queue[i] * gens[gi];
      if (!eb.insert(p.vectorize())) continue;
      std::vector<int> w = words[i];
      w.push_back(static_cast<int>(gi));
      queue.push_back(p);
      words.push_back(w);
      out.algebra_basis.push_back(std::move(p));
      out.basis_words.push_back(std::move(w));
      if (eb.dim() == full) break;
    }
  }
  out.dim = eb.dim();
  out.spans = (out.dim == full);
  return out;
}

Mat diag_block(const Mat& m, const std::vector<int>& sizes, int j) {
  if (j < 0 || static_cast<std::size_t>(j) >= sizes.size())
    fail(Errc::ShapeMismatch, "block index out of range");
  int off = 0;
  for (int i = 0; i < j; ++i) off += sizes[static_cast<std::size_t>(i)];
  return m.block(off, off, sizes[static_cast<std::size_t>(j)], sizes[static_cast<std::size_t>(j)]);
}

bool is_block_upper_triangular(const Mat& m, const std::vector<int>& sizes) {
  int total = 0;
  for (int s : sizes) total += s;
  if (m.rows() != total || m.cols() != total) return false;
  int off = 0;
  for (int s : sizes) {
    for (int r = off + s; r < total; ++r)
      for (int c = off; c < off + s; ++c)
        if (!m.at(r, c).is_zero()) return false;
    off += s;
  }
  return true;
}

namespace {

Mat block_diag2(const Mat& a, const Mat& c) {
  Mat out(a.field(), a.rows() + c.rows(), a.cols() + c.cols());
  out.set_block(0, 0, a);
  out.set_block(a.rows(), a.cols(), c);
  return out;
}

FlagDecomposition triangularize_rec(const std::vector<Mat>& gens, int depth) {
  const Field& f = gens.front().field();
  const int n = gens.front().rows();
  check_internal(depth <= n + 1, "triangularization recursion depth exceeds dimension");

  InvariantSearch search = invariant_subspace(gens);
  if (!search.found()) {
    Mat id = Mat::identity(f, n);
    return FlagDecomposition(id, id, {n}, gens);
  }

  const int m = static_cast<int>(search.basis.size());
  // Columns of q: the invariant subspace basis, completed by the first
  // standard basis vectors that keep the columns independent.
  Mat q(f, n, n);
  EchelonBasis cols(f, n);
  int placed = 0;
  for (const auto& v : search.basis) {
    check_internal(cols.insert(v), "invariant basis not independent");
    for (int r = 0; r < n; ++r) q.set(r, placed, v[static_cast<std::size_t>(r)]);
    ++placed;
  }
  for (int i = 0; i < n && placed < n; ++i) {
    std::vector<Scalar> e(static_cast<std::size_t>(n), f.zero());
    e[static_cast<std::size_t>(i)] = f.one();
    if (!cols.insert(e)) continue;
    q.set(i, placed, f.one());
    ++placed;
  }
  check_internal(placed == n, "failed to complete invariant basis");
  Mat q_inv = inverse(q);

  std::vector<Mat> conj;
  conj.reserve(gens.size());
  for (const Mat& g : gens) {
    Mat c = q_inv * g * q;
    check_internal(is_block_upper_triangular(c, {m, n - m}),
                   "conjugation did not produce the expected zero block");
    conj.push_back(std::move(c));
  }

  std::vector<Mat> top, bottom;
  for (const Mat& c : conj) {
    top.push_back(c.block(0, 0, m, m));
    bottom.push_back(c.block(m, m, n - m, n - m));
  }
  FlagDecomposition fa = triangularize_rec(top, depth + 1);
  FlagDecomposition fc = triangularize_rec(bottom, depth + 1);

  Mat refine = block_diag2(fa.q, fc.q);
  Mat refine_inv = block_diag2(fa.q_inv, fc.q_inv);
  Mat q_total = q * refine;
  Mat q_inv_total = refine_inv * q_inv;
  check_internal((q_total * q_inv_total).is_identity(), "flag basis change not invertible");

  std::vector<int> sizes = fa.block_sizes;
  sizes.insert(sizes.end(), fc.block_sizes.begin(), fc.block_sizes.end());

  std::vector<Mat> final_conj;
  final_conj.reserve(gens.size());
  for (const Mat& g : gens) {
    Mat c = q_inv_total * g * q_total;
    check_internal(is_block_upper_triangular(c, sizes),
                   "refined conjugation lost block triangularity");
    final_conj.push_back(std::move(c));
  }
  return FlagDecomposition(std::move(q_total), std::move(q_inv_total), std::move(sizes),
                           std::move(final_conj));
}

}  // namespace

FlagDecomposition triangularize(const std::vector<Mat>& gens) {
  validate_gens(gens);
  return triangularize_rec(gens, 0);
}

}  // namespace burnside
