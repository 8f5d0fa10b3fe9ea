#include "burnside/matrix.hpp"

#include <map>
#include <sstream>

namespace burnside {

namespace {

void require_same_field(const Mat& a, const Mat& b) {
  if (a.field() != b.field()) {
    fail(Errc::FieldMismatch, a.field().describe() + " vs " + b.field().describe());
  }
}

}  // namespace

Mat::Mat(Field field, int rows, int cols)
    : field_(std::move(field)), rows_(rows), cols_(cols) {
  if (rows < 0 || cols < 0) fail(Errc::ShapeMismatch, "negative dimension");
  e_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), field_.zero());
}

Mat Mat::identity(const Field& field, int n) {
  Mat m(field, n, n);
  for (int i = 0; i < n; ++i) m.set(i, i, field.one());
  return m;
}

const Scalar& Mat::at(int r, int c) const {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) fail(Errc::ShapeMismatch, "index out of range");
  return e_[static_cast<std::size_t>(r) * cols_ + c];
}

void Mat::set(int r, int c, Scalar v) {
  if (r < 0 || r >= rows_ || c < 0 || c >= cols_) fail(Errc::ShapeMismatch, "index out of range");
  if (v.field() != field_) fail(Errc::FieldMismatch, "entry field differs from matrix field");
  e_[static_cast<std::size_t>(r) * cols_ + c] = std::move(v);
}

Mat Mat::operator*(const Mat& other) const {
  require_same_field(*this, other);
  if (cols_ != other.rows_) {
    fail(Errc::ShapeMismatch, "product of " + std::to_string(rows_) + "x" + std::to_string(cols_) +
                                  " by " + std::to_string(other.rows_) + "x" +
                                  std::to_string(other.cols_));
  }
  Mat r(field_, rows_, other.cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int k = 0; k < cols_; ++k) {
      const Scalar& aik = at(i, k);
      if (aik.is_zero()) continue;
      for (int j = 0; j < other.cols_; ++j) {
        const Scalar& bkj = other.at(k, j);
        if (bkj.is_zero()) continue;
        r.set(i, j, r.at(i, j) + aik * bkj);
      }
    }
  }
  return r;
}

Mat Mat::operator+(const Mat& other) const {
  require_same_field(*this, other);
  if (rows_ != other.rows_ || cols_ != other.cols_) fail(Errc::ShapeMismatch, "sum shape mismatch");
  Mat r(field_, rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) r.set(i, j, at(i, j) + other.at(i, j));
  }
  return r;
}

Mat Mat::operator-(const Mat& other) const { return *this + other.scaled(-field_.one()); }

Mat Mat::scaled(const Scalar& c) const {
  if (c.field() != field_) fail(Errc::FieldMismatch, "scale factor field differs");
  Mat r(field_, rows_, cols_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) r.set(i, j, at(i, j) * c);
  }
  return r;
}

bool Mat::operator==(const Mat& other) const {
  if (field_ != other.field_ || rows_ != other.rows_ || cols_ != other.cols_) return false;
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (!(e_[i] == other.e_[i])) return false;
  }
  return true;
}

Mat Mat::transpose() const {
  Mat r(field_, cols_, rows_);
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) r.set(j, i, at(i, j));
  }
  return r;
}

Scalar Mat::trace() const {
  if (!is_square()) fail(Errc::ShapeMismatch, "trace of a non-square matrix");
  Scalar t = field_.zero();
  for (int i = 0; i < rows_; ++i) t = t + at(i, i);
  return t;
}

bool Mat::is_identity() const {
  if (!is_square()) return false;
  for (int i = 0; i < rows_; ++i) {
    for (int j = 0; j < cols_; ++j) {
      if (i == j ? !at(i, j).is_one() : !at(i, j).is_zero()) return false;
    }
  }
  return true;
}

bool Mat::is_zero() const {
  for (const auto& x : e_) {
    if (!x.is_zero()) return false;
  }
  return true;
}

std::string Mat::key() const {
  std::string out = std::to_string(rows_) + "x" + std::to_string(cols_) + "|";
  for (std::size_t i = 0; i < e_.size(); ++i) {
    if (i) out += ",";
    out += e_[i].str();
  }
  return out;
}

Mat Mat::block(int r0, int c0, int h, int w) const {
  if (r0 < 0 || c0 < 0 || h < 0 || w < 0 || r0 + h > rows_ || c0 + w > cols_) {
    fail(Errc::ShapeMismatch, "block out of range");
  }
  Mat r(field_, h, w);
  for (int i = 0; i < h; ++i) {
    for (int j = 0; j < w; ++j) r.set(i, j, at(r0 + i, c0 + j));
  }
  return r;
}

void Mat::set_block(int r0, int c0, const Mat& m) {
  require_same_field(*this, m);
  if (r0 < 0 || c0 < 0 || r0 + m.rows() > rows_ || c0 + m.cols() > cols_) {
    fail(Errc::ShapeMismatch, "block out of range");
  }
  for (int i = 0; i < m.rows(); ++i) {
    for (int j = 0; j < m.cols(); ++j) set(r0 + i, c0 + j, m.at(i, j));
  }
}

std::vector<Scalar> Mat::row_vector(int r) const {
  std::vector<Scalar> v;
  v.reserve(static_cast<std::size_t>(cols_));
  for (int j = 0; j < cols_; ++j) v.push_back(at(r, j));
  return v;
}

std::vector<Scalar> Mat::col_vector(int c) const {
  std::vector<Scalar> v;
  v.reserve(static_cast<std::size_t>(rows_));
  for (int i = 0; i < rows_; ++i) v.push_back(at(i, c));
  return v;
}

std::vector<Scalar> Mat::vectorize() const { return e_; }

Scalar trace_form(const Mat& a, const Mat& b) {
  require_same_field(a, b);
  if (a.cols() != b.rows() || a.rows() != b.cols()) {
    fail(Errc::ShapeMismatch, "trace form shape mismatch");
  }
  Scalar t = a.field().zero();
  for (int i = 0; i < a.rows(); ++i) {
    for (int j = 0; j < a.cols(); ++j) t = t + a.at(i, j) * b.at(j, i);
  }
  return t;
}

RrefResult rank_rref_inverse(const Mat& a, bool want_inverse) {
  const Field& f = a.field();
  int rows = a.rows(), cols = a.cols();
  if (want_inverse && rows != cols) fail(Errc::SingularMatrix, "inverse of a non-square matrix");

  Mat work = a;
  std::optional<Mat> aug;
  if (want_inverse) aug = Mat::identity(f, rows);

  RrefResult out{a, 0, {}, std::nullopt};
  int pr = 0;
  for (int pc = 0; pc < cols && pr < rows; ++pc) {
    int pivot = -1;
    for (int r = pr; r < rows; ++r) {
      if (!work.at(r, pc).is_zero()) {
        pivot = r;
        break;
      }
    }
    if (pivot < 0) continue;
    if (pivot != pr) {
      for (int j = 0; j < cols; ++j) {
        Scalar tmp = work.at(pr, j);
        work.set(pr, j, work.at(pivot, j));
        work.set(pivot, j, tmp);
      }
      if (aug) {
        for (int j = 0; j < rows; ++j) {
          Scalar tmp = aug->at(pr, j);
          aug->set(pr, j, aug->at(pivot, j));
          aug->set(pivot, j, tmp);
        }
      }
    }
    Scalar inv = work.at(pr, pc).inverse();
    for (int j = 0; j < cols; ++j) work.set(pr, j, work.at(pr, j) * inv);
    if (aug) {
      for (int j = 0; j < rows; ++j) aug->set(pr, j, aug->at(pr, j) * inv);
    }
    for (int r = 0; r < rows; ++r) {
      if (r == pr) continue;
      Scalar factor = work.at(r, pc);
      if (factor.is_zero()) continue;
      for (int j = 0; j < cols; ++j) {
        work.set(r, j, work.at(r, j) - factor * work.at(pr, j));
      }
      if (aug) {
        for (int j = 0; j < rows; ++j) {
          aug->set(r, j, aug->at(r, j) - factor * aug->at(pr, j));
        }
      }
    }
    out.pivot_cols.push_back(pc);
    ++pr;
  }
  out.rank = pr;
  out.rref = std::move(work);
  if (want_inverse) {
    if (out.rank != rows) fail(Errc::SingularMatrix, "matrix is singular");
    out.inverse = std::move(aug);
  }
  return out;
}

Mat inverse(const Mat& a) { return *rank_rref_inverse(a, true).inverse; }

int rank(const Mat& a) { return rank_rref_inverse(a).rank; }

std::vector<std::vector<Scalar>> nullspace(const Mat& a) {
  RrefResult r = rank_rref_inverse(a);
  const Field& f = a.field();
  int cols = a.cols();
  std::vector<bool> is_pivot(static_cast<std::size_t>(cols), false);
  for (int pc : r.pivot_cols) is_pivot[static_cast<std::size_t>(pc)] = true;
  std::vector<std::vector<Scalar>> basis;
  for (int free = 0; free < cols; ++free) {
    if (is_pivot[static_cast<std::size_t>(free)]) continue;
    std::vector<Scalar> v(static_cast<std::size_t>(cols), f.zero());
    v[static_cast<std::size_t>(free)] = f.one();
    for (int i = 0; i < r.rank; ++i) {
      v[static_cast<std::size_t>(r.pivot_cols[static_cast<std::size_t>(i)])] =
          -r.rref.at(i, free);
    }
    basis.push_back(std::move(v));
  }
  return basis;
}

PowerPeriodResult power_period(const Mat& s, std::uint64_t cap) {
  if (!s.is_square()) fail(Errc::ShapeMismatch, "powers of a non-square matrix");
  PowerPeriodResult out;
  std::map<std::string, std::uint64_t> seen;  // key -> exponent
  Mat cur = s;
  for (std::uint64_t e = 1; e <= cap; ++e) {
    out.steps = e;
    auto [it, fresh] = seen.emplace(cur.key(), e);
    if (!fresh) {
      out.value = PowerPeriod{it->second, e - it->second};
      return out;
    }
    if (e == cap) break;
    cur = cur * s;
  }
  return out;
}

EchelonBasis::EchelonBasis(Field field, std::size_t width)
    : field_(std::move(field)), width_(width) {}

int EchelonBasis::reduce(std::vector<Scalar>& v) const {
  check_internal(v.size() == width_, "echelon vector width mismatch");
  for (std::size_t i = 0; i < rows_.size(); ++i) {
    const auto piv = static_cast<std::size_t>(pivots_[i]);
    if (v[piv].is_zero()) continue;
    Scalar c = v[piv];
    for (std::size_t j = piv; j < width_; ++j) {
      v[j] = v[j] - c * rows_[i][j];
    }
  }
  for (std::size_t j = 0; j < width_; ++j) {
    if (!v[j].is_zero()) return static_cast<int>(j);
  }
  return -1;
}

bool EchelonBasis::insert(std::vector<Scalar> v) {
  int piv = reduce(v);
  if (piv < 0) return false;
  Scalar inv = v[static_cast<std::size_t>(piv)].inverse();
  for (std::size_t j = static_cast<std::size_t>(piv); j < width_; ++j) v[j] = v[j] * inv;
  // Keep rows sorted by pivot so reduce() sweeps left to right.
  std::size_t pos = 0;
  while (pos < pivots_.size() && pivots_[pos] < piv) ++pos;
  rows_.insert(rows_.begin() + static_cast<std::ptrdiff_t>(pos), std::move(v));
  pivots_.insert(pivots_.begin() + static_cast<std::ptrdiff_t>(pos), piv);
  return true;
}

bool EchelonBasis::contains(std::vector<Scalar> v) const { return reduce(v) < 0; }

}  // namespace burnside
