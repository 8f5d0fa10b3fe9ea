#pragma once

#include <optional>
#include <vector>

#include "burnside/field.hpp"

namespace burnside {

// Dense row-major matrix over a Field. Shapes are part of every operation's
// contract; mismatches raise ShapeMismatch / FieldMismatch.
class Mat {
 public:
  Mat(Field field, int rows, int cols);  // zero-filled
  static Mat identity(const Field& field, int n);

  const Field& field() const noexcept { return field_; }
  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  bool is_square() const noexcept { return rows_ == cols_; }

  const Scalar& at(int r, int c) const;
  void set(int r, int c, Scalar v);

  Mat operator*(const Mat& other) const;
  Mat operator+(const Mat& other) const;
  Mat operator-(const Mat& other) const;
  Mat scaled(const Scalar& c) const;
  bool operator==(const Mat& other) const;
  bool operator!=(const Mat& other) const { return !(*this == other); }

  Mat transpose() const;
  Scalar trace() const;
  bool is_identity() const;
  bool is_zero() const;

  // Canonical interning key: "RxC|" followed by entry texts in row-major
  // order. Equal matrices over equal fields produce equal keys.
  std::string key() const;

  // Rectangular slice [r0, r0+h) x [c0, c0+w).
  Mat block(int r0, int c0, int h, int w) const;
  void set_block(int r0, int c0, const Mat& m);

  std::vector<Scalar> row_vector(int r) const;
  std::vector<Scalar> col_vector(int c) const;
  // Row-major flattening, length rows*cols.
  std::vector<Scalar> vectorize() const;

 private:
  Field field_;
  int rows_, cols_;
  std::vector<Scalar> e_;
};

// trace(a * b) computed without forming the product.
Scalar trace_form(const Mat& a, const Mat& b);

struct RrefResult {
  Mat rref;
  int rank = 0;
  std::vector<int> pivot_cols;
  std::optional<Mat> inverse;  // present iff requested and nonsingular
};

// Gauss-Jordan elimination, exact. Requesting the inverse of a singular or
// non-square matrix raises SingularMatrix.
RrefResult rank_rref_inverse(const Mat& a, bool want_inverse = false);
Mat inverse(const Mat& a);
int rank(const Mat& a);
// Basis of the right kernel {v : a v = 0}, one vector per free column.
std::vector<std::vector<Scalar>> nullspace(const Mat& a);

struct PowerPeriod {
  std::uint64_t index;   // least a >= 1 with s^a = s^(a+b)
  std::uint64_t period;  // least such b >= 1
};

struct PowerPeriodResult {
  std::optional<PowerPeriod> value;  // empty = cap exceeded, not a proof
  std::uint64_t steps = 0;           // powers actually formed
};

// Walks s^1, s^2, ... interning canonical keys until the first repeat or
// until cap powers have been formed.
PowerPeriodResult power_period(const Mat& s, std::uint64_t cap);

// Incremental row-echelon basis over a fixed-width coordinate space. insert()
// reduces the vector against the basis and keeps it iff independent.
class EchelonBasis {
 public:
  EchelonBasis(Field field, std::size_t width);

  bool insert(std::vector<Scalar> v);
  bool contains(std::vector<Scalar> v) const;
  int dim() const noexcept { return static_cast<int>(rows_.size()); }
  std::size_t width() const noexcept { return width_; }
  const std::vector<std::vector<Scalar>>& rows() const noexcept { return rows_; }
  const std::vector<int>& pivots() const noexcept { return pivots_; }

 private:
  // Reduces v in place; returns the first nonzero coordinate or -1.
  int reduce(std::vector<Scalar>& v) const;
  Field field_;
  std::size_t width_;
  std::vector<std::vector<Scalar>> rows_;  // each normalized to pivot 1
  std::vector<int> pivots_;
};

}  // namespace burnside
