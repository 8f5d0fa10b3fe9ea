#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "burnside/errors.hpp"

namespace burnside {

enum class FieldKind { Rationals, Finite };

class Scalar;

// A computation field: the rationals, or GF(p^k) represented as polynomial
// residues modulo a monic irreducible of degree k over GF(p). GF(p) is the
// k = 1 case with modulus x. Immutable and cheaply copyable.
class Field {
 public:
  static Field rationals();
  static Field prime(std::uint64_t p);
  // Modulus chosen deterministically: the monic irreducible of degree k whose
  // lower-coefficient vector is smallest as the base-p integer sum c_i * p^i.
  static Field extension(std::uint64_t p, std::size_t k);
  // Caller-supplied monic modulus c_0..c_k (c_k = 1), checked irreducible.
  static Field extension(std::uint64_t p, std::vector<std::uint64_t> modulus);

  FieldKind kind() const noexcept;
  bool is_rationals() const noexcept { return kind() == FieldKind::Rationals; }
  bool is_finite() const noexcept { return kind() == FieldKind::Finite; }
  std::uint64_t characteristic() const noexcept;  // 0 for the rationals
  std::size_t degree() const noexcept;            // k; 1 for the rationals
  const std::vector<std::uint64_t>& modulus() const;  // finite fields only
  mpz_class order() const;                             // finite fields only

  Scalar zero() const;
  Scalar one() const;
  Scalar from_int(long v) const;
  Scalar from_rational(const mpq_class& q) const;           // rationals only
  Scalar from_coeffs(std::vector<std::int64_t> coeffs) const;  // finite only
  // Element with the given enumeration index (coefficients base-p digits of
  // the index, c_0 least significant). Finite fields only.
  Scalar element(const mpz_class& index) const;
  // All field elements in enumeration-index order; guarded against large
  // fields (order must fit max_count).
  std::vector<Scalar> elements(std::size_t max_count = 4096) const;

  // Text forms: rationals "a" or "a/b"; GF(p) an integer; GF(p^k), k > 1,
  // "[c0,c1,...]" (short lists zero-padded).
  Scalar parse(std::string_view text) const;

  bool operator==(const Field& other) const noexcept;
  bool operator!=(const Field& other) const noexcept { return !(*this == other); }

  // Canonical one-line description, also the field component of cache keys.
  std::string describe() const;

 private:
  struct Rep;
  explicit Field(std::shared_ptr<const Rep> rep) : rep_(std::move(rep)) {}
  std::shared_ptr<const Rep> rep_;
  friend class Scalar;
};

bool is_prime_u64(std::uint64_t n);

// Immutable field element tagged with its field. All operators check field
// agreement and raise FieldMismatch on disagreement.
class Scalar {
 public:
  Scalar() = delete;

  const Field& field() const noexcept { return field_; }

  Scalar operator+(const Scalar& other) const;
  Scalar operator-(const Scalar& other) const;
  Scalar operator*(const Scalar& other) const;
  Scalar operator-() const;
  Scalar inverse() const;  // DivisionByZero on zero
  Scalar pow(std::uint64_t e) const;

  bool is_zero() const noexcept;
  bool is_one() const noexcept;
  bool operator==(const Scalar& other) const;
  bool operator!=(const Scalar& other) const { return !(*this == other); }
  // Total order within one field (rationals by value, finite fields by
  // enumeration index); used for canonical sorting of trace sets.
  bool operator<(const Scalar& other) const;

  // Canonical text form; round-trips through Field::parse.
  std::string str() const;

  const mpq_class& rational() const;                 // rationals only
  const std::vector<std::uint64_t>& coeffs() const;  // finite only, size k
  // Enumeration index sum coeffs[i] * p^i (finite fields only).
  mpz_class index() const;
  // True if the value lies in the prime subfield / is an integer rational.
  bool is_integral() const;

 private:
  friend class Field;
  Scalar(Field f, mpq_class q);
  Scalar(Field f, std::vector<std::uint64_t> coeffs);
  Field field_;
  std::variant<mpq_class, std::vector<std::uint64_t>> v_;
};

}  // namespace burnside
