#include "burnside/field.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>
#include <utility>

namespace burnside {

const char* errc_name(Errc code) noexcept {
  switch (code) {
    case Errc::NonPrimeModulus: return "NonPrimeModulus";
    case Errc::ReducibleModulusPolynomial: return "ReducibleModulusPolynomial";
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::ShapeMismatch: return "ShapeMismatch";
    case Errc::FieldMismatch: return "FieldMismatch";
    case Errc::SingularMatrix: return "SingularMatrix";
    case Errc::NotAHomomorphism: return "NotAHomomorphism";
    case Errc::EmptyPreimage: return "EmptyPreimage";
    case Errc::NonComposable: return "NonComposable";
    case Errc::ModeUnavailable: return "ModeUnavailable";
    case Errc::DoesNotSpan: return "DoesNotSpan";
    case Errc::DegenerateGram: return "DegenerateGram";
    case Errc::NotInSpan: return "NotInSpan";
    case Errc::NotInStabilizer: return "NotInStabilizer";
    case Errc::LimitExceeded: return "LimitExceeded";
    case Errc::ParseError: return "ParseError";
    case Errc::Internal: return "Internal";
  }
  return "Unknown";
}

Error::Error(Errc code, const std::string& message)
    : std::runtime_error(std::string(errc_name(code)) + ": " + message), code_(code) {}

void fail(Errc code, const std::string& message) { throw Error(code, message); }

namespace {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

u64 mulmod(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod(u64 a, u64 e, u64 m) {
  u64 r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod(r, a, m);
    a = mulmod(a, a, m);
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 p) {
  // Extended Euclid; a nonzero mod prime p.
  std::int64_t t = 0, newt = 1;
  std::int64_t r = static_cast<std::int64_t>(p), newr = static_cast<std::int64_t>(a % p);
  while (newr != 0) {
    std::int64_t q = r / newr;
    t = std::exchange(newt, t - q * newt);
    r = std::exchange(newr, r - q * newr);
  }
  check_internal(r == 1, "invmod of non-unit");
  if (t < 0) t += static_cast<std::int64_t>(p);
  return static_cast<u64>(t);
}

// Polynomials over GF(p), coefficient c[i] on x^i, no trailing zeros enforced
// by trim(). Degree of the zero polynomial is -1.
using Poly = std::vector<u64>;

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

int deg(const Poly& f) { return static_cast<int>(f.size()) - 1; }

Poly poly_mul(const Poly& a, const Poly& b, u64 p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) {
      r[i + j] = (r[i + j] + u128(a[i]) * b[j]) % p;
    }
  }
  trim(r);
  return r;
}

// Remainder of f modulo g (g nonzero). In-place long division.
Poly poly_rem(Poly f, const Poly& g, u64 p) {
  trim(f);
  check_internal(!g.empty(), "poly_rem by zero");
  u64 lead_inv = invmod(g.back(), p);
  while (deg(f) >= deg(g)) {
    u64 c = mulmod(f.back(), lead_inv, p);
    std::size_t shift = f.size() - g.size();
    for (std::size_t i = 0; i < g.size(); ++i) {
      u64 sub = mulmod(c, g[i], p);
      f[shift + i] = (f[shift + i] + p - sub) % p;
    }
    trim(f);
  }
  return f;
}

bool poly_is_zero(const Poly& f) { return f.empty(); }

// Trial factorization: f (monic, degree >= 1) is reducible iff some monic
// polynomial of degree 1..deg(f)/2 divides it.
bool poly_irreducible(const Poly& f, u64 p) {
  int k = deg(f);
  check_internal(k >= 1, "irreducibility of constant");
  if (k == 1) return true;
  double budget = 0;
  for (int d = 1; d <= k / 2; ++d) budget += std::pow(double(p), d);
  if (budget > 2e7) {
    fail(Errc::LimitExceeded, "modulus irreducibility trial factorization too large for p=" +
                                  std::to_string(p) + ", k=" + std::to_string(k));
  }
  for (int d = 1; d <= k / 2; ++d) {
    // Odometer over the lower coefficients of a monic degree-d candidate.
    std::vector<u64> c(static_cast<std::size_t>(d), 0);
    while (true) {
      Poly g(c);
      g.push_back(1);
      if (poly_is_zero(poly_rem(f, g, p))) return false;
      int i = 0;
      while (i < d && ++c[static_cast<std::size_t>(i)] == p) {
        c[static_cast<std::size_t>(i)] = 0;
        ++i;
      }
      if (i == d) break;
    }
  }
  return true;
}

}  // namespace

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 q : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic Miller-Rabin base set for 64-bit inputs.
  for (u64 a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    u64 x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 1; i < s; ++i) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

struct Field::Rep {
  FieldKind kind;
  u64 p = 0;                        // characteristic, 0 for the rationals
  std::vector<u64> modulus;         // monic, c_0..c_k, finite fields only
  std::size_t k = 1;                // extension degree
};

Field Field::rationals() {
  static const auto rep = std::make_shared<const Rep>(Rep{FieldKind::Rationals, 0, {}, 1});
  return Field(rep);
}

Field Field::prime(u64 p) {
  if (!is_prime_u64(p)) fail(Errc::NonPrimeModulus, std::to_string(p) + " is not prime");
  auto rep = std::make_shared<Rep>();
  rep->kind = FieldKind::Finite;
  rep->p = p;
  rep->modulus = {0, 1};  // x
  rep->k = 1;
  return Field(rep);
}

Field Field::extension(u64 p, std::size_t k) {
  if (!is_prime_u64(p)) fail(Errc::NonPrimeModulus, std::to_string(p) + " is not prime");
  if (k == 0) fail(Errc::ParseError, "extension degree must be >= 1");
  if (k == 1) return prime(p);
  // Scan lower-coefficient vectors in base-p counting order; the first
  // irreducible candidate is the canonical modulus for GF(p^k).
  std::vector<u64> c(k, 0);
  while (true) {
    Poly f(c);
    f.push_back(1);
    if (poly_irreducible(f, p)) {
      auto rep = std::make_shared<Rep>();
      rep->kind = FieldKind::Finite;
      rep->p = p;
      rep->modulus = f;
      rep->k = k;
      return Field(rep);
    }
    std::size_t i = 0;
    while (i < k && ++c[i] == p) {
      c[i] = 0;
      ++i;
    }
    check_internal(i < k, "no irreducible modulus found");
  }
}

Field Field::extension(u64 p, std::vector<u64> modulus) {
  if (!is_prime_u64(p)) fail(Errc::NonPrimeModulus, std::to_string(p) + " is not prime");
  if (modulus.size() < 2) fail(Errc::ParseError, "modulus must have degree >= 1");
  for (auto& c : modulus) c %= p;
  if (modulus.back() != 1) fail(Errc::ParseError, "modulus must be monic");
  if (!poly_irreducible(modulus, p)) {
    fail(Errc::ReducibleModulusPolynomial, "modulus polynomial is reducible over GF(" +
                                               std::to_string(p) + ")");
  }
  auto rep = std::make_shared<Rep>();
  rep->kind = FieldKind::Finite;
  rep->p = p;
  rep->k = modulus.size() - 1;
  rep->modulus = std::move(modulus);
  return Field(rep);
}

FieldKind Field::kind() const noexcept { return rep_->kind; }
std::uint64_t Field::characteristic() const noexcept { return rep_->p; }
std::size_t Field::degree() const noexcept { return rep_->k; }

const std::vector<u64>& Field::modulus() const {
  if (!is_finite()) fail(Errc::ModeUnavailable, "modulus of the rationals");
  return rep_->modulus;
}

mpz_class Field::order() const {
  if (!is_finite()) fail(Errc::ModeUnavailable, "order of an infinite field");
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), rep_->p, rep_->k);
  return r;
}

Scalar Field::zero() const { return from_int(0); }
Scalar Field::one() const { return from_int(1); }

Scalar Field::from_int(long v) const {
  if (is_rationals()) return Scalar(*this, mpq_class(v));
  u64 p = rep_->p;
  u64 r = static_cast<u64>(((v % static_cast<long long>(p)) + static_cast<long long>(p))) % p;
  std::vector<u64> c(rep_->k, 0);
  c[0] = r;
  return Scalar(*this, std::move(c));
}

Scalar Field::from_rational(const mpq_class& q) const {
  if (!is_rationals()) fail(Errc::FieldMismatch, "rational value in a finite field");
  mpq_class canon(q);
  canon.canonicalize();
  return Scalar(*this, std::move(canon));
}

Scalar Field::from_coeffs(std::vector<std::int64_t> coeffs) const {
  if (!is_finite()) fail(Errc::FieldMismatch, "coefficient vector over the rationals");
  if (coeffs.size() > rep_->k) {
    fail(Errc::ParseError, "coefficient list longer than extension degree");
  }
  std::vector<u64> c(rep_->k, 0);
  auto p = static_cast<std::int64_t>(rep_->p);
  for (std::size_t i = 0; i < coeffs.size(); ++i) {
    c[i] = static_cast<u64>(((coeffs[i] % p) + p) % p);
  }
  return Scalar(*this, std::move(c));
}

Scalar Field::element(const mpz_class& index) const {
  if (!is_finite()) fail(Errc::ModeUnavailable, "element enumeration over the rationals");
  if (index < 0 || index >= order()) fail(Errc::ParseError, "element index out of range");
  mpz_class rest(index);
  std::vector<u64> c(rep_->k, 0);
  mpz_class p(static_cast<unsigned long>(rep_->p));
  for (std::size_t i = 0; i < rep_->k; ++i) {
    mpz_class digit = rest % p;
    c[i] = digit.get_ui();
    rest /= p;
  }
  return Scalar(*this, std::move(c));
}

std::vector<Scalar> Field::elements(std::size_t max_count) const {
  if (!is_finite()) fail(Errc::ModeUnavailable, "element enumeration over the rationals");
  mpz_class n = order();
  if (n > static_cast<unsigned long>(max_count)) {
    fail(Errc::LimitExceeded, "field too large to enumerate: order " + n.get_str());
  }
  std::vector<Scalar> out;
  out.reserve(n.get_ui());
  for (unsigned long i = 0; i < n.get_ui(); ++i) out.push_back(element(mpz_class(i)));
  return out;
}

namespace {

bool parse_int_text(std::string_view s, mpz_class& out) {
  std::size_t i = 0;
  if (i < s.size() && (s[i] == '+' || s[i] == '-')) ++i;
  if (i == s.size()) return false;
  for (std::size_t j = i; j < s.size(); ++j) {
    if (!std::isdigit(static_cast<unsigned char>(s[j]))) return false;
  }
  out = mpz_class(std::string(s), 10);
  return true;
}

std::string_view strip(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

u64 reduce_mpz(const mpz_class& v, u64 p) {
  mpz_class m = v % mpz_class(static_cast<unsigned long>(p));
  if (m < 0) m += static_cast<unsigned long>(p);
  return m.get_ui();
}

}  // namespace

Scalar Field::parse(std::string_view text) const {
  std::string_view s = strip(text);
  if (s.empty()) fail(Errc::ParseError, "empty scalar text");
  if (is_rationals()) {
    auto slash = s.find('/');
    mpz_class num, den(1);
    if (slash == std::string_view::npos) {
      if (!parse_int_text(s, num)) fail(Errc::ParseError, "bad rational: " + std::string(text));
    } else {
      if (!parse_int_text(strip(s.substr(0, slash)), num) ||
          !parse_int_text(strip(s.substr(slash + 1)), den)) {
        fail(Errc::ParseError, "bad rational: " + std::string(text));
      }
      if (den == 0) fail(Errc::ParseError, "zero denominator: " + std::string(text));
    }
    mpq_class q(num, den);
    q.canonicalize();
    return Scalar(*this, std::move(q));
  }
  if (s.front() == '[') {
    if (s.back() != ']') fail(Errc::ParseError, "unterminated coefficient list");
    std::string_view body = s.substr(1, s.size() - 2);
    std::vector<std::int64_t> coeffs;
    std::size_t start = 0;
    std::string body_str(body);
    if (!strip(body).empty()) {
      while (start <= body_str.size()) {
        auto comma = body_str.find(',', start);
        std::string piece = body_str.substr(
            start, comma == std::string::npos ? std::string::npos : comma - start);
        mpz_class v;
        if (!parse_int_text(strip(piece), v)) {
          fail(Errc::ParseError, "bad coefficient: " + piece);
        }
        coeffs.push_back(static_cast<std::int64_t>(reduce_mpz(v, rep_->p)));
        if (comma == std::string::npos) break;
        start = comma + 1;
      }
    }
    return from_coeffs(std::move(coeffs));
  }
  mpz_class v;
  if (!parse_int_text(s, v)) fail(Errc::ParseError, "bad scalar: " + std::string(text));
  std::vector<u64> c(rep_->k, 0);
  c[0] = reduce_mpz(v, rep_->p);
  return Scalar(*this, std::move(c));
}

bool Field::operator==(const Field& other) const noexcept {
  if (rep_ == other.rep_) return true;
  if (rep_->kind != other.rep_->kind) return false;
  if (rep_->kind == FieldKind::Rationals) return true;
  return rep_->p == other.rep_->p && rep_->modulus == other.rep_->modulus;
}

std::string Field::describe() const {
  if (is_rationals()) return "Q";
  std::ostringstream os;
  if (rep_->k == 1) {
    os << "GF(" << rep_->p << ")";
  } else {
    os << "GF(" << rep_->p << "^" << rep_->k << "; modulus=[";
    for (std::size_t i = 0; i < rep_->modulus.size(); ++i) {
      if (i) os << ",";
      os << rep_->modulus[i];
    }
    os << "])";
  }
  return os.str();
}

Scalar::Scalar(Field f, mpq_class q) : field_(std::move(f)), v_(std::move(q)) {}
Scalar::Scalar(Field f, std::vector<u64> coeffs) : field_(std::move(f)), v_(std::move(coeffs)) {}

namespace {

void require_same_field(const Scalar& a, const Scalar& b) {
  if (a.field() != b.field()) {
    fail(Errc::FieldMismatch,
         a.field().describe() + " vs " + b.field().describe());
  }
}

}  // namespace

Scalar Scalar::operator+(const Scalar& other) const {
  require_same_field(*this, other);
  if (field_.is_rationals()) {
    return Scalar(field_, mpq_class(rational() + other.rational()));
  }
  u64 p = field_.characteristic();
  std::vector<u64> c(coeffs());
  for (std::size_t i = 0; i < c.size(); ++i) c[i] = (c[i] + other.coeffs()[i]) % p;
  return Scalar(field_, std::move(c));
}

Scalar Scalar::operator-() const {
  if (field_.is_rationals()) return Scalar(field_, mpq_class(-rational()));
  u64 p = field_.characteristic();
  std::vector<u64> c(coeffs());
  for (auto& x : c) x = (p - x) % p;
  return Scalar(field_, std::move(c));
}

Scalar Scalar::operator-(const Scalar& other) const { return *this + (-other); }

Scalar Scalar::operator*(const Scalar& other) const {
  require_same_field(*this, other);
  if (field_.is_rationals()) {
    return Scalar(field_, mpq_class(rational() * other.rational()));
  }
  u64 p = field_.characteristic();
  const auto& mod = field_.modulus();
  std::size_t k = field_.degree();
  if (k == 1) {
    std::vector<u64> c{mulmod(coeffs()[0], other.coeffs()[0], p)};
    return Scalar(field_, std::move(c));
  }
  std::vector<u64> prod(2 * k - 1, 0);
  for (std::size_t i = 0; i < k; ++i) {
    if (coeffs()[i] == 0) continue;
    for (std::size_t j = 0; j < k; ++j) {
      prod[i + j] = (prod[i + j] + u128(coeffs()[i]) * other.coeffs()[j]) % p;
    }
  }
  // Reduce modulo the monic modulus: x^k = -(c_0 + ... + c_{k-1} x^{k-1}).
  for (std::size_t i = 2 * k - 2; i >= k; --i) {
    u64 c = prod[i];
    if (c == 0) continue;
    prod[i] = 0;
    for (std::size_t j = 0; j < k; ++j) {
      u64 sub = mulmod(c, mod[j], p);
      prod[i - k + j] = (prod[i - k + j] + p - sub) % p;
    }
  }
  prod.resize(k);
  return Scalar(field_, std::move(prod));
}

Scalar Scalar::inverse() const {
  if (is_zero()) fail(Errc::DivisionByZero, "inverse of zero");
  if (field_.is_rationals()) {
    return Scalar(field_, mpq_class(1 / rational()));
  }
  u64 p = field_.characteristic();
  std::size_t k = field_.degree();
  if (k == 1) {
    return Scalar(field_, std::vector<u64>{invmod(coeffs()[0], p)});
  }
  // Extended Euclid over GF(p)[x]: find u with u*this == 1 (mod modulus).
  Poly r0(field_.modulus());
  Poly r1(coeffs());
  trim(r1);
  Poly t0, t1{1};
  while (!poly_is_zero(r1)) {
    // Divide r0 by r1.
    Poly q;
    Poly rem(r0);
    u64 lead_inv = invmod(r1.back(), p);
    q.assign(r0.size(), 0);
    while (deg(rem) >= deg(r1)) {
      u64 c = mulmod(rem.back(), lead_inv, p);
      std::size_t shift = rem.size() - r1.size();
      q[shift] = c;
      for (std::size_t i = 0; i < r1.size(); ++i) {
        u64 sub = mulmod(c, r1[i], p);
        rem[shift + i] = (rem[shift + i] + p - sub) % p;
      }
      trim(rem);
    }
    trim(q);
    Poly qt1 = poly_mul(q, t1, p);
    Poly nt(std::max(t0.size(), qt1.size()), 0);
    for (std::size_t i = 0; i < nt.size(); ++i) {
      u64 a = i < t0.size() ? t0[i] : 0;
      u64 b = i < qt1.size() ? qt1[i] : 0;
      nt[i] = (a + p - b) % p;
    }
    trim(nt);
    t0 = std::move(t1);
    t1 = std::move(nt);
    r0 = std::move(r1);
    r1 = std::move(rem);
  }
  check_internal(deg(r0) == 0, "gcd with modulus not constant");
  u64 scale = invmod(r0[0], p);
  std::vector<u64> out(k, 0);
  for (std::size_t i = 0; i < t0.size(); ++i) out[i] = mulmod(t0[i], scale, p);
  return Scalar(field_, std::move(out));
}

Scalar Scalar::pow(std::uint64_t e) const {
  Scalar base(*this);
  Scalar acc = field_.one();
  while (e) {
    if (e & 1) acc = acc * base;
    base = base * base;
    e >>= 1;
  }
  return acc;
}

bool Scalar::is_zero() const noexcept {
  if (field_.is_rationals()) return std::get<mpq_class>(v_) == 0;
  const auto& c = std::get<std::vector<u64>>(v_);
  return std::all_of(c.begin(), c.end(), [](u64 x) { return x == 0; });
}

bool Scalar::is_one() const noexcept {
  if (field_.is_rationals()) return std::get<mpq_class>(v_) == 1;
  const auto& c = std::get<std::vector<u64>>(v_);
  if (c[0] != 1) return false;
  return std::all_of(c.begin() + 1, c.end(), [](u64 x) { return x == 0; });
}

bool Scalar::operator==(const Scalar& other) const {
  require_same_field(*this, other);
  return v_ == other.v_;
}

bool Scalar::operator<(const Scalar& other) const {
  require_same_field(*this, other);
  if (field_.is_rationals()) return rational() < other.rational();
  const auto& a = coeffs();
  const auto& b = other.coeffs();
  // Enumeration-index order: compare most significant coefficient first.
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != b[i]) return a[i] < b[i];
  }
  return false;
}

std::string Scalar::str() const {
  if (field_.is_rationals()) {
    const auto& q = rational();
    if (q.get_den() == 1) return q.get_num().get_str();
    return q.get_num().get_str() + "/" + q.get_den().get_str();
  }
  const auto& c = coeffs();
  if (field_.degree() == 1) return std::to_string(c[0]);
  std::string out = "[";
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) out += ",";
    out += std::to_string(c[i]);
  }
  out += "]";
  return out;
}

const mpq_class& Scalar::rational() const {
  if (!field_.is_rationals()) fail(Errc::ModeUnavailable, "rational() on a finite-field scalar");
  return std::get<mpq_class>(v_);
}

const std::vector<u64>& Scalar::coeffs() const {
  if (!field_.is_finite()) fail(Errc::ModeUnavailable, "coeffs() on a rational scalar");
  return std::get<std::vector<u64>>(v_);
}

mpz_class Scalar::index() const {
  const auto& c = coeffs();
  mpz_class r = 0;
  mpz_class p(static_cast<unsigned long>(field_.characteristic()));
  for (std::size_t i = c.size(); i-- > 0;) {
    r = r * p + static_cast<unsigned long>(c[i]);
  }
  return r;
}

bool Scalar::is_integral() const {
  if (field_.is_rationals()) return rational().get_den() == 1;
  const auto& c = coeffs();
  return std::all_of(c.begin() + 1, c.end(), [](u64 x) { return x == 0; });
}

}  // namespace burnside
