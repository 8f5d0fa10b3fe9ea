#include "burnside/finiteness.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
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

std::uint64_t totient(std::uint64_t k) {
  std::uint64_t result = k;
  for (std::uint64_t p = 2; p * p <= k; ++p) {
    if (k % p) continue;
    while (k % p == 0) k /= p;
    result -= result / p;
  }
  if (k > 1) result -= result / k;
  return result;
}

bool admissible_rational_trace(const Scalar& tr, int n) {
  if (!tr.is_integral()) return false;
  mpq_class v = tr.rational();
  return v >= -n && v <= n;
}

}  // namespace

std::vector<std::uint64_t> unity_order_set(int n) {
  check_internal(n >= 1, "dimension must be positive");
  std::vector<std::uint64_t> out;
  const std::uint64_t hi = 2ull * static_cast<std::uint64_t>(n) * static_cast<std::uint64_t>(n) + 8;
  for (std::uint64_t k = 1; k <= hi; ++k)
    if (totient(k) <= static_cast<std::uint64_t>(n)) out.push_back(k);
  return out;
}

std::uint64_t rational_period_lcm(int n) {
  mpz_class l = 1;
  for (std::uint64_t k : unity_order_set(n)) {
    mpz_class kk = static_cast<unsigned long>(k);
    l = l / gcd(l, kk) * kk;
  }
  if (!l.fits_ulong_p()) return UINT64_MAX;
  return l.get_ui();
}

std::uint64_t certified_power_cap(int n, const Field& f) {
  if (f.is_rationals()) {
    std::uint64_t l = rational_period_lcm(n);
    if (l >= UINT64_MAX - static_cast<std::uint64_t>(n) - 1) return UINT64_MAX;
    return static_cast<std::uint64_t>(n) + l + 1;
  }
  // Every matrix over a finite field is periodic; a repeat must appear
  // within the ambient matrix count.
  mpz_class total;
  mpz_pow_ui(total.get_mpz_t(), f.order().get_mpz_t(),
             static_cast<unsigned long>(n) * static_cast<unsigned long>(n));
  total += 1;
  if (!total.fits_ulong_p()) return UINT64_MAX;
  return total.get_ui();
}

BurnsideBasisData burnside_basis(const FinMonoid& closure) {
  check_internal(closure.has_carrier(), "closure without matrix carrier");
  const Mat& first = closure.carrier(0);
  const Field f = first.field();
  const int n = first.rows();
  const int need = n * n;

  BurnsideBasisData data(f, need);
  EchelonBasis eb(f, static_cast<std::size_t>(need));
  for (std::size_t i = 0; i < closure.size(); ++i) {
    const Mat& s = closure.carrier(static_cast<int>(i));
    if (!eb.insert(s.vectorize())) continue;
    data.indices.push_back(static_cast<int>(i));
    data.words.push_back(closure.word(static_cast<int>(i)));
    data.basis.push_back(s);
    if (static_cast<int>(data.basis.size()) == need) break;
  }
  data.scanned = static_cast<int>(closure.size());
  if (static_cast<int>(data.basis.size()) < need)
    fail(Errc::DoesNotSpan, "closure spans only dimension " +
                                 std::to_string(data.basis.size()) + " of " +
                                 std::to_string(need));

  for (int i = 0; i < need; ++i)
    for (int j = 0; j < need; ++j)
      data.gram.set(i, j, trace_form(data.basis[static_cast<std::size_t>(i)],
                                     data.basis[static_cast<std::size_t>(j)]));
  try {
    data.gram_inv = inverse(data.gram);
  } catch (const Error& e) {
    if (e.code() == Errc::SingularMatrix)
      fail(Errc::DegenerateGram,
           "trace form singular on a full basis of the matrix algebra; "
           "the form should be perfect there");
    throw;
  }

  data.dual.reserve(static_cast<std::size_t>(need));
  for (int i = 0; i < need; ++i) {
    Mat d(f, n, n);
    for (int j = 0; j < need; ++j) {
      const Scalar& c = data.gram_inv.at(i, j);
      if (c.is_zero()) continue;
      d = d + data.basis[static_cast<std::size_t>(j)].scaled(c);
    }
    data.dual.push_back(std::move(d));
  }
  return data;
}

std::vector<Scalar> reconstruct_coeffs(const Mat& s, const BurnsideBasisData& data) {
  const Field& f = s.field();
  const int need = static_cast<int>(data.basis.size());
  std::vector<Scalar> coeffs;
  coeffs.reserve(static_cast<std::size_t>(need));
  for (int i = 0; i < need; ++i) {
    Scalar a = f.zero();
    for (int j = 0; j < need; ++j) {
      const Scalar& c = data.gram_inv.at(i, j);
      if (c.is_zero()) continue;
      a = a + c * trace_form(s, data.basis[static_cast<std::size_t>(j)]);
    }
    coeffs.push_back(std::move(a));
  }
  Mat rebuilt(f, s.rows(), s.cols());
  for (int i = 0; i < need; ++i) {
    if (coeffs[static_cast<std::size_t>(i)].is_zero()) continue;
    rebuilt = rebuilt + data.basis[static_cast<std::size_t>(i)].scaled(
                            coeffs[static_cast<std::size_t>(i)]);
  }
  if (rebuilt != s)
    fail(Errc::NotInSpan, "element is not in the span of the basis");
  return coeffs;
}

TraceSet trace_set(const std::vector<Mat>& elements) {
  TraceSet out;
  for (const Mat& m : elements) out.values.push_back(m.trace());
  std::sort(out.values.begin(), out.values.end());
  out.values.erase(std::unique(out.values.begin(), out.values.end()), out.values.end());
  out.count = static_cast<unsigned long>(out.values.size());
  out.enumerated = true;
  return out;
}

TraceSet admissible_traces(int n, const Field& f) {
  check_internal(n >= 1, "dimension must be positive");
  TraceSet out;
  out.enumerated = false;
  if (f.is_rationals()) {
    for (int v = -n; v <= n; ++v) out.values.push_back(f.from_int(v));
    out.count = static_cast<unsigned long>(out.values.size());
    out.unity_orders = unity_order_set(n);
    return out;
  }
  out.count = f.order();
  if (f.order() <= 4096) out.values = f.elements(4096);
  return out;
}

mpz_class irreducible_bound(const TraceSet& traces, int n) {
  mpz_class b;
  mpz_pow_ui(b.get_mpz_t(), traces.count.get_mpz_t(),
             static_cast<unsigned long>(n) * static_cast<unsigned long>(n));
  return b;
}

Mat block_trace_embedding(const Mat& m, const Mat& x, const Mat& y, const Mat& u, const Mat& v,
                          int top) {
  const int n = m.rows();
  if (m.cols() != n || top <= 0 || top >= n)
    fail(Errc::ShapeMismatch, "block split out of range");
  const int bot = n - top;
  if (x.rows() != top || x.cols() != top || u.rows() != top || u.cols() != top ||
      y.rows() != bot || y.cols() != bot || v.rows() != bot || v.cols() != bot)
    fail(Errc::ShapeMismatch, "stabilizer witness blocks have the wrong shape");
  Mat a = m.block(0, 0, top, top);
  Mat b = m.block(0, top, top, bot);
  Mat c = m.block(top, top, bot, bot);
  if (x * a != x || y * c != y)
    fail(Errc::NotInStabilizer, "row-side blocks are not fixed by the diagonal action");
  if (a * u != u || c * v != v)
    fail(Errc::NotInStabilizer, "column-side blocks are not fixed by the diagonal action");
  return x * b * v;
}

std::pair<TraceClass, std::uint64_t> trace_classification(const Field& f) {
  if (f.characteristic() == 0) return {TraceClass::Trivial, 0};
  return {TraceClass::ElementaryAbelianP, f.characteristic()};
}

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Finite: return "finite";
    case Verdict::NonPeriodicWitness: return "non-periodic-witness";
    case Verdict::Inconclusive: return "inconclusive";
  }
  return "inconclusive";
}

std::string word_string(const std::vector<int>& word) {
  if (word.empty()) return "1";
  std::ostringstream os;
  for (std::size_t i = 0; i < word.size(); ++i) {
    if (i) os << "*";
    os << "g" << (word[i] + 1);
  }
  return os.str();
}

Mat word_product(const std::vector<Mat>& gens, const std::vector<int>& word) {
  check_internal(!gens.empty(), "no generators");
  Mat p = Mat::identity(gens.front().field(), gens.front().rows());
  for (int g : word) {
    check_internal(g >= 0 && static_cast<std::size_t>(g) < gens.size(), "word index range");
    p = p * gens[static_cast<std::size_t>(g)];
  }
  return p;
}

namespace {

struct BlockWitness {
  std::vector<int> word;
  std::string reason;
};

// Elements scanned by the certified power walk on a partial closure; the
// walk itself is short (the certified cap), the scan count keeps the whole
// pass cheap.
constexpr std::size_t kPowerScanLimit = 500;
constexpr std::size_t kReconstructionCheckLimit = 5000;

// Per-element certified periodicity scan over the rationals; only partial
// closures can contain a non-periodic element.
std::optional<BlockWitness> scan_powers_rational(const FinMonoid& closure, int n,
                                                 const Field& f) {
  const std::uint64_t cap = certified_power_cap(n, f);
  const std::size_t limit = std::min(closure.size(), kPowerScanLimit);
  for (std::size_t i = 0; i < limit; ++i) {
    auto pr = power_period(closure.carrier(static_cast<int>(i)), cap);
    if (!pr.value)
      return BlockWitness{closure.word(static_cast<int>(i)),
                          "powers stay distinct beyond the certified periodicity cap"};
  }
  return std::nullopt;
}

std::optional<BlockWitness> screen_traces_rational(const FinMonoid& closure, int n) {
  for (std::size_t i = 0; i < closure.size(); ++i) {
    const Scalar tr = closure.carrier(static_cast<int>(i)).trace();
    if (admissible_rational_trace(tr, n)) continue;
    check_internal(!closure.complete(),
                   "complete closure contains a trace outside the admissible range");
    return BlockWitness{closure.word(static_cast<int>(i)),
                        "trace outside the admissible integer range"};
  }
  return std::nullopt;
}

std::vector<Mat> lift_to_extension(const std::vector<Mat>& gens, const Field& ext) {
  std::vector<Mat> out;
  out.reserve(gens.size());
  for (const Mat& g : gens) {
    Mat m(ext, g.rows(), g.cols());
    for (int r = 0; r < g.rows(); ++r)
      for (int c = 0; c < g.cols(); ++c) {
        const auto& cs = g.at(r, c).coeffs();
        check_internal(cs.size() == 1, "extension lift expects a prime-field entry");
        m.set(r, c, ext.from_int(static_cast<long>(cs[0])));
      }
    out.push_back(std::move(m));
  }
  return out;
}

BlockReport analyze_block(int index, const std::vector<Mat>& bgens, const Limits& limits,
                          std::optional<BlockWitness>& sink, int depth);

// Re-triangularizes prime-field block generators over GF(p^k) for rising k
// until they split, then analyzes the pieces.
bool try_extension_split(BlockReport& br, const std::vector<Mat>& bgens, const Limits& limits,
                         int depth) {
  const Field& f = bgens.front().field();
  const int nb = bgens.front().rows();
  for (int k = 2; k <= nb; ++k) {
    Field ext = Field::extension(f.characteristic(), k);
    std::vector<Mat> lifted = lift_to_extension(bgens, ext);
    FlagDecomposition flag = triangularize(lifted);
    if (flag.block_sizes.size() < 2) continue;
    br.path = "extension";
    br.ext_field = ext;
    br.ext_block_sizes = flag.block_sizes;
    std::optional<BlockWitness> unused;  // finite field: no witnesses arise
    for (std::size_t j = 0; j < flag.block_sizes.size(); ++j) {
      std::vector<Mat> sub;
      sub.reserve(flag.conjugated.size());
      for (const Mat& c : flag.conjugated)
        sub.push_back(diag_block(c, flag.block_sizes, static_cast<int>(j)));
      br.sub_blocks.push_back(
          analyze_block(static_cast<int>(j), sub, limits, unused, depth + 1));
    }
    return true;
  }
  return false;
}

BlockReport analyze_block(int index, const std::vector<Mat>& bgens, const Limits& limits,
                          std::optional<BlockWitness>& sink, int depth) {
  check_internal(depth <= 8, "block analysis recursion depth");
  const Field f = bgens.front().field();
  const int nb = bgens.front().rows();

  BlockReport br;
  br.index = index;
  br.size = nb;

  SpanningCheck span = spanning_check(bgens);
  br.spans = span.spans;
  br.algebra_dim = span.dim;

  ClosureResult cl = close_matrices(bgens, limits);
  if (cl.stats.complete) br.order = cl.monoid.size();

  if (f.is_rationals()) {
    if (auto w = screen_traces_rational(cl.monoid, nb)) {
      sink = std::move(w);
      br.path = "incomplete";
      br.note = "non-periodicity witnessed inside this block";
      return br;
    }
    if (!cl.stats.complete) {
      if (auto w = scan_powers_rational(cl.monoid, nb, f)) {
        sink = std::move(w);
        br.path = "incomplete";
        br.note = "non-periodicity witnessed inside this block";
        return br;
      }
    }
  }

  if (span.spans) {
    try {
      BurnsideBasisData bb = burnside_basis(cl.monoid);
      if (cl.stats.complete) {
        std::vector<Mat> elements;
        elements.reserve(cl.monoid.size());
        for (std::size_t i = 0; i < cl.monoid.size(); ++i)
          elements.push_back(cl.monoid.carrier(static_cast<int>(i)));
        TraceSet t = trace_set(elements);
        br.bound = irreducible_bound(t, nb);
        br.traces = std::move(t);
        br.path = "basis";
        check_internal(mpz_class(static_cast<unsigned long>(*br.order)) <= *br.bound,
                       "block order exceeds its trace bound");
      } else {
        TraceSet t = admissible_traces(nb, f);
        br.bound = irreducible_bound(t, nb);
        br.traces = std::move(t);
        br.path = "basis-apriori";
        br.note = "closure incomplete; bound uses the a priori trace set";
      }
      const std::size_t cap = std::min(cl.monoid.size(), kReconstructionCheckLimit);
      for (std::size_t i = 0; i < cap; ++i)
        reconstruct_coeffs(cl.monoid.carrier(static_cast<int>(i)), bb);
      br.basis = std::move(bb);
    } catch (const Error& e) {
      if (e.code() != Errc::DoesNotSpan) throw;
      br.path = "incomplete";
      br.note = "spanning algebra, but the element budget ended before a basis";
    }
    return br;
  }

  if (f.is_finite() && f.degree() == 1 && nb >= 2) {
    if (try_extension_split(br, bgens, limits, depth)) return br;
    br.path = "closure";
    br.note = "no splitting found over the tested extensions";
    return br;
  }

  br.path = "closure";
  br.note = f.is_rationals() ? "bound path unavailable over the rationals without spanning"
                             : "no further extension attempted";
  return br;
}

void kernel_cross_check(FinitenessReport& rep, const std::vector<Mat>& gens,
                        const FinMonoid& closure, const Limits& limits) {
  const FlagDecomposition& flag = *rep.flag;
  if (flag.block_sizes.size() < 2) {
    rep.kernel_note = "single diagonal block; no kernel split to check";
    return;
  }
  if (closure.size() > 20000) {
    rep.kernel_note = "closure too large for the kernel cross check";
    return;
  }
  const Field& f = gens.front().field();
  const int n = gens.front().rows();
  const int top = flag.block_sizes.front();

  auto block_res = KernelContext::block(f, top, n - top, flag.conjugated, limits);
  if (!block_res.context) {
    rep.kernel_note = "diagonal closure exceeded its budget";
    return;
  }
  const KernelContext& ctx = *block_res.context;
  if (ctx.n_monoid().size() > 64) {
    rep.kernel_note = "diagonal monoid too large for the kernel cross check";
    return;
  }

  KernelFiniteness kf = finiteness_via_kernel(ctx, limits);
  if (!kf.certifying) {
    rep.kernel_note = "kernel closure exceeded its budget";
    return;
  }
  rep.kernel_arrows = kf.arrows;
  check_internal(closure.size() <= kf.arrows,
                 "closure order exceeds the kernel arrow bound");

  std::vector<Mat> conj;
  conj.reserve(closure.size());
  for (std::size_t i = 0; i < closure.size(); ++i)
    conj.push_back(flag.q_inv * closure.carrier(static_cast<int>(i)) * flag.q);
  InjectivityReport ir = embed_via_unit(ctx, conj);
  check_internal(ir.injective, "unit embedding collided on closure elements");
  rep.kernel_note = "kernel bound and unit embedding verified";
}

}  // namespace

FinitenessReport decide_finiteness(const std::vector<Mat>& gens, const Limits& limits) {
  validate_gens(gens);
  const Field f = gens.front().field();
  const int n = gens.front().rows();

  FinitenessReport rep;
  rep.limits_used = limits;

  const std::uint64_t cert_cap = certified_power_cap(n, f);
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    const std::uint64_t cap = std::min(limits.cap_powers, cert_cap);
    PowerPeriodResult pr = power_period(gens[gi], cap);
    GeneratorPowerReport gp;
    gp.generator = static_cast<int>(gi);
    gp.period = pr.value;
    gp.cap_used = cap;
    gp.certified = cap >= cert_cap;
    gp.steps = pr.steps;
    rep.generator_powers.push_back(gp);
    if (!pr.value && gp.certified && f.is_rationals()) {
      rep.verdict = Verdict::NonPeriodicWitness;
      rep.witness = NonPeriodicityWitness{
          gens[gi], {static_cast<int>(gi)},
          "powers stay distinct beyond the certified periodicity cap"};
      return rep;
    }
  }

  rep.flag = triangularize(gens);

  ClosureResult cl = close_matrices(gens, limits);
  rep.closure_stats = cl.stats;
  const FinMonoid& closure = cl.monoid;

  if (f.is_rationals()) {
    if (auto w = screen_traces_rational(closure, n)) {
      rep.verdict = Verdict::NonPeriodicWitness;
      rep.witness = NonPeriodicityWitness{word_product(gens, w->word), w->word, w->reason};
      return rep;
    }
  }

  for (std::size_t j = 0; j < rep.flag->block_sizes.size(); ++j) {
    std::vector<Mat> bgens;
    bgens.reserve(gens.size());
    for (const Mat& c : rep.flag->conjugated)
      bgens.push_back(diag_block(c, rep.flag->block_sizes, static_cast<int>(j)));
    std::optional<BlockWitness> sink;
    BlockReport br = analyze_block(static_cast<int>(j), bgens, limits, sink, 0);
    rep.blocks.push_back(std::move(br));
    if (sink && f.is_rationals()) {
      rep.verdict = Verdict::NonPeriodicWitness;
      rep.witness = NonPeriodicityWitness{word_product(gens, sink->word), sink->word,
                                          sink->reason + " (diagonal block " +
                                              std::to_string(j) + ")"};
      return rep;
    }
  }

  if (!cl.stats.complete) {
    if (f.is_rationals()) {
      if (auto w = scan_powers_rational(closure, n, f)) {
        rep.verdict = Verdict::NonPeriodicWitness;
        rep.witness = NonPeriodicityWitness{word_product(gens, w->word), w->word, w->reason};
        return rep;
      }
    }
    rep.verdict = Verdict::Inconclusive;
    rep.note = "closure stopped at " + std::to_string(closure.size()) +
               " elements within the configured budget";
    return rep;
  }

  rep.verdict = Verdict::Finite;
  rep.order = closure.size();
  kernel_cross_check(rep, gens, closure, limits);
  return rep;
}

}  // namespace burnside
