#include "burnside/kernel_category.hpp"

#include <algorithm>
#include <numeric>

namespace burnside {

KernelContext KernelContext::enumerated(MonoidHom phi) {
  check_internal(phi.domain && phi.codomain, "hom without endpoints");
  for (std::size_t i = 0; i < phi.preimages.size(); ++i) {
    if (phi.preimages[i].empty()) {
      fail(Errc::EmptyPreimage, "kernel context needs a surjective hom; fiber " +
                                    std::to_string(i) + " is empty");
    }
  }
  KernelContext ctx;
  ctx.phi_ = std::move(phi);
  return ctx;
}

KernelContext::BlockResult KernelContext::block(const Field& field, int top, int bottom,
                                                std::vector<Mat> gens, const Limits& limits) {
  if (top <= 0 || bottom <= 0) fail(Errc::ShapeMismatch, "block sizes must be positive");
  int n = top + bottom;
  if (gens.empty()) fail(Errc::ParseError, "block context needs at least one generator");
  for (const auto& g : gens) {
    if (!g.is_square() || g.rows() != n) fail(Errc::ShapeMismatch, "generator size mismatch");
    if (g.field() != field) fail(Errc::FieldMismatch, "generator field mismatch");
    for (int i = top; i < n; ++i) {
      for (int j = 0; j < top; ++j) {
        if (!g.at(i, j).is_zero()) {
          fail(Errc::NotAHomomorphism, "generator is not block upper triangular");
        }
      }
    }
  }
  std::vector<Mat> projections;
  projections.reserve(gens.size());
  for (const auto& g : gens) {
    Mat d(field, n, n);
    d.set_block(0, 0, g.block(0, 0, top, top));
    d.set_block(top, top, g.block(top, top, bottom, bottom));
    projections.push_back(std::move(d));
  }
  ClosureResult diag = close_matrices(projections, limits);
  BlockResult out;
  out.diag_stats = diag.stats;
  if (!diag.stats.complete) return out;
  diag.monoid.ensure_table();
  KernelContext ctx;
  ctx.field_ = field;
  ctx.top_ = top;
  ctx.bottom_ = bottom;
  ctx.gens_ = std::move(gens);
  ctx.diag_ = std::make_shared<const FinMonoid>(std::move(diag.monoid));
  out.context = std::move(ctx);
  return out;
}

const MonoidHom& KernelContext::phi() const {
  if (!phi_) fail(Errc::ModeUnavailable, "enumerated hom unavailable in block mode");
  return *phi_;
}

const FinMonoid& KernelContext::n_monoid() const {
  if (phi_) return *phi_->codomain;
  check_internal(diag_ != nullptr, "context without N");
  return *diag_;
}

const Field& KernelContext::block_field() const {
  if (!field_) fail(Errc::ModeUnavailable, "block field unavailable in enumerated mode");
  return *field_;
}

std::size_t KernelContext::generator_count() const {
  if (phi_) return phi_->domain->generators().size();
  return gens_.size();
}

int KernelCat::object_index(int p, int q) const {
  auto it = object_lookup.find({p, q});
  return it == object_lookup.end() ? -1 : it->second;
}

int KernelCat::find_arrow(const std::string& key) const {
  auto it = arrow_lookup.find(key);
  return it == arrow_lookup.end() ? -1 : it->second;
}

std::vector<int> KernelCat::self_arrows(int obj) const {
  std::vector<int> out;
  for (int a : from[static_cast<std::size_t>(obj)]) {
    if (arrows[static_cast<std::size_t>(a)].dst == obj) out.push_back(a);
  }
  return out;
}

namespace {

// N index of the diagonal projection of a block matrix.
int project_to_n(const KernelContext& ctx, const Mat& m) {
  const FinMonoid& N = ctx.n_monoid();
  int top = ctx.top();
  int n = m.rows();
  Mat d(m.field(), n, n);
  d.set_block(0, 0, m.block(0, 0, top, top));
  d.set_block(top, top, m.block(top, top, n - top, n - top));
  int idx = N.find(d.key());
  check_internal(idx >= 0, "diagonal projection escapes N");
  return idx;
}

struct ArrowData {
  int t1, t2;
  std::string key;
};

ArrowData arrow_data_enum(const KernelContext& ctx, int n1, int m, int n2) {
  const MonoidHom& phi = ctx.phi();
  const FinMonoid& M = *phi.domain;
  const FinMonoid& N = *phi.codomain;
  int fm = phi.image[static_cast<std::size_t>(m)];
  int t1 = N.mul(n1, fm);
  int t2 = N.mul(fm, n2);
  std::string key = "a|" + std::to_string(n1) + "," + std::to_string(n2) + "|" +
                    std::to_string(t1) + "," + std::to_string(t2) + "|";
  for (int m1 : phi.preimages[static_cast<std::size_t>(n1)]) {
    int left = M.mul(m1, m);
    for (int m2 : phi.preimages[static_cast<std::size_t>(n2)]) {
      key += std::to_string(M.mul(left, m2));
      key += ",";
    }
  }
  return {t1, t2, std::move(key)};
}

ArrowData arrow_data_block(const KernelContext& ctx, int n1, const Mat& m, int n2) {
  const FinMonoid& N = ctx.n_monoid();
  int top = ctx.top();
  int bottom = m.rows() - top;
  int fm = project_to_n(ctx, m);
  int t1 = N.find((N.carrier(n1) * N.carrier(fm)).key());
  int t2 = N.find((N.carrier(fm) * N.carrier(n2)).key());
  check_internal(t1 >= 0 && t2 >= 0, "N is not closed under products");
  Mat x = N.carrier(n1).block(0, 0, top, top);
  Mat b = m.block(0, top, top, bottom);
  Mat v = N.carrier(n2).block(top, top, bottom, bottom);
  Mat xbv = x * b * v;
  std::string key = "b|" + std::to_string(n1) + "," + std::to_string(n2) + "|" +
                    std::to_string(t1) + "," + std::to_string(t2) + "|" + xbv.key();
  return {t1, t2, std::move(key)};
}

}  // namespace

std::string arrow_key(const KernelContext& ctx, int n1, int m_elt, int n2) {
  check_internal(ctx.is_enumerated(), "element representative in block mode");
  return arrow_data_enum(ctx, n1, m_elt, n2).key;
}

std::string arrow_key(const KernelContext& ctx, int n1, const Mat& m, int n2) {
  check_internal(!ctx.is_enumerated(), "matrix representative in enumerated mode");
  return arrow_data_block(ctx, n1, m, n2).key;
}

namespace {

// Closure bookkeeping shared by kernel_category and compose_arrows.
struct Builder {
  const KernelContext& ctx;
  KernelCat& cat;
  const Limits& limits;
  ClosureStats& stats;
  bool overflow = false;

  int materialize(int p, int q);
  // Returns the arrow id or -1 when the budget refused the intern.
  int make_and_intern(int n1, int m_elt, const Mat* m_mat, int n2, std::vector<int> word);
  int compose(int f, int g);  // -1 on budget refusal
};

int Builder::materialize(int p, int q) {
  auto it = cat.object_lookup.find({p, q});
  if (it != cat.object_lookup.end()) return it->second;
  int id = static_cast<int>(cat.objects.size());
  cat.object_lookup.emplace(std::make_pair(p, q), id);
  cat.objects.emplace_back(p, q);
  cat.from.emplace_back();
  cat.into.emplace_back();
  cat.identity_of.push_back(-1);
  // Identity arrow [p, 1, q] lives at (p, q) in either mode.
  int ia;
  if (ctx.is_enumerated()) {
    ia = make_and_intern(p, ctx.phi().domain->identity(), nullptr, q, {});
  } else {
    Mat id_mat = Mat::identity(ctx.block_field(), ctx.top() + ctx.bottom());
    ia = make_and_intern(p, -1, &id_mat, q, {});
  }
  if (ia >= 0) cat.identity_of[static_cast<std::size_t>(id)] = ia;
  return id;
}

int Builder::make_and_intern(int n1, int m_elt, const Mat* m_mat, int n2, std::vector<int> word) {
  ArrowData d = ctx.is_enumerated() ? arrow_data_enum(ctx, n1, m_elt, n2)
                                    : arrow_data_block(ctx, n1, *m_mat, n2);
  auto it = cat.arrow_lookup.find(d.key);
  if (it != cat.arrow_lookup.end()) return it->second;
  if (cat.arrows.size() >= limits.max_elements) {
    overflow = true;
    return -1;
  }
  KernelArrow a;
  a.n1 = n1;
  a.n2 = n2;
  a.m_elt = m_elt;
  if (m_mat) a.m_mat = *m_mat;
  a.word = std::move(word);
  a.key = std::move(d.key);
  a.src = materialize(n1, d.t2);
  a.dst = materialize(d.t1, n2);
  if (overflow) return -1;  // materialize may recurse into interning
  int id = static_cast<int>(cat.arrows.size());
  cat.arrow_lookup.emplace(a.key, id);
  cat.from[static_cast<std::size_t>(a.src)].push_back(id);
  cat.into[static_cast<std::size_t>(a.dst)].push_back(id);
  cat.arrows.push_back(std::move(a));
  return id;
}

int Builder::compose(int f, int g) {
  const KernelArrow& af = cat.arrows[static_cast<std::size_t>(f)];
  const KernelArrow& ag = cat.arrows[static_cast<std::size_t>(g)];
  if (af.dst != ag.src) fail(Errc::NonComposable, "arrow target does not meet arrow source");
  std::vector<int> word = af.word;
  word.insert(word.end(), ag.word.begin(), ag.word.end());
  int id;
  if (ctx.is_enumerated()) {
    int prod = ctx.phi().domain->mul(af.m_elt, ag.m_elt);
    id = make_and_intern(af.n1, prod, nullptr, ag.n2, std::move(word));
  } else {
    Mat prod = *af.m_mat * *ag.m_mat;
    id = make_and_intern(af.n1, -1, &prod, ag.n2, std::move(word));
  }
  if (id >= 0) {
    const KernelArrow& ac = cat.arrows[static_cast<std::size_t>(id)];
    check_internal(ac.src == cat.arrows[static_cast<std::size_t>(f)].src &&
                       ac.dst == cat.arrows[static_cast<std::size_t>(g)].dst,
                   "composite endpoints mismatch");
  }
  return id;
}

}  // namespace

KernelClosure kernel_category(const KernelContext& ctx, const Limits& limits) {
  KernelClosure out;
  KernelCat& cat = out.cat;
  Builder b{ctx, cat, limits, out.stats};

  const FinMonoid& N = ctx.n_monoid();
  int unit = N.identity();
  cat.unit_object = b.materialize(unit, unit);

  std::size_t gen_count = ctx.generator_count();
  for (int n1 = 0; n1 < static_cast<int>(N.size()) && !b.overflow; ++n1) {
    for (int n2 = 0; n2 < static_cast<int>(N.size()) && !b.overflow; ++n2) {
      for (std::size_t gi = 0; gi < gen_count && !b.overflow; ++gi) {
        if (ctx.is_enumerated()) {
          int gelt = ctx.phi().domain->generators()[gi];
          b.make_and_intern(n1, gelt, nullptr, n2, {static_cast<int>(gi)});
        } else {
          b.make_and_intern(n1, -1, &ctx.block_gens()[gi], n2, {static_cast<int>(gi)});
        }
      }
    }
  }

  // Deterministic worklist: (source object id, key bytes). Composing the
  // popped arrow against every stored arrow on both sides covers each pair
  // once the later member is popped.
  std::map<std::pair<int, std::string>, int> pending;
  for (std::size_t i = 0; i < cat.arrows.size(); ++i) {
    pending.emplace(std::make_pair(cat.arrows[i].src, cat.arrows[i].key), static_cast<int>(i));
  }
  while (!pending.empty() && !b.overflow) {
    auto first = pending.begin();
    int f = first->second;
    pending.erase(first);
    int fsrc = cat.arrows[static_cast<std::size_t>(f)].src;
    int fdst = cat.arrows[static_cast<std::size_t>(f)].dst;
    // g ; f for arrows g into src(f), then f ; g for arrows out of dst(f).
    for (std::size_t side = 0; side < 2 && !b.overflow; ++side) {
      const std::vector<int>& peers =
          side == 0 ? cat.into[static_cast<std::size_t>(fsrc)]
                    : cat.from[static_cast<std::size_t>(fdst)];
      // peers grows while composing; index loop stays valid.
      for (std::size_t pi = 0; pi < peers.size() && !b.overflow; ++pi) {
        int g = peers[pi];
        if (out.stats.steps >= limits.max_steps) {
          b.overflow = true;
          break;
        }
        ++out.stats.steps;
        std::size_t before = cat.arrows.size();
        (void)(side == 0 ? b.compose(g, f) : b.compose(f, g));
        for (std::size_t ni = before; ni < cat.arrows.size(); ++ni) {
          const KernelArrow& na = cat.arrows[ni];
          pending.emplace(std::make_pair(na.src, na.key), static_cast<int>(ni));
        }
      }
    }
  }

  out.stats.complete = !b.overflow;
  out.stats.frontier_at_stop = pending.size();
  cat.complete = out.stats.complete;
  return out;
}

int compose_arrows(const KernelContext& ctx, KernelCat& cat, int f, int g) {
  check_internal(f >= 0 && f < static_cast<int>(cat.arrows.size()) && g >= 0 &&
                     g < static_cast<int>(cat.arrows.size()),
                 "arrow id out of range");
  ClosureStats scratch;
  Limits unbounded;
  unbounded.max_elements = static_cast<std::size_t>(-1);
  Builder b{ctx, cat, unbounded, scratch};
  int id = b.compose(f, g);
  check_internal(id >= 0, "composition refused by budget");
  return id;
}

int compose_lookup(const KernelContext& ctx, const KernelCat& cat, int f, int g) {
  const KernelArrow& af = cat.arrows[static_cast<std::size_t>(f)];
  const KernelArrow& ag = cat.arrows[static_cast<std::size_t>(g)];
  if (af.dst != ag.src) fail(Errc::NonComposable, "arrow target does not meet arrow source");
  std::string key;
  if (ctx.is_enumerated()) {
    int prod = ctx.phi().domain->mul(af.m_elt, ag.m_elt);
    key = arrow_key(ctx, af.n1, prod, ag.n2);
  } else {
    Mat prod = *af.m_mat * *ag.m_mat;
    key = arrow_key(ctx, af.n1, prod, ag.n2);
  }
  int id = cat.find_arrow(key);
  check_internal(id >= 0, "closed category is missing a composite");
  return id;
}

FinMonoid endo_monoid(const KernelContext& ctx, const KernelCat& cat, int obj) {
  check_internal(cat.complete, "endo monoid of an incomplete category");
  check_internal(obj >= 0 && obj < static_cast<int>(cat.objects.size()), "object out of range");
  std::vector<int> self = cat.self_arrows(obj);
  std::unordered_map<int, int> pos;
  for (std::size_t i = 0; i < self.size(); ++i) pos[self[i]] = static_cast<int>(i);
  std::size_t k = self.size();
  std::vector<std::string> keys;
  keys.reserve(k);
  for (int a : self) keys.push_back(cat.arrows[static_cast<std::size_t>(a)].key);
  std::vector<int> table(k * k, -1);
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      int c = compose_lookup(ctx, cat, self[i], self[j]);
      auto it = pos.find(c);
      check_internal(it != pos.end(), "endo composition left the object");
      table[i * k + j] = it->second;
    }
  }
  int identity = -1;
  auto idit = pos.find(cat.identity_of[static_cast<std::size_t>(obj)]);
  check_internal(idit != pos.end(), "object without identity arrow");
  identity = idit->second;
  std::vector<int> gens(k);
  std::iota(gens.begin(), gens.end(), 0);
  return FinMonoid::from_table(std::move(keys), table, identity, std::move(gens),
                               /*validate=*/k <= 200);
}

InjectivityReport embed_via_unit(const KernelContext& ctx) {
  check_internal(ctx.is_enumerated(), "full-domain embedding needs enumerated mode");
  const FinMonoid& M = *ctx.phi().domain;
  int unit = ctx.n_monoid().identity();
  InjectivityReport rep;
  std::unordered_map<std::string, int> seen;
  for (int m = 0; m < static_cast<int>(M.size()); ++m) {
    std::string key = arrow_key(ctx, unit, m, unit);
    auto [it, fresh] = seen.emplace(std::move(key), m);
    ++rep.checked;
    if (!fresh) {
      rep.injective = false;
      rep.collision = std::make_pair(M.key(it->second), M.key(m));
      return rep;
    }
  }
  return rep;
}

InjectivityReport embed_via_unit(const KernelContext& ctx, const std::vector<Mat>& elements) {
  check_internal(!ctx.is_enumerated(), "matrix embedding needs block mode");
  int unit = ctx.n_monoid().identity();
  InjectivityReport rep;
  std::unordered_map<std::string, std::size_t> seen;
  for (std::size_t i = 0; i < elements.size(); ++i) {
    std::string key = arrow_key(ctx, unit, elements[i], unit);
    auto [it, fresh] = seen.emplace(std::move(key), i);
    ++rep.checked;
    if (!fresh) {
      rep.injective = false;
      rep.collision = std::make_pair(elements[it->second].key(), elements[i].key());
      return rep;
    }
  }
  return rep;
}

KernelFiniteness finiteness_via_kernel(const KernelContext& ctx, const Limits& limits) {
  KernelClosure closure = kernel_category(ctx, limits);
  KernelFiniteness out;
  out.certifying = closure.stats.complete;
  out.objects = closure.cat.objects.size();
  out.arrows = closure.cat.arrows.size();
  out.stats = closure.stats;
  if (ctx.is_enumerated()) {
    std::size_t order = ctx.phi().domain->size();
    out.direct_order = order;
    if (out.certifying) {
      InjectivityReport rep = embed_via_unit(ctx);
      check_internal(rep.injective, "unit embedding collided; arrow identification is unsound");
      check_internal(order <= out.arrows, "arrow count undercuts the direct order");
    }
  }
  return out;
}

}  // namespace burnside
