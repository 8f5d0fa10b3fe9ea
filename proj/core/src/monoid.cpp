#include "burnside/monoid.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

namespace burnside {

int FinMonoid::intern(std::string key, int parent, int lastgen) {
  auto [it, fresh] = index_.emplace(std::move(key), static_cast<int>(keys_.size()));
  if (fresh) {
    keys_.push_back(it->first);
    parent_.push_back(parent);
    lastgen_.push_back(lastgen);
  }
  return it->second;
}

int FinMonoid::mul(int a, int b) const {
  check_internal(a >= 0 && a < static_cast<int>(size()) && b >= 0 && b < static_cast<int>(size()),
                 "mul index out of range");
  if (!table_.empty()) return table_[static_cast<std::size_t>(a) * size() + b];
  check_internal(complete_, "mul on an incomplete closure");
  int cur = a;
  for (int g : word(b)) cur = gen_product(cur, g);
  return cur;
}

int FinMonoid::gen_product(int a, int g) const {
  check_internal(g >= 0 && g < static_cast<int>(gens_.size()), "generator index out of range");
  std::int32_t r = gen_table_[static_cast<std::size_t>(a) * gens_.size() + g];
  check_internal(r >= 0, "gen_product on an unprocessed element");
  return r;
}

const std::string& FinMonoid::key(int i) const {
  check_internal(i >= 0 && i < static_cast<int>(size()), "key index out of range");
  return keys_[static_cast<std::size_t>(i)];
}

int FinMonoid::find(const std::string& key) const {
  auto it = index_.find(key);
  return it == index_.end() ? -1 : it->second;
}

std::vector<int> FinMonoid::word(int i) const {
  check_internal(i >= 0 && i < static_cast<int>(size()), "word index out of range");
  std::vector<int> w;
  while (i != identity_) {
    check_internal(parent_[static_cast<std::size_t>(i)] >= 0, "element without a word chain");
    w.push_back(lastgen_[static_cast<std::size_t>(i)]);
    i = parent_[static_cast<std::size_t>(i)];
  }
  std::reverse(w.begin(), w.end());
  return w;
}

int FinMonoid::parent(int i) const {
  check_internal(i >= 0 && i < static_cast<int>(size()), "parent index out of range");
  return parent_[static_cast<std::size_t>(i)];
}

int FinMonoid::last_generator(int i) const {
  check_internal(i >= 0 && i < static_cast<int>(size()), "last_generator index out of range");
  return lastgen_[static_cast<std::size_t>(i)];
}

void FinMonoid::ensure_table(std::size_t threshold) {
  if (!table_.empty() || size() > threshold) return;
  check_internal(complete_, "table of an incomplete closure");
  std::size_t n = size();
  table_.assign(n * n, -1);
  // Column sweep in discovery order: every non-identity b satisfies
  // b = parent(b) * gen(lastgen(b)) with parent(b) discovered earlier, so
  // table[a][b] = gen_table[table[a][parent(b)]][lastgen(b)].
  for (std::size_t b = 0; b < n; ++b) {
    if (static_cast<int>(b) == identity_) {
      for (std::size_t a = 0; a < n; ++a) table_[a * n + b] = static_cast<std::int32_t>(a);
      continue;
    }
    auto pb = static_cast<std::size_t>(parent_[b]);
    auto gb = static_cast<std::size_t>(lastgen_[b]);
    for (std::size_t a = 0; a < n; ++a) {
      std::int32_t ap = table_[a * n + pb];
      check_internal(ap >= 0, "table fill order violated");
      table_[a * n + b] = gen_table_[static_cast<std::size_t>(ap) * gens_.size() + gb];
    }
  }
}

const Mat& FinMonoid::carrier(int i) const {
  check_internal(has_carrier(), "monoid has no carrier");
  check_internal(i >= 0 && i < static_cast<int>(size()), "carrier index out of range");
  return carrier_[static_cast<std::size_t>(i)];
}

void FinMonoid::attach_carrier(std::vector<Mat> mats) {
  check_internal(mats.size() == size(), "carrier size mismatch");
  carrier_ = std::move(mats);
}

std::uint64_t FinMonoid::element_order(int x) const {
  int cur = x;
  for (std::uint64_t e = 1; e <= size(); ++e) {
    if (cur == identity_) return e;
    cur = mul(cur, x);
  }
  return 0;
}

FinMonoid FinMonoid::from_table(std::vector<std::string> keys, const std::vector<int>& table,
                                int identity, std::vector<int> generators, bool validate) {
  std::size_t n = keys.size();
  if (n == 0) fail(Errc::ParseError, "empty monoid");
  if (table.size() != n * n) fail(Errc::ParseError, "table size is not n*n");
  if (identity < 0 || identity >= static_cast<int>(n)) fail(Errc::ParseError, "identity out of range");
  for (int t : table) {
    if (t < 0 || t >= static_cast<int>(n)) fail(Errc::ParseError, "table entry out of range");
  }
  for (int g : generators) {
    if (g < 0 || g >= static_cast<int>(n)) fail(Errc::ParseError, "generator out of range");
  }
  auto at = [&](int a, int b) { return table[static_cast<std::size_t>(a) * n + b]; };
  if (validate) {
    for (int a = 0; a < static_cast<int>(n); ++a) {
      if (at(identity, a) != a || at(a, identity) != a) {
        fail(Errc::ParseError, "identity laws violated at element " + std::to_string(a));
      }
    }
    if (n <= 200) {
      for (int a = 0; a < static_cast<int>(n); ++a) {
        for (int b = 0; b < static_cast<int>(n); ++b) {
          for (int c = 0; c < static_cast<int>(n); ++c) {
            if (at(at(a, b), c) != at(a, at(b, c))) {
              fail(Errc::ParseError, "associativity violated");
            }
          }
        }
      }
    } else {
      std::mt19937 rng(12345);
      std::uniform_int_distribution<int> dist(0, static_cast<int>(n) - 1);
      for (int t = 0; t < 2000; ++t) {
        int a = dist(rng), b = dist(rng), c = dist(rng);
        if (at(at(a, b), c) != at(a, at(b, c))) fail(Errc::ParseError, "associativity violated");
      }
    }
  }

  FinMonoid m;
  m.keys_ = std::move(keys);
  for (std::size_t i = 0; i < n; ++i) {
    auto [it, fresh] = m.index_.emplace(m.keys_[i], static_cast<int>(i));
    if (!fresh) fail(Errc::ParseError, "duplicate element key: " + m.keys_[i]);
  }
  m.identity_ = identity;
  m.gens_ = std::move(generators);
  m.table_.assign(table.begin(), table.end());
  m.gen_table_.assign(n * m.gens_.size(), -1);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t g = 0; g < m.gens_.size(); ++g) {
      m.gen_table_[a * m.gens_.size() + g] =
          static_cast<std::int32_t>(at(static_cast<int>(a), m.gens_[g]));
    }
  }
  // Breadth-first word chains from the identity; doubles as the generator
  // reachability check.
  m.parent_.assign(n, -1);
  m.lastgen_.assign(n, -1);
  std::vector<bool> seen(n, false);
  seen[static_cast<std::size_t>(identity)] = true;
  std::vector<int> queue{identity};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int a = queue[qi];
    for (std::size_t g = 0; g < m.gens_.size(); ++g) {
      int b = m.gen_table_[static_cast<std::size_t>(a) * m.gens_.size() + g];
      if (!seen[static_cast<std::size_t>(b)]) {
        seen[static_cast<std::size_t>(b)] = true;
        m.parent_[static_cast<std::size_t>(b)] = a;
        m.lastgen_[static_cast<std::size_t>(b)] = static_cast<int>(g);
        queue.push_back(b);
      }
    }
  }
  if (validate) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!seen[i]) {
        fail(Errc::ParseError, "element " + std::to_string(i) + " is not a product of generators");
      }
    }
  }
  return m;
}

ClosureResult close_matrices(const std::vector<Mat>& gens, const Limits& limits) {
  if (gens.empty()) fail(Errc::ParseError, "closure needs at least one generator");
  const Field& f = gens[0].field();
  int n = gens[0].rows();
  for (const auto& g : gens) {
    if (!g.is_square() || g.rows() != n) {
      fail(Errc::ShapeMismatch, "generators must be square and equally sized");
    }
    if (g.field() != f) fail(Errc::FieldMismatch, "generators over different fields");
  }

  FinMonoid m;
  Mat id = Mat::identity(f, n);
  m.intern(id.key(), -1, -1);
  m.carrier_.push_back(std::move(id));
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    int before = static_cast<int>(m.size());
    int idx = m.intern(gens[gi].key(), 0, static_cast<int>(gi));
    if (idx == before) m.carrier_.push_back(gens[gi]);
    m.gens_.push_back(idx);
  }

  std::size_t gen_count = gens.size();
  ClosureStats stats;
  std::size_t processed = 0;
  bool done = false;
  while (!done && processed < m.size()) {
    std::size_t i = processed;
    m.gen_table_.resize((i + 1) * gen_count, -1);
    for (std::size_t g = 0; g < gen_count; ++g) {
      if (stats.steps >= limits.max_steps) {
        done = true;
        break;
      }
      ++stats.steps;
      Mat prod = m.carrier_[i] * gens[g];
      std::string key = prod.key();
      bool fresh = m.index_.find(key) == m.index_.end();
      if (fresh && m.size() >= limits.max_elements) {
        done = true;
        break;
      }
      int j = m.intern(std::move(key), static_cast<int>(i), static_cast<int>(g));
      if (fresh) m.carrier_.push_back(std::move(prod));
      m.gen_table_[i * gen_count + g] = j;
    }
    if (!done) ++processed;
  }
  stats.complete = (processed == m.size());
  stats.frontier_at_stop = m.size() - processed;
  m.complete_ = stats.complete;
  m.gen_table_.resize(m.size() * gen_count, -1);
  return ClosureResult{std::move(m), stats};
}

ClosureResult close_elements(const FinMonoid& ambient, const std::vector<int>& gens,
                             const Limits& limits) {
  if (gens.empty()) fail(Errc::ParseError, "closure needs at least one generator");
  for (int g : gens) {
    check_internal(g >= 0 && g < static_cast<int>(ambient.size()), "seed out of range");
  }

  FinMonoid m;
  m.intern(ambient.key(ambient.identity()), -1, -1);
  m.ambient_map_.push_back(ambient.identity());
  if (ambient.has_carrier()) m.carrier_.push_back(ambient.carrier(ambient.identity()));
  for (std::size_t gi = 0; gi < gens.size(); ++gi) {
    int a = gens[gi];
    int before = static_cast<int>(m.size());
    int idx = m.intern(ambient.key(a), 0, static_cast<int>(gi));
    if (idx == before) {
      m.ambient_map_.push_back(a);
      if (ambient.has_carrier()) m.carrier_.push_back(ambient.carrier(a));
    }
    m.gens_.push_back(idx);
  }

  std::size_t gen_count = gens.size();
  ClosureStats stats;
  std::size_t processed = 0;
  bool done = false;
  while (!done && processed < m.size()) {
    std::size_t i = processed;
    m.gen_table_.resize((i + 1) * gen_count, -1);
    for (std::size_t g = 0; g < gen_count; ++g) {
      if (stats.steps >= limits.max_steps) {
        done = true;
        break;
      }
      ++stats.steps;
      int amb = ambient.mul(m.ambient_map_[i], gens[g]);
      std::string key = ambient.key(amb);
      bool fresh = m.index_.find(key) == m.index_.end();
      if (fresh && m.size() >= limits.max_elements) {
        done = true;
        break;
      }
      int j = m.intern(std::move(key), static_cast<int>(i), static_cast<int>(g));
      if (fresh) {
        m.ambient_map_.push_back(amb);
        if (ambient.has_carrier()) m.carrier_.push_back(ambient.carrier(amb));
      }
      m.gen_table_[i * gen_count + g] = j;
    }
    if (!done) ++processed;
  }
  stats.complete = (processed == m.size());
  stats.frontier_at_stop = m.size() - processed;
  m.complete_ = stats.complete;
  m.gen_table_.resize(m.size() * gen_count, -1);
  return ClosureResult{std::move(m), stats};
}

MonoidHom hom_from_labels(std::shared_ptr<const FinMonoid> domain,
                          const std::vector<std::string>& labels,
                          const std::vector<Mat>* label_carrier) {
  const FinMonoid& M = *domain;
  check_internal(labels.size() == M.size(), "one label per element required");
  check_internal(M.complete(), "hom over an incomplete closure");

  std::unordered_map<std::string, int> label_index;
  std::vector<std::string> distinct;
  std::vector<int> image(M.size());
  std::vector<int> first_occurrence;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    auto [it, fresh] = label_index.emplace(labels[i], static_cast<int>(distinct.size()));
    if (fresh) {
      distinct.push_back(labels[i]);
      first_occurrence.push_back(static_cast<int>(i));
    }
    image[i] = it->second;
  }
  std::size_t nn = distinct.size();
  std::size_t gen_count = M.generators().size();

  // Congruence check on generators only: if equal labels stay equal under
  // x -> x*g and x -> g*x for every generator g, they stay equal under
  // multiplication by arbitrary elements (induction on word length).
  for (std::size_t g = 0; g < gen_count; ++g) {
    std::vector<int> right_map(nn, -1), right_witness(nn, -1);
    for (int x = 0; x < static_cast<int>(M.size()); ++x) {
      int lx = image[static_cast<std::size_t>(x)];
      int lxg = image[static_cast<std::size_t>(M.gen_product(x, static_cast<int>(g)))];
      int& cell = right_map[static_cast<std::size_t>(lx)];
      if (cell == -1) {
        cell = lxg;
        right_witness[static_cast<std::size_t>(lx)] = x;
      } else if (cell != lxg) {
        fail(Errc::NotAHomomorphism,
             "labels are not a right congruence: elements " +
                 std::to_string(right_witness[static_cast<std::size_t>(lx)]) + " and " +
                 std::to_string(x) + " split under generator " + std::to_string(g));
      }
    }
    // g*x for all x in one breadth-first sweep: g*b = (g*parent(b))*lastgen(b).
    std::vector<int> left(M.size(), -1);
    left[static_cast<std::size_t>(M.identity())] = M.generators()[g];
    std::vector<int> order(M.size());
    std::iota(order.begin(), order.end(), 0);
    // Discovery order guarantees parent(b) < b except for the identity.
    for (int b : order) {
      if (b == M.identity()) continue;
      int pb = M.parent(b);
      check_internal(pb >= 0 && left[static_cast<std::size_t>(pb)] >= 0,
                     "left product sweep order violated");
      left[static_cast<std::size_t>(b)] =
          M.gen_product(left[static_cast<std::size_t>(pb)], M.last_generator(b));
    }
    std::vector<int> left_map(nn, -1), left_witness(nn, -1);
    for (int x = 0; x < static_cast<int>(M.size()); ++x) {
      int lx = image[static_cast<std::size_t>(x)];
      int lgx = image[static_cast<std::size_t>(left[static_cast<std::size_t>(x)])];
      int& cell = left_map[static_cast<std::size_t>(lx)];
      if (cell == -1) {
        cell = lgx;
        left_witness[static_cast<std::size_t>(lx)] = x;
      } else if (cell != lgx) {
        fail(Errc::NotAHomomorphism,
             "labels are not a left congruence: elements " +
                 std::to_string(left_witness[static_cast<std::size_t>(lx)]) + " and " +
                 std::to_string(x) + " split under generator " + std::to_string(g));
      }
    }
  }

  // Quotient structure: generator columns from representatives, then the
  // breadth-first dynamic-programming sweep for the full table.
  std::vector<std::int32_t> q_gen(nn * gen_count, -1);
  for (std::size_t a = 0; a < nn; ++a) {
    for (std::size_t g = 0; g < gen_count; ++g) {
      int rep = first_occurrence[a];
      q_gen[a * gen_count + g] =
          static_cast<std::int32_t>(image[static_cast<std::size_t>(
              M.gen_product(rep, static_cast<int>(g)))]);
    }
  }
  int q_identity = image[static_cast<std::size_t>(M.identity())];
  std::vector<int> q_parent(nn, -1), q_lastgen(nn, -1);
  std::vector<bool> seen(nn, false);
  seen[static_cast<std::size_t>(q_identity)] = true;
  std::vector<int> queue{q_identity};
  for (std::size_t qi = 0; qi < queue.size(); ++qi) {
    int a = queue[qi];
    for (std::size_t g = 0; g < gen_count; ++g) {
      int b = q_gen[static_cast<std::size_t>(a) * gen_count + g];
      if (!seen[static_cast<std::size_t>(b)]) {
        seen[static_cast<std::size_t>(b)] = true;
        q_parent[static_cast<std::size_t>(b)] = a;
        q_lastgen[static_cast<std::size_t>(b)] = static_cast<int>(g);
        queue.push_back(b);
      }
    }
  }
  check_internal(std::all_of(seen.begin(), seen.end(), [](bool s) { return s; }),
                 "quotient not generated by generator images");
  std::vector<int> table(nn * nn, -1);
  for (int b : queue) {
    if (b == q_identity) {
      for (std::size_t a = 0; a < nn; ++a) table[a * nn + static_cast<std::size_t>(b)] = static_cast<int>(a);
      continue;
    }
    auto pb = static_cast<std::size_t>(q_parent[static_cast<std::size_t>(b)]);
    auto gb = static_cast<std::size_t>(q_lastgen[static_cast<std::size_t>(b)]);
    for (std::size_t a = 0; a < nn; ++a) {
      int ap = table[a * nn + pb];
      check_internal(ap >= 0, "quotient table fill order violated");
      table[a * nn + static_cast<std::size_t>(b)] =
          q_gen[static_cast<std::size_t>(ap) * gen_count + gb];
    }
  }

  std::vector<int> q_gens;
  q_gens.reserve(gen_count);
  for (int g : M.generators()) q_gens.push_back(image[static_cast<std::size_t>(g)]);

  FinMonoid N = FinMonoid::from_table(distinct, table, q_identity, q_gens, /*validate=*/false);
  if (label_carrier) {
    std::vector<Mat> carrier;
    carrier.reserve(nn);
    for (std::size_t c = 0; c < nn; ++c) {
      carrier.push_back((*label_carrier)[static_cast<std::size_t>(first_occurrence[c])]);
    }
    N.attach_carrier(std::move(carrier));
  }

  MonoidHom hom;
  hom.domain = std::move(domain);
  hom.codomain = std::make_shared<const FinMonoid>(std::move(N));
  hom.image = std::move(image);
  hom.preimages.assign(nn, {});
  for (std::size_t i = 0; i < hom.image.size(); ++i) {
    hom.preimages[static_cast<std::size_t>(hom.image[i])].push_back(static_cast<int>(i));
  }
  return hom;
}

MonoidHom hom_from_map(std::shared_ptr<const FinMonoid> domain,
                       std::shared_ptr<const FinMonoid> codomain, const std::vector<int>& image) {
  const FinMonoid& M = *domain;
  const FinMonoid& N = *codomain;
  if (image.size() != M.size()) fail(Errc::ParseError, "one image per element required");
  for (int v : image) {
    if (v < 0 || v >= static_cast<int>(N.size())) fail(Errc::ParseError, "image out of range");
  }
  if (image[static_cast<std::size_t>(M.identity())] != N.identity()) {
    fail(Errc::NotAHomomorphism, "identity is not preserved");
  }
  for (int x = 0; x < static_cast<int>(M.size()); ++x) {
    for (int y = 0; y < static_cast<int>(M.size()); ++y) {
      int lhs = image[static_cast<std::size_t>(M.mul(x, y))];
      int rhs = N.mul(image[static_cast<std::size_t>(x)], image[static_cast<std::size_t>(y)]);
      if (lhs != rhs) {
        fail(Errc::NotAHomomorphism, "multiplicativity fails at pair (" + std::to_string(x) + "," +
                                         std::to_string(y) + ")");
      }
    }
  }
  MonoidHom hom;
  hom.domain = std::move(domain);
  hom.codomain = std::move(codomain);
  hom.image = image;
  hom.preimages.assign(N.size(), {});
  for (std::size_t i = 0; i < image.size(); ++i) {
    hom.preimages[static_cast<std::size_t>(image[i])].push_back(static_cast<int>(i));
  }
  return hom;
}

MonoidHom hom_identity(std::shared_ptr<const FinMonoid> m) {
  std::vector<std::string> labels;
  labels.reserve(m->size());
  for (int i = 0; i < static_cast<int>(m->size()); ++i) labels.push_back(m->key(i));
  if (m->has_carrier()) {
    std::vector<Mat> carrier;
    carrier.reserve(m->size());
    for (int i = 0; i < static_cast<int>(m->size()); ++i) carrier.push_back(m->carrier(i));
    return hom_from_labels(std::move(m), labels, &carrier);
  }
  return hom_from_labels(std::move(m), labels);
}

MonoidHom hom_to_trivial(std::shared_ptr<const FinMonoid> m) {
  std::vector<std::string> labels(m->size(), "*");
  return hom_from_labels(std::move(m), labels);
}

MonoidHom hom_block_diagonal(std::shared_ptr<const FinMonoid> domain,
                             const std::vector<int>& block_sizes) {
  const FinMonoid& M = *domain;
  check_internal(M.has_carrier(), "block-diagonal hom needs a matrix carrier");
  int n = M.carrier(M.identity()).rows();
  int total = 0;
  for (int s : block_sizes) total += s;
  if (total != n) fail(Errc::ShapeMismatch, "block sizes do not sum to the dimension");

  // The diagonal projection is multiplicative only on block upper triangular
  // matrices; generators suffice since triangularity is closed under products.
  for (int g : M.generators()) {
    const Mat& mat = M.carrier(g);
    int r0 = 0;
    for (int s : block_sizes) {
      for (int i = r0; i < r0 + s; ++i) {
        for (int j = 0; j < r0; ++j) {
          if (!mat.at(i, j).is_zero()) {
            fail(Errc::NotAHomomorphism, "generator is not block upper triangular");
          }
        }
      }
      r0 += s;
    }
  }

  const Field& f = M.carrier(M.identity()).field();
  std::vector<std::string> labels;
  std::vector<Mat> carrier;
  labels.reserve(M.size());
  carrier.reserve(M.size());
  for (int i = 0; i < static_cast<int>(M.size()); ++i) {
    Mat d(f, n, n);
    int r0 = 0;
    for (int s : block_sizes) {
      d.set_block(r0, r0, M.carrier(i).block(r0, r0, s, s));
      r0 += s;
    }
    labels.push_back(d.key());
    carrier.push_back(std::move(d));
  }
  return hom_from_labels(std::move(domain), labels, &carrier);
}

std::vector<int> stabilizer_pair(const MonoidHom& phi, int n1, int n2) {
  const FinMonoid& N = *phi.codomain;
  check_internal(n1 >= 0 && n1 < static_cast<int>(N.size()) && n2 >= 0 &&
                     n2 < static_cast<int>(N.size()),
                 "stabilizer coordinates out of range");
  std::vector<int> out;
  for (int m = 0; m < static_cast<int>(phi.domain->size()); ++m) {
    int fm = phi.image[static_cast<std::size_t>(m)];
    if (N.mul(n1, fm) == n1 && N.mul(fm, n2) == n2) out.push_back(m);
  }
  return out;
}

TraceMonoid trace_monoid(const MonoidHom& phi, int n1, int n2) {
  const FinMonoid& M = *phi.domain;
  check_internal(n1 >= 0 && n1 < static_cast<int>(phi.preimages.size()) && n2 >= 0 &&
                     n2 < static_cast<int>(phi.preimages.size()),
                 "trace coordinates out of range");
  const auto& pre1 = phi.preimages[static_cast<std::size_t>(n1)];
  const auto& pre2 = phi.preimages[static_cast<std::size_t>(n2)];
  if (pre1.empty() || pre2.empty()) {
    fail(Errc::EmptyPreimage, "trace monoid at a pair with an empty fiber");
  }

  TraceMonoid t;
  t.n1 = n1;
  t.n2 = n2;
  t.stabilizer = stabilizer_pair(phi, n1, n2);

  std::map<std::vector<int>, int> sig_class;
  std::unordered_map<int, int> stab_pos;
  for (std::size_t s = 0; s < t.stabilizer.size(); ++s) {
    stab_pos[t.stabilizer[s]] = static_cast<int>(s);
  }
  t.class_of.assign(t.stabilizer.size(), -1);
  for (std::size_t s = 0; s < t.stabilizer.size(); ++s) {
    int m = t.stabilizer[s];
    std::vector<int> sig;
    sig.reserve(pre1.size() * pre2.size());
    for (int m1 : pre1) {
      int left = M.mul(m1, m);
      for (int m2 : pre2) sig.push_back(M.mul(left, m2));
    }
    auto [it, fresh] = sig_class.emplace(std::move(sig), static_cast<int>(t.classes.size()));
    if (fresh) {
      t.classes.emplace_back();
      t.class_rep.push_back(m);
    }
    t.class_of[s] = it->second;
    t.classes[static_cast<std::size_t>(it->second)].push_back(m);
  }

  std::size_t k = t.classes.size();
  t.table.assign(k, std::vector<int>(k, -1));
  for (std::size_t a = 0; a < k; ++a) {
    for (std::size_t b = 0; b < k; ++b) {
      int prod = M.mul(t.class_rep[a], t.class_rep[b]);
      auto it = stab_pos.find(prod);
      check_internal(it != stab_pos.end(), "stabilizer not closed under products");
      t.table[a][b] = t.class_of[static_cast<std::size_t>(it->second)];
    }
  }
  auto idit = stab_pos.find(M.identity());
  check_internal(idit != stab_pos.end(), "identity missing from stabilizer");
  t.identity_class = t.class_of[static_cast<std::size_t>(idit->second)];

  // Classification: one class is trivial; an abelian group of prime exponent
  // p reports ElementaryAbelianP; anything else GeneralFinite.
  if (k == 1) {
    t.tag = TraceClass::Trivial;
    return t;
  }
  bool commutative = true;
  for (std::size_t a = 0; a < k && commutative; ++a) {
    for (std::size_t b = a + 1; b < k; ++b) {
      if (t.table[a][b] != t.table[b][a]) {
        commutative = false;
        break;
      }
    }
  }
  bool group = true;
  std::uint64_t exponent = 1;
  for (std::size_t a = 0; a < k && group; ++a) {
    std::uint64_t order = 0;
    int cur = static_cast<int>(a);  // a^1
    for (std::size_t e = 1; e <= k; ++e) {
      if (cur == t.identity_class) {
        order = e;
        break;
      }
      cur = t.table[static_cast<std::size_t>(cur)][a];
    }
    if (order == 0) {
      group = false;
      break;
    }
    exponent = std::lcm(exponent, order);
  }
  if (group && commutative && exponent > 1 && is_prime_u64(exponent)) {
    t.tag = TraceClass::ElementaryAbelianP;
    t.tag_p = exponent;
  } else {
    t.tag = TraceClass::GeneralFinite;
  }
  return t;
}

}  // namespace burnside
