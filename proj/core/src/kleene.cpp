#include "burnside/kleene.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace burnside {

void LabeledGraph::validate() const {
  if (vertices < 0) fail(Errc::ParseError, "negative vertex count");
  bool has_monoid = monoid != nullptr;
  bool has_matrix = field.has_value();
  if (has_monoid == has_matrix) {
    fail(Errc::ParseError, "exactly one labeling mode (monoid or matrix) required");
  }
  if (has_matrix && static_cast<int>(dims.size()) != vertices) {
    fail(Errc::ParseError, "one dimension per vertex required");
  }
  if (has_matrix) {
    for (int d : dims) {
      if (d <= 0) fail(Errc::ParseError, "vertex dimensions must be positive");
    }
  }
  for (const auto& e : edges) {
    if (e.from < 0 || e.from >= vertices || e.to < 0 || e.to >= vertices) {
      fail(Errc::ParseError, "edge endpoint out of range");
    }
    if (has_monoid) {
      if (e.label_elt < 0 || e.label_elt >= static_cast<int>(monoid->size())) {
        fail(Errc::ParseError, "edge label out of range");
      }
    } else {
      if (!e.label_mat) fail(Errc::ParseError, "edge without a matrix label");
      if (e.label_mat->field() != *field) fail(Errc::FieldMismatch, "edge label field differs");
      if (e.label_mat->rows() != dims[static_cast<std::size_t>(e.from)] ||
          e.label_mat->cols() != dims[static_cast<std::size_t>(e.to)]) {
        fail(Errc::ShapeMismatch, "edge label shape must be dims[from] x dims[to]");
      }
    }
  }
}

const std::vector<std::string>& PathImageTable::cell(int v, int w) const {
  check_internal(v >= 0 && v < vertices && w >= 0 && w < vertices, "cell out of range");
  return keys[static_cast<std::size_t>(v) * static_cast<std::size_t>(vertices) +
              static_cast<std::size_t>(w)];
}

std::size_t PathImageTable::total() const {
  std::size_t t = 0;
  for (const auto& c : keys) t += c.size();
  return t;
}

bool PathImageTable::same_sets(const PathImageTable& other) const {
  return vertices == other.vertices && monoid_mode == other.monoid_mode && keys == other.keys;
}

namespace {

// Value-type policy bridging the monoid and matrix-category label modes.
struct MonoidOps {
  const FinMonoid* m;
  using Value = int;
  Value edge_label(const LabeledGraph::Edge& e) const { return e.label_elt; }
  Value mul(const Value& a, const Value& b) const { return m->mul(a, b); }
  Value identity(int /*vertex*/) const { return m->identity(); }
  std::string key(const Value& v) const { return m->key(v); }
};

struct MatrixOps {
  const LabeledGraph* g;
  using Value = Mat;
  Value edge_label(const LabeledGraph::Edge& e) const { return *e.label_mat; }
  Value mul(const Value& a, const Value& b) const { return a * b; }
  Value identity(int vertex) const {
    return Mat::identity(*g->field, g->dims[static_cast<std::size_t>(vertex)]);
  }
  std::string key(const Value& v) const { return v.key(); }
};

template <typename Ops>
struct Engine {
  using Value = typename Ops::Value;
  using Cell = std::map<std::string, Value>;

  const LabeledGraph& g;
  Ops ops;
  const Limits& limits;
  std::vector<Cell> cells;
  std::uint64_t steps = 0;
  std::size_t stored = 0;

  Engine(const LabeledGraph& graph, Ops o, const Limits& lim)
      : g(graph), ops(o), limits(lim), cells(static_cast<std::size_t>(graph.vertices) *
                                             static_cast<std::size_t>(graph.vertices)) {}

  Cell& cell(int v, int w) {
    return cells[static_cast<std::size_t>(v) * static_cast<std::size_t>(g.vertices) +
                 static_cast<std::size_t>(w)];
  }

  void account_step() {
    if (++steps > limits.max_steps) {
      fail(Errc::LimitExceeded, "path image closure exceeded max_steps");
    }
  }

  bool insert(Cell& c, Value v) {
    std::string k = ops.key(v);
    auto [it, fresh] = c.emplace(std::move(k), std::move(v));
    if (fresh && ++stored > limits.max_elements) {
      fail(Errc::LimitExceeded, "path image closure exceeded max_elements");
    }
    return fresh;
  }

  void seed_edges() {
    for (const auto& e : g.edges) insert(cell(e.from, e.to), ops.edge_label(e));
  }

  // Product closure of the (x,x) cell including the identity at x.
  std::vector<Value> star(int x) {
    std::vector<Value> out;
    std::map<std::string, std::size_t> seen;
    auto push = [&](Value v) -> bool {
      std::string k = ops.key(v);
      auto [it, fresh] = seen.emplace(std::move(k), out.size());
      if (fresh) {
        out.push_back(std::move(v));
        if (out.size() > limits.max_elements) {
          fail(Errc::LimitExceeded, "star closure exceeded max_elements");
        }
      }
      return fresh;
    };
    push(ops.identity(x));
    std::vector<Value> seed;
    for (auto& [k, v] : cell(x, x)) seed.push_back(v);
    for (auto& v : seed) push(v);
    // Right extension by the seed reaches every product of seed values.
    for (std::size_t i = 0; i < out.size(); ++i) {
      for (const auto& s : seed) {
        account_step();
        push(ops.mul(out[i], s));
      }
    }
    return out;
  }

  void eliminate(int x) {
    std::vector<Value> s = star(x);
    // Snapshots: contributions must come from the level before x is removed.
    std::vector<std::vector<Value>> into_x(static_cast<std::size_t>(g.vertices));
    std::vector<std::vector<Value>> from_x(static_cast<std::size_t>(g.vertices));
    for (int v = 0; v < g.vertices; ++v) {
      for (auto& [k, val] : cell(v, x)) into_x[static_cast<std::size_t>(v)].push_back(val);
      for (auto& [k, val] : cell(x, v)) from_x[static_cast<std::size_t>(v)].push_back(val);
    }
    for (int v = 0; v < g.vertices; ++v) {
      if (into_x[static_cast<std::size_t>(v)].empty()) continue;
      // a * s for a into x, s in star; then extend by x -> w values.
      std::vector<Value> left;
      for (const auto& a : into_x[static_cast<std::size_t>(v)]) {
        for (const auto& sv : s) {
          account_step();
          left.push_back(ops.mul(a, sv));
        }
      }
      for (int w = 0; w < g.vertices; ++w) {
        if (from_x[static_cast<std::size_t>(w)].empty()) continue;
        Cell& target = cell(v, w);
        for (const auto& l : left) {
          for (const auto& b : from_x[static_cast<std::size_t>(w)]) {
            account_step();
            insert(target, ops.mul(l, b));
          }
        }
      }
    }
  }

  void bruteforce(const std::vector<bool>* allowed) {
    seed_edges();
    // Worklist of (start, end, value); extending a walk through its endpoint
    // makes that endpoint an intermediate, so extension requires permission.
    struct Item {
      int v, w;
      std::string key;
    };
    std::vector<Item> queue;
    for (int v = 0; v < g.vertices; ++v) {
      for (int w = 0; w < g.vertices; ++w) {
        for (auto& [k, val] : cell(v, w)) queue.push_back({v, w, k});
      }
    }
    std::vector<std::vector<const LabeledGraph::Edge*>> out_edges(
        static_cast<std::size_t>(g.vertices));
    for (const auto& e : g.edges) out_edges[static_cast<std::size_t>(e.from)].push_back(&e);
    for (std::size_t qi = 0; qi < queue.size(); ++qi) {
      Item item = queue[qi];
      if (allowed && !(*allowed)[static_cast<std::size_t>(item.w)]) continue;
      Value a = cell(item.v, item.w).at(item.key);
      for (const auto* e : out_edges[static_cast<std::size_t>(item.w)]) {
        account_step();
        Value b = ops.mul(a, ops.edge_label(*e));
        std::string k = ops.key(b);
        if (insert(cell(item.v, e->to), b)) queue.push_back({item.v, e->to, std::move(k)});
      }
    }
  }

  PathImageTable finish(std::vector<int> order) {
    // Empty walks: the identity joins every diagonal cell last.
    for (int v = 0; v < g.vertices; ++v) insert(cell(v, v), ops.identity(v));
    PathImageTable t;
    t.vertices = g.vertices;
    t.monoid_mode = g.monoid_mode();
    t.elimination_order = std::move(order);
    t.steps = steps;
    std::size_t nn = cells.size();
    t.keys.resize(nn);
    if (t.monoid_mode) t.elements.resize(nn);
    else t.mats.resize(nn);
    for (std::size_t c = 0; c < nn; ++c) {
      for (auto& [k, v] : cells[c]) {
        t.keys[c].push_back(k);
        if constexpr (std::is_same_v<Value, int>) {
          t.elements[c].push_back(v);
        } else {
          t.mats[c].push_back(v);
        }
      }
    }
    return t;
  }
};

std::vector<int> default_order(int vertices) {
  std::vector<int> order(static_cast<std::size_t>(vertices));
  std::iota(order.begin(), order.end(), 0);
  return order;
}

void validate_order(const std::vector<int>& order, int vertices) {
  if (static_cast<int>(order.size()) != vertices) {
    fail(Errc::ParseError, "elimination order must list every vertex once");
  }
  std::vector<bool> seen(static_cast<std::size_t>(vertices), false);
  for (int x : order) {
    if (x < 0 || x >= vertices || seen[static_cast<std::size_t>(x)]) {
      fail(Errc::ParseError, "elimination order must be a permutation of the vertices");
    }
    seen[static_cast<std::size_t>(x)] = true;
  }
}

template <typename Ops>
PathImageTable run_elimination(const LabeledGraph& g, Ops ops, const std::vector<int>& order,
                               const Limits& limits) {
  Engine<Ops> eng(g, ops, limits);
  eng.seed_edges();
  for (int x : order) eng.eliminate(x);
  return eng.finish(order);
}

template <typename Ops>
PathImageTable run_bruteforce(const LabeledGraph& g, Ops ops, const std::vector<bool>* allowed,
                              const Limits& limits) {
  Engine<Ops> eng(g, ops, limits);
  eng.bruteforce(allowed);
  return eng.finish({});
}

}  // namespace

PathImageTable image_homsets(const LabeledGraph& graph, const std::vector<int>& order,
                             const Limits& limits) {
  graph.validate();
  validate_order(order, graph.vertices);
  if (graph.monoid_mode()) {
    return run_elimination(graph, MonoidOps{graph.monoid.get()}, order, limits);
  }
  return run_elimination(graph, MatrixOps{&graph}, order, limits);
}

PathImageTable image_homsets(const LabeledGraph& graph, const Limits& limits) {
  return image_homsets(graph, default_order(graph.vertices), limits);
}

PathImageTable image_homsets_bruteforce(const LabeledGraph& graph, const Limits& limits) {
  graph.validate();
  if (graph.monoid_mode()) {
    return run_bruteforce(graph, MonoidOps{graph.monoid.get()}, nullptr, limits);
  }
  return run_bruteforce(graph, MatrixOps{&graph}, nullptr, limits);
}

PathImageTable image_homsets_bruteforce_restricted(const LabeledGraph& graph,
                                                   const std::vector<int>& allowed,
                                                   const Limits& limits) {
  graph.validate();
  std::vector<bool> mask(static_cast<std::size_t>(graph.vertices), false);
  for (int v : allowed) {
    if (v < 0 || v >= graph.vertices) fail(Errc::ParseError, "allowed vertex out of range");
    mask[static_cast<std::size_t>(v)] = true;
  }
  if (graph.monoid_mode()) {
    return run_bruteforce(graph, MonoidOps{graph.monoid.get()}, &mask, limits);
  }
  return run_bruteforce(graph, MatrixOps{&graph}, &mask, limits);
}

std::vector<int> submonoid_closure(const FinMonoid& m, const std::vector<int>& seed,
                                   const Limits& limits) {
  std::vector<int> out;
  std::vector<bool> seen(m.size(), false);
  std::uint64_t steps = 0;
  auto push = [&](int x) {
    check_internal(x >= 0 && x < static_cast<int>(m.size()), "closure element out of range");
    if (!seen[static_cast<std::size_t>(x)]) {
      seen[static_cast<std::size_t>(x)] = true;
      out.push_back(x);
    }
  };
  push(m.identity());
  for (int s : seed) push(s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (int s : seed) {
      if (++steps > limits.max_steps) fail(Errc::LimitExceeded, "submonoid closure max_steps");
      push(m.mul(out[i], s));
      if (out.size() > limits.max_elements) {
        fail(Errc::LimitExceeded, "submonoid closure max_elements");
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Mat> submonoid_closure(const Field& field, int dim, const std::vector<Mat>& seed,
                                   const Limits& limits) {
  std::map<std::string, std::size_t> seen;
  std::vector<Mat> out;
  std::uint64_t steps = 0;
  auto push = [&](Mat v) {
    if (!v.is_square() || v.rows() != dim) fail(Errc::ShapeMismatch, "closure of non-square matrices");
    if (v.field() != field) fail(Errc::FieldMismatch, "closure over mixed fields");
    auto [it, fresh] = seen.emplace(v.key(), out.size());
    if (fresh) {
      out.push_back(std::move(v));
      if (out.size() > limits.max_elements) {
        fail(Errc::LimitExceeded, "submonoid closure max_elements");
      }
    }
  };
  push(Mat::identity(field, dim));
  for (const auto& s : seed) push(s);
  for (std::size_t i = 0; i < out.size(); ++i) {
    for (const auto& s : seed) {
      if (++steps > limits.max_steps) fail(Errc::LimitExceeded, "submonoid closure max_steps");
      push(out[i] * s);
    }
  }
  std::vector<std::pair<std::string, std::size_t>> keyed;
  keyed.reserve(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) keyed.emplace_back(out[i].key(), i);
  std::sort(keyed.begin(), keyed.end());
  std::vector<Mat> sorted;
  sorted.reserve(out.size());
  for (auto& [k, i] : keyed) sorted.push_back(std::move(out[static_cast<std::size_t>(i)]));
  return sorted;
}

}  // namespace burnside
