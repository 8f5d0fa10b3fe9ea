#include "burnside/io.hpp"

#include <algorithm>
#include <memory>
#include <sstream>
#include <utility>

#include <json.hpp>

#include "burnside/errors.hpp"

namespace burnside {

namespace {

using nlohmann::json;

json parse_text(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    fail(Errc::ParseError, std::string("invalid JSON: ") + e.what());
  }
}

const json& require(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    fail(Errc::ParseError, std::string("missing required key \"") + key + "\"");
  return j.at(key);
}

long as_long(const json& j, const char* what) {
  if (!j.is_number_integer())
    fail(Errc::ParseError, std::string(what) + " must be an integer");
  return j.get<long>();
}

std::uint64_t as_u64(const json& j, const char* what) {
  if (!j.is_number_integer() || (j.is_number_integer() && j.get<long long>() < 0))
    fail(Errc::ParseError, std::string(what) + " must be a nonnegative integer");
  return j.get<std::uint64_t>();
}

Field field_from_json(const json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "Q" || s == "q") return Field::rationals();
    fail(Errc::ParseError, "field string must be \"Q\"");
  }
  if (!j.is_object()) fail(Errc::ParseError, "field must be \"Q\" or an object with \"p\"");
  std::uint64_t p = as_u64(require(j, "p"), "field characteristic");
  std::size_t k = 1;
  if (j.contains("k")) k = static_cast<std::size_t>(as_u64(j.at("k"), "field degree"));
  if (k == 0) fail(Errc::ParseError, "field degree must be positive");
  if (j.contains("modulus")) {
    const json& mj = j.at("modulus");
    if (!mj.is_array()) fail(Errc::ParseError, "modulus must be an array of coefficients");
    std::vector<std::uint64_t> mod;
    for (const auto& c : mj) mod.push_back(as_u64(c, "modulus coefficient"));
    if (mod.size() != k + 1)
      fail(Errc::ParseError, "modulus must list k + 1 coefficients, constant first");
    return Field::extension(p, std::move(mod));
  }
  if (k == 1) return Field::prime(p);
  return Field::extension(p, k);
}

json field_to_json(const Field& f) {
  if (f.is_rationals()) return json("Q");
  json j;
  j["p"] = f.characteristic();
  if (f.degree() > 1) {
    j["k"] = f.degree();
    j["modulus"] = f.modulus();
  }
  return j;
}

Scalar scalar_from_json(const json& j, const Field& f) {
  if (j.is_number_float())
    fail(Errc::ParseError, "floating point entries are not accepted; use exact strings");
  if (j.is_number_integer()) return f.from_int(j.get<long>());
  if (j.is_string()) return f.parse(j.get<std::string>());
  if (j.is_array() && f.is_finite()) {
    std::vector<std::int64_t> cs;
    for (const auto& c : j) cs.push_back(as_long(c, "coefficient"));
    return f.from_coeffs(std::move(cs));
  }
  fail(Errc::ParseError, "unrecognized scalar entry");
}

json scalar_to_json(const Scalar& s) {
  const Field& f = s.field();
  if (f.is_rationals()) return json(s.str());
  const auto& cs = s.coeffs();
  if (f.degree() == 1) return json(cs[0]);
  return json(cs);
}

Mat mat_from_json(const json& j, const Field& f) {
  if (!j.is_array() || j.empty() || !j.at(0).is_array())
    fail(Errc::ParseError, "matrix must be a nonempty array of rows");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j.at(0).size());
  if (cols == 0) fail(Errc::ParseError, "matrix rows must be nonempty");
  Mat m(f, rows, cols);
  for (int r = 0; r < rows; ++r) {
    const json& row = j.at(static_cast<std::size_t>(r));
    if (!row.is_array() || static_cast<int>(row.size()) != cols)
      fail(Errc::ParseError, "matrix rows must all have the same length");
    for (int c = 0; c < cols; ++c)
      m.set(r, c, scalar_from_json(row.at(static_cast<std::size_t>(c)), f));
  }
  return m;
}

json mat_to_json(const Mat& m) {
  json rows = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(scalar_to_json(m.at(r, c)));
    rows.push_back(std::move(row));
  }
  return rows;
}

Limits limits_from_json(const json& j, const Limits& defaults) {
  Limits l = defaults;
  if (!j.is_object()) fail(Errc::ParseError, "limits must be an object");
  if (j.contains("max_elements"))
    l.max_elements = static_cast<std::size_t>(as_u64(j.at("max_elements"), "max_elements"));
  if (j.contains("max_steps")) l.max_steps = as_u64(j.at("max_steps"), "max_steps");
  if (j.contains("cap_powers")) l.cap_powers = as_u64(j.at("cap_powers"), "cap_powers");
  return l;
}

json limits_to_json(const Limits& l) {
  json j;
  j["max_elements"] = l.max_elements;
  j["max_steps"] = l.max_steps;
  j["cap_powers"] = l.cap_powers;
  return j;
}

std::shared_ptr<const FinMonoid> monoid_from_json(const json& j) {
  const std::size_t size = static_cast<std::size_t>(as_u64(require(j, "size"), "monoid size"));
  if (size == 0) fail(Errc::ParseError, "monoid size must be positive");
  const int identity = static_cast<int>(as_long(require(j, "identity"), "identity"));

  std::vector<int> gens;
  for (const auto& g : require(j, "generators")) {
    if (!g.is_number_integer()) fail(Errc::ParseError, "generators must be element indices");
    gens.push_back(g.get<int>());
  }

  const json& tj = require(j, "table");
  if (!tj.is_array()) fail(Errc::ParseError, "table must be an array");
  std::vector<int> table;
  if (!tj.empty() && tj.at(0).is_array()) {
    for (const auto& row : tj) {
      if (!row.is_array() || row.size() != size)
        fail(Errc::ParseError, "table rows must have one entry per element");
      for (const auto& e : row) table.push_back(static_cast<int>(as_long(e, "table entry")));
    }
  } else {
    for (const auto& e : tj) table.push_back(static_cast<int>(as_long(e, "table entry")));
  }
  if (table.size() != size * size)
    fail(Errc::ParseError, "table must have size * size entries");

  std::vector<std::string> keys;
  if (j.contains("keys")) {
    for (const auto& k : j.at("keys")) {
      if (!k.is_string()) fail(Errc::ParseError, "keys must be strings");
      keys.push_back(k.get<std::string>());
    }
    if (keys.size() != size) fail(Errc::ParseError, "keys must list one name per element");
  } else {
    for (std::size_t i = 0; i < size; ++i) keys.push_back("m" + std::to_string(i));
  }

  return std::make_shared<const FinMonoid>(
      FinMonoid::from_table(std::move(keys), table, identity, std::move(gens), true));
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

// First path where the two documents differ, for mismatch messages.
std::string short_dump(const json& j) {
  std::string s = j.dump();
  if (s.size() > 120) s = s.substr(0, 117) + "...";
  return s;
}

bool json_diff(const json& a, const json& b, const std::string& path, std::string& out) {
  if (a == b) return false;
  if (a.is_object() && b.is_object()) {
    for (auto it = a.begin(); it != a.end(); ++it) {
      const std::string sub = path.empty() ? it.key() : path + "." + it.key();
      if (!b.contains(it.key())) {
        out = sub + ": present only in the recomputed document";
        return true;
      }
      if (json_diff(it.value(), b.at(it.key()), sub, out)) return true;
    }
    for (auto it = b.begin(); it != b.end(); ++it) {
      if (!a.contains(it.key())) {
        out = (path.empty() ? it.key() : path + "." + it.key()) +
              ": present only in the supplied document";
        return true;
      }
    }
    out = path + ": objects differ";
    return true;
  }
  if (a.is_array() && b.is_array()) {
    if (a.size() != b.size()) {
      out = path + ": array length " + std::to_string(a.size()) + " vs " +
            std::to_string(b.size());
      return true;
    }
    for (std::size_t i = 0; i < a.size(); ++i) {
      const std::string sub = path + "[" + std::to_string(i) + "]";
      if (json_diff(a.at(i), b.at(i), sub, out)) return true;
    }
    out = path + ": arrays differ";
    return true;
  }
  out = path + ": " + short_dump(a) + " vs " + short_dump(b);
  return true;
}

json trace_set_to_json(const TraceSet& t) {
  json j;
  j["count"] = t.count.get_str();
  j["enumerated"] = t.enumerated;
  if (!t.values.empty()) {
    json vals = json::array();
    for (const Scalar& v : t.values) vals.push_back(scalar_to_json(v));
    j["values"] = std::move(vals);
  }
  if (!t.unity_orders.empty()) j["unity_orders"] = t.unity_orders;
  return j;
}

json block_to_json(const BlockReport& b) {
  json j;
  j["index"] = b.index;
  j["size"] = b.size;
  j["path"] = b.path;
  j["spans"] = b.spans;
  j["algebra_dim"] = b.algebra_dim;
  if (b.order) j["order"] = *b.order;
  if (b.bound) j["bound"] = b.bound->get_str();
  if (b.traces) j["traces"] = trace_set_to_json(*b.traces);
  if (b.basis) {
    json bj;
    bj["indices"] = b.basis->indices;
    json words = json::array();
    for (const auto& w : b.basis->words) words.push_back(word_string(w));
    bj["words"] = std::move(words);
    bj["gram"] = mat_to_json(b.basis->gram);
    bj["gram_inv"] = mat_to_json(b.basis->gram_inv);
    j["basis"] = std::move(bj);
  }
  if (!b.note.empty()) j["note"] = b.note;
  if (b.ext_field) {
    json ej;
    ej["field"] = field_to_json(*b.ext_field);
    ej["block_sizes"] = b.ext_block_sizes;
    json subs = json::array();
    for (const auto& s : b.sub_blocks) subs.push_back(block_to_json(s));
    ej["sub_blocks"] = std::move(subs);
    j["extension"] = std::move(ej);
  }
  return j;
}

json certificate_doc(const std::vector<Mat>& gens, const FinitenessReport& rep) {
  json j;
  j["format"] = "burnside-certificate";
  j["version"] = 1;
  j["field"] = field_to_json(gens.front().field());
  j["n"] = gens.front().rows();
  json gj = json::array();
  for (const Mat& g : gens) gj.push_back(mat_to_json(g));
  j["generators"] = std::move(gj);
  j["limits"] = limits_to_json(rep.limits_used);
  j["verdict"] = verdict_name(rep.verdict);
  if (rep.order) j["order"] = *rep.order;
  if (rep.witness) {
    json w;
    w["word"] = word_string(rep.witness->word);
    w["word_indices"] = rep.witness->word;
    w["reason"] = rep.witness->reason;
    w["element"] = mat_to_json(rep.witness->element);
    j["witness"] = std::move(w);
  }
  json powers = json::array();
  for (const auto& gp : rep.generator_powers) {
    json p;
    p["generator"] = gp.generator + 1;
    p["cap"] = gp.cap_used;
    p["certified"] = gp.certified;
    p["steps"] = gp.steps;
    if (gp.period) {
      p["index"] = gp.period->index;
      p["period"] = gp.period->period;
    }
    powers.push_back(std::move(p));
  }
  j["generator_powers"] = std::move(powers);
  if (rep.flag) {
    json c;
    c["q"] = mat_to_json(rep.flag->q);
    c["q_inv"] = mat_to_json(rep.flag->q_inv);
    c["block_sizes"] = rep.flag->block_sizes;
    j["conjugation"] = std::move(c);
  }
  if (!rep.blocks.empty()) {
    json blocks = json::array();
    for (const auto& b : rep.blocks) blocks.push_back(block_to_json(b));
    j["blocks"] = std::move(blocks);
  }
  {
    json k;
    if (rep.kernel_arrows) k["arrows"] = *rep.kernel_arrows;
    k["note"] = rep.kernel_note.empty() ? "not run" : rep.kernel_note;
    j["kernel"] = std::move(k);
  }
  {
    json c;
    c["complete"] = rep.closure_stats.complete;
    c["steps"] = rep.closure_stats.steps;
    c["frontier"] = rep.closure_stats.frontier_at_stop;
    j["closure"] = std::move(c);
  }
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

}  // namespace

JobInput parse_job(const std::string& text, const Limits& defaults) {
  json j = parse_text(text);
  JobInput in;
  in.limits = defaults;
  in.field = field_from_json(require(j, "field"));
  const json& gj = require(j, "generators");
  if (!gj.is_array() || gj.empty())
    fail(Errc::ParseError, "generators must be a nonempty array of matrices");
  for (const auto& g : gj) in.generators.push_back(mat_from_json(g, in.field));
  if (j.contains("n")) {
    const int n = static_cast<int>(as_long(j.at("n"), "n"));
    for (const Mat& g : in.generators)
      if (g.rows() != n || g.cols() != n)
        fail(Errc::ParseError, "generators must be n x n with the declared n");
  }
  if (j.contains("limits")) in.limits = limits_from_json(j.at("limits"), defaults);
  return in;
}

GraphJob parse_graph_job(const std::string& text) {
  json j = parse_text(text);
  GraphJob out;
  LabeledGraph& g = out.graph;
  g.vertices = static_cast<int>(as_long(require(j, "vertices"), "vertices"));
  if (g.vertices <= 0) fail(Errc::ParseError, "vertices must be positive");

  const bool monoid_mode = j.contains("monoid");
  if (monoid_mode) {
    g.monoid = monoid_from_json(j.at("monoid"));
  } else {
    g.field = field_from_json(require(j, "field"));
    const json& dj = require(j, "dims");
    if (!dj.is_array() || static_cast<int>(dj.size()) != g.vertices)
      fail(Errc::ParseError, "dims must list one dimension per vertex");
    for (const auto& d : dj) {
      const int dim = static_cast<int>(as_long(d, "dimension"));
      if (dim <= 0) fail(Errc::ParseError, "dimensions must be positive");
      g.dims.push_back(dim);
    }
  }

  if (j.contains("edges")) {
    for (const auto& ej : j.at("edges")) {
      LabeledGraph::Edge e;
      e.from = static_cast<int>(as_long(require(ej, "from"), "edge endpoint"));
      e.to = static_cast<int>(as_long(require(ej, "to"), "edge endpoint"));
      if (e.from < 0 || e.from >= g.vertices || e.to < 0 || e.to >= g.vertices)
        fail(Errc::ParseError, "edge endpoint out of range");
      const json& lj = require(ej, "label");
      if (monoid_mode) {
        if (lj.is_number_integer()) {
          e.label_elt = lj.get<int>();
          if (e.label_elt < 0 || static_cast<std::size_t>(e.label_elt) >= g.monoid->size())
            fail(Errc::ParseError, "edge label index out of range");
        } else if (lj.is_string()) {
          e.label_elt = g.monoid->find(lj.get<std::string>());
          if (e.label_elt < 0) fail(Errc::ParseError, "edge label key not in the monoid");
        } else {
          fail(Errc::ParseError, "edge label must be an element index or key");
        }
      } else {
        e.label_mat = mat_from_json(lj, *g.field);
      }
      g.edges.push_back(std::move(e));
    }
  }

  if (j.contains("order")) {
    for (const auto& o : j.at("order"))
      out.order.push_back(static_cast<int>(as_long(o, "order entry")));
  }
  g.validate();
  return out;
}

std::string closure_json(ClosureResult& result, bool include_carrier,
                         std::size_t table_threshold) {
  FinMonoid& m = result.monoid;
  if (result.stats.complete) m.ensure_table(table_threshold);
  json j;
  j["complete"] = result.stats.complete;
  j["steps"] = result.stats.steps;
  j["frontier"] = result.stats.frontier_at_stop;
  j["size"] = m.size();
  j["identity"] = m.identity();
  j["generators"] = m.generators();
  json keys = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) keys.push_back(m.key(static_cast<int>(i)));
  j["keys"] = std::move(keys);
  j["gen_table"] = m.gen_table();
  if (m.has_table()) {
    std::vector<std::int32_t> flat;
    flat.reserve(m.size() * m.size());
    for (std::size_t a = 0; a < m.size(); ++a)
      for (std::size_t b = 0; b < m.size(); ++b)
        flat.push_back(m.mul(static_cast<int>(a), static_cast<int>(b)));
    j["table"] = std::move(flat);
  }
  if (include_carrier && m.has_carrier()) {
    j["field"] = field_to_json(m.carrier(0).field());
    json mats = json::array();
    for (std::size_t i = 0; i < m.size(); ++i)
      mats.push_back(mat_to_json(m.carrier(static_cast<int>(i))));
    j["carrier"] = std::move(mats);
  }
  return dump(j);
}

std::string flag_json(const FlagDecomposition& flag) {
  json j;
  j["field"] = field_to_json(flag.q.field());
  j["block_sizes"] = flag.block_sizes;
  j["q"] = mat_to_json(flag.q);
  j["q_inv"] = mat_to_json(flag.q_inv);
  json conj = json::array();
  for (const Mat& c : flag.conjugated) conj.push_back(mat_to_json(c));
  j["conjugated"] = std::move(conj);
  return dump(j);
}

std::string path_table_json(const PathImageTable& table) {
  json j;
  j["vertices"] = table.vertices;
  j["mode"] = table.monoid_mode ? "monoid" : "matrix";
  j["elimination_order"] = table.elimination_order;
  j["total"] = table.total();
  j["steps"] = table.steps;
  json cells = json::array();
  for (int v = 0; v < table.vertices; ++v)
    for (int w = 0; w < table.vertices; ++w) {
      json c;
      c["from"] = v;
      c["to"] = w;
      const auto& ks = table.cell(v, w);
      c["size"] = ks.size();
      c["keys"] = ks;
      cells.push_back(std::move(c));
    }
  j["cells"] = std::move(cells);
  return dump(j);
}

std::string kernel_json(const KernelContext& ctx, const KernelClosure& closure,
                        std::size_t arrow_listing_limit) {
  const KernelCat& cat = closure.cat;
  json j;
  j["mode"] = ctx.is_enumerated() ? "enumerated" : "block";
  j["n_order"] = ctx.n_monoid().size();
  j["generator_count"] = ctx.generator_count();
  j["complete"] = cat.complete;
  j["unit_object"] = cat.unit_object;
  json objs = json::array();
  for (const auto& [p, q] : cat.objects) objs.push_back(json::array({p, q}));
  j["objects"] = std::move(objs);
  j["arrow_count"] = cat.arrows.size();
  j["steps"] = closure.stats.steps;
  if (cat.arrows.size() <= arrow_listing_limit) {
    json arrows = json::array();
    for (const auto& a : cat.arrows) {
      json aj;
      aj["n1"] = a.n1;
      aj["n2"] = a.n2;
      aj["src"] = a.src;
      aj["dst"] = a.dst;
      aj["word"] = a.word;
      aj["key_digest"] = hex64(fnv1a64(a.key));
      arrows.push_back(std::move(aj));
    }
    j["arrows"] = std::move(arrows);
  } else {
    j["arrows_omitted"] = true;
  }
  return dump(j);
}

std::string certificate_json(const std::vector<Mat>& gens, const FinitenessReport& rep) {
  check_internal(!gens.empty(), "certificate needs generators");
  return dump(certificate_doc(gens, rep));
}

VerifyResult verify_certificate(const std::string& certificate_text) {
  json cert = parse_text(certificate_text);
  VerifyResult r;
  if (!cert.is_object() || !cert.contains("format") ||
      cert.at("format") != "burnside-certificate" || !cert.contains("version") ||
      cert.at("version") != 1) {
    r.status = VerifyStatus::Mismatch;
    r.message = "unrecognized certificate format or version";
    return r;
  }
  Field f = field_from_json(require(cert, "field"));
  const json& gj = require(cert, "generators");
  if (!gj.is_array() || gj.empty())
    fail(Errc::ParseError, "certificate lists no generators");
  std::vector<Mat> gens;
  for (const auto& g : gj) gens.push_back(mat_from_json(g, f));
  Limits limits = limits_from_json(require(cert, "limits"), Limits{});

  FinitenessReport rep = decide_finiteness(gens, limits);
  json rebuilt = certificate_doc(gens, rep);
  if (rebuilt != cert) {
    std::string where;
    json_diff(rebuilt, cert, "", where);
    r.status = VerifyStatus::Mismatch;
    r.message = "recomputation diverges at " + where;
    return r;
  }
  if (rep.verdict == Verdict::Inconclusive) {
    r.status = VerifyStatus::Inconclusive;
    r.message = "certificate reproduced, but its verdict is inconclusive";
    return r;
  }
  r.status = VerifyStatus::Ok;
  r.message = "certificate reproduced exactly";
  return r;
}

std::string canonicalize(const std::string& json_text) { return dump(parse_text(json_text)); }

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[v & 0xf];
    v >>= 4;
  }
  return out;
}

std::string cache_name(std::string_view command, std::string_view canonical_input) {
  std::string seed;
  seed.append(command);
  seed.push_back('\n');
  seed.append(canonical_input);
  seed.append("\nburnside-cache-v1");
  return std::string(command) + "-" + hex64(fnv1a64(seed)) + ".json";
}

}  // namespace burnside
