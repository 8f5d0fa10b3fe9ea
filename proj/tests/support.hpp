#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "burnside/errors.hpp"
#include "burnside/finiteness.hpp"
#include "burnside/io.hpp"
#include "burnside/kernel_category.hpp"
#include "burnside/kleene.hpp"
#include "burnside/matrix.hpp"
#include "burnside/monoid.hpp"
#include "burnside/triangular.hpp"

namespace ts {

using namespace burnside;

inline Mat mat_of(const Field& f, const std::vector<std::vector<long>>& rows) {
  Mat m(f, static_cast<int>(rows.size()), static_cast<int>(rows.front().size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m.set(static_cast<int>(r), static_cast<int>(c), f.from_int(rows[r][c]));
  return m;
}

inline Mat mat_q(const std::vector<std::vector<long>>& rows) {
  return mat_of(Field::rationals(), rows);
}

// Permutation representations of the two generators (1 2) and (1 2 3).
inline std::vector<Mat> s3_gens(const Field& f = Field::rationals()) {
  return {mat_of(f, {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}),
          mat_of(f, {{0, 0, 1}, {1, 0, 0}, {0, 1, 0}})};
}

inline std::vector<Mat> shear(const Field& f) { return {mat_of(f, {{1, 1}, {0, 1}})}; }

// Generates all of M_2(GF(2)): a transposition, a shear, a rank-one
// idempotent.
inline std::vector<Mat> m2_gf2_gens() {
  const Field f = Field::prime(2);
  return {mat_of(f, {{0, 1}, {1, 0}}), mat_of(f, {{1, 1}, {0, 1}}),
          mat_of(f, {{1, 0}, {0, 0}})};
}

// Upper triangular 2x2 matrices over GF(2): an 8 element monoid.
inline std::vector<Mat> ut2_gf2_gens() {
  const Field f = Field::prime(2);
  return {mat_of(f, {{1, 1}, {0, 1}}), mat_of(f, {{1, 0}, {0, 0}}),
          mat_of(f, {{0, 0}, {0, 1}})};
}

// Dihedral group of order 8: rotation by a quarter turn and a reflection.
inline std::vector<Mat> d4_gens() {
  return {mat_q({{0, -1}, {1, 0}}), mat_q({{1, 0}, {0, -1}})};
}

inline Mat rot90() { return mat_q({{0, -1}, {1, 0}}); }

inline std::vector<Mat> s4_gens(const Field& f = Field::rationals()) {
  return {mat_of(f, {{0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}}),
          mat_of(f, {{0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}})};
}

inline Mat random_mat(std::mt19937& rng, const Field& f, int n) {
  Mat m(f, n, n);
  const unsigned long q = f.order().get_ui();
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m.set(r, c, f.element(rng() % q));
  return m;
}

inline Mat random_upper_triangular(std::mt19937& rng, const Field& f, int n) {
  Mat m(f, n, n);
  const unsigned long q = f.order().get_ui();
  for (int r = 0; r < n; ++r)
    for (int c = r; c < n; ++c) m.set(r, c, f.element(rng() % q));
  return m;
}

// Closure of a few random upper triangular 2x2 matrices, for kernel and
// stabilizer exercises. Always complete for the small fields used here.
inline std::shared_ptr<const FinMonoid> random_ut2_closure(std::mt19937& rng, const Field& f,
                                                           int gen_count = 2) {
  std::vector<Mat> gens;
  for (int i = 0; i < gen_count; ++i) gens.push_back(random_upper_triangular(rng, f, 2));
  ClosureResult r = close_matrices(gens, Limits{});
  check_internal(r.stats.complete, "fixture closure must complete");
  r.monoid.ensure_table();
  return std::make_shared<const FinMonoid>(std::move(r.monoid));
}

// Exhaustive category sanity: composability closure, endpoint bookkeeping,
// identity neutrality, associativity over all composable triples.
inline bool category_axioms_hold(const KernelContext& ctx, const KernelCat& cat) {
  if (!cat.complete) return false;
  const std::size_t a = cat.arrows.size();
  for (std::size_t f = 0; f < a; ++f) {
    const KernelArrow& af = cat.arrows[f];
    if (af.src < 0 || af.dst < 0) return false;
    const int idl = cat.identity_of[static_cast<std::size_t>(af.src)];
    const int idr = cat.identity_of[static_cast<std::size_t>(af.dst)];
    if (compose_lookup(ctx, cat, idl, static_cast<int>(f)) != static_cast<int>(f)) return false;
    if (compose_lookup(ctx, cat, static_cast<int>(f), idr) != static_cast<int>(f)) return false;
  }
  for (std::size_t f = 0; f < a; ++f)
    for (std::size_t g = 0; g < a; ++g) {
      if (cat.arrows[f].dst != cat.arrows[g].src) continue;
      const int fg = compose_lookup(ctx, cat, static_cast<int>(f), static_cast<int>(g));
      const KernelArrow& afg = cat.arrows[static_cast<std::size_t>(fg)];
      if (afg.src != cat.arrows[f].src || afg.dst != cat.arrows[g].dst) return false;
      for (std::size_t h = 0; h < a; ++h) {
        if (cat.arrows[g].dst != cat.arrows[h].src) continue;
        const int gh = compose_lookup(ctx, cat, static_cast<int>(g), static_cast<int>(h));
        if (compose_lookup(ctx, cat, fg, static_cast<int>(h)) !=
            compose_lookup(ctx, cat, static_cast<int>(f), gh))
          return false;
      }
    }
  return true;
}

// The self-arrow monoid at an object must realize the trace monoid at its
// coordinate pair: same size, and the class-to-arrow map [p, rep, q] must be
// bijective and multiplicative.
inline bool endo_matches_trace(const KernelContext& ctx, const MonoidHom& phi,
                               const KernelCat& cat, int obj) {
  const auto [p, q] = cat.objects[static_cast<std::size_t>(obj)];
  const TraceMonoid tm = trace_monoid(phi, p, q);
  const std::vector<int> self = cat.self_arrows(obj);
  if (self.size() != tm.class_rep.size()) return false;

  std::vector<int> arrow_of(tm.class_rep.size(), -1);
  std::vector<bool> hit(self.size(), false);
  for (std::size_t c = 0; c < tm.class_rep.size(); ++c) {
    const int id = cat.find_arrow(arrow_key(ctx, p, tm.class_rep[c], q));
    if (id < 0) return false;
    auto it = std::find(self.begin(), self.end(), id);
    if (it == self.end()) return false;
    const std::size_t pos = static_cast<std::size_t>(it - self.begin());
    if (hit[pos]) return false;
    hit[pos] = true;
    arrow_of[c] = id;
  }
  for (std::size_t x = 0; x < tm.class_rep.size(); ++x)
    for (std::size_t y = 0; y < tm.class_rep.size(); ++y) {
      const int prod = tm.table[x][y];
      if (compose_lookup(ctx, cat, arrow_of[x], arrow_of[y]) !=
          arrow_of[static_cast<std::size_t>(prod)])
        return false;
    }
  return true;
}

inline std::uint64_t totient_oracle(std::uint64_t k) {
  std::uint64_t count = 0;
  for (std::uint64_t i = 1; i <= k; ++i) {
    std::uint64_t a = i, b = k;
    while (b) {
      std::uint64_t t = a % b;
      a = b;
      b = t;
    }
    if (a == 1) ++count;
  }
  return count;
}

// Scratch directory shared by one test process.
inline const std::filesystem::path& scratch_dir() {
  static const std::filesystem::path dir = [] {
    auto d = std::filesystem::temp_directory_path() /
             ("burnside-tests-" + std::to_string(::getpid()));
    std::filesystem::create_directories(d);
    return d;
  }();
  return dir;
}

inline std::string write_scratch(const std::string& name, const std::string& content) {
  const auto p = scratch_dir() / name;
  std::ofstream out(p, std::ios::binary | std::ios::trunc);
  out << content;
  return p.string();
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct CliResult {
  int exit = -1;
  std::string out, err;
};

// Runs the command line under sh. extra is prepended verbatim (for
// environment assignments).
inline CliResult run_cli(const std::string& args, const std::string& extra_prefix = "") {
  static int counter = 0;
  const std::string tag = std::to_string(++counter);
  const auto out_path = scratch_dir() / ("out-" + tag);
  const auto err_path = scratch_dir() / ("err-" + tag);
  const std::string cmd = extra_prefix + std::string(BURNSIDE_CLI_PATH) + " " + args + " > " +
                          out_path.string() + " 2> " + err_path.string();
  const int rc = std::system(cmd.c_str());
  CliResult r;
  r.exit = WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
  r.out = read_file(out_path.string());
  r.err = read_file(err_path.string());
  return r;
}

inline std::string s3_job_json() {
  return R"({
  "field": "Q",
  "generators": [
    [["0","1","0"],["1","0","0"],["0","0","1"]],
    [["0","0","1"],["1","0","0"],["0","1","0"]]
  ]
})";
}

inline std::string shear_q_job_json() {
  return R"({"field": "Q", "generators": [[["1","1"],["0","1"]]]})";
}

inline std::string shear_gf3_job_json() {
  return R"({"field": {"p": 3}, "generators": [[[1,1],[0,1]]]})";
}

inline std::string ut2_gf2_job_json() {
  return R"({
  "field": {"p": 2},
  "generators": [
    [[1,1],[0,1]],
    [[1,0],[0,0]],
    [[0,0],[0,1]]
  ]
})";
}

inline std::string s4_job_json() {
  return R"({
  "field": "Q",
  "generators": [
    [["0","1","0","0"],["1","0","0","0"],["0","0","1","0"],["0","0","0","1"]],
    [["0","0","0","1"],["1","0","0","0"],["0","1","0","0"],["0","0","1","0"]]
  ]
})";
}

}  // namespace ts
