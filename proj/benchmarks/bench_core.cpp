#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <burnside/finiteness.hpp>
#include <burnside/kernel_category.hpp>
#include <burnside/kleene.hpp>
#include <burnside/monoid.hpp>
#include <burnside/triangular.hpp>

using namespace burnside;

namespace {

Mat mat_of(const Field& f, const std::vector<std::vector<long>>& rows) {
  Mat m(f, static_cast<int>(rows.size()), static_cast<int>(rows[0].size()));
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < rows[r].size(); ++c)
      m.set(static_cast<int>(r), static_cast<int>(c), f.from_int(rows[r][c]));
  return m;
}

std::vector<Mat> s3_generators() {
  const Field q = Field::rationals();
  return {mat_of(q, {{0, 1, 0}, {1, 0, 0}, {0, 0, 1}}),
          mat_of(q, {{0, 1, 0}, {0, 0, 1}, {1, 0, 0}})};
}

std::vector<Mat> m2_gf2_generators() {
  const Field f = Field::prime(2);
  return {mat_of(f, {{0, 1}, {1, 0}}), mat_of(f, {{1, 1}, {0, 1}}), mat_of(f, {{1, 0}, {0, 0}})};
}

Mat random_matrix(std::mt19937& rng, const Field& f, int n) {
  Mat m(f, n, n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m.set(r, c, f.from_int(static_cast<long>(rng() % 7)));
  return m;
}

std::shared_ptr<const FinMonoid> ut2_gf3_monoid() {
  const Field f = Field::prime(3);
  ClosureResult r = close_matrices(
      {mat_of(f, {{1, 1}, {0, 1}}), mat_of(f, {{2, 0}, {0, 1}}), mat_of(f, {{1, 0}, {0, 2}})},
      Limits{});
  r.monoid.ensure_table();
  return std::make_shared<const FinMonoid>(std::move(r.monoid));
}

void bm_matrix_product(benchmark::State& state) {
  std::mt19937 rng(7);
  const Field q = Field::rationals();
  const int n = static_cast<int>(state.range(0));
  const Mat a = random_matrix(rng, q, n);
  const Mat b = random_matrix(rng, q, n);
  for (auto _ : state) benchmark::DoNotOptimize(a * b);
}
BENCHMARK(bm_matrix_product)->Arg(4)->Arg(8)->Arg(16);

void bm_closure_m2_gf2(benchmark::State& state) {
  const auto gens = m2_gf2_generators();
  for (auto _ : state) benchmark::DoNotOptimize(close_matrices(gens, Limits{}));
}
BENCHMARK(bm_closure_m2_gf2);

void bm_decide_s3(benchmark::State& state) {
  const auto gens = s3_generators();
  for (auto _ : state) benchmark::DoNotOptimize(decide_finiteness(gens, Limits{}));
}
BENCHMARK(bm_decide_s3);

void bm_triangularize_s3(benchmark::State& state) {
  const auto gens = s3_generators();
  for (auto _ : state) benchmark::DoNotOptimize(triangularize(gens));
}
BENCHMARK(bm_triangularize_s3);

void bm_kernel_category_ut2(benchmark::State& state) {
  auto dom = ut2_gf3_monoid();
  auto phi = hom_block_diagonal(dom, {1, 1});
  auto ctx = KernelContext::enumerated(phi);
  for (auto _ : state) benchmark::DoNotOptimize(kernel_category(ctx, Limits{}));
}
BENCHMARK(bm_kernel_category_ut2);

void bm_kleene_elimination(benchmark::State& state) {
  std::mt19937 rng(11);
  auto monoid = ut2_gf3_monoid();
  LabeledGraph g;
  g.vertices = 5;
  g.monoid = monoid;
  for (int e = 0; e < 8; ++e) {
    LabeledGraph::Edge ed;
    ed.from = static_cast<int>(rng() % 5);
    ed.to = static_cast<int>(rng() % 5);
    ed.label_elt = static_cast<int>(rng() % monoid->size());
    g.edges.push_back(ed);
  }
  for (auto _ : state) benchmark::DoNotOptimize(image_homsets(g, Limits{}));
}
BENCHMARK(bm_kleene_elimination);

}  // namespace

BENCHMARK_MAIN();
