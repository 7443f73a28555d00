#include <benchmark/benchmark.h>

#include <map>
#include <memory>
#include <random>

#include "mixedwave/assembly.hpp"
#include "mixedwave/kernels.hpp"
#include "mixedwave/postprocess.hpp"

using namespace mixedwave;

namespace {

struct Fixture {
  explicit Fixture(int n)
      : mesh(generate_rect_mesh({-1, -1, 1, 1}, n)), space(mesh), mass(assemble_exact_mass(space)), x(space.num_velocity()),
        y(space.num_velocity()) {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> d(-1, 1);
    for (auto& v : x) v = d(rng);
  }
  TriMesh mesh;
  Bdm1Space space;
  CsrMatrix mass;
  std::vector<double> x, y;
};

Fixture& fixture(int n) {
  static std::map<int, std::unique_ptr<Fixture>> cache;
  auto& f = cache[n];
  if (!f) f = std::make_unique<Fixture>(n);
  return *f;
}

void BM_spmv_parallel(benchmark::State& st) {
  auto& f = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) kernels::spmv(f.mass, f.x, f.y);
  st.SetItemsProcessed(st.iterations() * static_cast<long>(f.mass.nnz()));
}

void BM_spmv_serial(benchmark::State& st) {
  auto& f = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) serial::spmv(f.mass, f.x, f.y);
  st.SetItemsProcessed(st.iterations() * static_cast<long>(f.mass.nnz()));
}

void BM_dot_parallel(benchmark::State& st) {
  auto& f = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(kernels::dot(f.x, f.x));
}

void BM_dot_serial(benchmark::State& st) {
  auto& f = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(serial::dot(f.x, f.x));
}

void BM_lumped_mass_parallel(benchmark::State& st) {
  auto& f = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(assemble_lumped_mass(f.space));
}

void BM_lumped_mass_serial(benchmark::State& st) {
  auto& f = fixture(static_cast<int>(st.range(0)));
  for (auto _ : st) benchmark::DoNotOptimize(serial::assemble_lumped_mass(f.space));
}

void BM_pp_pressure_parallel(benchmark::State& st) {
  auto& f = fixture(static_cast<int>(st.range(0)));
  std::vector<double> p(f.space.num_pressure(), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(pp_pressure(f.space, f.x, p));
}

void BM_pp_pressure_serial(benchmark::State& st) {
  auto& f = fixture(static_cast<int>(st.range(0)));
  std::vector<double> p(f.space.num_pressure(), 1.0);
  for (auto _ : st) benchmark::DoNotOptimize(serial::pp_pressure(f.space, f.x, p));
}

}  // namespace

BENCHMARK(BM_spmv_parallel)->Arg(32)->Arg(64);
BENCHMARK(BM_spmv_serial)->Arg(32)->Arg(64);
BENCHMARK(BM_dot_parallel)->Arg(64);
BENCHMARK(BM_dot_serial)->Arg(64);
BENCHMARK(BM_lumped_mass_parallel)->Arg(64);
BENCHMARK(BM_lumped_mass_serial)->Arg(64);
BENCHMARK(BM_pp_pressure_parallel)->Arg(64);
BENCHMARK(BM_pp_pressure_serial)->Arg(64);

BENCHMARK_MAIN();
