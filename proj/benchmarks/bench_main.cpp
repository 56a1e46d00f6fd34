#include <benchmark/benchmark.h>

#include "mulab/linalg.hpp"

namespace {

// Structured test matrix with known-interesting elimination behaviour:
// entries (i*j mod m) - m/2, full rank for generic m.
mulab::IntMat structured(long n, long m) {
  mulab::IntMat A(n, n);
  for (long i = 0; i < n; i++)
    for (long j = 0; j < n; j++) A.at(i, j) = ((i + 2) * (j + 3)) % m - m / 2 + i * (j % 5);
  return A;
}

void BM_smith(benchmark::State& state) {
  long n = state.range(0);
  mulab::IntMat A = structured(n, 97);
  for (auto _ : state) {
    auto sf = mulab::smith_normal_form(A);
    benchmark::DoNotOptimize(sf.rank);
  }
}
BENCHMARK(BM_smith)->Arg(16)->Arg(32)->Arg(64);

void BM_charpoly(benchmark::State& state) {
  long n = state.range(0);
  mulab::IntMat A = structured(n, 23);
  for (auto _ : state) {
    auto cp = mulab::charpoly(A);
    benchmark::DoNotOptimize(cp.size());
  }
}
BENCHMARK(BM_charpoly)->Arg(8)->Arg(16)->Arg(32);

}  // namespace

BENCHMARK_MAIN();
