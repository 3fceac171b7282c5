#include <benchmark/benchmark.h>

#include <cstdint>

#include "l2approx/linalg.hpp"

using namespace l2approx;

namespace {

// Deterministic pseudo-random small integers without pulling in <random>.
std::int64_t mix(std::uint64_t& s) {
  s = s * 6364136223846793005ULL + 1442695040888963407ULL;
  return static_cast<std::int64_t>((s >> 33) % 19) - 9;
}

void rank_dense(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 42;
  RatMatrix a = rat_matrix(n, n);
  for (auto& row : a)
    for (auto& x : row) x = Rational(Integer(mix(seed)));
  for (auto _ : state) benchmark::DoNotOptimize(rank(a));
}

void nullspace_wide(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  std::uint64_t seed = 7;
  RatMatrix a = rat_matrix(n / 2, n);
  for (auto& row : a)
    for (auto& x : row) x = Rational(Integer(mix(seed)));
  for (auto _ : state) benchmark::DoNotOptimize(nullspace(a).size());
}

}  // namespace

BENCHMARK(rank_dense)->Arg(16)->Arg(32)->Arg(64);
BENCHMARK(nullspace_wide)->Arg(16)->Arg(32);
