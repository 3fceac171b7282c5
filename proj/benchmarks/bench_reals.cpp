#include <benchmark/benchmark.h>

#include "l2approx/rational.hpp"
#include "l2approx/reals.hpp"

using namespace l2approx;

namespace {

void ln_enclosure_bits(benchmark::State& state) {
  const auto bits = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(ln_enclosure(Rational(3), bits));
}

void binary_expansion_third(benchmark::State& state) {
  const auto digits = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    RealStream r = RealStream::constant(Rational(1, 3));
    benchmark::DoNotOptimize(to_binary_expansion(r, digits, 100000).digits.size());
  }
}

}  // namespace

BENCHMARK(ln_enclosure_bits)->Arg(40)->Arg(128)->Arg(512);
BENCHMARK(binary_expansion_third)->Arg(16)->Arg(64);
