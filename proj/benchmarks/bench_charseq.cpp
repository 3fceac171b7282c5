#include <benchmark/benchmark.h>

#include "l2approx/oracles.hpp"
#include "l2approx/spectral.hpp"

using namespace l2approx;

namespace {

GroupRingMatrix laurent_1mt(const OracleRef& oracle) {
  GroupRingMatrix a(oracle, 1, 1);
  a.at(0, 0).add_term(Word{}, Rational(1), {});
  a.at(0, 0).add_term(parse_word("t", oracle->alphabet()), Rational(-1), {});
  return a;
}

void charseq_z_depth(benchmark::State& state) {
  OracleRef z = oracle_free_abelian(1);
  GroupRingMatrix a = laurent_1mt(z);
  const auto depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    CharSeq seq(a, Rational(2));
    benchmark::DoNotOptimize(seq.at(depth));
  }
}

void charseq_free_column(benchmark::State& state) {
  OracleRef f2 = oracle_free(Alphabet({"a", "b"}));
  GroupRingMatrix a(f2, 2, 1);
  a.at(0, 0).add_term(parse_word("a", f2->alphabet()), Rational(1), {});
  a.at(0, 0).add_term(Word{}, Rational(-1), {});
  a.at(1, 0).add_term(parse_word("b", f2->alphabet()), Rational(1), {});
  a.at(1, 0).add_term(Word{}, Rational(-1), {});
  const auto depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    CharSeq seq(a, Rational(4));
    benchmark::DoNotOptimize(seq.at(depth));
  }
}

}  // namespace

BENCHMARK(charseq_z_depth)->Arg(64)->Arg(256);
BENCHMARK(charseq_free_column)->Arg(4)->Arg(8);

BENCHMARK_MAIN();
