#include <benchmark/benchmark.h>

#include "l2approx/groupring.hpp"
#include "l2approx/oracles.hpp"

using namespace l2approx;

namespace {

// Powers of the degree-4 walk element over Z^2; support grows quadratically.
void groupring_walk_power(benchmark::State& state) {
  OracleRef z2 = oracle_free_abelian(2);
  GroupRingElement step(z2);
  const Alphabet& ab = z2->alphabet();
  for (const char* w : {"a", "a^-1", "b", "b^-1"})
    step.add_term(parse_word(w, ab), Rational(1, 4), {});
  const auto depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    GroupRingElement acc = GroupRingElement::one(z2);
    for (std::size_t i = 0; i < depth; ++i) acc = mul(acc, step, {});
    benchmark::DoNotOptimize(acc.term_count());
  }
}

void groupring_free_power(benchmark::State& state) {
  OracleRef f2 = oracle_free(Alphabet({"a", "b"}));
  GroupRingElement step(f2);
  const Alphabet& ab = f2->alphabet();
  for (const char* w : {"a", "a^-1", "b", "b^-1"})
    step.add_term(parse_word(w, ab), Rational(1, 4), {});
  const auto depth = static_cast<std::size_t>(state.range(0));
  for (auto _ : state) {
    GroupRingElement acc = GroupRingElement::one(f2);
    for (std::size_t i = 0; i < depth; ++i) acc = mul(acc, step, {});
    benchmark::DoNotOptimize(acc.term_count());
  }
}

}  // namespace

BENCHMARK(groupring_walk_power)->Arg(16)->Arg(32);
BENCHMARK(groupring_free_power)->Arg(6)->Arg(8);
