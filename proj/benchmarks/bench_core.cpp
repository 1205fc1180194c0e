#include <benchmark/benchmark.h>

#include "pretlab/equations.hpp"
#include "pretlab/gridwitness.hpp"
#include "pretlab/multfun.hpp"
#include "pretlab/rotation.hpp"

using namespace pretlab;

namespace {

void BM_SievePrimes(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(sieve_primes(state.range(0)));
}
BENCHMARK(BM_SievePrimes)->Arg(10'000)->Arg(1'000'000);

void BM_Factorize(benchmark::State& state) {
  Int n = 1;
  for (long v = 2; v <= state.range(0); ++v) n = n * 97 % 999'999'937 + 2;
  for (auto _ : state) {
    Int x = 2;
    for (long i = 0; i < state.range(0); ++i) {
      benchmark::DoNotOptimize(factorize(x));
      x = x * 37 % 1'000'000 + 2;
    }
  }
}
BENCHMARK(BM_Factorize)->Arg(1000);

void BM_Omega(benchmark::State& state) {
  BinaryQuadraticForm P{1, 0, 1};
  for (auto _ : state) {
    unsigned long acc = 0;
    for (std::uint64_t p : sieve_primes(state.range(0))) acc += omega(P, Int(p));
    benchmark::DoNotOptimize(acc);
  }
}
BENCHMARK(BM_Omega)->Arg(10'000);

void BM_EvalFastPath(benchmark::State& state) {
  auto f = mf_tweaked(
      mf_character_lift(characters_mod(8)[2], {{Int(2), UnitComplex(0.0)}}),
      {{Int(7), UnitComplex(0.4)}});
  FastEval fe(f);
  Int big = pow_int(Int(10), 40) + 7;
  for (auto _ : state) benchmark::DoNotOptimize(fe(big));
}
BENCHMARK(BM_EvalFastPath);

void BM_JointMeasure(benchmark::State& state) {
  RotationSystem sys{{mf_character_lift(characters_mod(8)[2], {{Int(2), UnitComplex(0.0)}}),
                      mf_archimedean(0.7)}};
  ArcSet A = make_arc_set({Arc{0.1, 2.0}, Arc{1.2, 2.5}});
  for (auto _ : state) benchmark::DoNotOptimize(joint_measure(sys, A, 7, 23, 17));
}
BENCHMARK(BM_JointMeasure);

void BM_ConstructWitness(benchmark::State& state) {
  CaseTag tag = make_case_tag(WitnessCase::AcP2Reducible, 1, 1, 1);
  CaseFamilies fams = case_families(tag, 0, 7, 11, 29);
  GridParams params = make_grid_params(tag, 0, 7, 11, 29, 1.9, sample_folner(fams.f1, 1, 1)[0],
                                       sample_folner(fams.f2, 1, 2)[0],
                                       sample_folner(fams.f3, 1, 3)[0]);
  for (auto _ : state) benchmark::DoNotOptimize(construct_v(params));
}
BENCHMARK(BM_ConstructWitness);

}  // namespace

BENCHMARK_MAIN();
