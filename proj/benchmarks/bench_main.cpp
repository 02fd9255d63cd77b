#include <benchmark/benchmark.h>

#include "gsbp/montecarlo.hpp"
#include "gsbp/occupancy.hpp"
#include "gsbp/priors.hpp"
#include "gsbp/random.hpp"
#include "gsbp/special.hpp"
#include "gsbp/tail_measure.hpp"
#include "gsbp/weights.hpp"

namespace {

using gsbp::SuccessPrior;
using gsbp::SuccessProbability;
using gsbp::WeightFamily;

void BM_Weight(benchmark::State& state) {
  const WeightFamily fam(static_cast<int>(state.range(0)));
  const SuccessProbability p(0.3);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsbp::weight(fam, p, 17));
  }
}
BENCHMARK(BM_Weight)->Arg(2)->Arg(3)->Arg(4)->Arg(6);

void BM_RoundLengthCdf(benchmark::State& state) {
  double t = 1e-6;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsbp::f_t(t));
    t = t < 30.0 ? t * 1.01 : 1e-6;
  }
}
BENCHMARK(BM_RoundLengthCdf);

void BM_IntegratedCdf(benchmark::State& state) {
  double x = 0.5;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsbp::F_cap(x));
    x = x < 40.0 ? x + 0.37 : 0.5;
  }
}
BENCHMARK(BM_IntegratedCdf);

void BM_LambertLower(benchmark::State& state) {
  double z = -1e-3;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsbp::lambert_w(gsbp::LambertBranch::minus_one, z));
    z = z > -0.24 ? z * 1.5 : -1e-3;
  }
}
BENCHMARK(BM_LambertLower);

void BM_LevelInverseS3(benchmark::State& state) {
  const SuccessProbability p(0.4);
  double x = 0.2;
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsbp::m_given_p_s3(x, p));
    x = x > 1e-9 ? x * 0.7 : 0.2;
  }
}
BENCHMARK(BM_LevelInverseS3);

void BM_TailCountGivenP(benchmark::State& state) {
  const WeightFamily fam(static_cast<int>(state.range(0)));
  const SuccessProbability p(0.35);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsbp::nu_arrow_given_p(fam, p, 1e-7));
  }
}
BENCHMARK(BM_TailCountGivenP)->Arg(2)->Arg(3)->Arg(4);

void BM_OccupancyDirect(benchmark::State& state) {
  const WeightFamily fam(3);
  const SuccessProbability p(0.05);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsbp::expected_Kn_given_p(fam, p, 1e4, 1e-9));
  }
}
BENCHMARK(BM_OccupancyDirect);

void BM_OccupancyStaircase(benchmark::State& state) {
  const WeightFamily fam(3);
  const SuccessProbability p(1e-6);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsbp::expected_Kn_given_p(fam, p, 1e4, 1e-9));
  }
}
BENCHMARK(BM_OccupancyStaircase);

void BM_TailCountPrior(benchmark::State& state) {
  const SuccessPrior prior = SuccessPrior::uniform();
  const WeightFamily fam(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsbp::nu_arrow(prior, fam, 1e-4));
  }
}
BENCHMARK(BM_TailCountPrior)->Arg(2)->Arg(3)->Unit(benchmark::kMillisecond);

void BM_OccupancyPrior(benchmark::State& state) {
  const SuccessPrior prior = SuccessPrior::uniform();
  const WeightFamily fam(2);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsbp::expected_Kn(prior, fam, 1e3, 1e-7));
  }
}
BENCHMARK(BM_OccupancyPrior)->Unit(benchmark::kMillisecond);

void BM_SampleKn(benchmark::State& state) {
  const SuccessPrior prior = SuccessPrior::uniform();
  const WeightFamily fam(2);
  gsbp::RandomStream rng = gsbp::RandomStream::substream(99, 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(gsbp::sample_Kn(prior, fam, 1000, rng));
  }
}
BENCHMARK(BM_SampleKn);

}  // namespace

BENCHMARK_MAIN();
