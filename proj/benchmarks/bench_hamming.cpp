#include <benchmark/benchmark.h>

#include "xmh/packed_codes.hpp"
#include "xmh/retrieval.hpp"
#include "xmh/rng.hpp"

namespace {

xmh::CodeMatrix random_codes(std::uint64_t seed, Eigen::Index rows,
                             Eigen::Index bits) {
  xmh::Rng rng(seed);
  xmh::CodeMatrix m(rows, bits);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < bits; ++c) {
      m(r, c) = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    }
  }
  return m;
}

void BM_PackedHamming(benchmark::State& state) {
  const Eigen::Index bits = state.range(0);
  const auto a = xmh::PackedCodes::pack(random_codes(1, 1024, bits));
  const auto b = xmh::PackedCodes::pack(random_codes(2, 1024, bits));
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(a.distance(i % 1024, b, (i * 7) % 1024));
    ++i;
  }
}
BENCHMARK(BM_PackedHamming)->Arg(32)->Arg(64)->Arg(128);

void BM_NaiveHamming(benchmark::State& state) {
  const Eigen::Index bits = state.range(0);
  const auto a = random_codes(1, 1024, bits);
  const auto b = random_codes(2, 1024, bits);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(
        xmh::hamming_distance(a.row(i % 1024), b.row((i * 7) % 1024)));
    ++i;
  }
}
BENCHMARK(BM_NaiveHamming)->Arg(32)->Arg(128);

void BM_RankDatabase(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  const auto queries = xmh::PackedCodes::pack(random_codes(3, 16, 64));
  const auto database = xmh::PackedCodes::pack(random_codes(4, n, 64));
  std::size_t q = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(xmh::rank_database(queries, q % 16, database));
    ++q;
  }
}
BENCHMARK(BM_RankDatabase)->Arg(1000)->Arg(10000)->Arg(100000);

}  // namespace
