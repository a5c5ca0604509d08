#include <benchmark/benchmark.h>

#include "xmh/fuzzy_label.hpp"
#include "xmh/label_stage.hpp"
#include "xmh/rng.hpp"

namespace {

xmh::Matrix random_matrix(xmh::Rng& rng, Eigen::Index r, Eigen::Index c) {
  xmh::Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) {
      m(i, j) = rng.normal();
    }
  }
  return m;
}

xmh::Matrix random_signs(xmh::Rng& rng, Eigen::Index r, Eigen::Index c) {
  xmh::Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) {
      m(i, j) = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    }
  }
  return m;
}

// one alternating iteration of the label stage at benchmark scale
void BM_LabelStageIteration(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  xmh::Rng rng(1);
  const xmh::ModalityList X = {random_matrix(rng, n, 64),
                               random_matrix(rng, n, 32)};
  const xmh::Matrix L = random_signs(rng, n, 4);
  xmh::Hyperparameters hp;
  auto proj = xmh::init_projections({64, 32}, 4, 4, 1, xmh::Stage::label);

  for (auto _ : state) {
    const auto H = xmh::update_H_label(X, proj.W, L, proj.V, hp);
    proj.V -= hp.step * xmh::grad_V_label(L, H, proj.V, hp);
    for (std::size_t i = 0; i < X.size(); ++i) {
      proj.W[i] -= hp.step * xmh::grad_W_label(X[i], H, proj.W[i], hp);
    }
    benchmark::DoNotOptimize(proj.V.data());
  }
}
BENCHMARK(BM_LabelStageIteration)->Arg(500)->Arg(2000)->Arg(8000);

void BM_MembershipUpdate(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  xmh::Rng rng(2);
  const xmh::Matrix V = random_matrix(rng, 4, 4);
  const std::vector<xmh::CodeMatrix> H = {random_signs(rng, n, 4),
                                          random_signs(rng, n, 4)};
  const xmh::Matrix L = random_matrix(rng, n, 4);
  for (auto _ : state) {
    benchmark::DoNotOptimize(xmh::update_memberships(L, V, H, 2.0));
  }
}
BENCHMARK(BM_MembershipUpdate)->Arg(1000)->Arg(10000);

void BM_EstimatedLabelUpdate(benchmark::State& state) {
  const Eigen::Index n = state.range(0);
  xmh::Rng rng(3);
  const xmh::Matrix V = random_matrix(rng, 4, 4);
  const std::vector<xmh::CodeMatrix> H = {random_signs(rng, n, 4),
                                          random_signs(rng, n, 4)};
  const xmh::Matrix L = random_matrix(rng, n, 4);
  const auto st = xmh::update_memberships(L, V, H, 2.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(xmh::update_estimated_labels(H, st, V));
  }
}
BENCHMARK(BM_EstimatedLabelUpdate)->Arg(1000)->Arg(10000);

}  // namespace
