#include <doctest.h>

#include <chrono>

#include "xmh/label_stage.hpp"
#include "xmh/rng.hpp"
#include "xmh/selfcheck.hpp"

using namespace xmh;

TEST_CASE("all verification suites pass on a fresh build") {
  selfcheck::Options opts;
  opts.seed = 123;
  const auto start = std::chrono::steady_clock::now();
  const auto results = selfcheck::run_all(opts);
  const auto elapsed = std::chrono::duration_cast<std::chrono::seconds>(
                           std::chrono::steady_clock::now() - start)
                           .count();
  for (const auto& r : results) {
    INFO(r.name, ": ", r.detail);
    CHECK(r.passed);
  }
  CHECK(selfcheck::all_passed(results));
  CHECK(elapsed < 60);

  // the suites cover every named check
  auto has = [&](const char* name) {
    for (const auto& r : results) {
      if (r.name == name) return true;
    }
    return false;
  };
  CHECK(has("grad_W_label_fd"));
  CHECK(has("grad_V_label_fd"));
  CHECK(has("grad_W_code_fd"));
  CHECK(has("grad_V_code_fd"));
  CHECK(has("update_H_single_flip"));
  CHECK(has("update_B_single_flip"));
  CHECK(has("membership_closed_form"));
  CHECK(has("fuzzy_objective_monotone"));
  CHECK(has("fuzzy_stationarity"));
  CHECK(has("map_reference_agreement"));
  CHECK(has("hamming_packed_naive"));
}

TEST_CASE("an injected sign error in a gradient is caught") {
  Rng rng(9);
  Matrix x(4, 3), h(4, 2), w(3, 2);
  for (Eigen::Index r = 0; r < 4; ++r) {
    for (Eigen::Index c = 0; c < 3; ++c) x(r, c) = rng.normal();
  }
  for (Eigen::Index r = 0; r < 4; ++r) {
    for (Eigen::Index c = 0; c < 2; ++c) h(r, c) = rng.uniform01() < 0.5 ? -1 : 1;
  }
  for (Eigen::Index r = 0; r < 3; ++r) {
    for (Eigen::Index c = 0; c < 2; ++c) w(r, c) = rng.normal();
  }
  Hyperparameters hp;
  hp.alpha = 2.0;
  hp.gamma = 0.1;

  auto objective = [&](const Matrix& ww) {
    const double inv_n = 1.0 / 4.0;
    return 0.5 * inv_n * (h - x * ww).squaredNorm() +
           0.5 * hp.gamma *
               (ww.transpose() * ww - Matrix::Identity(2, 2)).squaredNorm();
  };

  const Matrix good = grad_W_label(x, h, w, hp);
  CHECK(selfcheck::finite_difference_error(objective, w, good) < 1e-5);

  Matrix broken = good;
  broken(0, 0) = -broken(0, 0);  // injected sign error
  CHECK(selfcheck::finite_difference_error(objective, w, broken) > 1e-5);
}

TEST_CASE("simplex oracle minimizes the weighted power sum") {
  // known solution for d = (1, 3), m = 2
  const auto p = selfcheck::simplex_minimize({1.0, 3.0}, 2.0);
  CHECK(p[0] == doctest::Approx(0.75).epsilon(1e-6));
  CHECK(p[1] == doctest::Approx(0.25).epsilon(1e-6));

  // K = 1 is trivially all mass on the only entry
  CHECK(selfcheck::simplex_minimize({5.0}, 2.0) == std::vector<double>{1.0});
}
