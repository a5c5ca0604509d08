#include <doctest.h>

#include <cmath>

#include "xmh/error.hpp"
#include "xmh/fuzzy_label.hpp"
#include "xmh/label_stage.hpp"
#include "xmh/rng.hpp"

using namespace xmh;

namespace {

Matrix random_matrix(Rng& rng, Eigen::Index r, Eigen::Index c) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) {
      m(i, j) = rng.normal();
    }
  }
  return m;
}

Matrix random_signs(Rng& rng, Eigen::Index r, Eigen::Index c) {
  Matrix m(r, c);
  for (Eigen::Index i = 0; i < r; ++i) {
    for (Eigen::Index j = 0; j < c; ++j) {
      m(i, j) = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    }
  }
  return m;
}

ProjectionSet identity_projection(Eigen::Index dim, std::size_t modalities) {
  ProjectionSet proj;
  proj.stage = Stage::label;
  for (std::size_t i = 0; i < modalities; ++i) {
    proj.W.push_back(Matrix::Identity(dim, dim));
  }
  proj.V = Matrix::Identity(dim, dim);
  return proj;
}

// scalar double-loop recomputation of the fuzzy objective
double oracle_fuzzy(const Matrix& L, const Matrix& V,
                    const std::vector<CodeMatrix>& H,
                    const MembershipState& st) {
  double e = 0.0;
  for (std::size_t i = 0; i < H.size(); ++i) {
    for (Eigen::Index r = 0; r < L.rows(); ++r) {
      double dist = 0.0;
      for (Eigen::Index c = 0; c < V.cols(); ++c) {
        double acc = 0.0;
        for (Eigen::Index k = 0; k < L.cols(); ++k) acc += L(r, k) * V(k, c);
        const double diff = acc - H[i](r, c);
        dist += diff * diff;
      }
      e += std::pow(st.memberships(static_cast<Eigen::Index>(i), r),
                    st.fuzzifier) *
           dist;
    }
  }
  return e;
}

}  // namespace

TEST_CASE("candidate codes: identity inputs give all +1 via the tie rule") {
  const auto proj = identity_projection(3, 1);
  const auto codes = candidate_codes({Matrix::Identity(3, 3)}, proj);
  REQUIRE(codes.size() == 1);
  CHECK((codes[0].array() == 1.0).all());  // diag sign(1), off-diag sign(0)
}

TEST_CASE("candidate codes: negating X negates nonzero projections") {
  Rng rng(21);
  Matrix x = random_matrix(rng, 4, 3);
  x.array() += (x.array() == 0.0).cast<double>();  // no exact zeros
  const auto proj = identity_projection(3, 1);
  const auto pos = candidate_codes({x}, proj);
  const auto neg = candidate_codes({(-x).eval()}, proj);
  CHECK(neg[0] == (-pos[0]).eval());
}

TEST_CASE("candidate codes: 2x2 numeric case") {
  const Matrix x = (Matrix(2, 2) << 1, -2, 0.5, 0).finished();
  const auto codes = candidate_codes({x}, identity_projection(2, 1));
  CHECK(codes[0](0, 0) == 1.0);
  CHECK(codes[0](0, 1) == -1.0);
  CHECK(codes[0](1, 0) == 1.0);
  CHECK(codes[0](1, 1) == 1.0);  // sign(0) = +1
}

TEST_CASE("fuzzy objective vanishes on an exact single-modality fit") {
  Rng rng(22);
  const CodeMatrix h = random_signs(rng, 3, 2);
  MembershipState st;
  st.fuzzifier = 2.0;
  st.memberships = Matrix::Ones(1, 3);
  CHECK(fuzzy_objective(h, Matrix::Identity(2, 2), {h}, st) == 0.0);
}

TEST_CASE("zero membership removes a modality's contribution") {
  Rng rng(23);
  const CodeMatrix h1 = random_signs(rng, 3, 2);
  const CodeMatrix h2 = random_signs(rng, 3, 2);
  const Matrix l = random_matrix(rng, 3, 2);
  const Matrix v = random_matrix(rng, 2, 2);
  MembershipState all_first;
  all_first.fuzzifier = 2.0;
  all_first.memberships.resize(2, 3);
  all_first.memberships.row(0).setOnes();
  all_first.memberships.row(1).setZero();
  MembershipState only_first;
  only_first.fuzzifier = 2.0;
  only_first.memberships = Matrix::Ones(1, 3);
  CHECK(fuzzy_objective(l, v, {h1, h2}, all_first) ==
        doctest::Approx(fuzzy_objective(l, v, {h1}, only_first)).epsilon(1e-14));
}

TEST_CASE("fuzzy objective matches the scalar oracle") {
  Rng rng(24);
  const Matrix l = random_matrix(rng, 3, 2);
  const Matrix v = random_matrix(rng, 2, 2);
  const std::vector<CodeMatrix> h = {random_signs(rng, 3, 2),
                                     random_signs(rng, 3, 2)};
  MembershipState st = update_memberships(l, v, h, 2.0);
  CHECK(fuzzy_objective(l, v, h, st) ==
        doctest::Approx(oracle_fuzzy(l, v, h, st)).epsilon(1e-12));
}

TEST_CASE("membership closed form on equal and unequal distances") {
  const auto equal = membership_row({1.0, 1.0}, 2.0);
  CHECK(equal[0] == doctest::Approx(0.5));
  CHECK(equal[1] == doctest::Approx(0.5));

  const auto hand = membership_row({1.0, 3.0}, 2.0);
  CHECK(hand[0] == doctest::Approx(0.75).epsilon(1e-12));
  CHECK(hand[1] == doctest::Approx(0.25).epsilon(1e-12));

  const auto single = membership_row({123.4}, 2.0);
  CHECK(single[0] == 1.0);
}

TEST_CASE("membership update realizes the d=(1,3) case through matrices") {
  // residual distances to the two candidates are 1 and 3 by construction
  const double y = 1.0 - std::sqrt(0.75);
  const Matrix l = (Matrix(1, 2) << 0.5, y).finished();
  const std::vector<CodeMatrix> h = {(Matrix(1, 2) << 1, 1).finished(),
                                     (Matrix(1, 2) << -1, 1).finished()};
  const MembershipState st = update_memberships(l, Matrix::Identity(2, 2), h, 2.0);
  CHECK(st.memberships(0, 0) == doctest::Approx(0.75).epsilon(1e-9));
  CHECK(st.memberships(1, 0) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("membership scale invariance") {
  Rng rng(25);
  for (int t = 0; t < 10; ++t) {
    std::vector<double> d(3);
    for (auto& v : d) v = 0.1 + 5.0 * rng.uniform01();
    std::vector<double> scaled = d;
    for (auto& v : scaled) v *= 42.0;
    const auto a = membership_row(d, 1.8);
    const auto b = membership_row(scaled, 1.8);
    for (std::size_t i = 0; i < 3; ++i) {
      CHECK(a[i] == doctest::Approx(b[i]).epsilon(1e-13));
    }
  }
}

TEST_CASE("zero-distance rows split membership among exact matches") {
  const auto p = membership_row({0.0, 2.0, 0.0}, 2.0);
  CHECK(p[0] == 0.5);
  CHECK(p[1] == 0.0);
  CHECK(p[2] == 0.5);
}

TEST_CASE("label update: identity transform returns the candidates") {
  Rng rng(26);
  const CodeMatrix h = random_signs(rng, 4, 3);
  MembershipState st;
  st.fuzzifier = 2.0;
  st.memberships = Matrix::Ones(1, 4);
  const SignLabelMatrix l = update_estimated_labels({h}, st, Matrix::Identity(3, 3));
  CHECK((l - h).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("label update: equal memberships average the candidates") {
  Rng rng(27);
  const CodeMatrix h1 = random_signs(rng, 4, 3);
  const CodeMatrix h2 = random_signs(rng, 4, 3);
  MembershipState st;
  st.fuzzifier = 2.0;
  st.memberships = Matrix::Constant(2, 4, 0.5);
  const SignLabelMatrix l =
      update_estimated_labels({h1, h2}, st, Matrix::Identity(3, 3));
  CHECK((l - 0.5 * (h1 + h2)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("label update sits at a stationary point of the objective") {
  Rng rng(28);
  const Matrix v = random_matrix(rng, 3, 3);
  const std::vector<CodeMatrix> h = {random_signs(rng, 5, 3),
                                     random_signs(rng, 5, 3),
                                     random_signs(rng, 5, 3)};
  const Matrix l0 = random_matrix(rng, 5, 3);
  const MembershipState st = update_memberships(l0, v, h, 2.0);
  const SignLabelMatrix l = update_estimated_labels(h, st, v);

  Matrix grad = Matrix::Zero(5, 3);
  for (std::size_t i = 0; i < h.size(); ++i) {
    const Matrix resid = l * v - h[i];
    for (Eigen::Index r = 0; r < 5; ++r) {
      grad.row(r) +=
          std::pow(st.memberships(static_cast<Eigen::Index>(i), r), 2.0) *
          resid.row(r) * v.transpose();
    }
  }
  CHECK(grad.norm() < 1e-8);
}

TEST_CASE("label update rejects an ill-conditioned projection") {
  MembershipState st;
  st.fuzzifier = 2.0;
  st.memberships = Matrix::Ones(1, 1);
  const CodeMatrix h = Matrix::Ones(1, 2);
  const Matrix singular = Matrix::Ones(2, 2);  // rank 1
  try {
    update_estimated_labels({h}, st, singular);
    FAIL("expected singular_matrix");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::singular_matrix);
  }
}

TEST_CASE("estimate_labels with one modality and identity V returns candidates") {
  Rng rng(29);
  const Matrix x = random_matrix(rng, 6, 3);
  const auto proj = identity_projection(3, 1);
  Hyperparameters hp;
  hp.max_iter_fuzzy = 15;
  const FuzzyResult result = estimate_labels({x}, proj, hp);
  const auto codes = candidate_codes({x}, proj);
  CHECK((result.labels - codes[0]).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(result.objective_trace.back() <= 1e-18);
}

TEST_CASE("estimate_labels reproduces identical candidates exactly") {
  Rng rng(30);
  const Matrix x = random_matrix(rng, 5, 3);
  const auto proj = identity_projection(3, 2);
  Hyperparameters hp;
  const FuzzyResult result = estimate_labels({x, x}, proj, hp);
  const auto codes = candidate_codes({x, x}, proj);
  CHECK((result.labels * proj.V - codes[0]).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("estimate_labels trace never increases") {
  Rng rng(31);
  for (int t = 0; t < 5; ++t) {
    const Eigen::Index n = 4 + static_cast<Eigen::Index>(rng.uniform_index(6));
    ModalityList X = {random_matrix(rng, n, 4), random_matrix(rng, n, 3)};
    const auto proj = init_projections({4, 3}, 3, 3, 50 + t, Stage::label);
    Hyperparameters hp;
    const FuzzyResult result = estimate_labels(X, proj, hp);
    result.memberships.verify_simplex();
    for (std::size_t i = 1; i < result.objective_trace.size(); ++i) {
      CHECK(result.objective_trace[i] <= result.objective_trace[i - 1] + 1e-9);
    }
  }
}

TEST_CASE("estimate_labels rejects an empty unlabeled set") {
  const auto proj = identity_projection(2, 1);
  Hyperparameters hp;
  CHECK_THROWS_AS(estimate_labels({Matrix(0, 2)}, proj, hp), Error);
}
