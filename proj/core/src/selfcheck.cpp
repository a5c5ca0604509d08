#include "xmh/selfcheck.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "xmh/code_stage.hpp"
#include "xmh/fuzzy_label.hpp"
#include "xmh/label_stage.hpp"
#include "xmh/packed_codes.hpp"
#include "xmh/retrieval.hpp"
#include "xmh/rng.hpp"
#include "xmh/types.hpp"

// Every oracle below recomputes results through a deliberately different
// route: scalar loops instead of matrix expressions, grid search instead of
// closed forms, pair sorting instead of counting sort. None of them call the
// code paths they validate.

namespace xmh::selfcheck {

namespace {

// ---- scalar-loop objective oracles ----------------------------------------

double scalar_residual_sq(const Matrix& target, const Matrix& data,
                          const Matrix& proj) {
  // |target - data*proj|_F^2 with explicit loops
  double sum = 0.0;
  for (Eigen::Index r = 0; r < target.rows(); ++r) {
    for (Eigen::Index c = 0; c < target.cols(); ++c) {
      double acc = 0.0;
      for (Eigen::Index k = 0; k < data.cols(); ++k) {
        acc += data(r, k) * proj(k, c);
      }
      const double diff = target(r, c) - acc;
      sum += diff * diff;
    }
  }
  return sum;
}

double scalar_orth_penalty(const Matrix& w) {
  double sum = 0.0;
  for (Eigen::Index a = 0; a < w.cols(); ++a) {
    for (Eigen::Index b = 0; b < w.cols(); ++b) {
      double g = 0.0;
      for (Eigen::Index k = 0; k < w.rows(); ++k) {
        g += w(k, a) * w(k, b);
      }
      if (a == b) g -= 1.0;
      sum += g * g;
    }
  }
  return sum;
}

// Label-stage objective; `normalized` divides the data terms by the row
// count, matching the gradient convention.
double scalar_label_objective(const ModalityList& X, const Matrix& L,
                              const std::vector<Matrix>& W, const Matrix& V,
                              const Matrix& H, double alpha, double gamma,
                              bool normalized) {
  const double scale = normalized ? 1.0 / static_cast<double>(H.rows()) : 1.0;
  double e = 0.0;
  for (std::size_t i = 0; i < X.size(); ++i) {
    e += 0.5 * scale * scalar_residual_sq(H, X[i], W[i]);
  }
  e += 0.5 * alpha * scale * scalar_residual_sq(H, L, V);
  double reg = scalar_orth_penalty(V);
  for (const Matrix& w : W) reg += scalar_orth_penalty(w);
  return e + 0.5 * gamma * reg;
}

double scalar_code_objective(const ModalityList& X_l, const ModalityList& X_u,
                             const Matrix& L_l, const Matrix& L_u,
                             const std::vector<Matrix>& W, const Matrix& V,
                             const Matrix& B_l, const Matrix& B_u, double alpha,
                             double gamma, double beta_l, double beta_u,
                             bool normalized) {
  const double scale_l =
      beta_l * (normalized ? 1.0 / static_cast<double>(B_l.rows()) : 1.0);
  double e = 0.5 * alpha * scale_l * scalar_residual_sq(B_l, L_l, V);
  for (std::size_t i = 0; i < X_l.size(); ++i) {
    e += 0.5 * scale_l * scalar_residual_sq(B_l, X_l[i], W[i]);
  }
  if (B_u.rows() > 0) {
    const double scale_u =
        beta_u * (normalized ? 1.0 / static_cast<double>(B_u.rows()) : 1.0);
    e += 0.5 * alpha * scale_u * scalar_residual_sq(B_u, L_u, V);
    for (std::size_t i = 0; i < X_u.size(); ++i) {
      e += 0.5 * scale_u * scalar_residual_sq(B_u, X_u[i], W[i]);
    }
  }
  double reg = scalar_orth_penalty(V);
  for (const Matrix& w : W) reg += scalar_orth_penalty(w);
  return e + 0.5 * gamma * reg;
}

// ---- random instance helpers ----------------------------------------------

Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = rng.normal();
    }
  }
  return m;
}

Matrix random_signs(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(r, c) = rng.uniform01() < 0.5 ? -1.0 : 1.0;
    }
  }
  return m;
}

Matrix random_multi_hot(Rng& rng, Eigen::Index rows, Eigen::Index classes) {
  Matrix m = Matrix::Zero(rows, classes);
  for (Eigen::Index r = 0; r < rows; ++r) {
    m(r, static_cast<Eigen::Index>(rng.uniform_index(
             static_cast<std::uint64_t>(classes)))) = 1.0;
    for (Eigen::Index c = 0; c < classes; ++c) {
      if (rng.uniform01() < 0.25) m(r, c) = 1.0;
    }
  }
  return m;
}

struct LabelInstance {
  ModalityList X;
  Matrix L;
  std::vector<Matrix> W;
  Matrix V;
  Matrix H;
  Hyperparameters hp;
};

LabelInstance random_label_instance(Rng& rng) {
  LabelInstance inst;
  const auto K = 1 + rng.uniform_index(3);
  const Eigen::Index n = 2 + static_cast<Eigen::Index>(rng.uniform_index(7));
  const Eigen::Index l = 2 + static_cast<Eigen::Index>(rng.uniform_index(3));
  for (std::size_t i = 0; i < K; ++i) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.uniform_index(5));
    inst.X.push_back(random_matrix(rng, n, d));
    inst.W.push_back(random_matrix(rng, d, l));
  }
  inst.L = random_signs(rng, n, l);
  inst.V = random_matrix(rng, l, l);
  inst.H = random_signs(rng, n, l);
  inst.hp.alpha = rng.uniform01() < 0.5 ? 100.0 : 0.5 + 4.0 * rng.uniform01();
  inst.hp.gamma = rng.uniform01() < 0.5 ? 0.01 : 0.05 + 0.5 * rng.uniform01();
  return inst;
}

struct CodeInstance {
  ModalityList X_l, X_u;
  Matrix L_l, L_u;
  std::vector<Matrix> W;
  Matrix V;
  Matrix B_l, B_u;
  Hyperparameters hp;
  double beta_l = 1.0, beta_u = 1.0;
};

CodeInstance random_code_instance(Rng& rng, bool allow_empty_unlabeled) {
  CodeInstance inst;
  const auto K = 1 + rng.uniform_index(3);
  const Eigen::Index n_l = 2 + static_cast<Eigen::Index>(rng.uniform_index(7));
  Eigen::Index n_u = 2 + static_cast<Eigen::Index>(rng.uniform_index(7));
  if (allow_empty_unlabeled && rng.uniform01() < 0.2) n_u = 0;
  const Eigen::Index l = 2 + static_cast<Eigen::Index>(rng.uniform_index(3));
  const Eigen::Index c = 2 + static_cast<Eigen::Index>(rng.uniform_index(3));
  for (std::size_t i = 0; i < K; ++i) {
    const Eigen::Index d = 1 + static_cast<Eigen::Index>(rng.uniform_index(5));
    inst.X_l.push_back(random_matrix(rng, n_l, d));
    inst.X_u.push_back(random_matrix(rng, n_u, d));
    inst.W.push_back(random_matrix(rng, d, c));
  }
  inst.L_l = random_signs(rng, n_l, l);
  inst.L_u = random_matrix(rng, n_u, l);  // estimated labels are real-valued
  inst.V = random_matrix(rng, l, c);
  inst.B_l = random_signs(rng, n_l, c);
  inst.B_u = random_signs(rng, n_u, c);
  inst.hp.alpha = rng.uniform01() < 0.5 ? 100.0 : 0.5 + 4.0 * rng.uniform01();
  inst.hp.gamma = rng.uniform01() < 0.5 ? 0.01 : 0.05 + 0.5 * rng.uniform01();
  inst.beta_l = 0.2 + rng.uniform01();
  inst.beta_u = 0.05 + 0.5 * rng.uniform01();
  inst.hp.beta_l = inst.beta_l;
  inst.hp.beta_u = inst.beta_u;
  return inst;
}

CheckResult summarize(const std::string& name, double worst, double threshold,
                      const std::string& detail = "") {
  CheckResult result;
  result.name = name;
  result.worst = worst;
  result.passed = worst < threshold;
  std::ostringstream os;
  os << "worst " << worst << " vs threshold " << threshold;
  if (!detail.empty()) os << "; " << detail;
  result.detail = os.str();
  return result;
}

}  // namespace

double finite_difference_error(const std::function<double(const Matrix&)>& f,
                               const Matrix& at, const Matrix& analytic,
                               double h) {
  Matrix fd(at.rows(), at.cols());
  Matrix x = at;
  for (Eigen::Index r = 0; r < at.rows(); ++r) {
    for (Eigen::Index c = 0; c < at.cols(); ++c) {
      const double orig = x(r, c);
      x(r, c) = orig + h;
      const double fp = f(x);
      x(r, c) = orig - h;
      const double fm = f(x);
      x(r, c) = orig;
      fd(r, c) = (fp - fm) / (2.0 * h);
    }
  }
  return (analytic - fd).norm() / std::max(fd.norm(), 1e-12);
}

std::vector<CheckResult> gradient_checks(const Options& opts) {
  Rng rng(opts.seed);
  double worst_wl = 0.0, worst_vl = 0.0, worst_wc = 0.0, worst_vc = 0.0;

  for (int t = 0; t < opts.gradient_instances; ++t) {
    const LabelInstance inst = random_label_instance(rng);
    ProjectionSet proj;
    proj.stage = Stage::label;
    proj.W = inst.W;
    proj.V = inst.V;

    for (std::size_t i = 0; i < inst.X.size(); ++i) {
      const Matrix analytic = grad_W_label(inst.X[i], inst.H, inst.W[i], inst.hp);
      auto f = [&](const Matrix& w) {
        std::vector<Matrix> ws = inst.W;
        ws[i] = w;
        return scalar_label_objective(inst.X, inst.L, ws, inst.V, inst.H,
                                      inst.hp.alpha, inst.hp.gamma, true);
      };
      worst_wl = std::max(worst_wl,
                          finite_difference_error(f, inst.W[i], analytic));
    }
    {
      const Matrix analytic = grad_V_label(inst.L, inst.H, inst.V, inst.hp);
      auto f = [&](const Matrix& v) {
        return scalar_label_objective(inst.X, inst.L, inst.W, v, inst.H,
                                      inst.hp.alpha, inst.hp.gamma, true);
      };
      worst_vl = std::max(worst_vl,
                          finite_difference_error(f, inst.V, analytic));
    }
  }

  for (int t = 0; t < opts.gradient_instances; ++t) {
    const CodeInstance inst = random_code_instance(rng, /*allow_empty=*/true);
    for (std::size_t i = 0; i < inst.X_l.size(); ++i) {
      const Matrix analytic = grad_W_code(inst.X_l[i], inst.X_u[i], inst.B_l,
                                          inst.B_u, inst.W[i], inst.hp);
      auto f = [&](const Matrix& w) {
        std::vector<Matrix> ws = inst.W;
        ws[i] = w;
        return scalar_code_objective(inst.X_l, inst.X_u, inst.L_l, inst.L_u,
                                     ws, inst.V, inst.B_l, inst.B_u,
                                     inst.hp.alpha, inst.hp.gamma, inst.beta_l,
                                     inst.beta_u, true);
      };
      worst_wc = std::max(worst_wc,
                          finite_difference_error(f, inst.W[i], analytic));
    }
    {
      const Matrix analytic = grad_V_code(inst.L_l, inst.L_u, inst.B_l,
                                          inst.B_u, inst.V, inst.hp);
      auto f = [&](const Matrix& v) {
        return scalar_code_objective(inst.X_l, inst.X_u, inst.L_l, inst.L_u,
                                     inst.W, v, inst.B_l, inst.B_u,
                                     inst.hp.alpha, inst.hp.gamma, inst.beta_l,
                                     inst.beta_u, true);
      };
      worst_vc = std::max(worst_vc,
                          finite_difference_error(f, inst.V, analytic));
    }
  }

  return {
      summarize("grad_W_label_fd", worst_wl, 1e-5),
      summarize("grad_V_label_fd", worst_vl, 1e-5),
      summarize("grad_W_code_fd", worst_wc, 1e-5),
      summarize("grad_V_code_fd", worst_vc, 1e-5),
  };
}

std::vector<CheckResult> sign_update_checks(const Options& opts) {
  Rng rng(opts.seed + 1);
  double worst_label = 0.0, worst_code = 0.0;

  for (int t = 0; t < opts.flip_instances; ++t) {
    // n*l <= 24 keeps the exhaustive flip cheap
    LabelInstance inst = random_label_instance(rng);
    while (inst.H.size() > 24) inst = random_label_instance(rng);

    const CodeMatrix best =
        update_H_label(inst.X, inst.W, inst.L, inst.V, inst.hp);
    const double base = scalar_label_objective(
        inst.X, inst.L, inst.W, inst.V, best, inst.hp.alpha, inst.hp.gamma, false);
    for (Eigen::Index r = 0; r < best.rows(); ++r) {
      for (Eigen::Index c = 0; c < best.cols(); ++c) {
        CodeMatrix flipped = best;
        flipped(r, c) = -flipped(r, c);
        const double e = scalar_label_objective(inst.X, inst.L, inst.W, inst.V,
                                                flipped, inst.hp.alpha,
                                                inst.hp.gamma, false);
        worst_label = std::max(worst_label, base - e);  // positive = flip improved
      }
    }
  }

  for (int t = 0; t < opts.flip_instances; ++t) {
    CodeInstance inst = random_code_instance(rng, /*allow_empty=*/false);
    while ((inst.B_l.size() + inst.B_u.size()) > 24) {
      inst = random_code_instance(rng, false);
    }
    ProjectionSet proj;
    proj.stage = Stage::code;
    proj.W = inst.W;
    proj.V = inst.V;
    const auto [B_l, B_u] =
        update_B(inst.X_l, inst.X_u, inst.L_l, inst.L_u, proj, inst.hp);
    const double base = scalar_code_objective(
        inst.X_l, inst.X_u, inst.L_l, inst.L_u, inst.W, inst.V, B_l, B_u,
        inst.hp.alpha, inst.hp.gamma, inst.beta_l, inst.beta_u, false);
    auto try_flip = [&](const CodeMatrix& bl, const CodeMatrix& bu) {
      const double e = scalar_code_objective(
          inst.X_l, inst.X_u, inst.L_l, inst.L_u, inst.W, inst.V, bl, bu,
          inst.hp.alpha, inst.hp.gamma, inst.beta_l, inst.beta_u, false);
      worst_code = std::max(worst_code, base - e);
    };
    for (Eigen::Index r = 0; r < B_l.rows(); ++r) {
      for (Eigen::Index c = 0; c < B_l.cols(); ++c) {
        CodeMatrix flipped = B_l;
        flipped(r, c) = -flipped(r, c);
        try_flip(flipped, B_u);
      }
    }
    for (Eigen::Index r = 0; r < B_u.rows(); ++r) {
      for (Eigen::Index c = 0; c < B_u.cols(); ++c) {
        CodeMatrix flipped = B_u;
        flipped(r, c) = -flipped(r, c);
        try_flip(B_l, flipped);
      }
    }
  }

  return {
      summarize("update_H_single_flip", worst_label, 1e-9),
      summarize("update_B_single_flip", worst_code, 1e-9),
  };
}

std::vector<double> simplex_minimize(const std::vector<double>& distances,
                                     double fuzzifier) {
  const std::size_t K = distances.size();
  if (K == 1) return {1.0};

  auto value = [&](const std::vector<double>& p) {
    double e = 0.0;
    for (std::size_t i = 0; i < K; ++i) {
      e += std::pow(p[i], fuzzifier) * distances[i];
    }
    return e;
  };

  const int grid = 48;
  std::vector<double> lo(K - 1, 0.0), hi(K - 1, 1.0);
  std::vector<double> best(K, 1.0 / static_cast<double>(K));

  for (int round = 0; round < 10; ++round) {
    double best_val = std::numeric_limits<double>::infinity();
    std::vector<double> best_p(K, 0.0);
    std::vector<int> idx(K - 1, 0);
    for (;;) {
      std::vector<double> p(K, 0.0);
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < K; ++i) {
        p[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / grid;
        sum += p[i];
      }
      if (sum <= 1.0 + 1e-12) {
        p[K - 1] = std::max(0.0, 1.0 - sum);
        const double v = value(p);
        if (v < best_val) {
          best_val = v;
          best_p = p;
        }
      }
      // odometer increment
      std::size_t pos = 0;
      while (pos < K - 1 && ++idx[pos] > grid) {
        idx[pos] = 0;
        ++pos;
      }
      if (pos == K - 1) break;
    }
    best = best_p;
    // shrink the box around the best point
    for (std::size_t i = 0; i + 1 < K; ++i) {
      const double step = (hi[i] - lo[i]) / grid;
      lo[i] = std::max(0.0, best[i] - 1.5 * step);
      hi[i] = std::min(1.0, best[i] + 1.5 * step);
    }
  }
  return best;
}

std::vector<CheckResult> membership_checks(const Options& opts) {
  Rng rng(opts.seed + 2);
  const double fuzzifiers[] = {1.5, 2.0, 3.0};
  double worst = 0.0;
  int tuples = 0;

  for (std::size_t K = 1; K <= 3; ++K) {
    for (const double m : fuzzifiers) {
      for (int t = 0; t < opts.membership_tuples; ++t) {
        std::vector<double> d(K);
        for (auto& v : d) v = 0.05 + 10.0 * rng.uniform01();
        const std::vector<double> closed = membership_row(d, m);
        const std::vector<double> brute = simplex_minimize(d, m);
        for (std::size_t i = 0; i < K; ++i) {
          worst = std::max(worst, std::abs(closed[i] - brute[i]));
        }
        ++tuples;
      }
    }
  }

  // hand case: d = (1, 3), m = 2 minimizes p^2 + 3(1-p)^2 at p = 3/4
  const std::vector<double> hand = membership_row({1.0, 3.0}, 2.0);
  const double hand_err =
      std::max(std::abs(hand[0] - 0.75), std::abs(hand[1] - 0.25));

  // scaling every distance by the same constant leaves memberships unchanged
  double worst_scale = 0.0;
  for (int t = 0; t < 20; ++t) {
    const std::size_t K = 2 + rng.uniform_index(2);
    std::vector<double> d(K), ds(K);
    const double s = 0.1 + 10.0 * rng.uniform01();
    for (std::size_t i = 0; i < K; ++i) {
      d[i] = 0.05 + 5.0 * rng.uniform01();
      ds[i] = s * d[i];
    }
    const auto a = membership_row(d, 2.5);
    const auto b = membership_row(ds, 2.5);
    for (std::size_t i = 0; i < K; ++i) {
      worst_scale = std::max(worst_scale, std::abs(a[i] - b[i]));
    }
  }

  return {
      summarize("membership_closed_form", worst, 1e-6,
                std::to_string(tuples) + " tuples"),
      summarize("membership_hand_case", hand_err, 1e-9),
      summarize("membership_scale_invariance", worst_scale, 1e-12),
  };
}

std::vector<CheckResult> fuzzy_descent_checks(const Options& opts) {
  Rng rng(opts.seed + 3);
  double worst_rise = 0.0;
  double worst_grad = 0.0;
  double worst_simplex = 0.0;

  for (int t = 0; t < opts.fuzzy_instances; ++t) {
    const auto K = 1 + rng.uniform_index(3);
    const Eigen::Index n = 3 + static_cast<Eigen::Index>(rng.uniform_index(8));
    const Eigen::Index l = 2 + static_cast<Eigen::Index>(rng.uniform_index(3));
    std::vector<Eigen::Index> dims;
    ModalityList X_u;
    for (std::size_t i = 0; i < K; ++i) {
      const Eigen::Index d = 2 + static_cast<Eigen::Index>(rng.uniform_index(4));
      dims.push_back(d);
      X_u.push_back(random_matrix(rng, n, d));
    }
    const ProjectionSet proj =
        init_projections(dims, l, l, rng.next_u64(), Stage::label);
    const auto H_u = candidate_codes(X_u, proj);
    const double m = 1.5 + rng.uniform01() * 1.5;

    MembershipState state;
    state.fuzzifier = m;
    state.memberships = Matrix::Constant(static_cast<Eigen::Index>(K), n,
                                         1.0 / static_cast<double>(K));
    SignLabelMatrix labels = H_u.front();
    double prev = fuzzy_objective(labels, proj.V, H_u, state);

    for (int iter = 0; iter < 15; ++iter) {
      state = update_memberships(labels, proj.V, H_u, m);
      for (Eigen::Index r = 0; r < state.memberships.cols(); ++r) {
        worst_simplex = std::max(
            worst_simplex, std::abs(state.memberships.col(r).sum() - 1.0));
      }
      labels = update_estimated_labels(H_u, state, proj.V);

      // analytic gradient of the objective in L_u must vanish here
      Matrix grad = Matrix::Zero(labels.rows(), labels.cols());
      for (std::size_t i = 0; i < H_u.size(); ++i) {
        const Matrix resid = labels * proj.V - H_u[i];
        for (Eigen::Index r = 0; r < labels.rows(); ++r) {
          const double w =
              std::pow(state.memberships(static_cast<Eigen::Index>(i), r), m);
          grad.row(r) += w * resid.row(r) * proj.V.transpose();
        }
      }
      worst_grad = std::max(worst_grad, grad.norm());

      const double e = fuzzy_objective(labels, proj.V, H_u, state);
      worst_rise = std::max(worst_rise, e - prev);
      prev = e;
    }
  }

  return {
      summarize("fuzzy_objective_monotone", worst_rise, 1e-9),
      summarize("fuzzy_stationarity", worst_grad, 1e-8),
      summarize("membership_simplex", worst_simplex, 1e-9),
  };
}

std::vector<CheckResult> retrieval_checks(const Options& opts) {
  Rng rng(opts.seed + 4);
  double worst_map = 0.0;
  int hamming_mismatches = 0;

  for (int t = 0; t < opts.retrieval_instances; ++t) {
    const Eigen::Index nq = 3 + static_cast<Eigen::Index>(rng.uniform_index(8));
    const Eigen::Index nd = 5 + static_cast<Eigen::Index>(rng.uniform_index(36));
    const Eigen::Index c = 4 + static_cast<Eigen::Index>(rng.uniform_index(13));
    const Eigen::Index l = 2 + static_cast<Eigen::Index>(rng.uniform_index(3));

    const CodeMatrix queries = random_signs(rng, nq, c);
    const CodeMatrix database = random_signs(rng, nd, c);
    const Matrix qlabels = random_multi_hot(rng, nq, l);
    Matrix dlabels = random_multi_hot(rng, nd, l);
    dlabels.row(0) = qlabels.row(0);  // guarantee one evaluable query

    const PackedCodes pq = PackedCodes::pack(queries);
    const PackedCodes pd = PackedCodes::pack(database);

    // packed distances must agree with a naive elementwise count
    for (Eigen::Index q = 0; q < nq; ++q) {
      for (Eigen::Index d = 0; d < nd; ++d) {
        int naive = 0;
        for (Eigen::Index j = 0; j < c; ++j) {
          if (queries(q, j) != database(d, j)) ++naive;
        }
        if (pq.distance(q, pd, d) != naive) ++hamming_mismatches;
      }
    }

    const auto relevance = relevance_matrix(qlabels, dlabels);

    // library path
    double sum_opt = 0.0;
    int evaluated_opt = 0;
    for (Eigen::Index q = 0; q < nq; ++q) {
      const auto ranking = rank_database(pq, q, pd);
      const auto ap =
          average_precision(ranking, relevance[static_cast<std::size_t>(q)], 0);
      if (ap) {
        sum_opt += *ap;
        ++evaluated_opt;
      }
    }
    const double map_opt = sum_opt / static_cast<double>(evaluated_opt);

    // reference path: pair sort + explicit AP loop
    double sum_ref = 0.0;
    int evaluated_ref = 0;
    for (Eigen::Index q = 0; q < nq; ++q) {
      std::vector<std::pair<int, int>> order;  // (distance, index)
      for (Eigen::Index d = 0; d < nd; ++d) {
        int dist = 0;
        for (Eigen::Index j = 0; j < c; ++j) {
          if (queries(q, j) != database(d, j)) ++dist;
        }
        order.emplace_back(dist, static_cast<int>(d));
      }
      std::sort(order.begin(), order.end());
      int total_relevant = 0;
      for (Eigen::Index d = 0; d < nd; ++d) {
        total_relevant += relevance[static_cast<std::size_t>(q)]
                                   [static_cast<std::size_t>(d)];
      }
      if (total_relevant == 0) continue;
      double ap = 0.0;
      int hits = 0;
      for (std::size_t k = 0; k < order.size(); ++k) {
        if (relevance[static_cast<std::size_t>(q)]
                     [static_cast<std::size_t>(order[k].second)]) {
          ++hits;
          ap += static_cast<double>(hits) / static_cast<double>(k + 1);
        }
      }
      sum_ref += ap / total_relevant;
      ++evaluated_ref;
    }
    const double map_ref = sum_ref / static_cast<double>(evaluated_ref);

    worst_map = std::max(worst_map, std::abs(map_opt - map_ref));
  }

  return {
      summarize("map_reference_agreement", worst_map, 1e-12),
      summarize("hamming_packed_naive", static_cast<double>(hamming_mismatches),
                0.5, "mismatching pairs"),
  };
}

std::vector<CheckResult> run_all(const Options& opts) {
  std::vector<CheckResult> all;
  for (auto&& suite :
       {gradient_checks(opts), sign_update_checks(opts), membership_checks(opts),
        fuzzy_descent_checks(opts), retrieval_checks(opts)}) {
    all.insert(all.end(), suite.begin(), suite.end());
  }
  return all;
}

bool all_passed(const std::vector<CheckResult>& results) {
  return std::all_of(results.begin(), results.end(),
                     [](const CheckResult& r) { return r.passed; });
}

}  // namespace xmh::selfcheck
