#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "xmh/common.hpp"

namespace xmh::selfcheck {

// Verification suites runnable from tests and from the CLI. Every suite
// compares the library against an independent oracle: scalar-loop objective
// recomputation, central finite differences, exhaustive single-bit flips,
// grid minimization over the probability simplex, and a naive sort-based
// retrieval reference.

struct CheckResult {
  std::string name;
  bool passed = false;
  double worst = 0.0;  // largest error / constraint violation observed
  std::string detail;
};

struct Options {
  std::uint64_t seed = 7;
  int gradient_instances = 24;    // randomized instances per gradient op
  int flip_instances = 12;        // instances per sign-update op
  int membership_tuples = 12;     // distance tuples per (K, m) pair
  int fuzzy_instances = 20;       // full alternation runs
  int retrieval_instances = 50;   // random MAP instances
};

std::vector<CheckResult> gradient_checks(const Options& opts);
std::vector<CheckResult> sign_update_checks(const Options& opts);
std::vector<CheckResult> membership_checks(const Options& opts);
std::vector<CheckResult> fuzzy_descent_checks(const Options& opts);
std::vector<CheckResult> retrieval_checks(const Options& opts);

std::vector<CheckResult> run_all(const Options& opts);

bool all_passed(const std::vector<CheckResult>& results);

/// Worst relative error between an analytic gradient and central finite
/// differences of f at the given point. Exposed so a deliberately broken
/// gradient can be shown to fail.
double finite_difference_error(const std::function<double(const Matrix&)>& f,
                               const Matrix& at, const Matrix& analytic,
                               double h = 1e-5);

/// Brute-force minimizer of sum_i p_i^m d_i over the probability simplex
/// (iteratively refined grid; independent of the closed-form update).
std::vector<double> simplex_minimize(const std::vector<double>& distances,
                                     double fuzzifier);

}  // namespace xmh::selfcheck
