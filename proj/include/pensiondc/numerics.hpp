#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

namespace pensiondc {

// Adaptive Simpson quadrature with absolute tolerance.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12, int max_depth = 40);

// Same, but splits the domain at the given interior breakpoints first
// (for piecewise-smooth integrands such as step-function coefficients).
double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           std::span<const double> breakpoints, double abs_tol = 1e-12);

// Deterministic pairwise summation; result is independent of how the values
// were produced as long as the array content and order are fixed.
double pairwise_sum(std::span<const double> values);

double mean_of(std::span<const double> values);

// Unbiased sample variance (n-1 denominator).
double sample_variance(std::span<const double> values);

// q in [0,1]; linear interpolation between order statistics.
double quantile(std::vector<double> values, double q);

// Solves A x = b for a symmetric positive definite n x n matrix in row-major
// storage via Cholesky. Throws std::domain_error when not SPD.
std::vector<double> cholesky_solve(std::vector<double> A, std::vector<double> b, std::size_t n);

}  // namespace pensiondc
