#pragma once

#include <complex>
#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace tslab {

using cplx = std::complex<double>;

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Fixed-order pairwise reduction; result depends only on the input order.
double pairwise_sum(std::span<const double> v);
cplx pairwise_sum(std::span<const cplx> v);

// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y);

// Composite trapezoid weights for n equispaced nodes with spacing h.
std::vector<double> trapezoid_weights(std::size_t n, double h);

// J0 by its power series; adequate for |x| <= 20.
double bessel_j0_series(double x);

}  // namespace tslab
