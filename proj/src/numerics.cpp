#include "tslab/numerics.hpp"

#include <cmath>
#include <stdexcept>

namespace tslab {

namespace {

template <class T>
T pairwise(const T* p, std::size_t n) {
  if (n <= 16) {
    T s{};
    for (std::size_t i = 0; i < n; ++i) s += p[i];
    return s;
  }
  std::size_t h = n / 2;
  return pairwise(p, h) + pairwise(p + h, n - h);
}

}  // namespace

double pairwise_sum(std::span<const double> v) { return pairwise(v.data(), v.size()); }

cplx pairwise_sum(std::span<const cplx> v) { return pairwise(v.data(), v.size()); }

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope: need >= 2 points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

std::vector<double> trapezoid_weights(std::size_t n, double h) {
  std::vector<double> w(n, h);
  if (n >= 1) w.front() = 0.5 * h;
  if (n >= 2) w.back() = 0.5 * h;
  return w;
}

double bessel_j0_series(double x) {
  const double q = -0.25 * x * x;
  double term = 1.0, sum = 1.0;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<double>(m) * m);
    sum += term;
    if (std::abs(term) < 1e-18 * std::max(1.0, std::abs(sum)) && m > 2) break;
  }
  return sum;
}

}  // namespace tslab
