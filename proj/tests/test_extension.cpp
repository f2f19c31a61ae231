#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <random>

#include "tslab/extension.hpp"
#include "tslab/perturbation.hpp"

using namespace tslab;

namespace {

double max_abs_diff(const PlaneGrid& a, const PlaneGrid& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.values.size(); ++k) m = std::max(m, std::abs(a.values[k] - b.values[k]));
  return m;
}

LineFunction gaussian_line(double half, std::size_t m) {
  return LineFunction::from(-half, half, m, [](double y) { return std::exp(-y * y / 2); });
}

CapProfile narrow_profile(double r) {
  CapProfile p;
  p.g = [](double y) { return std::exp(-2 * y * y); };
  p.r = r;
  p.cap = Cap(pi / 2, r);
  return p;
}

}  // namespace

TEST_CASE("plane grid shape rules") {
  CHECK_THROWS(PlaneGrid::make(1, 1, 15, 16));
  auto g = PlaneGrid::make(1, 1, 16, 16);
  double area = 0;
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.nt; ++j) area += g.weight(i, j);
  CHECK(area == doctest::Approx(4.0).epsilon(1e-14));
}

TEST_CASE("extension of constants at the origin and along t = 0") {
  auto one = CircleFunction(256, 1.0);
  CHECK(std::abs(extend_circle_at(one, 0, 0) - two_pi) < 1e-13);
  const double z = 2.404825557695773;
  CHECK(std::abs(bessel_j0_series(z)) < 1e-12);
  CHECK(std::abs(extend_circle_at(one, z, 0)) < 1e-6);
  for (double x : {0.5, 1.7, 5.0, 11.0})
    CHECK(std::abs(extend_circle_at(one, x, 0) - two_pi * bessel_j0_series(x)) < 1e-10);
  auto e1 = CircleFunction::from(256, [](double t) { return std::polar(1.0, t); });
  CHECK(std::abs(extend_circle_at(e1, 0, 0)) < 1e-14);
}

TEST_CASE("fast path matches reference") {
  auto f = CircleFunction::from(128, [](double t) { return cplx(std::exp(std::cos(t)), std::sin(2 * t)); });
  auto g = PlaneGrid::make(15, 20, 33, 41);
  CHECK(max_abs_diff(extend_circle(f, g), extend_circle_reference(f, g)) < 1e-10);
  CircleExtension ext(128, g);
  CHECK(max_abs_diff(ext.forward(f), extend_circle_reference(f, g)) < 1e-10);
}

TEST_CASE("adjoint is the transpose of forward in the weighted pairing") {
  const std::size_t n = 64;
  auto g = PlaneGrid::make(6, 6, 21, 21);
  CircleExtension ext(n, g);
  auto f = CircleFunction::from(n, [](double t) { return cplx(std::cos(3 * t), 1 + std::sin(t)); });
  PlaneGrid G = g.blank();
  std::mt19937_64 rng(5);
  std::normal_distribution<double> nd;
  for (auto& v : G.values) v = cplx(nd(rng), nd(rng));
  const auto u = ext.forward(f);
  cplx lhs = 0;
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.nt; ++j) lhs += g.weight(i, j) * u.at(i, j) * std::conj(G.at(i, j));
  const auto a = ext.adjoint(G);
  cplx rhs = 0;
  for (std::size_t k = 0; k < n; ++k) rhs += f[k] * std::conj(a[k]) * f.spacing();
  CHECK(std::abs(lhs - rhs) < 1e-9 * std::abs(lhs));
}

TEST_CASE("rotation equivariance") {
  const std::size_t n = 128;
  auto f = CircleFunction::from(n, [](double t) { return cplx(std::exp(std::sin(t)), 0.3 * std::cos(5 * t)); });
  for (long s : {3L, 21L, 64L}) {
    const double a = two_pi * static_cast<double>(s) / static_cast<double>(n);
    auto fr = rotate(f, s);
    double worst = 0;
    for (double x : {-7.0, -1.0, 0.0, 2.5, 9.0})
      for (double t : {-5.0, 0.3, 4.0, 12.0}) {
        // rotated f at xi equals f at R(-a) xi
        const double xr = std::cos(a) * x + std::sin(a) * t, tr = -std::sin(a) * x + std::cos(a) * t;
        worst = std::max(worst, std::abs(extend_circle_at(fr, x, t) - extend_circle_at(f, xr, tr)));
      }
    CHECK(worst < 1e-10);
  }
}

TEST_CASE("conjugate-even input gives a real field") {
  const std::size_t n = 256;
  auto f = CircleFunction::from(n, [](double t) { return cplx(1 + std::cos(2 * t), std::sin(3 * t)); });
  // f(-x) = conj f(x), with -x the antipode theta + pi
  auto fr = reflect(f);
  for (std::size_t i = 0; i < n; ++i) REQUIRE(std::abs(fr[i] - std::conj(f[i])) < 1e-14);
  auto u = extend_circle(f, PlaneGrid::make(20, 20, 41, 41));
  double im = 0;
  for (auto v : u.values) im = std::max(im, std::abs(v.imag()));
  CHECK(im < 1e-10);
}

TEST_CASE("even extension doubles the real part") {
  const std::size_t n = 256;
  auto f = CircleFunction::from(n, [](double t) { return std::sin(t) > 0 ? std::pow(std::sin(t), 3) : 0.0; });
  auto F = f + reflect(f);
  auto g = PlaneGrid::make(20, 20, 41, 41);
  auto u = extend_circle(f, g), U = extend_circle(F, g);
  double worst = 0;
  for (std::size_t k = 0; k < u.values.size(); ++k) worst = std::max(worst, std::abs(U.values[k] - 2.0 * u.values[k].real()));
  CHECK(worst < 1e-10);
}

TEST_CASE("stationary phase decay exponent") {
  auto f = CircleFunction::from(512, [](double t) { return std::exp(std::cos(t)); });
  std::vector<double> ts, ms;
  for (double t : {10.0, 20.0, 40.0, 70.0, 100.0}) {
    double m = 0;
    for (double x = -150; x <= 150; x += 0.25) m = std::max(m, std::abs(extend_circle_at(f, x, t)));
    ts.push_back(t);
    ms.push_back(m);
  }
  const double s = loglog_slope(ts, ms);
  CHECK(s >= -0.6);
  CHECK(s <= -0.4);
}

TEST_CASE("lp norm examples") {
  auto z = PlaneGrid::make(3, 3, 16, 16);
  CHECK(lp_norm(z, 6).value == 0.0);
  CHECK(lp_norm(z, 6).corrected() == 0.0);
  auto one = PlaneGrid::make(1, 1, 16, 16);
  for (auto& v : one.values) v = 1.0;
  CHECK(lp_norm(one, 2).value == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(std::isinf(lp_norm(one, 2).tail_pow));
}

TEST_CASE("lp norm of the Gaussian field under grid doubling") {
  const double c0 = std::sqrt(two_pi);
  auto field = [&](double h) {
    auto g = grid_with_spacing(40, 120, h);
    for (std::size_t i = 0; i < g.nx; ++i)
      for (std::size_t j = 0; j < g.nt; ++j) g.at(i, j) = w0_closed_form(c0, g.t(j), g.x(i));
    return lp_norm(g, 6);
  };
  const auto a = field(0.4), b = field(0.2);
  CHECK(std::abs(a.corrected() / b.corrected() - 1) < 1e-3);
  // sixth power against the exact value c0^6 pi^{3/2} / sqrt 3
  const double exact = std::pow(c0, 6) * std::pow(pi, 1.5) / std::sqrt(3.0);
  CHECK(std::abs(std::pow(b.corrected(), 6) / exact - 1) < 5e-3);
}

TEST_CASE("parabola extension of the Gaussian") {
  auto phi = gaussian_line(12, 20001);
  auto g = PlaneGrid::make(6, 100, 25, 401);
  auto u = extend_parabola(phi, g);
  auto ref = extend_parabola_reference(phi, PlaneGrid::make(6, 100, 25, 17));
  auto fast_small = extend_parabola(phi, PlaneGrid::make(6, 100, 25, 17));
  CHECK(max_abs_diff(ref, fast_small) < 1e-10);
  double worst = 0;
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.nt; ++j) {
      const cplx expect = std::sqrt(two_pi / cplx(1, g.t(j))) * std::exp(-g.x(i) * g.x(i) / (2.0 * cplx(1, g.t(j))));
      worst = std::max(worst, std::abs(u.at(i, j) - expect));
    }
  CHECK(worst < 1e-10);
  const auto origin = extend_parabola(phi, PlaneGrid::make(1, 1, 17, 17));
  CHECK(std::abs(origin.at(8, 8) - std::sqrt(two_pi)) < 1e-12);
  // |value| at t = 100 follows the closed-form (1 + t^2)^{-1/4} decay.
  CHECK(std::abs(u.at(12, 400)) <= 1.01 * std::sqrt(two_pi) / std::pow(1 + 1e4, 0.25));
}

TEST_CASE("parabola extension rejects an undecayed profile") {
  auto bad = gaussian_line(2, 401);
  CHECK_THROWS_AS(extend_parabola(bad, PlaneGrid::make(1, 1, 16, 16)), std::domain_error);
  CHECK_THROWS_AS(extend_parabola_reference(bad, PlaneGrid::make(1, 1, 16, 16)), std::domain_error);
}

TEST_CASE("rescaling identity residual") {
  auto g = PlaneGrid::make(10, 10, 64, 64);
  const double a = rescaling_identity_residual(narrow_profile(0.1), g);
  const double b = rescaling_identity_residual(narrow_profile(0.05), g);
  CHECK(a < 1e-8);
  CHECK(b <= std::max(a, 1e-12));
  auto rotated = narrow_profile(0.1);
  rotated.cap = Cap(1.0, 0.1);
  CHECK(rescaling_identity_residual(rotated, g) < 1e-8);
  auto zero = narrow_profile(0.1);
  zero.g = [](double) { return 0.0; };
  CHECK(rescaling_identity_residual(zero, g) == 0.0);
  CHECK(smallcap_schrodinger_gap(zero, g) == 0.0);
  CHECK_THROWS_AS(rescaling_identity_residual(narrow_profile(0.2), g), std::domain_error);
}

TEST_CASE("small-cap gap decreases at rate r^2") {
  auto g = grid_with_spacing(20, 20, 0.25);
  std::vector<double> rs, gaps;
  for (double r : {0.2, 0.1, 0.05, 0.025}) {
    rs.push_back(r);
    gaps.push_back(smallcap_schrodinger_gap(narrow_profile(r), g));
  }
  for (std::size_t k = 1; k < gaps.size(); ++k) CHECK(gaps[k] < gaps[k - 1]);
  const double s = loglog_slope(rs, gaps);
  CHECK(s > 1.8);
  CHECK(s < 2.2);
}

TEST_CASE("binary and csv serialization") {
  auto f = CircleFunction::from(64, [](double t) { return cplx(std::cos(t), std::sin(2 * t)); });
  auto u = extend_circle(f, PlaneGrid::make(3, 4, 17, 19));
  const auto path = std::filesystem::temp_directory_path() / "tslab_grid_roundtrip.bin";
  save_binary(path.string(), u);
  CHECK(std::filesystem::file_size(path) == 32 + 16 * u.values.size());
  auto v = load_binary(path.string());
  std::filesystem::remove(path);
  CHECK(v.nx == u.nx);
  CHECK(v.nt == u.nt);
  CHECK(v.X == u.X);
  CHECK(v.T == u.T);
  CHECK(v.values == u.values);
}
