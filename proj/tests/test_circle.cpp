#include "doctest.h"

#include <cmath>
#include <random>
#include <sstream>

#include "tslab/circle.hpp"

using namespace tslab;

namespace {

CircleFunction random_nonnegative(std::size_t n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<cplx> s(n);
  for (auto& v : s) v = u(rng);
  return CircleFunction(std::move(s));
}

}  // namespace

TEST_CASE("grid invariants") {
  CHECK_THROWS(CircleFunction(7, 1.0));
  CHECK_THROWS(CircleFunction(6, 1.0));
  CHECK_NOTHROW(CircleFunction(8, 1.0));
  CircleFunction f(16, 1.0);
  CHECK(f.theta(4) == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(reflect(reflect(f)).samples() == f.samples());
}

TEST_CASE("l2 norm examples") {
  CHECK(l2_norm(CircleFunction(256, 1.0)) == doctest::Approx(std::sqrt(two_pi)).epsilon(1e-14));
  CHECK(l2_norm(CircleFunction(256, 0.0)) == 0.0);
  auto c = CircleFunction::from(256, [](double t) { return std::cos(t); });
  CHECK(l2_norm(c) == doctest::Approx(std::sqrt(pi)).epsilon(1e-14));
}

TEST_CASE("symmetrize examples") {
  const std::size_t n = 256;
  auto one = symmetrize(CircleFunction(n, 1.0));
  for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(one[i] - 1.0) < 1e-15);

  auto upper = CircleFunction::from(n, [](double t) { return std::sin(t) > 0 ? 1.0 : 0.0; });
  auto s = symmetrize(upper);
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(std::sin(upper.theta(i))) > 1e-12) CHECK(std::abs(s[i] - 1.0 / std::sqrt(2.0)) < 1e-15);

  auto half_cos = CircleFunction::from(n, [](double t) { return std::max(0.0, std::cos(t)); });
  auto hs = symmetrize(half_cos);
  for (std::size_t i = 0; i < n; ++i)
    CHECK(std::abs(hs[i].real() - std::abs(std::cos(half_cos.theta(i))) / std::sqrt(2.0)) < 1e-15);

  CHECK_THROWS_AS(symmetrize(CircleFunction(n, -1.0)), std::invalid_argument);
}

TEST_CASE("symmetrize complex input uses modulus") {
  auto f = CircleFunction::from(64, [](double t) { return std::polar(1.0 + 0.5 * std::cos(t), 3.0 * t); });
  auto g = symmetrize(f), h = symmetrize(abs(f));
  CHECK(g.samples() == h.samples());
}

TEST_CASE("symmetrize idempotent and norm preserving") {
  std::mt19937_64 rng(7);
  for (int k = 0; k < 50; ++k) {
    auto f = random_nonnegative(128, rng);
    auto s = symmetrize(f);
    auto ss = symmetrize(s);
    CHECK(ss.samples() == s.samples());
    CHECK(std::abs(l2_norm(s) - l2_norm(f)) <= 1e-12 * l2_norm(f));
    CHECK(symmetry_residual(s) == 0.0);
  }
}

TEST_CASE("cap distance examples") {
  const double deg = pi / 180;
  Cap a(0, 0.1), b(90 * deg, 0.1);
  CHECK(cap_distance(a, a) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(cap_distance(a, b) == doctest::Approx(2 + 10 * std::sqrt(2.0)).epsilon(1e-14));
  CHECK(cap_distance(Cap(0, 0.5), Cap(0, 0.25)) == doctest::Approx(2.5).epsilon(1e-15));
  // Asymmetric as printed: the center term divides by the first radius.
  CHECK(cap_distance(Cap(0, 0.5), Cap(pi / 2, 0.25)) != doctest::Approx(cap_distance(Cap(pi / 2, 0.25), Cap(0, 0.5))));
  CHECK_THROWS(Cap(0, 0.0));
  CHECK_THROWS(Cap(0, 1.5));
}

TEST_CASE("cap class distance examples") {
  const double deg = pi / 180;
  Cap c(0.3, 0.2);
  CHECK(cap_class_distance({c}, {c.antipode()}) == doctest::Approx(2.0).epsilon(1e-15));
  CHECK(cap_class_distance({Cap(0, 0.1)}, {Cap(180 * deg, 0.1)}) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK(cap_class_distance({Cap(0, 0.1)}, {Cap(90 * deg, 0.1)}) == doctest::Approx(2 + 10 * std::sqrt(2.0)).epsilon(1e-14));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> ang(0, two_pi), rad(0.05, 1.0);
  for (int k = 0; k < 100; ++k) {
    Cap a(ang(rng), rad(rng)), b(ang(rng), rad(rng));
    const double d = cap_class_distance({a}, {b});
    CHECK(std::abs(cap_class_distance({a.antipode()}, {b}) - d) < 1e-12);
    CHECK(std::abs(cap_class_distance({a}, {b.antipode()}) - d) < 1e-12);
  }
}

TEST_CASE("cap membership is rotation invariant") {
  const std::size_t n = 512;
  Cap c(0.7, 0.3);
  auto base = cap_mask(c, n);
  for (long s : {1L, 17L, 100L, 255L}) {
    Cap rc(c.center + two_pi * static_cast<double>(s) / static_cast<double>(n), c.radius);
    auto m = cap_mask(rc, n);
    for (std::size_t i = 0; i < n; ++i) CHECK(m[(i + static_cast<std::size_t>(s)) % n] == base[i]);
  }
  // Exact projection condition: |sin(theta - c)| < r with positive inner product.
  for (std::size_t i = 0; i < n; ++i) {
    const double d = two_pi * static_cast<double>(i) / static_cast<double>(n) - c.center;
    CHECK(base[i] == (std::cos(d) > 0 && std::abs(std::sin(d)) < c.radius));
  }
}

TEST_CASE("pullback examples") {
  const std::size_t n = 8192, m = 101;
  for (double r : {0.2, 0.1, 0.05}) {
    Cap c(pi / 2, r);
    auto one = cap_indicator(c, n);
    // f = 1 on the unit cap, so support precondition holds.
    auto f = cap_indicator(Cap(pi / 2, 1.0), n);
    auto p = pullback(f, c, m);
    for (auto v : p.values) CHECK(std::abs(v - std::sqrt(r)) < 1e-12);
    auto q = pullback(f * (1.0 / std::sqrt(r)), c, m);
    for (auto v : q.values) CHECK(std::abs(v - 1.0) < 1e-12);
    (void)one;
  }
}

TEST_CASE("pullback rejects mass outside the unit cap") {
  auto f = CircleFunction(1024, 1.0);
  CHECK_THROWS(pullback(f, Cap(pi / 2, 0.1), 64));
}

TEST_CASE("pullbacks at two radii agree after rescaling") {
  const std::size_t n = 1 << 16, m = 400;
  auto bump = CircleFunction::from(n, [](double t) {
    const double d = t - pi / 2;
    return std::cos(d) > 0 ? std::exp(-std::pow(std::sin(d) / 0.02, 2)) : 0.0;
  });
  auto a = pullback(bump, Cap(pi / 2, 0.1), m);
  auto b = pullback(bump, Cap(pi / 2, 0.05), m);
  // y at radius 0.1 corresponds to 2y at radius 0.05; compare on |y| < 1/2.
  double worst = 0;
  for (std::size_t k = 0; k < m; ++k) {
    const double y = a.y(k);
    if (std::abs(y) >= 0.5) continue;
    const double yb = 2 * y;
    const double pos = (yb + 1) * m / 2.0 - 0.5;
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const double w = pos - static_cast<double>(lo);
    const cplx vb = (1 - w) * b.values[lo] + w * b.values[lo + 1];
    worst = std::max(worst, std::abs(a.values[k] / std::sqrt(0.1) - vb / std::sqrt(0.05)));
  }
  CHECK(worst < 2e-3);
}

TEST_CASE("pullback preserves norm up to the r^2 Jacobian defect") {
  const std::size_t n = 1 << 16, m = 4000;
  double prev = 1;
  for (double r : {0.2, 0.1, 0.05}) {
    Cap c(pi / 2, r);
    auto f = CircleFunction::from(n, [&](double t) {
      const double s = std::sin(t - pi / 2) / r;
      return std::cos(t - pi / 2) > 0 && std::abs(s) < 1 ? std::exp(-4 * s * s) * (1 - s * s) : 0.0;
    });
    auto p = pullback(f, c, m);
    double line = 0;
    for (auto v : p.values) line += std::norm(v) * p.spacing();
    const double circle = std::pow(l2_norm(f), 2);
    const double defect = std::abs(line - circle) / circle;
    CHECK(defect < r * r);
    CHECK(defect < prev);
    prev = defect;
  }
}

TEST_CASE("csv round trip") {
  auto f = CircleFunction::from(64, [](double t) { return cplx(std::cos(3 * t), std::sin(t) / 3); });
  std::stringstream ss;
  write_csv(ss, f);
  auto g = read_circle_csv(ss);
  REQUIRE(g.size() == f.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(g[i] == f[i]);
}
