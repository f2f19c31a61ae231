#include "doctest.h"

#include <cmath>
#include <random>
#include <set>

#include "tslab/gamma.hpp"
#include "tslab/numerics.hpp"

using namespace tslab;

namespace {

ThetaPoint random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0, pi / 2);
  ThetaPoint p;
  for (auto& v : p) v = u(rng);
  return p;
}

ThetaPoint filled(double v) {
  ThetaPoint p;
  p.fill(v);
  return p;
}

}  // namespace

TEST_CASE("group order, image and kernel") {
  const auto g = enumerate_group();
  const auto s = group_stats(g);
  CHECK(s.order == 1440);
  CHECK(s.image_order == 720);
  CHECK(s.kernel_order == 2);
  std::set<SignedPermutation> set(g.begin(), g.end());
  CHECK(set.size() == g.size());
  SignedPermutation flip;
  flip.sign.fill(-1);
  CHECK(set.count(flip) == 1);
  CHECK(set.count(SignedPermutation::identity()) == 1);
}

TEST_CASE("group is closed and associative") {
  const auto g = enumerate_group();
  std::set<SignedPermutation> set(g.begin(), g.end());
  std::mt19937_64 rng(2);
  std::uniform_int_distribution<std::size_t> pick(0, g.size() - 1);
  for (int k = 0; k < 2000; ++k) {
    const auto& a = g[pick(rng)];
    const auto& b = g[pick(rng)];
    const auto& c = g[pick(rng)];
    CHECK(set.count(a * b) == 1);
    CHECK((a * b) * c == a * (b * c));
    std::array<double, 6> v{1, 2, 3, 4, 5, 6};
    CHECK((a * b).apply(v) == a.apply(b.apply(v)));
  }
}

TEST_CASE("group preserves the balanced-sum constraint") {
  std::mt19937_64 rng(4);
  std::normal_distribution<double> nd;
  for (const auto& g : enumerate_group()) {
    std::array<double, 6> a{};
    for (auto& v : a) v = nd(rng);
    a[5] = a[0] + a[1] + a[2] - a[3] - a[4];
    const auto b = g.apply(a);
    CHECK(std::abs(b[0] + b[1] + b[2] - b[3] - b[4] - b[5]) < 1e-12);
  }
}

TEST_CASE("orbit examples") {
  const auto a = orbit_terms(filled(pi / 4));
  CHECK(a.products.size() == 1440);
  CHECK(a.collapsed == doctest::Approx(2.5).epsilon(1e-14));
  CHECK(a.monomials.size() == 20);
  const auto z = orbit_terms(filled(0.0));
  CHECK(z.collapsed == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("twenty-term formula equals the orbit sum") {
  const auto g = enumerate_group();
  std::mt19937_64 rng(9);
  double worst = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto p = random_point(rng);
    worst = std::max(worst, std::abs(gamma(p) - orbit_terms(p, g).collapsed));
  }
  CHECK(worst < 1e-12);
}

TEST_CASE("gamma examples") {
  CHECK(gamma(filled(pi / 4)) == doctest::Approx(2.5).epsilon(1e-15));
  CHECK(gamma(filled(0.0)) == doctest::Approx(1.0).epsilon(1e-15));
  for (double a : {0.0, 0.3, 0.9, 1.5})
    for (double b : {0.1, 0.7, 1.2}) CHECK(std::abs(gamma({pi / 2, 0, 0, 0, a, b}) - std::sin(a + b)) < 1e-14);
}

TEST_CASE("gamma invariances") {
  std::mt19937_64 rng(10);
  for (int k = 0; k < 200; ++k) {
    const auto p = random_point(rng);
    const double v = gamma(p);
    CHECK(std::abs(gamma({p[3], p[4], p[5], p[0], p[1], p[2]}) - v) < 1e-12);
    CHECK(std::abs(gamma({p[1], p[0], p[2], p[3], p[4], p[5]}) - v) < 1e-12);
    CHECK(std::abs(gamma({p[2], p[0], p[1], p[3], p[4], p[5]}) - v) < 1e-12);
    CHECK(std::abs(gamma({p[0], p[1], p[2], p[5], p[3], p[4]}) - v) < 1e-12);
    CHECK(std::abs(gamma({p[0], p[1], pi / 2 - p[3], pi / 2 - p[2], p[4], p[5]}) - v) < 1e-12);
  }
}

TEST_CASE("A B C decomposition") {
  std::mt19937_64 rng(12);
  double sum_res = 0, rec_res = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto p = random_point(rng);
    const auto abc = gamma_AB(p);
    const double rhs = std::cos(p[0] - p[1]) * std::cos(p[2] - p[3]) + std::sin(p[0] + p[1]) * std::sin(p[2] + p[3]);
    sum_res = std::max(sum_res, std::abs(abc.A + abc.B - rhs));
    const double rec = std::cos(p[4]) * std::cos(p[5]) * abc.A + std::sin(p[4]) * std::sin(p[5]) * abc.B +
                       std::sin(p[4] + p[5]) * abc.C;
    rec_res = std::max(rec_res, std::abs(rec - gamma(p)));
  }
  CHECK(sum_res < 1e-12);
  CHECK(rec_res < 1e-12);
  // degenerate denominator takes the collection path
  ThetaPoint d{0.3, 0.5, 0.7, 0.2, 0.0, 0.0};
  const auto abc = gamma_AB(d);
  CHECK(std::abs(abc.A - gamma(d)) < 1e-12);
  const auto q = gamma_AB(filled(pi / 4));
  CHECK(std::abs(0.5 * q.A + 0.5 * q.B + q.C - 2.5) < 1e-12);
}

TEST_CASE("analytic gradient and hessian match finite differences") {
  std::mt19937_64 rng(13);
  const double h = 1e-5;
  double gw = 0, hw = 0;
  for (int k = 0; k < 100; ++k) {
    const auto p = random_point(rng);
    const auto g = gamma_gradient(p);
    const auto H = gamma_hessian(p);
    for (std::size_t i = 0; i < 6; ++i) {
      auto a = p, b = p;
      a[i] += h;
      b[i] -= h;
      gw = std::max(gw, std::abs((gamma(a) - gamma(b)) / (2 * h) - g[i]));
      const auto ga = gamma_gradient(a), gb = gamma_gradient(b);
      for (std::size_t j = 0; j < 6; ++j) hw = std::max(hw, std::abs((ga[j] - gb[j]) / (2 * h) - H[i][j]));
    }
  }
  CHECK(gw < 1e-6);
  CHECK(hw < 1e-6);
}

TEST_CASE("diagonal family") {
  for (double a : {0.1, 0.4, pi / 4, 1.0, 1.4}) {
    const double b = pi / 2 - a;
    CHECK(std::abs(gamma({a, a, a, b, b, b}) - 2.5 * std::pow(std::sin(2 * a), 3)) < 1e-13);
  }
}

TEST_CASE("global maximum") {
  const auto m = maximize_gamma();
  CHECK(std::abs(m.value - 2.5) < 1e-9);
  CHECK(m.gradient_norm < 1e-8);
  CHECK(m.grid_max <= 2.5 + 1e-12);
  double worst = 0;
  for (double v : m.argmax) worst = std::max(worst, std::abs(v - pi / 4));
  CHECK(worst < 1e-6);
}

TEST_CASE("maximum on the degenerate face") {
  const ThetaPoint lo{pi / 2, 0, 0, 0, 0, 0}, hi{pi / 2, 0, 0, 0, pi / 2, pi / 2};
  const auto m = maximize_gamma(64, 3, lo, hi);
  CHECK(std::abs(m.value - 1.0) < 1e-9);
  CHECK(std::abs(m.argmax[4] + m.argmax[5] - pi / 2) < 1e-4);
}
