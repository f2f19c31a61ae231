#include "doctest.h"

#include <cmath>
#include <random>

#include "tslab/perturbation.hpp"
#include "tslab/trilinear.hpp"

using namespace tslab;

namespace {

CircleFunction random_smooth(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  std::uniform_real_distribution<double> ph(0, two_pi);
  std::array<double, 6> a{}, p{};
  for (int k = 0; k < 6; ++k) {
    a[static_cast<std::size_t>(k)] = nd(rng) / (1 + k);
    p[static_cast<std::size_t>(k)] = ph(rng);
  }
  return CircleFunction::from(n, [&](double t) {
    double s = 0;
    for (int k = 0; k < 6; ++k) s += a[static_cast<std::size_t>(k)] * std::cos((k + 1) * t + p[static_cast<std::size_t>(k)]);
    return std::exp(s);
  });
}

CircleFunction bump(std::size_t n, double c, double w) {
  return CircleFunction::from(n, [=](double t) { return std::exp((std::cos(t - c) - 1) / w); });
}

}  // namespace

TEST_CASE("zero input") {
  CircleFunction z(128, 0.0);
  CHECK(trilinear_norm_fourier(z).value == 0.0);
  CHECK(trilinear_norm_direct(z).extrapolated == 0.0);
}

TEST_CASE("degree three homogeneity") {
  auto f = bump(128, 0.4, 0.5);
  auto f2 = f * 2.0;
  const auto a = trilinear_norm_fourier(f), b = trilinear_norm_fourier(f2);
  CHECK(b.value == doctest::Approx(8 * a.value).epsilon(1e-13));
  const auto da = trilinear_norm_direct(f), db = trilinear_norm_direct(f2);
  CHECK(db.extrapolated == doctest::Approx(8 * da.extrapolated).epsilon(1e-13));
}

TEST_CASE("direct oracle rejects signed or complex input") {
  CHECK_THROWS(trilinear_norm_direct(CircleFunction(64, -1.0)));
  CHECK_THROWS(trilinear_norm_direct(CircleFunction(64, cplx(0, 1))));
}

TEST_CASE("direct oracle is rotation invariant") {
  auto f = bump(128, 0.3, 0.5) + CircleFunction::from(128, [](double t) { return 0.2 * (1 + std::sin(3 * t)); });
  const double a = trilinear_norm_direct(f).extrapolated;
  for (long s : {5L, 32L, 77L}) CHECK(std::abs(trilinear_norm_direct(rotate(f, s)).extrapolated / a - 1) < 1e-6);
}

TEST_CASE("kappa is a property of the normalization") {
  const auto rep = measure_kappa(default_kappa_samples(), default_trilinear_grid());
  CHECK(rep.kappa > 0);
  CHECK(rep.ratios.size() >= 3);
  CHECK(rep.spread < 0.05);
  CHECK(std::abs(rep.over_2pi - 1) < 0.02);
  CHECK(plancherel_kappa() == doctest::Approx(rep.kappa).epsilon(1e-12));
}

TEST_CASE("route agreement within two percent") {
  std::vector<CircleFunction> fs = {CircleFunction(128, 1.0), bump(128, 0.0, 0.5), bump(128, 1.0, 1.0),
                                    CircleFunction::from(128, [](double t) { return std::pow(std::max(0.0, std::sin(t)), 2); })};
  for (const auto& f : fs) CHECK(trilinear_compare(f).relative_gap() < 0.02);
}

TEST_CASE("constant function against the exact two-norm") {
  // ||s*s*s||_2^2 for the full circle, from the radial Bessel integral of J0^6
  const double exact = std::sqrt(std::pow(two_pi, 5) * 0.33682777);
  const auto d = trilinear_norm_direct(CircleFunction(128, 1.0));
  CHECK(std::abs(d.extrapolated / exact - 1) < 1e-3);
}

TEST_CASE("sixfold inner product identity") {
  const auto g = default_trilinear_grid();
  CircleFunction one(128, 1.0);
  CHECK(sixfold_identity_residual({one, one, one, one, one, one}, g) < 1e-6);
  auto b = bump(128, pi / 2, 0.5);
  CHECK(sixfold_identity_residual({b, b, b, b, b, b}, g) < 1e-3);
  auto c = bump(128, 0.2, 0.7), d = bump(128, 2.0, 0.4);
  CHECK(sixfold_identity_residual({b, c, d, d, c, b}, g) < 1e-3);
}

TEST_CASE("antipodal ratio near five halves") {
  const double eps = 0.1;
  auto f = f_eps_circle(eps, 1024);
  auto F = (f + reflect(f)) * (1 / std::sqrt(2.0));
  CHECK(std::abs(l2_norm(F) - l2_norm(f)) < 1e-10);
  const double r = antipodal_lower_bound(eps, 1024, grid_with_spacing(128, 128, 1.0));
  CHECK(r >= 2.5 * 0.95);
  CHECK(r >= 2.4);
  CHECK(r <= 2.6);
}

TEST_CASE("cap interaction reduction to the antipodal cap") {
  const auto g = grid_with_spacing(100, 100, 1.0);
  Cap c1(0.0, 0.3), c2(1.2, 0.2);
  for (const Cap& c : {c2, c2.antipode()}) {
    const auto p = cap_interaction_pairings(c1, c, 4096, g);
    CHECK(p[0] > 0);
    CHECK(std::abs(p[1] / p[0] - 1) < 1e-3);
  }
  const auto a = cap_interaction(c1, c2, 4096, g), b = cap_interaction(c1, c2.antipode(), 4096, g);
  CHECK(std::abs(a.ratio - b.ratio) <= a.bound + b.bound + 1e-9 * a.ratio);
}

TEST_CASE("cap interaction decays with separation") {
  const auto sweep = separation_sweep(0.04, {4, 8, 16, 32}, 8192, grid_with_spacing(200, 200, 1.0));
  CHECK(sweep.points.size() == 4);
  CHECK(sweep.slope <= -0.25);
  for (std::size_t k = 1; k < sweep.points.size(); ++k)
    CHECK(sweep.points[k].value.ratio < sweep.points[k - 1].value.ratio);
}

TEST_CASE("trilinear norm does not drop under symmetrization") {
  std::mt19937_64 rng(11);
  const auto g = default_trilinear_grid();
  const double kappa = plancherel_kappa();
  for (int k = 0; k < 100; ++k) {
    auto f = random_smooth(128, rng);
    const auto a = trilinear_norm_fourier(f, g, kappa), b = trilinear_norm_fourier(symmetrize(f), g, kappa);
    CHECK(b.value >= a.value - (a.bound + b.bound));
  }
}
