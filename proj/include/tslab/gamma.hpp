#pragma once

#include <array>
#include <cstdint>
#include <vector>

namespace tslab {

// (g a)_i = sign[i] * a[perm[i]], slots 0-based.
struct SignedPermutation {
  std::array<int, 6> perm{0, 1, 2, 3, 4, 5};
  std::array<int, 6> sign{1, 1, 1, 1, 1, 1};

  static SignedPermutation identity() { return {}; }
  // (g * h)(a) = g(h(a))
  SignedPermutation operator*(const SignedPermutation& h) const;
  bool operator==(const SignedPermutation&) const = default;
  auto operator<=>(const SignedPermutation&) const = default;

  template <class V>
  std::array<V, 6> apply(const std::array<V, 6>& a) const {
    std::array<V, 6> out{};
    for (int i = 0; i < 6; ++i) out[i] = a[perm[i]] * sign[i];
    return out;
  }
};

std::vector<SignedPermutation> group_generators();
std::vector<SignedPermutation> enumerate_group();

struct GroupStats {
  std::size_t order = 0;
  std::size_t image_order = 0;
  std::size_t kernel_order = 0;
};
GroupStats group_stats(const std::vector<SignedPermutation>& g);

using ThetaPoint = std::array<double, 6>;

struct OrbitTerms {
  std::vector<double> products;            // one per group element
  double collapsed = 0;                    // sum / (2 * 3! * 3!)
  std::vector<std::uint8_t> monomials;     // distinct sin-masks, ascending
  std::vector<double> monomial_values;     // value of each distinct monomial
};
OrbitTerms orbit_terms(const ThetaPoint& p, const std::vector<SignedPermutation>& group);
OrbitTerms orbit_terms(const ThetaPoint& p);

double gamma(const ThetaPoint& p);

struct GammaABC {
  double A = 0, B = 0, C = 0;
};
GammaABC gamma_AB(const ThetaPoint& p);

ThetaPoint gamma_gradient(const ThetaPoint& p);
std::array<std::array<double, 6>, 6> gamma_hessian(const ThetaPoint& p);

struct GammaMax {
  double value = 0;
  ThetaPoint argmax{};
  double gradient_norm = 0;  // projected gradient
  double grid_max = 0;
};

// Multi-start projected ascent on the box [lo, hi] plus a 7^6 grid scan.
GammaMax maximize_gamma(int starts, unsigned seed, const ThetaPoint& lo, const ThetaPoint& hi);
GammaMax maximize_gamma(int starts = 64, unsigned seed = 1);

}  // namespace tslab
