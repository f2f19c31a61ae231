#include "tslab/gamma.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <deque>
#include <numbers>
#include <random>
#include <set>

namespace tslab {

SignedPermutation SignedPermutation::operator*(const SignedPermutation& h) const {
  SignedPermutation r;
  for (int i = 0; i < 6; ++i) {
    r.perm[i] = h.perm[perm[i]];
    r.sign[i] = sign[i] * h.sign[perm[i]];
  }
  return r;
}

std::vector<SignedPermutation> group_generators() {
  SignedPermutation half{{3, 4, 5, 0, 1, 2}, {1, 1, 1, 1, 1, 1}};
  SignedPermutation swap12{{1, 0, 2, 3, 4, 5}, {1, 1, 1, 1, 1, 1}};
  SignedPermutation cycle123{{1, 2, 0, 3, 4, 5}, {1, 1, 1, 1, 1, 1}};
  SignedPermutation flip34{{0, 1, 3, 2, 4, 5}, {1, 1, -1, -1, 1, 1}};
  SignedPermutation flip2345{{0, 3, 4, 1, 2, 5}, {1, -1, -1, -1, -1, 1}};
  return {half, swap12, cycle123, flip34, flip2345};
}

std::vector<SignedPermutation> enumerate_group() {
  const auto gens = group_generators();
  std::set<SignedPermutation> seen{SignedPermutation::identity()};
  std::vector<SignedPermutation> order{SignedPermutation::identity()};
  std::deque<SignedPermutation> queue{SignedPermutation::identity()};
  while (!queue.empty()) {
    const auto g = queue.front();
    queue.pop_front();
    for (const auto& s : gens) {
      const auto h = s * g;
      if (seen.insert(h).second) {
        order.push_back(h);
        queue.push_back(h);
      }
    }
  }
  return order;
}

GroupStats group_stats(const std::vector<SignedPermutation>& g) {
  std::set<std::array<int, 6>> image;
  std::size_t kernel = 0;
  for (const auto& e : g) {
    image.insert(e.perm);
    if (e.perm == SignedPermutation::identity().perm) ++kernel;
  }
  return {g.size(), image.size(), kernel};
}

OrbitTerms orbit_terms(const ThetaPoint& p, const std::vector<SignedPermutation>& group) {
  std::array<double, 6> c{}, s{};
  for (int i = 0; i < 6; ++i) {
    c[i] = std::cos(p[i]);
    s[i] = std::sin(p[i]);
  }
  OrbitTerms out;
  std::set<std::uint8_t> masks;
  double sum = 0;
  for (const auto& g : group) {
    double prod = 1;
    std::uint8_t mask = 0;
    for (int i = 0; i < 6; ++i) {
      const int j = g.perm[i];
      if (g.sign[i] > 0) {
        prod *= c[j];
      } else {
        prod *= s[j];
        mask |= static_cast<std::uint8_t>(1u << j);
      }
    }
    out.products.push_back(prod);
    masks.insert(mask);
    sum += prod;
  }
  out.collapsed = sum / (2.0 * 6.0 * 6.0);
  for (auto m : masks) {
    double v = 1;
    for (int j = 0; j < 6; ++j) v *= (m >> j) & 1 ? s[j] : c[j];
    out.monomials.push_back(m);
    out.monomial_values.push_back(v);
  }
  return out;
}

OrbitTerms orbit_terms(const ThetaPoint& p) { return orbit_terms(p, enumerate_group()); }

namespace {

struct CS {
  std::array<double, 6> c, s;
  explicit CS(const ThetaPoint& p) {
    for (int i = 0; i < 6; ++i) {
      c[i] = std::cos(p[i]);
      s[i] = std::sin(p[i]);
    }
  }
};

// Twenty-term closed form, in cos/sin variables so derivatives can substitute.
double gamma_cs(const std::array<double, 6>& c, const std::array<double, 6>& s) {
  const double one_sin_lo[3] = {c[0] * c[1] * s[2], c[0] * s[1] * c[2], s[0] * c[1] * c[2]};
  const double one_sin_hi[3] = {s[3] * c[4] * c[5], c[3] * s[4] * c[5], c[3] * c[4] * s[5]};
  const double two_sin_lo[3] = {c[0] * s[1] * s[2], s[0] * c[1] * s[2], s[0] * s[1] * c[2]};
  const double two_sin_hi[3] = {s[3] * s[4] * c[5], s[3] * c[4] * s[5], c[3] * s[4] * s[5]};
  double g = c[0] * c[1] * c[2] * c[3] * c[4] * c[5] + s[0] * s[1] * s[2] * s[3] * s[4] * s[5];
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) g += one_sin_lo[a] * one_sin_hi[b] + two_sin_lo[a] * two_sin_hi[b];
  return g;
}

}  // namespace

double gamma(const ThetaPoint& p) {
  CS v(p);
  return gamma_cs(v.c, v.s);
}

GammaABC gamma_AB(const ThetaPoint& p) {
  CS v(p);
  const auto& c = v.c;
  const auto& s = v.s;
  GammaABC r;
  r.A = c[0] * c[1] * std::cos(p[2] - p[3]) + std::sin(p[0] + p[1]) * c[2] * s[3];
  r.B = s[0] * s[1] * std::cos(p[2] - p[3]) + std::sin(p[0] + p[1]) * s[2] * c[3];
  const double den = std::sin(p[4] + p[5]);
  if (std::abs(den) > 1e-8) {
    r.C = (gamma_cs(c, s) - c[4] * c[5] * r.A - s[4] * s[5] * r.B) / den;
  } else {
    r.C = (c[0] * c[1] * s[2] + c[0] * s[1] * c[2] + s[0] * c[1] * c[2]) * c[3] +
          (c[0] * s[1] * s[2] + s[0] * c[1] * s[2] + s[0] * s[1] * c[2]) * s[3];
  }
  return r;
}

ThetaPoint gamma_gradient(const ThetaPoint& p) {
  CS v(p);
  ThetaPoint g{};
  for (int i = 0; i < 6; ++i) {
    auto c = v.c, s = v.s;
    c[i] = -v.s[i];
    s[i] = v.c[i];
    g[i] = gamma_cs(c, s);
  }
  return g;
}

std::array<std::array<double, 6>, 6> gamma_hessian(const ThetaPoint& p) {
  CS v(p);
  std::array<std::array<double, 6>, 6> h{};
  const double g0 = gamma_cs(v.c, v.s);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      if (i == j) {
        h[i][j] = -g0;
        continue;
      }
      auto c = v.c, s = v.s;
      c[i] = -v.s[i];
      s[i] = v.c[i];
      c[j] = -v.s[j];
      s[j] = v.c[j];
      h[i][j] = gamma_cs(c, s);
    }
  return h;
}

namespace {

ThetaPoint clamp_box(ThetaPoint p, const ThetaPoint& lo, const ThetaPoint& hi) {
  for (int i = 0; i < 6; ++i) p[i] = std::clamp(p[i], lo[i], hi[i]);
  return p;
}

ThetaPoint projected_gradient(const ThetaPoint& p, const ThetaPoint& lo, const ThetaPoint& hi) {
  ThetaPoint g = gamma_gradient(p);
  for (int i = 0; i < 6; ++i) {
    if (lo[i] == hi[i]) g[i] = 0;
    else if (p[i] <= lo[i] && g[i] < 0) g[i] = 0;
    else if (p[i] >= hi[i] && g[i] > 0) g[i] = 0;
  }
  return g;
}

double norm(const ThetaPoint& g) {
  double s = 0;
  for (double x : g) s += x * x;
  return std::sqrt(s);
}

ThetaPoint ascend(ThetaPoint p, const ThetaPoint& lo, const ThetaPoint& hi) {
  p = clamp_box(p, lo, hi);
  double f = gamma(p), step = 0.5;
  for (int it = 0; it < 4000; ++it) {
    const ThetaPoint g = projected_gradient(p, lo, hi);
    const double gn = norm(g);
    if (gn < 1e-13) break;
    bool moved = false;
    for (int k = 0; k < 60; ++k) {
      ThetaPoint q = p;
      for (int i = 0; i < 6; ++i) q[i] += step * g[i];
      q = clamp_box(q, lo, hi);
      double lin = 0;
      for (int i = 0; i < 6; ++i) lin += g[i] * (q[i] - p[i]);
      const double fq = gamma(q);
      if (fq >= f + 1e-4 * lin) {
        moved = fq > f || lin > 0;
        p = q;
        f = fq;
        step = std::min(step * 1.5, 4.0);
        break;
      }
      step *= 0.5;
    }
    if (!moved) break;
  }
  // Newton polish on the free coordinates.
  for (int it = 0; it < 20; ++it) {
    const ThetaPoint g = projected_gradient(p, lo, hi);
    if (norm(g) < 1e-14) break;
    const auto h = gamma_hessian(p);
    std::vector<int> free;
    for (int i = 0; i < 6; ++i)
      if (lo[i] < hi[i] && p[i] > lo[i] && p[i] < hi[i]) free.push_back(i);
    if (free.empty()) break;
    const auto m = static_cast<Eigen::Index>(free.size());
    Eigen::MatrixXd H(m, m);
    Eigen::VectorXd G(m);
    for (Eigen::Index a = 0; a < m; ++a) {
      G(a) = g[free[a]];
      for (Eigen::Index b = 0; b < m; ++b) H(a, b) = h[free[a]][free[b]];
    }
    Eigen::VectorXd d = H.ldlt().solve(-G);
    ThetaPoint q = p;
    for (Eigen::Index a = 0; a < m; ++a) q[free[a]] += d(a);
    q = clamp_box(q, lo, hi);
    if (!(gamma(q) >= gamma(p) - 1e-15) || !d.allFinite()) break;
    p = q;
  }
  return p;
}

}  // namespace

GammaMax maximize_gamma(int starts, unsigned seed, const ThetaPoint& lo, const ThetaPoint& hi) {
  GammaMax best;
  best.value = -1e300;
  best.grid_max = -1e300;
  ThetaPoint grid_arg{};
  std::array<int, 6> idx{};
  for (int flat = 0; flat < 117649; ++flat) {
    int r = flat;
    ThetaPoint p{};
    for (int i = 0; i < 6; ++i) {
      idx[i] = r % 7;
      r /= 7;
      p[i] = lo[i] + (hi[i] - lo[i]) * idx[i] / 6.0;
    }
    const double v = gamma(p);
    if (v > best.grid_max) {
      best.grid_max = v;
      grid_arg = p;
    }
  }
  std::mt19937_64 rng(seed);
  std::vector<ThetaPoint> init{grid_arg};
  for (int s = 0; s < starts; ++s) {
    ThetaPoint p{};
    for (int i = 0; i < 6; ++i) p[i] = std::uniform_real_distribution<double>(lo[i], hi[i])(rng);
    init.push_back(p);
  }
  for (const auto& p0 : init) {
    const ThetaPoint p = ascend(p0, lo, hi);
    const double v = gamma(p);
    if (v > best.value) {
      best.value = v;
      best.argmax = p;
    }
  }
  best.gradient_norm = norm(projected_gradient(best.argmax, lo, hi));
  return best;
}

GammaMax maximize_gamma(int starts, unsigned seed) {
  const double q = std::numbers::pi / 2;
  return maximize_gamma(starts, seed, ThetaPoint{0, 0, 0, 0, 0, 0}, ThetaPoint{q, q, q, q, q, q});
}

}  // namespace tslab
