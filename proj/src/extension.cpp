#include "tslab/extension.hpp"

#include <Eigen/Dense>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <iomanip>
#include <limits>
#include <stdexcept>

namespace tslab {

using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;
using CMatR = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

namespace {

cplx expi(double a) { return {std::cos(a), std::sin(a)}; }

void store(PlaneGrid& g, const CMat& m) {
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.nt; ++j) g.at(i, j) = m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
}

void check_endpoints(const LineFunction& phi, double tol) {
  if (phi.values.size() < 2) throw std::invalid_argument("extend_parabola: need >= 2 samples");
  double vmax = 0;
  for (auto v : phi.values) vmax = std::max(vmax, std::abs(v));
  const double e = std::max(std::abs(phi.values.front()), std::abs(phi.values.back()));
  if (vmax > 0 && e > tol * vmax) throw std::domain_error("extend_parabola: insufficient y-domain (profile not decayed at endpoints)");
}

}  // namespace

PlaneGrid PlaneGrid::make(double X, double T, std::size_t nx, std::size_t nt) {
  if (nx < 16 || nt < 16) throw std::invalid_argument("PlaneGrid: nx, nt must be >= 16");
  if (!(X > 0 && T > 0)) throw std::invalid_argument("PlaneGrid: extents must be positive");
  PlaneGrid g;
  g.X = X;
  g.T = T;
  g.nx = nx;
  g.nt = nt;
  g.values.assign(nx * nt, cplx{});
  return g;
}

double PlaneGrid::weight(std::size_t i, std::size_t j) const {
  const double wx = (i == 0 || i + 1 == nx) ? 0.5 : 1.0;
  const double wt = (j == 0 || j + 1 == nt) ? 0.5 : 1.0;
  return wx * wt * dx() * dt();
}

PlaneGrid grid_with_spacing(double X, double T, double h) {
  const auto nx = static_cast<std::size_t>(std::ceil(2.0 * X / h)) + 1;
  const auto nt = static_cast<std::size_t>(std::ceil(2.0 * T / h)) + 1;
  return PlaneGrid::make(X, T, std::max<std::size_t>(nx, 16), std::max<std::size_t>(nt, 16));
}

cplx extend_circle_at(const CircleFunction& f, double x, double t) {
  const std::size_t n = f.size();
  std::vector<cplx> terms(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double th = f.theta(k);
    terms[k] = f[k] * expi(-(x * std::cos(th) + t * std::sin(th)));
  }
  return pairwise_sum(terms) * f.spacing();
}

PlaneGrid extend_circle_reference(const CircleFunction& f, const PlaneGrid& geometry) {
  PlaneGrid out = geometry.blank();
  for (std::size_t i = 0; i < out.nx; ++i)
    for (std::size_t j = 0; j < out.nt; ++j) out.at(i, j) = extend_circle_at(f, out.x(i), out.t(j));
  return out;
}

PlaneGrid extend_circle(const CircleFunction& f, const PlaneGrid& geometry) {
  PlaneGrid out = geometry.blank();
  std::vector<std::size_t> support;
  for (std::size_t k = 0; k < f.size(); ++k)
    if (f[k] != cplx{}) support.push_back(k);
  if (support.empty()) return out;
  const auto K = static_cast<Eigen::Index>(support.size());
  const auto nx = static_cast<Eigen::Index>(out.nx), nt = static_cast<Eigen::Index>(out.nt);
  CMat A(nx, K), B(nt, K);
  const double h = f.spacing();
  for (Eigen::Index k = 0; k < K; ++k) {
    const double th = f.theta(support[static_cast<std::size_t>(k)]);
    const double c = std::cos(th), s = std::sin(th);
    const cplx w = f[support[static_cast<std::size_t>(k)]] * h;
    for (Eigen::Index i = 0; i < nx; ++i) A(i, k) = w * expi(-out.x(static_cast<std::size_t>(i)) * c);
    for (Eigen::Index j = 0; j < nt; ++j) B(j, k) = expi(-out.t(static_cast<std::size_t>(j)) * s);
  }
  CMat u = A * B.transpose();
  store(out, u);
  return out;
}

struct CircleExtension::Tables {
  CMat ex;  // nx x N : exp(-i x cos)
  CMat et;  // nt x N : exp(-i t sin)
};

CircleExtension::CircleExtension(std::size_t n, const PlaneGrid& geometry)
    : n_(n), geom_(geometry.blank()), tab_(std::make_unique<Tables>()) {
  if (n < 8 || n % 2) throw std::invalid_argument("CircleExtension: N must be even and >= 8");
  const auto N = static_cast<Eigen::Index>(n);
  const auto nx = static_cast<Eigen::Index>(geom_.nx), nt = static_cast<Eigen::Index>(geom_.nt);
  tab_->ex.resize(nx, N);
  tab_->et.resize(nt, N);
  for (Eigen::Index k = 0; k < N; ++k) {
    const double th = two_pi * static_cast<double>(k) / static_cast<double>(n);
    const double c = std::cos(th), s = std::sin(th);
    for (Eigen::Index i = 0; i < nx; ++i) tab_->ex(i, k) = expi(-geom_.x(static_cast<std::size_t>(i)) * c);
    for (Eigen::Index j = 0; j < nt; ++j) tab_->et(j, k) = expi(-geom_.t(static_cast<std::size_t>(j)) * s);
  }
}

CircleExtension::~CircleExtension() = default;
CircleExtension::CircleExtension(CircleExtension&&) noexcept = default;
CircleExtension& CircleExtension::operator=(CircleExtension&&) noexcept = default;

PlaneGrid CircleExtension::forward(const CircleFunction& f) const {
  if (f.size() != n_) throw std::invalid_argument("CircleExtension: size mismatch");
  Eigen::Matrix<cplx, Eigen::Dynamic, 1> w(static_cast<Eigen::Index>(n_));
  const double h = f.spacing();
  for (std::size_t k = 0; k < n_; ++k) w(static_cast<Eigen::Index>(k)) = f[k] * h;
  CMat u = (tab_->ex * w.asDiagonal()) * tab_->et.transpose();
  PlaneGrid out = geom_.blank();
  store(out, u);
  return out;
}

CircleFunction CircleExtension::adjoint(const PlaneGrid& g) const {
  if (g.nx != geom_.nx || g.nt != geom_.nt) throw std::invalid_argument("CircleExtension: geometry mismatch");
  const auto nx = static_cast<Eigen::Index>(g.nx), nt = static_cast<Eigen::Index>(g.nt);
  CMat wg(nx, nt);
  for (Eigen::Index i = 0; i < nx; ++i)
    for (Eigen::Index j = 0; j < nt; ++j) {
      const auto ui = static_cast<std::size_t>(i), uj = static_cast<std::size_t>(j);
      wg(i, j) = g.at(ui, uj) * g.weight(ui, uj);
    }
  CMat m = wg * tab_->et.conjugate();  // nx x N
  std::vector<cplx> s(n_);
  for (std::size_t k = 0; k < n_; ++k) {
    const auto kk = static_cast<Eigen::Index>(k);
    s[k] = (tab_->ex.col(kk).conjugate().cwiseProduct(m.col(kk))).sum();
  }
  return CircleFunction(std::move(s));
}

LineFunction LineFunction::from(double a, double b, std::size_t m, const std::function<cplx(double)>& fn) {
  if (m < 2 || !(b > a)) throw std::invalid_argument("LineFunction: bad interval");
  LineFunction l;
  l.a = a;
  l.b = b;
  l.values.resize(m);
  for (std::size_t k = 0; k < m; ++k) l.values[k] = fn(l.y(k));
  return l;
}

PlaneGrid extend_parabola(const LineFunction& phi, const PlaneGrid& geometry, double endpoint_tol) {
  check_endpoints(phi, endpoint_tol);
  PlaneGrid out = geometry.blank();
  const auto M = static_cast<Eigen::Index>(phi.values.size());
  const auto nx = static_cast<Eigen::Index>(out.nx), nt = static_cast<Eigen::Index>(out.nt);
  const auto w = trapezoid_weights(phi.values.size(), phi.h());
  CMat A(nx, M), B(nt, M);
  for (Eigen::Index m = 0; m < M; ++m) {
    const auto um = static_cast<std::size_t>(m);
    const double y = phi.y(um);
    const cplx c = phi.values[um] * w[um];
    for (Eigen::Index i = 0; i < nx; ++i) A(i, m) = c * expi(out.x(static_cast<std::size_t>(i)) * y);
    for (Eigen::Index j = 0; j < nt; ++j) B(j, m) = expi(-0.5 * out.t(static_cast<std::size_t>(j)) * y * y);
  }
  CMat u = A * B.transpose();
  store(out, u);
  return out;
}

PlaneGrid extend_parabola_reference(const LineFunction& phi, const PlaneGrid& geometry, double endpoint_tol) {
  check_endpoints(phi, endpoint_tol);
  PlaneGrid out = geometry.blank();
  const auto w = trapezoid_weights(phi.values.size(), phi.h());
  std::vector<cplx> terms(phi.values.size());
  for (std::size_t i = 0; i < out.nx; ++i)
    for (std::size_t j = 0; j < out.nt; ++j) {
      const double x = out.x(i), t = out.t(j);
      for (std::size_t m = 0; m < terms.size(); ++m) {
        const double y = phi.y(m);
        terms[m] = w[m] * phi.values[m] * expi(x * y - 0.5 * t * y * y);
      }
      out.at(i, j) = pairwise_sum(terms);
    }
  return out;
}

double LpNorm::corrected() const {
  if (!std::isfinite(tail_pow)) return std::numeric_limits<double>::infinity();
  return std::pow(std::pow(value, p) + tail_pow, 1.0 / p);
}

double LpNorm::relative_tail() const {
  const double vp = std::pow(value, p);
  if (vp == 0.0) return 0.0;
  return tail_pow / vp;
}

LpNorm lp_norm(const PlaneGrid& g, double p) {
  if (p < 1.0) throw std::invalid_argument("lp_norm: p must be >= 1");
  LpNorm out;
  out.p = p;
  std::vector<double> terms(g.values.size());
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.nt; ++j) terms[i * g.nt + j] = g.weight(i, j) * std::pow(std::abs(g.at(i, j)), p);
  const double total = pairwise_sum(terms);
  out.value = std::pow(total, 1.0 / p);
  if (total == 0.0) return out;
  if (p <= 4.0) {
    out.tail_pow = std::numeric_limits<double>::infinity();
    return out;
  }

  constexpr int bins = 64;
  constexpr int sub = 32;
  constexpr double strip = 0.75;
  std::vector<double> num(bins, 0.0), den(bins, 0.0);
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.nt; ++j) {
      const double x = g.x(i), t = g.t(j);
      if (std::max(std::abs(x) / g.X, std::abs(t) / g.T) < strip) continue;
      const double rho = std::hypot(x, t);
      const double phi = std::atan2(t, x);
      int b = static_cast<int>(std::floor((phi + pi) / two_pi * bins));
      b = std::clamp(b, 0, bins - 1);
      const double w = g.weight(i, j);
      num[static_cast<std::size_t>(b)] += w * std::pow(std::abs(g.at(i, j)), p) * std::pow(rho, 0.5 * p);
      den[static_cast<std::size_t>(b)] += w;
    }
  double num_all = 0, den_all = 0;
  for (int b = 0; b < bins; ++b) {
    num_all += num[static_cast<std::size_t>(b)];
    den_all += den[static_cast<std::size_t>(b)];
  }
  const double fallback = den_all > 0 ? num_all / den_all : 0.0;
  const double dphi = two_pi / bins / sub;
  const double expo = 2.0 - 0.5 * p;
  double tail = 0;
  for (int b = 0; b < bins; ++b) {
    const auto ub = static_cast<std::size_t>(b);
    const double c = den[ub] > 0 ? num[ub] / den[ub] : fallback;
    for (int s = 0; s < sub; ++s) {
      const double phi = -pi + two_pi * b / bins + (s + 0.5) * dphi;
      const double ca = std::abs(std::cos(phi)), sa = std::abs(std::sin(phi));
      const double rx = ca > 0 ? g.X / ca : std::numeric_limits<double>::infinity();
      const double rt = sa > 0 ? g.T / sa : std::numeric_limits<double>::infinity();
      const double rb = std::min(rx, rt);
      tail += c * std::pow(rb, expo) / (0.5 * p - 2.0) * dphi;
    }
  }
  out.tail_pow = tail;
  return out;
}

namespace {

double profile_cut(const CapProfile& p) { return std::min(p.y_max, 0.5 / p.r); }

void check_profile(const CapProfile& p) {
  if (!(p.r > 0 && p.r <= 1)) throw std::invalid_argument("CapProfile: r must lie in (0, 1]");
  if (!p.g) throw std::invalid_argument("CapProfile: missing profile");
  if (p.ny < 3) throw std::invalid_argument("CapProfile: ny too small");
}

}  // namespace

double rescaling_identity_residual(const CapProfile& p, const PlaneGrid& geometry, std::size_t circle_n) {
  check_profile(p);
  const double r = p.r, ycut = profile_cut(p);
  double gmax = 0;
  for (std::size_t m = 0; m < p.ny; ++m) {
    const double y = -p.y_max + 2.0 * p.y_max * static_cast<double>(m) / static_cast<double>(p.ny - 1);
    gmax = std::max(gmax, std::abs(p.g(y)));
  }
  if (gmax == 0.0) return 0.0;
  const double edge = std::max(std::abs(p.g(0.5 / r)), std::abs(p.g(-0.5 / r)));
  if (0.5 / r <= p.y_max && edge > 1e-9 * gmax)
    throw std::domain_error("rescaling_identity_residual: profile not supported in |y| <= 1/(2r)");

  const double beta = p.cap.center - pi / 2;
  // Circle side: f = r^{-1/2} g(y) (1 - r^2 y^2)^{1/4} with cos(theta') = r y.
  auto f = CircleFunction::from(circle_n, [&](double th) -> cplx {
    const double tp = th - beta;
    if (std::sin(tp) <= 0) return 0.0;
    const double y = std::cos(tp) / r;
    if (std::abs(y) > ycut) return 0.0;
    return std::pow(r, -0.5) * p.g(y) * std::pow(1.0 - r * r * y * y, 0.25);
  });
  const PlaneGrid lhs = extend_circle(f, geometry);

  // Schroedinger side in the cap frame: r^{1/2} |e^{i r^2 t Delta/2}(h(r^2 t, .) g (1-r^2y^2)^{-1/4})(r x)|.
  const auto ny = p.ny;
  const double hy = 2.0 * ycut / static_cast<double>(ny - 1);
  const auto wy = trapezoid_weights(ny, hy);
  std::vector<double> ys(ny), amp(ny), dphase(ny);
  for (std::size_t m = 0; m < ny; ++m) {
    const double y = -ycut + hy * static_cast<double>(m);
    ys[m] = y;
    amp[m] = wy[m] * p.g(y) * std::pow(1.0 - r * r * y * y, -0.25);
    dphase[m] = (std::sqrt(1.0 - r * r * y * y) - 1.0) / (r * r) + 0.5 * y * y;
  }
  const double cb = std::cos(beta), sb = std::sin(beta);
  std::vector<cplx> terms(ny);
  double res = 0;
  for (std::size_t i = 0; i < geometry.nx; ++i)
    for (std::size_t j = 0; j < geometry.nt; ++j) {
      const double x = geometry.x(i), t = geometry.t(j);
      const double xp = x * cb + t * sb, tp = -x * sb + t * cb;
      const double s = r * r * tp, xs = r * xp;
      for (std::size_t m = 0; m < ny; ++m) {
        const double y = ys[m];
        terms[m] = amp[m] * expi(xs * y - 0.5 * s * y * y) * expi(s * dphase[m]);
      }
      const double rhs = std::sqrt(r) * std::abs(pairwise_sum(terms));
      res = std::max(res, std::abs(std::abs(lhs.at(i, j)) - rhs));
    }
  return res;
}

double smallcap_schrodinger_gap(const CapProfile& p, const PlaneGrid& geometry) {
  check_profile(p);
  const double r = p.r, ycut = std::min(p.y_max, 0.9 / r);
  const auto ny = p.ny;
  const double hy = 2.0 * ycut / static_cast<double>(ny - 1);
  const auto wy = trapezoid_weights(ny, hy);
  const auto M = static_cast<Eigen::Index>(ny);
  const auto nx = static_cast<Eigen::Index>(geometry.nx), nt = static_cast<Eigen::Index>(geometry.nt);
  CMat A(nx, M), Acap(nx, M), B(nt, M), Bcap(nt, M);
  for (Eigen::Index m = 0; m < M; ++m) {
    const double y = -ycut + hy * static_cast<double>(m);
    const double gv = wy[static_cast<std::size_t>(m)] * p.g(y);
    const double jac = std::pow(1.0 - r * r * y * y, -0.25);
    const double cphase = (std::sqrt(1.0 - r * r * y * y) - 1.0) / (r * r);
    for (Eigen::Index i = 0; i < nx; ++i) {
      const cplx e = expi(geometry.x(static_cast<std::size_t>(i)) * y);
      A(i, m) = gv * e;
      Acap(i, m) = gv * jac * e;
    }
    for (Eigen::Index j = 0; j < nt; ++j) {
      const double t = geometry.t(static_cast<std::size_t>(j));
      B(j, m) = expi(-0.5 * t * y * y);
      Bcap(j, m) = expi(t * cphase);
    }
  }
  CMat d = Acap * Bcap.transpose() - A * B.transpose();
  PlaneGrid diff = geometry.blank();
  store(diff, d);
  return lp_norm(diff, 6.0).value;
}

namespace {

template <class T>
void put(std::ostream& os, T v) {
  static_assert(std::endian::native == std::endian::little, "little-endian host required");
  os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!is) throw std::runtime_error("PlaneGrid binary: truncated input");
  return v;
}

}  // namespace

void save_binary(const std::string& path, const PlaneGrid& g) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + path);
  put<std::int64_t>(os, static_cast<std::int64_t>(g.nx));
  put<std::int64_t>(os, static_cast<std::int64_t>(g.nt));
  put<double>(os, g.X);
  put<double>(os, g.T);
  for (auto v : g.values) {
    put<double>(os, v.real());
    put<double>(os, v.imag());
  }
}

PlaneGrid load_binary(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("cannot read " + path);
  const auto nx = get<std::int64_t>(is), nt = get<std::int64_t>(is);
  const double X = get<double>(is), T = get<double>(is);
  if (nx < 16 || nt < 16) throw std::runtime_error("PlaneGrid binary: bad header");
  PlaneGrid g = PlaneGrid::make(X, T, static_cast<std::size_t>(nx), static_cast<std::size_t>(nt));
  for (auto& v : g.values) {
    const double re = get<double>(is), im = get<double>(is);
    v = {re, im};
  }
  return g;
}

void write_csv(std::ostream& os, const PlaneGrid& g) {
  os << "x,t,re,im,abs\n" << std::setprecision(12);
  for (std::size_t i = 0; i < g.nx; ++i)
    for (std::size_t j = 0; j < g.nt; ++j) {
      const cplx v = g.at(i, j);
      os << g.x(i) << ',' << g.t(j) << ',' << v.real() << ',' << v.imag() << ',' << std::abs(v) << '\n';
    }
}

}  // namespace tslab
