#include "tslab/perturbation.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>

#include "tslab/trilinear.hpp"

namespace tslab {

using CMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic>;

namespace {

constexpr double kY = 10.0;
constexpr double kDy = 0.01;

template <class F>
double line_trapezoid(double a, double b, double h, F&& f) {
  const auto n = static_cast<std::size_t>(std::llround((b - a) / h)) + 1;
  const double step = (b - a) / static_cast<double>(n - 1);
  const auto w = trapezoid_weights(n, step);
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) terms[i] = w[i] * f(a + step * static_cast<double>(i));
  return pairwise_sum(terms);
}

// Polynomial extrapolation of (h_k, d_k) to h = 0.
double neville_at_zero(std::vector<double> h, std::vector<double> d) {
  const std::size_t n = h.size();
  for (std::size_t m = 1; m < n; ++m)
    for (std::size_t i = 0; i + m < n; ++i) d[i] = (h[i] * d[i + 1] - h[i + m] * d[i]) / (h[i] - h[i + m]);
  return d[0];
}

cplx expi(double a) { return {std::cos(a), std::sin(a)}; }

double phase_poly(double eps, double y) { return 0.5 * y * y + eps * y * y * y * y / 8.0; }

struct YRule {
  std::vector<double> y, w;
};

// Nodes on [0, Y] with halved weight at 0 so that twice the sum integrates an even function over R.
YRule half_line_rule(double Y, double dy) {
  const auto n = static_cast<std::size_t>(std::ceil(Y / dy)) + 1;
  const double h = Y / static_cast<double>(n - 1);
  YRule r;
  r.y.resize(n);
  r.w = trapezoid_weights(n, h);
  for (std::size_t i = 0; i < n; ++i) r.y[i] = h * static_cast<double>(i);
  return r;
}

// |w|^6 integrated over x for each row t_j >= 0, given the field rows.
W6Norm integrate_rows(const std::vector<double>& ts, const std::vector<double>& rows, double dt) {
  const auto wt = trapezoid_weights(ts.size(), dt);
  std::vector<double> terms(ts.size());
  for (std::size_t j = 0; j < ts.size(); ++j) terms[j] = 2.0 * wt[j] * rows[j];
  W6Norm out;
  // Fit I(t) ~ A t^-2 + B t^-3 + C t^-4 on the outer half and integrate beyond T.
  Eigen::MatrixXd M;
  Eigen::VectorXd b;
  std::vector<std::size_t> use;
  const double T = ts.back();
  for (std::size_t j = 0; j < ts.size(); ++j)
    if (ts[j] >= 0.5 * T) use.push_back(j);
  M.resize(static_cast<Eigen::Index>(use.size()), 3);
  b.resize(static_cast<Eigen::Index>(use.size()));
  for (std::size_t k = 0; k < use.size(); ++k) {
    const double t = ts[use[k]];
    const auto kk = static_cast<Eigen::Index>(k);
    M(kk, 0) = std::pow(t, -2.0);
    M(kk, 1) = std::pow(t, -3.0);
    M(kk, 2) = std::pow(t, -4.0);
    b(kk) = rows[use[k]];
  }
  const Eigen::Vector3d c = M.colPivHouseholderQr().solve(b);
  out.tail = 2.0 * (c(0) / T + c(1) / (2.0 * T * T) + c(2) / (3.0 * T * T * T));
  out.value = pairwise_sum(terms) + out.tail;
  return out;
}

}  // namespace

double gaussian_moment(int k) {
  return line_trapezoid(-kY, kY, kDy, [k](double y) { return std::pow(y, k) * std::exp(-y * y); });
}

double g_eps_norm_sq(double eps) {
  if (eps < 0 || eps > 0.5) throw std::invalid_argument("g_eps_norm_sq: eps must lie in [0, 0.5]");
  return line_trapezoid(-kY, kY, kDy, [eps](double y) {
    const double g = std::exp(-0.5 * y * y - eps * y * y * y * y / 8.0);
    return g * g * (1.0 + 0.5 * eps * y * y);
  });
}

double g_eps_norm_sq_derivative(double h) {
  const double n0 = g_eps_norm_sq(0.0);
  std::vector<double> hs, ds;
  for (int k = 0; k < 5; ++k) {
    const double e = h * std::ldexp(1.0, -k);
    hs.push_back(e);
    ds.push_back((g_eps_norm_sq(e) - n0) / e);
  }
  return neville_at_zero(hs, ds);
}

double measure_c0() {
  return line_trapezoid(-kY, kY, kDy, [](double y) { return std::exp(-0.5 * y * y); });
}

cplx w0_closed_form(double c0, double t, double x) {
  const cplx a(1.0, t);
  return c0 / std::sqrt(a) * std::exp(-x * x / (2.0 * a));
}

PlaneGrid w_eps_field(double eps, const PlaneGrid& geometry) {
  if (eps < 0 || eps > 0.5) throw std::invalid_argument("w_eps_field: eps must lie in [0, 0.5]");
  const double Y = 9.0;
  const double dy = std::min(0.05, two_pi / (geometry.X + 12.0 * std::sqrt(1.0 + geometry.T * geometry.T)));
  const YRule r = half_line_rule(Y, dy);
  const auto M = static_cast<Eigen::Index>(r.y.size());
  const auto nx = static_cast<Eigen::Index>(geometry.nx), nt = static_cast<Eigen::Index>(geometry.nt);
  CMat A(nx, M), B(nt, M);
  for (Eigen::Index m = 0; m < M; ++m) {
    const auto um = static_cast<std::size_t>(m);
    const double y = r.y[um], ph = phase_poly(eps, y);
    const double amp = 2.0 * r.w[um] * std::exp(-ph) * (1.0 + 0.5 * eps * y * y);
    for (Eigen::Index i = 0; i < nx; ++i) A(i, m) = amp * std::cos(geometry.x(static_cast<std::size_t>(i)) * y);
    for (Eigen::Index j = 0; j < nt; ++j) B(j, m) = expi(-geometry.t(static_cast<std::size_t>(j)) * ph);
  }
  CMat u = A * B.transpose();
  PlaneGrid out = geometry.blank();
  for (std::size_t i = 0; i < out.nx; ++i)
    for (std::size_t j = 0; j < out.nt; ++j) out.at(i, j) = u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));
  return out;
}

W6Norm w_eps_norm6(double eps, const W6Settings& s) {
  const double T = s.T, X = s.x_over_t * s.T;
  const auto nt = static_cast<std::size_t>(std::llround(T / s.spacing)) + 1;
  const auto nx = static_cast<std::size_t>(std::llround(X / s.spacing)) + 1;
  const double dt = T / static_cast<double>(nt - 1), dx = X / static_cast<double>(nx - 1);
  const double dy = std::min(0.05, two_pi / (X + 12.0 * std::sqrt(1.0 + T * T)));
  const YRule r = half_line_rule(9.0, dy);
  const auto M = static_cast<Eigen::Index>(r.y.size());
  CMat A(static_cast<Eigen::Index>(nx), M), B(static_cast<Eigen::Index>(nt), M);
  for (Eigen::Index m = 0; m < M; ++m) {
    const auto um = static_cast<std::size_t>(m);
    const double y = r.y[um], ph = phase_poly(eps, y);
    const double amp = 2.0 * r.w[um] * std::exp(-ph) * (1.0 + 0.5 * eps * y * y);
    for (std::size_t i = 0; i < nx; ++i) A(static_cast<Eigen::Index>(i), m) = amp * std::cos(dx * static_cast<double>(i) * y);
    for (std::size_t j = 0; j < nt; ++j) B(static_cast<Eigen::Index>(j), m) = expi(-dt * static_cast<double>(j) * ph);
  }
  CMat u = A * B.transpose();
  const auto wx = trapezoid_weights(nx, dx);
  std::vector<double> ts(nt), rows(nt), terms(nx);
  for (std::size_t j = 0; j < nt; ++j) {
    ts[j] = dt * static_cast<double>(j);
    for (std::size_t i = 0; i < nx; ++i)
      terms[i] = 2.0 * wx[i] * std::pow(std::abs(u(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j))), 6);
    rows[j] = pairwise_sum(terms);
  }
  return integrate_rows(ts, rows, dt);
}

W6Norm w0_closed_norm6(double c0, const W6Settings& s) {
  const double T = s.T, X = s.x_over_t * s.T;
  const auto nt = static_cast<std::size_t>(std::llround(T / s.spacing)) + 1;
  const auto nx = static_cast<std::size_t>(std::llround(X / s.spacing)) + 1;
  const double dt = T / static_cast<double>(nt - 1), dx = X / static_cast<double>(nx - 1);
  const auto wx = trapezoid_weights(nx, dx);
  std::vector<double> ts(nt), rows(nt), terms(nx);
  for (std::size_t j = 0; j < nt; ++j) {
    ts[j] = dt * static_cast<double>(j);
    for (std::size_t i = 0; i < nx; ++i)
      terms[i] = 2.0 * wx[i] * std::pow(std::abs(w0_closed_form(c0, ts[j], dx * static_cast<double>(i))), 6);
    rows[j] = pairwise_sum(terms);
  }
  return integrate_rows(ts, rows, dt);
}

ClosedFormCheck closed_form_derivative_check() {
  // x = s sqrt(1+t^2), t = tan(u): the Jacobian (1+t^2)^{3/2} cancels |w0|^6 / c0^6 up to e^{-3 s^2}.
  const std::size_t mu = 512;
  const double du = pi / static_cast<double>(mu);
  ClosedFormCheck out;
  std::vector<double> deriv_u(mu), norm_u(mu), t2(mu), t0(mu);
  for (std::size_t k = 0; k < mu; ++k) {
    const double u = -0.5 * pi + (static_cast<double>(k) + 0.5) * du;
    const double t = std::tan(u);
    const double jac = 1.0 + t * t;  // dt/du
    const cplx a(1.0, t);
    const double d = line_trapezoid(-7.0, 7.0, 0.02, [&](double s) {
      const double x2 = s * s * jac;
      const cplx phi_t = cplx(0, 0.5) * x2 / (a * a) - cplx(0, 0.5) / a;
      const cplx phi_tt = x2 / (a * a * a) - 0.5 / (a * a);
      const cplx bracket = 0.5 * a * (phi_t * phi_t + phi_tt) + cplx(0, 1) * phi_t;
      return 6.0 * bracket.real() * std::exp(-3.0 * s * s);
    });
    deriv_u[k] = d * du;
    norm_u[k] = line_trapezoid(-7.0, 7.0, 0.02, [](double s) { return std::exp(-3.0 * s * s); }) * du;
    t0[k] = jac * std::pow(jac, -2.0) * du;
    t2[k] = jac * t * t * std::pow(jac, -2.0) * du;
  }
  out.derivative_over_c06 = pairwise_sum(deriv_u);
  out.norm6_over_c06 = pairwise_sum(norm_u);
  out.t_integral = pairwise_sum(t0);
  out.t2_integral = pairwise_sum(t2);
  out.x_integral = line_trapezoid(-7.0, 7.0, 0.02, [](double x) { return std::exp(-3.0 * x * x); });
  out.ratio = out.derivative_over_c06 / (7.0 * pi * std::sqrt(pi) / (16.0 * std::sqrt(3.0)));
  return out;
}

PerturbationReport psi_prime_at_zero(const std::vector<double>& eps_steps, const W6Settings& s) {
  if (eps_steps.size() < 2) throw std::invalid_argument("psi_prime_at_zero: need >= 2 steps");
  for (double e : eps_steps)
    if (!(e > 0 && e <= 0.1)) throw std::invalid_argument("psi_prime_at_zero: steps must lie in (0, 0.1]");
  PerturbationReport rep;
  rep.eps_steps = eps_steps;
  rep.c0_measured = measure_c0();
  const W6Norm n0 = w_eps_norm6(0.0, s);
  rep.w0_norm6 = n0.value;
  std::vector<double> tail_q;
  for (double e : eps_steps) {
    const W6Norm ne = w_eps_norm6(e, s);
    rep.difference_quotients.push_back((ne.value - n0.value) / e);
    tail_q.push_back((ne.tail - n0.tail) / e);
  }
  rep.w6_derivative = neville_at_zero(eps_steps, rep.difference_quotients);
  const double tail_derivative = neville_at_zero(eps_steps, tail_q);
  std::vector<double> h2(eps_steps.begin(), eps_steps.end() - 1), d2(rep.difference_quotients.begin(),
                                                                     rep.difference_quotients.end() - 1);
  const double coarse = neville_at_zero(h2, d2);
  // extrapolation spread plus a fifth of the tail's own sensitivity
  rep.w6_derivative_error = std::abs(rep.w6_derivative - coarse) + 0.2 * std::abs(tail_derivative);
  rep.w0_norm6_error = 0.2 * n0.tail;
  rep.w6_derivative_ratio = rep.w6_derivative / rep.w0_norm6;

  const double g0 = g_eps_norm_sq(0.0);
  const double gd = g_eps_norm_sq_derivative();
  const double gd_coarse = g_eps_norm_sq_derivative(0.04);
  rep.g2_derivative_triple = 3.0 * gd / g0;
  rep.g2_error = 3.0 * std::abs(gd - gd_coarse) / g0 + 1e-14;
  rep.psi_prime = rep.w6_derivative_ratio - rep.g2_derivative_triple;

  const ClosedFormCheck cf = closed_form_derivative_check();
  rep.closed_form_ratio = cf.ratio;
  rep.closed_form_derivative = std::pow(rep.c0_measured, 6) * cf.derivative_over_c06;
  rep.routes_gap = std::abs(rep.w6_derivative - rep.closed_form_derivative);
  rep.routes_agree = rep.routes_gap <= rep.w6_derivative_error + 1e-9 * std::abs(rep.closed_form_derivative);
  return rep;
}

CircleFunction f_eps_circle(double eps, std::size_t n) {
  if (!(eps > 0)) throw std::invalid_argument("f_eps_circle: eps must be positive");
  return CircleFunction::from(n, [eps](double th) -> cplx {
    const double z1 = std::cos(th), z2 = std::sin(th);
    if (std::abs(z1) > 0.5 || z2 <= 0) return 0.0;
    return std::pow(eps, -0.25) * std::exp((z2 - 1.0) / eps);
  });
}

double antipodal_lower_bound(double eps, std::size_t n, const PlaneGrid& geometry) {
  if (!(eps > 0 && eps <= 0.1)) throw std::invalid_argument("antipodal_lower_bound: eps must lie in (0, 0.1]");
  return antipodal_ratio(f_eps_circle(eps, n), geometry);
}

RescaleCheck rescaled_norm_check(double eps) {
  const double Tv = 30.0, Xv = 90.0;
  const PlaneGrid gv = grid_with_spacing(Xv, Tv, 0.5);
  const double emax = 0.5 / std::sqrt(eps);
  const double dy = std::min(0.02, two_pi / (4.0 * (Xv + Tv * emax)));
  const auto M = static_cast<Eigen::Index>(std::ceil(2.0 * emax / dy)) + 1;
  const double h = 2.0 * emax / static_cast<double>(M - 1);
  const auto wy = trapezoid_weights(static_cast<std::size_t>(M), h);
  CMat A(static_cast<Eigen::Index>(gv.nx), M), B(static_cast<Eigen::Index>(gv.nt), M);
  for (Eigen::Index m = 0; m < M; ++m) {
    const double y = -emax + h * static_cast<double>(m);
    const double root = std::sqrt(1.0 - eps * y * y);
    const double amp = wy[static_cast<std::size_t>(m)] * std::exp((root - 1.0) / eps) / root;
    const double ps = (root - 1.0) / eps;
    for (Eigen::Index i = 0; i < A.rows(); ++i) A(i, m) = amp * expi(-gv.x(static_cast<std::size_t>(i)) * y);
    for (Eigen::Index j = 0; j < B.rows(); ++j) B(j, m) = expi(-gv.t(static_cast<std::size_t>(j)) * ps);
  }
  CMat v = A * B.transpose();
  PlaneGrid vg = gv.blank();
  for (std::size_t i = 0; i < vg.nx; ++i)
    for (std::size_t j = 0; j < vg.nt; ++j) vg.at(i, j) = v(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j));

  const double Xu = Xv / std::sqrt(eps), Tu = Tv / eps;
  const PlaneGrid gu = grid_with_spacing(Xu, Tu, 1.0);
  const PlaneGrid ug = extend_circle(f_eps_circle(eps, 4096), gu);
  RescaleCheck out;
  out.v_norm6 = lp_norm(vg, 6.0).corrected();
  out.u_norm6 = lp_norm(ug, 6.0).corrected();
  out.relative_gap = std::abs(out.u_norm6 - out.v_norm6) / out.u_norm6;
  return out;
}

}  // namespace tslab
