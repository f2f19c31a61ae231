#include "tslab/trilinear.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <stdexcept>

namespace tslab {

PlaneGrid default_trilinear_grid() { return grid_with_spacing(64.0, 64.0, 1.0); }

double TrilinearResult::relative_gap() const {
  return direct_value > 0 ? std::abs(fourier_value - direct_value) / direct_value : 0.0;
}

FourierValue trilinear_norm_fourier(const CircleFunction& f, const PlaneGrid& geometry, double kappa) {
  if (!(kappa > 0)) throw std::invalid_argument("trilinear_norm_fourier: kappa must be positive");
  if (std::hypot(geometry.X, geometry.T) > 0.8 * static_cast<double>(f.size()))
    throw std::invalid_argument("trilinear_norm_fourier: plane grid reaches the circle grid's aliasing radius");
  FourierValue out;
  out.norm = lp_norm(extend_circle(f, geometry), 6.0);
  if (!std::isfinite(out.norm.tail_pow)) throw std::runtime_error("trilinear_norm_fourier: tail estimate failed");
  const double c = out.norm.corrected(), v = out.norm.value;
  out.value = c * c * c / kappa;
  out.bound = (c * c * c - v * v * v) / kappa;
  return out;
}

FourierValue trilinear_norm_fourier(const CircleFunction& f, const PlaneGrid& geometry) {
  return trilinear_norm_fourier(f, geometry, plancherel_kappa());
}

FourierValue trilinear_norm_fourier(const CircleFunction& f) {
  return trilinear_norm_fourier(f, default_trilinear_grid(), plancherel_kappa());
}

namespace {

// Normalised 1-D Gaussian weights over bins within 5 sigma of s.
void gauss_weights(double s, double sigma, double L, double delta, std::size_t bins, std::size_t& lo,
                   std::vector<double>& w) {
  const double reach = 5.0 * sigma;
  const double first = (s - reach + L) / delta - 0.5;
  const double last = (s + reach + L) / delta - 0.5;
  const long a = std::max(0L, static_cast<long>(std::ceil(first)));
  const long b = std::min(static_cast<long>(bins) - 1, static_cast<long>(std::floor(last)));
  w.clear();
  lo = static_cast<std::size_t>(a);
  const double norm = 1.0 / (std::sqrt(two_pi) * sigma);
  for (long k = a; k <= b; ++k) {
    const double c = -L + (static_cast<double>(k) + 0.5) * delta;
    const double d = (c - s) / sigma;
    w.push_back(norm * std::exp(-0.5 * d * d));
  }
}

void check_direct_input(const CircleFunction& f) {
  for (std::size_t i = 0; i < f.size(); ++i)
    if (f[i].imag() != 0.0 || f[i].real() < 0.0)
      throw std::invalid_argument("trilinear_norm_direct: input must be nonnegative real");
}

// Returns the squared smoothed norms for each width.
std::vector<double> direct_squared(const CircleFunction& f, std::size_t bins, const std::vector<double>& widths) {
  check_direct_input(f);
  const std::size_t n = f.size();
  const double hmax = *std::max_element(widths.begin(), widths.end());
  const double L = 3.0 + 6.0 * hmax;
  const double delta = 2.0 * L / static_cast<double>(bins);
  std::vector<double> c(n), s(n), v(n);
  for (std::size_t i = 0; i < n; ++i) {
    c[i] = std::cos(f.theta(i));
    s[i] = std::sin(f.theta(i));
    v[i] = f[i].real();
  }
  const double d3 = std::pow(f.spacing(), 3);
  std::vector<std::vector<double>> rho(widths.size(), std::vector<double>(bins * bins, 0.0));
  std::vector<double> wx, wy;
  for (std::size_t i = 0; i < n; ++i) {
    if (v[i] == 0.0) continue;
    for (std::size_t j = i; j < n; ++j) {
      if (v[j] == 0.0) continue;
      for (std::size_t k = j; k < n; ++k) {
        if (v[k] == 0.0) continue;
        const double mult = (i == j && j == k) ? 1.0 : (i == j || j == k) ? 3.0 : 6.0;
        const double w = mult * v[i] * v[j] * v[k] * d3;
        const double sx = c[i] + c[j] + c[k], sy = s[i] + s[j] + s[k];
        for (std::size_t q = 0; q < widths.size(); ++q) {
          std::size_t lx = 0, ly = 0;
          gauss_weights(sx, widths[q], L, delta, bins, lx, wx);
          gauss_weights(sy, widths[q], L, delta, bins, ly, wy);
          auto& r = rho[q];
          for (std::size_t a = 0; a < wx.size(); ++a) {
            const double wa = w * wx[a];
            double* row = &r[(lx + a) * bins + ly];
            for (std::size_t b = 0; b < wy.size(); ++b) row[b] += wa * wy[b];
          }
        }
      }
    }
  }
  std::vector<double> out;
  for (auto& r : rho) {
    for (auto& x : r) x = x * x;
    out.push_back(pairwise_sum(r) * delta * delta);
  }
  return out;
}

}  // namespace

double direct_density_norm(const CircleFunction& f, std::size_t bins, double h) {
  return std::sqrt(direct_squared(f, bins, {h})[0]);
}

DirectEstimate trilinear_norm_direct(const CircleFunction& f, std::size_t bins, double h) {
  if (bins < 16 || !(h > 0)) throw std::invalid_argument("trilinear_norm_direct: bad resolution");
  const auto sq = direct_squared(f, bins, {h, 0.5 * h});
  DirectEstimate e;
  e.h = h;
  e.value_h = std::sqrt(sq[0]);
  e.value_h2 = std::sqrt(sq[1]);
  e.extrapolated = std::sqrt(std::max(0.0, 2.0 * sq[1] - sq[0]));
  return e;
}

std::vector<CircleFunction> default_kappa_samples(std::size_t n) {
  return {
      CircleFunction(n, 1.0),
      CircleFunction::from(n, [](double th) -> cplx { return 1.0 + std::cos(2.0 * th); }),
      CircleFunction::from(n, [](double th) -> cplx { return std::exp((std::sin(th) - 1.0) / 0.5); }),
  };
}

KappaReport measure_kappa(const std::vector<CircleFunction>& samples, const PlaneGrid& geometry, std::size_t bins,
                          double h) {
  if (samples.size() < 3) throw std::invalid_argument("measure_kappa: need at least 3 samples");
  KappaReport rep;
  for (const auto& f : samples) {
    const auto fn = trilinear_norm_fourier(f, geometry, 1.0);
    const auto d = trilinear_norm_direct(f, bins, h);
    if (!(d.extrapolated > 0)) throw std::invalid_argument("measure_kappa: zero sample");
    rep.ratios.push_back(fn.value / d.extrapolated);
  }
  auto sorted = rep.ratios;
  std::sort(sorted.begin(), sorted.end());
  const std::size_t m = sorted.size();
  rep.kappa = m % 2 ? sorted[m / 2] : 0.5 * (sorted[m / 2 - 1] + sorted[m / 2]);
  rep.spread = (sorted.back() - sorted.front()) / rep.kappa;
  rep.over_2pi = rep.kappa / two_pi;
  rep.over_2pi_cubed = rep.kappa / std::pow(two_pi, 3);
  if (rep.spread >= 0.05) throw std::runtime_error("measure_kappa: spread >= 5%, grid under-resolved");
  return rep;
}

double plancherel_kappa() {
  static std::once_flag once;
  static double kappa = 0;
  std::call_once(once, [] { kappa = measure_kappa(default_kappa_samples(), default_trilinear_grid()).kappa; });
  return kappa;
}

TrilinearResult trilinear_compare(const CircleFunction& f, std::size_t bins, double h) {
  TrilinearResult r;
  r.kappa = plancherel_kappa();
  const auto fv = trilinear_norm_fourier(f, default_trilinear_grid(), r.kappa);
  r.fourier_value = fv.value;
  r.truncation_bound = fv.bound;
  r.direct_value = trilinear_norm_direct(f, bins, h).extrapolated;
  return r;
}

cplx convolution_inner(const std::array<CircleFunction, 6>& f, const PlaneGrid& geometry, double kappa) {
  std::array<PlaneGrid, 6> u;
  for (std::size_t q = 0; q < 6; ++q) u[q] = extend_circle(f[q], geometry);
  std::vector<cplx> terms(geometry.values.size());
  for (std::size_t i = 0; i < geometry.nx; ++i)
    for (std::size_t j = 0; j < geometry.nt; ++j) {
      const std::size_t idx = i * geometry.nt + j;
      const cplx a = u[0].values[idx] * u[1].values[idx] * u[2].values[idx];
      const cplx b = u[3].values[idx] * u[4].values[idx] * u[5].values[idx];
      terms[idx] = geometry.weight(i, j) * a * std::conj(b);
    }
  return pairwise_sum(terms) / (kappa * kappa);
}

double sixfold_identity_residual(const std::array<CircleFunction, 6>& f, const PlaneGrid& geometry) {
  for (const auto& g : f)
    if (!g.is_nonnegative()) throw std::invalid_argument("sixfold_identity_residual: inputs must be nonnegative");
  const double kappa = two_pi;  // cancels in the relative residual
  const cplx lhs = convolution_inner(f, geometry, kappa);
  const cplx rhs = convolution_inner({f[0], f[1], reflect(f[3]), reflect(f[2]), f[4], f[5]}, geometry, kappa);
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale > 0 ? std::abs(lhs - rhs) / scale : 0.0;
}

double antipodal_ratio(const CircleFunction& f, const PlaneGrid& geometry) {
  const CircleFunction F = (f + reflect(f)) * (1.0 / std::sqrt(2.0));
  const double a = lp_norm(extend_circle(F, geometry), 6.0).corrected();
  const double b = lp_norm(extend_circle(f, geometry), 6.0).corrected();
  return std::pow(a / b, 6.0);
}

InteractionValue cap_interaction(const Cap& c1, const Cap& c2, std::size_t n, const PlaneGrid& geometry) {
  const auto x1 = cap_indicator(c1, n), x2 = cap_indicator(c2, n);
  const double m1 = cap_measure(c1, n), m2 = cap_measure(c2, n);
  if (m1 == 0 || m2 == 0) throw std::invalid_argument("cap_interaction: cap contains no grid point");
  const PlaneGrid u1 = extend_circle(x1, geometry), u2 = extend_circle(x2, geometry);
  // |u1^2 u2|^{1/3} has the same L6 decay profile as a single extension.
  PlaneGrid w = geometry.blank();
  for (std::size_t k = 0; k < w.values.size(); ++k)
    w.values[k] = std::cbrt(std::abs(u1.values[k] * u1.values[k] * u2.values[k]));
  const LpNorm l = lp_norm(w, 6.0);
  const double kappa = plancherel_kappa();
  const double scale = kappa * m1 * std::sqrt(m2);
  InteractionValue out;
  out.ratio = std::pow(l.corrected(), 3) / scale;
  out.bound = (std::pow(l.corrected(), 3) - std::pow(l.value, 3)) / scale;
  return out;
}

std::array<double, 2> cap_interaction_pairings(const Cap& c1, const Cap& c2, std::size_t n, const PlaneGrid& geometry) {
  const auto x1 = cap_indicator(c1, n), x2 = cap_indicator(c2, n);
  const double kappa = plancherel_kappa();
  const cplx a = convolution_inner({x1, x1, x2, x1, x1, x2}, geometry, kappa);
  const cplx b = convolution_inner({x1, x1, reflect(x1), reflect(x2), x1, x2}, geometry, kappa);
  return {a.real(), b.real()};
}

namespace {

InteractionSweep finish_sweep(std::vector<SweepPoint> pts) {
  InteractionSweep out;
  std::vector<double> xs, ys;
  for (const auto& p : pts) {
    xs.push_back(p.parameter);
    ys.push_back(p.value.ratio);
  }
  out.slope = loglog_slope(xs, ys);
  const auto& a = pts.front().value;
  const auto& b = pts.back().value;
  out.pessimistic_slope = std::log((b.ratio + b.bound) / std::max(a.ratio - a.bound, 1e-300)) /
                          std::log(pts.back().parameter / pts.front().parameter);
  out.monotone = true;
  for (std::size_t k = 1; k < pts.size(); ++k)
    if (pts[k].value.ratio + pts[k].value.bound >= pts[k - 1].value.ratio - pts[k - 1].value.bound) out.monotone = false;
  out.points = std::move(pts);
  return out;
}

}  // namespace

InteractionSweep separation_sweep(double r, const std::vector<double>& s, std::size_t n, const PlaneGrid& geometry) {
  if (s.size() < 2) throw std::invalid_argument("separation_sweep: need two separations");
  std::vector<SweepPoint> pts;
  for (double k : s) pts.push_back({k, cap_interaction(Cap(0.0, r), Cap(k * r, r), n, geometry)});
  return finish_sweep(std::move(pts));
}

InteractionSweep radius_sweep(double r, double separation, const std::vector<double>& q, std::size_t n,
                              const PlaneGrid& geometry) {
  if (q.size() < 2) throw std::invalid_argument("radius_sweep: need two radius ratios");
  std::vector<SweepPoint> pts;
  for (double k : q) pts.push_back({k, cap_interaction(Cap(0.0, r), Cap(separation, r / k), n, geometry)});
  return finish_sweep(std::move(pts));
}

}  // namespace tslab
