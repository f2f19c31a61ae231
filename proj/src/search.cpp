#include "tslab/search.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace tslab {

QValue functional_q(const CircleExtension& ext, const CircleFunction& f) {
  const double nf = l2_norm(f);
  if (nf == 0.0) throw std::invalid_argument("functional_q: zero function");
  const LpNorm l = lp_norm(ext.forward(f), 6.0);
  return {l.corrected() / nf, l.bar() / nf};
}

PlaneGrid search_geometry(const RunConfig& c) { return PlaneGrid::make(c.X, c.T, c.nx, c.nt); }

namespace {

CircleFunction normalized(const CircleFunction& f) { return f * (1.0 / l2_norm(f)); }

void push_q(SearchState& s, const CircleExtension& ext) {
  const QValue q = functional_q(ext, s.iterate);
  s.Q_history.push_back(q.value);
  s.Q_bars.push_back(q.bar);
}

}  // namespace

SearchState initial_state(const CircleFunction& f, const CircleExtension& ext) {
  if (l2_norm(f) == 0.0) throw std::invalid_argument("initial_state: zero iterate");
  SearchState s;
  s.iterate = normalized(abs(f));
  push_q(s, ext);
  s.symmetry_residual = symmetry_residual(s.iterate);
  s.min_sym_margin = std::numeric_limits<double>::infinity();
  return s;
}

void el_step(SearchState& s, const CircleExtension& ext) {
  PlaneGrid u = ext.forward(s.iterate);
  for (auto& v : u.values) {
    const double a = std::norm(v);
    v *= a * a;
  }
  CircleFunction next = abs(ext.adjoint(u));
  if (l2_norm(next) == 0.0) throw std::runtime_error("el_step: adjoint image vanished");
  s.iterate = normalized(next);
  const double q_old = s.Q_history.back(), b_old = s.Q_bars.back();
  push_q(s, ext);
  ++s.step;
  const double drop = q_old - s.Q_history.back() - (b_old + s.Q_bars.back()) - 1e-12 * q_old;
  s.max_drop = std::max(s.max_drop, drop);
  if (drop > 0) throw std::runtime_error("el_step: functional decreased beyond quadrature bars");
  s.symmetry_residual = symmetry_residual(s.iterate);
}

SearchState el_iterate(SearchState s, const RunConfig& c, const CircleExtension& ext) {
  const int budget = std::max(0, c.max_iter - c.final_free);
  for (int k = 0; k < budget; ++k) {
    const CircleFunction prev = s.iterate;
    el_step(s, ext);
    if ((k + 1) % c.sym_every == 0) {
      const double q = s.Q_history.back(), b = s.Q_bars.back();
      s.iterate = symmetrize(s.iterate);
      push_q(s, ext);
      s.min_sym_margin = std::min(s.min_sym_margin, s.Q_history.back() - q + b + s.Q_bars.back());
    }
    if (l2_norm(s.iterate - prev) < c.tol) break;
  }
  for (int k = 0; k < c.final_free; ++k) el_step(s, ext);
  s.symmetry_residual = symmetry_residual(s.iterate);
  return s;
}

std::vector<std::pair<std::string, CircleFunction>> search_starts(const RunConfig& c) {
  std::vector<std::pair<std::string, CircleFunction>> out;
  out.emplace_back("constant", CircleFunction(c.n, 1.0 / std::sqrt(two_pi)));
  std::mt19937_64 rng(c.seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0), angle(0.0, two_pi);
  for (int r = 0; r < c.random_starts; ++r) {
    std::vector<double> a(8), ph(8);
    for (int m = 0; m < 8; ++m) {
      a[static_cast<std::size_t>(m)] = unit(rng) / (m + 1);
      ph[static_cast<std::size_t>(m)] = angle(rng);
    }
    out.emplace_back("random-" + std::to_string(r), CircleFunction::from(c.n, [&](double th) -> cplx {
                       double s = 0;
                       for (int m = 0; m < 8; ++m)
                         s += a[static_cast<std::size_t>(m)] * std::cos((m + 1) * th + ph[static_cast<std::size_t>(m)]);
                       return std::exp(s);
                     }));
  }
  for (int b = 0; b < c.bump_starts; ++b) {
    const double center = angle(rng), width = 0.02;
    out.emplace_back("bump-" + std::to_string(b), CircleFunction::from(c.n, [=](double th) -> cplx {
                       return std::exp((std::cos(th - center) - 1.0) / width);
                     }));
  }
  return out;
}

REstimate estimate_R(const RunConfig& c) {
  const CircleExtension ext(c.n, search_geometry(c));
  REstimate est;
  est.value = -1;
  std::size_t idx = 0;
  for (const auto& [label, f0] : search_starts(c)) {
    SearchState s = initial_state(f0, ext);
    StartResult r;
    r.label = label;
    r.initial_Q = s.Q_history.front();
    if (label == "constant") est.Q_constant = r.initial_Q;
    s = el_iterate(std::move(s), c, ext);
    r.final_Q = s.Q_history.back();
    r.bar = s.Q_bars.back();
    r.symmetry_residual = s.symmetry_residual;
    r.Q_symmetrized = functional_q(ext, symmetrize(s.iterate)).value;
    r.steps = s.step;
    r.monotone = s.max_drop <= 0;
    if (r.final_Q > est.value) {
      est.value = r.final_Q;
      est.bar = r.bar;
      est.best = s.iterate;
      est.best_index = idx;
    }
    est.starts.push_back(r);
    ++idx;
  }
  // the constant start itself is a candidate, so the estimate never falls below it
  if (est.Q_constant > est.value) {
    const CircleFunction k(c.n, 1.0 / std::sqrt(two_pi));
    est.value = est.Q_constant;
    est.bar = functional_q(ext, k).bar;
    est.best = k;
    est.best_index = 0;
  }
  return est;
}

RPEstimate parabola_ratio(const LineFunction& g, const PlaneGrid& geometry) {
  const PlaneGrid field = extend_parabola(g, geometry);
  const LpNorm l = lp_norm(field, 6.0);
  const auto w = trapezoid_weights(g.values.size(), g.h());
  std::vector<double> t(g.values.size());
  for (std::size_t m = 0; m < t.size(); ++m) t[m] = w[m] * std::norm(g.values[m]);
  RPEstimate out;
  out.l2_sq = pairwise_sum(t);
  const double n = std::sqrt(out.l2_sq);
  out.value = l.corrected() / n;
  out.bar = l.bar() / n;
  return out;
}

RPEstimate estimate_RP(const RunConfig& c) {
  const PlaneGrid geom = grid_with_spacing(c.X, c.T, c.rp_spacing);
  const double dy = std::min(0.05, two_pi / (geom.X + 12.0 * std::sqrt(1.0 + geom.T * geom.T)));
  const auto m = static_cast<std::size_t>(std::ceil(20.0 / dy)) + 1;
  const LineFunction g = LineFunction::from(-10.0, 10.0, m, [](double y) -> cplx { return std::exp(-0.5 * y * y); });
  return parabola_ratio(g, geom);
}

ComparisonReport strict_comparison(const RunConfig& c) {
  ComparisonReport rep;
  rep.R = estimate_R(c);
  rep.RP = estimate_RP(c);
  rep.factor = std::pow(2.5, 1.0 / 6.0);
  rep.scaled_RP = rep.factor * rep.RP.value;
  rep.gap = rep.R.value - rep.scaled_RP;
  rep.bars = rep.R.bar + rep.factor * rep.RP.bar;
  rep.pass = rep.gap > rep.bars;
  rep.r_ge_rp = rep.R.value > rep.RP.value - (rep.R.bar + rep.RP.bar);
  return rep;
}

}  // namespace tslab
