#include "tslab/decomposition.hpp"

#include <cmath>
#include <json.hpp>
#include <stdexcept>

#include "tslab/trilinear.hpp"

namespace tslab {

namespace {

// Largest offset m with the grid angle 2*pi*m/N inside a cap of radius r centred at 0.
std::size_t half_window(double r, std::size_t n) {
  const Cap c(0.0, r);
  std::size_t k = 0;
  while (k + 1 < n / 2 && c.contains(two_pi * static_cast<double>(k + 1) / static_cast<double>(n))) ++k;
  return k;
}

bool is_even(const CircleFunction& f) {
  const std::size_t half = f.size() / 2;
  for (std::size_t i = 0; i < half; ++i)
    if (std::abs(f[i] - f[i + half]) > 1e-12 * std::max(std::abs(f[i]), std::abs(f[i + half]))) return false;
  return true;
}

double chord(double a, double b) { return 2.0 * std::abs(std::sin(0.5 * (a - b))); }

double distance_to_cap(double th, const Cap& c) {
  if (c.contains(th)) return 0.0;
  const double w = std::asin(c.radius);
  return std::min(chord(th, c.center - w), chord(th, c.center + w));
}

}  // namespace

CapValue best_cap(const CircleFunction& f, int depth) {
  const std::size_t n = f.size();
  std::vector<double> a(n);
  double total = 0;
  for (std::size_t i = 0; i < n; ++i) {
    a[i] = std::abs(f[i]);
    total += a[i];
  }
  if (total == 0.0) throw std::invalid_argument("best_cap: zero input");
  // prefix over three periods so windows never wrap
  std::vector<double> pre(3 * n + 1, 0.0);
  for (std::size_t i = 0; i < 3 * n; ++i) pre[i + 1] = pre[i] + a[i % n];
  const double h = f.spacing();
  CapValue best;
  best.value = -1;
  for (int j = 0; j <= depth; ++j) {
    const double r = std::ldexp(1.0, -j);
    const std::size_t k = half_window(r, n);
    const double measure = static_cast<double>(2 * k + 1) * h;
    for (std::size_t i = 0; i < n; ++i) {
      const double s = (pre[n + i + k + 1] - pre[n + i - k]) * h;
      const double v = s / std::sqrt(measure);
      if (v > best.value * (1.0 + 1e-12)) {
        best.value = v;
        best.cap = Cap(f.theta(i), r);
        best.center_index = i;
        best.level = j;
      }
    }
  }
  return best;
}

double c_delta_rule(double delta) { return std::pow(delta, -4.0); }

SplitResult split(const CircleFunction& f, double delta, const SplitContext& ctx, int depth) {
  if (!f.is_nonnegative()) throw std::invalid_argument("split: f must be nonnegative");
  if (!(delta > 0 && delta <= 1)) throw std::invalid_argument("split: delta must lie in (0, 1]");
  const double nf = l2_norm(f);
  if (nf == 0.0) throw std::invalid_argument("split: zero input");
  if (ctx.check) {
    const double q = lp_norm(extend_circle(f, ctx.geometry), 6.0).corrected();
    if (q < delta * ctx.R_hat * nf * (1.0 - 1e-9))
      throw std::domain_error("split: f is not nearly extremal at level delta");
  }
  SplitResult out;
  const CapValue bc = best_cap(f, depth);
  out.cap = bc.cap;
  out.even = is_even(f);
  const auto mask = cap_mask(bc.cap, f.size(), out.even);
  out.c_delta = c_delta_rule(delta);
  out.height_bound = out.c_delta * nf / std::sqrt(cap_measure(bc.cap, f.size()));
  std::vector<cplx> g(f.size()), h(f.size());
  const std::size_t half = f.size() / 2;
  for (std::size_t i = 0; i < f.size(); ++i) {
    // even inputs decide each antipodal pair together
    const double height = out.even ? std::max(f[i].real(), f[(i + half) % f.size()].real()) : f[i].real();
    if (mask[i] && height <= out.height_bound) g[i] = f[i];
    else h[i] = f[i];
  }
  out.g = CircleFunction(std::move(g));
  out.h = CircleFunction(std::move(h));
  out.eta = l2_norm(out.g) / nf;
  return out;
}

double DecompositionTrace::parseval_defect() const {
  double s = 0;
  for (const auto& st : steps) s += st.piece_norm * st.piece_norm;
  const double r = residual.size() ? l2_norm(residual) : 0.0;
  s += r * r;
  return std::abs(s - input_norm * input_norm);
}

bool DecompositionTrace::supports_disjoint() const {
  if (steps.empty()) return true;
  const std::size_t n = steps.front().piece.size();
  for (std::size_t i = 0; i < n; ++i) {
    int used = residual.size() && residual[i] != cplx{} ? 1 : 0;
    for (const auto& st : steps) used += st.piece[i] != cplx{} ? 1 : 0;
    if (used > 1) return false;
  }
  return true;
}

bool DecompositionTrace::bounds_hold() const {
  for (const auto& st : steps)
    if (!st.bound_holds) return false;
  return true;
}

DecompositionTrace decompose(const CircleFunction& f, const DecomposeOptions& opt) {
  if (!f.is_nonnegative()) throw std::invalid_argument("decompose: f must be nonnegative");
  if (!(opt.S_hat > 0)) throw std::invalid_argument("decompose: S_hat must be positive");
  DecompositionTrace tr;
  tr.S_hat = opt.S_hat;
  tr.kappa = opt.kappa > 0 ? opt.kappa : plancherel_kappa();
  tr.input_norm = l2_norm(f);
  tr.residual = f;
  if (tr.input_norm == 0.0) {
    tr.terminated = true;
    return tr;
  }
  const double scale = std::pow(opt.S_hat * tr.input_norm, 3);
  SplitContext ctx{opt.S_hat * std::cbrt(tr.kappa), opt.geometry, true};
  double eps = 0.5;
  CircleFunction G = f;
  for (int step = 0; step < opt.max_steps; ++step) {
    if (l2_norm(G) == 0.0) {
      tr.terminated = true;
      break;
    }
    const auto tv = trilinear_norm_fourier(G, opt.geometry, tr.kappa);
    if (tv.value <= 1e-12 * scale) {
      tr.terminated = true;
      break;
    }
    double es = eps;
    while (tv.value < es * es * es * scale) es *= 0.5;
    DecompositionStep st;
    st.eps_star = es;
    st.trilinear = tv.value;
    st.lower_bound = es * es * es * scale;
    st.upper_bound = 8.0 * st.lower_bound;
    st.bound_holds = st.lower_bound <= tv.value && tv.value <= st.upper_bound * (1.0 + 1e-9) + tv.bound;
    const SplitResult sp = split(G, es, ctx, opt.depth);
    st.piece = sp.g;
    st.cap = sp.cap;
    st.eta = sp.eta;
    st.piece_norm = l2_norm(sp.g);
    st.residual_norm = l2_norm(sp.h);
    tr.steps.push_back(st);
    G = sp.h;
    tr.residual = G;
    eps = es;
    if (st.piece_norm == 0.0) break;
  }
  if (!tr.terminated && l2_norm(G) == 0.0) tr.terminated = true;
  return tr;
}

std::string trace_json(const DecompositionTrace& t) {
  nlohmann::json j;
  j["input_norm"] = t.input_norm;
  j["terminated"] = t.terminated;
  j["S_hat"] = t.S_hat;
  j["S_hat_note"] = "numerical stand-in for the sharp trilinear constant";
  j["kappa"] = t.kappa;
  j["C_delta_rule"] = "delta^-4";
  j["residual_norm"] = t.residual.size() ? l2_norm(t.residual) : 0.0;
  j["parseval_defect"] = t.parseval_defect();
  j["supports_disjoint"] = t.supports_disjoint();
  auto& steps = j["steps"] = nlohmann::json::array();
  for (const auto& s : t.steps) {
    steps.push_back({{"cap", {{"center", s.cap.center}, {"radius", s.cap.radius}}},
                     {"eps_star", s.eps_star},
                     {"trilinear", s.trilinear},
                     {"lower_bound", s.lower_bound},
                     {"upper_bound", s.upper_bound},
                     {"bound_holds", s.bound_holds},
                     {"piece_norm", s.piece_norm},
                     {"residual_norm", s.residual_norm},
                     {"eta", s.eta}});
  }
  return j.dump(2);
}

NormalizationProfile normalization_profile(const CircleFunction& f, const Cap& cap, bool with_antipode) {
  NormalizationProfile p;
  const double r = cap.radius, h = f.spacing();
  const Cap anti = cap.antipode();
  std::vector<double> dist(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) {
    const double th = f.theta(i);
    dist[i] = distance_to_cap(th, cap);
    if (with_antipode) dist[i] = std::min(dist[i], distance_to_cap(th, anti));
  }
  for (double R = 1; R <= 128; R *= 2) {
    std::vector<double> ht(f.size(), 0.0), dt(f.size(), 0.0);
    for (std::size_t i = 0; i < f.size(); ++i) {
      const double a = std::abs(f[i]);
      if (a > R / std::sqrt(r)) ht[i] = a * a * h;
      if (dist[i] >= R * r) dt[i] = a * a * h;
    }
    p.R_values.push_back(R);
    p.height_tail.push_back(pairwise_sum(ht));
    p.distance_tail.push_back(pairwise_sum(dt));
  }
  return p;
}

}  // namespace tslab
