#pragma once

#include <string>
#include <vector>

#include "tslab/config.hpp"
#include "tslab/extension.hpp"

namespace tslab {

struct QValue {
  double value = 0;  // tail-corrected ||E f||_6 / ||f||_2
  double bar = 0;    // truncation contribution
};

QValue functional_q(const CircleExtension& ext, const CircleFunction& f);

struct SearchState {
  CircleFunction iterate;
  std::vector<double> Q_history;
  std::vector<double> Q_bars;
  double symmetry_residual = 0;
  int step = 0;
  double max_drop = 0;         // largest decrease of Q beyond the combined bars
  double min_sym_margin = 0;   // min over symmetrizations of Q(f*) - Q(f) + bars
};

PlaneGrid search_geometry(const RunConfig& c);
SearchState initial_state(const CircleFunction& f, const CircleExtension& ext);

// One power-type step f <- |E*(|Ef|^4 Ef)| / norm; throws on a drop beyond the bars.
void el_step(SearchState& s, const CircleExtension& ext);
// Symmetrizes every sym_every steps until converged, then runs final_free plain steps.
SearchState el_iterate(SearchState s, const RunConfig& c, const CircleExtension& ext);

struct StartResult {
  std::string label;
  double initial_Q = 0;
  double final_Q = 0;
  double bar = 0;
  double symmetry_residual = 0;
  double Q_symmetrized = 0;
  int steps = 0;
  bool monotone = true;
};

struct REstimate {
  double value = 0;
  double bar = 0;
  double Q_constant = 0;
  std::vector<StartResult> starts;
  CircleFunction best;
  std::size_t best_index = 0;
};

std::vector<std::pair<std::string, CircleFunction>> search_starts(const RunConfig& c);
REstimate estimate_R(const RunConfig& c);

struct RPEstimate {
  double value = 0;
  double bar = 0;
  double l2_sq = 0;
};

RPEstimate parabola_ratio(const LineFunction& g, const PlaneGrid& geometry);
RPEstimate estimate_RP(const RunConfig& c);

struct ComparisonReport {
  REstimate R;
  RPEstimate RP;
  double factor = 0;  // (5/2)^{1/6}
  double scaled_RP = 0;
  double gap = 0;
  double bars = 0;
  bool pass = false;
  bool r_ge_rp = false;
};

ComparisonReport strict_comparison(const RunConfig& c);

}  // namespace tslab
