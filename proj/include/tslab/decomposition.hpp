#pragma once

#include <string>
#include <vector>

#include "tslab/extension.hpp"

namespace tslab {

struct CapValue {
  Cap cap;
  double value = 0;  // |C|^{-1/2} * integral over C of |f|
  std::size_t center_index = 0;
  int level = 0;     // radius 2^{-level}
};

// Exhaustive scan over dyadic radii 2^{-j}, j = 0..J, centred at grid angles.
CapValue best_cap(const CircleFunction& f, int depth);

struct SplitContext {
  double R_hat = 0;   // current numerical estimate of the sharp constant
  PlaneGrid geometry;
  bool check = true;  // verify the near-extremality precondition
};

struct SplitResult {
  CircleFunction g, h;
  Cap cap;
  bool even = false;
  double c_delta = 0;
  double height_bound = 0;  // C_delta ||f|| |C|^{-1/2}
  double eta = 0;           // ||g|| / ||f||
};

double c_delta_rule(double delta);

SplitResult split(const CircleFunction& f, double delta, const SplitContext& ctx, int depth = 8);

struct DecompositionStep {
  CircleFunction piece;
  Cap cap;
  double eps_star = 0;
  double trilinear = 0;      // residual trilinear norm before the split
  double lower_bound = 0;    // eps*^3 S^3 ||f||^3
  double upper_bound = 0;    // 8 eps*^3 S^3 ||f||^3
  double piece_norm = 0;
  double residual_norm = 0;  // ||G_{k+1}||
  double eta = 0;
  bool bound_holds = false;
};

struct DecompositionTrace {
  std::vector<DecompositionStep> steps;
  CircleFunction residual;
  bool terminated = false;
  double input_norm = 0;
  double S_hat = 0;
  double kappa = 0;
  double parseval_defect() const;
  bool supports_disjoint() const;
  bool bounds_hold() const;
};

struct DecomposeOptions {
  int max_steps = 16;
  int depth = 8;
  double S_hat = 0;
  double kappa = 0;  // 0: use the cached measured constant
  PlaneGrid geometry;
};

DecompositionTrace decompose(const CircleFunction& f, const DecomposeOptions& opt);

std::string trace_json(const DecompositionTrace& t);

struct NormalizationProfile {
  std::vector<double> R_values;
  std::vector<double> height_tail;
  std::vector<double> distance_tail;
};

NormalizationProfile normalization_profile(const CircleFunction& f, const Cap& cap, bool with_antipode = false);

}  // namespace tslab
