#pragma once

#include <array>
#include <vector>

#include "tslab/extension.hpp"

namespace tslab {

// Plane grid used by the Fourier route unless a caller supplies one.
PlaneGrid default_trilinear_grid();

struct FourierValue {
  double value = 0;  // tail-corrected ||u||_6^3 / kappa
  double bound = 0;  // tail contribution, in the same units
  LpNorm norm;
};

struct DirectEstimate {
  double h = 0;              // widest kernel width used
  double value_h = 0;        // smoothed norm at width h
  double value_h2 = 0;       // smoothed norm at width h/2
  double extrapolated = 0;   // Richardson on the squared norm, bias linear in h
};

struct KappaReport {
  double kappa = 0;
  std::vector<double> ratios;
  double spread = 0;  // (max - min) / median
  double over_2pi = 0;
  double over_2pi_cubed = 0;
};

struct TrilinearResult {
  double fourier_value = 0;
  double direct_value = 0;
  double kappa = 0;
  double truncation_bound = 0;
  double relative_gap() const;
};

FourierValue trilinear_norm_fourier(const CircleFunction& f, const PlaneGrid& geometry, double kappa);
FourierValue trilinear_norm_fourier(const CircleFunction& f, const PlaneGrid& geometry);
FourierValue trilinear_norm_fourier(const CircleFunction& f);

// Smoothed density of the pushforward of f(t1)f(t2)f(t3) under (t1,t2,t3) -> e(t1)+e(t2)+e(t3).
double direct_density_norm(const CircleFunction& f, std::size_t bins, double h);
DirectEstimate trilinear_norm_direct(const CircleFunction& f, std::size_t bins = 256, double h = 0.05);

std::vector<CircleFunction> default_kappa_samples(std::size_t n = 128);
KappaReport measure_kappa(const std::vector<CircleFunction>& samples, const PlaneGrid& geometry,
                          std::size_t bins = 256, double h = 0.05);
// Measured once on the default samples and grid, then cached.
double plancherel_kappa();

TrilinearResult trilinear_compare(const CircleFunction& f, std::size_t bins = 256, double h = 0.05);

// <f1 s * f2 s * f3 s, f4 s * f5 s * f6 s> on the Fourier side.
cplx convolution_inner(const std::array<CircleFunction, 6>& f, const PlaneGrid& geometry, double kappa);
double sixfold_identity_residual(const std::array<CircleFunction, 6>& f, const PlaneGrid& geometry);

// ||F s*F s*F s||^2 / ||f s*f s*f s||^2 with F = (f + f(. + pi)) / sqrt(2).
double antipodal_ratio(const CircleFunction& f, const PlaneGrid& geometry);

struct InteractionValue {
  double ratio = 0;
  double bound = 0;
};

InteractionValue cap_interaction(const Cap& c1, const Cap& c2, std::size_t n, const PlaneGrid& geometry);
// ||chi1 s*chi1 s*chi2 s||^2 and the reflected pairing <chi1*chi1*chi1~, chi2~*chi1*chi2>.
std::array<double, 2> cap_interaction_pairings(const Cap& c1, const Cap& c2, std::size_t n, const PlaneGrid& geometry);

struct SweepPoint {
  double parameter = 0;
  InteractionValue value;
};

struct InteractionSweep {
  std::vector<SweepPoint> points;
  double slope = 0;              // least-squares log-log slope
  double pessimistic_slope = 0;  // endpoints pushed against the decay by their bars
  bool monotone = false;         // strictly decreasing, bars included
};

// Equal radii r, second center at angle s*r from the first; parameter s.
InteractionSweep separation_sweep(double r, const std::vector<double>& s, std::size_t n, const PlaneGrid& geometry);
// First cap radius r at angle 0, second radius r/q at angle separation; parameter q.
InteractionSweep radius_sweep(double r, double separation, const std::vector<double>& q, std::size_t n,
                              const PlaneGrid& geometry);

}  // namespace tslab
