#pragma once

#include <vector>

#include "tslab/extension.hpp"

namespace tslab {

// Integral of y^k e^{-y^2} by the module's trapezoid rule on |y| <= 10.
double gaussian_moment(int k);

double g_eps_norm_sq(double eps);
// One-sided difference quotients in eps, Richardson-extrapolated to 0.
double g_eps_norm_sq_derivative(double h = 0.02);

// Trapezoid in y of exp(-i x y) exp(-(1+it)(y^2/2 + eps y^4/8)) (1 + eps y^2/2).
PlaneGrid w_eps_field(double eps, const PlaneGrid& geometry);
cplx w0_closed_form(double c0, double t, double x);
double measure_c0();

struct W6Settings {
  double T = 60.0;
  double x_over_t = 3.0;
  double spacing = 0.4;
};

struct W6Norm {
  double value = 0;  // grid integral plus fitted tail
  double tail = 0;
};
// ||w_eps||_6^6 using the symmetries |w(t,x)| = |w(-t,x)| = |w(t,-x)| and a fitted t-tail.
W6Norm w_eps_norm6(double eps, const W6Settings& s = {});
// Same quadrature applied to the closed-form w_0 with the measured c0.
W6Norm w0_closed_norm6(double c0, const W6Settings& s);

struct ClosedFormCheck {
  double derivative_over_c06 = 0;  // integral of 6 Re[bracket] |w0|^6 / c0^6
  double ratio = 0;                // against 7 pi sqrt(pi) / (16 sqrt 3)
  double t_integral = 0;           // integral of (1+t^2)^{-2}
  double t2_integral = 0;          // integral of t^2 (1+t^2)^{-2}
  double x_integral = 0;           // integral of e^{-3x^2}
  double norm6_over_c06 = 0;       // integral of |w0|^6 / c0^6
};
ClosedFormCheck closed_form_derivative_check();

struct PerturbationReport {
  double c0_measured = 0;
  double w0_norm6 = 0;
  double w6_derivative = 0;
  double w6_derivative_ratio = 0;
  double g2_derivative_triple = 0;
  double psi_prime = 0;
  double closed_form_derivative = 0;
  double closed_form_ratio = 0;
  double w6_derivative_error = 0;
  double w0_norm6_error = 0;
  double g2_error = 0;
  double routes_gap = 0;
  bool routes_agree = false;
  std::vector<double> eps_steps;
  std::vector<double> difference_quotients;
};

PerturbationReport psi_prime_at_zero(const std::vector<double>& eps_steps, const W6Settings& s = {});

// f_eps(theta) = eps^{-1/4} exp((sin theta - 1)/eps) on |cos theta| <= 1/2, sin theta > 0.
CircleFunction f_eps_circle(double eps, std::size_t n);
double antipodal_lower_bound(double eps, std::size_t n, const PlaneGrid& geometry);

struct RescaleCheck {
  double u_norm6 = 0;
  double v_norm6 = 0;
  double relative_gap = 0;
};
RescaleCheck rescaled_norm_check(double eps);

}  // namespace tslab
