#pragma once

#include <functional>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "tslab/circle.hpp"

namespace tslab {

// Uniform samples on [-X, X] x [-T, T]; value(i, j) at (x_i, t_j) is stored at i*nt + j.
struct PlaneGrid {
  double X = 1, T = 1;
  std::size_t nx = 16, nt = 16;
  std::vector<cplx> values;

  static PlaneGrid make(double X, double T, std::size_t nx, std::size_t nt);
  // Same geometry, zero values.
  PlaneGrid blank() const { return make(X, T, nx, nt); }

  double dx() const { return 2.0 * X / static_cast<double>(nx - 1); }
  double dt() const { return 2.0 * T / static_cast<double>(nt - 1); }
  double x(std::size_t i) const { return -X + dx() * static_cast<double>(i); }
  double t(std::size_t j) const { return -T + dt() * static_cast<double>(j); }
  cplx& at(std::size_t i, std::size_t j) { return values[i * nt + j]; }
  cplx at(std::size_t i, std::size_t j) const { return values[i * nt + j]; }
  double weight(std::size_t i, std::size_t j) const;
};

// Grid with spacing at most `h` covering [-X, X] x [-T, T].
PlaneGrid grid_with_spacing(double X, double T, double h);

// Reference path: direct exp-per-term summation.
PlaneGrid extend_circle_reference(const CircleFunction& f, const PlaneGrid& geometry);
cplx extend_circle_at(const CircleFunction& f, double x, double t);

// Separable fast path; skips zero samples.
PlaneGrid extend_circle(const CircleFunction& f, const PlaneGrid& geometry);

// Cached separable tables for repeated forward/adjoint evaluation on one geometry.
class CircleExtension {
 public:
  CircleExtension(std::size_t n, const PlaneGrid& geometry);
  ~CircleExtension();
  CircleExtension(CircleExtension&&) noexcept;
  CircleExtension& operator=(CircleExtension&&) noexcept;

  PlaneGrid forward(const CircleFunction& f) const;
  // theta_k -> sum_ij w_ij G_ij exp(+i (x_i cos theta_k + t_j sin theta_k))
  CircleFunction adjoint(const PlaneGrid& g) const;

  std::size_t size() const { return n_; }
  const PlaneGrid& geometry() const { return geom_; }

 private:
  struct Tables;
  std::size_t n_;
  PlaneGrid geom_;
  std::unique_ptr<Tables> tab_;
};

// Samples on [a, b] including both endpoints.
struct LineFunction {
  double a = -1, b = 1;
  std::vector<cplx> values;

  static LineFunction from(double a, double b, std::size_t m, const std::function<cplx(double)>& fn);
  double h() const { return (b - a) / static_cast<double>(values.size() - 1); }
  double y(std::size_t m) const { return a + h() * static_cast<double>(m); }
};

PlaneGrid extend_parabola(const LineFunction& phi, const PlaneGrid& geometry, double endpoint_tol = 1e-10);
PlaneGrid extend_parabola_reference(const LineFunction& phi, const PlaneGrid& geometry, double endpoint_tol = 1e-10);

struct LpNorm {
  double p = 6;
  double value = 0;     // truncated grid norm
  double tail_pow = 0;  // estimate of the integral of |v|^p outside the rectangle
  double corrected() const;
  double bar() const { return corrected() - value; }
  double relative_tail() const;
};

// Trapezoid-weighted grid norm plus a far-field tail estimate: |v|^p rho^{p/2} is
// fitted per direction on the outer boundary strip and integrated to infinity.
LpNorm lp_norm(const PlaneGrid& grid, double p);

struct CapProfile {
  std::function<double(double)> g;
  double r = 0.1;
  Cap cap{pi / 2, 0.1};
  double y_max = 8.0;
  std::size_t ny = 4001;
};

double rescaling_identity_residual(const CapProfile& p, const PlaneGrid& geometry, std::size_t circle_n = 4096);
double smallcap_schrodinger_gap(const CapProfile& p, const PlaneGrid& geometry);

void save_binary(const std::string& path, const PlaneGrid& g);
PlaneGrid load_binary(const std::string& path);
void write_csv(std::ostream& os, const PlaneGrid& g);

}  // namespace tslab
