#pragma once

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "tslab/numerics.hpp"

namespace tslab {

// Samples of f at theta_i = 2*pi*i/N.
class CircleFunction {
 public:
  CircleFunction() = default;
  explicit CircleFunction(std::vector<cplx> samples);
  CircleFunction(std::size_t n, cplx value);

  static CircleFunction from(std::size_t n, const std::function<cplx(double)>& fn);

  std::size_t size() const { return samples_.size(); }
  double theta(std::size_t i) const { return two_pi * static_cast<double>(i) / static_cast<double>(size()); }
  double spacing() const { return two_pi / static_cast<double>(size()); }

  cplx operator[](std::size_t i) const { return samples_[i]; }
  cplx& operator[](std::size_t i) { return samples_[i]; }
  const std::vector<cplx>& samples() const { return samples_; }

  bool is_real(double tol = 0.0) const;
  bool is_nonnegative(double tol = 0.0) const;

  CircleFunction operator+(const CircleFunction& o) const;
  CircleFunction operator-(const CircleFunction& o) const;
  CircleFunction operator*(cplx c) const;

 private:
  std::vector<cplx> samples_;
};

struct Point2 {
  double x = 0, y = 0;
};

struct Cap {
  double center = 0;  // angle of z
  double radius = 1;

  Cap() = default;
  Cap(double c, double r);

  Point2 z() const;
  bool contains(double theta) const;
  Cap antipode() const;
};

struct CapClass {
  Cap representative;
};

double l2_norm(const CircleFunction& f);
CircleFunction abs(const CircleFunction& f);

// f(theta + pi)
CircleFunction reflect(const CircleFunction& f);
// f(theta - shift*2pi/N), i.e. f rotated forward by `shift` grid steps.
CircleFunction rotate(const CircleFunction& f, long shift);

CircleFunction symmetrize(const CircleFunction& f);
double symmetry_residual(const CircleFunction& f);

double cap_distance(const Cap& a, const Cap& b);
double cap_class_distance(const CapClass& a, const CapClass& b);

std::vector<bool> cap_mask(const Cap& c, std::size_t n, bool with_antipode = false);
double cap_measure(const Cap& c, std::size_t n, bool with_antipode = false);
CircleFunction cap_indicator(const Cap& c, std::size_t n, bool with_antipode = false);

struct LineSamples {
  double a = -1, b = 1;
  std::vector<cplx> values;
  double y(std::size_t m) const;
  double spacing() const { return (b - a) / static_cast<double>(values.size()); }
};

// Midpoint samples y_m = -1 + (2m+1)/M; f interpolated linearly between grid angles.
LineSamples pullback(const CircleFunction& f, const Cap& c, std::size_t m, double support_tol = 1e-10);

void write_csv(std::ostream& os, const CircleFunction& f);
CircleFunction read_circle_csv(std::istream& is);
void save_csv(const std::string& path, const CircleFunction& f);
CircleFunction load_circle_csv(const std::string& path);

}  // namespace tslab
