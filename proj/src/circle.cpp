#include "tslab/circle.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace tslab {

namespace {

void check_size(std::size_t n) {
  if (n < 8 || n % 2 != 0) throw std::invalid_argument("CircleFunction: N must be even and >= 8");
}

double wrap_angle(double a) {
  a = std::fmod(a, two_pi);
  if (a < 0) a += two_pi;
  return a;
}

}  // namespace

CircleFunction::CircleFunction(std::vector<cplx> samples) : samples_(std::move(samples)) { check_size(samples_.size()); }

CircleFunction::CircleFunction(std::size_t n, cplx value) : samples_(n, value) { check_size(n); }

CircleFunction CircleFunction::from(std::size_t n, const std::function<cplx(double)>& fn) {
  check_size(n);
  std::vector<cplx> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = fn(two_pi * static_cast<double>(i) / static_cast<double>(n));
  return CircleFunction(std::move(s));
}

bool CircleFunction::is_real(double tol) const {
  for (auto v : samples_)
    if (std::abs(v.imag()) > tol) return false;
  return true;
}

bool CircleFunction::is_nonnegative(double tol) const {
  for (auto v : samples_)
    if (std::abs(v.imag()) > tol || v.real() < -tol) return false;
  return true;
}

CircleFunction CircleFunction::operator+(const CircleFunction& o) const {
  if (o.size() != size()) throw std::invalid_argument("CircleFunction: size mismatch");
  auto s = samples_;
  for (std::size_t i = 0; i < s.size(); ++i) s[i] += o.samples_[i];
  return CircleFunction(std::move(s));
}

CircleFunction CircleFunction::operator-(const CircleFunction& o) const { return *this + o * cplx(-1.0); }

CircleFunction CircleFunction::operator*(cplx c) const {
  auto s = samples_;
  for (auto& v : s) v *= c;
  return CircleFunction(std::move(s));
}

Cap::Cap(double c, double r) : center(c), radius(r) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("Cap: radius must lie in (0, 1]");
}

Point2 Cap::z() const { return {std::cos(center), std::sin(center)}; }

bool Cap::contains(double theta) const {
  const Point2 zc = z();
  const double yx = std::cos(theta), yy = std::sin(theta);
  const double dot = yx * zc.x + yy * zc.y;
  const double proj = std::abs(yx * zc.y - yy * zc.x);
  // Points within rounding of the boundary are outside, whatever the center.
  constexpr double guard = 1e-12;
  return dot > guard && proj < radius - guard;
}

Cap Cap::antipode() const { return Cap(wrap_angle(center + pi), radius); }

double l2_norm(const CircleFunction& f) {
  std::vector<double> a(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) a[i] = std::norm(f[i]);
  return std::sqrt(pairwise_sum(a) * f.spacing());
}

CircleFunction abs(const CircleFunction& f) {
  std::vector<cplx> s(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) s[i] = std::abs(f[i]);
  return CircleFunction(std::move(s));
}

CircleFunction reflect(const CircleFunction& f) { return rotate(f, static_cast<long>(f.size() / 2)); }

CircleFunction rotate(const CircleFunction& f, long shift) {
  const long n = static_cast<long>(f.size());
  std::vector<cplx> s(f.size());
  for (long i = 0; i < n; ++i) s[static_cast<std::size_t>(((i + shift) % n + n) % n)] = f[static_cast<std::size_t>(i)];
  return CircleFunction(std::move(s));
}

CircleFunction symmetrize(const CircleFunction& f) {
  const std::size_t n = f.size(), half = n / 2;
  std::vector<double> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    const cplx v = f[i];
    if (v.imag() == 0.0 && v.real() < 0.0) throw std::invalid_argument("symmetrize: negative real sample");
    a[i] = std::abs(v);
  }
  std::vector<cplx> s(n);
  for (std::size_t i = 0; i < half; ++i) {
    const double v = std::sqrt(0.5 * (a[i] * a[i] + a[i + half] * a[i + half]));
    s[i] = v;
    s[i + half] = v;
  }
  return CircleFunction(std::move(s));
}

double symmetry_residual(const CircleFunction& f) {
  const std::size_t half = f.size() / 2;
  double r = 0;
  for (std::size_t i = 0; i < half; ++i) r = std::max(r, std::abs(std::abs(f[i]) - std::abs(f[i + half])));
  return r;
}

double cap_distance(const Cap& a, const Cap& b) {
  const Point2 za = a.z(), zb = b.z();
  const double d = std::hypot(za.x - zb.x, za.y - zb.y);
  return a.radius / b.radius + b.radius / a.radius + d / a.radius;
}

double cap_class_distance(const CapClass& a, const CapClass& b) {
  return std::min(cap_distance(a.representative, b.representative),
                  cap_distance(a.representative.antipode(), b.representative));
}

std::vector<bool> cap_mask(const Cap& c, std::size_t n, bool with_antipode) {
  std::vector<bool> m(n, false);
  const Cap anti = c.antipode();
  for (std::size_t i = 0; i < n; ++i) {
    const double th = two_pi * static_cast<double>(i) / static_cast<double>(n);
    m[i] = c.contains(th) || (with_antipode && anti.contains(th));
  }
  return m;
}

double cap_measure(const Cap& c, std::size_t n, bool with_antipode) {
  const auto m = cap_mask(c, n, with_antipode);
  std::size_t k = 0;
  for (bool b : m) k += b ? 1 : 0;
  return static_cast<double>(k) * two_pi / static_cast<double>(n);
}

CircleFunction cap_indicator(const Cap& c, std::size_t n, bool with_antipode) {
  const auto m = cap_mask(c, n, with_antipode);
  std::vector<cplx> s(n);
  for (std::size_t i = 0; i < n; ++i) s[i] = m[i] ? 1.0 : 0.0;
  return CircleFunction(std::move(s));
}

double LineSamples::y(std::size_t m) const {
  return a + (static_cast<double>(m) + 0.5) * (b - a) / static_cast<double>(values.size());
}

LineSamples pullback(const CircleFunction& f, const Cap& c, std::size_t m, double support_tol) {
  if (m == 0) throw std::invalid_argument("pullback: M must be positive");
  const std::size_t n = f.size();
  const Cap unit(c.center, 1.0);
  double fmax = 0, outside = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::abs(f[i]);
    fmax = std::max(fmax, v);
    if (!unit.contains(f.theta(i))) outside = std::max(outside, v);
  }
  if (outside > support_tol * std::max(fmax, 1e-300) && outside > 0.0)
    throw std::domain_error("pullback: f not supported in the unit cap concentric with the cap");

  LineSamples out;
  out.values.resize(m);
  const double r = c.radius, sr = std::sqrt(r), h = f.spacing();
  for (std::size_t k = 0; k < m; ++k) {
    const double y = out.y(k);
    // (r y, sqrt(1 - r^2 y^2)) in the north-pole frame, rotated so pi/2 goes to the center.
    const double th = wrap_angle(c.center - std::asin(r * y));
    const double pos = th / h;
    const std::size_t i0 = static_cast<std::size_t>(std::floor(pos)) % n;
    const std::size_t i1 = (i0 + 1) % n;
    const double w = pos - std::floor(pos);
    out.values[k] = sr * ((1.0 - w) * f[i0] + w * f[i1]);
  }
  return out;
}

void write_csv(std::ostream& os, const CircleFunction& f) {
  os << "theta,re,im\n" << std::setprecision(17);
  for (std::size_t i = 0; i < f.size(); ++i) os << f.theta(i) << ',' << f[i].real() << ',' << f[i].imag() << '\n';
}

CircleFunction read_circle_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw std::runtime_error("circle csv: empty input");
  std::vector<cplx> s;
  std::vector<double> th;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string a, b, c;
    if (!std::getline(ss, a, ',') || !std::getline(ss, b, ',') || !std::getline(ss, c, ','))
      throw std::runtime_error("circle csv: malformed row: " + line);
    th.push_back(std::stod(a));
    s.emplace_back(std::stod(b), std::stod(c));
  }
  const std::size_t n = s.size();
  for (std::size_t i = 0; i < n; ++i)
    if (std::abs(th[i] - two_pi * static_cast<double>(i) / static_cast<double>(n)) > 1e-9)
      throw std::runtime_error("circle csv: angles are not the uniform grid");
  return CircleFunction(std::move(s));
}

void save_csv(const std::string& path, const CircleFunction& f) {
  std::ofstream os(path);
  if (!os) throw std::runtime_error("cannot write " + path);
  write_csv(os, f);
}

CircleFunction load_circle_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw std::runtime_error("cannot read " + path);
  return read_circle_csv(is);
}

}  // namespace tslab
