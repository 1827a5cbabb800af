#include "pswf3d/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pswf3d/errors.hpp"

namespace pswf3d {

namespace {

constexpr double kPi = std::numbers::pi;

void check_abscissa(double r) {
  if (!(std::abs(r) <= 1.0)) {
    throw DomainError("Legendre abscissa outside [-1,1]: " + std::to_string(r));
  }
}

}  // namespace

double norm(const Vec3& x) { return std::sqrt(dot(x, x)); }

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }

SphericalPoint SphericalPoint::from_cartesian(const Vec3& x) {
  SphericalPoint p;
  p.r = norm(x);
  if (p.r == 0.0) return p;
  p.theta = std::acos(std::clamp(x[2] / p.r, -1.0, 1.0));
  p.phi = std::atan2(x[1], x[0]);
  if (p.phi < 0.0) p.phi += 2.0 * kPi;
  return p;
}

Vec3 SphericalPoint::to_cartesian() const {
  const double st = std::sin(theta);
  return {r * st * std::cos(phi), r * st * std::sin(phi), r * std::cos(theta)};
}

HarmonicIndex::HarmonicIndex(int m, int ell) : m_(m), ell_(ell) {
  if (m < 0 || std::abs(ell) > m) {
    throw IndexError("invalid harmonic index (m=" + std::to_string(m) +
                     ", ell=" + std::to_string(ell) + ")");
  }
}

double legendre_poly(int m, double r) {
  if (m < 0) throw IndexError("negative Legendre degree");
  check_abscissa(r);
  if (m == 0) return 1.0;
  double prev = 1.0;
  double cur = r;
  for (int k = 1; k < m; ++k) {
    const double next = ((2.0 * k + 1.0) * r * cur - k * prev) / (k + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

double assoc_legendre_normalized(int m, int ell, double r) {
  if (ell < 0 || ell > m) {
    throw IndexError("associated Legendre order must satisfy 0 <= ell <= m");
  }
  check_abscissa(r);
  const double s = std::sqrt(std::max(0.0, (1.0 - r) * (1.0 + r)));
  double pll = 1.0 / std::sqrt(4.0 * kPi);
  for (int k = 1; k <= ell; ++k) {
    pll *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * s;
  }
  if (m == ell) return pll;
  double prev = pll;
  double cur = std::sqrt(2.0 * ell + 3.0) * r * pll;
  for (int k = ell + 2; k <= m; ++k) {
    const double kk = static_cast<double>(k);
    const double a = std::sqrt((4.0 * kk * kk - 1.0) / (kk * kk - ell * ell));
    const double b =
        std::sqrt(((kk - 1.0) * (kk - 1.0) - ell * ell) / (4.0 * (kk - 1.0) * (kk - 1.0) - 1.0));
    const double next = a * (r * cur - b * prev);
    prev = cur;
    cur = next;
  }
  return cur;
}

void assoc_legendre_normalized_table(int max_degree, double r, std::span<double> out) {
  check_abscissa(r);
  const auto need = static_cast<std::size_t>((max_degree + 1) * (max_degree + 1));
  if (max_degree < 0 || out.size() < need) throw ArgumentError("Legendre table too small");
  const double s = std::sqrt(std::max(0.0, (1.0 - r) * (1.0 + r)));
  double pll = 1.0 / std::sqrt(4.0 * kPi);
  for (int ell = 0; ell <= max_degree; ++ell) {
    if (ell > 0) pll *= std::sqrt((2.0 * ell + 1.0) / (2.0 * ell)) * s;
    out[ell * ell + 2 * ell] = pll;
    if (ell == max_degree) break;
    double prev = pll;
    double cur = std::sqrt(2.0 * ell + 3.0) * r * pll;
    const int m1 = ell + 1;
    out[m1 * m1 + m1 + ell] = cur;
    for (int k = ell + 2; k <= max_degree; ++k) {
      const double kk = static_cast<double>(k);
      const double a = std::sqrt((4.0 * kk * kk - 1.0) / (kk * kk - ell * ell));
      const double b = std::sqrt(((kk - 1.0) * (kk - 1.0) - ell * ell) /
                                 (4.0 * (kk - 1.0) * (kk - 1.0) - 1.0));
      const double next = a * (r * cur - b * prev);
      prev = cur;
      cur = next;
      out[k * k + k + ell] = cur;
    }
  }
}

double assoc_legendre(int m, int ell, double r) {
  const double normalized = assoc_legendre_normalized(m, ell, r);
  // Undo sqrt((2m+1)/(4 pi) (m-ell)!/(m+ell)!) in log space.
  const double log_factor = 0.5 * (std::log((2.0 * m + 1.0) / (4.0 * kPi)) +
                                   std::lgamma(m - ell + 1.0) - std::lgamma(m + ell + 1.0));
  return normalized * std::exp(-log_factor);
}

double spherical_harmonic(const HarmonicIndex& idx, double theta, double phi) {
  const int ell = idx.ell();
  const double p = assoc_legendre_normalized(idx.m(), std::abs(ell), std::cos(theta));
  if (ell == 0) return p;
  if (ell > 0) return std::numbers::sqrt2 * p * std::cos(ell * phi);
  return std::numbers::sqrt2 * p * std::sin(ell * phi);
}

std::vector<double> spherical_harmonics_upto(int max_degree, double theta, double phi) {
  std::vector<double> y(static_cast<std::size_t>((max_degree + 1) * (max_degree + 1)));
  assoc_legendre_normalized_table(max_degree, std::cos(theta), y);
  for (int ell = 1; ell <= max_degree; ++ell) {
    const double c = std::numbers::sqrt2 * std::cos(ell * phi);
    const double s = std::numbers::sqrt2 * std::sin(-ell * phi);
    for (int m = ell; m <= max_degree; ++m) {
      const double p = y[m * m + m + ell];
      y[m * m + m + ell] = p * c;
      y[m * m + m - ell] = p * s;
    }
  }
  return y;
}

double jacobi_a(int m, int n) {
  const double nn = n;
  const double mm = m;
  return 2.0 * (nn + 1.0) * (nn + mm + 1.5) /
         ((2.0 * nn + mm + 2.5) * std::sqrt((2.0 * nn + mm + 1.5) * (2.0 * nn + mm + 3.5)));
}

double jacobi_b(int m, int n) {
  const double q = m + 0.5;
  return q * q / ((2.0 * n + m + 0.5) * (2.0 * n + m + 2.5));
}

double jacobi_h(int m, int n) { return 1.0 / std::sqrt(2.0 * (2.0 * n + m + 1.5)); }

void jacobi_normalized_all(int m, double eta, std::span<double> out) {
  if (out.empty()) return;
  out[0] = 1.0 / jacobi_h(m, 0);
  if (out.size() == 1) return;
  out[1] = (eta - jacobi_b(m, 0)) * out[0] / jacobi_a(m, 0);
  double a_prev = jacobi_a(m, 0);
  for (std::size_t n = 1; n + 1 < out.size(); ++n) {
    const int ni = static_cast<int>(n);
    const double a_n = jacobi_a(m, ni);
    out[n + 1] = ((eta - jacobi_b(m, ni)) * out[n] - a_prev * out[n - 1]) / a_n;
    a_prev = a_n;
  }
}

double jacobi_normalized(int m, int n, double eta) {
  if (m < 0 || n < 0) throw IndexError("Jacobi indices must be nonnegative");
  std::vector<double> values(static_cast<std::size_t>(n) + 1);
  jacobi_normalized_all(m, eta, values);
  return values.back();
}

double ball_polynomial(int m, int j, int ell, const Vec3& x) {
  const HarmonicIndex idx(m, ell);
  const double r = norm(x);
  if (r > 1.0) throw DomainError("ball polynomial evaluated outside the unit ball");
  if (r == 0.0) {
    if (m > 0) return 0.0;
    return jacobi_normalized(0, j, -1.0) * spherical_harmonic(idx, 0.0, 0.0);
  }
  const auto sp = SphericalPoint::from_cartesian(x);
  return std::pow(r, m) * jacobi_normalized(m, j, 2.0 * r * r - 1.0) *
         spherical_harmonic(idx, sp.theta, sp.phi);
}

double gamma_half_integer(int m) {
  if (m < 0) throw ArgumentError("gamma_half_integer requires m >= 0");
  double g = std::sqrt(kPi) / 2.0;
  for (int k = 1; k <= m; ++k) {
    g *= k + 0.5;
    if (!std::isfinite(g)) {
      throw RangeError("Gamma(m + 3/2) overflows for m = " + std::to_string(m));
    }
  }
  return g;
}

}  // namespace pswf3d
