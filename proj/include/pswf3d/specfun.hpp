#pragma once

// Special functions used by the ball-polynomial expansion of 3D prolates:
// Legendre functions, real spherical harmonics, the normalized Jacobi family
// orthogonal under (1+eta)^{m+1/2}, and half-integer Gamma values.

#include <array>
#include <span>
#include <vector>

namespace pswf3d {

using Vec3 = std::array<double, 3>;

double norm(const Vec3& x);
double dot(const Vec3& a, const Vec3& b);

struct SphericalPoint {
  double r = 0.0;
  double theta = 0.0;  // polar angle in [0, pi]
  double phi = 0.0;    // azimuth in [0, 2 pi)

  static SphericalPoint from_cartesian(const Vec3& x);
  Vec3 to_cartesian() const;
};

/// Degree/order pair of a real spherical harmonic; |ell| <= m is enforced.
class HarmonicIndex {
public:
  HarmonicIndex(int m, int ell);
  int m() const noexcept { return m_; }
  int ell() const noexcept { return ell_; }
  /// Position in the packed layout m*m + m + ell used by harmonic tables.
  int packed() const noexcept { return m_ * m_ + m_ + ell_; }

private:
  int m_;
  int ell_;
};

/// P_m(r) by the three-term recurrence.
double legendre_poly(int m, double r);

/// P_m^ell(r) = (1-r^2)^{ell/2} d^ell/dr^ell P_m(r), without the
/// Condon-Shortley phase.
double assoc_legendre(int m, int ell, double r);

/// sqrt((2m+1)/(4 pi) (m-ell)!/(m+ell)!) P_m^ell(r), computed directly by the
/// normalized recurrence so it stays finite for large m.
double assoc_legendre_normalized(int m, int ell, double r);

/// Fills out[m*m + m + ell] with the normalized associated Legendre values for
/// all 0 <= ell <= m <= max_degree (negative-ell slots are left untouched).
void assoc_legendre_normalized_table(int max_degree, double r, std::span<double> out);

/// Real spherical harmonic Y_{m,ell}(theta, phi): cos(ell phi) branch for
/// ell > 0, sin(ell phi) branch for ell < 0. Orthonormal on the unit sphere.
double spherical_harmonic(const HarmonicIndex& idx, double theta, double phi);

/// All Y_{m,ell} with m <= max_degree, packed as m*m + m + ell.
std::vector<double> spherical_harmonics_upto(int max_degree, double theta, double phi);

/// Normalized Jacobi polynomial P_n^{(m)}(eta): orthogonal on [-1,1] under
/// (1+eta)^{m+1/2} with self inner product 2^{m+5/2}.
double jacobi_normalized(int m, int n, double eta);

/// Values P_0^{(m)}(eta) ... P_{out.size()-1}^{(m)}(eta).
void jacobi_normalized_all(int m, double eta, std::span<double> out);

/// Recurrence coefficients a_n, b_n, h_n of the normalized Jacobi family.
double jacobi_a(int m, int n);
double jacobi_b(int m, int n);
double jacobi_h(int m, int n);

/// Ball polynomial r^m P_j^{(m)}(2r^2-1) Y_{m,ell}(x/|x|); unit L2 norm on B.
double ball_polynomial(int m, int j, int ell, const Vec3& x);

/// Gamma(m + 3/2) for integer m >= 0.
double gamma_half_integer(int m);

}  // namespace pswf3d
