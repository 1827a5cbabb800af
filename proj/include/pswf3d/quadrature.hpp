#pragma once

#include <cstddef>
#include <vector>

#include "pswf3d/specfun.hpp"

namespace pswf3d {

/// One-dimensional quadrature rule on [-1, 1] (or a period, for trapezoid).
struct Rule1D {
  std::vector<double> nodes;
  std::vector<double> weights;

  std::size_t size() const noexcept { return nodes.size(); }
};

/// n-point Gauss-Legendre rule; exact for polynomials of degree <= 2n-1.
Rule1D gauss_legendre(int n);

/// Equispaced periodic rule phi_j = 2 pi j / M with weights 2 pi / M.
Rule1D periodic_trapezoid(int m);

/// Gaussian product quadrature on the unit ball.
///
/// Node (i, s, j) sits at radius sqrt((1 + t_i) / 2), polar angle theta_s with
/// cos(theta_s) a Gauss-Legendre node, and azimuth 2 pi j / M_phi. The
/// combined weight is pi (1 + t_i)^{1/2} w_{t_i} w_{theta_s} / (2 sqrt(2) M_phi),
/// which factors as radial_weight(i) * angular_weight(s).
///
/// Flat node index: n = (i * M_theta + s) * M_phi + j.
class BallQuadGrid {
public:
  BallQuadGrid(int T, int m_theta, int m_phi);

  int T() const noexcept { return T_; }
  int m_theta() const noexcept { return m_theta_; }
  int m_phi() const noexcept { return m_phi_; }
  std::size_t size() const noexcept { return nodes_.size(); }

  const std::vector<Vec3>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& weights() const noexcept { return weights_; }
  const Vec3& node(std::size_t n) const { return nodes_[n]; }
  double weight(std::size_t n) const { return weights_[n]; }

  std::size_t index(int i, int s, int j) const noexcept {
    return (static_cast<std::size_t>(i) * m_theta_ + s) * m_phi_ + j;
  }
  struct Triple {
    int i, s, j;
  };
  Triple unindex(std::size_t n) const noexcept;

  /// Radius of shell i.
  double radius(int i) const { return radii_[i]; }
  /// (1 + t_i)^{1/2} w_{t_i} / (4 sqrt 2): the r^2 dr part of the weight.
  double radial_weight(int i) const { return radial_weights_[i]; }
  /// w_{theta_s} 2 pi / M_phi: the solid-angle part of the weight.
  double angular_weight(int s) const { return angular_weights_[s]; }
  double theta(int s) const { return thetas_[s]; }
  double phi(int j) const { return phis_[j]; }

  bool operator==(const BallQuadGrid& o) const noexcept {
    return T_ == o.T_ && m_theta_ == o.m_theta_ && m_phi_ == o.m_phi_;
  }

private:
  int T_, m_theta_, m_phi_;
  std::vector<double> radii_, radial_weights_;
  std::vector<double> thetas_, angular_weights_;
  std::vector<double> phis_;
  std::vector<Vec3> nodes_;
  std::vector<double> weights_;
};

inline BallQuadGrid ball_grid(int T, int m_theta, int m_phi) { return {T, m_theta, m_phi}; }

/// Unit vectors on the sphere.
struct DirectionSet {
  std::vector<Vec3> directions;
  std::size_t count() const noexcept { return directions.size(); }
};

enum class LatticeVariant {
  /// z_i = 1 - (2i+1)/N, phi_i = 2 pi i / golden ratio.
  kOffsetGolden,
  /// z_i = 1 - 2i/(N-1) including both poles, same azimuths.
  kPolarGolden,
};

DirectionSet fibonacci_sphere(int n, LatticeVariant variant = LatticeVariant::kOffsetGolden);

}  // namespace pswf3d
