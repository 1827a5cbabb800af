#include "pswf3d/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pswf3d/errors.hpp"

namespace pswf3d {

namespace {

constexpr double kPi = std::numbers::pi;

// Returns (P_n(x), P_n'(x)).
std::pair<double, double> legendre_with_derivative(int n, double x) {
  double p0 = 1.0;
  double p1 = x;
  for (int k = 2; k <= n; ++k) {
    const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
    p0 = p1;
    p1 = p2;
  }
  const double pn = n == 0 ? 1.0 : p1;
  const double pm = n == 0 ? 0.0 : p0;
  return {pn, n * (x * pn - pm) / (x * x - 1.0)};
}

}  // namespace

Rule1D gauss_legendre(int n) {
  if (n < 1) throw ArgumentError("gauss_legendre needs at least one node");
  Rule1D rule;
  rule.nodes.resize(n);
  rule.weights.resize(n);
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double z = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double dp = 1.0;
    for (int iter = 0; iter < 100; ++iter) {
      auto [p, d] = legendre_with_derivative(n, z);
      dp = d;
      const double dz = p / d;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    dp = legendre_with_derivative(n, z).second;
    const double w = 2.0 / ((1.0 - z * z) * dp * dp);
    rule.nodes[i] = -z;
    rule.nodes[n - 1 - i] = z;
    rule.weights[i] = w;
    rule.weights[n - 1 - i] = w;
  }
  if (n % 2 == 1) rule.nodes[n / 2] = 0.0;
  return rule;
}

Rule1D periodic_trapezoid(int m) {
  if (m < 1) throw ArgumentError("periodic_trapezoid needs at least one node");
  Rule1D rule;
  rule.nodes.resize(m);
  rule.weights.assign(m, 2.0 * kPi / m);
  for (int j = 0; j < m; ++j) rule.nodes[j] = 2.0 * kPi * j / m;
  return rule;
}

BallQuadGrid::BallQuadGrid(int T, int m_theta, int m_phi) : T_(T), m_theta_(m_theta), m_phi_(m_phi) {
  if (T < 1 || m_theta < 1 || m_phi < 1) throw ArgumentError("ball grid counts must be >= 1");
  const Rule1D radial = gauss_legendre(T);
  const Rule1D polar = gauss_legendre(m_theta);
  const Rule1D azimuth = periodic_trapezoid(m_phi);

  radii_.resize(T);
  radial_weights_.resize(T);
  for (int i = 0; i < T; ++i) {
    const double t = radial.nodes[i];
    radii_[i] = std::sqrt((1.0 + t) / 2.0);
    radial_weights_[i] = std::sqrt(1.0 + t) * radial.weights[i] / (4.0 * std::numbers::sqrt2);
  }
  thetas_.resize(m_theta);
  angular_weights_.resize(m_theta);
  for (int s = 0; s < m_theta; ++s) {
    thetas_[s] = std::acos(polar.nodes[s]);
    angular_weights_[s] = polar.weights[s] * 2.0 * kPi / m_phi;
  }
  phis_ = azimuth.nodes;

  const std::size_t total = static_cast<std::size_t>(T) * m_theta * m_phi;
  nodes_.resize(total);
  weights_.resize(total);
  for (int i = 0; i < T; ++i) {
    for (int s = 0; s < m_theta; ++s) {
      const double ct = polar.nodes[s];
      const double st = std::sqrt(std::max(0.0, 1.0 - ct * ct));
      for (int j = 0; j < m_phi; ++j) {
        const std::size_t n = index(i, s, j);
        nodes_[n] = {radii_[i] * st * std::cos(phis_[j]), radii_[i] * st * std::sin(phis_[j]),
                     radii_[i] * ct};
        weights_[n] = radial_weights_[i] * angular_weights_[s];
      }
    }
  }
}

BallQuadGrid::Triple BallQuadGrid::unindex(std::size_t n) const noexcept {
  const int j = static_cast<int>(n % m_phi_);
  const std::size_t rest = n / m_phi_;
  return {static_cast<int>(rest / m_theta_), static_cast<int>(rest % m_theta_), j};
}

DirectionSet fibonacci_sphere(int n, LatticeVariant variant) {
  if (n < 1) throw ArgumentError("fibonacci_sphere needs N >= 1");
  const double inv_golden = 2.0 / (1.0 + std::sqrt(5.0));
  DirectionSet set;
  set.directions.reserve(n);
  for (int i = 0; i < n; ++i) {
    double z = 0.0;
    if (variant == LatticeVariant::kOffsetGolden || n == 1) {
      z = 1.0 - (2.0 * i + 1.0) / n;
    } else {
      z = 1.0 - 2.0 * i / (n - 1.0);
    }
    const double phi = std::fmod(2.0 * kPi * i * inv_golden, 2.0 * kPi);
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    Vec3 d{rho * std::cos(phi), rho * std::sin(phi), z};
    const double len = norm(d);
    set.directions.push_back({d[0] / len, d[1] / len, d[2] / len});
  }
  return set;
}

}  // namespace pswf3d
