#pragma once

// Three-dimensional prolate spheroidal wave functions on the unit ball.
//
// psi_{m,n,ell}(x) = |x|^m Y_{m,ell}(x/|x|) sum_j beta_j P_j^{(m)}(2|x|^2 - 1)
//
// The coefficient vector beta and the Sturm-Liouville eigenvalue chi come from
// a symmetric tridiagonal eigenproblem per degree m; the prolate eigenvalue
// alpha (eigenvalue of the restricted Fourier operator on B) follows in closed
// form from beta. All three depend on (m, n) only, never on ell.

#include <complex>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "pswf3d/quadrature.hpp"
#include "pswf3d/specfun.hpp"
#include "pswf3d/tridiag.hpp"

namespace pswf3d {

using cdouble = std::complex<double>;

/// Matrix of the Sturm-Liouville problem in the ball-polynomial basis:
/// diag_j = g(m+2j) + (1 + b_j) c^2/2 with g(k) = k(k+3), off_j = a_j c^2/2.
SymTridiagonal build_tridiagonal(int m, double c, int K);

struct SturmLiouvilleMode {
  double chi = 0.0;
  std::vector<double> beta;  // unit norm, first nonzero entry positive
};

/// All K+1 eigenpairs of build_tridiagonal(m, c, K), chi ascending.
std::vector<SturmLiouvilleMode> solve_modes(int m, double c, int K);

/// pi^{3/2} c^m / (2^{m-1/2} sqrt(Gamma(m+3/2) Gamma(m+5/2))), accumulated as a
/// product so that large m neither overflows nor underflows prematurely.
double prolate_prefactor(int m, double c);

/// Prolate eigenvalue from the expansion coefficients of mode (m, n).
cdouble prolate_eigenvalue(int m, int n, std::span<const double> beta, double c);

/// Radial factor shared by the 2m+1 modes of one (m, n) pair.
struct RadialMode {
  int m = 0;
  int n = 0;
  double chi = 0.0;
  cdouble alpha;
  std::vector<double> beta;

  /// r^m sum_j beta_j P_j^{(m)}(2 r^2 - 1) for 0 <= r <= 1.
  double value(double r) const;
  /// Number of leading beta entries that matter for pointwise evaluation.
  std::size_t active_terms() const noexcept { return active_terms_; }
  void trim();

private:
  std::size_t active_terms_ = 0;
};

/// One basis function (m, n, ell).
struct PswfMode {
  int m = 0;
  int n = 0;
  int ell = 0;
  std::shared_ptr<const RadialMode> radial;

  double chi() const { return radial->chi; }
  cdouble alpha() const { return radial->alpha; }
  std::span<const double> beta() const { return radial->beta; }
};

/// Retained set of modes for a bandwidth c. Immutable once built.
class PswfBasis {
public:
  PswfBasis(double c, int K, double sigma, cdouble alpha00, std::vector<PswfMode> modes);

  double c() const noexcept { return c_; }
  int K() const noexcept { return K_; }
  double sigma() const noexcept { return sigma_; }
  /// alpha_{0,0}(c), kept even when the (0,0,0) mode is filtered out.
  cdouble alpha00() const noexcept { return alpha00_; }

  std::size_t size() const noexcept { return modes_.size(); }
  bool empty() const noexcept { return modes_.empty(); }
  const std::vector<PswfMode>& modes() const noexcept { return modes_; }
  const PswfMode& mode(std::size_t i) const { return modes_[i]; }
  int max_degree() const noexcept { return max_degree_; }

  std::optional<std::size_t> find(int m, int n, int ell) const;

  /// Distinct radial factors in mode order.
  std::vector<std::shared_ptr<const RadialMode>> radial_modes() const;

  /// Modes satisfying pred, sharing radial data with this basis.
  std::shared_ptr<const PswfBasis> subset(const std::function<bool(const PswfMode&)>& pred,
                                          double sigma) const;

private:
  double c_;
  int K_;
  double sigma_;
  cdouble alpha00_;
  int max_degree_ = 0;
  std::vector<PswfMode> modes_;
};

enum class TruncationPolicy {
  /// K terms for every degree m.
  kFixed,
  /// K_m = ceil((m_tilde - m) / 2).
  kShrinking,
};

struct BasisOptions {
  TruncationPolicy truncation = TruncationPolicy::kFixed;
  int m_tilde = 300;
  /// Upper bound on m; defaults to 2 ceil(c) + 40.
  std::optional<int> max_m;
  /// Upper bound on n within each family; defaults to all K+1.
  std::optional<int> max_n;
};

/// alpha_{0,0}(c) with K expansion terms.
cdouble leading_prolate_eigenvalue(double c, int K);

/// Sweeps m = 0, 1, ... and keeps every (m, n, ell) with |alpha_{m,n}| > sigma
/// (all computed modes when sigma == 0). The sweep stops after the first m
/// whose whole family is at or below sigma. Throws EmptyBasisError if nothing
/// survives.
std::shared_ptr<const PswfBasis> build_basis(double c, int K, double sigma,
                                             const BasisOptions& options = {});

/// Evaluates every mode of a basis at once, sharing the Jacobi and harmonic
/// recurrences between modes of equal degree.
class BasisEvaluator {
public:
  explicit BasisEvaluator(std::shared_ptr<const PswfBasis> basis);

  const PswfBasis& basis() const noexcept { return *basis_; }
  std::size_t radial_count() const noexcept { return radials_.size(); }
  /// Index into radial_values() output used by mode i.
  std::size_t radial_index(std::size_t mode) const { return radial_of_mode_[mode]; }
  /// Packed harmonic index m^2 + m + ell of mode i.
  std::size_t harmonic_index(std::size_t mode) const { return harmonic_of_mode_[mode]; }
  std::size_t harmonic_count() const noexcept {
    const auto l = static_cast<std::size_t>(basis_->max_degree()) + 1;
    return l * l;
  }

  /// Radial factor of every distinct (m, n) at radius r in [0, 1].
  void radial_values(double r, std::span<double> out) const;
  /// psi of every mode at x, |x| <= 1.
  void evaluate(const Vec3& x, std::span<double> out) const;

private:
  struct DegreeGroup {
    int m;
    std::size_t first, last;  // radial index range
    std::size_t terms;
  };
  std::shared_ptr<const PswfBasis> basis_;
  std::vector<std::shared_ptr<const RadialMode>> radials_;
  std::vector<DegreeGroup> groups_;
  std::vector<std::size_t> radial_of_mode_;
  std::vector<std::size_t> harmonic_of_mode_;
};

/// psi(x) for |x| <= 1.
double eval_pswf(const PswfMode& mode, const Vec3& x);

/// Extension of a mode to all of R^3 through
/// psi(x) = (1/alpha) int_B exp(i c x.y) psi(y) dy, evaluated with a ball
/// quadrature. Caches the weighted node values for repeated evaluation.
class ContinuedPswf {
public:
  ContinuedPswf(const PswfMode& mode, double c, const BallQuadGrid& grid);
  cdouble operator()(const Vec3& x) const;

private:
  double c_;
  cdouble inv_alpha_;
  std::vector<Vec3> nodes_;
  std::vector<double> weighted_values_;
};

cdouble eval_pswf_r3(const PswfMode& mode, double c, const Vec3& x, const BallQuadGrid& grid);

}  // namespace pswf3d
