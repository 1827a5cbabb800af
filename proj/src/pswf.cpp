#include "pswf3d/pswf.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "pswf3d/errors.hpp"

namespace pswf3d {

namespace {

constexpr double kPi = std::numbers::pi;

// Neumaier-compensated running sum.
class CompensatedSum {
public:
  void add(double v) {
    const double t = sum_ + v;
    if (std::abs(sum_) >= std::abs(v)) {
      comp_ += (sum_ - t) + v;
    } else {
      comp_ += (v - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

cdouble i_power(int m) {
  switch (m % 4) {
    case 0: return {1.0, 0.0};
    case 1: return {0.0, 1.0};
    case 2: return {-1.0, 0.0};
    default: return {0.0, -1.0};
  }
}

int default_max_m(double c) { return 2 * static_cast<int>(std::ceil(c)) + 40; }

int family_terms(int m, int K, const BasisOptions& options) {
  if (options.truncation == TruncationPolicy::kFixed) return K;
  return (options.m_tilde - m + 1) / 2;
}

}  // namespace

SymTridiagonal build_tridiagonal(int m, double c, int K) {
  if (m < 0 || K < 0 || c < 0.0) throw ArgumentError("build_tridiagonal needs m, K, c >= 0");
  SymTridiagonal a;
  a.diag.resize(K + 1);
  a.off.resize(K);
  const double half_c2 = 0.5 * c * c;
  for (int j = 0; j <= K; ++j) {
    const double k = m + 2.0 * j;
    a.diag[j] = k * (k + 3.0) + (1.0 + jacobi_b(m, j)) * half_c2;
    if (j < K) a.off[j] = jacobi_a(m, j) * half_c2;
  }
  return a;
}

std::vector<SturmLiouvilleMode> solve_modes(int m, double c, int K) {
  if (K < 1) throw ArgumentError("solve_modes needs K >= 1");
  const SymTridiagonal a = build_tridiagonal(m, c, K);
  std::vector<double> chis;
  try {
    chis = tridiagonal_eigenvalues(a);
  } catch (const NumericError& e) {
    throw NumericError("m=" + std::to_string(m) + ": " + e.what());
  }
  const double scale = a.norm_inf();
  std::vector<SturmLiouvilleMode> out(chis.size());
  for (std::size_t n = 0; n < chis.size(); ++n) {
    std::vector<double> beta = tridiagonal_eigenvector(a, chis[n]);
    const auto lead = std::find_if(beta.begin(), beta.end(), [](double v) { return v != 0.0; });
    if (lead != beta.end() && *lead < 0.0) {
      for (double& v : beta) v = -v;
    }
    const std::vector<double> ab = a.apply(beta);
    double res = 0.0;
    for (std::size_t j = 0; j < beta.size(); ++j) {
      const double d = ab[j] - chis[n] * beta[j];
      res += d * d;
    }
    if (!(std::sqrt(res) < 1e-10 * scale)) {
      throw NumericError("eigenvector residual too large at (m=" + std::to_string(m) +
                         ", n=" + std::to_string(n) + ")");
    }
    out[n].chi = chis[n];
    out[n].beta = std::move(beta);
  }
  return out;
}

double prolate_prefactor(int m, double c) {
  // m = 0: pi^{3/2} sqrt(2) / sqrt(Gamma(3/2) Gamma(5/2)) = 4 sqrt(pi / 3).
  double f = std::pow(kPi, 1.5) * std::numbers::sqrt2 /
             std::sqrt(gamma_half_integer(0) * gamma_half_integer(1));
  for (int k = 1; k <= m; ++k) {
    f *= c / (2.0 * std::sqrt((k + 0.5) * (k + 1.5)));
  }
  return f;
}

cdouble prolate_eigenvalue(int m, int n, std::span<const double> beta, double c) {
  if (beta.empty()) throw ArgumentError("prolate_eigenvalue needs coefficients");
  std::vector<double> p(beta.size());
  jacobi_normalized_all(m, -1.0, p);
  CompensatedSum phi;
  for (std::size_t j = 0; j < beta.size(); ++j) phi.add(beta[j] * p[j]);
  const double at_minus_one = phi.value();
  if (!(std::abs(at_minus_one) >= 1e-300)) {
    throw NumericError("degenerate prolate mode (m=" + std::to_string(m) + ", n=" +
                       std::to_string(n) + "): vanishing value at eta=-1");
  }
  return i_power(m) * (prolate_prefactor(m, c) * beta[0] / at_minus_one);
}

void RadialMode::trim() {
  double peak = 0.0;
  for (double v : beta) peak = std::max(peak, std::abs(v));
  active_terms_ = beta.size();
  while (active_terms_ > 1 && std::abs(beta[active_terms_ - 1]) <= 1e-22 * peak) --active_terms_;
}

double RadialMode::value(double r) const {
  const std::size_t terms = active_terms_ == 0 ? beta.size() : active_terms_;
  std::vector<double> p(terms);
  jacobi_normalized_all(m, 2.0 * r * r - 1.0, p);
  double s = 0.0;
  for (std::size_t j = 0; j < terms; ++j) s += beta[j] * p[j];
  return m == 0 ? s : std::pow(r, m) * s;
}

PswfBasis::PswfBasis(double c, int K, double sigma, cdouble alpha00, std::vector<PswfMode> modes)
    : c_(c), K_(K), sigma_(sigma), alpha00_(alpha00), modes_(std::move(modes)) {
  for (const auto& mode : modes_) max_degree_ = std::max(max_degree_, mode.m);
}

std::optional<std::size_t> PswfBasis::find(int m, int n, int ell) const {
  const auto it = std::lower_bound(modes_.begin(), modes_.end(), std::tuple{m, n, ell},
                                   [](const PswfMode& a, const std::tuple<int, int, int>& key) {
                                     return std::tuple{a.m, a.n, a.ell} < key;
                                   });
  if (it == modes_.end() || it->m != m || it->n != n || it->ell != ell) return std::nullopt;
  return static_cast<std::size_t>(it - modes_.begin());
}

std::vector<std::shared_ptr<const RadialMode>> PswfBasis::radial_modes() const {
  std::vector<std::shared_ptr<const RadialMode>> out;
  for (const auto& mode : modes_) {
    if (out.empty() || out.back() != mode.radial) out.push_back(mode.radial);
  }
  return out;
}

std::shared_ptr<const PswfBasis> PswfBasis::subset(
    const std::function<bool(const PswfMode&)>& pred, double sigma) const {
  std::vector<PswfMode> kept;
  for (const auto& mode : modes_) {
    if (pred(mode)) kept.push_back(mode);
  }
  return std::make_shared<const PswfBasis>(c_, K_, sigma, alpha00_, std::move(kept));
}

cdouble leading_prolate_eigenvalue(double c, int K) {
  const auto family = solve_modes(0, c, K);
  return prolate_eigenvalue(0, 0, family[0].beta, c);
}

std::shared_ptr<const PswfBasis> build_basis(double c, int K, double sigma,
                                             const BasisOptions& options) {
  if (!(c > 0.0)) throw ArgumentError("build_basis needs c > 0");
  if (!(sigma >= 0.0)) throw ArgumentError("build_basis needs sigma >= 0");
  if (K < 1) throw ArgumentError("build_basis needs K >= 1");

  const int m_cap = options.max_m.value_or(default_max_m(c));
  std::vector<PswfMode> modes;
  cdouble alpha00;
  for (int m = 0; m <= m_cap; ++m) {
    const int terms = family_terms(m, K, options);
    if (terms < 1) break;
    const auto family = solve_modes(m, c, terms);
    const int n_max =
        std::min<int>(static_cast<int>(family.size()) - 1, options.max_n.value_or(terms));
    bool any = false;
    for (int n = 0; n <= n_max; ++n) {
      const auto alpha = prolate_eigenvalue(m, n, family[n].beta, c);
      if (m == 0 && n == 0) alpha00 = alpha;
      if (sigma > 0.0 && !(std::abs(alpha) > sigma)) continue;
      any = true;
      auto radial = std::make_shared<RadialMode>();
      radial->m = m;
      radial->n = n;
      radial->chi = family[n].chi;
      radial->alpha = alpha;
      radial->beta = family[n].beta;
      radial->trim();
      std::shared_ptr<const RadialMode> shared = std::move(radial);
      for (int ell = -m; ell <= m; ++ell) modes.push_back({m, n, ell, shared});
    }
    if (sigma > 0.0 && !any) break;
  }
  if (modes.empty()) {
    throw EmptyBasisError("no prolate eigenvalue exceeds sigma = " + std::to_string(sigma) +
                          " (|alpha_00| = " + std::to_string(std::abs(alpha00)) + ")");
  }
  return std::make_shared<const PswfBasis>(c, K, sigma, alpha00, std::move(modes));
}

BasisEvaluator::BasisEvaluator(std::shared_ptr<const PswfBasis> basis)
    : basis_(std::move(basis)), radials_(basis_->radial_modes()) {
  for (std::size_t k = 0; k < radials_.size(); ++k) {
    const auto& rad = *radials_[k];
    const std::size_t terms = rad.active_terms() == 0 ? rad.beta.size() : rad.active_terms();
    if (groups_.empty() || groups_.back().m != rad.m) {
      groups_.push_back({rad.m, k, k + 1, terms});
    } else {
      groups_.back().last = k + 1;
      groups_.back().terms = std::max(groups_.back().terms, terms);
    }
  }
  radial_of_mode_.resize(basis_->size());
  harmonic_of_mode_.resize(basis_->size());
  std::size_t k = 0;
  for (std::size_t i = 0; i < basis_->size(); ++i) {
    const auto& mode = basis_->mode(i);
    while (radials_[k].get() != mode.radial.get()) ++k;
    radial_of_mode_[i] = k;
    harmonic_of_mode_[i] = HarmonicIndex(mode.m, mode.ell).packed();
  }
}

void BasisEvaluator::radial_values(double r, std::span<double> out) const {
  if (r < 0.0 || r > 1.0 + 1e-12) throw DomainError("radial_values needs 0 <= r <= 1");
  r = std::min(r, 1.0);
  const double eta = 2.0 * r * r - 1.0;
  std::vector<double> p;
  for (const auto& g : groups_) {
    const double rm = g.m == 0 ? 1.0 : std::pow(r, g.m);
    if (rm == 0.0) {
      std::fill(out.begin() + static_cast<std::ptrdiff_t>(g.first),
                out.begin() + static_cast<std::ptrdiff_t>(g.last), 0.0);
      continue;
    }
    p.resize(g.terms);
    jacobi_normalized_all(g.m, eta, p);
    for (std::size_t k = g.first; k < g.last; ++k) {
      const auto& rad = *radials_[k];
      const std::size_t terms = rad.active_terms() == 0 ? rad.beta.size() : rad.active_terms();
      double s = 0.0;
      for (std::size_t j = 0; j < terms; ++j) s += rad.beta[j] * p[j];
      out[k] = rm * s;
    }
  }
}

void BasisEvaluator::evaluate(const Vec3& x, std::span<double> out) const {
  std::vector<double> radial(radials_.size());
  radial_values(norm(x), radial);
  const auto sp = SphericalPoint::from_cartesian(x);
  const auto harmonics = spherical_harmonics_upto(basis_->max_degree(), sp.theta, sp.phi);
  for (std::size_t i = 0; i < basis_->size(); ++i) {
    out[i] = radial[radial_of_mode_[i]] * harmonics[harmonic_of_mode_[i]];
  }
}

double eval_pswf(const PswfMode& mode, const Vec3& x) {
  const double r = norm(x);
  if (r > 1.0 + 1e-12) throw DomainError("eval_pswf needs |x| <= 1; use the R^3 continuation");
  if (r == 0.0) {
    if (mode.m > 0) return 0.0;
    return mode.radial->value(0.0) * spherical_harmonic(HarmonicIndex(0, 0), 0.0, 0.0);
  }
  const auto sp = SphericalPoint::from_cartesian(x);
  return mode.radial->value(std::min(r, 1.0)) *
         spherical_harmonic(HarmonicIndex(mode.m, mode.ell), sp.theta, sp.phi);
}

ContinuedPswf::ContinuedPswf(const PswfMode& mode, double c, const BallQuadGrid& grid)
    : c_(c), inv_alpha_(1.0 / mode.alpha()), nodes_(grid.nodes()) {
  weighted_values_.resize(grid.size());
  for (std::size_t n = 0; n < grid.size(); ++n) {
    weighted_values_[n] = grid.weight(n) * eval_pswf(mode, grid.node(n));
  }
}

cdouble ContinuedPswf::operator()(const Vec3& x) const {
  double re = 0.0;
  double im = 0.0;
  for (std::size_t n = 0; n < nodes_.size(); ++n) {
    const double phase = c_ * dot(x, nodes_[n]);
    re += std::cos(phase) * weighted_values_[n];
    im += std::sin(phase) * weighted_values_[n];
  }
  return inv_alpha_ * cdouble(re, im);
}

cdouble eval_pswf_r3(const PswfMode& mode, double c, const Vec3& x, const BallQuadGrid& grid) {
  return ContinuedPswf(mode, c, grid)(x);
}

}  // namespace pswf3d
