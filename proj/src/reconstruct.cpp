#include "pswf3d/reconstruct.hpp"

#include <algorithm>
#include <cmath>

#include "pswf3d/errors.hpp"

namespace pswf3d {

namespace {

bool same_modes(const PswfBasis& a, const PswfBasis& b) {
  if (&a == &b) return true;
  if (a.c() != b.c() || a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const auto& x = a.mode(i);
    const auto& y = b.mode(i);
    if (x.m != y.m || x.n != y.n || x.ell != y.ell || x.chi() != y.chi() || x.alpha() != y.alpha()) return false;
  }
  return true;
}

void require_same_basis(const CoefficientField& a, const CoefficientField& b) {
  if (!a.basis || !b.basis || !same_modes(*a.basis, *b.basis) || a.coeffs.size() != b.coeffs.size()) {
    throw ArgumentError("coefficient fields live on different bases");
  }
}

void require_projection(const CoefficientField& f) {
  if (f.kind != FieldKind::kDataProjection) {
    throw ArgumentError("expected a data projection, got a reconstruction");
  }
  if (!f.basis || f.coeffs.size() != f.basis->size()) {
    throw ArgumentError("coefficient count does not match the basis");
  }
}

}  // namespace

CoefficientField CoefficientField::zeros(std::shared_ptr<const PswfBasis> basis, FieldKind kind) {
  CoefficientField f;
  f.coeffs.assign(basis->size(), cdouble{});
  f.basis = std::move(basis);
  f.kind = kind;
  return f;
}

double CoefficientField::l2_norm() const {
  double s = 0.0;
  for (const auto& v : coeffs) s += std::norm(v);
  return std::sqrt(s);
}

CoefficientField operator+(const CoefficientField& a, const CoefficientField& b) {
  require_same_basis(a, b);
  CoefficientField out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] += b.coeffs[i];
  return out;
}

CoefficientField operator-(const CoefficientField& a, const CoefficientField& b) {
  require_same_basis(a, b);
  CoefficientField out = a;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) out.coeffs[i] -= b.coeffs[i];
  return out;
}

CoefficientField operator*(cdouble s, const CoefficientField& a) {
  CoefficientField out = a;
  for (auto& v : out.coeffs) v *= s;
  return out;
}

ProjectionTable::ProjectionTable(std::shared_ptr<const PswfBasis> basis,
                                 std::shared_ptr<const BallQuadGrid> grid)
    : basis_(std::move(basis)), grid_(std::move(grid)), evaluator_(basis_) {
  const std::size_t nr = evaluator_.radial_count();
  harmonics_ = evaluator_.harmonic_count();
  angular_nodes_ = static_cast<std::size_t>(grid_->m_theta()) * grid_->m_phi();

  radial_.resize(static_cast<std::size_t>(grid_->T()) * nr);
  for (int i = 0; i < grid_->T(); ++i) {
    evaluator_.radial_values(grid_->radius(i), std::span<double>(radial_).subspan(i * nr, nr));
  }
  angular_.resize(harmonics_ * angular_nodes_);
  for (int s = 0; s < grid_->m_theta(); ++s) {
    for (int j = 0; j < grid_->m_phi(); ++j) {
      const auto y = spherical_harmonics_upto(basis_->max_degree(), grid_->theta(s), grid_->phi(j));
      const std::size_t a = static_cast<std::size_t>(s) * grid_->m_phi() + j;
      for (std::size_t h = 0; h < harmonics_; ++h) angular_[h * angular_nodes_ + a] = y[h];
    }
  }
}

std::vector<cdouble> ProjectionTable::project(const std::vector<cdouble>& values) const {
  if (values.size() != grid_->size()) throw ArgumentError("value count does not match the grid");
  const int T = grid_->T();
  const int mphi = grid_->m_phi();
  const std::size_t nr = evaluator_.radial_count();

  // Angular moments per shell: A[i][h] = sum_a v(i, a) w_ang(a) Y_h(a).
  std::vector<cdouble> moments(static_cast<std::size_t>(T) * harmonics_);
  std::vector<double> re(angular_nodes_), im(angular_nodes_);
  for (int i = 0; i < T; ++i) {
    for (std::size_t a = 0; a < angular_nodes_; ++a) {
      const double w = grid_->angular_weight(static_cast<int>(a / mphi));
      const auto& v = values[static_cast<std::size_t>(i) * angular_nodes_ + a];
      re[a] = w * v.real();
      im[a] = w * v.imag();
    }
    for (std::size_t h = 0; h < harmonics_; ++h) {
      const double* y = &angular_[h * angular_nodes_];
      double sr = 0.0, si = 0.0;
      for (std::size_t a = 0; a < angular_nodes_; ++a) {
        sr += y[a] * re[a];
        si += y[a] * im[a];
      }
      moments[static_cast<std::size_t>(i) * harmonics_ + h] = {sr, si};
    }
  }

  std::vector<cdouble> out(basis_->size());
  for (std::size_t m = 0; m < basis_->size(); ++m) {
    const std::size_t k = evaluator_.radial_index(m);
    const std::size_t h = evaluator_.harmonic_index(m);
    cdouble s{};
    for (int i = 0; i < T; ++i) {
      s += grid_->radial_weight(i) * radial_[static_cast<std::size_t>(i) * nr + k] *
           moments[static_cast<std::size_t>(i) * harmonics_ + h];
    }
    out[m] = s;
  }
  return out;
}

std::vector<cdouble> ProjectionTable::synthesize(const std::vector<cdouble>& coeffs) const {
  if (coeffs.size() != basis_->size()) throw ArgumentError("coefficient count does not match the basis");
  const int T = grid_->T();
  const std::size_t nr = evaluator_.radial_count();
  std::vector<cdouble> out(grid_->size());
  std::vector<double> br(harmonics_), bi(harmonics_);
  for (int i = 0; i < T; ++i) {
    // B[h] = sum over modes with harmonic h of coeff * radial(i).
    std::fill(br.begin(), br.end(), 0.0);
    std::fill(bi.begin(), bi.end(), 0.0);
    for (std::size_t m = 0; m < basis_->size(); ++m) {
      const double r = radial_[static_cast<std::size_t>(i) * nr + evaluator_.radial_index(m)];
      br[evaluator_.harmonic_index(m)] += r * coeffs[m].real();
      bi[evaluator_.harmonic_index(m)] += r * coeffs[m].imag();
    }
    cdouble* shell = &out[static_cast<std::size_t>(i) * angular_nodes_];
    for (std::size_t h = 0; h < harmonics_; ++h) {
      if (br[h] == 0.0 && bi[h] == 0.0) continue;
      const double* y = &angular_[h * angular_nodes_];
      for (std::size_t a = 0; a < angular_nodes_; ++a) shell[a] += y[a] * cdouble(br[h], bi[h]);
    }
  }
  return out;
}

CoefficientField project(const ProcessedData& data, std::shared_ptr<const PswfBasis> basis) {
  if (std::abs(data.c - basis->c()) > 1e-12 * std::max(1.0, basis->c())) {
    throw BandwidthMismatchError("data bandwidth " + std::to_string(data.c) +
                                 " does not match basis bandwidth " + std::to_string(basis->c()));
  }
  return project(data, ProjectionTable(std::move(basis), data.grid));
}

CoefficientField project(const ProcessedData& data, const ProjectionTable& table) {
  const auto& basis = table.basis();
  if (std::abs(data.c - basis->c()) > 1e-12 * std::max(1.0, basis->c())) {
    throw BandwidthMismatchError("data bandwidth " + std::to_string(data.c) +
                                 " does not match basis bandwidth " + std::to_string(basis->c()));
  }
  if (!(*data.grid == *table.grid())) throw ArgumentError("projection table built for another grid");
  CoefficientField f;
  f.basis = basis;
  f.kind = FieldKind::kDataProjection;
  f.coeffs = table.project(data.values);
  return f;
}

CoefficientField lowrank_reconstruct(const CoefficientField& projection) {
  require_projection(projection);
  CoefficientField out = projection;
  out.kind = FieldKind::kReconstruction;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
    const cdouble alpha = projection.basis->mode(i).alpha();
    if (alpha == cdouble{}) throw NumericError("retained mode with zero prolate eigenvalue");
    out.coeffs[i] /= alpha;
  }
  return out;
}

CoefficientField tikhonov_reconstruct(const CoefficientField& projection, double eta, double s) {
  require_projection(projection);
  if (!(eta >= 0.0)) throw ArgumentError("Tikhonov weight eta must be >= 0");
  if (!(s >= 0.0)) throw ArgumentError("smoothness order s must be >= 0");
  CoefficientField out = projection;
  out.kind = FieldKind::kReconstruction;
  for (std::size_t i = 0; i < out.coeffs.size(); ++i) {
    const auto& mode = projection.basis->mode(i);
    const cdouble alpha = mode.alpha();
    const double penalty = eta == 0.0 ? 0.0 : eta * std::exp(s * std::log(mode.chi()));
    const double denom = std::norm(alpha) + penalty;
    if (denom == 0.0) throw NumericError("Tikhonov denominator vanished");
    out.coeffs[i] = std::conj(alpha) * projection.coeffs[i] / denom;
  }
  return out;
}

CoefficientField localized_reconstruct(const CoefficientField& projection, double sigma_loc) {
  require_projection(projection);
  if (!(sigma_loc > 0.0)) throw ArgumentError("localized cutoff must be positive");
  const auto& basis = *projection.basis;
  auto sub = basis.subset([&](const PswfMode& m) { return std::abs(m.alpha()) > sigma_loc; },
                          sigma_loc);
  if (sub->empty()) throw EmptyBasisError("no mode has |alpha| above the localized cutoff");
  CoefficientField out;
  out.basis = sub;
  out.kind = FieldKind::kReconstruction;
  out.coeffs.reserve(sub->size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (std::abs(basis.mode(i).alpha()) > sigma_loc) {
      out.coeffs.push_back(projection.coeffs[i] / basis.mode(i).alpha());
    }
  }
  return out;
}

double hcs_norm(const CoefficientField& field, double s) {
  if (!(s >= 0.0)) throw ArgumentError("smoothness order s must be >= 0");
  double total = 0.0;
  for (std::size_t i = 0; i < field.coeffs.size(); ++i) {
    const double w = s == 0.0 ? 1.0 : std::exp(s * std::log(field.basis->mode(i).chi()));
    total += w * std::norm(field.coeffs[i]);
  }
  return std::sqrt(total);
}

CoefficientField truncate_field(const CoefficientField& field, double epsilon) {
  if (!(epsilon > 0.0)) throw ArgumentError("truncation epsilon must be positive");
  const double cap = 1.0 / epsilon;
  const auto& basis = *field.basis;
  CoefficientField out;
  out.kind = field.kind;
  out.basis = basis.subset([&](const PswfMode& m) { return m.chi() <= cap; }, basis.sigma());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    if (basis.mode(i).chi() <= cap) out.coeffs.push_back(field.coeffs[i]);
  }
  return out;
}

double default_cutoff(double abs_alpha00, std::optional<double> delta, bool outside_support) {
  if (outside_support) return 0.9 * abs_alpha00;
  if (delta && *delta > 0.0) return *delta * abs_alpha00;
  return 0.1 * abs_alpha00;
}

Vec3 VolumeGrid::center(int i, int j, int k) const {
  const std::array<int, 3> idx{i, j, k};
  Vec3 x{};
  for (int d = 0; d < 3; ++d) {
    const double h = (extent.hi[d] - extent.lo[d]) / resolution[d];
    x[d] = extent.lo[d] + (idx[d] + 0.5) * h;
  }
  return x;
}

VolumeGrid evaluate_volume(const CoefficientField& field, const VolumeSpec& spec) {
  for (int d = 0; d < 3; ++d) {
    if (spec.resolution[d] < 1) throw ArgumentError("volume resolution must be >= 1");
    if (!(spec.extent.hi[d] > spec.extent.lo[d])) throw ArgumentError("volume extent is empty");
  }
  VolumeGrid vol;
  vol.resolution = spec.resolution;
  vol.extent = spec.extent;
  const std::size_t total = static_cast<std::size_t>(spec.resolution[0]) * spec.resolution[1] *
                            spec.resolution[2];
  vol.samples.assign(total, cdouble{});
  vol.outside.assign(total, 0);
  if (field.coeffs.empty()) {
    for (int k = 0; k < spec.resolution[2]; ++k)
      for (int j = 0; j < spec.resolution[1]; ++j)
        for (int i = 0; i < spec.resolution[0]; ++i)
          vol.outside[vol.index(i, j, k)] = norm(vol.center(i, j, k)) > 1.0 ? 1 : 0;
    return vol;
  }

  const BasisEvaluator evaluator(field.basis);
  std::optional<ContinuedField> continued;
  if (spec.continuation) continued.emplace(field, spec.continuation);
  std::vector<double> psi(field.basis->size());
  for (int k = 0; k < spec.resolution[2]; ++k) {
    for (int j = 0; j < spec.resolution[1]; ++j) {
      for (int i = 0; i < spec.resolution[0]; ++i) {
        const std::size_t n = vol.index(i, j, k);
        const Vec3 x = vol.center(i, j, k);
        if (norm(x) > 1.0) {
          vol.outside[n] = 1;
          if (continued) vol.samples[n] = (*continued)(x);
          continue;
        }
        evaluator.evaluate(x, psi);
        cdouble s{};
        for (std::size_t m = 0; m < psi.size(); ++m) s += field.coeffs[m] * psi[m];
        vol.samples[n] = s;
      }
    }
  }
  return vol;
}

cdouble evaluate_point(const CoefficientField& field, const Vec3& x) {
  if (norm(x) > 1.0 + 1e-12) throw DomainError("evaluate_point needs |x| <= 1");
  if (field.coeffs.empty()) return {};
  const BasisEvaluator evaluator(field.basis);
  std::vector<double> psi(field.basis->size());
  evaluator.evaluate(x, psi);
  cdouble s{};
  for (std::size_t m = 0; m < psi.size(); ++m) s += field.coeffs[m] * psi[m];
  return s;
}

ContinuedField::ContinuedField(const CoefficientField& field,
                               std::shared_ptr<const BallQuadGrid> grid)
    : c_(field.basis->c()), grid_(std::move(grid)) {
  std::vector<cdouble> scaled(field.coeffs.size());
  for (std::size_t i = 0; i < scaled.size(); ++i) {
    scaled[i] = field.coeffs[i] / field.basis->mode(i).alpha();
  }
  const ProjectionTable table(field.basis, grid_);
  weighted_ = table.synthesize(scaled);
  for (std::size_t n = 0; n < weighted_.size(); ++n) weighted_[n] *= grid_->weight(n);
}

cdouble ContinuedField::operator()(const Vec3& x) const {
  cdouble s{};
  for (std::size_t n = 0; n < weighted_.size(); ++n) {
    const double phase = c_ * dot(x, grid_->node(n));
    s += weighted_[n] * cdouble(std::cos(phase), std::sin(phase));
  }
  return s;
}

}  // namespace pswf3d
