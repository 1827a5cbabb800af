#pragma once

// Inversion on the PSWF basis: projection of processed data, spectral-cutoff
// and Tikhonov reconstructions, localized imaging, the H^s_c norm, and
// evaluation of coefficient fields on Cartesian grids.

#include <array>
#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <vector>

#include "pswf3d/borndata.hpp"
#include "pswf3d/pipeline.hpp"
#include "pswf3d/pswf.hpp"
#include "pswf3d/quadrature.hpp"

namespace pswf3d {

enum class FieldKind : std::uint8_t { kDataProjection = 0, kReconstruction = 1 };

/// One complex coefficient per mode of `basis`, in basis order.
struct CoefficientField {
  std::shared_ptr<const PswfBasis> basis;
  std::vector<cdouble> coeffs;
  FieldKind kind = FieldKind::kReconstruction;

  static CoefficientField zeros(std::shared_ptr<const PswfBasis> basis, FieldKind kind);
  std::size_t size() const noexcept { return coeffs.size(); }
  /// l2 norm of the coefficients, equal to the L2(B) norm of the represented function.
  double l2_norm() const;
};

CoefficientField operator+(const CoefficientField& a, const CoefficientField& b);
CoefficientField operator-(const CoefficientField& a, const CoefficientField& b);
CoefficientField operator*(cdouble s, const CoefficientField& a);

/// Mode values on a ball grid in factored form: radial factor per (m, n) and
/// shell, real harmonic per (m, ell) and angular node. Built once per
/// (basis, grid) pair and reused for projection and synthesis.
class ProjectionTable {
public:
  ProjectionTable(std::shared_ptr<const PswfBasis> basis, std::shared_ptr<const BallQuadGrid> grid);

  const std::shared_ptr<const PswfBasis>& basis() const noexcept { return basis_; }
  const std::shared_ptr<const BallQuadGrid>& grid() const noexcept { return grid_; }

  /// sum_n values_n psi_i(p_n) w_n for every mode i.
  std::vector<cdouble> project(const std::vector<cdouble>& values) const;
  /// sum_i coeffs_i psi_i(p_n) at every node n.
  std::vector<cdouble> synthesize(const std::vector<cdouble>& coeffs) const;

private:
  std::shared_ptr<const PswfBasis> basis_;
  std::shared_ptr<const BallQuadGrid> grid_;
  BasisEvaluator evaluator_;
  std::size_t harmonics_ = 0;
  std::size_t angular_nodes_ = 0;
  std::vector<double> radial_;   // [shell][radial index]
  std::vector<double> angular_;  // [harmonic][angular node]
};

/// Quadrature approximation of <u_b, psi_i> for every mode. Throws
/// BandwidthMismatchError when data and basis disagree on c.
CoefficientField project(const ProcessedData& data, std::shared_ptr<const PswfBasis> basis);
CoefficientField project(const ProcessedData& data, const ProjectionTable& table);

/// q_i = u_i / alpha_i.
CoefficientField lowrank_reconstruct(const CoefficientField& projection);

/// q_i = conj(alpha_i) u_i / (|alpha_i|^2 + eta chi_i^s).
CoefficientField tikhonov_reconstruct(const CoefficientField& projection, double eta, double s);

/// lowrank_reconstruct restricted to modes with |alpha| > sigma_loc.
CoefficientField localized_reconstruct(const CoefficientField& projection, double sigma_loc);

/// sqrt(sum chi_i^s |coeff_i|^2).
double hcs_norm(const CoefficientField& field, double s);

/// Keeps the modes with chi <= 1/epsilon.
CoefficientField truncate_field(const CoefficientField& field, double epsilon);

/// Cutoff on |alpha| used when the caller gives none: delta |alpha00| for
/// noisy data, 0.1 |alpha00| for clean data, 0.9 |alpha00| when the contrast
/// may extend outside the unit ball.
double default_cutoff(double abs_alpha00, std::optional<double> delta, bool outside_support = false);

struct VolumeSpec {
  std::array<int, 3> resolution{64, 64, 64};
  Box extent{{-1.0, -1.0, -1.0}, {1.0, 1.0, 1.0}};
  /// Fill voxels outside B through the R^3 continuation on this grid
  /// instead of leaving them zero.
  std::shared_ptr<const BallQuadGrid> continuation;
};

/// Complex samples at voxel centers, x fastest.
struct VolumeGrid {
  std::array<int, 3> resolution{1, 1, 1};
  Box extent;
  std::vector<cdouble> samples;
  /// 1 for voxels whose center lies outside the closed unit ball.
  std::vector<std::uint8_t> outside;

  std::size_t size() const noexcept { return samples.size(); }
  std::size_t index(int i, int j, int k) const noexcept {
    return (static_cast<std::size_t>(k) * resolution[1] + j) * resolution[0] + i;
  }
  Vec3 center(int i, int j, int k) const;
};

VolumeGrid evaluate_volume(const CoefficientField& field, const VolumeSpec& spec = {});

/// sum_i coeff_i psi_i(x) for |x| <= 1.
cdouble evaluate_point(const CoefficientField& field, const Vec3& x);

/// The field extended to R^3 via the Fourier continuation of every mode,
/// collapsed into a single weighted node sum.
class ContinuedField {
public:
  ContinuedField(const CoefficientField& field, std::shared_ptr<const BallQuadGrid> grid);
  cdouble operator()(const Vec3& x) const;

private:
  double c_;
  std::shared_ptr<const BallQuadGrid> grid_;
  std::vector<cdouble> weighted_;
};

}  // namespace pswf3d
