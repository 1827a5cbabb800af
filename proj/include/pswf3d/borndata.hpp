#pragma once

// Born processed data u_b(p; c) = int exp(i c p.y) q(y) dy for the standard
// test contrasts, a voxel-based evaluator that serves as the independent
// check for the closed forms, the multiplicative noise model, and far-field
// synthesis over direction sets.

#include <complex>
#include <cstdint>
#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "pswf3d/quadrature.hpp"
#include "pswf3d/specfun.hpp"

namespace pswf3d {

using cdouble = std::complex<double>;

/// Axis-aligned box [lo, hi].
struct Box {
  Vec3 lo{};
  Vec3 hi{};
};

namespace contrast {

/// Indicator of |x| < a.
struct Ball {
  double a = 0.5;
};
/// Indicator of an axis-aligned box.
struct Cube {
  Box box{{-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}};
};
/// Union of three nearby boxes separated by narrow gaps.
struct ThreeCubes {};
/// sin(m pi x_1) on |x_j| < 1/2.
struct Oscillatory {
  int m = 8;
};
/// Piecewise-constant values on a regular grid; cell (a, b, c) covers
/// extent.lo + [a, a+1] h_x etc. Values are stored x-fastest.
struct VoxelGrid {
  std::array<int, 3> resolution{1, 1, 1};
  Box extent;
  std::vector<double> values;

  double& at(int a, int b, int c) {
    return values[(static_cast<std::size_t>(c) * resolution[1] + b) * resolution[0] + a];
  }
  double at(int a, int b, int c) const {
    return values[(static_cast<std::size_t>(c) * resolution[1] + b) * resolution[0] + a];
  }
};

}  // namespace contrast

struct ContrastSpec {
  std::variant<contrast::Ball, contrast::Cube, contrast::ThreeCubes, contrast::Oscillatory,
               contrast::VoxelGrid>
      kind;
  double amplitude = 1.0;

  /// Pointwise value q(x).
  double value(const Vec3& x) const;
  /// Box containing the support.
  Box bounding_box() const;
  /// Short tag such as "ball" or "three_cubes".
  std::string name() const;
};

/// The three boxes of the three-cube contrast.
std::array<Box, 3> three_cube_boxes();

cdouble born_ball(const Vec3& p, double c, double a);
cdouble born_cube(const Vec3& p, double c, const Vec3& lo, const Vec3& hi);
cdouble born_three_cubes(const Vec3& p, double c);
cdouble born_oscillatory(const Vec3& p, double c, int m_osc);

/// Closed-form transform of an analytic contrast (scaled by amplitude).
/// Voxel grids are routed to born_general.
cdouble born_analytic(const ContrastSpec& spec, const Vec3& p, double c);

/// Cell averages of spec on a resolution^3 grid over its bounding box, each
/// average taken as the midpoint rule on subsamples^3 sub-cells.
contrast::VoxelGrid voxelize(const ContrastSpec& spec, int resolution, int subsamples = 4);
contrast::VoxelGrid voxelize(const std::function<double(const Vec3&)>& q, const Box& extent,
                             std::array<int, 3> resolution, int subsamples = 4);

/// Exact transform of a piecewise-constant voxel field, evaluated as a
/// separable sum over the three axes.
cdouble born_voxels(const contrast::VoxelGrid& grid, const Vec3& p, double c);

/// Brute-force transform: voxelizes spec at `resolution` cells per axis (for
/// analytic kinds) and sums. Voxel-grid specs are used as given.
cdouble born_general(const ContrastSpec& spec, const Vec3& p, double c, int resolution,
                     int subsamples = 4);

/// Evaluator of u_b(p; c) for a contrast; used by the data pipeline.
using BornFunction = std::function<cdouble(const Vec3& p, double c)>;

/// Closed forms for analytic kinds, exact voxel sums for voxel grids.
BornFunction born_function(const ContrastSpec& spec);

/// Sum of several contrasts' data.
BornFunction born_sum(std::vector<BornFunction> parts);

/// One multi-static measurement.
struct FarFieldRecord {
  Vec3 incident{};
  Vec3 observation{};
  cdouble value;
};

/// Replaces each sample u by u (1 + delta xi), xi uniform on [-1, 1], one real
/// xi per sample drawn in order from a generator seeded with `seed`.
std::vector<cdouble> add_noise(const std::vector<cdouble>& data, double delta, std::uint64_t seed);
std::vector<FarFieldRecord> add_noise(const std::vector<FarFieldRecord>& records, double delta,
                                      std::uint64_t seed);

/// u_inf(x_j; theta_l) = (k^2 / 4 pi) u_b((theta_l - x_j)/2; 2k) for every pair,
/// incident-major: record index = l * N_obs + j.
std::vector<FarFieldRecord> farfield_from_born(const BornFunction& born, double k,
                                               const DirectionSet& incident,
                                               const DirectionSet& observation);

}  // namespace pswf3d
