#include "pswf3d/borndata.hpp"

#include <cmath>
#include <memory>
#include <numbers>
#include <random>

#include "pswf3d/errors.hpp"

namespace pswf3d {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr cdouble kI{0.0, 1.0};

double sinc(double x) {
  if (std::abs(x) < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

// (sin z - z cos z) / z^3, the ball transform without its 4 pi a^3 factor.
double ball_profile(double z) {
  if (std::abs(z) < 0.5) {
    // sum_{k>=1} (-1)^{k+1} 2k z^{2k-2} / (2k+1)!
    const double z2 = z * z;
    double term = 1.0 / 3.0;  // k = 1
    double sum = term;
    double fact = 6.0;        // (2k+1)! for k = 1
    double power = 1.0;       // z^{2k-2}
    for (int k = 2; k <= 12; ++k) {
      fact *= (2.0 * k) * (2.0 * k + 1.0);
      power *= -z2;
      term = 2.0 * k * power / fact;
      sum += term;
    }
    return sum;
  }
  return (std::sin(z) - z * std::cos(z)) / (z * z * z);
}

// int_lo^hi exp(i w x) dx without cancellation for small w.
cdouble interval_transform(double w, double lo, double hi) {
  const double len = hi - lo;
  return std::polar(len * sinc(0.5 * w * len), 0.5 * w * (lo + hi));
}

bool inside(const Box& box, const Vec3& x) {
  for (int d = 0; d < 3; ++d) {
    if (x[d] < box.lo[d] || x[d] > box.hi[d]) return false;
  }
  return true;
}

}  // namespace

std::array<Box, 3> three_cube_boxes() {
  return {Box{{-0.3, -0.5, 0.1}, {0.3, -0.025, 0.5}},
          Box{{-0.3, 0.025, 0.1}, {0.3, 0.5, 0.5}},
          Box{{-0.3, -0.235, -0.5}, {0.3, 0.235, 0.025}}};
}

double ContrastSpec::value(const Vec3& x) const {
  const double v = std::visit(
      [&x](const auto& k) -> double {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, contrast::Ball>) {
          return norm(x) < k.a ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<K, contrast::Cube>) {
          return inside(k.box, x) ? 1.0 : 0.0;
        } else if constexpr (std::is_same_v<K, contrast::ThreeCubes>) {
          for (const auto& box : three_cube_boxes()) {
            if (inside(box, x)) return 1.0;
          }
          return 0.0;
        } else if constexpr (std::is_same_v<K, contrast::Oscillatory>) {
          for (double xd : x) {
            if (std::abs(xd) >= 0.5) return 0.0;
          }
          return std::sin(k.m * kPi * x[0]);
        } else {
          std::array<int, 3> cell{};
          for (int d = 0; d < 3; ++d) {
            const double h = (k.extent.hi[d] - k.extent.lo[d]) / k.resolution[d];
            const double u = (x[d] - k.extent.lo[d]) / h;
            if (u < 0.0 || u >= k.resolution[d]) return 0.0;
            cell[d] = static_cast<int>(u);
          }
          return k.at(cell[0], cell[1], cell[2]);
        }
      },
      kind);
  return amplitude * v;
}

Box ContrastSpec::bounding_box() const {
  return std::visit(
      [](const auto& k) -> Box {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, contrast::Ball>) {
          return {{-k.a, -k.a, -k.a}, {k.a, k.a, k.a}};
        } else if constexpr (std::is_same_v<K, contrast::Cube>) {
          return k.box;
        } else if constexpr (std::is_same_v<K, contrast::ThreeCubes>) {
          return {{-0.3, -0.5, -0.5}, {0.3, 0.5, 0.5}};
        } else if constexpr (std::is_same_v<K, contrast::Oscillatory>) {
          return {{-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}};
        } else {
          return k.extent;
        }
      },
      kind);
}

std::string ContrastSpec::name() const {
  static const char* names[] = {"ball", "cube", "three_cubes", "oscillatory", "voxel_grid"};
  return names[kind.index()];
}

cdouble born_ball(const Vec3& p, double c, double a) {
  if (!(a > 0.0 && a < 1.0)) throw ArgumentError("ball radius must lie in (0, 1)");
  const double z = a * c * norm(p);
  return 4.0 * kPi * a * a * a * ball_profile(z);
}

cdouble born_cube(const Vec3& p, double c, const Vec3& lo, const Vec3& hi) {
  cdouble u = 1.0;
  for (int d = 0; d < 3; ++d) {
    if (!(lo[d] < hi[d])) throw ArgumentError("cube bounds must satisfy lo < hi");
    u *= interval_transform(c * p[d], lo[d], hi[d]);
  }
  return u;
}

cdouble born_three_cubes(const Vec3& p, double c) {
  cdouble u = 0.0;
  for (const auto& box : three_cube_boxes()) u += born_cube(p, c, box.lo, box.hi);
  return u;
}

cdouble born_oscillatory(const Vec3& p, double c, int m_osc) {
  const double w = c * p[0];
  const double shift = m_osc * kPi;
  const cdouble first = -0.5 * kI * (sinc(0.5 * (w + shift)) - sinc(0.5 * (w - shift)));
  return first * sinc(0.5 * c * p[1]) * sinc(0.5 * c * p[2]);
}

cdouble born_analytic(const ContrastSpec& spec, const Vec3& p, double c) {
  const cdouble u = std::visit(
      [&](const auto& k) -> cdouble {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, contrast::Ball>) {
          return born_ball(p, c, k.a);
        } else if constexpr (std::is_same_v<K, contrast::Cube>) {
          return born_cube(p, c, k.box.lo, k.box.hi);
        } else if constexpr (std::is_same_v<K, contrast::ThreeCubes>) {
          return born_three_cubes(p, c);
        } else if constexpr (std::is_same_v<K, contrast::Oscillatory>) {
          return born_oscillatory(p, c, k.m);
        } else {
          return born_voxels(k, p, c);
        }
      },
      spec.kind);
  return spec.amplitude * u;
}

contrast::VoxelGrid voxelize(const std::function<double(const Vec3&)>& q, const Box& extent,
                             std::array<int, 3> resolution, int subsamples) {
  if (subsamples < 1) throw ArgumentError("voxel subsamples must be >= 1");
  for (int r : resolution) {
    if (r < 1) throw ArgumentError("voxel resolution must be >= 1");
  }
  contrast::VoxelGrid grid;
  grid.resolution = resolution;
  grid.extent = extent;
  grid.values.resize(static_cast<std::size_t>(resolution[0]) * resolution[1] * resolution[2]);
  Vec3 h{};
  for (int d = 0; d < 3; ++d) h[d] = (extent.hi[d] - extent.lo[d]) / resolution[d];
  for (int kz = 0; kz < resolution[2]; ++kz) {
    for (int ky = 0; ky < resolution[1]; ++ky) {
      for (int kx = 0; kx < resolution[0]; ++kx) {
        double sum = 0.0;
        for (int sz = 0; sz < subsamples; ++sz) {
          for (int sy = 0; sy < subsamples; ++sy) {
            for (int sx = 0; sx < subsamples; ++sx) {
              const Vec3 x{extent.lo[0] + (kx + (sx + 0.5) / subsamples) * h[0],
                           extent.lo[1] + (ky + (sy + 0.5) / subsamples) * h[1],
                           extent.lo[2] + (kz + (sz + 0.5) / subsamples) * h[2]};
              sum += q(x);
            }
          }
        }
        grid.at(kx, ky, kz) = sum / (subsamples * subsamples * subsamples);
      }
    }
  }
  return grid;
}

contrast::VoxelGrid voxelize(const ContrastSpec& spec, int resolution, int subsamples) {
  if (const auto* v = std::get_if<contrast::VoxelGrid>(&spec.kind)) {
    contrast::VoxelGrid copy = *v;
    for (double& x : copy.values) x *= spec.amplitude;
    return copy;
  }
  return voxelize([&spec](const Vec3& x) { return spec.value(x); }, spec.bounding_box(),
                  {resolution, resolution, resolution}, subsamples);
}

cdouble born_voxels(const contrast::VoxelGrid& grid, const Vec3& p, double c) {
  std::array<std::vector<cdouble>, 3> factors;
  for (int d = 0; d < 3; ++d) {
    const int n = grid.resolution[d];
    const double h = (grid.extent.hi[d] - grid.extent.lo[d]) / n;
    const double w = c * p[d];
    const double cell = h * sinc(0.5 * w * h);
    factors[d].resize(n);
    for (int a = 0; a < n; ++a) {
      factors[d][a] = std::polar(cell, w * (grid.extent.lo[d] + (a + 0.5) * h));
    }
  }
  const int nx = grid.resolution[0];
  const int ny = grid.resolution[1];
  const int nz = grid.resolution[2];
  cdouble total = 0.0;
  const double* q = grid.values.data();
  for (int kz = 0; kz < nz; ++kz) {
    cdouble plane = 0.0;
    for (int ky = 0; ky < ny; ++ky) {
      double re = 0.0;
      double im = 0.0;
      const double* row = q + (static_cast<std::size_t>(kz) * ny + ky) * nx;
      for (int kx = 0; kx < nx; ++kx) {
        re += row[kx] * factors[0][kx].real();
        im += row[kx] * factors[0][kx].imag();
      }
      plane += factors[1][ky] * cdouble(re, im);
    }
    total += factors[2][kz] * plane;
  }
  return total;
}

cdouble born_general(const ContrastSpec& spec, const Vec3& p, double c, int resolution,
                     int subsamples) {
  return born_voxels(voxelize(spec, resolution, subsamples), p, c);
}

BornFunction born_function(const ContrastSpec& spec) {
  if (const auto* v = std::get_if<contrast::VoxelGrid>(&spec.kind)) {
    auto grid = std::make_shared<const contrast::VoxelGrid>(voxelize(spec, v->resolution[0], 1));
    return [grid](const Vec3& p, double c) { return born_voxels(*grid, p, c); };
  }
  return [spec](const Vec3& p, double c) { return born_analytic(spec, p, c); };
}

BornFunction born_sum(std::vector<BornFunction> parts) {
  return [parts = std::move(parts)](const Vec3& p, double c) {
    cdouble u = 0.0;
    for (const auto& f : parts) u += f(p, c);
    return u;
  };
}

std::vector<cdouble> add_noise(const std::vector<cdouble>& data, double delta, std::uint64_t seed) {
  if (!(delta >= 0.0 && delta < 1.0)) throw ArgumentError("noise level must lie in [0, 1)");
  std::vector<cdouble> out = data;
  if (delta == 0.0) return out;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> xi(-1.0, 1.0);
  for (auto& u : out) u *= 1.0 + delta * xi(rng);
  return out;
}

std::vector<FarFieldRecord> add_noise(const std::vector<FarFieldRecord>& records, double delta,
                                      std::uint64_t seed) {
  std::vector<cdouble> values;
  values.reserve(records.size());
  for (const auto& r : records) values.push_back(r.value);
  values = add_noise(values, delta, seed);
  std::vector<FarFieldRecord> out = records;
  for (std::size_t i = 0; i < out.size(); ++i) out[i].value = values[i];
  return out;
}

std::vector<FarFieldRecord> farfield_from_born(const BornFunction& born, double k,
                                               const DirectionSet& incident,
                                               const DirectionSet& observation) {
  if (!(k > 0.0)) throw ArgumentError("wave number must be positive");
  const double scale = k * k / (4.0 * kPi);
  std::vector<FarFieldRecord> records;
  records.reserve(incident.count() * observation.count());
  for (const auto& theta : incident.directions) {
    for (const auto& xhat : observation.directions) {
      const Vec3 p{0.5 * (theta[0] - xhat[0]), 0.5 * (theta[1] - xhat[1]),
                   0.5 * (theta[2] - xhat[2])};
      records.push_back({theta, xhat, scale * born(p, 2.0 * k)});
    }
  }
  return records;
}

}  // namespace pswf3d
