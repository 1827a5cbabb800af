#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pswf3d/borndata.hpp"
#include "pswf3d/errors.hpp"

using namespace pswf3d;
using doctest::Approx;

namespace {
constexpr double kPi = std::numbers::pi;

ContrastSpec ball(double a = 0.5) { return {contrast::Ball{a}, 1.0}; }
ContrastSpec cube() { return {contrast::Cube{}, 1.0}; }
ContrastSpec three() { return {contrast::ThreeCubes{}, 1.0}; }
ContrastSpec osc(int m = 8) { return {contrast::Oscillatory{m}, 1.0}; }

Vec3 random_point(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (;;) {
    const Vec3 p{u(rng), u(rng), u(rng)};
    if (norm(p) <= 1.0) return p;
  }
}
}  // namespace

TEST_CASE("ball transform") {
  CHECK(born_ball({0, 0, 0}, 30.0, 0.5).real() == Approx(kPi / 6).epsilon(1e-15));
  CHECK(born_ball({0.3, 0.2, -0.1}, 30.0, 0.5) ==
        born_ball({0.0, std::sqrt(0.14), 0.0}, 30.0, 0.5));
  // Closed form through J_{3/2}: (2 a pi / (c |p|))^{3/2} J_{3/2}(a c |p|).
  for (double r : {1e-6, 1e-3, 0.01, 0.2, 0.7}) {
    const double z = 0.5 * 30.0 * r;
    const double j32 = std::sqrt(2 / (kPi * z)) * (std::sin(z) / z - std::cos(z));
    const double want = std::pow(2 * 0.5 * kPi / (30.0 * r), 1.5) * j32;
    CHECK(born_ball({r, 0, 0}, 30.0, 0.5).real() == Approx(want).epsilon(r < 1e-2 ? 1e-6 : 1e-12));
  }
  CHECK_THROWS_AS(born_ball({0, 0, 0}, 1.0, 1.5), ArgumentError);
}

TEST_CASE("cube transform") {
  CHECK(born_cube({0, 0, 0}, 30.0, {-0.5, -0.5, -0.5}, {0.5, 0.5, 0.5}).real() == Approx(1.0));
  std::mt19937_64 rng(3);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_point(rng);
    const auto v = born_cube(p, 30.0, {-0.3, -0.2, -0.1}, {0.3, 0.2, 0.1});
    CHECK(std::abs(v.imag()) < 1e-14);
  }
  // Direct product form away from singular arguments.
  const Vec3 p{0.2, -0.4, 0.1};
  const Vec3 lo{-0.1, 0.0, -0.3}, hi{0.4, 0.2, 0.1};
  cdouble want = 1.0;
  for (int j = 0; j < 3; ++j) {
    const double w = 30.0 * p[j];
    want *= (std::exp(cdouble(0, w * hi[j])) - std::exp(cdouble(0, w * lo[j]))) / cdouble(0, w);
  }
  CHECK(std::abs(born_cube(p, 30.0, lo, hi) - want) < 1e-14);
}

TEST_CASE("three cubes transform") {
  CHECK(born_three_cubes({0, 0, 0}, 30.0).real() == Approx(0.37605).epsilon(1e-13));
  const auto boxes = three_cube_boxes();
  std::mt19937_64 rng(5);
  for (int i = 0; i < 10; ++i) {
    const auto p = random_point(rng);
    cdouble sum = 0.0;
    for (const auto& b : boxes) sum += born_cube(p, 30.0, b.lo, b.hi);
    CHECK(std::abs(born_three_cubes(p, 30.0) - sum) < 1e-14);
  }
}

TEST_CASE("oscillatory transform") {
  CHECK(std::abs(born_oscillatory({0, 0, 0}, 30.0, 8)) < 1e-15);
  std::mt19937_64 rng(7);
  for (int i = 0; i < 20; ++i) {
    const auto p = random_point(rng);
    CHECK(std::abs(born_oscillatory(p, 30.0, 8).real()) < 1e-15);
  }
  // At c p_1 = m pi, p_2 = p_3 = 0 the integral is int sin^2(m pi x) dx = 1/2 times i.
  const auto v = born_oscillatory({8 * kPi / 30.0, 0, 0}, 30.0, 8);
  CHECK(v.imag() == Approx(0.5).epsilon(1e-14));
  // Continuity across the removable singularity.
  const auto near = born_oscillatory({8 * kPi / 30.0 + 1e-9, 0.1, 0.1}, 30.0, 8);
  const auto at = born_oscillatory({8 * kPi / 30.0, 0.1, 0.1}, 30.0, 8);
  CHECK(std::abs(near - at) < 1e-8);
}

TEST_CASE("Hermitian symmetry, zero frequency and the trivial bound") {
  std::mt19937_64 rng(11);
  for (const auto& spec : {ball(), cube(), three(), osc()}) {
    double integral_abs = 0.0;
    if (spec.name() == "ball") integral_abs = kPi / 6;
    if (spec.name() == "cube") integral_abs = 1.0;
    if (spec.name() == "three_cubes") integral_abs = 0.37605;
    if (spec.name() == "oscillatory") integral_abs = 2.0 / kPi;
    for (int i = 0; i < 10; ++i) {
      const auto p = random_point(rng);
      const Vec3 q{-p[0], -p[1], -p[2]};
      CHECK(std::abs(born_analytic(spec, q, 30.0) - std::conj(born_analytic(spec, p, 30.0))) < 1e-12);
      CHECK(std::abs(born_analytic(spec, p, 30.0)) <= integral_abs + 1e-12);
    }
  }
  CHECK(born_analytic(cube(), {0, 0, 0}, 30.0).real() == Approx(1.0));
  ContrastSpec scaled = ball();
  scaled.amplitude = 2.5;
  CHECK(born_analytic(scaled, {0.1, 0, 0}, 30.0) == 2.5 * born_analytic(ball(), {0.1, 0, 0}, 30.0));
}

TEST_CASE("voxel oracle agrees with the closed forms") {
  const double c = 30.0;
  struct Case {
    ContrastSpec spec;
    Vec3 p;
  };
  const Case cases[] = {
      {ball(), {0.3, 0, 0}},
      {cube(), {0.2, -0.4, 0.1}},
      {three(), {0.5, 0.5, 0.0}},
      {osc(), {8 * kPi / c, 0.1, 0.1}},
  };
  for (const auto& cs : cases) {
    const auto grid = voxelize(cs.spec, 128);
    CHECK(std::abs(born_voxels(grid, cs.p, c) - born_analytic(cs.spec, cs.p, c)) < 1e-3);
    if (cs.spec.name() == "ball") {
      CHECK(std::abs(born_voxels(grid, {0, 0, 0}, c).real() - kPi / 6) < 1e-4);
    }
  }
}

TEST_CASE("born_general on zero and voxel contrasts") {
  contrast::VoxelGrid zero{{4, 4, 4}, Box{{-1, -1, -1}, {1, 1, 1}}, std::vector<double>(64, 0.0)};
  const ContrastSpec zspec{zero, 1.0};
  CHECK(born_general(zspec, {0.2, 0.1, 0.0}, 10.0, 4) == cdouble{});

  // A single voxel has the exact transform of its box.
  contrast::VoxelGrid one{{1, 1, 1}, Box{{-0.1, 0.0, 0.2}, {0.3, 0.1, 0.4}}, {1.0}};
  const Vec3 p{0.4, -0.3, 0.2};
  CHECK(std::abs(born_voxels(one, p, 12.0) - born_cube(p, 12.0, one.extent.lo, one.extent.hi)) < 1e-14);
  CHECK(std::abs(born_function(ContrastSpec{one, 2.0})(p, 12.0) -
                 2.0 * born_cube(p, 12.0, one.extent.lo, one.extent.hi)) < 1e-14);
}

TEST_CASE("born_function and born_sum") {
  const auto f = born_function(ball());
  CHECK(f({0.1, 0.2, 0.3}, 20.0) == born_ball({0.1, 0.2, 0.3}, 20.0, 0.5));
  const auto g = born_sum({born_function(ball()), born_function(cube())});
  const Vec3 p{0.1, -0.2, 0.05};
  CHECK(std::abs(g(p, 20.0) - (born_ball(p, 20.0, 0.5) + born_cube(p, 20.0, {-.5, -.5, -.5}, {.5, .5, .5}))) < 1e-15);
}

TEST_CASE("noise model") {
  std::vector<cdouble> data;
  std::mt19937_64 rng(1);
  std::normal_distribution<double> n;
  for (int i = 0; i < 200; ++i) data.emplace_back(n(rng), n(rng));
  CHECK(add_noise(data, 0.0, 9) == data);
  const auto a = add_noise(data, 0.2, 9);
  const auto b = add_noise(data, 0.2, 9);
  const auto c = add_noise(data, 0.2, 10);
  CHECK(a == b);
  CHECK(a != c);
  for (std::size_t i = 0; i < data.size(); ++i) {
    CHECK(std::abs(a[i] - data[i]) <= 0.2 * std::abs(data[i]) + 1e-15);
    // A single real multiplier keeps the phase.
    const cdouble ratio = a[i] / data[i];
    CHECK(std::abs(ratio.imag()) < 1e-12);
  }
  CHECK_THROWS_AS(add_noise(data, 1.0, 1), ArgumentError);
  CHECK_THROWS_AS(add_noise(data, -0.1, 1), ArgumentError);

  std::vector<FarFieldRecord> recs(3, FarFieldRecord{{0, 0, 1}, {1, 0, 0}, {1.0, 2.0}});
  const auto noisy = add_noise(recs, 0.1, 4);
  for (std::size_t i = 0; i < recs.size(); ++i) {
    CHECK(noisy[i].incident == recs[i].incident);
    CHECK(std::abs(noisy[i].value - recs[i].value) <= 0.1 * std::abs(recs[i].value) + 1e-15);
  }
}

TEST_CASE("far field synthesis") {
  const DirectionSet inc{{{0, 0, 1}, {1, 0, 0}}};
  const DirectionSet obs{{{0, 0, 1}, {0, 1, 0}, {0, 0, -1}}};
  const auto recs = farfield_from_born(born_function(ball()), 15.0, inc, obs);
  REQUIRE(recs.size() == 6);
  CHECK(recs[0].value.real() == Approx(9.375).epsilon(1e-14));
  // Incident-major order.
  CHECK(recs[4].incident == inc.directions[1]);
  CHECK(recs[4].observation == obs.directions[1]);
  const Vec3 p{0.5 * (1 - 0), 0.5 * (0 - 1), 0};
  CHECK(std::abs(recs[4].value - 225.0 / (4 * kPi) * born_ball(p, 30.0, 0.5)) < 1e-13);

  const auto fib = fibonacci_sphere(201);
  CHECK(farfield_from_born(born_function(ball()), 15.0, fib, fib).size() == 40401);
}
