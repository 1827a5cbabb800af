// Acceptance checks 1-12. Prints one PASS/FAIL line per criterion and exits
// nonzero when any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include "pswf3d/borndata.hpp"
#include "pswf3d/errors.hpp"
#include "pswf3d/io.hpp"
#include "pswf3d/pipeline.hpp"
#include "pswf3d/pswf.hpp"
#include "pswf3d/reconstruct.hpp"

using namespace pswf3d;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::shared_ptr<const BallQuadGrid> figure_grid() {
  static const auto g = std::make_shared<const BallQuadGrid>(23, 31, 61);
  return g;
}

std::shared_ptr<const PswfBasis> basis30(double sigma_frac) {
  const double a00 = std::abs(leading_prolate_eigenvalue(30.0, 150));
  return build_basis(30.0, 150, sigma_frac * a00);
}

const ContrastSpec kBall{contrast::Ball{0.5}, 1.0};

/// Exact <1_{|x|<a}, psi_i>: only m = 0 modes are nonzero, and for those it
/// reduces to sqrt(4 pi) int_0^a R(r) r^2 dr, done with 200-point Gauss-Legendre.
std::vector<cdouble> ball_projection(const PswfBasis& basis, double a) {
  const auto gl = gauss_legendre(200);
  std::vector<cdouble> out(basis.size());
  for (std::size_t i = 0; i < basis.size(); ++i) {
    const auto& mode = basis.mode(i);
    if (mode.m != 0) continue;
    double s = 0.0;
    for (std::size_t q = 0; q < gl.size(); ++q) {
      const double r = 0.5 * a * (gl.nodes[q] + 1.0);
      s += 0.5 * a * gl.weights[q] * r * r * mode.radial->value(r);
    }
    out[i] = s * std::sqrt(4 * kPi);
  }
  return out;
}

double l2_diff(const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s);
}

double l2(const std::vector<cdouble>& a) {
  double s = 0.0;
  for (const auto& v : a) s += std::norm(v);
  return std::sqrt(s);
}

Outcome criterion1() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto& inner = *figure_grid();
  const BallQuadGrid outer(12, 16, 31);
  double worst = 0.0;
  for (double c : {2.0, 5.0, 10.0}) {
    const auto basis = build_basis(c, 150, 0.0, BasisOptions{.max_m = 10, .max_n = 10});
    std::vector<std::size_t> order(basis->size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      return std::abs(basis->mode(a).alpha()) > std::abs(basis->mode(b).alpha());
    });
    order.resize(10);

    // Weighted inner-node values of the selected modes.
    std::vector<std::vector<double>> wv(10, std::vector<double>(inner.size()));
    for (int q = 0; q < 10; ++q)
      for (std::size_t n = 0; n < inner.size(); ++n)
        wv[q][n] = inner.weight(n) * eval_pswf(basis->mode(order[q]), inner.node(n));

    std::vector<double> res2(10, 0.0);
    std::vector<cdouble> acc(10);
    for (std::size_t o = 0; o < outer.size(); ++o) {
      const Vec3& x = outer.node(o);
      std::fill(acc.begin(), acc.end(), cdouble{});
      for (std::size_t n = 0; n < inner.size(); ++n) {
        const cdouble e = std::polar(1.0, c * dot(x, inner.node(n)));
        for (int q = 0; q < 10; ++q) acc[q] += e * wv[q][n];
      }
      for (int q = 0; q < 10; ++q) {
        const auto& mode = basis->mode(order[q]);
        res2[q] += outer.weight(o) * std::norm(acc[q] - mode.alpha() * eval_pswf(mode, x));
      }
    }
    for (int q = 0; q < 10; ++q)
      worst = std::max(worst, std::sqrt(res2[q]) / std::abs(basis->mode(order[q]).alpha()));
  }
  const double t = seconds_since(t0);
  return {worst < 1e-3 && t <= 120.0,
          fmt("dual residual max %.2e (< 1e-3) over c = 2, 5, 10; %.1f s (<= 120 s)", worst, t)};
}

Outcome criterion2() {
  const double c = 5.0;
  double hs = 0.0;
  for (int m = 0; m <= 30; ++m) {
    const auto modes = solve_modes(m, c, 150);
    for (int n = 0; n <= 30; ++n) hs += (2 * m + 1) * std::norm(prolate_eigenvalue(m, n, modes[n].beta, c));
  }
  const double target = std::pow(4 * kPi / 3, 2);
  const double hs_rel = std::abs(hs - target) / target;
  const double a0 = std::abs(leading_prolate_eigenvalue(0.1, 150));
  const double a0_rel = std::abs(a0 - 4 * kPi / 3) / (4 * kPi / 3);
  return {hs_rel < 0.01 && a0_rel < 0.005,
          fmt("HS sum %.4f vs %.4f (rel %.1e < 1e-2); |alpha_00(0.1)| rel %.1e (< 5e-3)", hs, target,
              hs_rel, a0_rel)};
}

Outcome criterion3() {
  const auto modes = solve_modes(0, 0.0, 150);
  double worst = 0.0;
  for (int n = 0; n <= 20; ++n) worst = std::max(worst, std::abs(modes[n].chi - 2.0 * n * (2 * n + 3)));
  return {worst <= 1e-12, fmt("max |chi_0n - 2n(2n+3)| = %.1e for n <= 20 (<= 1e-12)", worst)};
}

Outcome criterion4() {
  const auto basis = basis30(0.1);
  const auto& g = *figure_grid();
  const auto radials = basis->radial_modes();
  const std::size_t nr = radials.size();
  const int L = basis->max_degree();

  // Radial Gram over distinct (m, n).
  std::vector<double> rv(nr * g.T());
  for (std::size_t a = 0; a < nr; ++a)
    for (int i = 0; i < g.T(); ++i) rv[a * g.T() + i] = radials[a]->value(g.radius(i));
  std::vector<double> rgram(nr * nr);
  for (std::size_t a = 0; a < nr; ++a)
    for (std::size_t b = 0; b <= a; ++b) {
      double s = 0.0;
      for (int i = 0; i < g.T(); ++i) s += g.radial_weight(i) * rv[a * g.T() + i] * rv[b * g.T() + i];
      rgram[a * nr + b] = rgram[b * nr + a] = s;
    }

  // Angular Gram over harmonics up to degree L.
  const std::size_t nh = static_cast<std::size_t>(L + 1) * (L + 1);
  const std::size_t na = static_cast<std::size_t>(g.m_theta()) * g.m_phi();
  std::vector<double> yv(nh * na);
  for (int s = 0; s < g.m_theta(); ++s)
    for (int j = 0; j < g.m_phi(); ++j) {
      const auto y = spherical_harmonics_upto(L, g.theta(s), g.phi(j));
      const double w = std::sqrt(g.angular_weight(s));
      const std::size_t col = static_cast<std::size_t>(s) * g.m_phi() + j;
      for (std::size_t h = 0; h < nh; ++h) yv[h * na + col] = y[h] * w;
    }
  std::vector<double> agram(nh * nh);
  for (std::size_t h = 0; h < nh; ++h)
    for (std::size_t k = 0; k <= h; ++k) {
      double s = 0.0;
      const double* p = &yv[h * na];
      const double* q = &yv[k * na];
      for (std::size_t n = 0; n < na; ++n) s += p[n] * q[n];
      agram[h * nh + k] = agram[k * nh + h] = s;
    }

  std::vector<std::size_t> ridx(basis->size()), hidx(basis->size());
  for (std::size_t i = 0; i < basis->size(); ++i) {
    const auto& m = basis->mode(i);
    ridx[i] = static_cast<std::size_t>(std::find(radials.begin(), radials.end(), m.radial) - radials.begin());
    hidx[i] = static_cast<std::size_t>(HarmonicIndex(m.m, m.ell).packed());
  }
  double diag = 0.0, off = 0.0;
  std::size_t worst = 0;
  for (std::size_t i = 0; i < basis->size(); ++i)
    for (std::size_t k = 0; k <= i; ++k) {
      const double v = rgram[ridx[i] * nr + ridx[k]] * agram[hidx[i] * nh + hidx[k]];
      if (i != k) {
        off = std::max(off, std::abs(v));
      } else if (std::abs(v - 1.0) > diag) {
        diag = std::abs(v - 1.0);
        worst = i;
      }
    }
  const auto& wm = basis->mode(worst);
  return {diag < 5e-3 && off < 5e-3,
          fmt("%zu modes: max |G_ii - 1| = %.2e at (m,n,ell) = (%d,%d,%d), max |G_ij| = %.2e (both < 5e-3)",
              basis->size(), diag, wm.m, wm.n, wm.ell, off)};
}

Outcome criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  const double c = 30.0;
  const std::vector<ContrastSpec> specs = {
      kBall, {contrast::Cube{}, 1.0}, {contrast::ThreeCubes{}, 1.0}, {contrast::Oscillatory{8}, 1.0}};
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<Vec3> points;
  while (points.size() < 50) {
    const Vec3 p{u(rng), u(rng), u(rng)};
    if (norm(p) <= 1.0) points.push_back(p);
  }
  std::string detail;
  double worst = 0.0;
  for (const auto& spec : specs) {
    const ContrastSpec vox{voxelize(spec, 128, 4), spec.amplitude};
    double err = 0.0;
    for (const auto& p : points) err = std::max(err, std::abs(born_analytic(spec, p, c) - born_analytic(vox, p, c)));
    worst = std::max(worst, err);
    detail += fmt("%s %.1e, ", spec.name().c_str(), err);
  }
  const double t = seconds_since(t0);
  return {worst < 1e-3 && t <= 300.0, detail + fmt("all < 1e-3 at 128^3; %.1f s (<= 300 s)", t)};
}

double end_to_end_error(const std::shared_ptr<const PswfBasis>& basis,
                        const std::shared_ptr<const BallQuadGrid>& grid) {
  const auto data = born_to_processed(born_function(kBall), grid, 30.0);
  const auto rec = lowrank_reconstruct(project(data, basis));
  const auto truth = ball_projection(*basis, 0.5);
  return l2_diff(rec.coeffs, truth) / l2(truth);
}

Outcome criterion6() {
  const auto basis = basis30(0.1);
  const double err = end_to_end_error(basis, figure_grid());
  const double finer = end_to_end_error(basis, std::make_shared<const BallQuadGrid>(32, 31, 61));
  return {err < 0.02, fmt("grid (23,31,61): relative error %.2f%% (< 2%%); for reference (32,31,61) gives %.2f%%",
                          100 * err, 100 * finer)};
}

Outcome criterion7() {
  const double delta = 0.2;
  const double sigma = delta * std::abs(leading_prolate_eigenvalue(30.0, 150));
  const auto basis = build_basis(30.0, 150, sigma);
  const ProjectionTable table(basis, figure_grid());
  const auto clean = born_to_processed(born_function(kBall), figure_grid(), 30.0);
  const auto q0 = lowrank_reconstruct(project(clean, table));
  double worst_ratio = 0.0;
  int ok = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto noisy = with_noise(clean, delta, seed);
    ProcessedData diff = noisy;
    for (std::size_t n = 0; n < diff.values.size(); ++n) diff.values[n] -= clean.values[n];
    const double bound = diff.l2_norm() / sigma;
    const double measured = (lowrank_reconstruct(project(noisy, table)) - q0).l2_norm();
    worst_ratio = std::max(worst_ratio, measured / bound);
    ok += measured <= bound;
  }
  return {ok == 10, fmt("%d/10 seeds within the bound; worst measured/bound = %.3f", ok, worst_ratio)};
}

Outcome criterion8() {
  const auto basis = basis30(0.1);
  const auto modes0 = solve_modes(0, 30.0, 150);
  std::mt19937_64 rng(77);
  std::normal_distribution<double> g;
  int checks = 0, ok = 0;
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    auto f = CoefficientField::zeros(basis, FieldKind::kReconstruction);
    const double scale = std::exp(2.0 * g(rng));
    for (auto& v : f.coeffs) v = scale * cdouble(g(rng), g(rng));
    for (double eps : {1.0 / modes0[5].chi, 1.0 / modes0[10].chi}) {
      double tail = 0.0;
      for (std::size_t i = 0; i < basis->size(); ++i)
        if (basis->mode(i).chi() > 1.0 / eps) tail += std::norm(f.coeffs[i]);
      const double err = std::sqrt(tail);
      const double kept = truncate_field(f, eps).l2_norm();
      const double via_api = std::sqrt(std::max(0.0, f.l2_norm() * f.l2_norm() - kept * kept));
      for (double s : {0.5, 1.0}) {
        const double bound = std::pow(eps, s / 2) * hcs_norm(f, s);
        ++checks;
        const bool pass = err <= bound && std::abs(via_api - err) <= 1e-6 * f.l2_norm();
        ok += pass;
        worst = std::max(worst, err / bound);
      }
    }
  }
  return {ok == checks, fmt("%d/%d (field, eps, s) cases hold; worst ratio %.3f", ok, checks, worst)};
}

Outcome criterion9() {
  const auto basis = basis30(0.1);
  const ProjectionTable table(basis, figure_grid());
  const auto proj = project(born_to_processed(born_function(kBall), figure_grid(), 30.0), table);
  const auto lr = lowrank_reconstruct(proj);
  // Relative deviation at eta = 1e-14 for both smoothness orders used below.
  std::array<double, 2> rel{};
  for (int q = 0; q < 2; ++q) {
    const auto tiny = tikhonov_reconstruct(proj, 1e-14, q == 0 ? 0.25 : 0.5);
    double diff = 0.0, top = 0.0;
    for (std::size_t i = 0; i < lr.size(); ++i) {
      diff = std::max(diff, std::abs(tiny.coeffs[i] - lr.coeffs[i]));
      top = std::max(top, std::abs(lr.coeffs[i]));
    }
    rel[q] = diff / top;
  }
  bool monotone = true;
  std::vector<double> prev(lr.size(), 1e300);
  for (double eta : {1e-6, 1e-4, 1e-2}) {
    const auto t = tikhonov_reconstruct(proj, eta, 0.5);
    for (std::size_t i = 0; i < t.size(); ++i) {
      monotone = monotone && std::abs(t.coeffs[i]) <= prev[i];
      prev[i] = std::abs(t.coeffs[i]);
    }
  }
  bool finite = true;
  VolumeSpec spec;
  spec.resolution = {16, 16, 16};
  for (double s : {0.25, 0.5}) {
    const auto vol = evaluate_volume(tikhonov_reconstruct(proj, 1e-4, s), spec);
    for (const auto& v : vol.samples) finite = finite && std::isfinite(v.real()) && std::isfinite(v.imag());
  }
  return {rel[0] < 1e-10 && rel[1] < 1e-10 && monotone && finite,
          fmt("eta=1e-14 max coefficient diff / max coefficient: s=1/4 %.1e, s=1/2 %.1e (< 1e-10); "
              "monotone in eta: %s; eta=1e-4, s=1/4,1/2 finite: %s",
              rel[0], rel[1], monotone ? "yes" : "no", finite ? "yes" : "no")};
}

Outcome criterion10() {
  const auto basis = basis30(0.1);
  const auto data = born_to_processed(born_function({contrast::ThreeCubes{}, 1.0}), figure_grid(), 30.0);
  const auto rec = lowrank_reconstruct(project(data, basis));
  const Vec3 centers[] = {{0, -0.2625, 0.3}, {0, 0.2625, 0.3}, {0, 0, -0.2375}};
  const Vec3 gaps[] = {{0, 0, 0.3}, {0, -0.13, 0.0625}};
  double center_min = 1e300, gap_max = -1e300;
  for (const auto& x : centers) center_min = std::min(center_min, evaluate_point(rec, x).real());
  for (const auto& x : gaps) gap_max = std::max(gap_max, evaluate_point(rec, x).real());
  return {center_min > gap_max, fmt("min center value %.3f > max gap value %.3f", center_min, gap_max)};
}

Outcome criterion11() {
  const double a00 = std::abs(leading_prolate_eigenvalue(30.0, 150));
  const auto basis = basis30(0.1);
  const double sigma_loc = 0.9 * a00;
  const auto grid = figure_grid();

  const Box box{{1.5, -0.5, -0.5}, {2.5, 0.5, 0.5}};
  auto blob = [](const Vec3& x) {
    const Vec3 d{x[0] - 2.0, x[1], x[2]};
    return norm(d) < 0.5 ? 1.0 : 0.0;
  };
  const ContrastSpec outside{voxelize(blob, box, {32, 32, 32}, 4), 1.0};
  const auto clean = born_to_processed(born_function(kBall), grid, 30.0);
  const auto mixed = born_to_processed(born_sum({born_function(kBall), born_function(outside)}), grid, 30.0);

  const ProjectionTable table(basis, grid);
  const auto base = localized_reconstruct(project(clean, table), sigma_loc);
  const auto loc = localized_reconstruct(project(mixed, table), sigma_loc);
  const double change = (loc - base).l2_norm() / base.l2_norm();

  const auto truth_full = ball_projection(*basis, 0.5);
  std::vector<cdouble> truth(base.size());
  for (std::size_t i = 0; i < base.size(); ++i) {
    const auto& m = base.basis->mode(i);
    truth[i] = truth_full[*basis->find(m.m, m.n, m.ell)];
  }
  const double err_base = l2_diff(base.coeffs, truth) / l2(truth);
  const double err_mixed = l2_diff(loc.coeffs, truth) / l2(truth);
  return {change < 0.15,
          fmt("%zu kept modes; change against the ball-only baseline %.3f (< 0.15); error vs projection %.3f -> %.3f",
              base.size(), change, err_base, err_mixed)};
}

Outcome criterion12() {
  const auto t0 = std::chrono::steady_clock::now();
  const auto basis = basis30(0.1);
  const double t_build = seconds_since(t0);

  const auto dir = std::filesystem::temp_directory_path() / "pswf3d_acceptance";
  std::filesystem::create_directories(dir);
  io::write_basis_cache(*basis, dir / "basis.bin");

  const auto t1 = std::chrono::steady_clock::now();
  const auto cached = io::read_basis_cache(dir / "basis.bin");
  const double k = 15.0;
  const auto dirs = fibonacci_sphere(201);
  const auto records = farfield_from_born(born_function(kBall), k, dirs, dirs);
  const auto data = extract_processed(records, figure_grid(), k);
  const auto rec = lowrank_reconstruct(project(data, cached));
  const auto vol = evaluate_volume(rec, VolumeSpec{});
  io::write_volume(vol, dir / "volume.raw", io::VolumeFormat::kRaw);
  const double t_pipe = seconds_since(t1);
  std::filesystem::remove_all(dir);
  return {t_build < 300.0 && t_pipe < 60.0,
          fmt("basis build %.2f s (< 300 s); cached pipeline 201x201 records -> 64^3 volume %.2f s (< 60 s)",
              t_build, t_pipe)};
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"dual-property residual", criterion1},
      {"Hilbert-Schmidt sum and small-c limit", criterion2},
      {"c = 0 spectrum", criterion3},
      {"basis orthonormality", criterion4},
      {"closed-form Born data vs voxel oracle", criterion5},
      {"noiseless end-to-end ball", criterion6},
      {"noise stability bound", criterion7},
      {"truncation bound", criterion8},
      {"Tikhonov consistency", criterion9},
      {"three-cubes resolution", criterion10},
      {"localized imaging", criterion11},
      {"performance", criterion12},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome out;
    try {
      out = criteria[i].second();
    } catch (const std::exception& e) {
      out = {false, std::string("exception: ") + e.what()};
    }
    failures += !out.pass;
    std::printf("criterion %2zu %s: %s (%s)\n", i + 1, out.pass ? "PASS" : "FAIL", criteria[i].first,
                out.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %zu criteria failed\n", failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
