#include "pswf3d/tridiag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "pswf3d/errors.hpp"

namespace pswf3d {

double SymTridiagonal::norm_inf() const {
  double best = 0.0;
  const std::size_t n = diag.size();
  for (std::size_t i = 0; i < n; ++i) {
    double row = std::abs(diag[i]);
    if (i > 0) row += std::abs(off[i - 1]);
    if (i + 1 < n) row += std::abs(off[i]);
    best = std::max(best, row);
  }
  return best;
}

std::vector<double> SymTridiagonal::apply(const std::vector<double>& x) const {
  const std::size_t n = diag.size();
  std::vector<double> y(n);
  for (std::size_t i = 0; i < n; ++i) {
    double v = diag[i] * x[i];
    if (i > 0) v += off[i - 1] * x[i - 1];
    if (i + 1 < n) v += off[i] * x[i + 1];
    y[i] = v;
  }
  return y;
}

std::vector<double> tridiagonal_eigenvalues(const SymTridiagonal& a) {
  const int n = static_cast<int>(a.diag.size());
  std::vector<double> d = a.diag;
  std::vector<double> e(n, 0.0);
  for (int i = 0; i + 1 < n; ++i) e[i] = a.off[i];

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m = l;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= std::numeric_limits<double>::epsilon() * dd) break;
      }
      if (m != l) {
        if (iter++ == 60) {
          throw NumericError("tridiagonal QL iteration did not converge for eigenvalue " +
                             std::to_string(l));
        }
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0;
        double c = 1.0;
        double p = 0.0;
        int i = m - 1;
        for (; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
  std::sort(d.begin(), d.end());
  return d;
}

std::vector<double> tridiagonal_eigenvector(const SymTridiagonal& a, double lambda) {
  const int n = static_cast<int>(a.diag.size());
  std::vector<double> z(n, 0.0);
  if (n == 0) return z;
  if (n == 1) {
    z[0] = 1.0;
    return z;
  }
  const double tiny = std::numeric_limits<double>::epsilon() * std::max(a.norm_inf(), 1e-300);
  auto guard = [tiny](double v) {
    if (std::abs(v) < tiny) return v < 0.0 ? -tiny : tiny;
    return v;
  };

  // Top-down pivots of L D L^T and bottom-up pivots of U D U^T.
  std::vector<double> dplus(n), dminus(n);
  dplus[0] = guard(a.diag[0] - lambda);
  for (int j = 1; j < n; ++j) {
    dplus[j] = guard(a.diag[j] - lambda - a.off[j - 1] * a.off[j - 1] / dplus[j - 1]);
  }
  dminus[n - 1] = guard(a.diag[n - 1] - lambda);
  for (int j = n - 2; j >= 0; --j) {
    dminus[j] = guard(a.diag[j] - lambda - a.off[j] * a.off[j] / dminus[j + 1]);
  }

  // Twist where the combined pivot is smallest.
  int k = 0;
  double best = std::numeric_limits<double>::infinity();
  for (int j = 0; j < n; ++j) {
    const double gamma = dplus[j] + dminus[j] - (a.diag[j] - lambda);
    if (std::abs(gamma) < best) {
      best = std::abs(gamma);
      k = j;
    }
  }

  z[k] = 1.0;
  for (int j = k - 1; j >= 0; --j) z[j] = -a.off[j] * z[j + 1] / dplus[j];
  for (int j = k + 1; j < n; ++j) z[j] = -a.off[j - 1] * z[j - 1] / dminus[j];

  double scale = 0.0;
  for (double v : z) scale = std::max(scale, std::abs(v));
  double sum = 0.0;
  for (double& v : z) {
    v /= scale;
    sum += v * v;
  }
  const double len = std::sqrt(sum);
  for (double& v : z) v /= len;
  return z;
}

}  // namespace pswf3d
