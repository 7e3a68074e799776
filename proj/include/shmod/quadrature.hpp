#pragma once
// Composite Gauss-Legendre quadrature with graded and geometric meshes.
// Nodes and weights are generated by Newton iteration on the Legendre
// recurrence and cached per order.

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace shmod::quad {

struct GaussLegendre {
  std::vector<double> x, w;  // nodes and weights on [-1, 1]

  explicit GaussLegendre(int n) : x(n), w(n) {
    if (n < 1) throw std::invalid_argument("GaussLegendre: order must be >= 1");
    for (int i = 0; i < (n + 1) / 2; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
      double pp = 0.0;
      for (int iter = 0; iter < 100; ++iter) {
        double p0 = 1.0, p1 = 0.0;
        for (int j = 0; j < n; ++j) {
          const double p2 = p1;
          p1 = p0;
          p0 = ((2.0 * j + 1.0) * z * p1 - j * p2) / (j + 1.0);
        }
        pp = n * (z * p0 - p1) / (z * z - 1.0);
        const double dz = p0 / pp;
        z -= dz;
        if (std::abs(dz) < 1e-15) break;
      }
      x[i] = -z;
      x[n - 1 - i] = z;
      w[i] = w[n - 1 - i] = 2.0 / ((1.0 - z * z) * pp * pp);
    }
  }
};

inline const GaussLegendre& gl_rule(int n) {
  static std::map<int, GaussLegendre> cache;
  static std::mutex mu;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(n);
  if (it == cache.end()) it = cache.emplace(n, GaussLegendre(n)).first;
  return it->second;
}

template <class F>
double panel(const GaussLegendre& gl, double a, double b, F&& f) {
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double s = 0.0;
  for (std::size_t i = 0; i < gl.x.size(); ++i) s += gl.w[i] * f(c + h * gl.x[i]);
  return s * h;
}

template <class F>
double composite(const GaussLegendre& gl, const std::vector<double>& edges, F&& f) {
  double s = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i)
    if (edges[i + 1] > edges[i]) s += panel(gl, edges[i], edges[i + 1], f);
  return s;
}

// Edges a + (b-a) (j/n)^power, j = 0..n.  power = 2 restores uniform panel
// error for integrands behaving like (t-a)^{-1/2} near a.
inline std::vector<double> graded_mesh(double a, double b, int n, double power = 2.0) {
  if (n < 1) throw std::invalid_argument("graded_mesh: need n >= 1");
  std::vector<double> e(static_cast<std::size_t>(n) + 1);
  for (int j = 0; j <= n; ++j)
    e[static_cast<std::size_t>(j)] =
        a + (b - a) * std::pow(static_cast<double>(j) / n, power);
  e.front() = a;
  e.back() = b;
  return e;
}

// n log-spaced values from a to b inclusive (a, b > 0).
inline std::vector<double> geometric_mesh(double a, double b, int n) {
  if (!(a > 0.0 && b > a) || n < 2)
    throw std::invalid_argument("geometric_mesh: need 0 < a < b and n >= 2");
  std::vector<double> v(static_cast<std::size_t>(n));
  const double la = std::log(a), lb = std::log(b);
  for (int j = 0; j < n; ++j)
    v[static_cast<std::size_t>(j)] =
        std::exp(la + (lb - la) * static_cast<double>(j) / (n - 1));
  v.front() = a;
  v.back() = b;
  return v;
}

}  // namespace shmod::quad
