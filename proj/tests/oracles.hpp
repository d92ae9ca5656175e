#pragma once

// Finite-difference references built only from metric values.

#include <Eigen/Dense>
#include <vector>

#include "superdirac/chart.hpp"

namespace testing {

inline std::vector<double> fd_christoffel(const superdirac::Chart& c, const std::vector<double>& x, double h = 1e-5) {
  const int n = c.dim();
  std::vector<Eigen::MatrixXd> dg(n);
  for (int k = 0; k < n; ++k) {
    auto p = x, m = x;
    p[k] += h;
    m[k] -= h;
    dg[k] = (c.metric_value(p) - c.metric_value(m)) / (2 * h);
  }
  const Eigen::MatrixXd gi = c.metric_value(x).inverse();
  std::vector<double> G(n * n * n, 0.0);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0;
        for (int l = 0; l < n; ++l) s += gi(k, l) * (dg[i](j, l) + dg[j](i, l) - dg[l](i, j));
        G[(k * n + i) * n + j] = 0.5 * s;
      }
  return G;
}

// R_i^j_kl from nested central differences.
inline std::vector<double> fd_riemann(const superdirac::Chart& c, const std::vector<double>& x, double h = 1e-4) {
  const int n = c.dim();
  auto G = fd_christoffel(c, x, 1e-5);
  std::vector<std::vector<double>> dG(n);
  for (int l = 0; l < n; ++l) {
    auto p = x, m = x, p2 = x, m2 = x;
    p[l] += h;
    m[l] -= h;
    p2[l] += 2 * h;
    m2[l] -= 2 * h;
    auto Gp = fd_christoffel(c, p, 1e-5), Gm = fd_christoffel(c, m, 1e-5);
    auto Gp2 = fd_christoffel(c, p2, 1e-5), Gm2 = fd_christoffel(c, m2, 1e-5);
    dG[l].resize(G.size());
    for (size_t a = 0; a < G.size(); ++a) dG[l][a] = (8 * (Gp[a] - Gm[a]) - (Gp2[a] - Gm2[a])) / (12 * h);
  }
  auto g = [&](int k, int i, int j) { return G[(k * n + i) * n + j]; };
  auto dg = [&](int l, int k, int i, int j) { return dG[l][(k * n + i) * n + j]; };
  std::vector<double> R(n * n * n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double r = dg(l, j, k, i) - dg(k, j, l, i);
          for (int m = 0; m < n; ++m) r += g(j, l, m) * g(m, k, i) - g(j, k, m) * g(m, l, i);
          R[((i * n + j) * n + k) * n + l] = r;
        }
  return R;
}

inline double fd_scalar_curvature(const superdirac::Chart& c, const std::vector<double>& x) {
  const int n = c.dim();
  const auto R = fd_riemann(c, x);
  const Eigen::MatrixXd g = c.metric_value(x), gi = g.inverse();
  // R^{ij}_ij = g^{ia} R_a^j_ij
  double s = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a) s += gi(i, a) * R[((a * n + j) * n + i) * n + j];
  return s;
}

}  // namespace testing
