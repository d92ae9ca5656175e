#include "superdirac/geometry.hpp"

#include <cmath>

namespace superdirac {

Christoffel christoffel(const MetricJet& mj) {
  const int n = mj.n;
  if (mj.order() < 1) throw OrderError("Christoffel symbols need a metric jet of order >= 1");
  std::vector<RJet> dg;  // d_m g_ij at (m*n+i)*n+j
  dg.reserve(n * n * n);
  for (int m = 0; m < n; ++m)
    for (int ij = 0; ij < n * n; ++ij) dg.push_back(mj.g[ij].partial(m));
  auto D = [&](int m, int i, int j) -> const RJet& { return dg[(m * n + i) * n + j]; };
  Christoffel G;
  G.n = n;
  G.c.reserve(n * n * n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        RJet s = RJet::constant(n, 0.0);
        for (int l = 0; l < n; ++l) s += mj.inverse(k, l) * (D(i, j, l) + D(j, i, l) - D(l, i, j));
        G.c.push_back(s * 0.5);
      }
  return G;
}

CurvatureData curvature(const MetricJet& mj) { return curvature(mj, christoffel(mj)); }

CurvatureData curvature(const MetricJet& mj, const Christoffel& G) {
  const int n = mj.n;
  if (G.c.front().order() < 1) throw OrderError("curvature needs a metric jet of order 2");
  CurvatureData cd;
  cd.n = n;
  cd.gamma = G;
  cd.riemann.assign(n * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double r = G(j, k, i).d(l) - G(j, l, i).d(k);
          for (int m = 0; m < n; ++m)
            r += G(j, l, m).value() * G(m, k, i).value() - G(j, k, m).value() * G(m, l, i).value();
          cd.riemann[((i * n + j) * n + k) * n + l] = r;
        }
  const Eigen::MatrixXd g = mj.metric_value(), gi = mj.inverse_value();
  cd.riemann_lower.assign(n * n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) {
          double s = 0;
          for (int m = 0; m < n; ++m) s += g(j, m) * cd.R(i, m, k, l);
          cd.riemann_lower[((i * n + j) * n + k) * n + l] = s;
        }
  cd.ricci.assign(n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double s = 0;
      for (int k = 0; k < n; ++k)
        for (int a = 0; a < n; ++a) s += gi(k, a) * cd.R_lower(a, i, k, j);
      cd.ricci[i * n + j] = s;
    }
  double r = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) r += gi(i, a) * gi(j, b) * cd.R_lower(a, b, i, j);
  cd.scalar = r;
  return cd;
}

double metric_compatibility_residual(const MetricJet& mj, const Christoffel& G) {
  const int n = mj.n;
  double worst = 0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        RJet r = mj.metric(i, j).partial(k);
        for (int m = 0; m < n; ++m) r -= G(m, k, i) * mj.metric(m, j) + G(m, k, j) * mj.metric(i, m);
        worst = std::max(worst, jet_distance(r, RJet::constant(n, 0.0)));
      }
  return worst;
}

double christoffel_symmetry_residual(const Christoffel& G) {
  const int n = G.n;
  double worst = 0;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) worst = std::max(worst, jet_distance(G(k, i, j), G(k, j, i)));
  return worst;
}

double bianchi_residual(const CurvatureData& c) {
  const int n = c.n;
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          worst = std::max(worst, std::abs(c.R(i, j, k, l) + c.R(k, j, l, i) + c.R(l, j, i, k)));
  return worst;
}

double ricci_symmetry_residual(const CurvatureData& c) {
  double worst = 0;
  for (int i = 0; i < c.n; ++i)
    for (int j = 0; j < c.n; ++j) worst = std::max(worst, std::abs(c.Ric(i, j) - c.Ric(j, i)));
  return worst;
}

double log_det_identity_residual(const MetricJet& mj, const Christoffel& G) {
  const int n = mj.n;
  const RJet h = log(mj.sqrt_abs_det);
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    RJet t = RJet::constant(n, 0.0);
    for (int j = 0; j < n; ++j) t += G(j, i, j);
    worst = std::max(worst, jet_distance(h.partial(i), t));
  }
  return worst;
}

std::vector<RJet> gradient(const MetricJet& mj, const RJet& f) {
  const int n = mj.n;
  std::vector<RJet> r;
  for (int i = 0; i < n; ++i) {
    RJet s = RJet::constant(n, 0.0);
    for (int j = 0; j < n; ++j) s += mj.inverse(i, j) * f.partial(j);
    r.push_back(s);
  }
  return r;
}

RJet divergence(const MetricJet& mj, const std::vector<RJet>& a) {
  const int n = mj.n;
  if (static_cast<int>(a.size()) != n) throw DimensionError("vector field has the wrong dimension");
  RJet s = RJet::constant(n, 0.0);
  for (int i = 0; i < n; ++i) s += (a[i] * mj.sqrt_abs_det).partial(i);
  return s * inverse(mj.sqrt_abs_det.truncated(s.order()));
}

RJet divergence_connection(const Christoffel& G, const std::vector<RJet>& a) {
  const int n = G.n;
  RJet s = RJet::constant(n, 0.0);
  for (int i = 0; i < n; ++i) {
    s += a[i].partial(i);
    for (int k = 0; k < n; ++k) s += G(i, i, k) * a[k];
  }
  return s;
}

FormPtr cotangent_form(const MetricJet& mj) {
  Eigen::MatrixXd gi = mj.inverse_value();
  gi = (gi + gi.transpose()) / 2;
  return BilinearForm::make(gi);
}

std::vector<Multivector> curvature_two_form(const CurvatureData& c, const MetricJet& mj) {
  const int n = c.n;
  const FormPtr f = cotangent_form(mj);
  std::vector<Multivector> pairs;
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l)
      pairs.push_back(clifford_product(Multivector::generator(f, AlgebraTag::Clifford, k),
                                       Multivector::generator(f, AlgebraTag::Clifford, l)));
  std::vector<Multivector> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      Multivector s(f, AlgebraTag::Clifford);
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) s += (-0.25 * c.R_lower(k, l, i, j)) * pairs[k * n + l];
      out.push_back(std::move(s));
    }
  return out;
}

double curvature_two_form_residual(const CurvatureData& c, const MetricJet& mj) {
  const int n = c.n;
  const auto S = curvature_two_form(c, mj);
  const FormPtr f = S.front().form();
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const auto e = Multivector::generator(f, AlgebraTag::Clifford, k);
        Multivector lhs = clifford_product(S[i * n + j], e) - clifford_product(e, S[i * n + j]);
        Multivector rhs(f, AlgebraTag::Clifford);
        for (int l = 0; l < n; ++l) rhs += c.R(l, k, i, j) * Multivector::generator(f, AlgebraTag::Clifford, l);
        worst = std::max(worst, distance(lhs, rhs));
      }
  return worst;
}

}  // namespace superdirac
