#pragma once

#include <vector>

#include "superdirac/chart.hpp"
#include "superdirac/clifford.hpp"

namespace superdirac {

// Gamma^k_ij, one order below the metric jet.
struct Christoffel {
  int n = 0;
  std::vector<RJet> c;
  const RJet& operator()(int k, int i, int j) const { return c[(k * n + i) * n + j]; }
};

// R_i^j_kl = d_l Gamma^j_ki - d_k Gamma^j_li + Gamma^j_lm Gamma^m_ki - Gamma^j_km Gamma^m_li,
// with Ric_ij = R^k_ikj and scalar curvature R^{ij}_ij.
struct CurvatureData {
  int n = 0;
  Christoffel gamma;
  std::vector<double> riemann;        // R_i^j_kl
  std::vector<double> riemann_lower;  // R_ijkl = g_jm R_i^m_kl
  std::vector<double> ricci;
  double scalar = 0.0;

  double R(int i, int j, int k, int l) const { return riemann[((i * n + j) * n + k) * n + l]; }
  double R_lower(int i, int j, int k, int l) const { return riemann_lower[((i * n + j) * n + k) * n + l]; }
  double Ric(int i, int j) const { return ricci[i * n + j]; }
};

Christoffel christoffel(const MetricJet& mj);
CurvatureData curvature(const MetricJet& mj);
CurvatureData curvature(const MetricJet& mj, const Christoffel& gamma);

// d_k g_ij - Gamma^m_ki g_mj - Gamma^m_kj g_im, value and first derivatives.
double metric_compatibility_residual(const MetricJet& mj, const Christoffel& gamma);
double christoffel_symmetry_residual(const Christoffel& gamma);
// Cyclic sum R_i^j_kl + R_k^j_li + R_l^j_ik.
double bianchi_residual(const CurvatureData& curv);
double ricci_symmetry_residual(const CurvatureData& curv);
// d(log |det g|^{1/2}) against Gamma^j_ij, with the determinant taken by elimination.
double log_det_identity_residual(const MetricJet& mj, const Christoffel& gamma);

std::vector<RJet> gradient(const MetricJet& mj, const RJet& f);
// |det g|^{-1/2} d_i(a^i |det g|^{1/2}).
RJet divergence(const MetricJet& mj, const std::vector<RJet>& a);
// d_i a^i + Gamma^i_ik a^k.
RJet divergence_connection(const Christoffel& gamma, const std::vector<RJet>& a);

// Inverse metric at the point as a bilinear form on covectors.
FormPtr cotangent_form(const MetricJet& mj);

// S_ij = -1/4 R_klij dx^k dx^l in the Clifford algebra at the point; entry i*n+j.
std::vector<Multivector> curvature_two_form(const CurvatureData& curv, const MetricJet& mj);

// [S_ij, dx^k] - R_l^k_ij dx^l over all i, j, k.
double curvature_two_form_residual(const CurvatureData& curv, const MetricJet& mj);

}  // namespace superdirac
