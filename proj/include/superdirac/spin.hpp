#pragma once

#include <functional>
#include <span>
#include <vector>

#include "superdirac/bundle.hpp"

namespace superdirac {

// Orthonormal frame at a point with second-order jets.
// theta(i, k) = <d_k, e^i>, so e^i = theta(i, k) dx^k; E(i, k) = <e_i, dx^k>.
struct FrameField {
  Point x;
  int n = 0;
  std::vector<RJet> coframe;
  std::vector<RJet> frame;
  std::vector<int> signs;  // (e^i, e^i)

  const RJet& theta(int i, int k) const { return coframe[i * n + k]; }
  const RJet& E(int i, int k) const { return frame[i * n + k]; }
};

// Closed form on conformal charts, identity on constant metrics, Cholesky otherwise.
// Indefinite charts are supported only when the metric is constant.
FrameField build_frame(const Chart& chart, const Point& x);

struct FrameResidual {
  double orthonormality = 0;
  double duality = 0;
  double reconstruction = 0;
  double max() const;
};

FrameResidual frame_residual(const FrameField& f, const MetricJet& mj);

// Spinor module from the polarization C^n = V + V*, S = exterior algebra of V.
struct SpinModule {
  int n = 0;
  int m = 0;
  int negative = 0;
  std::vector<CMat> Gamma;  // orthonormal generators, Gamma_i^2 = -(e^i, e^i)
  CMat chirality;

  // c(dx^k) = sum_i E(i, k) Gamma_i as matrix jets.
  std::vector<CMatJet> coordinate_gammas(const FrameField& f) const;
};

SpinModule spin_module(int n, int negative = 0);
// Spinor bundle over a chart as a graded Clifford module, grading by chirality.
ModuleSpec spinor_module(const Chart& chart);

// Purely imaginary U(1) potential A_l as scalar jets.
using U1Potential = std::function<std::vector<CJet>(std::span<const RJet>)>;
U1Potential zero_potential(int n);
// A_l = i (b_l + sum_k a_lk sin(x^k + phi_lk)) with coefficients drawn from the seed.
U1Potential random_potential(int n, std::uint64_t seed);

struct SpinConnectionData {
  Point x;
  int n = 0;
  FrameField frame;
  std::vector<RJet> omega;  // omega(j, k, l) = (e_j, nabla_{d_l} e_k)
  std::vector<CJet> A;
  std::vector<CMatJet> connection;  // 1/2 A_l - 1/4 omega_{jk,l} Gamma_j Gamma_k

  const RJet& w(int j, int k, int l) const { return omega[(j * n + k) * n + l]; }
};

SpinConnectionData spin_connection(const Chart& chart, const SpinModule& sm, const Point& x, const U1Potential& A);

// max |omega_{jk} + omega_{kj}|.
double omega_antisymmetry_residual(const SpinConnectionData& sc);
// (e_j, nabla_{e_i} e_k) at entry (i * n + j) * n + k.
std::vector<double> frame_connection_coefficients(const SpinConnectionData& sc);

// c(e^i) nabla^S_{e_i} as generic Dirac data.
DiracOperatorData spin_dirac_operator(const SpinConnectionData& sc, const SpinModule& sm);
CVec spin_dirac(const SpinConnectionData& sc, const SpinModule& sm, const SectionJet& psi);

struct AlphaForm {
  std::vector<double> alpha1;  // frame components of alpha_1
  std::vector<double> alpha3;  // antisymmetric frame components, entry (i * n + j) * n + k
};

AlphaForm alpha_form(const SpinConnectionData& sc);
// d-slash + A-slash / 2 - q(alpha) / 4.
CVec spin_dirac_alpha(const SpinConnectionData& sc, const SpinModule& sm, const SectionJet& psi);

// Lambda (d-slash + A-slash / 2) Lambda^{-1} with Lambda^2 = lambda^{n-1}.
CVec conformal_dirac(const Chart& chart, const SpinModule& sm, const U1Potential& A, const SectionJet& psi);

struct LichnerowiczTerms {
  CVec square;     // D_A^2 psi
  CVec laplacian;  // Delta^S psi
  CVec scalar;     // r / 4 psi
  CVec twisting;   // q(F) / 2 psi
  double residual = 0;
};

LichnerowiczTerms lichnerowicz(const Chart& chart, const SpinModule& sm, const SpinConnectionData& sc,
                               const SectionJet& psi);

struct ChiralityResidual {
  double square = 0;
  double anticommutator = 0;
  double parallel = 0;
  double max() const;
};

ChiralityResidual chirality_checks(const SpinModule& sm, const SpinConnectionData& sc);

}  // namespace superdirac
