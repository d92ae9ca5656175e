#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "superdirac/spin.hpp"

namespace superdirac {

// Seiberg-Witten sector on the flat torus R^4 / (2 pi Z)^4.

struct FourierMode {
  std::array<int, 4> k{};
  cplx c;
};

struct SWConfig {
  int grid = 16;
  int band = 2;
  int chirality = 1;  // +1 selects S+, -1 selects S- with reversed orientation
  // A_l = i a_l with a_l(x) = sum Re(c e^{i k.x}).
  std::array<std::vector<FourierMode>, 4> a;
  // Components of psi in the chosen chirality block: sum c e^{i k.x}.
  std::array<std::vector<FourierMode>, 2> psi;
};

SWConfig sw_config_from_text(const std::string& json_text);
SWConfig sw_config_from_file(const std::string& path);
// Every wave vector in the band box with random coefficients.
SWConfig sw_random_config(int band, int grid, std::uint64_t seed, int chirality = 1);
// Grid must exceed four times the band so every integrand is resolved exactly.
void sw_check_config(const SWConfig& cfg);

// Two-form on R^4 by pairs (0,1), (0,2), (0,3), (1,2), (1,3), (2,3).
using TwoForm = std::array<cplx, 6>;

int pair_index(int j, int k);
TwoForm hodge_star4(const TwoForm& f, int orientation = 1);
TwoForm self_dual_part(const TwoForm& f, int orientation = 1);
// sum over pairs of |f_jk|^2; equals -1/2 F^{ik} F_ik for imaginary F.
double two_form_norm2(const TwoForm& f);

// Right-hand side -1/4 <psi, Gamma_j Gamma_k psi> e^j ^ e^k with one term per pair j < k.
// Throws if psi is not in the chirality block for the orientation.
TwoForm sw_quadratic_form(const SpinModule& sm, const CVec& psi, int orientation = 1, double tol = 1e-12);

// Field data at one point of the torus.
struct SWPointData {
  CVec psi;                  // full spinor
  std::array<CVec, 4> dpsi;  // d_l psi
  CVec lap_psi;              // sum_l d_l d_l psi
  std::array<double, 4> a{};
  std::array<std::array<double, 4>, 4> da{};  // da[k][l] = d_k a_l
};

struct SWLocal {
  CVec dirac;   // D_A psi
  TwoForm F{};  // dA
  TwoForm F_plus{};
  TwoForm rhs{};
  double dirac_residual = 0;      // |D_A psi|
  double curvature_residual = 0;  // |F+ - rhs|
  double w1 = 0;                  // |D psi|^2 + |F+ + 1/4 <psi, c c psi>|^2
  double w2 = 0;                  // Re <psi, Delta psi> + |F+|^2 + |psi|^4 / 8
};

SWLocal sw_local(const SpinModule& sm, const SWPointData& p, int orientation);

// Direct mode sums at an arbitrary point.
SWPointData sw_evaluate(const SWConfig& cfg, const SpinModule& sm, const std::array<double, 4>& x);
// All grid points, by separable trigonometric sums; index ((i0 * N + i1) * N + i2) * N + i3.
std::vector<SWPointData> sw_evaluate_grid(const SWConfig& cfg, const SpinModule& sm);

struct SWResiduals {
  double dirac = 0;
  double curvature = 0;
};

SWResiduals sw_residuals(const SWConfig& cfg, const std::array<double, 4>& x);

struct SWFunctional {
  double w1 = 0;
  double w2 = 0;
  double gap = 0;  // |w1 - w2| / max(|w1|, |w2|), zero when both vanish
};

SWFunctional sw_functional(const SWConfig& cfg);

// Pairwise sum in a fixed order.
double pairwise_sum(const std::vector<double>& v);

}  // namespace superdirac
