#pragma once

#include <functional>
#include <map>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "superdirac/clifford.hpp"
#include "superdirac/forms.hpp"

namespace superdirac {

// Z2-graded Clifford module of rank m over an n-dimensional chart.
struct ModuleSpec {
  std::string name;
  int n = 0;
  int m = 0;
  CMat grading;
  // gamma^i = c(dx^i) as matrix jets at the metric's point.
  std::function<std::vector<CMatJet>(const MetricJet&)> gammas;
};

// Exterior module with c = epsilon - iota and degree-parity grading.
ModuleSpec forms_module(int n);
// module (x) C^k with grading eta_module (x) diag(signs).
ModuleSpec twisted_module(const ModuleSpec& base, const std::vector<int>& twist_signs);

struct SectionJet {
  Point x;
  CVecJet v;
};

SectionJet random_section(const Point& x, int m, std::mt19937_64& rng, int order = kMaxJetOrder);
SectionJet scale(const CJet& f, const SectionJet& s);

// Matrix-valued polynomial sum_t M_t x^{a_t}.
struct MatrixPolynomial {
  int n = 0;
  int m = 0;
  std::vector<std::pair<CMat, std::vector<int>>> terms;

  CMatJet evaluate(std::span<const RJet> x) const;
  CMat value(const Point& x) const;
};

// Sum over sorted blades I of dx^I (x) omega_I; degree-1 parts form the connection.
struct SuperconnectionData {
  int n = 0;
  int m = 0;
  CMat grading;
  std::map<Blade, MatrixPolynomial> omega;

  std::vector<int> degrees() const;
  CMatJet component(Blade b, std::span<const RJet> x) const;
};

// Presets: "zero", "constant", "linear", "random"; parity (p+1) mod 2 on degree p.
SuperconnectionData make_superconnection(int n, const CMat& grading, const std::vector<int>& degrees,
                                         const std::string& preset, std::uint64_t seed);
SuperconnectionData superconnection_from_config_text(const std::string& json_text, const ModuleSpec& module);

struct DiracOperatorData {
  Point x;
  int n = 0;
  int m = 0;
  std::vector<CMatJet> gamma;
  std::vector<CMatJet> A;
  CMatJet Z;
};

// Clifford module relations and parity of every component are checked.
DiracOperatorData quantize_superconnection(const SuperconnectionData& S, const ModuleSpec& module, const MetricJet& mj);
// A first-order operator gamma^i (d_i + A_i) + Z from explicit coefficients.
DiracOperatorData dirac_from_connection(const std::vector<CMatJet>& gamma, const std::vector<CMatJet>& A,
                                        const CMatJet& Z, const Point& x);

SectionJet apply_dirac(const DiracOperatorData& D, const SectionJet& psi);
// D^2 psi from the coefficient 1-jets, without composing jets.
CVec dirac_square(const DiracOperatorData& D, const SectionJet& psi);

// Generalized Laplacian known by its action on section 2-jets at any point.
struct LaplacianData {
  int n = 0;
  int m = 0;
  std::function<CVec(const Point& y, const SectionJet& psi)> apply;
};

// max over k, l of |[[H, x^k], x^l] psi + 2 g^{kl} psi|.
double laplacian_test_residual(const LaplacianData& H, const MetricJet& mj, const SectionJet& psi);

struct LaplacianDecomposition {
  std::vector<CMatJet> A;  // order 1; derivatives from a five-point stencil
  CMat F;
};

LaplacianDecomposition laplacian_decompose(const LaplacianData& H, const Chart& chart, const Point& x);

// -g^{ij}(nabla_i nabla_j - Gamma^k_ij nabla_k) with nabla = d + A.
CVec canonical_laplacian(const std::vector<CMatJet>& A, const MetricJet& mj, const Christoffel& gamma,
                         const SectionJet& psi);
// The same operator as -iota o nabla o nabla on bundle-valued forms.
CVec canonical_laplacian_trace(const std::vector<CMatJet>& A, const MetricJet& mj, const Christoffel& gamma,
                               const SectionJet& psi);

// F_ij = d_i A_j - d_j A_i + [A_i, A_j]; entry i*n+j.
std::vector<CMat> connection_curvature(const std::vector<CMatJet>& A);
// d_i gamma^k + [A_i, gamma^k] + Gamma^k_ij gamma^j.
double clifford_connection_residual(const std::vector<CMatJet>& gamma, const std::vector<CMatJet>& A,
                                    const Christoffel& G);

struct KernelProjector {
  CMat b;  // E -> T*M (x) E
  CMat c;  // T*M (x) E -> E
  CMat p;  // b o c
};

KernelProjector kernel_projector(const std::vector<CMat>& gamma, const Eigen::MatrixXd& g);

// F^tw_ij = F^E_ij - c(S_ij) with c(S_ij) = -1/4 R_klij gamma^k gamma^l.
std::vector<CMat> twisting_curvature(const std::vector<CMat>& FE, const CurvatureData& curv,
                                     const std::vector<CMat>& gamma);
// Largest commutator of a twisting curvature with the gammas.
double twisting_commutator_residual(const std::vector<CMat>& Ftw, const std::vector<CMat>& gamma);

// Bundle-valued form at a point: one vector jet per blade.
struct BundleFormJet {
  Point x;
  int n = 0;
  int m = 0;
  std::vector<CVecJet> c;

  static BundleFormJet zero(const Point& x, int m, int order = kMaxJetOrder);
  static BundleFormJet random(const Point& x, int m, std::mt19937_64& rng, int order = kMaxJetOrder);
  int order() const;
  BundleFormJet& operator+=(const BundleFormJet& o);
  BundleFormJet& operator-=(const BundleFormJet& o);
};

double bundle_form_distance(const BundleFormJet& a, const BundleFormJet& b);

// Even-form-valued endomorphism at a point, value only.
using FormEndomorphism = std::map<Blade, CMat>;

BundleFormJet apply_superconnection(const SuperconnectionData& S, const BundleFormJet& psi);
// Algebraic curvature: sum dx^k ^ dx^I (x) d_k omega_I + A.A in the graded tensor product.
FormEndomorphism superconnection_curvature(const SuperconnectionData& S, const Point& x);
// Multiplication by a form-valued endomorphism whose blade K part has parity |K| + total.
BundleFormJet apply_form_endomorphism(const FormEndomorphism& F, int total_parity, const BundleFormJet& psi);
BundleFormJet apply_interior(const VectorJet& X, const BundleFormJet& psi);
BundleFormJet scale(const CJet& f, const BundleFormJet& psi);

struct SpecialResult {
  bool special = true;
  double residual = 0.0;
};

// Vanishing of all components of degree >= 2 at the sample points.
SpecialResult is_special_superconnection(const SuperconnectionData& S, const std::vector<Point>& points);
// [[IDD, iota(X)], iota(Y)] - iota([X, Y]) applied to psi.
double special_commutator_residual(const SuperconnectionData& S, const VectorJet& X, const VectorJet& Y,
                                   const BundleFormJet& psi);

// [q(du), q(v)] - [q(u), q(dv)] + 2 q(df) with f = (u, v), as a symbol at the point.
// It equals 2(nabla_{v#} u + nabla_{u#} v), so it is a residual to report, not an identity.
Multivector quantized_bracket_defect(const MetricJet& mj, const FormJet& u, const FormJet& v);

}  // namespace superdirac
