#pragma once

#include <functional>
#include <map>
#include <random>
#include <span>
#include <vector>

#include "superdirac/blade.hpp"
#include "superdirac/geometry.hpp"

namespace superdirac {

// Differential form at a point: one complex jet per blade.
struct FormJet {
  Point x;
  int n = 0;
  std::vector<CJet> c;

  static FormJet zero(const Point& x, int order = kMaxJetOrder);
  int order() const;
  CJet& operator[](Blade b) { return c[b]; }
  const CJet& operator[](Blade b) const { return c[b]; }
  FormJet grade(int k) const;
  FormJet truncated(int order) const;
  FormJet& operator+=(const FormJet& o);
  FormJet& operator-=(const FormJet& o);
  FormJet& operator*=(cplx s);
};

FormJet operator+(FormJet a, const FormJet& b);
FormJet operator-(FormJet a, const FormJet& b);
FormJet operator*(cplx s, FormJet a);
FormJet operator*(const CJet& f, const FormJet& a);

// Largest coefficient gap over the orders both carry.
double form_distance(const FormJet& a, const FormJet& b);
double form_norm(const FormJet& a);

using VectorJet = std::vector<RJet>;
using ScalarField = std::function<CJet(std::span<const RJet>)>;

// Polynomial with complex coefficients in chart coordinates.
class Polynomial {
 public:
  struct Term {
    cplx coeff;
    std::vector<int> powers;
  };

  Polynomial() = default;
  Polynomial(int n, std::vector<Term> terms);
  static Polynomial random(int n, int max_degree, int terms, std::mt19937_64& rng, bool real = false);

  int dim() const { return n_; }
  const std::vector<Term>& terms() const { return terms_; }
  CJet evaluate(std::span<const RJet> x) const;
  RJet evaluate_real(std::span<const RJet> x) const;
  cplx value(const Point& x) const;
  Polynomial derivative(int k) const;

 private:
  int n_ = 0;
  std::vector<Term> terms_;
};

// Form field given by per-blade scalar fields; absent blades vanish.
struct FormField {
  int n = 0;
  std::map<Blade, ScalarField> c;

  FormJet jet(const Point& x, int order = kMaxJetOrder) const;
  static FormField polynomial(int n, const std::map<Blade, Polynomial>& coeffs);
  // Random polynomial coefficients of total degree <= 4 on the given degrees.
  static FormField random(int n, std::mt19937_64& rng, const std::vector<int>& degrees);
};

struct VectorField {
  int n = 0;
  std::vector<Polynomial> a;

  VectorJet jet(const Point& x, int order = kMaxJetOrder) const;
  static VectorField random(int n, std::mt19937_64& rng);
};

VectorJet lie_bracket(const VectorJet& X, const VectorJet& Y);

FormJet scalar_form(const Point& x, const CJet& f);
FormJet one_form(const Point& x, const std::vector<CJet>& u);
FormJet wedge(const FormJet& a, const FormJet& b);
FormJet exterior_derivative(const FormJet& a);
// iota(X) with the pairing <d_i, dx^j> = delta.
FormJet interior(const VectorJet& X, const FormJet& a);
// iota(u) for a 1-form u, paired through the inverse metric.
FormJet interior_covector(const MetricJet& mj, const FormJet& u, const FormJet& a);
FormJet epsilon(const FormJet& v, const FormJet& a);
FormJet lie_derivative(const VectorJet& X, const FormJet& a);
// df for a scalar jet.
FormJet differential(const Point& x, const CJet& f);

// nabla_{d_i} a for each i, with nabla_i dx^j = -Gamma^j_ik dx^k.
std::vector<FormJet> covariant_derivative(const Christoffel& gamma, const FormJet& a);

FormJet volume_form(const MetricJet& mj, int orientation = 1);
// Antilinear star with *1 = volume form.
FormJet hodge_star(const MetricJet& mj, const FormJet& a, int orientation = 1);
// Pointwise sesquilinear inner product, antilinear in the first slot.
cplx form_inner(const MetricJet& mj, const FormJet& a, const FormJet& b);

// (-1)^(n(p+1)+1) sign(det g) * d * on each degree p.
FormJet coderivative_hodge(const MetricJet& mj, const FormJet& a);
FormJet coderivative_connection(const MetricJet& mj, const Christoffel& gamma, const FormJet& a);
// c o nabla with c(dx^i) = epsilon(dx^i) - iota(dx^i).
FormJet forms_dirac(const MetricJet& mj, const Christoffel& gamma, const FormJet& a);
// Clifford chirality c(Gamma) on forms, even dimensions only.
FormJet forms_chirality(const MetricJet& mj, const FormJet& a, int orientation = 1);
// Left Clifford action of c(dx^i) on forms.
FormJet clifford_generator_action(const MetricJet& mj, int i, const FormJet& a);

// -g^{ij}(d_i d_j f - Gamma^k_ij d_k f).
CJet laplace_beltrami(const MetricJet& mj, const Christoffel& gamma, const CJet& f);

}  // namespace superdirac
