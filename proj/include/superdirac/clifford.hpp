#pragma once

#include <Eigen/Dense>
#include <memory>
#include <vector>

#include "superdirac/blade.hpp"

namespace superdirac {

// Symmetric real bilinear form on the cotangent space at a point.
class BilinearForm {
 public:
  explicit BilinearForm(Eigen::MatrixXd b);

  static std::shared_ptr<const BilinearForm> make(Eigen::MatrixXd b);

  int dim() const { return static_cast<int>(b_.rows()); }
  const Eigen::MatrixXd& matrix() const { return b_; }
  double operator()(int i, int j) const { return b_(i, j); }

  // Count of negative eigenvalues; throws on a degenerate form.
  int negative_count() const;
  bool degenerate(double tol = 1e-12) const;

 private:
  Eigen::MatrixXd b_;
};

using FormPtr = std::shared_ptr<const BilinearForm>;

enum class AlgebraTag { Exterior, Clifford };

// Dense element of the exterior or Clifford algebra; both share the blade basis.
class Multivector {
 public:
  Multivector(FormPtr form, AlgebraTag tag);
  Multivector(FormPtr form, AlgebraTag tag, CVec coeffs);

  static Multivector scalar(FormPtr form, AlgebraTag tag, cplx s);
  static Multivector generator(FormPtr form, AlgebraTag tag, int i);
  static Multivector one_form(FormPtr form, AlgebraTag tag, const CVec& u);

  int dim() const { return form_->dim(); }
  AlgebraTag tag() const { return tag_; }
  const FormPtr& form() const { return form_; }
  const CVec& coeffs() const { return c_; }
  CVec& coeffs() { return c_; }
  cplx operator[](Blade b) const { return c_[b]; }
  cplx& operator[](Blade b) { return c_[b]; }

  Multivector grade(int k) const;
  bool homogeneous_of_degree(int k, double tol = 0.0) const;
  int parity() const;  // 0 even, 1 odd, -1 mixed

  Multivector& operator+=(const Multivector& o);
  Multivector& operator-=(const Multivector& o);
  Multivector& operator*=(cplx s);

 private:
  FormPtr form_;
  AlgebraTag tag_;
  CVec c_;
};

Multivector operator+(Multivector a, const Multivector& b);
Multivector operator-(Multivector a, const Multivector& b);
Multivector operator*(cplx s, Multivector a);

double distance(const Multivector& a, const Multivector& b);

Multivector wedge(const Multivector& a, const Multivector& b);
Multivector epsilon(const Multivector& v, const Multivector& a);
Multivector iota(const Multivector& v, const Multivector& a);
// c(v) = epsilon(v) - iota(v) for a 1-form v; general Clifford elements act through symbols.
Multivector clifford_action(const Multivector& v, const Multivector& a);
Multivector clifford_product(const Multivector& a, const Multivector& b);
Multivector quantize(const Multivector& a);
Multivector symbol(const Multivector& a);

// Graded commutator [a, b] = ab - (-1)^{|a||b|} ba for homogeneous parities.
Multivector supercommutator(const Multivector& a, const Multivector& b);

// Chirality element i^{n/2+q} e^1...e^n for an oriented B-orthonormal coframe,
// q the number of negative directions; squares to one.
Multivector chirality(const FormPtr& form, int orientation = 1);

// Operators on the 2^n-dimensional exterior module.
CMat epsilon_matrix(int n, int i);
CMat iota_matrix(int n, int i, const Eigen::MatrixXd& pairing);
CMat clifford_matrix(int n, int i, const Eigen::MatrixXd& pairing);
CMat quantized_blade_matrix(int n, Blade I, const Eigen::MatrixXd& pairing);
CMat degree_parity_matrix(int n);

}  // namespace superdirac
