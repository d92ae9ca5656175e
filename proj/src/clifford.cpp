#include "superdirac/clifford.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

namespace superdirac {

namespace {

std::vector<cplx> to_std(const CVec& v) { return {v.data(), v.data() + v.size()}; }

CVec to_eigen(const std::vector<cplx>& v) {
  CVec r(static_cast<Eigen::Index>(v.size()));
  for (size_t k = 0; k < v.size(); ++k) r[static_cast<Eigen::Index>(k)] = v[k];
  return r;
}

struct FormPairing {
  const Eigen::MatrixXd* b;
  double operator()(int i, int j) const { return (*b)(i, j); }
};

void require_same(const Multivector& a, const Multivector& b) {
  if (a.dim() != b.dim()) throw DimensionError("multivector dimension mismatch");
}

void require_tag(const Multivector& a, AlgebraTag t, const char* what) {
  if (a.tag() != t) throw DimensionError(std::string(what) + ": wrong algebra tag");
}

const CVec& one_form_coeffs(const Multivector& v, CVec& buf) {
  if (!v.homogeneous_of_degree(1)) throw DimensionError("argument is not a 1-form");
  const int n = v.dim();
  buf.resize(n);
  for (int i = 0; i < n; ++i) buf[i] = v[1u << i];
  return buf;
}

}  // namespace

BilinearForm::BilinearForm(Eigen::MatrixXd b) : b_(std::move(b)) {
  if (b_.rows() != b_.cols()) throw DimensionError("bilinear form must be square");
  if (b_.rows() < 1 || b_.rows() > 16) throw DimensionError("bilinear form dimension out of range");
  if ((b_ - b_.transpose()).cwiseAbs().maxCoeff() > 1e-12 * (1.0 + b_.cwiseAbs().maxCoeff()))
    throw DimensionError("bilinear form is not symmetric");
}

FormPtr BilinearForm::make(Eigen::MatrixXd b) { return std::make_shared<const BilinearForm>(std::move(b)); }

bool BilinearForm::degenerate(double tol) const {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b_);
  return es.eigenvalues().cwiseAbs().minCoeff() <= tol * (1.0 + b_.cwiseAbs().maxCoeff());
}

int BilinearForm::negative_count() const {
  if (degenerate()) throw DegenerateError("bilinear form is degenerate");
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(b_);
  int q = 0;
  for (int i = 0; i < dim(); ++i) q += es.eigenvalues()[i] < 0;
  return q;
}

Multivector::Multivector(FormPtr form, AlgebraTag tag)
    : form_(std::move(form)), tag_(tag), c_(CVec::Zero(Eigen::Index(1) << form_->dim())) {}

Multivector::Multivector(FormPtr form, AlgebraTag tag, CVec coeffs)
    : form_(std::move(form)), tag_(tag), c_(std::move(coeffs)) {
  if (c_.size() != (Eigen::Index(1) << form_->dim())) throw DimensionError("coefficient vector has wrong size");
}

Multivector Multivector::scalar(FormPtr form, AlgebraTag tag, cplx s) {
  Multivector m(std::move(form), tag);
  m.c_[0] = s;
  return m;
}

Multivector Multivector::generator(FormPtr form, AlgebraTag tag, int i) {
  if (i < 0 || i >= form->dim()) throw DimensionError("generator index out of range");
  Multivector m(std::move(form), tag);
  m.c_[Eigen::Index(1) << i] = 1.0;
  return m;
}

Multivector Multivector::one_form(FormPtr form, AlgebraTag tag, const CVec& u) {
  if (u.size() != form->dim()) throw DimensionError("1-form has wrong length");
  Multivector m(std::move(form), tag);
  for (int i = 0; i < u.size(); ++i) m.c_[Eigen::Index(1) << i] = u[i];
  return m;
}

Multivector Multivector::grade(int k) const {
  Multivector r(form_, tag_);
  for (Blade b = 0; b < c_.size(); ++b)
    if (blade_grade(b) == k) r.c_[b] = c_[b];
  return r;
}

bool Multivector::homogeneous_of_degree(int k, double tol) const {
  for (Blade b = 0; b < c_.size(); ++b)
    if (blade_grade(b) != k && std::abs(c_[b]) > tol) return false;
  return true;
}

int Multivector::parity() const {
  bool even = false, odd = false;
  for (Blade b = 0; b < c_.size(); ++b)
    if (c_[b] != cplx(0)) (blade_grade(b) & 1 ? odd : even) = true;
  if (even && odd) return -1;
  return odd ? 1 : 0;
}

Multivector& Multivector::operator+=(const Multivector& o) {
  require_same(*this, o);
  c_ += o.c_;
  return *this;
}

Multivector& Multivector::operator-=(const Multivector& o) {
  require_same(*this, o);
  c_ -= o.c_;
  return *this;
}

Multivector& Multivector::operator*=(cplx s) {
  c_ *= s;
  return *this;
}

Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
Multivector operator*(cplx s, Multivector a) { return a *= s; }

double distance(const Multivector& a, const Multivector& b) {
  require_same(a, b);
  return (a.coeffs() - b.coeffs()).cwiseAbs().maxCoeff();
}

Multivector wedge(const Multivector& a, const Multivector& b) {
  require_same(a, b);
  require_tag(a, AlgebraTag::Exterior, "wedge");
  require_tag(b, AlgebraTag::Exterior, "wedge");
  CVec r = CVec::Zero(a.coeffs().size());
  for (Blade i = 0; i < a.coeffs().size(); ++i) {
    if (a[i] == cplx(0)) continue;
    for (Blade j = 0; j < b.coeffs().size(); ++j) {
      const int s = wedge_sign(i, j);
      if (s) r[i | j] += double(s) * a[i] * b[j];
    }
  }
  return Multivector(a.form(), AlgebraTag::Exterior, std::move(r));
}

Multivector epsilon(const Multivector& v, const Multivector& a) {
  require_same(v, a);
  CVec u;
  one_form_coeffs(v, u);
  const std::vector<cplx> in = to_std(a.coeffs());
  std::vector<cplx> out(in.size(), cplx(0));
  for (int i = 0; i < v.dim(); ++i) {
    if (u[i] == cplx(0)) continue;
    const auto t = epsilon_generator(i, in);
    for (size_t k = 0; k < out.size(); ++k) out[k] += u[i] * t[k];
  }
  return Multivector(a.form(), a.tag(), to_eigen(out));
}

Multivector iota(const Multivector& v, const Multivector& a) {
  require_same(v, a);
  CVec u;
  one_form_coeffs(v, u);
  const std::vector<cplx> in = to_std(a.coeffs());
  std::vector<cplx> out(in.size(), cplx(0));
  const FormPairing pair{&a.form()->matrix()};
  for (int i = 0; i < v.dim(); ++i) {
    if (u[i] == cplx(0)) continue;
    const auto t = iota_generator(i, in, pair);
    for (size_t k = 0; k < out.size(); ++k) out[k] += u[i] * t[k];
  }
  return Multivector(a.form(), a.tag(), to_eigen(out));
}

Multivector clifford_action(const Multivector& v, const Multivector& a) {
  require_same(v, a);
  const std::vector<cplx> in = to_std(a.coeffs());
  std::vector<cplx> out(in.size(), cplx(0));
  const FormPairing pair{&a.form()->matrix()};
  for (Blade I = 0; I < v.coeffs().size(); ++I) {
    if (v[I] == cplx(0)) continue;
    const auto t = quantized_blade_apply(I, in, pair);
    for (size_t k = 0; k < out.size(); ++k) out[k] += v[I] * t[k];
  }
  return Multivector(a.form(), a.tag(), to_eigen(out));
}

Multivector clifford_product(const Multivector& a, const Multivector& b) {
  require_same(a, b);
  require_tag(a, AlgebraTag::Clifford, "clifford_product");
  require_tag(b, AlgebraTag::Clifford, "clifford_product");
  Multivector r = clifford_action(a, b);
  return r;
}

Multivector quantize(const Multivector& a) {
  require_tag(a, AlgebraTag::Exterior, "quantize");
  return Multivector(a.form(), AlgebraTag::Clifford, a.coeffs());
}

Multivector symbol(const Multivector& a) {
  require_tag(a, AlgebraTag::Clifford, "symbol");
  return Multivector(a.form(), AlgebraTag::Exterior, a.coeffs());
}

Multivector supercommutator(const Multivector& a, const Multivector& b) {
  const int pa = a.parity(), pb = b.parity();
  if (pa < 0 || pb < 0) throw ParityError("supercommutator needs homogeneous parity");
  Multivector r = clifford_product(a, b);
  Multivector s = clifford_product(b, a);
  if (pa && pb)
    r += s;
  else
    r -= s;
  return r;
}

Multivector chirality(const FormPtr& form, int orientation) {
  const int n = form->dim();
  if (n % 2) throw DimensionError("chirality needs an even dimension");
  const int q = form->negative_count();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(form->matrix());
  Eigen::MatrixXd frame(n, n);  // row a holds e^a in the dx basis
  for (int a = 0; a < n; ++a)
    frame.row(a) = es.eigenvectors().col(a).transpose() / std::sqrt(std::abs(es.eigenvalues()[a]));
  if (frame.determinant() < 0) frame.row(0) *= -1.0;
  Multivector g = Multivector::scalar(form, AlgebraTag::Clifford, 1.0);
  for (int a = 0; a < n; ++a)
    g = clifford_product(g, Multivector::one_form(form, AlgebraTag::Clifford, frame.row(a).transpose().cast<cplx>()));
  static const cplx powers[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  g *= powers[(n / 2 + q) % 4] * double(orientation >= 0 ? 1 : -1);
  return g;
}

CMat epsilon_matrix(int n, int i) {
  const Eigen::Index N = Eigen::Index(1) << n;
  CMat m = CMat::Zero(N, N);
  for (Blade I = 0; I < N; ++I)
    if (!(I & (1u << i))) m(I | (1u << i), I) = (bits_below(I, i) & 1) ? -1.0 : 1.0;
  return m;
}

CMat iota_matrix(int n, int i, const Eigen::MatrixXd& pairing) {
  const Eigen::Index N = Eigen::Index(1) << n;
  CMat m = CMat::Zero(N, N);
  for (Blade I = 1; I < N; ++I) {
    int r = 0;
    for (Blade t = I; t; t &= t - 1, ++r) {
      const int j = std::countr_zero(t);
      m(I & ~(1u << j), I) += (r & 1 ? -1.0 : 1.0) * pairing(i, j);
    }
  }
  return m;
}

CMat clifford_matrix(int n, int i, const Eigen::MatrixXd& pairing) {
  return epsilon_matrix(n, i) - iota_matrix(n, i, pairing);
}

CMat quantized_blade_matrix(int n, Blade I, const Eigen::MatrixXd& pairing) {
  const Eigen::Index N = Eigen::Index(1) << n;
  CMat m(N, N);
  const FormPairing pair{&pairing};
  for (Blade J = 0; J < N; ++J) {
    std::vector<cplx> e(N, cplx(0));
    e[J] = 1.0;
    m.col(J) = to_eigen(quantized_blade_apply(I, e, pair));
  }
  return m;
}

CMat degree_parity_matrix(int n) {
  const Eigen::Index N = Eigen::Index(1) << n;
  CMat m = CMat::Zero(N, N);
  for (Blade I = 0; I < N; ++I) m(I, I) = (blade_grade(I) & 1) ? -1.0 : 1.0;
  return m;
}

}  // namespace superdirac
