#include "superdirac/forms.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <numeric>

namespace superdirac {

namespace {

struct DeltaPairing {
  double operator()(int i, int j) const { return i == j ? 1.0 : 0.0; }
};

struct MetricPairing {
  const MetricJet* mj;
  const RJet& operator()(int i, int j) const { return mj->inverse(i, j); }
};

void require_same(const FormJet& a, const FormJet& b) {
  if (a.n != b.n || a.c.size() != b.c.size()) throw DimensionError("form dimension mismatch");
  if (a.x != b.x) throw DomainError("forms live at different points");
}

void require_point(const MetricJet& mj, const FormJet& a) {
  if (mj.n != a.n) throw DimensionError("form and metric dimensions differ");
  if (mj.x != a.x) throw DomainError("form and metric live at different points");
}

CJet conj(const CJet& a) {
  return a.map([](const cplx& v) { return std::conj(v); });
}

// Determinant of the minor of the inverse metric on the given rows and columns.
RJet inverse_minor(const MetricJet& mj, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  RJet s = RJet::constant(mj.n, 0.0);
  if (k == 0) return RJet::constant(mj.n, 1.0);
  std::vector<int> p(k);
  std::iota(p.begin(), p.end(), 0);
  do {
    int sign = 1;
    for (int a = 0; a < k; ++a)
      for (int b = a + 1; b < k; ++b)
        if (p[a] > p[b]) sign = -sign;
    RJet t = mj.inverse(rows[0], cols[p[0]]);
    for (int a = 1; a < k; ++a) t = t * mj.inverse(rows[a], cols[p[a]]);
    if (sign > 0)
      s += t;
    else
      s -= t;
  } while (std::next_permutation(p.begin(), p.end()));
  return s;
}

double inverse_minor_value(const Eigen::MatrixXd& gi, const std::vector<int>& rows, const std::vector<int>& cols) {
  const int k = static_cast<int>(rows.size());
  if (k == 0) return 1.0;
  Eigen::MatrixXd m(k, k);
  for (int a = 0; a < k; ++a)
    for (int b = 0; b < k; ++b) m(a, b) = gi(rows[a], cols[b]);
  return m.determinant();
}

int negative_directions(const MetricJet& mj) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(mj.metric_value());
  int q = 0;
  for (int i = 0; i < mj.n; ++i) q += es.eigenvalues()[i] < 0;
  return q;
}

}  // namespace

FormJet FormJet::zero(const Point& x, int order) {
  FormJet f;
  f.x = x;
  f.n = static_cast<int>(x.size());
  f.c.assign(size_t(1) << f.n, CJet(f.n, order, cplx(0)));
  return f;
}

int FormJet::order() const {
  int o = kMaxJetOrder;
  for (const auto& v : c) o = std::min(o, v.order());
  return o;
}

FormJet FormJet::grade(int k) const {
  FormJet r = zero(x, order());
  for (Blade b = 0; b < c.size(); ++b)
    if (blade_grade(b) == k) r.c[b] = c[b];
  return r;
}

FormJet FormJet::truncated(int order) const {
  FormJet r = *this;
  for (auto& v : r.c) v = v.truncated(order);
  return r;
}

FormJet& FormJet::operator+=(const FormJet& o) {
  require_same(*this, o);
  for (size_t k = 0; k < c.size(); ++k) c[k] += o.c[k];
  return *this;
}

FormJet& FormJet::operator-=(const FormJet& o) {
  require_same(*this, o);
  for (size_t k = 0; k < c.size(); ++k) c[k] -= o.c[k];
  return *this;
}

FormJet& FormJet::operator*=(cplx s) {
  for (auto& v : c) v *= s;
  return *this;
}

FormJet operator+(FormJet a, const FormJet& b) { return a += b; }
FormJet operator-(FormJet a, const FormJet& b) { return a -= b; }
FormJet operator*(cplx s, FormJet a) { return a *= s; }

FormJet operator*(const CJet& f, const FormJet& a) {
  FormJet r = a;
  for (auto& v : r.c) v = f * v;
  return r;
}

double form_distance(const FormJet& a, const FormJet& b) {
  require_same(a, b);
  double m = 0;
  for (size_t k = 0; k < a.c.size(); ++k) m = std::max(m, jet_distance(a.c[k], b.c[k]));
  return m;
}

double form_norm(const FormJet& a) { return form_distance(a, FormJet::zero(a.x, a.order())); }

Polynomial::Polynomial(int n, std::vector<Term> terms) : n_(n), terms_(std::move(terms)) {
  for (const auto& t : terms_)
    if (static_cast<int>(t.powers.size()) != n_) throw DimensionError("polynomial term has the wrong arity");
}

Polynomial Polynomial::random(int n, int max_degree, int terms, std::mt19937_64& rng, bool real) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::uniform_int_distribution<int> var(0, n - 1), deg(0, max_degree);
  std::vector<Term> ts;
  for (int t = 0; t < terms; ++t) {
    Term term{cplx(u(rng), real ? 0.0 : u(rng)), std::vector<int>(n, 0)};
    const int d = deg(rng);
    for (int k = 0; k < d; ++k) ++term.powers[var(rng)];
    ts.push_back(std::move(term));
  }
  return Polynomial(n, std::move(ts));
}

CJet Polynomial::evaluate(std::span<const RJet> x) const {
  const int n = static_cast<int>(x.size());
  if (n != n_) throw DimensionError("polynomial evaluated with the wrong number of coordinates");
  const int order = n ? x[0].order() : kMaxJetOrder;
  CJet s(n, order, cplx(0));
  for (const auto& t : terms_) {
    RJet m = RJet::constant(n, 1.0, order);
    for (int k = 0; k < n; ++k)
      for (int p = 0; p < t.powers[k]; ++p) m = m * x[k];
    s += to_complex(m) * t.coeff;
  }
  return s;
}

RJet Polynomial::evaluate_real(std::span<const RJet> x) const {
  return evaluate(x).map([](const cplx& v) { return v.real(); });
}

cplx Polynomial::value(const Point& x) const {
  cplx s = 0;
  for (const auto& t : terms_) {
    cplx m = t.coeff;
    for (int k = 0; k < n_; ++k)
      for (int p = 0; p < t.powers[k]; ++p) m *= x[k];
    s += m;
  }
  return s;
}

Polynomial Polynomial::derivative(int k) const {
  std::vector<Term> ts;
  for (const auto& t : terms_) {
    if (t.powers[k] == 0) continue;
    Term d = t;
    d.coeff *= double(t.powers[k]);
    --d.powers[k];
    ts.push_back(std::move(d));
  }
  return Polynomial(n_, std::move(ts));
}

FormJet FormField::jet(const Point& x, int order) const {
  if (static_cast<int>(x.size()) != n) throw DimensionError("form field evaluated at a point of the wrong dimension");
  const auto xs = coordinate_jets(x, order);
  FormJet f = FormJet::zero(x, order);
  for (const auto& [b, fn] : c) f.c[b] = fn(xs);
  return f;
}

FormField FormField::polynomial(int n, const std::map<Blade, Polynomial>& coeffs) {
  FormField f;
  f.n = n;
  for (const auto& [b, p] : coeffs) f.c[b] = [p](std::span<const RJet> x) { return p.evaluate(x); };
  return f;
}

FormField FormField::random(int n, std::mt19937_64& rng, const std::vector<int>& degrees) {
  std::map<Blade, Polynomial> m;
  for (Blade b = 0; b < (1u << n); ++b)
    if (std::find(degrees.begin(), degrees.end(), blade_grade(b)) != degrees.end())
      m[b] = Polynomial::random(n, 4, 4, rng);
  return polynomial(n, m);
}

VectorJet VectorField::jet(const Point& x, int order) const {
  const auto xs = coordinate_jets(x, order);
  VectorJet r;
  for (const auto& p : a) r.push_back(p.evaluate_real(xs));
  return r;
}

VectorField VectorField::random(int n, std::mt19937_64& rng) {
  VectorField v;
  v.n = n;
  for (int i = 0; i < n; ++i) v.a.push_back(Polynomial::random(n, 3, 4, rng, true));
  return v;
}

VectorJet lie_bracket(const VectorJet& X, const VectorJet& Y) {
  const int n = static_cast<int>(X.size());
  VectorJet r;
  for (int i = 0; i < n; ++i) {
    RJet s = RJet::constant(X[0].dim(), 0.0);
    for (int k = 0; k < n; ++k) s += X[k] * Y[i].partial(k) - Y[k] * X[i].partial(k);
    r.push_back(s);
  }
  return r;
}

FormJet scalar_form(const Point& x, const CJet& f) {
  FormJet r = FormJet::zero(x, f.order());
  r.c[0] = f;
  return r;
}

FormJet one_form(const Point& x, const std::vector<CJet>& u) {
  FormJet r = FormJet::zero(x, u.front().order());
  for (size_t i = 0; i < u.size(); ++i) r.c[1u << i] = u[i];
  return r;
}

FormJet wedge(const FormJet& a, const FormJet& b) {
  require_same(a, b);
  FormJet r = FormJet::zero(a.x, std::min(a.order(), b.order()));
  for (Blade I = 0; I < a.c.size(); ++I)
    for (Blade J = 0; J < b.c.size(); ++J) {
      const int s = wedge_sign(I, J);
      if (!s) continue;
      CJet t = a.c[I] * b.c[J];
      if (s < 0) t *= -1.0;
      r.c[I | J] += t;
    }
  return r;
}

FormJet exterior_derivative(const FormJet& a) {
  if (a.order() < 1) throw OrderError("exterior derivative needs a form jet of order >= 1");
  FormJet r = FormJet::zero(a.x, a.order() - 1);
  for (Blade I = 0; I < a.c.size(); ++I)
    for (int i = 0; i < a.n; ++i) {
      if (I & (1u << i)) continue;
      CJet t = a.c[I].partial(i);
      if (bits_below(I, i) & 1) t *= -1.0;
      r.c[I | (1u << i)] += t;
    }
  return r;
}

FormJet interior(const VectorJet& X, const FormJet& a) {
  if (static_cast<int>(X.size()) != a.n) throw DimensionError("vector field and form dimensions differ");
  FormJet r = FormJet::zero(a.x);
  for (int i = 0; i < a.n; ++i) {
    const auto t = iota_generator(i, a.c, DeltaPairing{});
    for (size_t k = 0; k < t.size(); ++k) r.c[k] += X[i] * t[k];
  }
  return r;
}

FormJet interior_covector(const MetricJet& mj, const FormJet& u, const FormJet& a) {
  require_point(mj, a);
  require_same(u, a);
  FormJet r = FormJet::zero(a.x);
  for (int i = 0; i < a.n; ++i) {
    const auto t = iota_generator(i, a.c, MetricPairing{&mj});
    for (size_t k = 0; k < t.size(); ++k) r.c[k] += u.c[1u << i] * t[k];
  }
  return r;
}

FormJet epsilon(const FormJet& v, const FormJet& a) {
  require_same(v, a);
  FormJet r = FormJet::zero(a.x);
  for (int i = 0; i < a.n; ++i) {
    const auto t = epsilon_generator(i, a.c);
    for (size_t k = 0; k < t.size(); ++k) r.c[k] += v.c[1u << i] * t[k];
  }
  return r;
}

FormJet lie_derivative(const VectorJet& X, const FormJet& a) {
  return exterior_derivative(interior(X, a)) + interior(X, exterior_derivative(a));
}

FormJet differential(const Point& x, const CJet& f) {
  std::vector<CJet> u;
  for (int i = 0; i < static_cast<int>(x.size()); ++i) u.push_back(f.partial(i));
  return one_form(x, u);
}

std::vector<FormJet> covariant_derivative(const Christoffel& G, const FormJet& a) {
  const int n = a.n;
  if (G.n != n) throw DimensionError("connection and form dimensions differ");
  std::vector<FormJet> out;
  for (int i = 0; i < n; ++i) {
    FormJet r = FormJet::zero(a.x);
    for (Blade I = 0; I < a.c.size(); ++I) {
      r.c[I] += a.c[I].partial(i);
      int pos = 0;
      for (Blade t = I; t; t &= t - 1, ++pos) {
        const int j = std::countr_zero(t);
        const Blade rest = I & ~(1u << j);
        for (int k = 0; k < n; ++k) {
          const int s = wedge_sign(1u << k, rest);
          if (!s) continue;
          CJet term = G(j, i, k) * a.c[I];
          term *= -double(s) * ((pos & 1) ? -1.0 : 1.0);
          r.c[rest | (1u << k)] += term;
        }
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

FormJet volume_form(const MetricJet& mj, int orientation) {
  FormJet r = FormJet::zero(mj.x, mj.sqrt_abs_det.order());
  r.c.back() = to_complex(mj.sqrt_abs_det) * double(orientation >= 0 ? 1 : -1);
  return r;
}

FormJet hodge_star(const MetricJet& mj, const FormJet& a, int orientation) {
  require_point(mj, a);
  const int n = a.n;
  const Blade full = (1u << n) - 1;
  FormJet r = FormJet::zero(a.x);
  const double o = orientation >= 0 ? 1.0 : -1.0;
  for (Blade I = 0; I <= full; ++I) {
    const CJet ca = conj(a.c[I]);
    const auto rows = blade_indices(I);
    for (Blade J = 0; J <= full; ++J) {
      if (blade_grade(J) != n - blade_grade(I)) continue;
      const Blade Jc = full & ~J;
      const RJet m = inverse_minor(mj, rows, blade_indices(Jc)) * mj.sqrt_abs_det;
      r.c[J] += (m * ca) * (o * wedge_sign(Jc, J));
    }
  }
  return r;
}

cplx form_inner(const MetricJet& mj, const FormJet& a, const FormJet& b) {
  require_point(mj, a);
  require_same(a, b);
  const Eigen::MatrixXd gi = mj.inverse_value();
  cplx s = 0;
  for (Blade I = 0; I < a.c.size(); ++I) {
    if (a.c[I].value() == cplx(0)) continue;
    const auto rows = blade_indices(I);
    for (Blade J = 0; J < b.c.size(); ++J)
      if (blade_grade(I) == blade_grade(J))
        s += std::conj(a.c[I].value()) * b.c[J].value() * inverse_minor_value(gi, rows, blade_indices(J));
  }
  return s;
}

FormJet coderivative_hodge(const MetricJet& mj, const FormJet& a) {
  require_point(mj, a);
  const int n = a.n;
  // sign(det g) enters in indefinite signature.
  const double s = mj.det.value() < 0 ? -1.0 : 1.0;
  FormJet r = FormJet::zero(a.x);
  for (int p = 0; p <= n; ++p) {
    const FormJet ap = a.grade(p);
    FormJet t = hodge_star(mj, exterior_derivative(hodge_star(mj, ap)));
    r += s * double(((n * (p + 1) + 1) & 1) ? -1 : 1) * t;
  }
  return r;
}

FormJet coderivative_connection(const MetricJet& mj, const Christoffel& G, const FormJet& a) {
  require_point(mj, a);
  const auto nab = covariant_derivative(G, a);
  FormJet r = FormJet::zero(a.x);
  for (int i = 0; i < a.n; ++i) {
    const auto t = iota_generator(i, nab[i].c, MetricPairing{&mj});
    for (size_t k = 0; k < t.size(); ++k) r.c[k] -= t[k];
  }
  return r;
}

FormJet forms_dirac(const MetricJet& mj, const Christoffel& G, const FormJet& a) {
  require_point(mj, a);
  const auto nab = covariant_derivative(G, a);
  FormJet r = FormJet::zero(a.x);
  for (int i = 0; i < a.n; ++i) {
    const auto t = clifford_generator(i, nab[i].c, MetricPairing{&mj});
    for (size_t k = 0; k < t.size(); ++k) r.c[k] += t[k];
  }
  return r;
}

FormJet clifford_generator_action(const MetricJet& mj, int i, const FormJet& a) {
  require_point(mj, a);
  FormJet r = a;
  r.c = clifford_generator(i, a.c, MetricPairing{&mj});
  return r;
}

FormJet forms_chirality(const MetricJet& mj, const FormJet& a, int orientation) {
  require_point(mj, a);
  const int n = a.n;
  if (n % 2) throw DimensionError("chirality needs an even dimension");
  static const cplx powers[4] = {1.0, cplx(0, 1), -1.0, cplx(0, -1)};
  const cplx phase = powers[(n / 2 + negative_directions(mj)) % 4] * double(orientation >= 0 ? 1 : -1);
  FormJet r = a;
  r.c = quantized_blade_apply((1u << n) - 1, a.c, MetricPairing{&mj});
  const CJet vol = to_complex(mj.sqrt_abs_det) * phase;
  for (auto& v : r.c) v = vol * v;
  return r;
}

CJet laplace_beltrami(const MetricJet& mj, const Christoffel& G, const CJet& f) {
  const int n = mj.n;
  if (f.order() < 2) throw OrderError("Laplace-Beltrami needs a 2-jet");
  CJet s(n, 0, cplx(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CJet h = f.partial(i).partial(j);
      for (int k = 0; k < n; ++k) h -= G(k, i, j) * f.partial(k);
      s -= mj.inverse(i, j) * h;
    }
  return s;
}

}  // namespace superdirac
