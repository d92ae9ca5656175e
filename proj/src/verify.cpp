#include "superdirac/verify.hpp"

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>

#include "json.hpp"

namespace superdirac {

namespace {

// Largest residual seen by one check.
struct Acc {
  double max = 0.0;
  bool finite = true;
  void add(double r) {
    if (!std::isfinite(r)) finite = false;
    else max = std::max(max, r);
  }
};

class Runner {
 public:
  explicit Runner(bool timing) : timing_(timing) {}

  template <class F>
  void check(const std::string& id, const std::string& anchor, double tol, F&& body) {
    const auto t0 = std::chrono::steady_clock::now();
    Acc acc;
    body(acc);
    const auto t1 = std::chrono::steady_clock::now();
    CheckRecord r;
    r.id = id;
    r.anchor = anchor;
    r.tolerance = tol;
    r.max_residual = acc.finite ? acc.max : std::numeric_limits<double>::max();
    r.pass = acc.finite && acc.max <= tol;
    if (timing_) r.wall_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
    records.push_back(std::move(r));
  }

  std::vector<CheckRecord> records;

 private:
  bool timing_;
};

double mabs(const CVec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }
double mabs(const CMat& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }
double mabs(const Multivector& a) { return mabs(a.coeffs()); }

// |a - b| relative to the larger side.
double rel(const FormJet& a, const FormJet& b) {
  return form_distance(a, b) / (1.0 + std::max(form_norm(a), form_norm(b)));
}
double rel(const Multivector& a, const Multivector& b) { return distance(a, b) / (1.0 + std::max(mabs(a), mabs(b))); }
double rel(const CVec& a, const CVec& b) { return mabs(CVec(a - b)) / (1.0 + std::max(mabs(a), mabs(b))); }

std::vector<int> all_degrees(int n) {
  std::vector<int> d(n + 1);
  std::iota(d.begin(), d.end(), 0);
  return d;
}

std::mt19937_64 suite_rng(std::uint64_t seed, int salt) {
  std::seed_seq s{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                  static_cast<std::uint32_t>(salt)};
  return std::mt19937_64(s);
}

double uniform(std::mt19937_64& rng, double lo = -1.0, double hi = 1.0) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

CVec random_cvec(std::mt19937_64& rng, int n) {
  CVec v(n);
  for (auto& c : v) c = cplx(uniform(rng), uniform(rng));
  return v;
}

CMat random_cmat(std::mt19937_64& rng, int r, int c) {
  CMat m(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) m(i, j) = cplx(uniform(rng), uniform(rng));
  return m;
}

// a diag(-1 x q, 1 x (n - q)) a^T with a near 2 id, so nondegenerate with q negative directions.
Eigen::MatrixXd random_bilinear(std::mt19937_64& rng, int n, int q) {
  Eigen::MatrixXd a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = uniform(rng);
  a += 2.0 * Eigen::MatrixXd::Identity(n, n);
  Eigen::VectorXd d = Eigen::VectorXd::Ones(n);
  for (int i = 0; i < q; ++i) d[i] = -1.0;
  return a * d.asDiagonal() * a.transpose();
}

CJet random_function(std::mt19937_64& rng, const Point& x) {
  return Polynomial::random(static_cast<int>(x.size()), 3, 4, rng).evaluate(coordinate_jets(x));
}

// L_X in coordinates: X^k d_k a_I plus the transport of each index; independent of the Cartan formula.
FormJet lie_coordinate(const VectorJet& X, const FormJet& a) {
  const int n = a.n;
  FormJet r = FormJet::zero(a.x, a.order() - 1);
  for (Blade I = 0; I < a.c.size(); ++I) {
    for (int k = 0; k < n; ++k) r.c[I] += X[k] * a.c[I].partial(k);
    int pos = 0;
    for (Blade t = I; t; t &= t - 1, ++pos) {
      const int j = std::countr_zero(t);
      const Blade rest = I & ~(1u << j);
      for (int m = 0; m < n; ++m) {
        const int s = wedge_sign(1u << m, rest);
        if (!s) continue;
        CJet term = X[j].partial(m) * a.c[I];
        term *= double(s) * ((pos & 1) ? -1.0 : 1.0);
        r.c[rest | (1u << m)] += term;
      }
    }
  }
  return r;
}

CJet pair_vector(const VectorJet& X, const FormJet& v) {
  CJet s = CJet::constant(v.n, cplx(0));
  for (int i = 0; i < v.n; ++i) s += X[i] * v.c[1u << i];
  return s;
}

// ---------------------------------------------------------------------------

void cartan_suite(Runner& run, const Chart& chart, std::mt19937_64& rng, int samples) {
  const int n = chart.dim();
  const int jets = 5;
  struct Sample {
    Point x;
    MetricJet mj;
    FormJet a, u, v;
    VectorJet X, Y;
    CJet f;
  };
  std::vector<Sample> data;
  for (int s = 0; s < samples; ++s) {
    const Point x = chart.sample_point(rng);
    const MetricJet mj = chart.metric_jet(x);
    for (int t = 0; t < jets; ++t)
      data.push_back({x, mj, FormField::random(n, rng, all_degrees(n)).jet(x), FormField::random(n, rng, {1}).jet(x),
                      FormField::random(n, rng, {1}).jet(x), VectorField::random(n, rng).jet(x),
                      VectorField::random(n, rng).jet(x), random_function(rng, x)});
  }
  const double tol = 1e-10;
  run.check("cartan.d_d", "[[d,d]] = 0", tol, [&](Acc& acc) {
    for (const auto& d : data) {
      const FormJet da = exterior_derivative(d.a);
      acc.add(form_norm(exterior_derivative(da)) / (1 + form_norm(da)));
    }
  });
  run.check("cartan.d_iota", "[[d,i(X)]] = L_X", tol, [&](Acc& acc) {
    for (const auto& d : data) {
      const FormJet cartan = exterior_derivative(interior(d.X, d.a)) + interior(d.X, exterior_derivative(d.a));
      acc.add(rel(cartan, lie_coordinate(d.X, d.a)));
      acc.add(rel(lie_derivative(d.X, d.a), lie_coordinate(d.X, d.a)));
    }
  });
  run.check("cartan.iota_iota", "[[i(X),i(Y)]] = 0", tol, [&](Acc& acc) {
    for (const auto& d : data) acc.add(rel(interior(d.X, interior(d.Y, d.a)), -1.0 * interior(d.Y, interior(d.X, d.a))));
  });
  run.check("cartan.lie_iota", "[[L_X,i(Y)]] = i([X,Y])", tol, [&](Acc& acc) {
    for (const auto& d : data)
      acc.add(rel(lie_derivative(d.X, interior(d.Y, d.a)) - interior(d.Y, lie_derivative(d.X, d.a)),
                  interior(lie_bracket(d.X, d.Y), d.a)));
  });
  run.check("cartan.lie_lie", "[[L_X,L_Y]] = L_[X,Y]", tol, [&](Acc& acc) {
    for (const auto& d : data)
      acc.add(rel(lie_derivative(d.X, lie_derivative(d.Y, d.a)) - lie_derivative(d.Y, lie_derivative(d.X, d.a)),
                  lie_derivative(lie_bracket(d.X, d.Y), d.a)));
  });
  run.check("cartan.d_lie", "[[d,L_X]] = 0", tol, [&](Acc& acc) {
    for (const auto& d : data)
      acc.add(rel(exterior_derivative(lie_derivative(d.X, d.a)), lie_derivative(d.X, exterior_derivative(d.a))));
  });
  run.check("cartan.d_eps", "[[d,e(v)]] = e(dv)", tol, [&](Acc& acc) {
    for (const auto& d : data)
      acc.add(rel(exterior_derivative(epsilon(d.v, d.a)) + epsilon(d.v, exterior_derivative(d.a)),
                  wedge(exterior_derivative(d.v), d.a)));
  });
  run.check("cartan.lie_eps", "[[L_X,e(v)]] = e(L_X v)", tol, [&](Acc& acc) {
    for (const auto& d : data)
      acc.add(rel(lie_derivative(d.X, epsilon(d.v, d.a)) - epsilon(d.v, lie_derivative(d.X, d.a)),
                  epsilon(lie_derivative(d.X, d.v), d.a)));
  });
  run.check("cartan.iota_eps", "[[i(X),e(v)]] = <X,v>", tol, [&](Acc& acc) {
    for (const auto& d : data)
      acc.add(rel(interior(d.X, epsilon(d.v, d.a)) + epsilon(d.v, interior(d.X, d.a)), pair_vector(d.X, d.v) * d.a));
  });
  run.check("cartan.eps_eps", "[[e(u),e(v)]] = 0", tol, [&](Acc& acc) {
    for (const auto& d : data) acc.add(rel(epsilon(d.u, epsilon(d.v, d.a)), -1.0 * epsilon(d.v, epsilon(d.u, d.a))));
  });
  run.check("cartan.locality", "[[d,f]] = e(df), [[L_X,f]] = Xf, [[i(X),f]] = 0", tol, [&](Acc& acc) {
    for (const auto& d : data) {
      const FormJet df = differential(d.x, d.f);
      acc.add(rel(exterior_derivative(d.f * d.a) - d.f * exterior_derivative(d.a), wedge(df, d.a)));
      CJet Xf = CJet::constant(n, cplx(0));
      for (int i = 0; i < n; ++i) Xf += d.X[i] * d.f.partial(i);
      acc.add(rel(lie_derivative(d.X, d.f * d.a) - d.f * lie_derivative(d.X, d.a), Xf * d.a));
      acc.add(rel(interior(d.X, d.f * d.a), d.f * interior(d.X, d.a)));
    }
  });
  run.check("cartan.unit", "d1 = 0, L_X 1 = 0, i(X)1 = 0, e(v)1 = v", tol, [&](Acc& acc) {
    for (const auto& d : data) {
      const FormJet one = scalar_form(d.x, CJet::constant(n, 1.0));
      acc.add(form_norm(exterior_derivative(one)));
      acc.add(form_norm(lie_derivative(d.X, one)));
      acc.add(form_norm(interior(d.X, one)));
      acc.add(rel(epsilon(d.v, one), d.v));
    }
  });
  run.check("cartan.volume", "d w0 = 0, d i(X) w0 = (div X) w0, e(v) w0 = 0", tol, [&](Acc& acc) {
    for (const auto& d : data) {
      const FormJet w = volume_form(d.mj);
      acc.add(form_norm(exterior_derivative(w)) / (1 + form_norm(w)));
      acc.add(rel(exterior_derivative(interior(d.X, w)), to_complex(divergence(d.mj, d.X)) * w.truncated(1)));
      acc.add(form_norm(epsilon(d.v, w)) / (1 + form_norm(w)));
    }
  });
}

// ---------------------------------------------------------------------------

void clifford_suite(Runner& run, const Chart& chart, std::mt19937_64& rng, int samples) {
  const int n = chart.dim();
  std::vector<FormPtr> forms;
  for (int s = 0; s < samples; ++s) forms.push_back(cotangent_form(chart.metric_jet(chart.sample_point(rng))));
  // Twenty random forms, dimensions 2..6, both signatures.
  std::vector<FormPtr> generic;
  for (int k = 0; k < 2; ++k)
    for (int d = 2; d <= 6; ++d)
      for (int q : {0, 1}) generic.push_back(BilinearForm::make(random_bilinear(rng, d, q)));

  auto one_form = [&](const FormPtr& f) { return Multivector::one_form(f, AlgebraTag::Exterior, random_cvec(rng, f->dim())); };
  auto element = [&](const FormPtr& f) { return Multivector(f, AlgebraTag::Exterior, random_cvec(rng, 1 << f->dim())); };
  auto B = [](const FormPtr& f, const Multivector& u, const Multivector& v) {
    cplx s = 0;
    for (int i = 0; i < f->dim(); ++i)
      for (int j = 0; j < f->dim(); ++j) s += u[1u << i] * (*f)(i, j) * v[1u << j];
    return s;
  };

  run.check("clifford.relation", "c(u)c(v) + c(v)c(u) + 2B(u,v) = 0", 1e-12, [&](Acc& acc) {
    std::vector<FormPtr> all = generic;
    all.insert(all.end(), forms.begin(), forms.end());
    for (const auto& f : all)
      for (int t = 0; t < 10; ++t) {
        const Multivector u = one_form(f), v = one_form(f), a = element(f);
        const Multivector uv = clifford_action(u, clifford_action(v, a)), vu = clifford_action(v, clifford_action(u, a));
        const Multivector rhs = (-2.0 * B(f, u, v)) * a;
        acc.add(distance(uv + vu, rhs) / (1.0 + std::max({mabs(uv), mabs(vu), mabs(rhs)})));
      }
  });
  run.check("clifford.square", "c(df)^2 + (df,df) = 0", 1e-12, [&](Acc& acc) {
    for (size_t s = 0; s < forms.size(); ++s) {
      const FormPtr& f = forms[s];
      const Point x = chart.sample_point(rng);
      const CJet fj = random_function(rng, x);
      CVec df(n);
      for (int i = 0; i < n; ++i) df[i] = fj.d(i);
      const Multivector u = Multivector::one_form(f, AlgebraTag::Exterior, df), a = element(f);
      const Multivector sq = clifford_action(u, clifford_action(u, a));
      const Multivector rhs = (-B(f, u, u)) * a;
      acc.add(distance(sq, rhs) / (1.0 + std::max(mabs(sq), mabs(rhs))));
    }
  });

  std::vector<FormPtr> symbol_forms = forms;
  for (int d = 2; d <= 5; ++d) symbol_forms.push_back(BilinearForm::make(random_bilinear(rng, d, d % 2)));
  run.check("clifford.symbol2", "symbol(dx^i dx^j) = dx^i ^ dx^j - g^ij", 1e-12, [&](Acc& acc) {
    for (const auto& f : symbol_forms) {
      const int d = f->dim();
      const Multivector one = Multivector::scalar(f, AlgebraTag::Exterior, 1.0);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) {
          const Multivector s = symbol(clifford_product(Multivector::generator(f, AlgebraTag::Clifford, i),
                                                        Multivector::generator(f, AlgebraTag::Clifford, j)));
          const Multivector e = wedge(Multivector::generator(f, AlgebraTag::Exterior, i),
                                      Multivector::generator(f, AlgebraTag::Exterior, j)) -
                                (*f)(i, j) * one;
          acc.add(rel(s, e));
        }
    }
  });
  run.check("clifford.symbol3", "symbol(dx^i dx^j dx^k) = dx^i^dx^j^dx^k - g^ij dx^k + g^ik dx^j - g^jk dx^i",
            1e-12, [&](Acc& acc) {
              for (const auto& f : symbol_forms) {
                const int d = f->dim();
                auto gen = [&](int i) { return Multivector::generator(f, AlgebraTag::Clifford, i); };
                auto ext = [&](int i) { return Multivector::generator(f, AlgebraTag::Exterior, i); };
                for (int i = 0; i < d; ++i)
                  for (int j = 0; j < d; ++j) {
                    const Multivector gij = clifford_product(gen(i), gen(j));
                    const Multivector eij = wedge(ext(i), ext(j));
                    for (int k = 0; k < d; ++k) {
                      const Multivector s = symbol(clifford_product(gij, gen(k)));
                      const Multivector e = wedge(eij, ext(k)) - (*f)(i, j) * ext(k) + (*f)(i, k) * ext(j) -
                                            (*f)(j, k) * ext(i);
                      acc.add(rel(s, e));
                    }
                  }
              }
            });
  run.check("clifford.quantize", "symbol(q(a)) = a", 1e-12, [&](Acc& acc) {
    for (const auto& f : symbol_forms) {
      const Multivector a = element(f);
      acc.add(rel(symbol(quantize(a)), a));
    }
  });
  if (n % 2 == 0)
    run.check("clifford.chirality", "Gamma^2 = 1, Gamma c(v) = -c(v) Gamma", 1e-11, [&](Acc& acc) {
      for (const auto& f : forms) {
        const Multivector G = chirality(f);
        const Multivector one = Multivector::scalar(f, AlgebraTag::Clifford, 1.0);
        acc.add(rel(clifford_product(G, G), one));
        Multivector v = Multivector::one_form(f, AlgebraTag::Clifford, random_cvec(rng, n));
        acc.add(rel(clifford_product(G, v), -1.0 * clifford_product(v, G)));
      }
    });
}

// ---------------------------------------------------------------------------

void levi_civita_suite(Runner& run, const Chart& chart, std::mt19937_64& rng, int samples) {
  const int n = chart.dim();
  struct Sample {
    MetricJet mj;
    Christoffel G;
    CurvatureData cd;
  };
  std::vector<Sample> data;
  for (int s = 0; s < samples; ++s) {
    const MetricJet mj = chart.metric_jet(chart.sample_point(rng));
    const Christoffel G = christoffel(mj);
    data.push_back({mj, G, curvature(mj, G)});
  }
  const double tol = 1e-9;
  run.check("levi-civita.metric_compatibility", "d_k g_ij = Gamma^m_ki g_mj + Gamma^m_kj g_im", tol, [&](Acc& acc) {
    for (const auto& d : data) acc.add(metric_compatibility_residual(d.mj, d.G));
  });
  run.check("levi-civita.christoffel_symmetry", "Gamma^k_ij = Gamma^k_ji", tol, [&](Acc& acc) {
    for (const auto& d : data) acc.add(christoffel_symmetry_residual(d.G));
  });
  run.check("levi-civita.bianchi", "R_i^j_kl + R_k^j_li + R_l^j_ik = 0", tol, [&](Acc& acc) {
    for (const auto& d : data) acc.add(bianchi_residual(d.cd));
  });
  run.check("levi-civita.ricci_symmetry", "Ric_ij = Ric_ji", tol, [&](Acc& acc) {
    for (const auto& d : data) acc.add(ricci_symmetry_residual(d.cd));
  });
  run.check("levi-civita.riemann_symmetry", "R_ijkl = -R_jikl = -R_ijlk = R_klij", tol, [&](Acc& acc) {
    for (const auto& d : data)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
              const double r = d.cd.R_lower(i, j, k, l);
              acc.add(std::abs(r + d.cd.R_lower(j, i, k, l)));
              acc.add(std::abs(r + d.cd.R_lower(i, j, l, k)));
              acc.add(std::abs(r - d.cd.R_lower(k, l, i, j)));
            }
  });
  run.check("levi-civita.log_det", "d log|det g|^(1/2) = Gamma^j_ij dx^i", tol, [&](Acc& acc) {
    for (const auto& d : data) acc.add(log_det_identity_residual(d.mj, d.G));
  });
  run.check("levi-civita.volume_parallel", "nabla w0 = 0", tol, [&](Acc& acc) {
    for (const auto& d : data) {
      const FormJet w = volume_form(d.mj);
      for (const auto& c : covariant_derivative(d.G, w)) acc.add(form_norm(c) / (1 + form_norm(w)));
    }
  });
  run.check("levi-civita.curvature_two_form", "[S_ij, dx^k] = R_l^k_ij dx^l", tol, [&](Acc& acc) {
    for (const auto& d : data) acc.add(curvature_two_form_residual(d.cd, d.mj));
  });

  std::optional<double> expected;
  if (chart.kind() == ChartKind::Flat || chart.kind() == ChartKind::Torus || chart.kind() == ChartKind::Minkowski)
    expected = 0.0;
  if (auto t = chart.conformal_type()) expected = (*t == ConformalType::Sphere ? 1.0 : -1.0) * n * (n - 1);
  if (expected) {
    std::ostringstream anchor;
    anchor << "r = " << *expected;
    run.check("levi-civita.scalar_curvature", anchor.str(), 1e-7, [&](Acc& acc) {
      for (const auto& d : data) acc.add(std::abs(d.cd.scalar - *expected));
    });
  }
}

// ---------------------------------------------------------------------------

void hodge_suite(Runner& run, const Chart& chart, std::mt19937_64& rng, int samples) {
  const int n = chart.dim();
  const int q = chart.negative_directions();
  const int jets = 5;
  struct Sample {
    Point x;
    MetricJet mj;
    Christoffel G;
    std::vector<FormJet> a;
  };
  std::vector<Sample> data;
  for (int s = 0; s < samples; ++s) {
    const Point x = chart.sample_point(rng);
    const MetricJet mj = chart.metric_jet(x);
    Sample d{x, mj, christoffel(mj), {}};
    for (int t = 0; t < jets; ++t) d.a.push_back(FormField::random(n, rng, all_degrees(n)).jet(x));
    data.push_back(std::move(d));
  }
  run.check("hodge.double_star", "**a = (-1)^(p(n-p)+q) a", 1e-10, [&](Acc& acc) {
    for (const auto& d : data)
      for (int p = 0; p <= n; ++p) {
        const FormJet a = FormField::random(n, rng, {p}).jet(d.x, 0);
        const double sign = ((p * (n - p) + q) % 2) ? -1.0 : 1.0;
        acc.add(rel(hodge_star(d.mj, hodge_star(d.mj, a)), sign * a));
      }
  });
  run.check("hodge.isometry", "(a,b) = (-1)^q (*b,*a)", 1e-10, [&](Acc& acc) {
    for (const auto& d : data)
      for (int p = 0; p <= n; ++p) {
        const FormJet a = FormField::random(n, rng, {p}).jet(d.x, 0), b = FormField::random(n, rng, {p}).jet(d.x, 0);
        const cplx lhs = form_inner(d.mj, a, b);
        const cplx rhs = (q % 2 ? -1.0 : 1.0) * form_inner(d.mj, hodge_star(d.mj, b), hodge_star(d.mj, a));
        acc.add(std::abs(lhs - rhs) / (1 + std::abs(lhs)));
      }
  });
  run.check("hodge.unit", "*1 = w0", 1e-12, [&](Acc& acc) {
    for (const auto& d : data) acc.add(rel(hodge_star(d.mj, scalar_form(d.x, CJet::constant(n, 1.0, 0))), volume_form(d.mj).truncated(0)));
  });
  run.check("hodge.coderivative", "(-1)^(n(p+1)+1) *d* a = -i(nabla) a", 1e-9, [&](Acc& acc) {
    for (const auto& d : data)
      for (const auto& a : d.a) acc.add(rel(coderivative_hodge(d.mj, a.truncated(1)), coderivative_connection(d.mj, d.G, a).truncated(0)));
  });
  run.check("hodge.d_squared", "d d a = 0", 1e-11, [&](Acc& acc) {
    for (const auto& d : data)
      for (const auto& a : d.a) {
        const FormJet da = exterior_derivative(a);
        acc.add(form_norm(exterior_derivative(da)) / (1 + form_norm(da)));
      }
  });
  run.check("hodge.codifferential_squared", "d* d* a = 0", 1e-11, [&](Acc& acc) {
    for (const auto& d : data)
      for (const auto& a : d.a) {
        const FormJet c = coderivative_connection(d.mj, d.G, a);
        acc.add(form_norm(coderivative_connection(d.mj, d.G, c)) / (1 + form_norm(c)));
      }
  });
  run.check("hodge.forms_dirac", "c(nabla) = d + d*", 1e-10, [&](Acc& acc) {
    for (const auto& d : data)
      for (const auto& a : d.a)
        acc.add(rel(forms_dirac(d.mj, d.G, a), exterior_derivative(a) + coderivative_connection(d.mj, d.G, a)));
  });
  if (n % 2 == 0)
    run.check("hodge.dirac_odd", "D c(Gamma) = -c(Gamma) D", 1e-10, [&](Acc& acc) {
      for (const auto& d : data)
        for (const auto& a : d.a)
          acc.add(rel(forms_dirac(d.mj, d.G, forms_chirality(d.mj, a)),
                      -1.0 * forms_chirality(d.mj, forms_dirac(d.mj, d.G, a))));
    });
}

// ---------------------------------------------------------------------------

MatrixPolynomial random_matrix_poly(std::mt19937_64& rng, int n, int m) {
  MatrixPolynomial p;
  p.n = n;
  p.m = m;
  p.terms.emplace_back(random_cmat(rng, m, m), std::vector<int>(n, 0));
  for (int k = 0; k < n; ++k) {
    std::vector<int> pw(n, 0);
    pw[k] = 1;
    p.terms.emplace_back(random_cmat(rng, m, m), pw);
    pw[(k + 1) % n] += 1;
    p.terms.emplace_back(random_cmat(rng, m, m), pw);
  }
  return p;
}

void laplacian_suite(Runner& run, const Chart& chart, std::mt19937_64& rng, int samples) {
  const int n = chart.dim();
  const ModuleSpec ms = forms_module(n);
  struct Sample {
    Point x;
    MetricJet mj;
    SuperconnectionData S;
    SectionJet psi;
  };
  std::vector<Sample> data;
  for (int s = 0; s < samples; ++s) {
    const Point x = chart.sample_point(rng);
    auto S = make_superconnection(n, ms.grading, all_degrees(n), "random", rng());
    data.push_back({x, chart.metric_jet(x), std::move(S), random_section(x, ms.m, rng)});
  }
  run.check("laplacian.square", "D^2 psi (coefficients) = D(D psi)", 1e-10, [&](Acc& acc) {
    for (const auto& d : data) {
      const DiracOperatorData D = quantize_superconnection(d.S, ms, d.mj);
      acc.add(rel(dirac_square(D, d.psi), apply_dirac(D, apply_dirac(D, d.psi)).v.value()));
    }
  });
  run.check("laplacian.symbol", "[[H,f],g] + 2(df,dg) = 0", 1e-9, [&](Acc& acc) {
    for (const auto& d : data) {
      const SuperconnectionData S = d.S;
      const Chart c = chart;
      // The test only evaluates H at the sample point; quantize there once.
      const DiracOperatorData D0 = quantize_superconnection(S, ms, d.mj);
      const LaplacianData H{n, ms.m, [S, ms, c, D0](const Point& y, const SectionJet& psi) {
                              if (y == D0.x) return dirac_square(D0, psi);
                              return dirac_square(quantize_superconnection(S, ms, c.metric_jet(y)), psi);
                            }};
      const double scale = mabs(H.apply(d.x, d.psi));
      acc.add(laplacian_test_residual(H, d.mj, d.psi) / (1 + scale));
    }
  });
  const int m = 2;
  run.check("laplacian.canonical", "-g^ij(nabla_i nabla_j - Gamma^k_ij nabla_k) = -tr(nabla nabla)", 1e-10, [&](Acc& acc) {
    for (const auto& d : data) {
      std::vector<CMatJet> A;
      for (int i = 0; i < n; ++i) A.push_back(random_matrix_poly(rng, n, m).evaluate(coordinate_jets(d.x)));
      const Christoffel G = christoffel(d.mj);
      const SectionJet psi = random_section(d.x, m, rng);
      acc.add(rel(canonical_laplacian(A, d.mj, G, psi), canonical_laplacian_trace(A, d.mj, G, psi)));
    }
  });
  run.check("laplacian.decompose", "H = Delta^A + F recovers (A, F)", 1e-9, [&](Acc& acc) {
    for (const auto& d : data) {
      std::vector<MatrixPolynomial> Ap;
      for (int i = 0; i < n; ++i) Ap.push_back(random_matrix_poly(rng, n, m));
      MatrixPolynomial Fp = random_matrix_poly(rng, n, m);
      const Chart c = chart;
      const LaplacianData H{n, m, [Ap, Fp, c](const Point& y, const SectionJet& psi) {
                              std::vector<CMatJet> A;
                              for (const auto& p : Ap) A.push_back(p.evaluate(coordinate_jets(y)));
                              const MetricJet mj = c.metric_jet(y);
                              return CVec(canonical_laplacian(A, mj, christoffel(mj), psi) + Fp.value(y) * psi.v.value());
                            }};
      const LaplacianDecomposition dec = laplacian_decompose(H, chart, d.x);
      double err = mabs(CMat(dec.F - Fp.value(d.x)));
      for (int i = 0; i < n; ++i) {
        const CMatJet a = Ap[i].evaluate(coordinate_jets(d.x));
        err = std::max(err, mabs(CMat(dec.A[i].value() - a.value())));
        for (int k = 0; k < n; ++k) err = std::max(err, mabs(CMat(dec.A[i].d(k) - a.d(k))));
      }
      acc.add(err);
    }
  });
}

// ---------------------------------------------------------------------------

void kernel_checks(Runner& run, const Chart& chart, std::mt19937_64& rng, int samples) {
  const int n = chart.dim();
  std::vector<ModuleSpec> modules{forms_module(n)};
  if (n % 2 == 0) modules.push_back(spinor_module(chart));
  struct Sample {
    int m;
    Eigen::MatrixXd g;
    std::vector<CMat> gamma;
    KernelProjector kp;
  };
  std::vector<Sample> data;
  for (int s = 0; s < samples; ++s) {
    const MetricJet mj = chart.metric_jet(chart.sample_point(rng));
    for (const auto& ms : modules) {
      std::vector<CMat> gv;
      for (const auto& g : ms.gammas(mj)) gv.push_back(g.value());
      data.push_back({ms.m, mj.metric_value(), gv, kernel_projector(gv, mj.metric_value())});
    }
  }
  run.check("superconnection.kernel_clifford", "c(omega) = -n id", 1e-12, [&](Acc& acc) {
    for (const auto& d : data) {
      CMat w = CMat::Zero(d.m, d.m);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) w += d.g(i, j) * d.gamma[i] * d.gamma[j];
      acc.add(mabs(CMat(w + n * CMat::Identity(d.m, d.m))));
      acc.add(mabs(CMat(d.kp.c * d.kp.b - CMat::Identity(d.m, d.m))));
    }
  });
  run.check("superconnection.kernel_idempotent", "p^2 = p", 1e-11, [&](Acc& acc) {
    for (const auto& d : data) acc.add(mabs(CMat(d.kp.p * d.kp.p - d.kp.p)));
  });
  run.check("superconnection.kernel_rank", "rank p = dim E", 0.0, [&](Acc& acc) {
    for (const auto& d : data) {
      Eigen::ComplexEigenSolver<CMat> es(d.kp.p);
      int rank = 0;
      for (int k = 0; k < es.eigenvalues().size(); ++k) rank += std::abs(es.eigenvalues()[k]) > 0.5;
      acc.add(std::abs(rank - d.m));
    }
  });
}

void superconnection_suite(Runner& run, const Chart& chart, std::mt19937_64& rng, int samples) {
  const int n = chart.dim();
  const ModuleSpec ms = forms_module(n);
  run.check("superconnection.dirac_test", "[[D,f]] = c(df)", 1e-10, [&](Acc& acc) {
    for (int s = 0; s < samples; ++s) {
      const Point x = chart.sample_point(rng);
      const auto S = make_superconnection(n, ms.grading, all_degrees(n), "random", rng());
      const DiracOperatorData D = quantize_superconnection(S, ms, chart.metric_jet(x));
      const SectionJet psi = random_section(x, ms.m, rng);
      const CJet f = random_function(rng, x);
      const CVec d0 = apply_dirac(D, psi).v.value();
      CVec cdf = CVec::Zero(ms.m);
      for (int i = 0; i < n; ++i) cdf += f.d(i) * (D.gamma[i].value() * psi.v.value());
      const CVec lhs = apply_dirac(D, scale(f, psi)).v.value() - f.value() * d0;
      acc.add(mabs(CVec(lhs - cdf)) / (1 + mabs(d0) * (1 + std::abs(f.value()))));
    }
  });

  const CMat eta = CMat(Eigen::Vector3cd(1, 1, -1).asDiagonal());
  run.check("superconnection.curvature", "IA^2 = F, F(f psi) = f F psi", 1e-11, [&](Acc& acc) {
    for (int s = 0; s < samples; ++s) {
      const Point x = chart.sample_point(rng);
      const auto S = make_superconnection(n, eta, all_degrees(n), "random", rng());
      const BundleFormJet psi = BundleFormJet::random(x, 3, rng);
      const BundleFormJet twice = apply_superconnection(S, apply_superconnection(S, psi));
      const BundleFormJet alg = apply_form_endomorphism(superconnection_curvature(S, x), 0, psi);
      const CJet f = random_function(rng, x);
      const BundleFormJet tf = apply_superconnection(S, apply_superconnection(S, scale(f, psi)));
      double sc = 1, w = 0, wf = 0;
      for (size_t k = 0; k < twice.c.size(); ++k) {
        sc = std::max(sc, mabs(twice.c[k].value()));
        w = std::max(w, mabs(CVec(twice.c[k].value() - alg.c[k].value())));
        wf = std::max(wf, mabs(CVec(tf.c[k].value() - f.value() * twice.c[k].value())));
      }
      acc.add(w / sc);
      acc.add(wf / (sc * (1 + std::abs(f.value()))));
    }
  });

  // 30 generated superconnections, alternating special and non-special shapes.
  run.check("superconnection.special", "special iff degrees <= 1 (misclassifications)", 0.0, [&](Acc& acc) {
    const CMat eta2 = CMat(Eigen::Vector2cd(1, -1).asDiagonal());
    std::vector<Point> pts;
    for (int k = 0; k < 5; ++k) pts.push_back(chart.sample_point(rng));
    int wrong = 0;
    for (int t = 0; t < 30; ++t) {
      std::vector<int> degrees = t % 3 == 0 ? std::vector<int>{1} : t % 3 == 1 ? std::vector<int>{0, 1} : all_degrees(n);
      if (t % 3 == 2 && t % 2) degrees = {0, 2};
      const bool expect = t % 3 != 2;
      const auto S = make_superconnection(n, eta2, degrees, "random", rng());
      wrong += is_special_superconnection(S, pts).special != expect;
    }
    acc.add(wrong);
  });
  run.check("superconnection.special_commutator", "[[[[IA,i(X)]],i(Y)]] = i([X,Y]) for special IA", 1e-10, [&](Acc& acc) {
    const CMat eta2 = CMat(Eigen::Vector2cd(1, -1).asDiagonal());
    for (int s = 0; s < samples; ++s) {
      const Point x = chart.sample_point(rng);
      const auto S = make_superconnection(n, eta2, {0, 1}, "random", rng());
      const VectorJet X = VectorField::random(n, rng).jet(x), Y = VectorField::random(n, rng).jet(x);
      const BundleFormJet psi = BundleFormJet::random(x, 2, rng);
      // Scale of the terms: |IA psi| times the size of both vector fields.
      const BundleFormJet Apsi = apply_superconnection(S, psi);
      double sc = 0, sx = 0, sy = 0;
      for (const auto& c : Apsi.c) sc = std::max(sc, mabs(c.value()));
      for (int i = 0; i < n; ++i) {
        sx = std::max(sx, std::abs(X[i].value()));
        sy = std::max(sy, std::abs(Y[i].value()));
        for (int k = 0; k < n; ++k) {
          sx = std::max(sx, std::abs(X[i].d(k)));
          sy = std::max(sy, std::abs(Y[i].d(k)));
        }
      }
      acc.add(special_commutator_residual(S, X, Y, psi) / ((1 + sc) * (1 + sx) * (1 + sy)));
    }
  });
  run.check("superconnection.bracket_defect",
            "[[q(du),q(v)]] - [[q(u),q(dv)]] + 2q(d(u,v)) = 2(nabla_v# u + nabla_u# v)", 1e-10, [&](Acc& acc) {
              for (int s = 0; s < samples; ++s) {
                const Point x = chart.sample_point(rng);
                const MetricJet mj = chart.metric_jet(x);
                const Christoffel G = christoffel(mj);
                const FormJet u = FormField::random(n, rng, {1}).jet(x), v = FormField::random(n, rng, {1}).jet(x);
                const Multivector defect = quantized_bracket_defect(mj, u, v);
                const auto nu = covariant_derivative(G, u), nv = covariant_derivative(G, v);
                const Eigen::MatrixXd gi = mj.inverse_value();
                CVec expect = CVec::Zero(1 << n);
                for (int i = 0; i < n; ++i)
                  for (int j = 0; j < n; ++j)
                    for (int k = 0; k < n; ++k)
                      expect[1u << k] += 2.0 * gi(i, j) *
                                         (v.c[1u << j].value() * nu[i].c[1u << k].value() +
                                          u.c[1u << j].value() * nv[i].c[1u << k].value());
                acc.add(rel(defect.coeffs(), expect));
              }
            });
  kernel_checks(run, chart, rng, samples);
}

// ---------------------------------------------------------------------------

bool spin_capable(const Chart& chart) { return chart.dim() % 2 == 0 && chart.riemannian(); }

void lichnerowicz_suite(Runner& run, const Chart& chart, std::mt19937_64& rng, int samples) {
  const int n = chart.dim();
  const SpinModule sm = spin_module(n);
  const int jets = 5;
  struct Sample {
    Point x;
    U1Potential A;
    SpinConnectionData sc;
    std::vector<SectionJet> psi;
  };
  std::vector<Sample> zero, charged;
  for (int s = 0; s < samples; ++s) {
    const Point x = chart.sample_point(rng);
    const U1Potential A0 = zero_potential(n), A1 = random_potential(n, rng());
    Sample a{x, A0, spin_connection(chart, sm, x, A0), {}}, b{x, A1, spin_connection(chart, sm, x, A1), {}};
    for (int t = 0; t < jets; ++t) {
      a.psi.push_back(random_section(x, sm.m, rng));
      b.psi.push_back(random_section(x, sm.m, rng));
    }
    zero.push_back(std::move(a));
    charged.push_back(std::move(b));
  }
  auto formula = [&](const std::vector<Sample>& data) {
    return [&](Acc& acc) {
      for (const auto& d : data)
        for (const auto& psi : d.psi) {
          const LichnerowiczTerms L = lichnerowicz(chart, sm, d.sc, psi);
          acc.add(L.residual / (1 + mabs(L.square)));
        }
    };
  };
  run.check("lichnerowicz.formula", "D^2 = Delta^S + r/4", 1e-7, formula(zero));
  run.check("lichnerowicz.formula_u1", "D_A^2 = Delta^S + r/4 + q(F)/2", 1e-7, formula(charged));
  run.check("lichnerowicz.square", "D^2 psi (coefficients) = D(D psi)", 1e-10, [&](Acc& acc) {
    for (const auto* set : {&zero, &charged})
      for (const auto& d : *set) {
        const DiracOperatorData D = spin_dirac_operator(d.sc, sm);
        for (const auto& psi : d.psi) acc.add(rel(dirac_square(D, psi), apply_dirac(D, apply_dirac(D, psi)).v.value()));
      }
  });
  run.check("lichnerowicz.dirac_alpha", "c(e^i) nabla_(e_i) = dslash + A/2 - q(alpha)/4", 1e-10, [&](Acc& acc) {
    for (const auto* set : {&zero, &charged})
      for (const auto& d : *set)
        for (const auto& psi : d.psi) acc.add(rel(spin_dirac(d.sc, sm, psi), spin_dirac_alpha(d.sc, sm, psi)));
  });
  run.check("lichnerowicz.frame", "(e^i, e^j) = delta^ij", 1e-10, [&](Acc& acc) {
    for (const auto& d : zero) acc.add(frame_residual(d.sc.frame, chart.metric_jet(d.x)).max());
  });
  run.check("lichnerowicz.spin_connection", "omega_jk = -omega_kj", 1e-10, [&](Acc& acc) {
    for (const auto& d : charged) acc.add(omega_antisymmetry_residual(d.sc));
  });
  run.check("lichnerowicz.chirality", "Gamma^2 = 1, {Gamma, c(v)} = 0, [nabla, Gamma] = 0", 1e-10, [&](Acc& acc) {
    for (const auto& d : charged) acc.add(chirality_checks(sm, d.sc).max());
  });
  if (chart.conformal_type())
    run.check("lichnerowicz.conformal_dirac", "D_A = Lambda (dslash + A/2) Lambda^-1, Lambda^2 = lambda^(n-1)", 1e-9,
              [&](Acc& acc) {
                for (const auto* set : {&zero, &charged})
                  for (const auto& d : *set)
                    for (const auto& psi : d.psi)
                      acc.add(rel(spin_dirac(d.sc, sm, psi), conformal_dirac(chart, sm, d.A, psi)));
              });
}

// ---------------------------------------------------------------------------

void sw_suite(Runner& run, const SWConfig& cfg, std::mt19937_64& rng, int samples) {
  sw_check_config(cfg);
  const SpinModule sm = spin_module(4);
  const int o = cfg.chirality;
  std::vector<SWPointData> pts;
  for (int s = 0; s < samples; ++s) {
    std::array<double, 4> x;
    for (auto& c : x) c = uniform(rng, 0.0, 2 * std::numbers::pi);
    pts.push_back(sw_evaluate(cfg, sm, x));
  }
  run.check("sw.quadratic_self_dual", "*Q(psi) = Q(psi)", 1e-12, [&](Acc& acc) {
    for (const auto& p : pts) {
      const TwoForm q = sw_quadratic_form(sm, p.psi, o);
      const TwoForm sd = self_dual_part(q, o);
      double w = 0, sc = 1;
      for (int k = 0; k < 6; ++k) {
        w = std::max(w, std::abs(sd[k] - q[k]));
        sc = std::max(sc, std::abs(q[k]));
      }
      acc.add(w / sc);
    }
  });
  run.check("sw.quadratic_norm", "|F+|^2 = |psi|^4/8 when F+ = Q(psi)", 1e-10, [&](Acc& acc) {
    for (const auto& p : pts) {
      // Potential whose curvature is exactly Q(psi) at the point.
      SWPointData c = p;
      const TwoForm q = sw_quadratic_form(sm, p.psi, o);
      for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l) c.da[k][l] = 0.0;
      for (int k = 0; k < 4; ++k)
        for (int l = k + 1; l < 4; ++l) {
          c.da[k][l] = 0.5 * q[pair_index(k, l)].imag();
          c.da[l][k] = -0.5 * q[pair_index(k, l)].imag();
        }
      const SWLocal loc = sw_local(sm, c, o);
      const double n2 = p.psi.squaredNorm();
      acc.add(std::abs(two_form_norm2(loc.F_plus) - n2 * n2 / 8) / (1 + n2 * n2));
      acc.add(loc.curvature_residual / (1 + n2));
    }
  });
  run.check("sw.functional", "W = int |D psi|^2 + |F+ - Q|^2 = int <psi,Delta psi> + |F+|^2 + |psi|^4/8", 1e-6,
            [&](Acc& acc) { acc.add(sw_functional(cfg).gap); });
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"cartan",     "clifford",     "levi-civita", "laplacian", "superconnection",
                                              "lichnerowicz", "hodge",      "sw",          "all"};
  return names;
}

const CheckRecord* VerificationReport::find(const std::string& id) const {
  for (const auto& c : checks)
    if (c.id == id) return &c;
  return nullptr;
}

std::string VerificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["suite"] = suite;
  j["chart"] = chart;
  j["seed"] = seed;
  j["samples"] = samples;
  j["pass"] = pass;
  j["checks"] = nlohmann::ordered_json::array();
  for (const auto& c : checks) {
    nlohmann::ordered_json r;
    r["id"] = c.id;
    r["anchor"] = c.anchor;
    r["max_residual"] = c.max_residual;
    r["tolerance"] = c.tolerance;
    r["pass"] = c.pass;
    if (timing) r["wall_ms"] = c.wall_ms;
    j["checks"].push_back(std::move(r));
  }
  return j.dump(2) + "\n";
}

std::string VerificationReport::to_human() const {
  std::ostringstream os;
  os << "suite " << suite << "  chart " << chart << "  seed " << seed << "  samples " << samples << "\n";
  size_t w = 5;
  for (const auto& c : checks) w = std::max(w, c.id.size());
  for (const auto& c : checks) {
    os << (c.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(w)) << c.id << "  "
       << std::scientific << std::setprecision(3) << c.max_residual << " <= " << c.tolerance;
    if (timing) os << "  " << std::fixed << std::setprecision(1) << c.wall_ms << " ms";
    os << std::defaultfloat << "\n";
  }
  os << (pass ? "overall PASS" : "overall FAIL") << "\n";
  return os.str();
}

VerificationReport run_verify(const VerifyOptions& opt) {
  const auto& names = suite_names();
  const auto it = std::find(names.begin(), names.end(), opt.suite);
  if (it == names.end()) throw ConfigError("unknown suite '" + opt.suite + "'");
  if (opt.samples < 1) throw ConfigError("samples must be positive");
  const bool all = opt.suite == "all";
  if (opt.suite == "sw" && !opt.sw) throw ConfigError("suite sw needs a field configuration");

  VerificationReport rep;
  rep.suite = opt.suite;
  rep.seed = opt.seed;
  rep.samples = opt.samples;
  rep.timing = opt.timing;
  Runner run(opt.timing);

  if (opt.suite == "sw") {
    rep.chart = "torus4";
    auto rng = suite_rng(opt.seed, 8);
    sw_suite(run, *opt.sw, rng, opt.samples);
  } else {
    const Chart chart = resolve_chart(opt.chart);
    rep.chart = chart.name();
    if (opt.suite == "lichnerowicz" && !spin_capable(chart))
      throw ConfigError("suite lichnerowicz needs an even-dimensional Riemannian chart");
    using Fn = void (*)(Runner&, const Chart&, std::mt19937_64&, int);
    const std::pair<const char*, Fn> suites[] = {{"cartan", cartan_suite},       {"clifford", clifford_suite},
                                                 {"levi-civita", levi_civita_suite}, {"laplacian", laplacian_suite},
                                                 {"superconnection", superconnection_suite},
                                                 {"lichnerowicz", lichnerowicz_suite}, {"hodge", hodge_suite}};
    int salt = 0;
    for (const auto& [name, fn] : suites) {
      ++salt;
      if (!all && opt.suite != name) continue;
      if (all && std::string(name) == "lichnerowicz" && !spin_capable(chart)) continue;
      auto rng = suite_rng(opt.seed, salt);
      fn(run, chart, rng, opt.samples);
    }
    if (all && opt.sw) {
      auto rng = suite_rng(opt.seed, 8);
      sw_suite(run, *opt.sw, rng, opt.samples);
    }
  }
  rep.checks = std::move(run.records);
  std::sort(rep.checks.begin(), rep.checks.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  rep.pass = std::all_of(rep.checks.begin(), rep.checks.end(), [](const auto& c) { return c.pass; });
  return rep;
}

}  // namespace superdirac
