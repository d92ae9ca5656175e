#include <numbers>

#include "doctest.h"
#include "support.hpp"

#include "superdirac/forms.hpp"

using namespace superdirac;

namespace {

// Coordinate formula for the Lie derivative, used as an independent reference.
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

double check_scale(const FormJet& a) { return 1.0 + form_norm(a); }

}  // namespace

TEST_SUITE("forms") {
  TEST_CASE("polynomial jets are exact") {
    std::mt19937_64 rng(31);
    const Polynomial p = Polynomial::random(3, 4, 6, rng);
    const Point x{0.2, -0.7, 0.4};
    const CJet j = p.evaluate(coordinate_jets(x));
    CHECK(std::abs(j.value() - p.value(x)) < 1e-14);
    for (int k = 0; k < 3; ++k) {
      CHECK(std::abs(j.d(k) - p.derivative(k).value(x)) < 1e-13);
      for (int l = 0; l < 3; ++l) CHECK(std::abs(j.d2(k, l) - p.derivative(k).derivative(l).value(x)) < 1e-12);
    }
  }

  TEST_CASE("Cartan relations on random polynomial data") {
    std::mt19937_64 rng(32);
    for (int n = 2; n <= 4; ++n) {
      std::vector<int> all(n + 1);
      std::iota(all.begin(), all.end(), 0);
      for (int t = 0; t < 4; ++t) {
        const Point x = testing::random_point(rng, n);
        const FormJet a = FormField::random(n, rng, all).jet(x);
        const VectorJet X = VectorField::random(n, rng).jet(x), Y = VectorField::random(n, rng).jet(x);
        const FormJet v = FormField::random(n, rng, {1}).jet(x), u = FormField::random(n, rng, {1}).jet(x);
        const CJet f = Polynomial::random(n, 3, 4, rng).evaluate(coordinate_jets(x));
        const double tol = 1e-10 * check_scale(a);

        CHECK(form_distance(lie_derivative(X, a), lie_coordinate(X, a)) < tol * 10);
        CHECK(form_norm(exterior_derivative(exterior_derivative(a))) < tol);
        CHECK(form_norm(interior(X, interior(Y, a)) + interior(Y, interior(X, a))) < tol);
        CHECK(form_distance(lie_derivative(X, interior(Y, a)) - interior(Y, lie_derivative(X, a)),
                            interior(lie_bracket(X, Y), a)) < tol * 10);
        CHECK(form_distance(lie_derivative(X, lie_derivative(Y, a)) - lie_derivative(Y, lie_derivative(X, a)),
                            lie_derivative(lie_bracket(X, Y), a)) < tol * 100);
        CHECK(form_norm(exterior_derivative(lie_derivative(X, a)) - lie_derivative(X, exterior_derivative(a))) < tol * 10);
        CHECK(form_distance(exterior_derivative(epsilon(v, a)) + epsilon(v, exterior_derivative(a)),
                            wedge(exterior_derivative(v), a)) < tol * 10);
        CHECK(form_distance(lie_derivative(X, epsilon(v, a)) - epsilon(v, lie_derivative(X, a)),
                            epsilon(lie_derivative(X, v), a)) < tol * 10);
        CJet xv(n, 2, cplx(0));
        for (int i = 0; i < n; ++i) xv += X[i] * v.c[1u << i];
        CHECK(form_distance(interior(X, epsilon(v, a)) + epsilon(v, interior(X, a)), xv * a) < tol);
        CHECK(form_norm(epsilon(u, epsilon(v, a)) + epsilon(v, epsilon(u, a))) < tol);
        // locality
        const FormJet df = differential(x, f);
        CHECK(form_distance(exterior_derivative(f * a) - f * exterior_derivative(a), wedge(df, a)) < tol * 10);
        CJet Xf(n, 1, cplx(0));
        for (int i = 0; i < n; ++i) Xf += X[i] * f.partial(i);
        CHECK(form_distance(lie_derivative(X, f * a) - f * lie_derivative(X, a), Xf * a) < tol * 10);
        CHECK(form_norm(interior(X, f * a) - f * interior(X, a)) < tol);
        // degree zero and top degree
        const FormJet one = scalar_form(x, CJet::constant(n, 1.0));
        CHECK(form_norm(exterior_derivative(one)) == 0.0);
        CHECK(form_norm(lie_derivative(X, one)) == 0.0);
        CHECK(form_norm(interior(X, one)) == 0.0);
        CHECK(form_distance(epsilon(v, one), v) == 0.0);
      }
    }
  }

  TEST_CASE("volume form, divergence and Levi-Civita parallelism") {
    std::mt19937_64 rng(33);
    for (const char* name : {"flat3", "sphere2", "hyperbolic4", "poly3", "poly4"}) {
      const Chart c = make_chart(name);
      const int n = c.dim();
      const Point x = c.sample_point(rng);
      const MetricJet mj = c.metric_jet(x);
      const Christoffel G = christoffel(mj);
      const FormJet w = volume_form(mj);
      for (const auto& d : covariant_derivative(G, w)) CHECK(form_norm(d) < 1e-11);
      CHECK(form_norm(exterior_derivative(w)) < 1e-12);
      const VectorJet X = VectorField::random(n, rng).jet(x);
      const FormJet sigma = interior(X, w);
      const RJet div = divergence(mj, X);
      CHECK(form_distance(exterior_derivative(sigma), to_complex(div) * w.truncated(1)) < 1e-11);
      CHECK(form_distance(lie_derivative(X, w), exterior_derivative(sigma)) < 1e-11);
      const FormJet v = FormField::random(n, rng, {1}).jet(x);
      CHECK(form_norm(epsilon(v, w)) == 0.0);
    }
  }

  TEST_CASE("Hodge star: double star sign and isometry") {
    std::mt19937_64 rng(34);
    for (const char* name : {"flat2", "flat3", "sphere2", "hyperbolic4", "poly3", "poly4"}) {
      const Chart c = make_chart(name);
      const int n = c.dim();
      std::vector<int> all(n + 1);
      std::iota(all.begin(), all.end(), 0);
      const Point x = c.sample_point(rng);
      const MetricJet mj = c.metric_jet(x);
      for (int p = 0; p <= n; ++p) {
        const FormJet a = FormField::random(n, rng, {p}).jet(x), b = FormField::random(n, rng, {p}).jet(x);
        const FormJet ss = hodge_star(mj, hodge_star(mj, a));
        CHECK(form_distance(ss, double((p * (n - p)) % 2 ? -1 : 1) * a) < 1e-11 * check_scale(a));
        const cplx lhs = form_inner(mj, a, b), rhs = form_inner(mj, hodge_star(mj, b), hodge_star(mj, a));
        CHECK(std::abs(lhs - rhs) < 1e-10 * (1 + std::abs(lhs)));
        CHECK(form_distance(hodge_star(mj, a, -1), -1.0 * hodge_star(mj, a)) == 0.0);
      }
      const FormJet one = scalar_form(x, CJet::constant(n, 1.0));
      CHECK(form_distance(hodge_star(mj, one), volume_form(mj)) < 1e-14);
    }
    // Flat pinned values: *dx1 = dx2, *dx2 = -dx1.
    const Point x{0.1, 0.2};
    const MetricJet mj = Chart::flat(2).metric_jet(x);
    FormJet dx1 = FormJet::zero(x), dx2 = FormJet::zero(x);
    dx1.c[1] = CJet::constant(2, 1.0);
    dx2.c[2] = CJet::constant(2, 1.0);
    CHECK(form_distance(hodge_star(mj, dx1), dx2) == 0.0);
    CHECK(form_distance(hodge_star(mj, dx2), -1.0 * dx1) == 0.0);
  }

  TEST_CASE("coderivative: Hodge route equals connection route; squares vanish") {
    std::mt19937_64 rng(35);
    for (const auto& name : chart_names()) {
      const Chart c = make_chart(name);
      const int n = c.dim();
      std::vector<int> all(n + 1);
      std::iota(all.begin(), all.end(), 0);
      for (int t = 0; t < 2; ++t) {
        const Point x = c.sample_point(rng);
        const MetricJet mj = c.metric_jet(x);
        const Christoffel G = christoffel(mj);
        const FormJet a = FormField::random(n, rng, all).jet(x);
        const FormJet h = coderivative_hodge(mj, a.truncated(1));
        const FormJet k = coderivative_connection(mj, G, a);
        CHECK(form_distance(h, k.truncated(0)) < 1e-9 * check_scale(a));
        CHECK(form_norm(coderivative_connection(mj, G, coderivative_connection(mj, G, a))) < 1e-10 * check_scale(a));
        const FormJet D = forms_dirac(mj, G, a);
        CHECK(form_distance(D, exterior_derivative(a) + k) < 1e-10 * check_scale(a));
      }
    }
    // Minkowski plane: d*(x^1 dx^1) = -g^11 = 1 by the connection route, and the Hodge route must agree.
    const Point x{0.3, 0.4};
    const MetricJet mj = Chart::minkowski(2).metric_jet(x);
    FormJet v = FormJet::zero(x);
    v.c[1] = to_complex(coordinate_jets(x)[0]);
    CHECK(std::abs(coderivative_connection(mj, christoffel(mj), v).c[0].value() - 1.0) < 1e-15);
    CHECK(std::abs(coderivative_hodge(mj, v).c[0].value() - 1.0) < 1e-15);
  }

  TEST_CASE("chirality on forms") {
    std::mt19937_64 rng(36);
    for (const char* name : {"flat2", "sphere2", "hyperbolic4", "poly4", "minkowski4"}) {
      const Chart c = make_chart(name);
      const int n = c.dim();
      std::vector<int> all(n + 1);
      std::iota(all.begin(), all.end(), 0);
      const Point x = c.sample_point(rng);
      const MetricJet mj = c.metric_jet(x);
      const Christoffel G = christoffel(mj);
      const FormJet a = FormField::random(n, rng, all).jet(x);
      const FormJet ga = forms_chirality(mj, a);
      CHECK(form_distance(forms_chirality(mj, ga), a) < 1e-10 * check_scale(a));
      if (c.riemannian()) {
        const FormJet lhs = forms_dirac(mj, G, ga) + forms_chirality(mj, forms_dirac(mj, G, a));
        CHECK(form_norm(lhs) < 1e-10 * check_scale(a));
        const FormJet dstar = -1.0 * forms_chirality(mj, exterior_derivative(ga));
        CHECK(form_distance(dstar, coderivative_connection(mj, G, a).truncated(1)) < 1e-10 * check_scale(a));
      }
      const FormJet v = FormField::random(n, rng, {1}).jet(x);
      CHECK(form_distance(forms_chirality(mj, epsilon(v, a)), interior_covector(mj, v, ga)) < 1e-10 * check_scale(a));
    }
  }

  TEST_CASE("Laplace-Beltrami equals d*d on functions") {
    std::mt19937_64 rng(37);
    for (const char* name : {"sphere2", "hyperbolic4", "poly3"}) {
      const Chart c = make_chart(name);
      const Point x = c.sample_point(rng);
      const MetricJet mj = c.metric_jet(x);
      const Christoffel G = christoffel(mj);
      const CJet f = Polynomial::random(c.dim(), 4, 5, rng).evaluate(coordinate_jets(x));
      const CJet lb = laplace_beltrami(mj, G, f);
      const FormJet dd = coderivative_connection(mj, G, differential(x, f));
      CHECK(std::abs(lb.value() - dd.c[0].value()) < 1e-10 * (1 + std::abs(lb.value())));
      // -div grad route
      const auto grad = gradient(mj, f.map([](const cplx& z) { return z.real(); }));
      CHECK(std::abs(lb.value().real() + divergence(mj, grad).value()) < 1e-10 * (1 + std::abs(lb.value())));
    }
  }

  TEST_CASE("coderivative is the adjoint of d on the flat torus") {
    const int n = 2, N = 24;
    auto trig = [](double a, double b, int k1, int k2, double ph) -> ScalarField {
      return [=](std::span<const RJet> x) {
        RJet arg = x[0] * double(k1) + x[1] * double(k2) + ph;
        return to_complex(cos(arg)) * cplx(a, 0) + to_complex(sin(arg)) * cplx(0, b);
      };
    };
    FormField alpha{n, {{1u, trig(0.7, 0.2, 1, 2, 0.3)}, {2u, trig(-0.4, 0.9, 2, -1, 1.1)}}};
    FormField beta{n, {{0u, trig(0.5, -0.3, 1, 2, 0.2)}, {3u, trig(0.8, 0.1, 0, 2, -0.5)}}};
    FormField gamma{n, {{1u, trig(0.3, 0.6, 0, 2, 0.9)}, {2u, trig(-0.2, 0.4, 0, 2, 0.4)}}};
    const Chart c = Chart::torus(n);
    cplx lhs0 = 0, rhs0 = 0, lhs2 = 0, rhs2 = 0, stokes = 0;
    const double h = 2 * std::numbers::pi / N;
    for (int i = 0; i < N; ++i)
      for (int j = 0; j < N; ++j) {
        const Point x{i * h, j * h};
        const MetricJet mj = c.metric_jet(x);
        const Christoffel G = christoffel(mj);
        const FormJet a = alpha.jet(x), b = beta.jet(x), g = gamma.jet(x);
        lhs0 += form_inner(mj, coderivative_connection(mj, G, a).truncated(0), b.grade(0).truncated(0));
        rhs0 += form_inner(mj, a.truncated(0), exterior_derivative(b.grade(0)));
        lhs2 += form_inner(mj, coderivative_connection(mj, G, b.grade(2)).truncated(0), g.truncated(0));
        rhs2 += form_inner(mj, b.grade(2).truncated(0), exterior_derivative(g));
        stokes += exterior_derivative(a).c[3].value();
      }
    CHECK(std::abs(lhs0 - rhs0) * h * h < 1e-12);
    CHECK(std::abs(lhs2 - rhs2) * h * h < 1e-12);
    CHECK(std::abs(stokes) * h * h < 1e-12);
    CHECK(std::abs(lhs0) * h * h > 1e-2);
    CHECK(std::abs(lhs2) * h * h > 1e-2);
  }

  TEST_CASE("errors") {
    const FormJet a = FormJet::zero({0.1, 0.2});
    const FormJet b = FormJet::zero({0.1, 0.3});
    CHECK_THROWS_AS(a + b, DomainError);
    CHECK_THROWS_AS(exterior_derivative(exterior_derivative(exterior_derivative(a))), OrderError);
    const MetricJet mj = Chart::flat(3).metric_jet({0.0, 0.0, 0.0});
    CHECK_THROWS_AS(forms_chirality(mj, FormJet::zero({0.0, 0.0, 0.0})), DimensionError);
    CHECK_THROWS_AS(hodge_star(mj, a), DimensionError);
  }
}
