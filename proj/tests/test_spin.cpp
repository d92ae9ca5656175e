#include "doctest.h"
#include "support.hpp"

#include "superdirac/spin.hpp"

using namespace superdirac;

namespace {

double vnorm(const CVec& v) { return v.size() ? v.cwiseAbs().maxCoeff() : 0.0; }

const std::vector<std::string> kEvenRiemannian{"flat",   "flat2",   "flat4",       "torus",       "torus2", "torus4",
                                               "sphere2", "sphere4", "hyperbolic2", "hyperbolic4", "poly2",  "poly4"};
const std::vector<std::string> kConformal{"sphere2", "sphere4", "hyperbolic2", "hyperbolic4"};

}  // namespace

TEST_SUITE("spin") {
  TEST_CASE("orthonormal gammas and chirality") {
    for (int n = 2; n <= 6; n += 2) {
      const SpinModule sm = spin_module(n);
      CHECK(sm.m == (1 << (n / 2)));
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const CMat ac = sm.Gamma[i] * sm.Gamma[j] + sm.Gamma[j] * sm.Gamma[i];
          CHECK(ac == CMat(-2.0 * (i == j) * CMat::Identity(sm.m, sm.m)));
        }
      CHECK(sm.chirality * sm.chirality == CMat(CMat::Identity(sm.m, sm.m)));
      int plus = 0;
      for (int a = 0; a < sm.m; ++a) {
        for (int b = 0; b < sm.m; ++b)
          if (a != b) CHECK(sm.chirality(a, b) == cplx(0));
        CHECK(std::abs(std::abs(sm.chirality(a, a).real()) - 1.0) == 0.0);
        plus += sm.chirality(a, a).real() > 0;
      }
      CHECK(plus == sm.m / 2);
      for (const auto& g : sm.Gamma) CHECK(sm.chirality * g + g * sm.chirality == CMat(CMat::Zero(sm.m, sm.m)));
    }
    // One negative direction: Gamma_0^2 = +1.
    const SpinModule mk = spin_module(4, 1);
    CHECK(mk.Gamma[0] * mk.Gamma[0] == CMat(CMat::Identity(4, 4)));
    CHECK(mk.Gamma[1] * mk.Gamma[1] == CMat(-CMat::Identity(4, 4)));
    CHECK((mk.chirality * mk.chirality - CMat::Identity(4, 4)).cwiseAbs().maxCoeff() == 0.0);
    for (const auto& g : mk.Gamma) CHECK((mk.chirality * g + g * mk.chirality).cwiseAbs().maxCoeff() == 0.0);
  }

  TEST_CASE("frames on every registered chart") {
    std::mt19937_64 rng(61);
    for (const auto& name : chart_names()) {
      const Chart chart = make_chart(name);
      for (int t = 0; t < 5; ++t) {
        const Point x = chart.sample_point(rng);
        const FrameField f = build_frame(chart, x);
        CHECK_MESSAGE(frame_residual(f, chart.metric_jet(x)).max() < 1e-10, name);
      }
    }
    // Conformal closed form.
    const Chart s2 = make_chart("sphere2");
    const Point x{0.4, -0.3};
    const double lam = 0.5 * (1 + 0.16 + 0.09);
    const FrameField f = build_frame(s2, x);
    CHECK(f.theta(0, 0).value() == doctest::Approx(1 / lam).epsilon(1e-15));
    CHECK(f.E(1, 1).value() == doctest::Approx(lam).epsilon(1e-15));
    CHECK(f.E(1, 1).d(0) == doctest::Approx(0.4).epsilon(1e-15));
    CHECK(f.E(0, 1).value() == 0.0);
    // g = 4 delta at a point: coframe 2 delta.
    const Chart c4 = Chart::from_jets(
        "scaled", 2,
        [](std::span<const RJet> y) {
          const RJet s = y[0] * y[1] + 4.0;
          return std::vector<RJet>{s, RJet::constant(2, 0.0), RJet::constant(2, 0.0), s};
        },
        [](const Point&) { return true; });
    const FrameField f4 = build_frame(c4, {0.0, 0.7});
    CHECK(f4.theta(0, 0).value() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(f4.theta(1, 1).value() == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(std::abs(f4.theta(0, 1).value()) < 1e-15);
    // Frame jets agree with differences of frames at nearby points.
    const Chart p = make_chart("poly4");
    const Point y = p.sample_point(rng);
    const FrameField fy = build_frame(p, y);
    const double h = 1e-5;
    for (int k = 0; k < 4; ++k) {
      Point a = y, b = y;
      a[k] += h;
      b[k] -= h;
      const FrameField fa = build_frame(p, a), fb = build_frame(p, b);
      for (int e = 0; e < 16; ++e) {
        CHECK(std::abs((fa.frame[e].value() - fb.frame[e].value()) / (2 * h) - fy.frame[e].d(k)) < 1e-8);
        CHECK(std::abs((fa.frame[e].d(k) - fb.frame[e].d(k)) / (2 * h) - fy.frame[e].d2(k, k)) < 1e-6);
      }
    }
  }

  TEST_CASE("coordinate gammas satisfy the metric Clifford relation") {
    std::mt19937_64 rng(62);
    for (const auto& name : chart_names()) {
      const Chart chart = make_chart(name);
      if (chart.dim() % 2) continue;
      const SpinModule sm = spin_module(chart.dim(), chart.negative_directions());
      const Point x = chart.sample_point(rng);
      const auto g = sm.coordinate_gammas(build_frame(chart, x));
      const Eigen::MatrixXd gi = chart.metric_jet(x).inverse_value();
      for (int j = 0; j < chart.dim(); ++j)
        for (int k = 0; k < chart.dim(); ++k) {
          const CMat ac = g[j].value() * g[k].value() + g[k].value() * g[j].value();
          CHECK_MESSAGE((ac + 2.0 * gi(j, k) * CMat::Identity(sm.m, sm.m)).cwiseAbs().maxCoeff() < 1e-10, name);
        }
    }
  }

  TEST_CASE("frame connection coefficients") {
    std::mt19937_64 rng(63);
    for (const auto& name : kEvenRiemannian) {
      const Chart chart = make_chart(name);
      const SpinModule sm = spin_module(chart.dim());
      const SpinConnectionData sc = spin_connection(chart, sm, chart.sample_point(rng), zero_potential(chart.dim()));
      CHECK_MESSAGE(omega_antisymmetry_residual(sc) < 1e-12, name);
    }
    // (e_j, nabla_{e_i} e_k) = d_j lambda delta_ik - d_k lambda delta_ij on conformal charts.
    for (const auto& name : kConformal) {
      const Chart chart = make_chart(name);
      const int n = chart.dim();
      const SpinModule sm = spin_module(n);
      const Point x = chart.sample_point(rng);
      const SpinConnectionData sc = spin_connection(chart, sm, x, zero_potential(n));
      const RJet lam = chart.conformal_factor(coordinate_jets(x));
      const auto C = frame_connection_coefficients(sc);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            const double ref = lam.d(j) * (i == k) - lam.d(k) * (i == j);
            CHECK_MESSAGE(std::abs(C[(i * n + j) * n + k] - ref) < 1e-10, name);
          }
    }
    // S^2 at (1, 0): lambda = 1 and d lambda = (1, 0).
    const SpinConnectionData s2 = spin_connection(make_chart("sphere2"), spin_module(2), {1.0, 0.0}, zero_potential(2));
    const auto C = frame_connection_coefficients(s2);
    CHECK(C[(1 * 2 + 0) * 2 + 1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(C[(1 * 2 + 1) * 2 + 0] == doctest::Approx(-1.0).epsilon(1e-14));
    CHECK(std::abs(C[(0 * 2 + 1) * 2 + 0]) < 1e-14);
    CHECK(std::abs(C[(0 * 2 + 0) * 2 + 1]) < 1e-14);
    // H^2 at (0.5, 0): d lambda = (-0.5, 0).
    const SpinConnectionData h2 = spin_connection(make_chart("hyperbolic2"), spin_module(2), {0.5, 0.0}, zero_potential(2));
    const auto H = frame_connection_coefficients(h2);
    CHECK(H[(1 * 2 + 0) * 2 + 1] == doctest::Approx(-0.5).epsilon(1e-14));
    CHECK(H[(1 * 2 + 1) * 2 + 0] == doctest::Approx(0.5).epsilon(1e-14));
  }

  TEST_CASE("spin Dirac operator: frame assembly equals the alpha form") {
    std::mt19937_64 rng(64);
    for (const auto& name : kEvenRiemannian) {
      const Chart chart = make_chart(name);
      const int n = chart.dim();
      const SpinModule sm = spin_module(n);
      for (int t = 0; t < 5; ++t) {
        const Point x = chart.sample_point(rng);
        const SpinConnectionData sc = spin_connection(chart, sm, x, random_potential(n, 70 + t));
        const SectionJet psi = random_section(x, sm.m, rng);
        const CVec a = spin_dirac(sc, sm, psi), b = spin_dirac_alpha(sc, sm, psi);
        CHECK_MESSAGE(vnorm(a - b) < 1e-10 * (1 + vnorm(a)), name);
        // Dirac test with a polynomial function.
        const CJet f = Polynomial::random(n, 3, 4, rng).evaluate(coordinate_jets(x));
        const DiracOperatorData D = spin_dirac_operator(sc, sm);
        CVec cdf = CVec::Zero(sm.m);
        for (int i = 0; i < n; ++i) cdf += f.d(i) * (D.gamma[i].value() * psi.v.value());
        const CVec lhs = spin_dirac(sc, sm, scale(f, psi)) - f.value() * a;
        CHECK_MESSAGE(vnorm(lhs - cdf) < 1e-10 * (1 + vnorm(a)) * (1 + std::abs(f.value())), name);
      }
    }
    // alpha_3 = 0 and alpha_1 = (n - 1) lambda^{-1} d lambda on conformal charts (frame components (n - 1) d_j lambda).
    for (const auto& name : kConformal) {
      const Chart chart = make_chart(name);
      const int n = chart.dim();
      const Point x = chart.sample_point(rng);
      const SpinConnectionData sc = spin_connection(chart, spin_module(n), x, zero_potential(n));
      const AlphaForm a = alpha_form(sc);
      const RJet lam = chart.conformal_factor(coordinate_jets(x));
      for (double v : a.alpha3) CHECK(std::abs(v) < 1e-12);
      for (int j = 0; j < n; ++j) CHECK(std::abs(a.alpha1[j] - (n - 1) * lam.d(j)) < 1e-12);
    }
    // A generic chart has a nonzero three-form part.
    const Chart p4 = make_chart("poly4");
    const SpinConnectionData sc = spin_connection(p4, spin_module(4), p4.sample_point(rng), zero_potential(4));
    double w = 0;
    for (double v : alpha_form(sc).alpha3) w = std::max(w, std::abs(v));
    CHECK(w > 1e-4);
    // Flat, A = 0: the plain d-slash.
    const Chart flat = make_chart("flat2");
    const SpinModule sm = spin_module(2);
    const Point x{0.2, 0.3};
    const SectionJet psi = random_section(x, 2, rng);
    const SpinConnectionData fs = spin_connection(flat, sm, x, zero_potential(2));
    const CVec ref = sm.Gamma[0] * psi.v.d(0) + sm.Gamma[1] * psi.v.d(1);
    CHECK(vnorm(spin_dirac(fs, sm, psi) - ref) == 0.0);
  }

  TEST_CASE("conformal closed form matches the frame assembly") {
    std::mt19937_64 rng(65);
    for (const auto& name : kConformal) {
      const Chart chart = make_chart(name);
      const int n = chart.dim();
      const SpinModule sm = spin_module(n);
      for (int t = 0; t < 50; ++t) {
        const Point x = chart.sample_point(rng);
        const U1Potential A = t % 5 ? random_potential(n, 300 + t) : zero_potential(n);
        const SpinConnectionData sc = spin_connection(chart, sm, x, A);
        const SectionJet psi = random_section(x, sm.m, rng);
        const CVec a = spin_dirac(sc, sm, psi), b = conformal_dirac(chart, sm, A, psi);
        CHECK_MESSAGE(vnorm(a - b) < 1e-9 * (1 + vnorm(a)), name);
      }
    }
  }

  TEST_CASE("Lichnerowicz formula on even-dimensional Riemannian charts") {
    std::mt19937_64 rng(66);
    for (const auto& name : kEvenRiemannian) {
      const Chart chart = make_chart(name);
      const int n = chart.dim();
      const SpinModule sm = spin_module(n);
      for (int t = 0; t < 10; ++t) {
        const Point x = chart.sample_point(rng);
        const U1Potential A = t % 2 ? random_potential(n, 400 + t) : zero_potential(n);
        const SpinConnectionData sc = spin_connection(chart, sm, x, A);
        const SectionJet psi = random_section(x, sm.m, rng);
        const LichnerowiczTerms L = lichnerowicz(chart, sm, sc, psi);
        CHECK_MESSAGE(L.residual < 1e-7 * (1 + vnorm(L.square)), name);
        // D^2 by formula against D applied twice.
        const DiracOperatorData D = spin_dirac_operator(sc, sm);
        CHECK_MESSAGE(vnorm(L.square - apply_dirac(D, apply_dirac(D, psi)).v.value()) < 1e-10 * (1 + vnorm(L.square)), name);
      }
    }
    // Flat chart, A = 0: both sides are -sum d^2 psi.
    const Chart flat = make_chart("flat4");
    const SpinModule sm = spin_module(4);
    const Point x{0.1, 0.2, 0.3, 0.4};
    const SectionJet psi = random_section(x, 4, rng);
    const LichnerowiczTerms L = lichnerowicz(flat, sm, spin_connection(flat, sm, x, zero_potential(4)), psi);
    CHECK(L.residual < 1e-14);
    // S^2: r / 4 = 1/2.
    const Chart s2 = make_chart("sphere2");
    const SectionJet p2 = random_section({0.3, -0.1}, 2, rng);
    const LichnerowiczTerms Ls = lichnerowicz(s2, spin_module(2), spin_connection(s2, spin_module(2), {0.3, -0.1}, zero_potential(2)), p2);
    CHECK(vnorm(Ls.scalar - 0.5 * p2.v.value()) < 1e-9);
    CHECK(Ls.residual < 1e-7);
    // Flat torus with A = i sin(x^1) dx^2: the q(F) term is active.
    const Chart t2 = make_chart("torus2");
    const U1Potential As = [](std::span<const RJet> y) {
      return std::vector<CJet>{CJet::constant(2, cplx(0)), cplx(0, 1) * to_complex(sin(y[0]))};
    };
    const Point y{0.7, 2.1};
    const SectionJet pt = random_section(y, 2, rng);
    const LichnerowiczTerms Lt = lichnerowicz(t2, spin_module(2), spin_connection(t2, spin_module(2), y, As), pt);
    CHECK(vnorm(Lt.twisting) > 1e-2);
    CHECK(Lt.residual < 1e-7);
  }

  TEST_CASE("chirality is anticommuting and parallel") {
    std::mt19937_64 rng(67);
    for (const auto& name : kEvenRiemannian) {
      const Chart chart = make_chart(name);
      const SpinModule sm = spin_module(chart.dim());
      const SpinConnectionData sc = spin_connection(chart, sm, chart.sample_point(rng), random_potential(chart.dim(), 5));
      const ChiralityResidual r = chirality_checks(sm, sc);
      CHECK_MESSAGE(r.max() < 1e-10, name);
      if (chart.kind() == ChartKind::Flat || chart.kind() == ChartKind::Torus) CHECK_MESSAGE(r.max() == 0.0, name);
    }
  }

  TEST_CASE("spin connections, Clifford connections and twisting curvature") {
    std::mt19937_64 rng(68);
    for (const auto& name : kEvenRiemannian) {
      const Chart chart = make_chart(name);
      const int n = chart.dim();
      const SpinModule sm = spin_module(n);
      const Point x = chart.sample_point(rng);
      const SpinConnectionData s1 = spin_connection(chart, sm, x, random_potential(n, 1));
      const SpinConnectionData s2 = spin_connection(chart, sm, x, random_potential(n, 2));
      for (int l = 0; l < n; ++l) {
        const CMatJet diff = s1.connection[l] - s2.connection[l];
        const CMatJet ref = to_matrix(0.5 * (s1.A[l] - s2.A[l]), CMat::Identity(sm.m, sm.m));
        CHECK_MESSAGE(jet_distance(diff, ref) < 1e-14, name);
      }
      const MetricJet mj = chart.metric_jet(x);
      const CurvatureData curv = curvature(mj);
      const auto gam = sm.coordinate_gammas(s1.frame);
      CHECK_MESSAGE(clifford_connection_residual(gam, s1.connection, curv.gamma) < 1e-10, name);
      std::vector<CMat> gv;
      for (const auto& g : gam) gv.push_back(g.value());
      // Twisting curvature is F_ij / 2 times the identity.
      const auto Ftw = twisting_curvature(connection_curvature(s1.connection), curv, gv);
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
          const cplx F = s1.A[j].d(i) - s1.A[i].d(j);
          CHECK_MESSAGE((Ftw[i * n + j] - 0.5 * F * CMat::Identity(sm.m, sm.m)).cwiseAbs().maxCoeff() < 1e-9, name);
        }
      const SpinConnectionData s0 = spin_connection(chart, sm, x, zero_potential(n));
      const auto F0 = twisting_curvature(connection_curvature(s0.connection), curv, gv);
      for (const auto& f : F0) CHECK_MESSAGE(f.cwiseAbs().maxCoeff() < 1e-9, name);
    }
  }

  TEST_CASE("spinor bundle as a Clifford module for superconnections") {
    std::mt19937_64 rng(69);
    for (const char* name : {"sphere2", "poly4", "minkowski2"}) {
      const Chart chart = make_chart(name);
      const int n = chart.dim();
      for (const ModuleSpec& ms : {spinor_module(chart), twisted_module(spinor_module(chart), {1, 1})}) {
        const auto S = make_superconnection(n, ms.grading, {0, 1, 2}, "random", 9);
        const Point x = chart.sample_point(rng);
        const MetricJet mj = chart.metric_jet(x);
        const DiracOperatorData D = quantize_superconnection(S, ms, mj);
        const SectionJet psi = random_section(x, ms.m, rng);
        const CVec d0 = apply_dirac(D, psi).v.value();
        for (int k = 0; k < n; ++k) {
          const CVec lhs = apply_dirac(D, scale(to_complex(coordinate_jets(x)[k]), psi)).v.value() - x[k] * d0;
          CHECK_MESSAGE(vnorm(lhs - D.gamma[k].value() * psi.v.value()) < 1e-10 * (1 + vnorm(d0)), name);
        }
        const CVec sq = dirac_square(D, psi);
        CHECK_MESSAGE(vnorm(sq - apply_dirac(D, apply_dirac(D, psi)).v.value()) < 1e-10 * (1 + vnorm(sq)), name);
      }
    }
  }

  TEST_CASE("errors") {
    CHECK_THROWS_AS(spin_module(3), DimensionError);
    CHECK_THROWS_AS(spin_module(8), DimensionError);
    const Chart p2 = make_chart("poly2");
    const SpinModule sm = spin_module(2);
    std::mt19937_64 rng(70);
    const Point x = p2.sample_point(rng);
    CHECK_THROWS_AS(conformal_dirac(p2, sm, zero_potential(2), random_section(x, 2, rng)), DomainError);
    const U1Potential real = [](std::span<const RJet> y) {
      return std::vector<CJet>{to_complex(y[0]), CJet::constant(2, cplx(0))};
    };
    CHECK_THROWS_AS(spin_connection(p2, sm, x, real), DomainError);
    const Chart indefinite = Chart::from_jets(
        "indefinite", 2,
        [](std::span<const RJet> y) {
          return std::vector<RJet>{-(y[0] * y[0]) - 1.0, RJet::constant(2, 0.0), RJet::constant(2, 0.0),
                                   RJet::constant(2, 1.0)};
        },
        [](const Point&) { return true; });
    CHECK_THROWS_AS(build_frame(indefinite, {0.1, 0.2}), DomainError);
    const SpinConnectionData sc = spin_connection(p2, sm, x, zero_potential(2));
    CHECK_THROWS_AS(spin_dirac_alpha(sc, sm, random_section(x, 2, rng, 0)), OrderError);
  }
}
