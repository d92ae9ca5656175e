#include "superdirac/spin.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace superdirac {

namespace {

bool constant_metric(const Chart& chart) {
  return chart.kind() == ChartKind::Flat || chart.kind() == ChartKind::Torus || chart.kind() == ChartKind::Minkowski;
}

RJet rconst(int n, double v) { return RJet::constant(n, v); }

}  // namespace

FrameField build_frame(const Chart& chart, const Point& x) {
  const int n = chart.dim();
  if (static_cast<int>(x.size()) != n) throw DimensionError("point has the wrong dimension");
  if (!chart.in_domain(x)) throw DomainError("point lies outside the chart domain");
  FrameField f;
  f.x = x;
  f.n = n;
  f.coframe.assign(n * n, rconst(n, 0.0));
  f.frame.assign(n * n, rconst(n, 0.0));
  f.signs.assign(n, 1);
  if (chart.conformal_type()) {
    const RJet lam = chart.conformal_factor(coordinate_jets(x));
    const RJet inv = inverse(lam);
    for (int i = 0; i < n; ++i) {
      f.frame[i * n + i] = lam;
      f.coframe[i * n + i] = inv;
    }
    return f;
  }
  const MetricJet mj = chart.metric_jet(x);
  if (constant_metric(chart)) {
    const Eigen::MatrixXd g = mj.metric_value();
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j)
        if (i != j && g(i, j) != 0.0) throw DomainError("constant metric is not diagonal");
      if (std::abs(std::abs(g(i, i)) - 1.0) > 1e-14) throw DomainError("constant metric is not orthonormal");
      f.signs[i] = g(i, i) < 0 ? -1 : 1;
      f.frame[i * n + i] = rconst(n, 1.0);
      f.coframe[i * n + i] = rconst(n, 1.0);
    }
    return f;
  }
  if (!chart.riemannian()) throw DomainError("frames on indefinite charts need a constant metric");
  // g = L L^T; e^i = L_ki dx^k and e_i = (L^{-1})_ik d_k.
  std::vector<RJet> L(n * n, rconst(n, 0.0)), Li(n * n, rconst(n, 0.0));
  for (int j = 0; j < n; ++j) {
    RJet s = mj.metric(j, j);
    for (int p = 0; p < j; ++p) s -= L[j * n + p] * L[j * n + p];
    if (s.value() <= 0) throw DomainError("metric is not positive definite; indefinite frames need a constant metric");
    L[j * n + j] = sqrt(s);
    const RJet inv = inverse(L[j * n + j]);
    for (int i = j + 1; i < n; ++i) {
      RJet t = mj.metric(i, j);
      for (int p = 0; p < j; ++p) t -= L[i * n + p] * L[j * n + p];
      L[i * n + j] = t * inv;
    }
  }
  for (int i = 0; i < n; ++i) {
    const RJet inv = inverse(L[i * n + i]);
    Li[i * n + i] = inv;
    for (int j = 0; j < i; ++j) {
      RJet s = rconst(n, 0.0);
      for (int p = j; p < i; ++p) s += L[i * n + p] * Li[p * n + j];
      Li[i * n + j] = -(s * inv);
    }
  }
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      f.coframe[i * n + k] = L[k * n + i];
      f.frame[i * n + k] = Li[i * n + k];
    }
  return f;
}

double FrameResidual::max() const { return std::max({orthonormality, duality, reconstruction}); }

FrameResidual frame_residual(const FrameField& f, const MetricJet& mj) {
  const int n = f.n;
  const Eigen::MatrixXd gi = mj.inverse_value();
  FrameResidual r;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      double on = 0, du = 0, rc = 0;
      for (int k = 0; k < n; ++k) {
        du += f.E(i, k).value() * f.theta(j, k).value();
        rc += f.signs[k] * f.E(k, i).value() * f.E(k, j).value();
        for (int l = 0; l < n; ++l) on += f.theta(i, k).value() * f.theta(j, l).value() * gi(k, l);
      }
      r.orthonormality = std::max(r.orthonormality, std::abs(on - (i == j ? f.signs[i] : 0)));
      r.duality = std::max(r.duality, std::abs(du - (i == j ? 1.0 : 0.0)));
      r.reconstruction = std::max(r.reconstruction, std::abs(rc - gi(i, j)));
    }
  return r;
}

std::vector<CMatJet> SpinModule::coordinate_gammas(const FrameField& f) const {
  if (f.n != n) throw DimensionError("frame and spinor module dimensions differ");
  std::vector<CMatJet> g;
  for (int k = 0; k < n; ++k) {
    CMatJet c = CMatJet::constant(n, CMat::Zero(m, m));
    for (int i = 0; i < n; ++i) c += f.E(i, k) * Gamma[i];
    g.push_back(std::move(c));
  }
  return g;
}

SpinModule spin_module(int n, int negative) {
  if (n < 2 || n % 2 || n > kMaxJetDim) throw DimensionError("spinor modules need an even dimension between 2 and 6");
  if (negative < 0 || negative > n) throw DimensionError("bad number of negative directions");
  const int h = n / 2;
  SpinModule sm;
  sm.n = n;
  sm.m = 1 << h;
  sm.negative = negative;
  const cplx I(0, 1);
  for (int k = 0; k < h; ++k) {
    const CMat up = epsilon_matrix(h, k);
    const CMat down = up.adjoint();
    sm.Gamma.push_back(up - down);
    sm.Gamma.push_back(I * (up + down));
  }
  for (int i = 0; i < negative; ++i) sm.Gamma[i] *= I;
  CMat p = CMat::Identity(sm.m, sm.m);
  for (const auto& g : sm.Gamma) p = p * g;
  cplx phase = 1;
  for (int k = 0; k < h + negative; ++k) phase *= I;
  sm.chirality = phase * p;
  return sm;
}

ModuleSpec spinor_module(const Chart& chart) {
  const SpinModule sm = spin_module(chart.dim(), chart.negative_directions());
  ModuleSpec ms;
  ms.name = "spinor";
  ms.n = sm.n;
  ms.m = sm.m;
  ms.grading = sm.chirality;
  ms.gammas = [chart, sm](const MetricJet& mj) { return sm.coordinate_gammas(build_frame(chart, mj.x)); };
  return ms;
}

U1Potential zero_potential(int n) {
  return [n](std::span<const RJet> x) {
    return std::vector<CJet>(n, CJet::constant(n, cplx(0), x.empty() ? kMaxJetOrder : x[0].order()));
  };
}

U1Potential random_potential(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> b(n), a(n * n), phi(n * n);
  for (int l = 0; l < n; ++l) {
    b[l] = u(rng);
    for (int k = 0; k < n; ++k) {
      a[l * n + k] = u(rng);
      phi[l * n + k] = 3.0 * u(rng);
    }
  }
  return [n, b, a, phi](std::span<const RJet> x) {
    std::vector<CJet> A;
    for (int l = 0; l < n; ++l) {
      RJet s = RJet::constant(n, b[l], x[0].order());
      for (int k = 0; k < n; ++k) s += a[l * n + k] * sin(x[k] + phi[l * n + k]);
      A.push_back(cplx(0, 1) * to_complex(s));
    }
    return A;
  };
}

SpinConnectionData spin_connection(const Chart& chart, const SpinModule& sm, const Point& x, const U1Potential& A) {
  const int n = chart.dim();
  if (sm.n != n) throw DimensionError("spinor module and chart dimensions differ");
  SpinConnectionData sc;
  sc.x = x;
  sc.n = n;
  sc.frame = build_frame(chart, x);
  const MetricJet mj = chart.metric_jet(x);
  const Christoffel G = christoffel(mj);
  const FrameField& f = sc.frame;
  sc.omega.assign(n * n * n, rconst(n, 0.0));
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      // nabla_{d_l} e_k in coordinates.
      std::vector<RJet> v;
      for (int m = 0; m < n; ++m) {
        RJet t = f.E(k, m).partial(l);
        for (int p = 0; p < n; ++p) t += G(m, l, p) * f.E(k, p);
        v.push_back(std::move(t));
      }
      for (int j = 0; j < n; ++j) {
        RJet s = rconst(n, 0.0);
        for (int m = 0; m < n; ++m) s += f.theta(j, m) * v[m];
        sc.omega[(j * n + k) * n + l] = double(f.signs[j]) * s;
      }
    }
  sc.A = A(coordinate_jets(x));
  if (static_cast<int>(sc.A.size()) != n) throw DimensionError("potential needs one component per direction");
  for (const auto& a : sc.A) {
    double re = std::abs(a.value().real());
    for (int k = 0; k < n && a.order() >= 1; ++k) re = std::max(re, std::abs(a.d(k).real()));
    if (re > 1e-12) throw DomainError("U(1) potential must be purely imaginary");
  }
  const CMat id = CMat::Identity(sm.m, sm.m);
  for (int l = 0; l < n; ++l) {
    CMatJet c = to_matrix(0.5 * sc.A[l], id);
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) c -= (0.25 * sc.w(j, k, l)) * CMat(sm.Gamma[j] * sm.Gamma[k]);
    sc.connection.push_back(std::move(c));
  }
  return sc;
}

double omega_antisymmetry_residual(const SpinConnectionData& sc) {
  double w = 0;
  for (int j = 0; j < sc.n; ++j)
    for (int k = 0; k < sc.n; ++k)
      for (int l = 0; l < sc.n; ++l) w = std::max(w, jet_distance(sc.w(j, k, l), -sc.w(k, j, l)));
  return w;
}

std::vector<double> frame_connection_coefficients(const SpinConnectionData& sc) {
  const int n = sc.n;
  std::vector<double> c(n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) c[(i * n + j) * n + k] += sc.frame.E(i, l).value() * sc.w(j, k, l).value();
  return c;
}

DiracOperatorData spin_dirac_operator(const SpinConnectionData& sc, const SpinModule& sm) {
  return dirac_from_connection(sm.coordinate_gammas(sc.frame), sc.connection,
                               CMatJet::constant(sc.n, CMat::Zero(sm.m, sm.m)), sc.x);
}

CVec spin_dirac(const SpinConnectionData& sc, const SpinModule& sm, const SectionJet& psi) {
  return apply_dirac(spin_dirac_operator(sc, sm), psi).v.value();
}

AlphaForm alpha_form(const SpinConnectionData& sc) {
  const int n = sc.n;
  const FrameField& f = sc.frame;
  const auto C = frame_connection_coefficients(sc);
  AlphaForm a;
  a.alpha1.assign(n, 0.0);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) a.alpha1[j] += C[(i * n + j) * n + i];
  // (e_j, [e_i, e_k]) from the frame jets alone, then antisymmetrized.
  std::vector<double> br(n * n * n, 0.0);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int m = 0; m < n; ++m) {
        double v = 0;
        for (int l = 0; l < n; ++l) v += f.E(i, l).value() * f.E(k, m).d(l) - f.E(k, l).value() * f.E(i, m).d(l);
        for (int j = 0; j < n; ++j) br[(i * n + j) * n + k] += f.signs[j] * f.theta(j, m).value() * v;
      }
  a.alpha3.assign(n * n * n, 0.0);
  const int perms[6][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}, {1, 0, 2}, {0, 2, 1}, {2, 1, 0}};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const int idx[3] = {i, j, k};
        double s = 0;
        for (int p = 0; p < 6; ++p) {
          const int a0 = idx[perms[p][0]], a1 = idx[perms[p][1]], a2 = idx[perms[p][2]];
          s += (p < 3 ? 1.0 : -1.0) * br[(a0 * n + a1) * n + a2];
        }
        a.alpha3[(i * n + j) * n + k] = s / 6.0;
      }
  return a;
}

CVec spin_dirac_alpha(const SpinConnectionData& sc, const SpinModule& sm, const SectionJet& psi) {
  const int n = sc.n;
  if (psi.x != sc.x) throw DomainError("section jet lives at a different point");
  if (psi.v.order() < 1) throw OrderError("Dirac operator needs a section 1-jet");
  const auto gam = sm.coordinate_gammas(sc.frame);
  const AlphaForm a = alpha_form(sc);
  const CVec& p = psi.v.value();
  CVec out = CVec::Zero(sm.m);
  for (int l = 0; l < n; ++l) out += gam[l].value() * (psi.v.d(l) + 0.5 * sc.A[l].value() * p);
  // q(alpha) = 2 q(alpha_1) + 3 q(alpha_3), with q(alpha_3) = (1/3!) a_ijk Gamma_i Gamma_j Gamma_k.
  CMat q = CMat::Zero(sm.m, sm.m);
  for (int j = 0; j < n; ++j) q += 2.0 * a.alpha1[j] * sm.Gamma[j];
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) {
        const double c = a.alpha3[(i * n + j) * n + k];
        if (c != 0.0) q += 0.5 * c * (sm.Gamma[i] * sm.Gamma[j] * sm.Gamma[k]);
      }
  return out - 0.25 * (q * p);
}

CVec conformal_dirac(const Chart& chart, const SpinModule& sm, const U1Potential& A, const SectionJet& psi) {
  const int n = chart.dim();
  if (!chart.conformal_type()) throw DomainError("chart " + chart.name() + " is not conformally flat in closed form");
  if (sm.n != n) throw DimensionError("spinor module and chart dimensions differ");
  if (psi.v.order() < 1) throw OrderError("Dirac operator needs a section 1-jet");
  const auto xs = coordinate_jets(psi.x);
  const RJet lam = chart.conformal_factor(xs);
  if (lam.value() <= 0) throw DomainError("conformal factor must be positive");
  const RJet Lam = pow(lam, 0.5 * (n - 1));
  const CVecJet phi = to_complex(inverse(Lam)) * psi.v;
  const auto a = A(xs);
  CVec out = CVec::Zero(sm.m);
  for (int l = 0; l < n; ++l) out += sm.Gamma[l] * (phi.d(l) + 0.5 * a[l].value() * phi.value());
  return (Lam.value() * lam.value()) * out;
}

LichnerowiczTerms lichnerowicz(const Chart& chart, const SpinModule& sm, const SpinConnectionData& sc,
                               const SectionJet& psi) {
  const int n = sc.n;
  const MetricJet mj = chart.metric_jet(sc.x);
  const CurvatureData curv = curvature(mj);
  const DiracOperatorData D = spin_dirac_operator(sc, sm);
  LichnerowiczTerms t;
  t.square = dirac_square(D, psi);
  t.laplacian = canonical_laplacian(sc.connection, mj, curv.gamma, psi);
  t.scalar = 0.25 * curv.scalar * psi.v.value();
  // q(F) / 2 = F_kl c(dx^k) c(dx^l) / 4 with F_kl = d_k A_l - d_l A_k.
  CMat qf = CMat::Zero(sm.m, sm.m);
  for (int k = 0; k < n; ++k)
    for (int l = 0; l < n; ++l) {
      const cplx F = sc.A[l].d(k) - sc.A[k].d(l);
      qf += F * (D.gamma[k].value() * D.gamma[l].value());
    }
  t.twisting = 0.25 * (qf * psi.v.value());
  t.residual = (t.square - t.laplacian - t.scalar - t.twisting).cwiseAbs().maxCoeff();
  return t;
}

double ChiralityResidual::max() const { return std::max({square, anticommutator, parallel}); }

ChiralityResidual chirality_checks(const SpinModule& sm, const SpinConnectionData& sc) {
  ChiralityResidual r;
  const CMat& c = sm.chirality;
  r.square = (c * c - CMat::Identity(sm.m, sm.m)).cwiseAbs().maxCoeff();
  for (const auto& g : sm.coordinate_gammas(sc.frame))
    r.anticommutator = std::max(r.anticommutator, (c * g.value() + g.value() * c).cwiseAbs().maxCoeff());
  for (const auto& a : sc.connection) {
    r.parallel = std::max(r.parallel, (c * a.value() - a.value() * c).cwiseAbs().maxCoeff());
    for (int k = 0; k < sc.n && a.order() >= 1; ++k)
      r.parallel = std::max(r.parallel, (c * a.d(k) - a.d(k) * c).cwiseAbs().maxCoeff());
  }
  return r;
}

}  // namespace superdirac
