#include "superdirac/bundle.hpp"

#include <algorithm>
#include <numeric>
#include <regex>

#include "json.hpp"

namespace superdirac {

namespace {

struct DeltaPairing {
  double operator()(int i, int j) const { return i == j ? 1.0 : 0.0; }
};

struct MetricPairing {
  const MetricJet* mj;
  const RJet& operator()(int i, int j) const { return mj->inverse(i, j); }
};

CMat kron(const CMat& a, const CMat& b) {
  CMat r(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) r.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return r;
}

CMatJet zero_matrix_jet(int n, int m) { return CMatJet::constant(n, CMat::Zero(m, m)); }

CMat random_matrix(std::mt19937_64& rng, int m) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  CMat r(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) r(i, j) = cplx(u(rng), u(rng));
  return r;
}

CMat parity_part(const CMat& a, const CMat& eta, int parity) {
  return parity ? CMat((a - eta * a * eta) / 2.0) : CMat((a + eta * a * eta) / 2.0);
}

double parity_defect(const CMat& a, const CMat& eta, int parity) {
  const CMat t = eta * a * eta;
  return (parity ? CMat(t + a) : CMat(t - a)).cwiseAbs().maxCoeff();
}

int component_parity(Blade b) { return (blade_grade(b) + 1) % 2; }

void require_section(const Point& x, int m, const SectionJet& s) {
  if (s.x != x) throw DomainError("section jet lives at a different point");
  if (s.v.value().size() != m) throw DimensionError("section has the wrong fiber dimension");
}

SectionJet constant_section(const Point& y, const CVec& e, int order = kMaxJetOrder) {
  return {y, CVecJet::constant(static_cast<int>(y.size()), e, order)};
}

// nabla_i on bundle-valued forms: (d_i + A_i) on coefficients, Levi-Civita on the forms.
std::vector<BundleFormJet> bundle_covariant_derivative(const Christoffel& G, const std::vector<CMatJet>& A,
                                                       const BundleFormJet& a) {
  const int n = a.n;
  std::vector<BundleFormJet> out;
  for (int i = 0; i < n; ++i) {
    BundleFormJet r = BundleFormJet::zero(a.x, a.m);
    for (Blade I = 0; I < a.c.size(); ++I) {
      r.c[I] += a.c[I].partial(i) + A[i] * a.c[I];
      int pos = 0;
      for (Blade t = I; t; t &= t - 1, ++pos) {
        const int j = std::countr_zero(t);
        const Blade rest = I & ~(1u << j);
        for (int k = 0; k < n; ++k) {
          const int s = wedge_sign(1u << k, rest);
          if (!s) continue;
          CVecJet term = G(j, i, k) * a.c[I];
          term *= -double(s) * ((pos & 1) ? -1.0 : 1.0);
          r.c[rest | (1u << k)] += term;
        }
      }
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace

ModuleSpec forms_module(int n) {
  ModuleSpec ms;
  ms.name = "forms";
  ms.n = n;
  ms.m = 1 << n;
  ms.grading = degree_parity_matrix(n);
  std::vector<CMat> eps, iot;
  const Eigen::MatrixXd id = Eigen::MatrixXd::Identity(n, n);
  for (int i = 0; i < n; ++i) {
    eps.push_back(epsilon_matrix(n, i));
    iot.push_back(iota_matrix(n, i, id));
  }
  ms.gammas = [n, eps, iot](const MetricJet& mj) {
    if (mj.n != n) throw DimensionError("forms module dimension differs from the metric");
    std::vector<CMatJet> g;
    for (int i = 0; i < n; ++i) {
      CMatJet gi = CMatJet::constant(n, eps[i]);
      for (int j = 0; j < n; ++j) gi -= mj.inverse(i, j) * iot[j];
      g.push_back(std::move(gi));
    }
    return g;
  };
  return ms;
}

ModuleSpec twisted_module(const ModuleSpec& base, const std::vector<int>& signs) {
  const int k = static_cast<int>(signs.size());
  if (k < 1) throw DimensionError("twist needs a positive rank");
  CMat eta = CMat::Zero(k, k);
  for (int i = 0; i < k; ++i) eta(i, i) = signs[i] >= 0 ? 1.0 : -1.0;
  ModuleSpec ms;
  ms.name = base.name + "-twisted" + std::to_string(k);
  ms.n = base.n;
  ms.m = base.m * k;
  ms.grading = kron(base.grading, eta);
  const CMat idk = CMat::Identity(k, k);
  auto inner = base.gammas;
  ms.gammas = [inner, idk](const MetricJet& mj) {
    std::vector<CMatJet> g;
    for (const auto& gi : inner(mj)) g.push_back(gi.map([&](const CMat& v) { return kron(v, idk); }));
    return g;
  };
  return ms;
}

SectionJet random_section(const Point& x, int m, std::mt19937_64& rng, int order) {
  const int n = static_cast<int>(x.size());
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto rv = [&] {
    CVec v(m);
    for (int a = 0; a < m; ++a) v[a] = cplx(u(rng), u(rng));
    return v;
  };
  CVecJet j(n, order, rv());
  for (int k = 0; order >= 1 && k < n; ++k) j.d(k) = rv();
  for (int k = 0; order >= 2 && k < n; ++k)
    for (int l = k; l < n; ++l) {
      j.d2(k, l) = rv();
      j.d2(l, k) = j.d2(k, l);
    }
  return {x, j};
}

SectionJet scale(const CJet& f, const SectionJet& s) { return {s.x, f * s.v}; }

CMatJet MatrixPolynomial::evaluate(std::span<const RJet> x) const {
  const int dim = static_cast<int>(x.size());
  CMatJet r = CMatJet::constant(dim, CMat::Zero(m, m), x.empty() ? kMaxJetOrder : x[0].order());
  for (const auto& [M, pw] : terms) {
    RJet mono = RJet::constant(dim, 1.0, r.order());
    for (int k = 0; k < dim; ++k)
      for (int p = 0; p < pw[k]; ++p) mono = mono * x[k];
    r += mono * M;
  }
  return r;
}

CMat MatrixPolynomial::value(const Point& x) const {
  CMat r = CMat::Zero(m, m);
  for (const auto& [M, pw] : terms) {
    double mono = 1.0;
    for (size_t k = 0; k < x.size(); ++k)
      for (int p = 0; p < pw[k]; ++p) mono *= x[k];
    r += mono * M;
  }
  return r;
}

std::vector<int> SuperconnectionData::degrees() const {
  std::vector<int> d;
  for (const auto& [b, p] : omega)
    if (std::find(d.begin(), d.end(), blade_grade(b)) == d.end()) d.push_back(blade_grade(b));
  std::sort(d.begin(), d.end());
  return d;
}

CMatJet SuperconnectionData::component(Blade b, std::span<const RJet> x) const {
  auto it = omega.find(b);
  if (it == omega.end()) return zero_matrix_jet(n, m);
  return it->second.evaluate(x);
}

SuperconnectionData make_superconnection(int n, const CMat& grading, const std::vector<int>& degrees,
                                         const std::string& preset, std::uint64_t seed) {
  static const std::regex re(R"(^(zero|constant|linear|random)(?:\((\d+)\))?$)");
  std::smatch mt;
  if (!std::regex_match(preset, mt, re)) throw ConfigError("unknown coefficient preset '" + preset + "'");
  const std::string kind = mt[1];
  if (mt[2].matched) seed = std::stoull(mt[2]);
  const int m = static_cast<int>(grading.rows());
  SuperconnectionData S;
  S.n = n;
  S.m = m;
  S.grading = grading;
  std::mt19937_64 rng(seed);
  for (int p : degrees) {
    if (p < 0 || p > n) throw ConfigError("superconnection degree out of range");
    for (Blade b = 0; b < (1u << n); ++b) {
      if (blade_grade(b) != p) continue;
      MatrixPolynomial poly;
      poly.n = n;
      poly.m = m;
      const int par = component_parity(b);
      auto add = [&](std::vector<int> pw) { poly.terms.emplace_back(parity_part(random_matrix(rng, m), grading, par), pw); };
      if (kind != "zero") add(std::vector<int>(n, 0));
      if (kind == "linear" || kind == "random")
        for (int k = 0; k < n; ++k) {
          std::vector<int> pw(n, 0);
          pw[k] = 1;
          add(pw);
        }
      if (kind == "random")
        for (int k = 0; k < n; ++k)
          for (int l = k; l < n; ++l) {
            std::vector<int> pw(n, 0);
            ++pw[k];
            ++pw[l];
            add(pw);
          }
      S.omega[b] = std::move(poly);
    }
  }
  return S;
}

SuperconnectionData superconnection_from_config_text(const std::string& text, const ModuleSpec& module) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("superconnection config is not valid JSON: ") + e.what());
  }
  try {
    if (j.contains("fiber_dimension") && j.at("fiber_dimension").get<int>() != module.m)
      throw ConfigError("fiber_dimension does not match the module rank " + std::to_string(module.m));
    if (j.contains("grading")) {
      const auto sig = j.at("grading").get<std::vector<int>>();
      if (static_cast<int>(sig.size()) != module.m) throw ConfigError("grading signature has the wrong length");
      for (int a = 0; a < module.m; ++a)
        if (std::abs(module.grading(a, a) - double(sig[a] >= 0 ? 1 : -1)) > 1e-14)
          throw ConfigError("grading signature does not match the module");
    }
    const auto degrees = j.value("degrees", std::vector<int>{0, 1, 2});
    const std::uint64_t seed = j.value("seed", std::uint64_t{1});
    SuperconnectionData S;
    S.n = module.n;
    S.m = module.m;
    S.grading = module.grading;
    const std::string preset = j.value("preset", std::string("random"));
    const auto per = j.value("components", nlohmann::json::object());
    for (int p : degrees) {
      const std::string key = std::to_string(p);
      const std::string pr = per.contains(key) ? per.at(key).get<std::string>() : preset;
      auto part = make_superconnection(module.n, module.grading, {p}, pr, seed + 7919 * p);
      for (auto& [b, poly] : part.omega) S.omega[b] = std::move(poly);
    }
    return S;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad superconnection config: ") + e.what());
  }
}

DiracOperatorData dirac_from_connection(const std::vector<CMatJet>& gamma, const std::vector<CMatJet>& A,
                                        const CMatJet& Z, const Point& x) {
  const int n = static_cast<int>(x.size());
  if (static_cast<int>(gamma.size()) != n || static_cast<int>(A.size()) != n)
    throw DimensionError("Dirac data needs one gamma and one connection matrix per direction");
  DiracOperatorData D;
  D.x = x;
  D.n = n;
  D.m = static_cast<int>(Z.value().rows());
  D.gamma = gamma;
  D.A = A;
  D.Z = Z;
  return D;
}

DiracOperatorData quantize_superconnection(const SuperconnectionData& S, const ModuleSpec& module, const MetricJet& mj) {
  const int n = mj.n, m = module.m;
  if (S.n != n || module.n != n) throw DimensionError("superconnection, module and chart dimensions differ");
  if (S.m != m) throw DimensionError("superconnection fiber rank differs from the module");
  if ((S.grading - module.grading).cwiseAbs().maxCoeff() > 1e-14) throw ParityError("superconnection grading differs from the module");
  const CMat& eta = module.grading;
  const auto gam = module.gammas(mj);
  const Eigen::MatrixXd gi = mj.inverse_value();
  for (int i = 0; i < n; ++i) {
    if (parity_defect(gam[i].value(), eta, 1) > 1e-12) throw ParityError("Clifford generator is not odd");
    for (int j = 0; j < n; ++j) {
      const CMat ac = gam[i].value() * gam[j].value() + gam[j].value() * gam[i].value();
      if ((ac + 2.0 * gi(i, j) * CMat::Identity(m, m)).cwiseAbs().maxCoeff() > 1e-10 * (1 + gi.cwiseAbs().maxCoeff()))
        throw Error("module does not satisfy the Clifford relations");
    }
  }
  const auto xs = coordinate_jets(mj.x, mj.order());
  DiracOperatorData D;
  D.x = mj.x;
  D.n = n;
  D.m = m;
  D.gamma = gam;
  D.Z = zero_matrix_jet(n, m);
  for (int i = 0; i < n; ++i) D.A.push_back(zero_matrix_jet(n, m));
  for (const auto& [b, poly] : S.omega) {
    CMatJet w = poly.evaluate(xs);
    const double scale = 1.0 + w.value().cwiseAbs().maxCoeff();
    if (parity_defect(w.value(), eta, component_parity(b)) > 1e-12 * scale)
      throw ParityError("superconnection component on blade " + std::to_string(b) + " has the wrong parity");
    const int p = blade_grade(b);
    if (p == 0) {
      D.Z += w;
    } else if (p == 1) {
      D.A[std::countr_zero(b)] = w;
    } else {
      // q(dx^I) = (1/p!) sum over orderings, signed.
      std::vector<int> idx = blade_indices(b), perm(p);
      std::iota(perm.begin(), perm.end(), 0);
      CMatJet q = zero_matrix_jet(n, m);
      double count = 0;
      do {
        CMatJet prod = gam[idx[perm[0]]];
        for (int a = 1; a < p; ++a) prod = prod * gam[idx[perm[a]]];
        int sign = 1;
        for (int a = 0; a < p; ++a)
          for (int c = a + 1; c < p; ++c)
            if (perm[a] > perm[c]) sign = -sign;
        prod *= double(sign);
        q += prod;
        count += 1;
      } while (std::next_permutation(perm.begin(), perm.end()));
      q *= 1.0 / count;
      D.Z += q * w;
    }
  }
  return D;
}

SectionJet apply_dirac(const DiracOperatorData& D, const SectionJet& psi) {
  require_section(D.x, D.m, psi);
  if (psi.v.order() < 1) throw OrderError("Dirac operator needs a section jet of order >= 1");
  CVecJet r = D.Z * psi.v;
  for (int i = 0; i < D.n; ++i) r += D.gamma[i] * (psi.v.partial(i) + D.A[i] * psi.v);
  return {psi.x, r};
}

CVec dirac_square(const DiracOperatorData& D, const SectionJet& psi) {
  require_section(D.x, D.m, psi);
  if (psi.v.order() < 2) throw OrderError("D^2 needs a section 2-jet");
  const int n = D.n;
  const CVecJet& p = psi.v;
  for (int i = 0; i < n; ++i)
    if (D.gamma[i].order() < 1 || D.A[i].order() < 1) throw OrderError("D^2 needs coefficient 1-jets");
  if (D.Z.order() < 1) throw OrderError("D^2 needs coefficient 1-jets");
  std::vector<CVec> nab(n);
  for (int j = 0; j < n; ++j) nab[j] = p.d(j) + D.A[j].value() * p.value();
  CVec chi = D.Z.value() * p.value();
  for (int j = 0; j < n; ++j) chi += D.gamma[j].value() * nab[j];
  CVec out = D.Z.value() * chi;
  for (int i = 0; i < n; ++i) {
    CVec dchi = D.Z.d(i) * p.value() + D.Z.value() * p.d(i);
    for (int j = 0; j < n; ++j) {
      dchi += D.gamma[j].d(i) * nab[j];
      dchi += D.gamma[j].value() * (p.d2(i, j) + D.A[j].d(i) * p.value() + D.A[j].value() * p.d(i));
    }
    out += D.gamma[i].value() * (dchi + D.A[i].value() * chi);
  }
  return out;
}

double laplacian_test_residual(const LaplacianData& H, const MetricJet& mj, const SectionJet& psi) {
  const int n = mj.n;
  require_section(mj.x, H.m, psi);
  const auto xs = coordinate_jets(mj.x);
  const CVec h0 = H.apply(mj.x, psi);
  double worst = 0;
  for (int k = 0; k < n; ++k) {
    const CJet f = to_complex(xs[k]);
    const CVec hf = H.apply(mj.x, scale(f, psi));
    for (int l = 0; l < n; ++l) {
      const CJet g = to_complex(xs[l]);
      const CVec hg = H.apply(mj.x, scale(g, psi));
      const CVec hfg = H.apply(mj.x, scale(f * g, psi));
      const double fx = mj.x[k], gx = mj.x[l];
      const CVec t = hfg - fx * hg - gx * hf + fx * gx * h0 + 2.0 * mj.inverse(k, l).value() * psi.v.value();
      worst = std::max(worst, t.cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

LaplacianDecomposition laplacian_decompose(const LaplacianData& H, const Chart& chart, const Point& x) {
  const int n = H.n, m = H.m;
  if (chart.dim() != n || static_cast<int>(x.size()) != n) throw DimensionError("Laplacian and chart dimensions differ");
  struct Probe {
    std::vector<CMat> A;
    CMat C;
  };
  auto probe = [&](const Point& y) {
    const MetricJet mj = chart.metric_jet(y);
    const Christoffel G = christoffel(mj);
    Probe pr;
    pr.C = CMat(m, m);
    std::vector<CMat> B(n, CMat(m, m));
    for (int a = 0; a < m; ++a) {
      const CVec e = CVec::Unit(m, a);
      pr.C.col(a) = H.apply(y, constant_section(y, e));
      for (int k = 0; k < n; ++k) {
        CVecJet lin = CVecJet::constant(n, CVec::Zero(m));
        lin.d(k) = e;
        B[k].col(a) = H.apply(y, {y, lin});
      }
    }
    // Laplacian of x^k is g^{ij} Gamma^k_ij; g^{kj} A_j = (Lap x^k - B^k) / 2.
    std::vector<CMat> gA(n);
    for (int k = 0; k < n; ++k) {
      double lap = 0;
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) lap += mj.inverse(i, j).value() * G(k, i, j).value();
      gA[k] = 0.5 * (lap * CMat::Identity(m, m) - B[k]);
    }
    const Eigen::MatrixXd g = mj.metric_value();
    pr.A.assign(n, CMat::Zero(m, m));
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k) pr.A[j] += g(j, k) * gA[k];
    return pr;
  };
  const Probe p0 = probe(x);
  LaplacianDecomposition out;
  for (int j = 0; j < n; ++j) out.A.push_back(CMatJet(n, 1, p0.A[j]));
  const double h = 1e-3;
  for (int k = 0; k < n; ++k) {
    auto shifted = [&](double s) {
      Point y = x;
      y[k] += s;
      return probe(y).A;
    };
    const auto ap = shifted(h), am = shifted(-h), ap2 = shifted(2 * h), am2 = shifted(-2 * h);
    for (int j = 0; j < n; ++j) out.A[j].d(k) = (8.0 * (ap[j] - am[j]) - (ap2[j] - am2[j])) / (12.0 * h);
  }
  const MetricJet mj = chart.metric_jet(x);
  const Christoffel G = christoffel(mj);
  out.F = p0.C;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CMat t = out.A[j].d(i) + p0.A[i] * p0.A[j];
      for (int k = 0; k < n; ++k) t -= G(k, i, j).value() * p0.A[k];
      out.F += mj.inverse(i, j).value() * t;
    }
  return out;
}

CVec canonical_laplacian(const std::vector<CMatJet>& A, const MetricJet& mj, const Christoffel& G, const SectionJet& psi) {
  const int n = mj.n;
  if (psi.v.order() < 2) throw OrderError("Laplacian needs a section 2-jet");
  std::vector<CVecJet> phi;
  for (int j = 0; j < n; ++j) phi.push_back(psi.v.partial(j) + A[j] * psi.v);
  CVec out = CVec::Zero(psi.v.value().size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CVec t = phi[j].d(i) + A[i].value() * phi[j].value();
      for (int k = 0; k < n; ++k) t -= G(k, i, j).value() * phi[k].value();
      out -= mj.inverse(i, j).value() * t;
    }
  return out;
}

CVec canonical_laplacian_trace(const std::vector<CMatJet>& A, const MetricJet& mj, const Christoffel& G,
                               const SectionJet& psi) {
  const int n = mj.n;
  const int m = static_cast<int>(psi.v.value().size());
  BundleFormJet phi = BundleFormJet::zero(psi.x, m);
  for (int j = 0; j < n; ++j) phi.c[1u << j] = psi.v.partial(j) + A[j] * psi.v;
  const auto nab = bundle_covariant_derivative(G, A, phi);
  CVec out = CVec::Zero(m);
  for (int i = 0; i < n; ++i) out -= iota_generator(i, nab[i].c, MetricPairing{&mj})[0].value();
  return out;
}

std::vector<CMat> connection_curvature(const std::vector<CMatJet>& A) {
  const int n = static_cast<int>(A.size());
  std::vector<CMat> F;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (A[i].order() < 1 || A[j].order() < 1) throw OrderError("curvature needs connection 1-jets");
      F.push_back(A[j].d(i) - A[i].d(j) + A[i].value() * A[j].value() - A[j].value() * A[i].value());
    }
  return F;
}

double clifford_connection_residual(const std::vector<CMatJet>& gamma, const std::vector<CMatJet>& A, const Christoffel& G) {
  const int n = static_cast<int>(gamma.size());
  double worst = 0;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      CMat r = gamma[k].d(i) + A[i].value() * gamma[k].value() - gamma[k].value() * A[i].value();
      for (int j = 0; j < n; ++j) r += G(k, i, j).value() * gamma[j].value();
      worst = std::max(worst, r.cwiseAbs().maxCoeff());
    }
  return worst;
}

KernelProjector kernel_projector(const std::vector<CMat>& gamma, const Eigen::MatrixXd& g) {
  const int n = static_cast<int>(gamma.size());
  if (g.rows() != n) throw DimensionError("metric and gamma count differ");
  const int m = static_cast<int>(gamma[0].rows());
  KernelProjector kp;
  kp.b = CMat::Zero(n * m, m);
  kp.c = CMat::Zero(m, n * m);
  for (int i = 0; i < n; ++i) {
    CMat s = CMat::Zero(m, m);
    for (int j = 0; j < n; ++j) s += g(i, j) * gamma[j];
    kp.b.block(i * m, 0, m, m) = -s / double(n);
    kp.c.block(0, i * m, m, m) = gamma[i];
  }
  kp.p = kp.b * kp.c;
  return kp;
}

std::vector<CMat> twisting_curvature(const std::vector<CMat>& FE, const CurvatureData& curv, const std::vector<CMat>& gamma) {
  const int n = curv.n;
  std::vector<CMat> out;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CMat cs = CMat::Zero(gamma[0].rows(), gamma[0].cols());
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l) cs += (-0.25 * curv.R_lower(k, l, i, j)) * (gamma[k] * gamma[l]);
      out.push_back(FE[i * n + j] - cs);
    }
  return out;
}

double twisting_commutator_residual(const std::vector<CMat>& Ftw, const std::vector<CMat>& gamma) {
  double worst = 0;
  for (const auto& f : Ftw)
    for (const auto& g : gamma) worst = std::max(worst, (f * g - g * f).cwiseAbs().maxCoeff());
  return worst;
}

BundleFormJet BundleFormJet::zero(const Point& x, int m, int order) {
  BundleFormJet r;
  r.x = x;
  r.n = static_cast<int>(x.size());
  r.m = m;
  r.c.assign(size_t(1) << r.n, CVecJet(r.n, order, CVec::Zero(m)));
  return r;
}

BundleFormJet BundleFormJet::random(const Point& x, int m, std::mt19937_64& rng, int order) {
  BundleFormJet r = zero(x, m, order);
  for (auto& c : r.c) c = random_section(x, m, rng, order).v;
  return r;
}

int BundleFormJet::order() const {
  int o = kMaxJetOrder;
  for (const auto& v : c) o = std::min(o, v.order());
  return o;
}

BundleFormJet& BundleFormJet::operator+=(const BundleFormJet& o) {
  if (o.x != x || o.m != m) throw DimensionError("bundle form mismatch");
  for (size_t k = 0; k < c.size(); ++k) c[k] += o.c[k];
  return *this;
}

BundleFormJet& BundleFormJet::operator-=(const BundleFormJet& o) {
  if (o.x != x || o.m != m) throw DimensionError("bundle form mismatch");
  for (size_t k = 0; k < c.size(); ++k) c[k] -= o.c[k];
  return *this;
}

double bundle_form_distance(const BundleFormJet& a, const BundleFormJet& b) {
  if (a.x != b.x || a.m != b.m) throw DimensionError("bundle form mismatch");
  double w = 0;
  for (size_t k = 0; k < a.c.size(); ++k) w = std::max(w, jet_distance(a.c[k], b.c[k]));
  return w;
}

BundleFormJet apply_superconnection(const SuperconnectionData& S, const BundleFormJet& psi) {
  if (psi.n != S.n || psi.m != S.m) throw DimensionError("bundle form does not match the superconnection");
  if (psi.order() < 1) throw OrderError("superconnection needs a form jet of order >= 1");
  const auto xs = coordinate_jets(psi.x, psi.order());
  BundleFormJet r = BundleFormJet::zero(psi.x, psi.m);
  for (Blade I = 0; I < psi.c.size(); ++I)
    for (int k = 0; k < psi.n; ++k) {
      if (I & (1u << k)) continue;
      CVecJet t = psi.c[I].partial(k);
      if (bits_below(I, k) & 1) t *= -1.0;
      r.c[I | (1u << k)] += t;
    }
  for (const auto& [J, poly] : S.omega) {
    const CMatJet w = poly.evaluate(xs);
    const int pw = component_parity(J);
    for (Blade I = 0; I < psi.c.size(); ++I) {
      const int s = wedge_sign(J, I);
      if (!s) continue;
      CVecJet t = w * psi.c[I];
      t *= double(s) * ((pw * blade_grade(I)) % 2 ? -1.0 : 1.0);
      r.c[J | I] += t;
    }
  }
  return r;
}

FormEndomorphism superconnection_curvature(const SuperconnectionData& S, const Point& x) {
  const int n = S.n;
  if (static_cast<int>(x.size()) != n) throw DimensionError("point has the wrong dimension");
  const auto xs = coordinate_jets(x);
  std::map<Blade, CMatJet> w;
  for (const auto& [b, poly] : S.omega) w.emplace(b, poly.evaluate(xs));
  FormEndomorphism F;
  auto add = [&](Blade b, const CMat& v) {
    auto it = F.find(b);
    if (it == F.end())
      F.emplace(b, v);
    else
      it->second += v;
  };
  for (const auto& [J, wj] : w)
    for (int k = 0; k < n; ++k) {
      const int s = wedge_sign(1u << k, J);
      if (s) add(J | (1u << k), double(s) * wj.d(k));
    }
  for (const auto& [I, wi] : w)
    for (const auto& [J, wj] : w) {
      const int s = wedge_sign(I, J);
      if (!s) continue;
      const double sign = double(s) * ((component_parity(I) * blade_grade(J)) % 2 ? -1.0 : 1.0);
      add(I | J, sign * (wi.value() * wj.value()));
    }
  return F;
}

BundleFormJet apply_form_endomorphism(const FormEndomorphism& F, int total_parity, const BundleFormJet& psi) {
  BundleFormJet r = BundleFormJet::zero(psi.x, psi.m, 0);
  for (const auto& [K, M] : F) {
    const int pk = (blade_grade(K) + total_parity) % 2;
    for (Blade I = 0; I < psi.c.size(); ++I) {
      const int s = wedge_sign(K, I);
      if (!s) continue;
      const double sign = double(s) * ((pk * blade_grade(I)) % 2 ? -1.0 : 1.0);
      r.c[K | I].value() += sign * (M * psi.c[I].value());
    }
  }
  return r;
}

BundleFormJet apply_interior(const VectorJet& X, const BundleFormJet& psi) {
  if (static_cast<int>(X.size()) != psi.n) throw DimensionError("vector field and form dimensions differ");
  BundleFormJet r = BundleFormJet::zero(psi.x, psi.m);
  for (int i = 0; i < psi.n; ++i) {
    const auto t = iota_generator(i, psi.c, DeltaPairing{});
    for (size_t k = 0; k < t.size(); ++k) r.c[k] += X[i] * t[k];
  }
  return r;
}

BundleFormJet scale(const CJet& f, const BundleFormJet& psi) {
  BundleFormJet r = psi;
  for (auto& c : r.c) c = f * c;
  return r;
}

SpecialResult is_special_superconnection(const SuperconnectionData& S, const std::vector<Point>& points) {
  SpecialResult r;
  for (const auto& x : points)
    for (const auto& [b, poly] : S.omega)
      if (blade_grade(b) >= 2) r.residual = std::max(r.residual, poly.value(x).norm());
  r.special = r.residual <= 1e-12;
  return r;
}

double special_commutator_residual(const SuperconnectionData& S, const VectorJet& X, const VectorJet& Y,
                                   const BundleFormJet& psi) {
  auto E = [&](const BundleFormJet& a) {
    BundleFormJet t = apply_superconnection(S, apply_interior(X, a));
    t += apply_interior(X, apply_superconnection(S, a));
    return t;
  };
  BundleFormJet lhs = E(apply_interior(Y, psi));
  lhs -= apply_interior(Y, E(psi));
  const BundleFormJet rhs = apply_interior(lie_bracket(X, Y), psi);
  double w = 0;
  for (size_t k = 0; k < lhs.c.size(); ++k)
    w = std::max(w, (lhs.c[k].value() - rhs.c[k].value()).cwiseAbs().maxCoeff());
  return w;
}

Multivector quantized_bracket_defect(const MetricJet& mj, const FormJet& u, const FormJet& v) {
  const int n = mj.n;
  if (u.n != n || v.n != n || u.x != mj.x || v.x != mj.x) throw DimensionError("forms do not live at the metric point");
  const FormPtr B = BilinearForm::make(mj.inverse_value());
  auto symbol_of = [&](const FormJet& a) {
    CVec c(a.c.size());
    for (size_t k = 0; k < a.c.size(); ++k) c[k] = a.c[k].value();
    return quantize(Multivector(B, AlgebraTag::Exterior, c));
  };
  CJet f = CJet::constant(n, cplx(0));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) f += to_complex(mj.inverse(i, j)) * (u.c[1u << i] * v.c[1u << j]);
  const Multivector qu = symbol_of(u.grade(1)), qv = symbol_of(v.grade(1));
  Multivector r = supercommutator(symbol_of(exterior_derivative(u.grade(1))), qv);
  r -= supercommutator(qu, symbol_of(exterior_derivative(v.grade(1))));
  r += 2.0 * symbol_of(differential(mj.x, f));
  return r;
}

}  // namespace superdirac
