#include "superdirac/sw.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "json.hpp"

namespace superdirac {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr int kPairs[6][2] = {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};

std::array<int, 2> block_indices(const SpinModule& sm, int chirality) {
  std::array<int, 2> idx{};
  int c = 0;
  for (int a = 0; a < sm.m; ++a)
    if (std::abs(sm.chirality(a, a) - double(chirality)) < 1e-12) {
      if (c == 2) throw Error("chirality block is larger than expected");
      idx[c++] = a;
    }
  if (c != 2) throw Error("chirality block is smaller than expected");
  return idx;
}

std::vector<FourierMode> parse_modes(const nlohmann::json& j) {
  std::vector<FourierMode> out;
  for (const auto& m : j) {
    FourierMode f;
    const auto k = m.at("k").get<std::vector<int>>();
    if (k.size() != 4) throw ConfigError("wave vectors need four components");
    std::copy(k.begin(), k.end(), f.k.begin());
    const auto c = m.at("c").get<std::vector<double>>();
    if (c.empty() || c.size() > 2) throw ConfigError("mode coefficient is [re] or [re, im]");
    f.c = cplx(c[0], c.size() > 1 ? c[1] : 0.0);
    out.push_back(f);
  }
  return out;
}

cplx mode_phase(const FourierMode& m, const std::array<double, 4>& x) {
  double t = 0;
  for (int d = 0; d < 4; ++d) t += m.k[d] * x[d];
  return {std::cos(t), std::sin(t)};
}

// Field on the grid by transforming one axis at a time.
class GridTransform {
 public:
  GridTransform(int band, int grid) : B_(band), N_(grid), M_(2 * band + 1), table_(M_ * N_) {
    for (int k = 0; k < M_; ++k)
      for (int x = 0; x < N_; ++x) {
        const double t = (k - B_) * kTwoPi * x / N_;
        table_[k * N_ + x] = {std::cos(t), std::sin(t)};
      }
  }

  // weight(k) multiplies every coefficient before summation.
  template <class W>
  std::vector<cplx> run(const std::vector<FourierMode>& modes, W weight) const {
    std::vector<cplx> t(static_cast<size_t>(M_) * M_ * M_ * M_, cplx(0));
    for (const auto& m : modes) {
      size_t idx = 0;
      for (int d = 0; d < 4; ++d) idx = idx * M_ + (m.k[d] + B_);
      t[idx] += weight(m.k) * m.c;
    }
    std::array<int, 4> shape{M_, M_, M_, M_};
    for (int ax = 3; ax >= 0; --ax) {
      size_t outer = 1, inner = 1;
      for (int d = 0; d < ax; ++d) outer *= shape[d];
      for (int d = ax + 1; d < 4; ++d) inner *= shape[d];
      std::vector<cplx> r(outer * N_ * inner, cplx(0));
      for (size_t o = 0; o < outer; ++o)
        for (int k = 0; k < M_; ++k) {
          const cplx* src = &t[(o * M_ + k) * inner];
          for (int x = 0; x < N_; ++x) {
            const cplx e = table_[k * N_ + x];
            cplx* dst = &r[(o * N_ + x) * inner];
            for (size_t i = 0; i < inner; ++i) dst[i] += e * src[i];
          }
        }
      t = std::move(r);
      shape[ax] = N_;
    }
    return t;
  }

 private:
  int B_, N_, M_;
  std::vector<cplx> table_;
};

}  // namespace

SWConfig sw_config_from_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("SW config is not valid JSON: ") + e.what());
  }
  try {
    SWConfig cfg;
    cfg.grid = j.value("grid", 16);
    cfg.band = j.value("band", 2);
    const std::string ch = j.value("chirality", std::string("plus"));
    if (ch == "plus")
      cfg.chirality = 1;
    else if (ch == "minus")
      cfg.chirality = -1;
    else
      throw ConfigError("chirality must be \"plus\" or \"minus\"");
    if (j.contains("random")) {
      const std::uint64_t seed = j.at("random").value("seed", std::uint64_t{1});
      cfg = sw_random_config(cfg.band, cfg.grid, seed, cfg.chirality);
    } else {
      if (j.contains("A")) {
        if (j.at("A").size() != 4) throw ConfigError("A needs four components");
        for (int l = 0; l < 4; ++l) cfg.a[l] = parse_modes(j.at("A")[l]);
      }
      if (j.contains("psi")) {
        if (j.at("psi").size() != 2) throw ConfigError("psi needs two components in its chirality block");
        for (int a = 0; a < 2; ++a) cfg.psi[a] = parse_modes(j.at("psi")[a]);
      }
    }
    for (const auto& l : cfg.a)
      for (const auto& m : l)
        for (int d = 0; d < 4; ++d)
          if (std::abs(m.k[d]) > cfg.band) throw ConfigError("A has a mode outside the band");
    for (const auto& l : cfg.psi)
      for (const auto& m : l)
        for (int d = 0; d < 4; ++d)
          if (std::abs(m.k[d]) > cfg.band) throw ConfigError("psi has a mode outside the band");
    return cfg;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad SW config: ") + e.what());
  }
}

SWConfig sw_config_from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open SW config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return sw_config_from_text(ss.str());
}

SWConfig sw_random_config(int band, int grid, std::uint64_t seed, int chirality) {
  SWConfig cfg;
  cfg.band = band;
  cfg.grid = grid;
  cfg.chirality = chirality >= 0 ? 1 : -1;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  auto fill = [&](std::vector<FourierMode>& modes, double amp) {
    std::array<int, 4> k{};
    for (k[0] = -band; k[0] <= band; ++k[0])
      for (k[1] = -band; k[1] <= band; ++k[1])
        for (k[2] = -band; k[2] <= band; ++k[2])
          for (k[3] = -band; k[3] <= band; ++k[3]) {
            const double k2 = k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + k[3] * k[3];
            const double s = amp / (1.0 + k2 * k2);
            const double re = u(rng), im = u(rng);
            modes.push_back({k, cplx(re, im) * s});
          }
  };
  for (auto& l : cfg.a) fill(l, 0.4);
  for (auto& p : cfg.psi) fill(p, 0.5);
  return cfg;
}

void sw_check_config(const SWConfig& cfg) {
  if (cfg.band < 0 || cfg.grid < 1) throw ConfigError("grid and band must be positive");
  if (cfg.grid <= 4 * cfg.band)
    throw DomainError("grid " + std::to_string(cfg.grid) + " is below the resolution limit 4 * band + 1 = " +
                      std::to_string(4 * cfg.band + 1));
}

int pair_index(int j, int k) {
  for (int p = 0; p < 6; ++p)
    if (kPairs[p][0] == j && kPairs[p][1] == k) return p;
  throw DimensionError("pair index needs 0 <= j < k < 4");
}

TwoForm hodge_star4(const TwoForm& f, int orientation) {
  // *(e0 e1) = e2 e3, *(e0 e2) = -e1 e3, *(e0 e3) = e1 e2 and the converse.
  const double o = orientation >= 0 ? 1.0 : -1.0;
  TwoForm r{};
  r[pair_index(2, 3)] = o * f[pair_index(0, 1)];
  r[pair_index(1, 3)] = -o * f[pair_index(0, 2)];
  r[pair_index(1, 2)] = o * f[pair_index(0, 3)];
  r[pair_index(0, 3)] = o * f[pair_index(1, 2)];
  r[pair_index(0, 2)] = -o * f[pair_index(1, 3)];
  r[pair_index(0, 1)] = o * f[pair_index(2, 3)];
  return r;
}

TwoForm self_dual_part(const TwoForm& f, int orientation) {
  const TwoForm s = hodge_star4(f, orientation);
  TwoForm r{};
  for (int p = 0; p < 6; ++p) r[p] = 0.5 * (f[p] + s[p]);
  return r;
}

double two_form_norm2(const TwoForm& f) {
  double s = 0;
  for (const auto& c : f) s += std::norm(c);
  return s;
}

TwoForm sw_quadratic_form(const SpinModule& sm, const CVec& psi, int orientation, double tol) {
  if (sm.n != 4) throw DimensionError("the Seiberg-Witten sector is four dimensional");
  const double o = orientation >= 0 ? 1.0 : -1.0;
  if ((sm.chirality * psi - o * psi).norm() > tol * (1.0 + psi.norm()))
    throw DomainError("spinor is not in the selected chirality block");
  TwoForm r{};
  for (int p = 0; p < 6; ++p) {
    const int j = kPairs[p][0], k = kPairs[p][1];
    r[p] = -0.25 * psi.dot(sm.Gamma[j] * (sm.Gamma[k] * psi));
  }
  return r;
}

SWLocal sw_local(const SpinModule& sm, const SWPointData& p, int orientation) {
  const cplx I(0, 1);
  SWLocal r;
  r.dirac = CVec::Zero(sm.m);
  for (int l = 0; l < 4; ++l) r.dirac += sm.Gamma[l] * (p.dpsi[l] + 0.5 * I * p.a[l] * p.psi);
  for (int q = 0; q < 6; ++q) {
    const int k = kPairs[q][0], l = kPairs[q][1];
    r.F[q] = I * (p.da[k][l] - p.da[l][k]);
  }
  r.F_plus = self_dual_part(r.F, orientation);
  r.rhs = sw_quadratic_form(sm, p.psi, orientation, 1e-10);
  TwoForm diff{};
  for (int q = 0; q < 6; ++q) diff[q] = r.F_plus[q] - r.rhs[q];
  r.dirac_residual = r.dirac.norm();
  r.curvature_residual = std::sqrt(two_form_norm2(diff));
  r.w1 = r.dirac.squaredNorm() + two_form_norm2(diff);
  // Delta psi = -sum_l (d_l + A_l / 2)^2 psi with A_l = i a_l.
  CVec lap = p.lap_psi;
  for (int l = 0; l < 4; ++l)
    lap += 0.5 * I * p.da[l][l] * p.psi + I * p.a[l] * p.dpsi[l] - 0.25 * p.a[l] * p.a[l] * p.psi;
  const double n2 = p.psi.squaredNorm();
  r.w2 = -p.psi.dot(lap).real() + two_form_norm2(r.F_plus) + 0.125 * n2 * n2;
  return r;
}

SWPointData sw_evaluate(const SWConfig& cfg, const SpinModule& sm, const std::array<double, 4>& x) {
  const cplx I(0, 1);
  const auto idx = block_indices(sm, cfg.chirality);
  SWPointData p;
  p.psi = CVec::Zero(sm.m);
  p.lap_psi = CVec::Zero(sm.m);
  for (auto& d : p.dpsi) d = CVec::Zero(sm.m);
  for (int a = 0; a < 2; ++a)
    for (const auto& m : cfg.psi[a]) {
      const cplx v = m.c * mode_phase(m, x);
      p.psi[idx[a]] += v;
      double k2 = 0;
      for (int d = 0; d < 4; ++d) {
        p.dpsi[d][idx[a]] += I * double(m.k[d]) * v;
        k2 += m.k[d] * m.k[d];
      }
      p.lap_psi[idx[a]] -= k2 * v;
    }
  for (int l = 0; l < 4; ++l)
    for (const auto& m : cfg.a[l]) {
      const cplx v = m.c * mode_phase(m, x);
      p.a[l] += v.real();
      for (int k = 0; k < 4; ++k) p.da[k][l] += (I * double(m.k[k]) * v).real();
    }
  return p;
}

std::vector<SWPointData> sw_evaluate_grid(const SWConfig& cfg, const SpinModule& sm) {
  sw_check_config(cfg);
  const cplx I(0, 1);
  const auto idx = block_indices(sm, cfg.chirality);
  const GridTransform tr(cfg.band, cfg.grid);
  const size_t total = static_cast<size_t>(cfg.grid) * cfg.grid * cfg.grid * cfg.grid;
  auto unit = [](const std::array<int, 4>&) { return cplx(1); };
  auto deriv = [I](int d) { return [I, d](const std::array<int, 4>& k) { return I * double(k[d]); }; };
  auto lap = [](const std::array<int, 4>& k) { return cplx(-double(k[0] * k[0] + k[1] * k[1] + k[2] * k[2] + k[3] * k[3])); };

  std::vector<SWPointData> out(total);
  for (auto& p : out) {
    p.psi = CVec::Zero(sm.m);
    p.lap_psi = CVec::Zero(sm.m);
    for (auto& d : p.dpsi) d = CVec::Zero(sm.m);
  }
  for (int a = 0; a < 2; ++a) {
    const auto v = tr.run(cfg.psi[a], unit);
    const auto L = tr.run(cfg.psi[a], lap);
    for (size_t g = 0; g < total; ++g) {
      out[g].psi[idx[a]] = v[g];
      out[g].lap_psi[idx[a]] = L[g];
    }
    for (int d = 0; d < 4; ++d) {
      const auto dv = tr.run(cfg.psi[a], deriv(d));
      for (size_t g = 0; g < total; ++g) out[g].dpsi[d][idx[a]] = dv[g];
    }
  }
  for (int l = 0; l < 4; ++l) {
    const auto v = tr.run(cfg.a[l], unit);
    for (size_t g = 0; g < total; ++g) out[g].a[l] = v[g].real();
    for (int k = 0; k < 4; ++k) {
      const auto dv = tr.run(cfg.a[l], deriv(k));
      for (size_t g = 0; g < total; ++g) out[g].da[k][l] = dv[g].real();
    }
  }
  return out;
}

SWResiduals sw_residuals(const SWConfig& cfg, const std::array<double, 4>& x) {
  const SpinModule sm = spin_module(4);
  const SWLocal loc = sw_local(sm, sw_evaluate(cfg, sm, x), cfg.chirality);
  return {loc.dirac_residual, loc.curvature_residual};
}

double pairwise_sum(const std::vector<double>& v) {
  auto rec = [&](auto&& self, size_t lo, size_t hi) -> double {
    if (hi - lo <= 8) {
      double s = 0;
      for (size_t i = lo; i < hi; ++i) s += v[i];
      return s;
    }
    const size_t mid = lo + (hi - lo) / 2;
    return self(self, lo, mid) + self(self, mid, hi);
  };
  return v.empty() ? 0.0 : rec(rec, 0, v.size());
}

SWFunctional sw_functional(const SWConfig& cfg) {
  const SpinModule sm = spin_module(4);
  const auto grid = sw_evaluate_grid(cfg, sm);
  std::vector<double> d1(grid.size()), d2(grid.size());
  for (size_t g = 0; g < grid.size(); ++g) {
    const SWLocal loc = sw_local(sm, grid[g], cfg.chirality);
    d1[g] = loc.w1;
    d2[g] = loc.w2;
  }
  const double cell = std::pow(kTwoPi / cfg.grid, 4);
  SWFunctional f;
  f.w1 = cell * pairwise_sum(d1);
  f.w2 = cell * pairwise_sum(d2);
  const double scale = std::max(std::abs(f.w1), std::abs(f.w2));
  f.gap = scale > 0 ? std::abs(f.w1 - f.w2) / scale : 0.0;
  return f;
}

}  // namespace superdirac
