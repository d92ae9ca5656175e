#include "superdirac/chart.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"

namespace superdirac {

namespace {

using MatJet = Jet<Eigen::MatrixXd>;

MatJet assemble(const std::vector<RJet>& e, int n) {
  const int order = e.front().order();
  auto collect = [&](auto get) {
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = get(e[i * n + j]);
    return m;
  };
  MatJet r(n, order, collect([](const RJet& a) { return a.value(); }));
  for (int k = 0; order >= 1 && k < n; ++k) r.d(k) = collect([k](const RJet& a) { return a.d(k); });
  for (int k = 0; order >= 2 && k < n; ++k)
    for (int l = 0; l < n; ++l) r.d2(k, l) = collect([k, l](const RJet& a) { return a.d2(k, l); });
  return r;
}

std::vector<RJet> split(const MatJet& m, int n) {
  std::vector<RJet> r;
  r.reserve(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      RJet a(n, m.order(), m.value()(i, j));
      for (int k = 0; m.order() >= 1 && k < n; ++k) a.d(k) = m.d(k)(i, j);
      for (int k = 0; m.order() >= 2 && k < n; ++k)
        for (int l = 0; l < n; ++l) a.d2(k, l) = m.d2(k, l)(i, j);
      r.push_back(a);
    }
  return r;
}

// Gaussian elimination carried out on jets; pivots chosen from values.
RJet jet_determinant(std::vector<RJet> a, int n) {
  RJet det = RJet::constant(n, 1.0);
  for (int c = 0; c < n; ++c) {
    int p = c;
    for (int r = c + 1; r < n; ++r)
      if (std::abs(a[r * n + c].value()) > std::abs(a[p * n + c].value())) p = r;
    if (a[p * n + c].value() == 0.0) throw DegenerateError("metric is degenerate");
    if (p != c) {
      for (int j = 0; j < n; ++j) std::swap(a[p * n + j], a[c * n + j]);
      det = -det;
    }
    const RJet piv = a[c * n + c];
    det = det * piv;
    const RJet inv = inverse(piv);
    for (int r = c + 1; r < n; ++r) {
      const RJet f = a[r * n + c] * inv;
      for (int j = c; j < n; ++j) a[r * n + j] -= f * a[c * n + j];
    }
  }
  return det;
}

MetricJet finish(const Point& x, int n, std::vector<RJet> g) {
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      if (std::abs(g[i * n + j].value() - g[j * n + i].value()) > 1e-12)
        throw DegenerateError("metric is not symmetric");
  MetricJet mj;
  mj.x = x;
  mj.n = n;
  mj.det = jet_determinant(g, n);
  const double scale = std::pow(assemble(g, n).value().cwiseAbs().maxCoeff(), n);
  if (std::abs(mj.det.value()) <= 1e-13 * scale) throw DegenerateError("metric is degenerate at the point");
  mj.g_inv = split(matrix_inverse(assemble(g, n)), n);
  mj.sqrt_abs_det = sqrt(abs(mj.det));
  mj.g = std::move(g);
  return mj;
}

std::vector<RJet> constant_metric(const Eigen::MatrixXd& m, int n) {
  std::vector<RJet> g;
  g.reserve(n * n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) g.push_back(RJet::constant(n, m(i, j)));
  return g;
}

void check_dim(int n) {
  if (n < 1 || n > kMaxJetDim) throw DimensionError("chart dimension must lie in 1.." + std::to_string(kMaxJetDim));
}

}  // namespace

Eigen::MatrixXd MetricJet::metric_value() const {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g[i * n + j].value();
  return m;
}

Eigen::MatrixXd MetricJet::inverse_value() const {
  Eigen::MatrixXd m(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) m(i, j) = g_inv[i * n + j].value();
  return m;
}

Chart Chart::from_jets(std::string name, int n, MetricFn metric, DomainFn domain) {
  check_dim(n);
  Chart c;
  c.name_ = std::move(name);
  c.n_ = n;
  c.jet_fn_ = std::move(metric);
  c.domain_ = std::move(domain);
  return c;
}

Chart Chart::from_values(std::string name, int n, ValueFn metric, DomainFn domain) {
  check_dim(n);
  Chart c;
  c.name_ = std::move(name);
  c.n_ = n;
  c.value_fn_ = std::move(metric);
  c.domain_ = std::move(domain);
  return c;
}

Chart Chart::flat(int n) {
  Chart c = from_jets("flat" + std::to_string(n), n,
                      [n](std::span<const RJet>) { return constant_metric(Eigen::MatrixXd::Identity(n, n), n); },
                      [](const Point&) { return true; });
  c.kind_ = ChartKind::Flat;
  return c;
}

Chart Chart::minkowski(int n) {
  Eigen::MatrixXd eta = Eigen::MatrixXd::Identity(n, n);
  eta(0, 0) = -1.0;
  Chart c = from_jets("minkowski" + std::to_string(n), n,
                      [n, eta](std::span<const RJet>) { return constant_metric(eta, n); },
                      [](const Point&) { return true; });
  c.kind_ = ChartKind::Minkowski;
  c.negative_ = 1;
  return c;
}

Chart Chart::torus(int n) {
  Chart c = flat(n);
  c.name_ = "torus" + std::to_string(n);
  c.kind_ = ChartKind::Torus;
  c.periodic_ = true;
  return c;
}

static RJet conformal_lambda(std::span<const RJet> x, int n, bool sphere) {
  RJet r2 = RJet::constant(n, 0.0);
  for (const RJet& xi : x) r2 += xi * xi;
  return sphere ? (r2 + 1.0) * 0.5 : (RJet::constant(n, 1.0) - r2) * 0.5;
}

Chart Chart::conformal(int n, ConformalType type) {
  const bool sphere = type == ConformalType::Sphere;
  auto metric = [n, sphere](std::span<const RJet> x) {
    const RJet lambda = conformal_lambda(x, n, sphere);
    const RJet w = inverse(lambda * lambda);
    std::vector<RJet> g(n * n, RJet::constant(n, 0.0));
    for (int i = 0; i < n; ++i) g[i * n + i] = w;
    return g;
  };
  auto domain = [sphere](const Point& x) {
    double r2 = 0;
    for (double v : x) r2 += v * v;
    return sphere || r2 < 1.0;
  };
  Chart c = from_jets((sphere ? "sphere" : "hyperbolic") + std::to_string(n), n, metric, domain);
  c.kind_ = ChartKind::Conformal;
  c.conformal_ = type;
  c.sample_radius_ = sphere ? 0.8 : 0.85 / std::sqrt(double(n));
  return c;
}

RJet Chart::conformal_factor(std::span<const RJet> x) const {
  if (!conformal_) throw DomainError("chart " + name_ + " has no conformal factor");
  return conformal_lambda(x, n_, *conformal_ == ConformalType::Sphere);
}

Chart Chart::polynomial(int n, std::vector<double> coefficients, std::string name) {
  check_dim(n);
  const int P = n * (n + 1) / 2;
  if (static_cast<int>(coefficients.size()) != P * P)
    throw ConfigError("polynomial chart needs " + std::to_string(P * P) + " coefficients");
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) pairs.emplace_back(i, j);
  auto fn = [n, P, pairs, coefficients](std::span<const RJet> x) {
    std::vector<RJet> mono;
    mono.reserve(P);
    for (auto [k, l] : pairs) mono.push_back(x[k] * x[l]);
    std::vector<RJet> g(n * n, RJet::constant(n, 0.0));
    for (int a = 0; a < P; ++a) {
      auto [i, j] = pairs[a];
      RJet e = RJet::constant(n, i == j ? 1.0 : 0.0);
      for (int b = 0; b < P; ++b) e += mono[b] * coefficients[a * P + b];
      g[i * n + j] = e;
      g[j * n + i] = e;
    }
    return g;
  };
  Chart c = from_jets(name.empty() ? "poly" + std::to_string(n) : std::move(name), n, fn, [](const Point& x) {
    for (double v : x)
      if (std::abs(v) > 1.0) return false;
    return true;
  });
  c.kind_ = ChartKind::Polynomial;
  c.coefficients_ = std::move(coefficients);
  return c;
}

Chart Chart::random_polynomial(int n, std::uint64_t seed, std::string name) {
  check_dim(n);
  const int P = n * (n + 1) / 2;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int attempt = 0; attempt < 100; ++attempt) {
    std::vector<double> coeffs(P * P);
    for (double& v : coeffs) v = 0.3 * u(rng) / P;
    Chart c = polynomial(n, coeffs, name);
    bool ok = true;
    for (int t = 0; t < 200 && ok; ++t) {
      Point x(n);
      for (double& v : x) v = u(rng);
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(c.metric_value(x));
      ok = es.eigenvalues().minCoeff() > 0.5;
    }
    if (ok) return c;
  }
  throw DegenerateError("could not draw a nondegenerate polynomial metric");
}

Chart Chart::with_name(std::string name) const {
  Chart c = *this;
  c.name_ = std::move(name);
  return c;
}

bool Chart::in_domain(const Point& x) const {
  if (static_cast<int>(x.size()) != n_) return false;
  for (double v : x)
    if (!std::isfinite(v)) return false;
  return !domain_ || domain_(x);
}

Point Chart::sample_point(std::mt19937_64& rng) const {
  Point x(n_);
  if (periodic_) {
    std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
    for (double& v : x) v = u(rng);
  } else {
    std::uniform_real_distribution<double> u(-sample_radius_, sample_radius_);
    for (double& v : x) v = u(rng);
  }
  return x;
}

Eigen::MatrixXd Chart::metric_value(const Point& x) const {
  if (!in_domain(x)) throw DomainError("point outside the domain of chart " + name_);
  if (value_fn_) return value_fn_(x);
  const auto xs = coordinate_jets(x, 0);
  const auto g = jet_fn_(xs);
  Eigen::MatrixXd m(n_, n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m(i, j) = g[i * n_ + j].value();
  return m;
}

MetricJet Chart::metric_jet(const Point& x, int order) const {
  if (static_cast<int>(x.size()) != n_) throw DimensionError("point has the wrong dimension for chart " + name_);
  if (!in_domain(x)) throw DomainError("point outside the domain of chart " + name_);
  if (jet_fn_) {
    const auto xs = coordinate_jets(x, order);
    auto g = jet_fn_(xs);
    if (static_cast<int>(g.size()) != n_ * n_) throw DimensionError("metric function returned the wrong size");
    return finish(x, n_, std::move(g));
  }
  // Central differences: first derivatives with h1, second with h2.
  const double h1 = 1e-5, h2 = 1e-4;
  auto at = [&](int k, double a, int l, double b) {
    Point y = x;
    if (k >= 0) y[k] += a;
    if (l >= 0) y[l] += b;
    return value_fn_(y);
  };
  const Eigen::MatrixXd g0 = value_fn_(x);
  std::vector<Eigen::MatrixXd> d1(n_);
  std::vector<Eigen::MatrixXd> d2(n_ * n_);
  for (int k = 0; k < n_; ++k) d1[k] = (at(k, h1, -1, 0) - at(k, -h1, -1, 0)) / (2 * h1);
  for (int k = 0; order >= 2 && k < n_; ++k)
    for (int l = k; l < n_; ++l) {
      Eigen::MatrixXd m = k == l ? Eigen::MatrixXd((at(k, h2, -1, 0) - 2 * g0 + at(k, -h2, -1, 0)) / (h2 * h2))
                                 : Eigen::MatrixXd((at(k, h2, l, h2) - at(k, h2, l, -h2) - at(k, -h2, l, h2) +
                                                    at(k, -h2, l, -h2)) /
                                                   (4 * h2 * h2));
      d2[k * n_ + l] = m;
      d2[l * n_ + k] = m;
    }
  std::vector<RJet> g;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      const int a = std::min(i, j), b = std::max(i, j);
      RJet e(n_, order, g0(a, b));
      for (int k = 0; order >= 1 && k < n_; ++k) e.d(k) = d1[k](a, b);
      for (int k = 0; order >= 2 && k < n_; ++k)
        for (int l = 0; l < n_; ++l) e.d2(k, l) = d2[k * n_ + l](a, b);
      g.push_back(e);
    }
  return finish(x, n_, std::move(g));
}

std::vector<std::string> chart_names() {
  return {"flat",     "flat2",       "flat3",       "flat4",       "minkowski2", "minkowski4",
          "torus",    "torus2",      "torus3",      "torus4",      "sphere2",    "sphere4",
          "hyperbolic2", "hyperbolic4", "poly2",    "poly3",       "poly4"};
}

Chart make_chart(const std::string& name) {
  auto suffix = [&](const std::string& prefix) -> int {
    if (name.rfind(prefix, 0) != 0) return -1;
    const std::string rest = name.substr(prefix.size());
    if (rest.size() != 1 || rest[0] < '1' || rest[0] > '6') return -1;
    return rest[0] - '0';
  };
  if (name == "flat") return Chart::flat(2).with_name("flat");
  if (name == "torus") return Chart::torus(2).with_name("torus");
  if (int n = suffix("flat"); n > 0) return Chart::flat(n);
  if (int n = suffix("minkowski"); n > 1) return Chart::minkowski(n);
  if (int n = suffix("torus"); n > 0) return Chart::torus(n);
  if (int n = suffix("sphere"); n > 0) return Chart::conformal(n, ConformalType::Sphere);
  if (int n = suffix("hyperbolic"); n > 0) return Chart::conformal(n, ConformalType::Hyperbolic);
  if (int n = suffix("poly"); n > 0) return Chart::random_polynomial(n, 1000 + n, name);
  throw ConfigError("unknown chart '" + name + "'");
}

Chart chart_from_config_text(const std::string& text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("chart config is not valid JSON: ") + e.what());
  }
  try {
    const std::string kind = j.at("kind").get<std::string>();
    const int n = j.at("dimension").get<int>();
    check_dim(n);
    const std::string name = j.value("name", kind + std::to_string(n));
    Chart c = [&] {
      if (kind == "flat") return Chart::flat(n);
      if (kind == "minkowski") {
        if (n < 2) throw ConfigError("minkowski chart needs dimension >= 2");
        return Chart::minkowski(n);
      }
      if (kind == "torus") return Chart::torus(n);
      if (kind == "conformal") {
        const std::string l = j.at("lambda").get<std::string>();
        if (l == "sphere") return Chart::conformal(n, ConformalType::Sphere);
        if (l == "hyperbolic") return Chart::conformal(n, ConformalType::Hyperbolic);
        throw ConfigError("unknown conformal factor '" + l + "'");
      }
      if (kind == "polynomial") {
        if (j.contains("coefficients")) return Chart::polynomial(n, j.at("coefficients").get<std::vector<double>>());
        return Chart::random_polynomial(n, j.value("seed", std::uint64_t{1}));
      }
      throw ConfigError("unknown chart kind '" + kind + "'");
    }();
    return c.with_name(name);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("bad chart config: ") + e.what());
  }
}

Chart chart_from_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open chart config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return chart_from_config_text(ss.str());
}

Chart resolve_chart(const std::string& name_or_path) {
  if (name_or_path.size() > 5 && name_or_path.substr(name_or_path.size() - 5) == ".json")
    return chart_from_config_file(name_or_path);
  return make_chart(name_or_path);
}

}  // namespace superdirac
