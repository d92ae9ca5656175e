#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <numbers>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "superdirac/verify.hpp"

using namespace superdirac;
using nlohmann::ordered_json;

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Point parse_point(const std::string& text, int n) {
  if (text.empty()) return Point(n, 0.0);
  Point x;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t used = 0;
      x.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw ConfigError("bad coordinate '" + item + "' in --point");
    }
  }
  if (static_cast<int>(x.size()) != n)
    throw ConfigError("--point needs " + std::to_string(n) + " coordinates");
  return x;
}

ordered_json matrix_json(const CMat& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

ordered_json real_matrix_json(const Eigen::MatrixXd& m) {
  ordered_json rows = ordered_json::array();
  for (int i = 0; i < m.rows(); ++i) {
    ordered_json row = ordered_json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string complex_text(cplx c) {
  std::ostringstream os;
  os << std::setprecision(6) << c.real();
  if (c.imag() != 0.0) os << (c.imag() < 0 ? "-" : "+") << std::abs(c.imag()) << "i";
  return os.str();
}

std::string matrix_text(const CMat& m, const std::string& indent) {
  std::ostringstream os;
  for (int i = 0; i < m.rows(); ++i) {
    os << indent;
    for (int j = 0; j < m.cols(); ++j) os << " " << std::setw(22) << complex_text(m(i, j));
    os << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

int cmd_verify(const VerifyOptions& opt, const std::string& config, bool human) {
  VerifyOptions o = opt;
  if (!config.empty()) o.sw = sw_config_from_file(config);
  if (o.suite == "sw" && !o.sw) throw ConfigError("verify sw needs --config <file>");
  const VerificationReport rep = run_verify(o);
  std::cout << (human ? rep.to_human() : rep.to_json());
  return rep.pass ? 0 : kExitFail;
}

int cmd_curvature(const std::string& chart_name, const std::string& point, bool human) {
  const Chart chart = resolve_chart(chart_name);
  const int n = chart.dim();
  const Point x = parse_point(point, n);
  const MetricJet mj = chart.metric_jet(x);
  const CurvatureData cd = curvature(mj);
  if (human) {
    std::cout << "chart " << chart.name() << "  point";
    for (double v : x) std::cout << " " << v;
    std::cout << "\ng =\n" << mj.metric_value() << "\nRicci =\n";
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) std::cout << std::setw(14) << cd.Ric(i, j);
      std::cout << "\n";
    }
    std::cout << "scalar curvature " << std::setprecision(12) << cd.scalar << "\n";
    return 0;
  }
  ordered_json j;
  j["chart"] = chart.name();
  j["point"] = x;
  j["metric"] = real_matrix_json(mj.metric_value());
  ordered_json chris = ordered_json::array();
  for (int k = 0; k < n; ++k) {
    Eigen::MatrixXd m(n, n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) m(a, b) = cd.gamma(k, a, b).value();
    chris.push_back(real_matrix_json(m));
  }
  j["christoffel"] = chris;  // [k][i][j] = Gamma^k_ij
  j["riemann"] = cd.riemann;  // R_i^j_kl flattened, l fastest
  Eigen::MatrixXd ric(n, n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) ric(a, b) = cd.Ric(a, b);
  j["ricci"] = real_matrix_json(ric);
  j["scalar_curvature"] = cd.scalar;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_dirac(const std::string& chart_name, const std::string& config, const std::string& point, std::uint64_t seed,
              bool human) {
  const Chart chart = resolve_chart(chart_name);
  const int n = chart.dim();
  const Point x = parse_point(point, n);
  std::string text = config.empty() ? std::string(R"({"preset": "zero"})") : read_file(config);
  nlohmann::json cfg;
  try {
    cfg = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("dirac config is not valid JSON: ") + e.what());
  }
  const std::string module = cfg.is_object() ? cfg.value("module", std::string("forms")) : "forms";
  ModuleSpec ms;
  if (module == "forms") ms = forms_module(n);
  else if (module == "spinor") ms = spinor_module(chart);
  else throw ConfigError("unknown module '" + module + "'");
  const SuperconnectionData S = superconnection_from_config_text(text, ms);
  const MetricJet mj = chart.metric_jet(x);
  const DiracOperatorData D = quantize_superconnection(S, ms, mj);

  // Residuals of [[D, x^k]] = gamma^k and of the generalized Laplacian test for D^2.
  std::mt19937_64 rng(seed);
  const SectionJet psi = random_section(x, ms.m, rng);
  const auto xs = coordinate_jets(x);
  const CVec d0 = apply_dirac(D, psi).v.value();
  double commutator = 0;
  for (int k = 0; k < n; ++k) {
    const CVec lhs = apply_dirac(D, scale(to_complex(xs[k]), psi)).v.value() - x[k] * d0;
    commutator = std::max(commutator, (lhs - D.gamma[k].value() * psi.v.value()).cwiseAbs().maxCoeff());
  }
  const LaplacianData H{n, ms.m, [&](const Point& y, const SectionJet& p) {
                          return dirac_square(quantize_superconnection(S, ms, chart.metric_jet(y)), p);
                        }};
  const double lap = laplacian_test_residual(H, mj, psi);

  // Zero-order contribution of each non-connection component.
  std::vector<std::pair<Blade, CMat>> terms;
  for (const auto& [b, poly] : S.omega) {
    if (blade_grade(b) == 1) continue;
    if (std::all_of(poly.terms.begin(), poly.terms.end(), [](const auto& t) { return t.first.isZero(0.0); })) continue;
    SuperconnectionData one = S;
    one.omega.clear();
    one.omega[b] = poly;
    terms.emplace_back(b, quantize_superconnection(one, ms, mj).Z.value());
  }

  if (human) {
    std::cout << "chart " << chart.name() << "  module " << ms.name << " (rank " << ms.m << ")\n";
    for (int k = 0; k < n; ++k) std::cout << "gamma^" << k + 1 << " =\n" << matrix_text(D.gamma[k].value(), "  ");
    for (int k = 0; k < n; ++k) std::cout << "A_" << k + 1 << " =\n" << matrix_text(D.A[k].value(), "  ");
    std::cout << "Z =\n" << matrix_text(D.Z.value(), "  ");
    for (const auto& [b, M] : terms) {
      std::cout << "q(omega_";
      if (b == 0) std::cout << "0";
      for (int i : blade_indices(b)) std::cout << i + 1;
      std::cout << ") =\n" << matrix_text(M, "  ");
    }
    std::cout << "dirac_test residual " << commutator << "\nlaplacian_test residual " << lap << "\n";
    return 0;
  }
  ordered_json j;
  j["chart"] = chart.name();
  j["point"] = x;
  j["module"] = ms.name;
  j["rank"] = ms.m;
  ordered_json g = ordered_json::array(), a = ordered_json::array();
  for (int k = 0; k < n; ++k) {
    g.push_back(matrix_json(D.gamma[k].value()));
    a.push_back(matrix_json(D.A[k].value()));
  }
  j["gamma"] = g;
  j["connection"] = a;
  j["zero_order"] = matrix_json(D.Z.value());
  ordered_json t = ordered_json::array();
  for (const auto& [b, M] : terms) {
    std::vector<int> idx = blade_indices(b);
    for (int& i : idx) ++i;
    t.push_back({{"blade", idx}, {"matrix", matrix_json(M)}});
  }
  j["zero_order_terms"] = t;
  j["dirac_test_residual"] = commutator;
  j["laplacian_test_residual"] = lap;
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_sw(const std::string& config, std::uint64_t seed, int samples, bool human) {
  if (config.empty()) throw ConfigError("sw needs --config <file>");
  const SWConfig cfg = sw_config_from_file(config);
  sw_check_config(cfg);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 2 * std::numbers::pi);
  ordered_json pts = ordered_json::array();
  std::ostringstream text;
  for (int s = 0; s < samples; ++s) {
    std::array<double, 4> x;
    for (auto& c : x) c = u(rng);
    const SWResiduals r = sw_residuals(cfg, x);
    pts.push_back({{"point", x}, {"dirac", r.dirac}, {"curvature", r.curvature}});
    text << "  (" << x[0] << ", " << x[1] << ", " << x[2] << ", " << x[3] << ")  |D psi| " << r.dirac
         << "  |F+ - Q| " << r.curvature << "\n";
  }
  const SWFunctional w = sw_functional(cfg);
  const bool pass = w.gap <= 1e-6;
  if (human) {
    std::cout << "grid " << cfg.grid << "  band " << cfg.band << "  chirality " << (cfg.chirality > 0 ? "plus" : "minus")
              << "\n"
              << text.str() << std::setprecision(15) << "W1 " << w.w1 << "\nW2 " << w.w2 << "\ngap " << w.gap << "\n"
              << (pass ? "PASS" : "FAIL") << "\n";
  } else {
    ordered_json j;
    j["grid"] = cfg.grid;
    j["band"] = cfg.band;
    j["chirality"] = cfg.chirality > 0 ? "plus" : "minus";
    j["residuals"] = pts;
    j["w1"] = w.w1;
    j["w2"] = w.w2;
    j["gap"] = w.gap;
    j["gap_tolerance"] = 1e-6;
    j["pass"] = pass;
    std::cout << j.dump(2) << "\n";
  }
  return pass ? 0 : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Clifford modules, Dirac operators and curvature identities on coordinate charts"};
  app.require_subcommand(1);

  VerifyOptions vopt;
  std::string chart = "flat", point, config;
  std::uint64_t seed = 1;
  int samples = 20;
  bool human = false, timing = false;

  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("suite", vopt.suite, "suite name")->required()->check(CLI::IsMember(suite_names()));
  verify->add_option("--chart", chart, "chart name or chart config (.json)");
  verify->add_option("--seed", seed, "random seed");
  verify->add_option("--samples", samples, "sample points per check")->check(CLI::PositiveNumber);
  verify->add_option("--config", config, "field configuration for the sw suite");
  verify->add_flag("--human", human, "tabular text instead of JSON");
  verify->add_flag("--timing", timing, "include wall time per check");

  auto* curv = app.add_subcommand("curvature", "metric, Christoffel symbols and curvature at a point");
  curv->add_option("--chart", chart, "chart name or chart config (.json)");
  curv->add_option("--point", point, "x1,x2,... (default origin)");
  curv->add_flag("--human", human, "tabular text instead of JSON");

  auto* dirac = app.add_subcommand("dirac", "quantize a superconnection at a point");
  dirac->add_option("--chart", chart, "chart name or chart config (.json)");
  dirac->add_option("--config", config, "superconnection config (default zero)");
  dirac->add_option("--point", point, "x1,x2,... (default origin)");
  dirac->add_option("--seed", seed, "seed of the test section");
  dirac->add_flag("--human", human, "tabular text instead of JSON");

  auto* sw = app.add_subcommand("sw", "Seiberg-Witten residuals and both forms of W on the torus");
  sw->add_option("--config", config, "field configuration");
  sw->add_option("--seed", seed, "seed of the sample points");
  sw->add_option("--samples", samples, "sample points")->check(CLI::PositiveNumber);
  sw->add_flag("--human", human, "tabular text instead of JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*verify) {
      vopt.chart = chart;
      vopt.seed = seed;
      vopt.samples = samples;
      vopt.timing = timing;
      return cmd_verify(vopt, config, human);
    }
    if (*curv) return cmd_curvature(chart, point, human);
    if (*dirac) return cmd_dirac(chart, config, point, seed, human);
    if (*sw) return cmd_sw(config, seed, samples, human);
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
