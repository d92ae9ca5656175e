#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "superdirac/jet.hpp"

namespace superdirac {

enum class ChartKind { Flat, Minkowski, Torus, Conformal, Polynomial, Custom };
enum class ConformalType { Sphere, Hyperbolic };

// Metric jet at a point: entries of g, g^{-1} and |det g|^{1/2} carried to second order.
struct MetricJet {
  Point x;
  int n = 0;
  std::vector<RJet> g;
  std::vector<RJet> g_inv;
  RJet det;
  RJet sqrt_abs_det;

  const RJet& metric(int i, int j) const { return g[i * n + j]; }
  const RJet& inverse(int i, int j) const { return g_inv[i * n + j]; }
  double dg(int k, int i, int j) const { return g[i * n + j].d(k); }
  double d2g(int k, int l, int i, int j) const { return g[i * n + j].d2(k, l); }
  Eigen::MatrixXd metric_value() const;
  Eigen::MatrixXd inverse_value() const;
  int order() const { return g.empty() ? 0 : g.front().order(); }
};

class Chart {
 public:
  using MetricFn = std::function<std::vector<RJet>(std::span<const RJet>)>;
  using ValueFn = std::function<Eigen::MatrixXd(const Point&)>;
  using ScalarFn = std::function<RJet(std::span<const RJet>)>;
  using DomainFn = std::function<bool(const Point&)>;

  static Chart flat(int n);
  static Chart minkowski(int n);
  static Chart torus(int n);
  static Chart conformal(int n, ConformalType type);
  // g_ij = delta_ij + sum_{k<=l} c[(ij),(kl)] x^k x^l over upper-triangular pairs.
  static Chart polynomial(int n, std::vector<double> coefficients, std::string name = {});
  static Chart random_polynomial(int n, std::uint64_t seed, std::string name = {});
  static Chart from_jets(std::string name, int n, MetricFn metric, DomainFn domain);
  // Metric known only by value; derivatives come from central differences.
  static Chart from_values(std::string name, int n, ValueFn metric, DomainFn domain);

  Chart with_name(std::string name) const;

  const std::string& name() const { return name_; }
  int dim() const { return n_; }
  ChartKind kind() const { return kind_; }
  bool finite_difference() const { return !jet_fn_; }
  bool riemannian() const { return negative_ == 0; }
  int negative_directions() const { return negative_; }
  std::optional<ConformalType> conformal_type() const { return conformal_; }
  const std::vector<double>& coefficients() const { return coefficients_; }

  bool in_domain(const Point& x) const;
  Point sample_point(std::mt19937_64& rng) const;

  MetricJet metric_jet(const Point& x, int order = kMaxJetOrder) const;
  Eigen::MatrixXd metric_value(const Point& x) const;

  // Conformal factor lambda with g = lambda^{-2} delta; only for conformal charts.
  RJet conformal_factor(std::span<const RJet> x) const;

 private:
  Chart() = default;
  std::string name_;
  int n_ = 0;
  ChartKind kind_ = ChartKind::Custom;
  int negative_ = 0;
  std::optional<ConformalType> conformal_;
  std::vector<double> coefficients_;
  MetricFn jet_fn_;
  ValueFn value_fn_;
  DomainFn domain_;
  double sample_radius_ = 0.8;
  bool periodic_ = false;
};

// Registry: flat, flat2..flat4, minkowski2, minkowski4, torus, torus2..torus4,
// sphere2, sphere4, hyperbolic2, hyperbolic4, poly2..poly4.
std::vector<std::string> chart_names();
Chart make_chart(const std::string& name);
Chart chart_from_config_text(const std::string& json_text);
Chart chart_from_config_file(const std::string& path);
// Registry name, or a path to a JSON chart config when the argument ends in .json.
Chart resolve_chart(const std::string& name_or_path);

}  // namespace superdirac
