#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hetcon/errors.hpp"
#include "hetcon/gauss.hpp"

namespace hetcon {

// Piecewise-polynomial function on [0,1]: degree-m polynomial per mesh
// interval, represented by its values at m+1 equidistant points of each
// interval (shared at interior knots, so C0). Carries the full parameter
// vector of the problem it solves.
class MeshedSolution {
 public:
  MeshedSolution() = default;

  MeshedSolution(std::vector<double> knots, int degree, int n_dim)
      : knots_(std::move(knots)), degree_(degree) {
    validate_mesh();
    values_.setZero(n_dim, n_points());
  }

  static std::vector<double> uniform_knots(int n_intervals) {
    std::vector<double> k(n_intervals + 1);
    for (int j = 0; j <= n_intervals; ++j) k[j] = double(j) / n_intervals;
    k.front() = 0.0;
    k.back() = 1.0;
    return k;
  }

  int n_intervals() const { return int(knots_.size()) - 1; }
  int degree() const { return degree_; }
  int n_dim() const { return int(values_.rows()); }
  int n_points() const { return n_intervals() * degree_ + 1; }
  const std::vector<double>& knots() const { return knots_; }

  Eigen::MatrixXd& values() { return values_; }
  const Eigen::MatrixXd& values() const { return values_; }

  Eigen::VectorXd params;
  std::vector<std::string> param_names;
  int label = 0;

  // Location of representation point k (k = j*m + i).
  double point_tau(int k) const {
    int m = degree_;
    int j = std::min(k / m, n_intervals() - 1);
    int i = k - j * m;
    return knots_[j] + (knots_[j + 1] - knots_[j]) * double(i) / m;
  }

  // Index of the interval containing tau.
  int interval_of(double tau) const {
    if (tau < -1e-12 || tau > 1.0 + 1e-12)
      throw DomainError("interpolate: tau outside [0,1]");
    tau = std::clamp(tau, 0.0, 1.0);
    auto it = std::upper_bound(knots_.begin(), knots_.end(), tau);
    int j = int(it - knots_.begin()) - 1;
    return std::clamp(j, 0, n_intervals() - 1);
  }

  // Value of the local interpolating polynomial at tau.
  Eigen::VectorXd interpolate(double tau) const {
    int j = interval_of(tau);
    double h = knots_[j + 1] - knots_[j];
    double s = (std::clamp(tau, 0.0, 1.0) - knots_[j]) / h;
    Eigen::VectorXd c = lagrange_basis(degree_).values(s);
    return local_block(j) * c;
  }

  // d/dtau of the local polynomial at tau.
  Eigen::VectorXd derivative(double tau) const {
    int j = interval_of(tau);
    double h = knots_[j + 1] - knots_[j];
    double s = (std::clamp(tau, 0.0, 1.0) - knots_[j]) / h;
    Eigen::VectorXd c = lagrange_basis(degree_).derivatives(s);
    return (local_block(j) * c) / h;
  }

  // Values at the m+1 representation points of interval j, as n_dim x (m+1).
  Eigen::MatrixXd local_block(int j) const {
    return values_.middleCols(j * degree_, degree_ + 1);
  }

  // Quadrature L2 norm of the solution part: sqrt(int_0^1 |U|^2 dtau).
  double l2_norm() const {
    const CollocationTables& tab = collocation_tables(degree_);
    double acc = 0.0;
    for (int j = 0; j < n_intervals(); ++j) {
      double h = knots_[j + 1] - knots_[j];
      Eigen::MatrixXd blk = local_block(j);
      for (int i = 0; i < degree_; ++i) {
        Eigen::VectorXd u = blk * tab.basis_val.row(i).transpose();
        acc += h * tab.gauss.weights[i] * u.squaredNorm();
      }
    }
    return std::sqrt(acc);
  }

  // Resample this solution onto another mesh/degree.
  MeshedSolution resampled(const std::vector<double>& new_knots, int new_degree) const {
    MeshedSolution out(new_knots, new_degree, n_dim());
    out.params = params;
    out.param_names = param_names;
    out.label = label;
    for (int k = 0; k < out.n_points(); ++k)
      out.values_.col(k) = interpolate(out.point_tau(k));
    return out;
  }

  // Fill from a callable tau -> VectorXd.
  template <class Fn>
  void fill(Fn&& fn) {
    for (int k = 0; k < n_points(); ++k) values_.col(k) = fn(point_tau(k));
  }

 private:
  void validate_mesh() const {
    if (knots_.size() < 2) throw StructuralError("mesh needs at least one interval");
    if (std::abs(knots_.front()) > 1e-14 || std::abs(knots_.back() - 1.0) > 1e-14)
      throw StructuralError("mesh endpoints must be 0 and 1");
    for (size_t j = 1; j < knots_.size(); ++j)
      if (knots_[j] <= knots_[j - 1])
        throw StructuralError("mesh knots must be strictly increasing");
  }

  std::vector<double> knots_;
  int degree_ = 0;
  Eigen::MatrixXd values_;
};

namespace detail {

// Highest-order (degree-m) derivative of the local polynomial on interval j;
// constant per interval. Used as the smoothness monitor for adaptation.
inline Eigen::VectorXd top_derivative(const MeshedSolution& sol, int j) {
  int m = sol.degree();
  const LagrangeBasis& basis = lagrange_basis(m);
  // m-th derivative of L_l is m! * w_l (barycentric leading coefficient);
  // recover it by finite differencing the cardinal coefficients: the leading
  // coefficient of the interpolant through points (x_l, y_l) is
  // sum_l y_l / prod_{k!=l}(x_l - x_k).
  const Eigen::VectorXd& nodes = basis.nodes();
  Eigen::VectorXd coef(m + 1);
  double fact = 1.0;
  for (int k = 2; k <= m; ++k) fact *= k;
  for (int l = 0; l <= m; ++l) {
    double w = 1.0;
    for (int k = 0; k <= m; ++k)
      if (k != l) w *= nodes[l] - nodes[k];
    coef[l] = fact / w;
  }
  double h = sol.knots()[j + 1] - sol.knots()[j];
  return (sol.local_block(j) * coef) / std::pow(h, m);
}

}  // namespace detail

// Knot redistribution equidistributing a local error indicator built from
// jumps of the highest polynomial derivative across interior knots (a proxy
// for the next-order derivative that drives the collocation error). The knot
// count is unchanged; a flat indicator yields a uniform mesh.
inline MeshedSolution adapt_mesh(const MeshedSolution& sol) {
  const int N = sol.n_intervals();
  const int m = sol.degree();
  if (N < 2) return sol;

  std::vector<Eigen::VectorXd> d(N);
  for (int j = 0; j < N; ++j) d[j] = detail::top_derivative(sol, j);

  // Error density per interval: |u^(m+1)|^(1/(m+1)) estimated from derivative
  // jumps at the interval ends.
  std::vector<double> density(N, 0.0);
  double scale = 0.0;
  for (int j = 0; j < N; ++j) scale = std::max(scale, d[j].lpNorm<Eigen::Infinity>());
  const auto& kn = sol.knots();
  for (int j = 0; j < N; ++j) {
    double est = 0.0;
    int cnt = 0;
    if (j > 0) {
      double gap = 0.5 * (kn[j + 1] - kn[j - 1]);
      est += (d[j] - d[j - 1]).lpNorm<Eigen::Infinity>() / gap;
      ++cnt;
    }
    if (j + 1 < N) {
      double gap = 0.5 * (kn[j + 2] - kn[j]);
      est += (d[j + 1] - d[j]).lpNorm<Eigen::Infinity>() / gap;
      ++cnt;
    }
    est /= std::max(cnt, 1);
    density[j] = std::pow(est + 1e-8 * (scale + 1.0), 1.0 / (m + 1));
  }

  // Equidistribute: invert the piecewise-constant density CDF.
  std::vector<double> cdf(N + 1, 0.0);
  for (int j = 0; j < N; ++j) cdf[j + 1] = cdf[j] + density[j] * (kn[j + 1] - kn[j]);
  double total = cdf[N];
  if (total <= 0.0) return sol;

  std::vector<double> new_knots(N + 1);
  new_knots[0] = 0.0;
  new_knots[N] = 1.0;
  int j = 0;
  for (int k = 1; k < N; ++k) {
    double target = total * k / N;
    while (j + 1 < N && cdf[j + 1] < target) ++j;
    double local = (target - cdf[j]) / std::max(cdf[j + 1] - cdf[j], 1e-300);
    new_knots[k] = kn[j] + local * (kn[j + 1] - kn[j]);
  }
  for (int k = 1; k <= N; ++k)
    if (new_knots[k] <= new_knots[k - 1]) new_knots[k] = new_knots[k - 1] + 1e-12;
  new_knots[N] = 1.0;

  return sol.resampled(new_knots, m);
}

// Stack several components defined on [0,1] into one composite solution on
// the union refinement of their meshes.
inline MeshedSolution merge(const std::vector<MeshedSolution>& components) {
  if (components.empty()) throw StructuralError("merge: empty component list");
  int m = components[0].degree();
  for (const auto& c : components)
    if (c.degree() != m) throw StructuralError("merge: components must share degree");

  std::vector<double> knots;
  for (const auto& c : components)
    knots.insert(knots.end(), c.knots().begin(), c.knots().end());
  std::sort(knots.begin(), knots.end());
  knots.erase(std::unique(knots.begin(), knots.end(),
                          [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              knots.end());
  knots.front() = 0.0;
  knots.back() = 1.0;

  int total_dim = 0;
  for (const auto& c : components) total_dim += c.n_dim();

  MeshedSolution out(knots, m, total_dim);
  out.params = components[0].params;
  out.param_names = components[0].param_names;
  int row = 0;
  for (const auto& c : components) {
    for (int k = 0; k < out.n_points(); ++k)
      out.values().block(row, k, c.n_dim(), 1) = c.interpolate(out.point_tau(k));
    row += c.n_dim();
  }
  return out;
}

// Extract a contiguous component range [row, row+count) as its own solution.
inline MeshedSolution extract(const MeshedSolution& sol, int row, int count) {
  if (row < 0 || row + count > sol.n_dim())
    throw StructuralError("extract: component range out of bounds");
  MeshedSolution out(sol.knots(), sol.degree(), count);
  out.values() = sol.values().middleRows(row, count);
  out.params = sol.params;
  out.param_names = sol.param_names;
  return out;
}

// Cycle phase rotation: returns the solution tau -> x((tau + shift) mod 1),
// assuming x is 1-periodic (x(0) = x(1)).
inline MeshedSolution rotate_phase(const MeshedSolution& sol, double shift) {
  shift = shift - std::floor(shift);
  MeshedSolution out(sol.knots(), sol.degree(), sol.n_dim());
  out.params = sol.params;
  out.param_names = sol.param_names;
  out.fill([&](double tau) {
    double t = tau + shift;
    if (t > 1.0) t -= 1.0;
    return sol.interpolate(t);
  });
  return out;
}

}  // namespace hetcon
