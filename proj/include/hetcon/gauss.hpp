#pragma once

#include <cmath>
#include <deque>
#include <vector>

#include <Eigen/Dense>

#include "hetcon/errors.hpp"

namespace hetcon {

// Gauss-Legendre nodes and weights on [0,1].
struct GaussRule {
  Eigen::VectorXd nodes;
  Eigen::VectorXd weights;
};

// Nodes via Newton iteration on P_m with Chebyshev initial guesses.
inline GaussRule gauss_legendre(int m) {
  if (m < 1) throw ConfigError("gauss_legendre: order must be >= 1");
  GaussRule rule;
  rule.nodes.resize(m);
  rule.weights.resize(m);
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (m + 0.5));  // on [-1,1]
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      // Legendre recurrence for P_m(x) and P'_m(x).
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= m; ++k) {
        double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = m * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // map from [-1,1] to [0,1]; reverse so nodes come out increasing
    rule.nodes[m - 1 - i] = 0.5 * (1.0 + x);
    rule.weights[m - 1 - i] = 1.0 / ((1.0 - x * x) * dp * dp);
  }
  return rule;
}

// Lagrange basis on the m+1 equidistant points {0, 1/m, ..., 1} of a
// reference interval, evaluated with the barycentric formula.
class LagrangeBasis {
 public:
  explicit LagrangeBasis(int degree) : m_(degree) {
    if (degree < 1) throw ConfigError("LagrangeBasis: degree must be >= 1");
    nodes_.resize(m_ + 1);
    bary_.resize(m_ + 1);
    for (int l = 0; l <= m_; ++l) nodes_[l] = double(l) / m_;
    for (int l = 0; l <= m_; ++l) {
      double w = 1.0;
      for (int k = 0; k <= m_; ++k)
        if (k != l) w *= nodes_[l] - nodes_[k];
      bary_[l] = 1.0 / w;
    }
  }

  int degree() const { return m_; }
  const Eigen::VectorXd& nodes() const { return nodes_; }

  // Basis values L_l(s), s in [0,1].
  Eigen::VectorXd values(double s) const {
    Eigen::VectorXd out(m_ + 1);
    for (int l = 0; l <= m_; ++l) {
      if (std::abs(s - nodes_[l]) < 1e-14) {
        out.setZero();
        out[l] = 1.0;
        return out;
      }
    }
    double denom = 0.0;
    for (int l = 0; l <= m_; ++l) {
      out[l] = bary_[l] / (s - nodes_[l]);
      denom += out[l];
    }
    out /= denom;
    return out;
  }

  // Basis derivatives L'_l(s); exact for arbitrary s:
  // L'_l(s) = sum_{k!=l} 1/(x_l-x_k) prod_{j!=l,k} (s-x_j)/(x_l-x_j).
  Eigen::VectorXd derivatives(double s) const {
    Eigen::VectorXd out(m_ + 1);
    for (int l = 0; l <= m_; ++l) {
      double sum = 0.0;
      for (int k = 0; k <= m_; ++k) {
        if (k == l) continue;
        double p = 1.0;
        for (int j = 0; j <= m_; ++j) {
          if (j == l || j == k) continue;
          p *= (s - nodes_[j]) / (nodes_[l] - nodes_[j]);
        }
        sum += p / (nodes_[l] - nodes_[k]);
      }
      out[l] = sum;
    }
    return out;
  }

 private:
  int m_;
  Eigen::VectorXd nodes_;
  Eigen::VectorXd bary_;
};

// Cached per-degree basis (interpolation is called in tight loops).
inline const LagrangeBasis& lagrange_basis(int degree) {
  thread_local std::deque<LagrangeBasis> cache;
  for (auto& b : cache)
    if (b.degree() == degree) return b;
  cache.emplace_back(degree);
  return cache.back();
}

// Precomputed collocation tables for one reference interval: basis values and
// derivatives at the Gauss nodes.
struct CollocationTables {
  GaussRule gauss;             // m nodes
  Eigen::MatrixXd basis_val;   // m x (m+1): L_l(g_i)
  Eigen::MatrixXd basis_der;   // m x (m+1): L'_l(g_i)
  LagrangeBasis basis;

  explicit CollocationTables(int degree)
      : gauss(gauss_legendre(degree)), basis(degree) {
    const int m = degree;
    basis_val.resize(m, m + 1);
    basis_der.resize(m, m + 1);
    for (int i = 0; i < m; ++i) {
      basis_val.row(i) = basis.values(gauss.nodes[i]).transpose();
      basis_der.row(i) = basis.derivatives(gauss.nodes[i]).transpose();
    }
  }
};

inline const CollocationTables& collocation_tables(int degree) {
  thread_local std::deque<CollocationTables> cache;
  for (auto& t : cache)
    if (t.basis.degree() == degree) return t;
  cache.emplace_back(degree);
  return cache.back();
}

}  // namespace hetcon
