#pragma once

#include <functional>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include "hetcon/errors.hpp"
#include "hetcon/gauss.hpp"
#include "hetcon/mesh.hpp"

namespace hetcon::bvp {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using SparseMat = Eigen::SparseMatrix<double>;
using Triplet = Eigen::Triplet<double>;

// One integral constraint int_0^1 q(tau, U(tau), params) dtau = 0. Reference
// data (e.g. the previous periodic solution in a phase condition) lives in
// state captured by the callable and is refreshed through BVProblem::on_accept.
struct Integrand {
  std::function<double(double, const VectorXd&, const VectorXd&)> q;
};

// Boundary-value problem in the standard first-order form on [0,1]:
//   U' = F(U, params),  b(U(0), U(1), params) = 0,  int q(U) = 0,
// with an ordered set of free parameters. The free-parameter count must obey
// n_fp = n_bc + n_ic - n_d + 1, which makes the solution set of a
// pseudo-arclength-closed system one-dimensional.
class BVProblem {
 public:
  using FFn = std::function<VectorXd(const VectorXd&, const VectorXd&)>;
  using FJacFn = std::function<MatrixXd(const VectorXd&, const VectorXd&)>;
  using FParFn = std::function<VectorXd(const VectorXd&, const VectorXd&, int)>;
  using BcFn = std::function<VectorXd(const VectorXd&, const VectorXd&, const VectorXd&)>;

  BVProblem(int n_dim, int n_bc, FFn F, FJacFn F_u, BcFn bc,
            std::vector<Integrand> integrals, VectorXd params,
            std::vector<int> free_params)
      : n_dim_(n_dim),
        n_bc_(n_bc),
        F_(std::move(F)),
        F_u_(std::move(F_u)),
        bc_(std::move(bc)),
        integrals_(std::move(integrals)),
        params_(std::move(params)),
        free_(std::move(free_params)) {
    int n_ic = int(integrals_.size());
    int expected = n_bc_ + n_ic - n_dim_ + 1;
    if (int(free_.size()) != expected)
      throw StructuralError("free-parameter count violates n_fp = n_bc + n_ic - n_d + 1 (expected " +
                            std::to_string(expected) + ", got " +
                            std::to_string(free_.size()) + ")");
    if (expected < 1)
      throw StructuralError("defining system admits no free parameter");
    for (int k : free_)
      if (k < 0 || k >= params_.size())
        throw StructuralError("free parameter index out of range");
  }

  int n_dim() const { return n_dim_; }
  int n_bc() const { return n_bc_; }
  int n_ic() const { return int(integrals_.size()); }
  int n_free() const { return int(free_.size()); }
  const std::vector<int>& free_params() const { return free_; }

  VectorXd& params() { return params_; }
  const VectorXd& params() const { return params_; }
  std::vector<std::string> param_names;

  VectorXd F(const VectorXd& u, const VectorXd& p) const { return F_(u, p); }
  MatrixXd F_u(const VectorXd& u, const VectorXd& p) const { return F_u_(u, p); }
  VectorXd bc(const VectorXd& u0, const VectorXd& u1, const VectorXd& p) const {
    return bc_(u0, u1, p);
  }
  const std::vector<Integrand>& integrals() const { return integrals_; }

  // dF/dp_k; falls back to a forward difference when not provided.
  VectorXd F_p(const VectorXd& u, const VectorXd& p, int k) const {
    if (F_p_) return F_p_(u, p, k);
    VectorXd pp = p;
    double h = 1e-7 * (1.0 + std::abs(p[k]));
    pp[k] += h;
    return (F_(u, pp) - F_(u, p)) / h;
  }

  void set_F_p(FParFn fp) { F_p_ = std::move(fp); }
  bool has_analytic_F_p() const { return bool(F_p_); }

  // Called with the accepted solution after every continuation step so that
  // reference data inside integral constraints can follow the branch.
  std::function<void(const MeshedSolution&)> on_accept;

 private:
  int n_dim_;
  int n_bc_;
  FFn F_;
  FJacFn F_u_;
  FParFn F_p_;
  BcFn bc_;
  std::vector<Integrand> integrals_;
  VectorXd params_;
  std::vector<int> free_;
};

// Orthogonal-collocation discretization of a BVProblem on a fixed mesh.
// Unknown vector layout: values at the N*m+1 representation points
// (n_dim each, point-major), followed by the free parameter values.
class Collocation {
 public:
  Collocation(std::shared_ptr<BVProblem> problem, std::vector<double> knots, int degree)
      : prob_(std::move(problem)),
        knots_(std::move(knots)),
        degree_(degree),
        tab_(collocation_tables(degree)) {
    n_int_ = int(knots_.size()) - 1;
    if (n_int_ < 1) throw StructuralError("collocation mesh needs >= 1 interval");
  }

  const BVProblem& problem() const { return *prob_; }
  BVProblem& problem() { return *prob_; }
  std::shared_ptr<BVProblem> problem_ptr() const { return prob_; }

  int degree() const { return degree_; }
  int n_intervals() const { return n_int_; }
  const std::vector<double>& knots() const { return knots_; }
  int n_points() const { return n_int_ * degree_ + 1; }
  int n_state() const { return prob_->n_dim() * n_points(); }
  int dim() const { return n_state() + prob_->n_free(); }
  int n_equations() const {
    return prob_->n_dim() * n_int_ * degree_ + prob_->n_bc() + prob_->n_ic();
  }

  // Replace the mesh (same knot count not required); callers re-pack solutions.
  void set_knots(std::vector<double> knots) {
    knots_ = std::move(knots);
    n_int_ = int(knots_.size()) - 1;
  }

  VectorXd pack(const MeshedSolution& sol) const {
    MeshedSolution s = sol;
    if (s.knots() != knots_ || s.degree() != degree_)
      s = sol.resampled(knots_, degree_);
    VectorXd x(dim());
    const int nd = prob_->n_dim();
    for (int k = 0; k < n_points(); ++k) x.segment(k * nd, nd) = s.values().col(k);
    const auto& free = prob_->free_params();
    for (int i = 0; i < int(free.size()); ++i) x[n_state() + i] = sol.params[free[i]];
    return x;
  }

  MeshedSolution unpack(const VectorXd& x) const {
    MeshedSolution sol(knots_, degree_, prob_->n_dim());
    const int nd = prob_->n_dim();
    for (int k = 0; k < n_points(); ++k) sol.values().col(k) = x.segment(k * nd, nd);
    sol.params = full_params(x);
    sol.param_names = prob_->param_names;
    return sol;
  }

  VectorXd full_params(const VectorXd& x) const {
    VectorXd p = prob_->params();
    const auto& free = prob_->free_params();
    for (int i = 0; i < int(free.size()); ++i) p[free[i]] = x[n_state() + i];
    return p;
  }

  double free_value(const VectorXd& x, int i) const { return x[n_state() + i]; }

  // Gauss point i of interval j in global time.
  double gauss_tau(int j, int i) const {
    return knots_[j] + (knots_[j + 1] - knots_[j]) * tab_.gauss.nodes[i];
  }

  VectorXd residual(const VectorXd& x) const {
    const int nd = prob_->n_dim();
    const int m = degree_;
    VectorXd p = full_params(x);
    VectorXd res(n_equations());

    for (int j = 0; j < n_int_; ++j) {
      double h = knots_[j + 1] - knots_[j];
      for (int i = 0; i < m; ++i) {
        VectorXd uc = VectorXd::Zero(nd);
        VectorXd du = VectorXd::Zero(nd);
        for (int l = 0; l <= m; ++l) {
          auto col = x.segment((j * m + l) * nd, nd);
          uc += tab_.basis_val(i, l) * col;
          du += tab_.basis_der(i, l) * col;
        }
        res.segment((j * m + i) * nd, nd) = du / h - prob_->F(uc, p);
      }
    }

    int row = nd * n_int_ * m;
    VectorXd u0 = x.segment(0, nd);
    VectorXd u1 = x.segment((n_points() - 1) * nd, nd);
    VectorXd b = prob_->bc(u0, u1, p);
    if (b.size() != prob_->n_bc())
      throw StructuralError("boundary condition block has wrong size");
    res.segment(row, prob_->n_bc()) = b;
    row += prob_->n_bc();

    for (int q = 0; q < prob_->n_ic(); ++q) {
      res[row + q] = integral_value(x, p, q);
    }
    return res;
  }

  // Sparse Jacobian of residual() w.r.t. the full unknown vector. Exact in
  // the ODE block through the problem's analytic F_u; boundary, integral and
  // parameter derivatives by finite differences.
  void jacobian(const VectorXd& x, std::vector<Triplet>& trip) const {
    const int nd = prob_->n_dim();
    const int m = degree_;
    const int nf = prob_->n_free();
    const auto& free = prob_->free_params();
    VectorXd p = full_params(x);
    trip.clear();
    trip.reserve(size_t(n_equations()) * (nd * (m + 1) + nf) / 2);

    for (int j = 0; j < n_int_; ++j) {
      double h = knots_[j + 1] - knots_[j];
      for (int i = 0; i < m; ++i) {
        VectorXd uc = VectorXd::Zero(nd);
        for (int l = 0; l <= m; ++l)
          uc += tab_.basis_val(i, l) * x.segment((j * m + l) * nd, nd);
        MatrixXd Ju = prob_->F_u(uc, p);
        int r0 = (j * m + i) * nd;
        for (int l = 0; l <= m; ++l) {
          int c0 = (j * m + l) * nd;
          double dv = tab_.basis_der(i, l) / h;
          double pv = tab_.basis_val(i, l);
          for (int a = 0; a < nd; ++a) {
            trip.emplace_back(r0 + a, c0 + a, dv);
            for (int bcol = 0; bcol < nd; ++bcol) {
              double v = -pv * Ju(a, bcol);
              if (v != 0.0) trip.emplace_back(r0 + a, c0 + bcol, v);
            }
          }
        }
        for (int k = 0; k < nf; ++k) {
          VectorXd fp = prob_->F_p(uc, p, free[k]);
          for (int a = 0; a < nd; ++a)
            if (fp[a] != 0.0) trip.emplace_back(r0 + a, n_state() + k, -fp[a]);
        }
      }
    }

    // boundary rows: central differences in U(0), U(1) and free parameters
    int row = nd * n_int_ * m;
    VectorXd u0 = x.segment(0, nd);
    VectorXd u1 = x.segment((n_points() - 1) * nd, nd);
    auto bc_at = [&](const VectorXd& a, const VectorXd& b, const VectorXd& pp) {
      return prob_->bc(a, b, pp);
    };
    const int c_last = (n_points() - 1) * nd;
    for (int a = 0; a < nd; ++a) {
      double h0 = 1e-6 * (1.0 + std::abs(u0[a]));
      VectorXd up = u0, um = u0;
      up[a] += h0;
      um[a] -= h0;
      VectorXd d = (bc_at(up, u1, p) - bc_at(um, u1, p)) / (2 * h0);
      for (int r = 0; r < prob_->n_bc(); ++r)
        if (d[r] != 0.0) trip.emplace_back(row + r, a, d[r]);

      double h1 = 1e-6 * (1.0 + std::abs(u1[a]));
      up = u1;
      um = u1;
      up[a] += h1;
      um[a] -= h1;
      d = (bc_at(u0, up, p) - bc_at(u0, um, p)) / (2 * h1);
      for (int r = 0; r < prob_->n_bc(); ++r)
        if (d[r] != 0.0) trip.emplace_back(row + r, c_last + a, d[r]);
    }
    for (int k = 0; k < nf; ++k) {
      double hp = 1e-6 * (1.0 + std::abs(p[free[k]]));
      VectorXd pp = p, pm = p;
      pp[free[k]] += hp;
      pm[free[k]] -= hp;
      VectorXd d = (bc_at(u0, u1, pp) - bc_at(u0, u1, pm)) / (2 * hp);
      for (int r = 0; r < prob_->n_bc(); ++r)
        if (d[r] != 0.0) trip.emplace_back(row + r, n_state() + k, d[r]);
    }
    row += prob_->n_bc();

    // integral rows
    for (int q = 0; q < prob_->n_ic(); ++q) {
      const auto& fn = prob_->integrals()[q].q;
      for (int j = 0; j < n_int_; ++j) {
        double h = knots_[j + 1] - knots_[j];
        for (int i = 0; i < m; ++i) {
          double tau = gauss_tau(j, i);
          VectorXd uc = VectorXd::Zero(nd);
          for (int l = 0; l <= m; ++l)
            uc += tab_.basis_val(i, l) * x.segment((j * m + l) * nd, nd);
          double wgt = h * tab_.gauss.weights[i];
          // dq/dU at this Gauss point
          for (int a = 0; a < nd; ++a) {
            double hu = 1e-6 * (1.0 + std::abs(uc[a]));
            VectorXd up = uc, um = uc;
            up[a] += hu;
            um[a] -= hu;
            double dq = (fn(tau, up, p) - fn(tau, um, p)) / (2 * hu);
            if (dq == 0.0) continue;
            for (int l = 0; l <= m; ++l) {
              double v = wgt * dq * tab_.basis_val(i, l);
              trip.emplace_back(row + q, (j * m + l) * nd + a, v);
            }
          }
        }
      }
      for (int k = 0; k < nf; ++k) {
        double hp = 1e-6 * (1.0 + std::abs(p[free[k]]));
        VectorXd pp = p, pm = p;
        pp[free[k]] += hp;
        pm[free[k]] -= hp;
        double d = (integral_value(x, pp, q) - integral_value(x, pm, q)) / (2 * hp);
        if (d != 0.0) trip.emplace_back(row + q, n_state() + k, d);
      }
    }
  }

  double integral_value(const VectorXd& x, const VectorXd& p, int q) const {
    const int nd = prob_->n_dim();
    const int m = degree_;
    const auto& fn = prob_->integrals()[q].q;
    double acc = 0.0;
    for (int j = 0; j < n_int_; ++j) {
      double h = knots_[j + 1] - knots_[j];
      for (int i = 0; i < m; ++i) {
        VectorXd uc = VectorXd::Zero(nd);
        for (int l = 0; l <= m; ++l)
          uc += tab_.basis_val(i, l) * x.segment((j * m + l) * nd, nd);
        acc += h * tab_.gauss.weights[i] * fn(gauss_tau(j, i), uc, p);
      }
    }
    return acc;
  }

  // Quadrature weight vector for the discrete inner product used by the
  // pseudo-arclength closure: point values weighted by their share of the
  // integration rule, parameters by 1.
  VectorXd inner_weights() const {
    VectorXd w = VectorXd::Zero(dim());
    const int nd = prob_->n_dim();
    const int m = degree_;
    // integral of each cardinal function over its interval
    VectorXd card = VectorXd::Zero(m + 1);
    for (int i = 0; i < m; ++i)
      card += tab_.gauss.weights[i] * tab_.basis_val.row(i).transpose();
    for (int j = 0; j < n_int_; ++j) {
      double h = knots_[j + 1] - knots_[j];
      for (int l = 0; l <= m; ++l)
        for (int a = 0; a < nd; ++a) w[(j * m + l) * nd + a] += h * card[l];
    }
    w.tail(prob_->n_free()).setOnes();
    return w;
  }

 private:
  std::shared_ptr<BVProblem> prob_;
  std::vector<double> knots_;
  int degree_;
  int n_int_ = 0;
  const CollocationTables& tab_;
};

struct NewtonReport {
  int iterations = 0;
  double residual = 0.0;
};

namespace detail {

inline SparseMat build_sparse(int rows, int cols, const std::vector<Triplet>& trip) {
  SparseMat A(rows, cols);
  A.setFromTriplets(trip.begin(), trip.end());
  return A;
}

}  // namespace detail

// Newton iteration on the square system obtained by freezing one free
// parameter at its current value. Applies a step-halving cascade (up to 5
// halvings) when a full step fails to reduce the residual.
inline NewtonReport newton_solve(const Collocation& disc, VectorXd& x, int frozen_free,
                                 double tol = 1e-9, int max_iter = 10) {
  if (frozen_free < 0 || frozen_free >= disc.problem().n_free())
    throw ConfigError("newton_solve: frozen parameter index out of range");
  const int n = disc.dim();
  const int fr_col = disc.n_state() + frozen_free;
  std::vector<Triplet> trip;
  NewtonReport rep;

  VectorXd r = disc.residual(x);
  double rn = r.lpNorm<Eigen::Infinity>();
  for (int it = 0; it < max_iter; ++it) {
    rep.residual = rn;
    if (rn <= tol) {
      rep.iterations = it;
      return rep;
    }
    disc.jacobian(x, trip);
    trip.emplace_back(n - 1, fr_col, 1.0);
    SparseMat A = detail::build_sparse(n, n, trip);
    Eigen::SparseLU<SparseMat> lu(A);
    if (lu.info() != Eigen::Success)
      throw SingularJacobian("newton_solve: factorization failed");
    VectorXd rhs(n);
    rhs.head(n - 1) = -r;
    rhs[n - 1] = 0.0;
    VectorXd delta = lu.solve(rhs);

    double stepping = 1.0;
    bool reduced = false;
    for (int half = 0; half <= 5; ++half) {
      VectorXd xn = x + stepping * delta;
      VectorXd rn_vec = disc.residual(xn);
      double rnn = rn_vec.lpNorm<Eigen::Infinity>();
      if (rnn < rn || rnn <= tol) {
        x = std::move(xn);
        r = std::move(rn_vec);
        rn = rnn;
        reduced = true;
        break;
      }
      stepping *= 0.5;
    }
    if (!reduced)
      throw NewtonDiverged("newton_solve: no residual reduction", it + 1, rn);
  }
  if (rn <= tol) {
    rep.iterations = max_iter;
    rep.residual = rn;
    return rep;
  }
  throw NewtonDiverged("newton_solve: tolerance not reached", max_iter, rn);
}

}  // namespace hetcon::bvp
