#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "hetcon/errors.hpp"

namespace hetcon {

// A 3D autonomous vector field du/dt = f(u, alpha) with named parameters,
// hand-coded Jacobian and Hessian. Immutable after construction; safe to
// share across threads.
class SystemDefinition {
 public:
  using Rhs = std::function<Eigen::Vector3d(const Eigen::Vector3d&, const Eigen::VectorXd&)>;
  using Jac = std::function<Eigen::Matrix3d(const Eigen::Vector3d&, const Eigen::VectorXd&)>;
  // hess[k](i,j) = d^2 f_k / du_i du_j
  using Hess = std::function<std::array<Eigen::Matrix3d, 3>(const Eigen::Vector3d&,
                                                            const Eigen::VectorXd&)>;

  SystemDefinition(std::string name, std::vector<std::string> param_names,
                   Eigen::VectorXd param_defaults, Rhs rhs, Jac jac, Hess hess)
      : name_(std::move(name)),
        param_names_(std::move(param_names)),
        param_defaults_(std::move(param_defaults)),
        rhs_(std::move(rhs)),
        jac_(std::move(jac)),
        hess_(std::move(hess)) {
    if (int(param_names_.size()) != param_defaults_.size())
      throw ConfigError("SystemDefinition: parameter name/default count mismatch");
  }

  const std::string& name() const { return name_; }
  int dimension() const { return 3; }
  int n_params() const { return int(param_names_.size()); }
  const std::vector<std::string>& param_names() const { return param_names_; }
  const Eigen::VectorXd& param_defaults() const { return param_defaults_; }

  int param_index(const std::string& pname) const {
    for (size_t i = 0; i < param_names_.size(); ++i)
      if (param_names_[i] == pname) return int(i);
    throw ConfigError("unknown parameter '" + pname + "' for system " + name_);
  }

  Eigen::Vector3d rhs(const Eigen::Vector3d& u, const Eigen::VectorXd& alpha) const {
    check_params(alpha);
    return rhs_(u, alpha);
  }

  Eigen::Matrix3d jacobian(const Eigen::Vector3d& u, const Eigen::VectorXd& alpha) const {
    check_params(alpha);
    return jac_(u, alpha);
  }

  std::array<Eigen::Matrix3d, 3> hessian(const Eigen::Vector3d& u,
                                         const Eigen::VectorXd& alpha) const {
    check_params(alpha);
    return hess_(u, alpha);
  }

  // d(f_u(u)^T w)/du, assembled from the Hessian:
  // out(i,k) = sum_j w_j H_j(i,k).
  Eigen::Matrix3d jacobian_transpose_derivative(const Eigen::Vector3d& u,
                                                const Eigen::VectorXd& alpha,
                                                const Eigen::Vector3d& w) const {
    auto H = hessian(u, alpha);
    Eigen::Matrix3d out = Eigen::Matrix3d::Zero();
    for (int j = 0; j < 3; ++j) out += w[j] * H[j];
    return out;
  }

  // d(f_u(u) v)/du: out(i,k) = sum_j H_i(k,j) v_j = (H_i v)_k.
  Eigen::Matrix3d jacobian_derivative(const Eigen::Vector3d& u, const Eigen::VectorXd& alpha,
                                      const Eigen::Vector3d& v) const {
    auto H = hessian(u, alpha);
    Eigen::Matrix3d out;
    for (int i = 0; i < 3; ++i) out.row(i) = (H[i] * v).transpose();
    return out;
  }

  // Central-difference parameter derivatives (parameters enter few places;
  // hand-coding d f/d alpha per system is not worth it).
  Eigen::Vector3d rhs_param_derivative(const Eigen::Vector3d& u, const Eigen::VectorXd& alpha,
                                       int k) const {
    Eigen::VectorXd ap = alpha, am = alpha;
    double h = 1e-6 * (1.0 + std::abs(alpha[k]));
    ap[k] += h;
    am[k] -= h;
    return (rhs_(u, ap) - rhs_(u, am)) / (2 * h);
  }

  Eigen::Matrix3d jacobian_param_derivative(const Eigen::Vector3d& u,
                                            const Eigen::VectorXd& alpha, int k) const {
    Eigen::VectorXd ap = alpha, am = alpha;
    double h = 1e-6 * (1.0 + std::abs(alpha[k]));
    ap[k] += h;
    am[k] -= h;
    return (jac_(u, ap) - jac_(u, am)) / (2 * h);
  }

 private:
  void check_params(const Eigen::VectorXd& alpha) const {
    if (alpha.size() != param_defaults_.size())
      throw ConfigError("parameter vector length mismatch for system " + name_);
  }

  std::string name_;
  std::vector<std::string> param_names_;
  Eigen::VectorXd param_defaults_;
  Rhs rhs_;
  Jac jac_;
  Hess hess_;
};

}  // namespace hetcon
