#pragma once

#include <cmath>

#include "hetcon/system.hpp"

namespace hetcon::models {

using Eigen::Matrix3d;
using Eigen::Vector3d;
using Eigen::VectorXd;

// Lorenz system. Parameters (sigma, r, b), standard values sigma=10, b=8/3;
// r is the usual bifurcation parameter.
inline SystemDefinition lorenz() {
  VectorXd defaults(3);
  defaults << 10.0, 21.0, 8.0 / 3.0;
  return SystemDefinition(
      "lorenz", {"sigma", "r", "b"}, defaults,
      [](const Vector3d& u, const VectorXd& p) {
        double sigma = p[0], r = p[1], b = p[2];
        return Vector3d(sigma * (u[1] - u[0]), r * u[0] - u[1] - u[0] * u[2],
                        u[0] * u[1] - b * u[2]);
      },
      [](const Vector3d& u, const VectorXd& p) {
        double sigma = p[0], r = p[1], b = p[2];
        Matrix3d J;
        J << -sigma, sigma, 0.0,
             r - u[2], -1.0, -u[0],
             u[1], u[0], -b;
        return J;
      },
      [](const Vector3d&, const VectorXd&) {
        std::array<Matrix3d, 3> H{Matrix3d::Zero(), Matrix3d::Zero(), Matrix3d::Zero()};
        H[1](0, 2) = H[1](2, 0) = -1.0;
        H[2](0, 1) = H[2](1, 0) = 1.0;
        return H;
      });
}

// Electronic circuit model of Freire et al. Parameters (nu, beta, gamma, rc,
// a3, b3); gamma=0, rc=0.6, a3=0.328578, b3=0.933578 are structural, (nu,
// beta) are the bifurcation parameters. The first equation carries the time
// constant: rc * dx1/dt = ..., so the rhs divides by rc.
inline SystemDefinition circuit() {
  VectorXd defaults(6);
  defaults << -0.721309, -0.32, 0.0, 0.6, 0.328578, 0.933578;
  return SystemDefinition(
      "circuit", {"nu", "beta", "gamma", "rc", "a3", "b3"}, defaults,
      [](const Vector3d& u, const VectorXd& p) {
        double nu = p[0], beta = p[1], gamma = p[2], rc = p[3], a3 = p[4], b3 = p[5];
        double q = u[1] - u[0];
        return Vector3d(
            (-(beta + nu) * u[0] + beta * u[1] - a3 * u[0] * u[0] * u[0] + b3 * q * q * q) / rc,
            beta * u[0] - (beta + gamma) * u[1] - u[2] - b3 * q * q * q,
            u[1]);
      },
      [](const Vector3d& u, const VectorXd& p) {
        double nu = p[0], beta = p[1], gamma = p[2], rc = p[3], a3 = p[4], b3 = p[5];
        double q = u[1] - u[0];
        Matrix3d J;
        J << (-(beta + nu) - 3 * a3 * u[0] * u[0] - 3 * b3 * q * q) / rc,
             (beta + 3 * b3 * q * q) / rc, 0.0,
             beta + 3 * b3 * q * q, -(beta + gamma) - 3 * b3 * q * q, -1.0,
             0.0, 1.0, 0.0;
        return J;
      },
      [](const Vector3d& u, const VectorXd& p) {
        double rc = p[3], a3 = p[4], b3 = p[5];
        double q = u[1] - u[0];
        std::array<Matrix3d, 3> H{Matrix3d::Zero(), Matrix3d::Zero(), Matrix3d::Zero()};
        H[0](0, 0) = (-6 * a3 * u[0] + 6 * b3 * q) / rc;
        H[0](0, 1) = H[0](1, 0) = -6 * b3 * q / rc;
        H[0](1, 1) = 6 * b3 * q / rc;
        H[1](0, 0) = -6 * b3 * q;
        H[1](0, 1) = H[1](1, 0) = 6 * b3 * q;
        H[1](1, 1) = -6 * b3 * q;
        return H;
      });
}

// Rosenzweig-MacArthur three-level food chain with Holling type II
// responses. Parameters (d1, d2, a1, a2, b1, b2); the death rates d1, d2 are
// the bifurcation parameters, a1=5, a2=0.1, b1=3, b2=2.
inline SystemDefinition food_chain() {
  VectorXd defaults(6);
  defaults << 0.25, 0.0125, 5.0, 0.1, 3.0, 2.0;
  return SystemDefinition(
      "food_chain", {"d1", "d2", "a1", "a2", "b1", "b2"}, defaults,
      [](const Vector3d& u, const VectorXd& p) {
        double d1 = p[0], d2 = p[1], a1 = p[2], a2 = p[3], b1 = p[4], b2 = p[5];
        double f1 = a1 * u[0] * u[1] / (1 + b1 * u[0]);
        double f2 = a2 * u[1] * u[2] / (1 + b2 * u[1]);
        return Vector3d(u[0] * (1 - u[0]) - f1, f1 - f2 - d1 * u[1], f2 - d2 * u[2]);
      },
      [](const Vector3d& u, const VectorXd& p) {
        double d1 = p[0], d2 = p[1], a1 = p[2], a2 = p[3], b1 = p[4], b2 = p[5];
        double g1 = a1 * u[0] / (1 + b1 * u[0]);
        double g1p = a1 / ((1 + b1 * u[0]) * (1 + b1 * u[0]));
        double g2 = a2 * u[1] / (1 + b2 * u[1]);
        double g2p = a2 / ((1 + b2 * u[1]) * (1 + b2 * u[1]));
        Matrix3d J;
        J << 1 - 2 * u[0] - g1p * u[1], -g1, 0.0,
             g1p * u[1], g1 - g2p * u[2] - d1, -g2,
             0.0, g2p * u[2], g2 - d2;
        return J;
      },
      [](const Vector3d& u, const VectorXd& p) {
        double a1 = p[2], a2 = p[3], b1 = p[4], b2 = p[5];
        double s1 = 1 + b1 * u[0], s2 = 1 + b2 * u[1];
        double g1p = a1 / (s1 * s1);
        double g1pp = -2 * a1 * b1 / (s1 * s1 * s1);
        double g2p = a2 / (s2 * s2);
        double g2pp = -2 * a2 * b2 / (s2 * s2 * s2);
        std::array<Matrix3d, 3> H{Matrix3d::Zero(), Matrix3d::Zero(), Matrix3d::Zero()};
        H[0](0, 0) = -2 - g1pp * u[1];
        H[0](0, 1) = H[0](1, 0) = -g1p;
        H[1](0, 0) = g1pp * u[1];
        H[1](0, 1) = H[1](1, 0) = g1p;
        H[1](1, 1) = -g2pp * u[2];
        H[1](1, 2) = H[1](2, 1) = -g2p;
        H[2](1, 1) = g2pp * u[2];
        H[2](1, 2) = H[2](2, 1) = g2p;
        return H;
      });
}

inline SystemDefinition builtin(const std::string& name) {
  if (name == "lorenz") return lorenz();
  if (name == "circuit") return circuit();
  if (name == "food_chain") return food_chain();
  throw ConfigError("unknown system '" + name + "'");
}

}  // namespace hetcon::models
