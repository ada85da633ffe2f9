#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "hetcon/errors.hpp"

namespace hetcon {

// Adaptive Dormand-Prince 5(4) pair. This integrator serves as the reference
// oracle (monodromy matrices, flow checks) and for seeding initial data; the
// continuation path never calls it inside a Newton loop.
class Rk45 {
 public:
  using Field = std::function<Eigen::VectorXd(double, const Eigen::VectorXd&)>;

  double rtol = 1e-10;
  double atol = 1e-12;
  long max_steps = 2'000'000;

  Eigen::VectorXd integrate(const Field& f, double t0, double t1,
                            Eigen::VectorXd y) const {
    integrate_impl(f, t0, t1, y, nullptr);
    return y;
  }

  // Integrates and records the state at each requested output time
  // (t_out must be increasing within [t0, t1]).
  std::vector<Eigen::VectorXd> sample(const Field& f, double t0, double t1,
                                      Eigen::VectorXd y,
                                      const std::vector<double>& t_out) const {
    std::vector<Eigen::VectorXd> out;
    out.reserve(t_out.size());
    double t = t0;
    for (double tk : t_out) {
      if (tk < t - 1e-14 || tk > t1 + 1e-12)
        throw DomainError("Rk45::sample: output times must be increasing in range");
      if (tk > t) {
        integrate_impl(f, t, tk, y, nullptr);
        t = tk;
      }
      out.push_back(y);
    }
    return out;
  }

 private:
  void integrate_impl(const Field& f, double t0, double t1, Eigen::VectorXd& y,
                      void*) const {
    static const double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                        a64 = 49.0 / 176, a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    if (t1 == t0) return;
    const double dir = t1 > t0 ? 1.0 : -1.0;
    double t = t0;
    double h = dir * std::min(std::abs(t1 - t0), 1e-2 * (std::abs(t1 - t0) + 1.0));
    Eigen::VectorXd k1 = f(t, y);
    long steps = 0;
    while (dir * (t1 - t) > 0) {
      if (++steps > max_steps) throw OracleError("Rk45: step budget exhausted");
      if (dir * (t + h - t1) > 0) h = t1 - t;
      Eigen::VectorXd k2 = f(t + c2 * h, y + h * (a21 * k1));
      Eigen::VectorXd k3 = f(t + c3 * h, y + h * (a31 * k1 + a32 * k2));
      Eigen::VectorXd k4 = f(t + c4 * h, y + h * (a41 * k1 + a42 * k2 + a43 * k3));
      Eigen::VectorXd k5 =
          f(t + c5 * h, y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
      Eigen::VectorXd k6 =
          f(t + h, y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
      Eigen::VectorXd ynew =
          y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
      Eigen::VectorXd k7 = f(t + h, ynew);
      Eigen::VectorXd err =
          h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);

      double norm = 0.0;
      for (int i = 0; i < y.size(); ++i) {
        double sc = atol + rtol * std::max(std::abs(y[i]), std::abs(ynew[i]));
        norm = std::max(norm, std::abs(err[i]) / sc);
      }
      if (norm <= 1.0) {
        t += h;
        y = std::move(ynew);
        k1 = std::move(k7);  // FSAL
      }
      double fac = 0.9 * std::pow(std::max(norm, 1e-10), -0.2);
      h *= std::clamp(fac, 0.2, 5.0);
      if (std::abs(h) < 1e-14 * (std::abs(t) + 1.0))
        throw OracleError("Rk45: step size underflow");
    }
  }
};

}  // namespace hetcon
