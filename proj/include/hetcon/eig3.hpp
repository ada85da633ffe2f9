#pragma once

#include <array>
#include <cmath>
#include <complex>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include "hetcon/errors.hpp"

namespace hetcon {

// Characteristic polynomial of a 3x3 matrix, lambda^3 + c2 l^2 + c1 l + c0.
struct CharPoly3 {
  double c2, c1, c0;
};

inline CharPoly3 char_poly(const Eigen::Matrix3d& A) {
  double tr = A.trace();
  // sum of principal 2x2 minors
  double m = A(0, 0) * A(1, 1) - A(0, 1) * A(1, 0) + A(0, 0) * A(2, 2) -
             A(0, 2) * A(2, 0) + A(1, 1) * A(2, 2) - A(1, 2) * A(2, 1);
  return {-tr, m, -A.determinant()};
}

// Hopf test scalar for n=3: the product of pairwise eigenvalue sums,
// (l1+l2)(l1+l3)(l2+l3) = p(-c2) = c0 - c1*c2. Vanishes when a complex pair
// crosses the imaginary axis (and at neutral saddles, which callers filter
// out by checking c1 > 0).
inline double hopf_test_value(const Eigen::Matrix3d& A) {
  CharPoly3 p = char_poly(A);
  return p.c0 - p.c1 * p.c2;
}

// Frequency of the candidate imaginary pair at a zero of hopf_test_value.
inline double hopf_frequency(const Eigen::Matrix3d& A) {
  CharPoly3 p = char_poly(A);
  if (p.c1 <= 0.0) throw DomainError("hopf_frequency: no imaginary pair (c1 <= 0)");
  return std::sqrt(p.c1);
}

inline std::array<std::complex<double>, 3> eigenvalues3(const Eigen::Matrix3d& A) {
  Eigen::EigenSolver<Eigen::Matrix3d> es(A, false);
  return {es.eigenvalues()[0], es.eigenvalues()[1], es.eigenvalues()[2]};
}

// Right eigenvector for the eigenvalue of A closest to mu; real part taken
// for (numerically) real eigenvalues.
inline Eigen::Vector3d real_eigenvector(const Eigen::Matrix3d& A, double mu) {
  Eigen::EigenSolver<Eigen::Matrix3d> es(A);
  int best = 0;
  double dist = 1e300;
  for (int i = 0; i < 3; ++i) {
    double d = std::abs(es.eigenvalues()[i] - std::complex<double>(mu, 0.0));
    if (d < dist) {
      dist = d;
      best = i;
    }
  }
  Eigen::Vector3cd v = es.eigenvectors().col(best);
  // rotate to make it essentially real
  int big = 0;
  v.cwiseAbs().maxCoeff(&big);
  v /= v[big] / std::abs(v[big]);
  Eigen::Vector3d out = v.real();
  return out.normalized();
}

// Complex pair eigenvector with Re v orthogonal to Im v and |Re v| maximal
// under rotations e^{-i phi} (removes the phase ambiguity for Hopf starts).
inline void hopf_eigenvector(const Eigen::Matrix3d& A, double omega,
                             Eigen::Vector3d& re, Eigen::Vector3d& im) {
  Eigen::EigenSolver<Eigen::Matrix3d> es(A);
  int best = -1;
  double dist = 1e300;
  for (int i = 0; i < 3; ++i) {
    if (std::abs(es.eigenvalues()[i].imag()) < 1e-12) continue;
    double d = std::abs(es.eigenvalues()[i] - std::complex<double>(0.0, omega));
    if (d < dist) {
      dist = d;
      best = i;
    }
  }
  if (best < 0) throw DomainError("hopf_eigenvector: no complex eigenvalue");
  Eigen::Vector3cd v = es.eigenvectors().col(best);
  // choose phi with tan(2 phi) = 2<re,im>/(|re|^2-|im|^2) to orthogonalize
  Eigen::Vector3d a = v.real(), b = v.imag();
  double phi = 0.5 * std::atan2(2.0 * a.dot(b), a.squaredNorm() - b.squaredNorm());
  Eigen::Vector3cd w = v * std::exp(std::complex<double>(0.0, -phi));
  re = w.real();
  im = w.imag();
  if (re.squaredNorm() < im.squaredNorm()) {
    // swap roles: multiply by -i
    Eigen::Vector3d tmp = re;
    re = im;
    im = -tmp;
  }
  double n = re.norm();
  re /= n;
  im /= n;
}

// Dense matrix exponential by scaling-and-squaring over a Taylor core
// evaluated to machine precision. Reference oracle for the linearized-flow
// initial connection.
inline Eigen::Matrix3d expm3(const Eigen::Matrix3d& A) {
  double nrm = A.lpNorm<Eigen::Infinity>();
  int squarings =
      nrm > 0.03125 ? int(std::ceil(std::log2(nrm / 0.03125))) : 0;
  Eigen::Matrix3d As = A / std::pow(2.0, squarings);
  Eigen::Matrix3d R = Eigen::Matrix3d::Identity();
  Eigen::Matrix3d term = Eigen::Matrix3d::Identity();
  for (int k = 1; k <= 16; ++k) {
    term = (term * As) / k;
    R += term;
    if (term.lpNorm<Eigen::Infinity>() < 1e-18) break;
  }
  for (int i = 0; i < squarings; ++i) R = R * R;
  return R;
}

}  // namespace hetcon
