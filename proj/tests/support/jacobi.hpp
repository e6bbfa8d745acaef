#pragma once

// Cyclic Jacobi eigensolver for symmetric 3x3 matrices. Independent of the
// library's Eigen-based spectral code; used as an oracle for matrix square
// roots in the geometry tests.

#include <array>
#include <cmath>

#include <Eigen/Dense>

namespace test_support {

struct JacobiResult {
  Eigen::Vector3d eigenvalues;
  Eigen::Matrix3d eigenvectors;  // columns
};

inline JacobiResult jacobi_eigen_3x3(const Eigen::Matrix3d& input) {
  Eigen::Matrix3d a = input;
  Eigen::Matrix3d v = Eigen::Matrix3d::Identity();
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 3; ++q) off += a(p, q) * a(p, q);
    }
    if (off < 1e-30) break;
    for (int p = 0; p < 3; ++p) {
      for (int q = p + 1; q < 3; ++q) {
        if (std::abs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        Eigen::Matrix3d rot = Eigen::Matrix3d::Identity();
        rot(p, p) = c;
        rot(q, q) = c;
        rot(p, q) = s;
        rot(q, p) = -s;
        a = rot.transpose() * a * rot;
        v = v * rot;
      }
    }
  }
  JacobiResult out;
  out.eigenvalues = a.diagonal();
  out.eigenvectors = v;
  return out;
}

// Symmetric positive definite square root via the Jacobi factorization.
inline Eigen::Matrix3d jacobi_sqrt(const Eigen::Matrix3d& m) {
  const JacobiResult j = jacobi_eigen_3x3(m);
  Eigen::Vector3d roots;
  for (int i = 0; i < 3; ++i) roots[i] = std::sqrt(j.eigenvalues[i]);
  return j.eigenvectors * roots.asDiagonal() * j.eigenvectors.transpose();
}

}  // namespace test_support
