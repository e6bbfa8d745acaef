#pragma once

// Coordinate handling for the whitened two-photon geometry.
//
// Physical inputs are the per-photon position covariances and the
// momentum-difference vector delta_k = (-dk_x, -dk_y, domega/c). Estimation
// works in whitened coordinates: rho = Sigma^{-1/2} dr and
// kappa = Sigma^{1/2} delta_k with Sigma the sum of the two covariances.

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "homsense/common.hpp"

namespace homsense {

// Symmetric positive definite 3x3 covariance with cached spectral factors.
// Eigenvalues below 1e-12 of the largest are rejected as degenerate.
class CovarianceMatrix {
 public:
  explicit CovarianceMatrix(const Mat3& entries) {
    const double scale = entries.cwiseAbs().maxCoeff();
    if (!(scale > 0.0) || !entries.allFinite()) {
      throw std::domain_error("CovarianceMatrix: entries must be finite and nonzero");
    }
    if ((entries - entries.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale) {
      throw std::domain_error("CovarianceMatrix: matrix is not symmetric");
    }
    entries_ = 0.5 * (entries + entries.transpose());
    Eigen::SelfAdjointEigenSolver<Mat3> solver(entries_);
    if (solver.info() != Eigen::Success) {
      throw std::domain_error("CovarianceMatrix: eigendecomposition failed");
    }
    const Vec3 lambda = solver.eigenvalues();
    const double floor = 1e-12 * lambda[2];
    for (int i = 0; i < 3; ++i) {
      if (!(lambda[i] > floor) || !(lambda[i] > 0.0)) {
        throw std::domain_error("CovarianceMatrix: eigenvalue " + std::to_string(lambda[i]) +
                                " is not positive definite within tolerance");
      }
    }
    const Mat3 v = solver.eigenvectors();
    sqrt_ = v * lambda.cwiseSqrt().asDiagonal() * v.transpose();
    inverse_sqrt_ = v * lambda.cwiseSqrt().cwiseInverse().asDiagonal() * v.transpose();
    inverse_ = v * lambda.cwiseInverse().asDiagonal() * v.transpose();
    determinant_ = lambda.prod();
  }

  static CovarianceMatrix from_sigmas(double sigma_x, double sigma_y, double sigma_t) {
    Mat3 m = Mat3::Zero();
    m(0, 0) = sigma_x * sigma_x;
    m(1, 1) = sigma_y * sigma_y;
    m(2, 2) = sigma_t * sigma_t;
    return CovarianceMatrix(m);
  }

  static CovarianceMatrix from_row_major(const std::array<double, 9>& a) {
    Mat3 m;
    for (int r = 0; r < 3; ++r)
      for (int c = 0; c < 3; ++c) m(r, c) = a[static_cast<std::size_t>(3 * r + c)];
    return CovarianceMatrix(m);
  }

  const Mat3& entries() const { return entries_; }
  const Mat3& sqrt() const { return sqrt_; }
  const Mat3& inverse_sqrt() const { return inverse_sqrt_; }
  const Mat3& inverse() const { return inverse_; }
  double determinant() const { return determinant_; }

 private:
  Mat3 entries_;
  Mat3 sqrt_;
  Mat3 inverse_sqrt_;
  Mat3 inverse_;
  double determinant_ = 0.0;
};

inline CovarianceMatrix pooled_covariance(const CovarianceMatrix& sigma1,
                                          const CovarianceMatrix& sigma2) {
  return CovarianceMatrix(sigma1.entries() + sigma2.entries());
}

// delta_k from lab-frame transverse momentum differences and the frequency
// difference: delta_k = (-dk_x, -dk_y, domega_over_c).
inline Vec3 delta_k_from_lab(double dk_x, double dk_y, double domega_over_c) {
  return Vec3(-dk_x, -dk_y, domega_over_c);
}

inline KappaVector kappa_from_physical(const CovarianceMatrix& pooled, const Vec3& delta_k) {
  return pooled.sqrt() * delta_k;
}

inline Vec3 whiten(const CovarianceMatrix& pooled, const Vec3& delta_r) {
  return pooled.inverse_sqrt() * delta_r;
}

struct SphericalMomentum {
  double magnitude = 0.0;
  double theta = 0.0;  // polar angle from the first axis, [0, pi]
  double phi = 0.0;    // azimuth in the (2,3) plane, [-pi, pi]
};

inline void validate(const SphericalMomentum& s) {
  if (!(s.magnitude >= 0.0) || !std::isfinite(s.magnitude)) {
    throw std::domain_error("SphericalMomentum: magnitude must be finite and nonnegative");
  }
  if (!(s.theta >= 0.0) || !(s.theta <= std::numbers::pi)) {
    throw std::domain_error("SphericalMomentum: theta must lie in [0, pi]");
  }
  if (!(s.phi >= -std::numbers::pi) || !(s.phi <= std::numbers::pi)) {
    throw std::domain_error("SphericalMomentum: phi must lie in [-pi, pi]");
  }
}

inline KappaVector kappa_from_spherical(const SphericalMomentum& s) {
  validate(s);
  const double st = std::sin(s.theta);
  return KappaVector(s.magnitude * std::cos(s.theta), s.magnitude * st * std::cos(s.phi),
                     s.magnitude * st * std::sin(s.phi));
}

// Inverse of kappa_from_spherical. Conventions at the degenerate points:
// zero vector -> (0, 0, 0); on the polar axis phi = 0; sign(0) = +1 for the
// azimuth branch, so phi = +pi on the negative-kappa_2 half line.
inline SphericalMomentum spherical_from_kappa(const KappaVector& kappa) {
  const double m = kappa.norm();
  if (m == 0.0) return {0.0, 0.0, 0.0};
  const double theta = std::acos(std::clamp(kappa[0] / m, -1.0, 1.0));
  const double p = std::hypot(kappa[1], kappa[2]);
  if (p == 0.0) return {m, theta, 0.0};
  const double sign = kappa[2] < 0.0 ? -1.0 : 1.0;
  const double phi = sign * std::acos(std::clamp(kappa[1] / p, -1.0, 1.0));
  return {m, theta, phi};
}

// Representative of the {kappa, -kappa} likelihood equivalence class: the
// first component larger than tol in magnitude is made positive.
inline KappaVector canonicalize(const KappaVector& kappa, double tol = 1e-12) {
  for (int i = 0; i < 3; ++i) {
    if (std::abs(kappa[i]) > tol) return kappa[i] < 0.0 ? KappaVector(-kappa) : kappa;
  }
  return kappa;
}

}  // namespace homsense
