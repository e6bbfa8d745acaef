#pragma once

// Classical and quantum Fisher information for the interference model.
//
// The classical Fisher matrix reduces to 1D Gaussian-weighted integrals of
// the beta kernel along the kappa direction. In spherical parameters
// (|kappa|, theta, phi) it is diagonal,
//   F = gamma^2 diag(I2, |kappa|^2 I0, |kappa|^2 sin^2(theta) I0),
//   Im = Integral dl phi(l) beta_nu(|kappa| l) l^m,
// and in Cartesian components it is F_I * Id + F_kappa * P_kappa with
// F_I = gamma^2 I0 and F_kappa = gamma^2 (I2 - I0). At nu = 1 the classical
// matrix equals gamma^2 times the quantum Fisher information diag(1,
// |kappa|^2, |kappa|^2 sin^2(theta)).

#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

#include "homsense/geometry.hpp"
#include "homsense/model.hpp"
#include "homsense/quadrature.hpp"

namespace homsense {

enum class FisherBasis { Spherical, Cartesian };

struct FisherMatrix {
  Mat3 entries = Mat3::Zero();
  FisherBasis basis = FisherBasis::Spherical;
  double quad_error = 0.0;
};

inline FisherMatrix qfi(const SphericalMomentum& s) {
  validate(s);
  const double m2 = s.magnitude * s.magnitude;
  const double st = std::sin(s.theta);
  FisherMatrix out;
  out.basis = FisherBasis::Spherical;
  out.entries.diagonal() = Vec3(1.0, m2, m2 * st * st);
  return out;
}

namespace detail {

struct BetaMoments {
  double i0 = 0.0;
  double i2 = 0.0;
  double error = 0.0;
};

// I0 and I2 of the beta kernel at frequency |kappa|. beta(nu, |kappa| l) has
// period pi/|kappa| in l, i.e. angular frequency 2|kappa|.
inline BetaMoments beta_moments(double nu, double magnitude, const QuadratureSpec& quad) {
  BetaMoments out;
  const auto f0 = [&](double l) { return beta(nu, magnitude * l); };
  const auto f2 = [&](double l) { return l * l * beta(nu, magnitude * l); };
  if (quad.rule == QuadratureRule::AdaptiveTruncated) {
    const double scale = 2.0 * magnitude;
    const IntegralResult r0 = integrate_gaussian_1d(f0, quad, scale);
    const IntegralResult r2 = integrate_gaussian_1d(f2, quad, scale);
    out.i0 = r0.value;
    out.i2 = r2.value;
    out.error = r0.error_estimate + r2.error_estimate;
  } else {
    const IntegralResult r0 = integrate_gauss_hermite(f0, quad);
    const IntegralResult r2 = integrate_gauss_hermite(f2, quad);
    out.i0 = r0.value;
    out.i2 = r2.value;
    out.error = r0.error_estimate + r2.error_estimate;
  }
  return out;
}

}  // namespace detail

inline FisherMatrix fisher_spherical(double nu, double gamma, const SphericalMomentum& s,
                                     const QuadratureSpec& quad = {}) {
  detail::check_unit_interval("nu", nu);
  detail::check_unit_interval("gamma", gamma);
  validate(s);
  const double g2 = gamma * gamma;
  const double m2 = s.magnitude * s.magnitude;
  const double st = std::sin(s.theta);

  // Tighten the kernel tolerance so matrix entries meet quad.tol after the
  // |kappa|^2 scaling.
  QuadratureSpec inner = quad;
  inner.tol = quad.tol / std::max(1.0, m2);
  const detail::BetaMoments mom = detail::beta_moments(nu, s.magnitude, inner);

  FisherMatrix out;
  out.basis = FisherBasis::Spherical;
  out.entries.diagonal() = Vec3(g2 * mom.i2, g2 * m2 * mom.i0, g2 * m2 * st * st * mom.i0);
  out.quad_error = g2 * std::max(1.0, m2) * mom.error;
  return out;
}

// Pointwise integrand of the spherical Fisher matrix at whitened coordinate l.
inline FisherMatrix fisher_density(double l, double nu, const SphericalMomentum& s) {
  detail::check_unit_interval("nu", nu);
  validate(s);
  const double m2 = s.magnitude * s.magnitude;
  const double st = std::sin(s.theta);
  const double weight = detail::normal_pdf(l) * beta(nu, s.magnitude * l);
  FisherMatrix out;
  out.basis = FisherBasis::Spherical;
  out.entries.diagonal() = Vec3(l * l * weight, m2 * weight, m2 * st * st * weight);
  return out;
}

inline FisherMatrix fisher_cartesian(double nu, double gamma, const KappaVector& kappa,
                                     const QuadratureSpec& quad = {}) {
  detail::check_unit_interval("nu", nu);
  detail::check_unit_interval("gamma", gamma);
  const double g2 = gamma * gamma;
  const double magnitude = kappa.norm();
  const detail::BetaMoments mom = detail::beta_moments(nu, magnitude, quad);
  const double f_iso = g2 * mom.i0;
  const double f_dir = g2 * (mom.i2 - mom.i0);

  FisherMatrix out;
  out.basis = FisherBasis::Cartesian;
  out.entries = f_iso * Mat3::Identity();
  if (magnitude > 0.0) {
    out.entries += (f_dir / (magnitude * magnitude)) * (kappa * kappa.transpose());
  }
  out.quad_error = 2.0 * g2 * mom.error;
  return out;
}

// Closed form of [fisher_cartesian^{-1}]_{axis,axis}. Singular information
// (nu = 0 or kappa = 0) yields +infinity.
inline double fisher_cartesian_inverse_diag(double nu, double gamma, const KappaVector& kappa,
                                            int axis, const QuadratureSpec& quad = {}) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("axis must be 1, 2, or 3");
  detail::check_unit_interval("nu", nu);
  detail::check_unit_interval("gamma", gamma);
  const double g2 = gamma * gamma;
  const double magnitude = kappa.norm();
  const detail::BetaMoments mom = detail::beta_moments(nu, magnitude, quad);
  const double f_iso = g2 * mom.i0;
  const double f_dir = g2 * (mom.i2 - mom.i0);
  if (!(f_iso > 0.0)) return std::numeric_limits<double>::infinity();
  double direction = 0.0;
  if (magnitude > 0.0) {
    const double c = kappa[axis - 1] / magnitude;
    direction = f_dir / (f_iso + f_dir) * c * c;
  }
  return (1.0 - direction) / f_iso;
}

// Fisher information of the single-parameter marginal model with effective
// distinguishability nu_eff and beat frequency `param`.
inline double fisher_single_param(double nu_eff, double gamma, double param,
                                  const QuadratureSpec& quad = {}) {
  detail::check_unit_interval("nu_eff", nu_eff);
  detail::check_unit_interval("gamma", gamma);
  const auto f = [&](double c) { return c * c * beta(nu_eff, param * c); };
  IntegralResult r;
  if (quad.rule == QuadratureRule::AdaptiveTruncated) {
    r = integrate_gaussian_1d(f, quad, 2.0 * std::abs(param));
  } else {
    r = integrate_gauss_hermite(f, quad);
  }
  return gamma * gamma * r.value;
}

// Information about kappa_axis when the other two components are known.
inline double fisher_known_nuisance(double nu, double gamma, const KappaVector& kappa, int axis,
                                    const QuadratureSpec& quad = {}) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("axis must be 1, 2, or 3");
  detail::check_unit_interval("nu", nu);
  detail::check_unit_interval("gamma", gamma);
  const double g2 = gamma * gamma;
  const double magnitude = kappa.norm();
  const detail::BetaMoments mom = detail::beta_moments(nu, magnitude, quad);
  const double f_iso = g2 * mom.i0;
  const double f_dir = g2 * (mom.i2 - mom.i0);
  if (magnitude == 0.0) return f_iso;
  const double c = kappa[axis - 1] / magnitude;
  return f_iso + f_dir * c * c;
}

struct QfiMomentCheck {
  Vec3 diag = Vec3::Zero();     // <d_a Phi | d_a Phi> per spherical parameter
  Vec3 offdiag = Vec3::Zero();  // cross moments (mag,theta), (mag,phi), (theta,phi)
  Vec3 braket = Vec3::Zero();   // Re <Phi | d_a Phi>
  double quad_error = 0.0;
};

// Gaussian-moment certification of the QFI: evaluates the derivative overlaps
// of the whitened wavefunction by 3D cubature. Expected values are
// diag = (1/4, |kappa|^2/4, |kappa|^2 sin^2(theta)/4), offdiag = braket = 0;
// the QFI is 4 * diag with vanishing cross terms.
inline QfiMomentCheck qfi_moment_check(const SphericalMomentum& s, const QuadratureSpec& quad = {}) {
  validate(s);
  const KappaVector kappa = kappa_from_spherical(s);
  const double st = std::sin(s.theta);
  const double ct = std::cos(s.theta);
  const double sp = std::sin(s.phi);
  const double cp = std::cos(s.phi);
  // Columns of the Jacobian d kappa / d (|kappa|, theta, phi).
  const Vec3 d_mag(ct, st * cp, st * sp);
  const Vec3 d_theta(-s.magnitude * st, s.magnitude * ct * cp, s.magnitude * ct * sp);
  const Vec3 d_phi(0.0, -s.magnitude * st * sp, s.magnitude * st * cp);
  const std::array<Vec3, 3> dirs = {d_mag, d_theta, d_phi};

  // The whitened pair wavefunction carries phase rho . kappa / 2, so
  // d_a Phi = i (rho . dirs[a] / 2) Phi and |Phi| has unit Gaussian envelope.
  QfiMomentCheck out;
  double err = 0.0;
  std::size_t idx = 0;
  for (int a = 0; a < 3; ++a) {
    const Vec3 da = dirs[static_cast<std::size_t>(a)];
    const auto f = [&](const Vec3& rho) {
      const double d = rho.dot(da) * 0.5;
      return d * d;
    };
    const IntegralResult r = integrate_gaussian_3d(f, quad);
    out.diag[a] = r.value;
    err = std::max(err, r.error_estimate);
  }
  const std::array<std::pair<int, int>, 3> pairs = {{{0, 1}, {0, 2}, {1, 2}}};
  for (const auto& [a, b] : pairs) {
    const Vec3 da = dirs[static_cast<std::size_t>(a)];
    const Vec3 db = dirs[static_cast<std::size_t>(b)];
    const auto f = [&](const Vec3& rho) { return rho.dot(da) * 0.5 * rho.dot(db) * 0.5; };
    const IntegralResult r = integrate_gaussian_3d(f, quad);
    out.offdiag[idx++] = r.value;
    err = std::max(err, r.error_estimate);
  }
  for (int a = 0; a < 3; ++a) {
    const Vec3 da = dirs[static_cast<std::size_t>(a)];
    // <Phi | d_a Phi> = i * (this odd Gaussian moment); it must vanish.
    const auto f = [&](const Vec3& rho) { return rho.dot(da) * 0.5; };
    const IntegralResult r = integrate_gaussian_3d(f, quad);
    out.braket[a] = r.value;
    err = std::max(err, r.error_estimate);
  }
  out.quad_error = err;
  return out;
}

}  // namespace homsense
