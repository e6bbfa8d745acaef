#pragma once

// Outcome model for two-photon interference at a balanced beam splitter.
//
// In whitened coordinates the two-photon detection density is
//   P(X; rho) = gamma^2 (2*pi)^{-3/2} exp(-|rho|^2 / 2) * zeta_X(rho . kappa)
// with zeta_X(x) = (1 + alpha(X) nu cos x) / 2, alpha = -1 for coincidence
// and +1 for bunching. nu in [0, 1] is the distinguishability of the pair,
// gamma in [0, 1] the per-detector efficiency.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "homsense/common.hpp"

namespace homsense {

enum class Outcome { Coincidence, Bunch, OnePhoton, NoDetection };

inline const char* outcome_name(Outcome x) {
  switch (x) {
    case Outcome::Coincidence: return "coincidence";
    case Outcome::Bunch: return "bunch";
    case Outcome::OnePhoton: return "one_photon";
    case Outcome::NoDetection: return "no_detection";
  }
  throw std::invalid_argument("outcome_name: unknown outcome");
}

inline Outcome outcome_from_name(const std::string& name) {
  if (name == "coincidence") return Outcome::Coincidence;
  if (name == "bunch") return Outcome::Bunch;
  if (name == "one_photon") return Outcome::OnePhoton;
  if (name == "no_detection") return Outcome::NoDetection;
  throw std::invalid_argument("outcome_from_name: unknown outcome '" + name + "'");
}

// Interference sign of a two-photon outcome.
inline double alpha(Outcome x) {
  switch (x) {
    case Outcome::Coincidence: return -1.0;
    case Outcome::Bunch: return +1.0;
    default:
      throw std::invalid_argument("alpha: only two-photon outcomes carry an interference sign");
  }
}

namespace detail {

inline void check_unit_interval(const char* name, double v) {
  if (!(v >= 0.0) || !(v <= 1.0)) {
    throw std::domain_error(std::string(name) + " must lie in [0, 1], got " + std::to_string(v));
  }
}

}  // namespace detail

struct SensingConfig {
  double nu = 1.0;
  double gamma = 1.0;
  KappaVector kappa = KappaVector::Zero();

  void validate() const {
    detail::check_unit_interval("nu", nu);
    detail::check_unit_interval("gamma", gamma);
    if (!kappa.allFinite()) throw std::domain_error("kappa must be finite");
  }
};

// Conditional two-photon outcome weight; zeta(A) + zeta(B) = 1 pointwise.
inline double zeta(Outcome x, double nu, double arg) {
  detail::check_unit_interval("nu", nu);
  return 0.5 * (1.0 + alpha(x) * nu * std::cos(arg));
}

inline double prob_density(Outcome x, const Vec3& rho, const SensingConfig& config) {
  config.validate();
  constexpr double norm = 0.06349363593424097;  // (2*pi)^{-3/2}
  const double envelope = std::exp(-0.5 * rho.squaredNorm());
  return config.gamma * config.gamma * norm * envelope * zeta(x, config.nu, rho.dot(config.kappa));
}

// Per-event Fisher weight beta_nu(x) = nu^2 sin^2 x / (1 - nu^2 cos^2 x).
// Identically one at nu = 1 (removable singularity), zero at multiples of pi
// for nu < 1, periodic with period pi.
inline double beta(double nu, double x) {
  detail::check_unit_interval("nu", nu);
  if (nu == 1.0) return 1.0;
  const double s = std::sin(x);
  const double c = std::cos(x);
  const double nu2 = nu * nu;
  return nu2 * s * s / (1.0 - nu2 * c * c);
}

// Distinguishability governing the 1D marginal along the given axis (1-based):
// the other two components of kappa damp the beat contrast.
inline double effective_distinguishability(double nu, const KappaVector& kappa, int axis) {
  detail::check_unit_interval("nu", nu);
  if (axis < 1 || axis > 3) throw std::invalid_argument("axis must be 1, 2, or 3");
  double other = 0.0;
  for (int i = 0; i < 3; ++i) {
    if (i != axis - 1) other += kappa[i] * kappa[i];
  }
  return nu * std::exp(-0.5 * other);
}

// Single-axis marginal of the two-photon density at whitened coordinate c,
// for the component kappa_axis and the effective distinguishability of that
// axis. The gamma^2/sqrt(pi) prefactor convention is kept verbatim; only
// shape matters downstream, so callers must not assume unit mass.
inline double prob_marginal_1d(Outcome x, double c, double kappa_axis, double nu_eff,
                               double gamma) {
  detail::check_unit_interval("nu_eff", nu_eff);
  detail::check_unit_interval("gamma", gamma);
  const double envelope = std::exp(-0.5 * c * c) / std::sqrt(std::numbers::pi);
  return gamma * gamma * envelope * (1.0 + alpha(x) * nu_eff * std::cos(kappa_axis * c));
}

struct DetectionOutcomeProbs {
  double no_detection = 0.0;
  double one_photon = 0.0;
  double two_photon = 0.0;
};

// Split of events by number of detected photons for efficiency gamma.
inline DetectionOutcomeProbs detection_outcome_probs(double gamma) {
  detail::check_unit_interval("gamma", gamma);
  const double miss = 1.0 - gamma;
  return {miss * miss, 2.0 * gamma * miss, gamma * gamma};
}

// Marginal probability that a two-photon event bunches: integrating the
// Gaussian envelope against cos(rho . kappa) gives exp(-|kappa|^2 / 2).
inline double bunching_rate(const SensingConfig& config) {
  config.validate();
  const double damp = std::exp(-0.5 * config.kappa.squaredNorm());
  return config.gamma * config.gamma * 0.5 * (1.0 + config.nu * damp);
}

inline double coincidence_rate(const SensingConfig& config) {
  config.validate();
  const double damp = std::exp(-0.5 * config.kappa.squaredNorm());
  return config.gamma * config.gamma * 0.5 * (1.0 - config.nu * damp);
}

}  // namespace homsense
