#pragma once

// Brute-force reference implementations used to certify the closed-form
// model: the full two-photon joint probability for general unequal
// covariances, its numerical marginalization to the relative-coordinate
// distribution, and the exact reduced closed form carrying the visibility
// factor. Deliberately unoptimized; never called in estimation paths.

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "homsense/geometry.hpp"
#include "homsense/model.hpp"
#include "homsense/quadrature.hpp"

namespace homsense {
namespace oracle {

struct GaussianWavePacket {
  CovarianceMatrix covariance;
  Vec3 wavevector = Vec3::Zero();  // (-k_x, -k_y, omega/c)
  Vec3 mean = Vec3::Zero();

  explicit GaussianWavePacket(const CovarianceMatrix& covariance_, const Vec3& wavevector_,
                              const Vec3& mean_ = Vec3::Zero())
      : covariance(covariance_), wavevector(wavevector_), mean(mean_) {}

  // |psi(r)|^2, the normalized Gaussian position density of the packet.
  double intensity(const Vec3& r) const {
    const Vec3 d = r - mean;
    const double q = d.dot(covariance.inverse() * d);
    constexpr double norm = 0.06349363593424097;  // (2*pi)^{-3/2}
    return norm / std::sqrt(covariance.determinant()) * std::exp(-0.5 * q);
  }
};

struct PairState {
  GaussianWavePacket packet1;
  GaussianWavePacket packet2;
  double nu = 1.0;

  PairState(const GaussianWavePacket& p1, const GaussianWavePacket& p2, double nu_)
      : packet1(p1), packet2(p2), nu(nu_) {
    detail::check_unit_interval("nu", nu);
  }
};

// Balanced beam splitter acting on the two input modes.
inline Eigen::Matrix2d beam_splitter_matrix() {
  Eigen::Matrix2d u;
  u << 1.0, -1.0, 1.0, 1.0;
  return u / std::numbers::sqrt2;
}

// Joint probability density of detecting the pair at (r1, r2) with the given
// two-photon outcome. The interference term carries the packet-exchange
// amplitude, whose phase is (k1 - k2) . (r1 - r2).
inline double joint_probability(const PairState& state, Outcome x, const Vec3& r1,
                                const Vec3& r2) {
  const double a = alpha(x);
  const double n11 = state.packet1.intensity(r1);
  const double n22 = state.packet2.intensity(r2);
  const double n21 = state.packet2.intensity(r1);
  const double n12 = state.packet1.intensity(r2);
  const Vec3 delta_k = state.packet1.wavevector - state.packet2.wavevector;
  const double phase = delta_k.dot(r1 - r2);
  const double cross = std::sqrt(n11 * n22 * n21 * n12);
  return 0.25 * (n11 * n22 + n21 * n12 + 2.0 * a * state.nu * cross * std::cos(phase));
}

namespace detail_oracle {

inline void require_common_mean(const PairState& state, const char* who) {
  if ((state.packet1.mean - state.packet2.mean).norm() > 0.0) {
    throw std::invalid_argument(std::string(who) + ": packets must share a common mean");
  }
}

}  // namespace detail_oracle

// Closed forms of the reduced distribution over delta_r = r1 - r2 for
// packets with a common mean:
//   P(X; dr) = 1/2 (2 pi)^{-3/2} |S|^{-1/2}
//              [ exp(-dr' S^{-1} dr / 2)
//                + alpha nu exp(-dr' Q dr / 8) cos(dr . delta_k) ],
// S = S1 + S2, Q = S1^{-1} + S2^{-1}. The second exponential is the
// visibility factor; it equals the first exactly when S1 = S2. The
// equal-covariance approximation replaces the visibility factor by the
// envelope. Factors are precomputed so the evaluator is cheap per point.
class ReducedClosedForm {
 public:
  explicit ReducedClosedForm(const PairState& state)
      : pooled_(state.packet1.covariance.entries() + state.packet2.covariance.entries()),
        q_(state.packet1.covariance.inverse() + state.packet2.covariance.inverse()),
        delta_k_(state.packet1.wavevector - state.packet2.wavevector),
        nu_(state.nu) {
    detail_oracle::require_common_mean(state, "ReducedClosedForm");
    constexpr double norm = 0.06349363593424097;  // (2*pi)^{-3/2}
    prefactor_ = 0.5 * norm / std::sqrt(pooled_.determinant());
  }

  double exact(Outcome x, const Vec3& delta_r) const {
    const double envelope = std::exp(-0.5 * delta_r.dot(pooled_.inverse() * delta_r));
    const double visibility = std::exp(-0.125 * delta_r.dot(q_ * delta_r));
    const double beat = std::cos(delta_r.dot(delta_k_));
    return prefactor_ * (envelope + alpha(x) * nu_ * visibility * beat);
  }

  double equal_covariance_approx(Outcome x, const Vec3& delta_r) const {
    const double envelope = std::exp(-0.5 * delta_r.dot(pooled_.inverse() * delta_r));
    const double beat = std::cos(delta_r.dot(delta_k_));
    return prefactor_ * envelope * (1.0 + alpha(x) * nu_ * beat);
  }

 private:
  CovarianceMatrix pooled_;
  Mat3 q_;
  Vec3 delta_k_;
  double nu_ = 1.0;
  double prefactor_ = 0.0;
};

inline double reduced_probability_closed(const PairState& state, Outcome x, const Vec3& delta_r) {
  return ReducedClosedForm(state).exact(x, delta_r);
}

// The equal-covariance approximation: exact for S1 = S2, where it coincides
// with the whitened model density times the volume factor |S|^{-1/2}.
inline double reduced_probability_approx(const PairState& state, Outcome x, const Vec3& delta_r) {
  return ReducedClosedForm(state).equal_covariance_approx(x, delta_r);
}

// Numerical marginalization: integrates joint_probability over r1 at fixed
// delta_r = r1 - r2. The integration box covers every Gaussian anchor point
// with a margin of 6 pooled standard deviations per axis.
inline double reduced_probability_numeric(const PairState& state, Outcome x, const Vec3& delta_r,
                                          const QuadratureSpec& spec = {.tol = 1e-10}) {
  const Vec3 anchors[4] = {state.packet1.mean, state.packet2.mean + delta_r, state.packet2.mean,
                           state.packet1.mean + delta_r};
  Vec3 lo;
  Vec3 hi;
  for (int axis = 0; axis < 3; ++axis) {
    const double sigma = std::sqrt(std::max(state.packet1.covariance.entries()(axis, axis),
                                            state.packet2.covariance.entries()(axis, axis)));
    double lo_a = anchors[0][axis];
    double hi_a = anchors[0][axis];
    for (const auto& c : anchors) {
      lo_a = std::min(lo_a, c[axis]);
      hi_a = std::max(hi_a, c[axis]);
    }
    lo[axis] = lo_a - 6.0 * sigma;
    hi[axis] = hi_a + 6.0 * sigma;
  }
  const auto f = [&](const Vec3& r1) { return joint_probability(state, x, r1, r1 - delta_r); };
  return integrate_box_3d(f, lo, hi, spec).value;
}

}  // namespace oracle
}  // namespace homsense
