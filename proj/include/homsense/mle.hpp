#pragma once

// Maximum-likelihood estimation of kappa from event batches.
//
// Only two-photon events carry information; the working log-likelihood is
//   l(kappa) = sum_i log(1 + alpha(X_i) nu cos(rho_i . kappa)),
// maximized by damped Newton iteration on Cartesian kappa (the spherical
// chart is singular at theta in {0, pi}). The score convention follows the
// estimating-equation form: score = -grad l, and the estimator solves
// score = 0. kappa and -kappa give identical likelihoods, so results are
// canonicalized. nu is a known calibration constant.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "homsense/geometry.hpp"
#include "homsense/model.hpp"
#include "homsense/sampler.hpp"

namespace homsense {

struct EstimationResult {
  KappaVector kappa_hat = KappaVector::Zero();
  SphericalMomentum spherical_hat;
  std::size_t n_used = 0;
  bool converged = false;
  int iterations = 0;
  double score_norm = 0.0;
  double loglik = 0.0;
  std::string note;
};

struct MleOptions {
  double kappa_max = 8.0;     // half-width of the multi-start grid box
  int grid_points = 5;        // starts per axis when no init is given
  double tol_per_event = 1e-8;  // converged when |score| < tol_per_event * n_used
  int max_iterations = 200;
  int max_backtracks = 30;
};

namespace detail {

struct TwoPhotonEvents {
  std::vector<double> a;  // interference signs alpha(X_i)
  std::vector<Vec3> rho;
  std::size_t size() const { return a.size(); }
};

inline TwoPhotonEvents collect_two_photon(const EventBatch& batch) {
  TwoPhotonEvents out;
  out.a.reserve(batch.events.size());
  out.rho.reserve(batch.events.size());
  for (const auto& ev : batch.events) {
    if (ev.outcome == Outcome::Coincidence || ev.outcome == Outcome::Bunch) {
      out.a.push_back(alpha(ev.outcome));
      out.rho.push_back(*ev.rho);
    }
  }
  return out;
}

struct LikelihoodState {
  double loglik = 0.0;
  Vec3 grad = Vec3::Zero();  // gradient of loglik (= -score)
  Mat3 hess = Mat3::Zero();
};

// One pass over the events: log-likelihood, gradient, Hessian. zeta factors
// are floored before the log so impossible events at nu = 1 stay finite.
inline LikelihoodState eval_likelihood(const TwoPhotonEvents& ev, const KappaVector& kappa,
                                       double nu, bool with_derivatives) {
  LikelihoodState st;
  const std::size_t n = ev.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Vec3& r = ev.rho[i];
    const double t = r.dot(kappa);
    const double c = std::cos(t);
    const double anu = ev.a[i] * nu;
    const double denom = 1.0 + anu * c;
    st.loglik += std::log(std::max(denom, 1e-300));
    if (!with_derivatives) continue;
    const double safe = std::max(denom, 1e-12);
    const double s = std::sin(t);
    const double u = -anu * s / safe;         // d/dt log(1 + anu cos t)
    const double w = (anu * c + nu * nu) / (safe * safe);  // -d2/dt2
    st.grad += u * r;
    st.hess -= w * (r * r.transpose());
  }
  return st;
}

}  // namespace detail

inline double log_likelihood(const EventBatch& batch, const KappaVector& kappa, double nu) {
  detail::check_unit_interval("nu", nu);
  const detail::TwoPhotonEvents ev = detail::collect_two_photon(batch);
  if (ev.size() == 0) {
    throw std::invalid_argument("log_likelihood: batch has no two-photon events");
  }
  return detail::eval_likelihood(ev, kappa, nu, false).loglik;
}

// Estimating-equation form: score = -grad log_likelihood. Throws when a term
// is non-finite (zeta = 0 event at nu = 1), naming the offending event.
inline Vec3 score(const EventBatch& batch, const KappaVector& kappa, double nu) {
  detail::check_unit_interval("nu", nu);
  Vec3 out = Vec3::Zero();
  std::size_t n_used = 0;
  for (std::size_t i = 0; i < batch.events.size(); ++i) {
    const auto& ev = batch.events[i];
    if (ev.outcome != Outcome::Coincidence && ev.outcome != Outcome::Bunch) continue;
    ++n_used;
    const double t = ev.rho->dot(kappa);
    const double anu = alpha(ev.outcome) * nu;
    const double denom = 1.0 + anu * std::cos(t);
    const double term = anu * std::sin(t) / denom;
    if (!std::isfinite(term)) {
      throw std::runtime_error("score: non-finite term at event index " + std::to_string(i));
    }
    out += term * (*ev.rho);
  }
  if (n_used == 0) throw std::invalid_argument("score: batch has no two-photon events");
  return out;
}

namespace detail {

struct NewtonOutcome {
  KappaVector kappa = KappaVector::Zero();
  double loglik = -std::numeric_limits<double>::infinity();
  double score_norm = 0.0;
  int iterations = 0;
  bool converged = false;
};

inline NewtonOutcome newton_refine(const TwoPhotonEvents& ev, KappaVector kappa, double nu,
                                   const MleOptions& opt) {
  NewtonOutcome out;
  const double tol = opt.tol_per_event * static_cast<double>(ev.size());
  LikelihoodState st = eval_likelihood(ev, kappa, nu, true);
  for (int iter = 0; iter < opt.max_iterations; ++iter) {
    out.iterations = iter;
    out.score_norm = st.grad.norm();
    if (out.score_norm < tol) {
      out.converged = true;
      break;
    }
    // Newton direction on the negated Hessian, ridged until positive definite.
    Mat3 m = -st.hess;
    double ridge = 0.0;
    Eigen::LLT<Mat3> llt(m);
    while (llt.info() != Eigen::Success) {
      ridge = ridge == 0.0 ? 1e-8 * std::max(1.0, m.trace()) : 10.0 * ridge;
      llt.compute(m + ridge * Mat3::Identity());
      if (ridge > 1e12) break;
    }
    if (llt.info() != Eigen::Success) break;
    const Vec3 step = llt.solve(st.grad);
    double scale = 1.0;
    bool improved = false;
    // Near the root the loglik gain of the last Newton steps drops below the
    // rounding noise of the n-term sum; accept on a strict gradient-norm
    // reduction as well, so convergence is not capped by that noise.
    const double slack = 1e-9 * (1.0 + std::abs(st.loglik));
    for (int bt = 0; bt < opt.max_backtracks; ++bt) {
      const KappaVector trial = kappa + scale * step;
      LikelihoodState trial_st = eval_likelihood(ev, trial, nu, true);
      if (trial_st.loglik > st.loglik ||
          (trial_st.grad.norm() < 0.5 * st.grad.norm() &&
           trial_st.loglik > st.loglik - slack)) {
        kappa = trial;
        st = trial_st;
        improved = true;
        break;
      }
      scale *= 0.5;
    }
    if (!improved) break;  // line search exhausted; report the best point
  }
  out.kappa = kappa;
  out.loglik = st.loglik;
  out.score_norm = st.grad.norm();
  if (out.score_norm < tol) out.converged = true;
  return out;
}

inline std::vector<KappaVector> start_grid(const MleOptions& opt) {
  std::vector<KappaVector> starts;
  const int g = std::max(2, opt.grid_points);
  const double step = 2.0 * opt.kappa_max / static_cast<double>(g - 1);
  for (int i = 0; i < g; ++i) {
    for (int j = 0; j < g; ++j) {
      for (int k = 0; k < g; ++k) {
        const KappaVector v(-opt.kappa_max + step * i, -opt.kappa_max + step * j,
                            -opt.kappa_max + step * k);
        // kappa and -kappa are likelihood-equivalent; keep one representative.
        const KappaVector canon = canonicalize(v);
        if ((canon - v).norm() < 1e-15 * std::max(1.0, v.norm())) starts.push_back(v);
      }
    }
  }
  return starts;
}

}  // namespace detail

inline EstimationResult estimate_3d(const EventBatch& batch, double nu,
                                    std::optional<KappaVector> init = std::nullopt,
                                    const MleOptions& opt = {}) {
  detail::check_unit_interval("nu", nu);
  const detail::TwoPhotonEvents ev = detail::collect_two_photon(batch);
  EstimationResult result;
  result.n_used = ev.size();
  if (ev.size() < 3) {
    throw std::invalid_argument("estimate_3d: need at least 3 two-photon events");
  }
  if (nu == 0.0) {
    result.note = "non-identifiable: nu = 0 makes the likelihood flat";
    result.loglik = 0.0;
    return result;
  }
  bool all_coincidence = true;
  for (double a : ev.a) {
    if (a > 0.0) {
      all_coincidence = false;
      break;
    }
  }
  if (all_coincidence && nu == 1.0) {
    result.note = "pathological: all-coincidence batch at nu = 1 pushes zeta to 0";
  }

  std::vector<KappaVector> starts;
  if (init) {
    starts.push_back(*init);
  } else {
    starts = detail::start_grid(opt);
  }

  detail::NewtonOutcome best;
  bool have_best = false;
  for (const KappaVector& start : starts) {
    const detail::NewtonOutcome cand = detail::newton_refine(ev, start, nu, opt);
    // Deterministic merge: strictly better loglik wins, first start breaks ties.
    if (!have_best || cand.loglik > best.loglik) {
      best = cand;
      have_best = true;
    }
  }

  result.kappa_hat = canonicalize(best.kappa);
  result.spherical_hat = spherical_from_kappa(result.kappa_hat);
  result.converged = best.converged;
  result.iterations = best.iterations;
  result.score_norm = best.score_norm;
  result.loglik = best.loglik;
  if (!best.converged && result.note.empty()) {
    result.note = "no start converged; best stationary-point candidate reported";
  }
  return result;
}

struct ProjectedEvent {
  Outcome outcome = Outcome::Coincidence;
  double c = 0.0;
};

// Projection of the two-photon events of a batch onto one whitened axis.
inline std::vector<ProjectedEvent> project_batch(const EventBatch& batch, int axis) {
  if (axis < 1 || axis > 3) throw std::invalid_argument("axis must be 1, 2, or 3");
  std::vector<ProjectedEvent> out;
  out.reserve(batch.events.size());
  for (const auto& ev : batch.events) {
    if (ev.outcome != Outcome::Coincidence && ev.outcome != Outcome::Bunch) continue;
    out.push_back({ev.outcome, (*ev.rho)[axis - 1]});
  }
  return out;
}

struct Estimation1dResult {
  double param_hat = 0.0;
  std::size_t n_used = 0;
  bool converged = false;
  int iterations = 0;
  double score_norm = 0.0;
  double loglik = 0.0;
  std::string note;
};

struct Mle1dOptions {
  double param_max = 8.0;
  int grid_points = 21;
  double tol_per_event = 1e-8;
  int max_iterations = 200;
  int max_backtracks = 30;
};

// Marginal single-parameter estimator: maximizes
// sum_i log(1 + alpha(X_i) nu_eff cos(param * c_i)). The model is even in
// param, so the nonnegative root is reported.
inline Estimation1dResult estimate_1d(const std::vector<ProjectedEvent>& events, double nu_eff,
                                      std::optional<double> init = std::nullopt,
                                      const Mle1dOptions& opt = {}) {
  detail::check_unit_interval("nu_eff", nu_eff);
  Estimation1dResult result;
  result.n_used = events.size();
  if (events.empty()) throw std::invalid_argument("estimate_1d: no two-photon events");
  if (nu_eff == 0.0) {
    result.note = "non-identifiable: nu_eff = 0 makes the marginal likelihood flat";
    return result;
  }

  const auto eval = [&](double p, double& grad, double& hess) {
    double ll = 0.0;
    grad = 0.0;
    hess = 0.0;
    for (const auto& e : events) {
      const double t = p * e.c;
      const double anu = alpha(e.outcome) * nu_eff;
      const double cc = std::cos(t);
      const double denom = std::max(1.0 + anu * cc, 1e-300);
      ll += std::log(denom);
      const double safe = std::max(denom, 1e-12);
      const double ss = std::sin(t);
      grad += -anu * ss / safe * e.c;
      hess -= (anu * cc + nu_eff * nu_eff) / (safe * safe) * e.c * e.c;
    }
    return ll;
  };

  const double tol = opt.tol_per_event * static_cast<double>(events.size());
  double best_p = 0.0;
  double best_ll = -std::numeric_limits<double>::infinity();
  double best_score = 0.0;
  int best_iters = 0;
  bool best_conv = false;
  bool have_best = false;

  std::vector<double> starts;
  if (init) {
    starts.push_back(std::abs(*init));
  } else {
    const int g = std::max(2, opt.grid_points);
    for (int i = 0; i < g; ++i) {
      starts.push_back(opt.param_max * static_cast<double>(i) / static_cast<double>(g - 1));
    }
  }

  for (double p : starts) {
    double grad = 0.0;
    double hess = 0.0;
    double ll = eval(p, grad, hess);
    int iter = 0;
    bool conv = false;
    for (; iter < opt.max_iterations; ++iter) {
      if (std::abs(grad) < tol) {
        conv = true;
        break;
      }
      double m = -hess;
      if (!(m > 0.0)) m = std::max(1e-8, std::abs(hess));
      const double step = grad / m;
      double scale = 1.0;
      bool improved = false;
      // Same plateau guard as the 3D refinement: near the root the loglik
      // gain sinks below the rounding noise of the n-term sum, so a strict
      // gradient reduction is also accepted.
      const double slack = 1e-9 * (1.0 + std::abs(ll));
      for (int bt = 0; bt < opt.max_backtracks; ++bt) {
        double g2 = 0.0;
        double h2 = 0.0;
        const double ll2 = eval(p + scale * step, g2, h2);
        if (ll2 > ll || (std::abs(g2) < 0.5 * std::abs(grad) && ll2 > ll - slack)) {
          p += scale * step;
          ll = ll2;
          grad = g2;
          hess = h2;
          improved = true;
          break;
        }
        scale *= 0.5;
      }
      if (!improved) break;
    }
    if (std::abs(grad) < tol) conv = true;
    if (!have_best || ll > best_ll) {
      best_p = p;
      best_ll = ll;
      best_score = std::abs(grad);
      best_iters = iter;
      best_conv = conv;
      have_best = true;
    }
  }

  result.param_hat = std::abs(best_p);
  result.converged = best_conv;
  result.iterations = best_iters;
  result.score_norm = best_score;
  result.loglik = best_ll;
  if (!best_conv && result.note.empty()) result.note = "no start converged";
  return result;
}

}  // namespace homsense
