#pragma once

// Deterministic quadrature over Gaussian weights.
//
// Two rule families:
//  * AdaptiveTruncated: composite 15-point Gauss-Legendre on a truncated
//    domain, refined by panel doubling until two consecutive levels agree.
//    The oscillation hint sets a node floor of at least 40 nodes per period
//    of the fastest expected oscillation, so beat structure is resolved
//    before the first error estimate is trusted.
//  * GaussHermiteLike: Gauss-Hermite rules for the standard normal weight,
//    generated by Golub-Welsch on the Jacobi matrix and cached per order,
//    refined by doubling the order.
//
// All integrals are against the standard normal density; integrands are
// supplied without the weight. Error estimates are the difference between
// the last two refinement levels and are absolute.

#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "homsense/common.hpp"

namespace homsense {

struct IntegralResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::size_t evaluations = 0;
};

class QuadratureError : public std::runtime_error {
 public:
  QuadratureError(const std::string& what, double best_value, double achieved_error)
      : std::runtime_error(what), best_value(best_value), achieved_error(achieved_error) {}
  double best_value;
  double achieved_error;
};

enum class QuadratureRule { AdaptiveTruncated, GaussHermiteLike };

struct QuadratureSpec {
  QuadratureRule rule = QuadratureRule::AdaptiveTruncated;
  double tol = 1e-9;
  double truncation_radius = 8.5;     // AdaptiveTruncated: integrate |l| <= radius
  int min_nodes_per_period = 40;      // AdaptiveTruncated node floor for oscillations
  std::size_t node_cap_1d = 200000;
  std::size_t node_cap_3d = 10000000;
};

namespace detail {

// 15-point Gauss-Legendre rule on [-1, 1].
inline constexpr int kGlOrder = 15;
inline constexpr std::array<double, kGlOrder> kGlNodes = {
    -9.87992518020485377e-01, -9.37273392400705951e-01, -8.48206583410427206e-01,
    -7.24417731360170070e-01, -5.70972172608538830e-01, -3.94151347077563385e-01,
    -2.01194093997434514e-01, +0.00000000000000000e+00, +2.01194093997434514e-01,
    +3.94151347077563385e-01, +5.70972172608538830e-01, +7.24417731360170070e-01,
    +8.48206583410427206e-01, +9.37273392400705951e-01, +9.87992518020485377e-01};
inline constexpr std::array<double, kGlOrder> kGlWeights = {
    3.07532419961186465e-02, 7.03660474881080689e-02, 1.07159220467171773e-01,
    1.39570677926153908e-01, 1.66269205816993781e-01, 1.86161000015561878e-01,
    1.98431485327111246e-01, 2.02578241925560898e-01, 1.98431485327111246e-01,
    1.86161000015561878e-01, 1.66269205816993781e-01, 1.39570677926153908e-01,
    1.07159220467171773e-01, 7.03660474881080689e-02, 3.07532419961186465e-02};

inline double normal_pdf(double x) {
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

// Nodes and weights of the composite rule on [-radius, radius] with `panels`
// equal panels, weights premultiplied by the standard normal density.
inline void composite_gaussian_nodes(double radius, std::size_t panels,
                                     std::vector<double>& nodes, std::vector<double>& weights) {
  nodes.clear();
  weights.clear();
  nodes.reserve(panels * kGlOrder);
  weights.reserve(panels * kGlOrder);
  const double width = 2.0 * radius / static_cast<double>(panels);
  for (std::size_t p = 0; p < panels; ++p) {
    const double a = -radius + width * static_cast<double>(p);
    const double mid = a + 0.5 * width;
    const double half = 0.5 * width;
    for (int i = 0; i < kGlOrder; ++i) {
      const double x = mid + half * kGlNodes[i];
      nodes.push_back(x);
      weights.push_back(half * kGlWeights[i] * normal_pdf(x));
    }
  }
}

inline std::size_t initial_panels(const QuadratureSpec& spec, double oscillation_scale,
                                  int nodes_per_period) {
  // oscillation_scale is the largest expected angular frequency of the
  // integrand; a nonpositive value means smooth.
  std::size_t panels = 4;
  if (oscillation_scale > 0.0) {
    const double periods =
        2.0 * spec.truncation_radius * oscillation_scale / (2.0 * std::numbers::pi);
    const double nodes_needed = static_cast<double>(nodes_per_period) * periods;
    const auto oscill_panels =
        static_cast<std::size_t>(std::ceil(nodes_needed / static_cast<double>(kGlOrder)));
    panels = std::max(panels, oscill_panels);
  }
  return panels;
}

}  // namespace detail

// Integral of f against the standard normal density on |l| <= truncation_radius,
// composite Gauss-Legendre with panel doubling. Throws QuadratureError if the
// node cap is reached before two consecutive levels agree to spec.tol.
template <class F>
IntegralResult integrate_gaussian_1d(F&& f, const QuadratureSpec& spec = {},
                                     double oscillation_scale = 0.0) {
  std::vector<double> nodes;
  std::vector<double> weights;
  std::size_t panels = detail::initial_panels(spec, oscillation_scale, spec.min_nodes_per_period);

  IntegralResult result;
  bool have_previous = false;
  double previous = 0.0;
  for (;;) {
    if (panels * detail::kGlOrder > spec.node_cap_1d) {
      if (have_previous) {
        throw QuadratureError("integrate_gaussian_1d: node cap reached before convergence",
                              result.value, result.error_estimate);
      }
      throw QuadratureError("integrate_gaussian_1d: node cap too small for requested resolution",
                            0.0, std::numeric_limits<double>::infinity());
    }
    detail::composite_gaussian_nodes(spec.truncation_radius, panels, nodes, weights);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i) sum += weights[i] * f(nodes[i]);
    result.evaluations += nodes.size();
    if (have_previous) {
      result.value = sum;
      result.error_estimate = std::abs(sum - previous);
      if (result.error_estimate <= spec.tol) return result;
    }
    previous = sum;
    result.value = sum;
    have_previous = true;
    panels *= 2;
  }
}

// Integral of f(rho) against the trivariate standard normal density on the
// cube |rho_i| <= truncation_radius, tensor-product composite Gauss-Legendre.
// oscillation_scale gives per-axis angular frequency hints. Refinement doubles
// every axis; the total node count of any level is capped by spec.node_cap_3d.
// The first level is seeded at a quarter of the 1D per-period node density so
// tensor grids stay affordable; accuracy is still certified by the doubling
// agreement test, never by the seed density.
template <class F>
IntegralResult integrate_gaussian_3d(F&& f, const QuadratureSpec& spec = {},
                                     const Vec3& oscillation_scale = Vec3::Zero()) {
  const int seed_density = std::max(2, spec.min_nodes_per_period / 4);
  std::array<std::size_t, 3> panels{};
  for (int a = 0; a < 3; ++a) {
    panels[a] = detail::initial_panels(spec, oscillation_scale[a], seed_density);
  }

  std::array<std::vector<double>, 3> nodes;
  std::array<std::vector<double>, 3> weights;

  IntegralResult result;
  bool have_previous = false;
  double previous = 0.0;
  for (;;) {
    const std::size_t total =
        panels[0] * panels[1] * panels[2] * detail::kGlOrder * detail::kGlOrder * detail::kGlOrder;
    if (total > spec.node_cap_3d) {
      if (have_previous) {
        throw QuadratureError("integrate_gaussian_3d: node cap reached before convergence",
                              result.value, result.error_estimate);
      }
      throw QuadratureError("integrate_gaussian_3d: node cap too small for requested resolution",
                            0.0, std::numeric_limits<double>::infinity());
    }
    for (int a = 0; a < 3; ++a) {
      detail::composite_gaussian_nodes(spec.truncation_radius, panels[a], nodes[a], weights[a]);
    }
    double sum = 0.0;
    Vec3 rho;
    for (std::size_t i = 0; i < nodes[0].size(); ++i) {
      rho[0] = nodes[0][i];
      double sum_i = 0.0;
      for (std::size_t j = 0; j < nodes[1].size(); ++j) {
        rho[1] = nodes[1][j];
        const double wij = weights[1][j];
        double sum_ij = 0.0;
        for (std::size_t k = 0; k < nodes[2].size(); ++k) {
          rho[2] = nodes[2][k];
          sum_ij += weights[2][k] * f(rho);
        }
        sum_i += wij * sum_ij;
      }
      sum += weights[0][i] * sum_i;
    }
    result.evaluations += total;
    if (have_previous) {
      result.value = sum;
      result.error_estimate = std::abs(sum - previous);
      if (result.error_estimate <= spec.tol) return result;
    }
    previous = sum;
    result.value = sum;
    have_previous = true;
    for (auto& p : panels) p *= 2;
  }
}

// Integral of f(r) over the axis-aligned box [lo, hi], tensor-product
// composite Gauss-Legendre with panel doubling on all axes at once. No
// weight function; used for brute-force marginalizations.
template <class F>
IntegralResult integrate_box_3d(F&& f, const Vec3& lo, const Vec3& hi,
                                const QuadratureSpec& spec = {}) {
  for (int a = 0; a < 3; ++a) {
    if (!(lo[a] < hi[a])) throw std::invalid_argument("integrate_box_3d: empty box");
  }
  std::size_t panels = 3;
  std::array<std::vector<double>, 3> nodes;
  std::array<std::vector<double>, 3> weights;

  IntegralResult result;
  bool have_previous = false;
  double previous = 0.0;
  for (;;) {
    const std::size_t per_axis = panels * detail::kGlOrder;
    if (per_axis * per_axis * per_axis > spec.node_cap_3d) {
      if (have_previous) {
        throw QuadratureError("integrate_box_3d: node cap reached before convergence",
                              result.value, result.error_estimate);
      }
      throw QuadratureError("integrate_box_3d: node cap too small", 0.0,
                            std::numeric_limits<double>::infinity());
    }
    for (int a = 0; a < 3; ++a) {
      nodes[a].clear();
      weights[a].clear();
      const double width = (hi[a] - lo[a]) / static_cast<double>(panels);
      for (std::size_t p = 0; p < panels; ++p) {
        const double mid = lo[a] + width * (static_cast<double>(p) + 0.5);
        const double half = 0.5 * width;
        for (int i = 0; i < detail::kGlOrder; ++i) {
          nodes[a].push_back(mid + half * detail::kGlNodes[i]);
          weights[a].push_back(half * detail::kGlWeights[i]);
        }
      }
    }
    double sum = 0.0;
    Vec3 r;
    for (std::size_t i = 0; i < nodes[0].size(); ++i) {
      r[0] = nodes[0][i];
      double sum_i = 0.0;
      for (std::size_t j = 0; j < nodes[1].size(); ++j) {
        r[1] = nodes[1][j];
        double sum_ij = 0.0;
        for (std::size_t k = 0; k < nodes[2].size(); ++k) {
          r[2] = nodes[2][k];
          sum_ij += weights[2][k] * f(r);
        }
        sum_i += weights[1][j] * sum_ij;
      }
      sum += weights[0][i] * sum_i;
    }
    result.evaluations += per_axis * per_axis * per_axis;
    if (have_previous) {
      result.value = sum;
      result.error_estimate = std::abs(sum - previous);
      if (result.error_estimate <= spec.tol) return result;
    }
    previous = sum;
    result.value = sum;
    have_previous = true;
    panels *= 2;
  }
}

struct QuadNode {
  double node = 0.0;
  double weight = 0.0;  // includes the standard normal density
};

// Gauss-Hermite rule of the given order for the standard normal weight,
// computed by Golub-Welsch on the symmetric tridiagonal Jacobi matrix of the
// probabilists' Hermite polynomials. Weights sum to one. Rules are cached.
inline const std::vector<QuadNode>& gauss_hermite_rule(int order) {
  if (order < 1 || order > 2048) {
    throw std::invalid_argument("gauss_hermite_rule: order must be in [1, 2048]");
  }
  static std::mutex mutex;
  static std::map<int, std::vector<QuadNode>> cache;
  std::scoped_lock lock(mutex);
  auto it = cache.find(order);
  if (it != cache.end()) return it->second;

  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(order, order);
  for (int k = 1; k < order; ++k) {
    const double b = std::sqrt(static_cast<double>(k));
    jacobi(k - 1, k) = b;
    jacobi(k, k - 1) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) {
    throw std::runtime_error("gauss_hermite_rule: eigensolver failed");
  }
  std::vector<QuadNode> rule(static_cast<std::size_t>(order));
  for (int i = 0; i < order; ++i) {
    const double v0 = solver.eigenvectors()(0, i);
    rule[static_cast<std::size_t>(i)] = {solver.eigenvalues()(i), v0 * v0};
  }
  return cache.emplace(order, std::move(rule)).first->second;
}

// Integral of f against the standard normal density by Gauss-Hermite rules of
// doubling order. Oscillatory integrands need high orders; the node cap guards
// against silent non-resolution.
template <class F>
IntegralResult integrate_gauss_hermite(F&& f, const QuadratureSpec& spec = {},
                                       int initial_order = 64) {
  int order = std::max(8, initial_order);
  IntegralResult result;
  bool have_previous = false;
  double previous = 0.0;
  for (;;) {
    if (static_cast<std::size_t>(order) > spec.node_cap_1d || order > 2048) {
      if (have_previous) {
        throw QuadratureError("integrate_gauss_hermite: order cap reached before convergence",
                              result.value, result.error_estimate);
      }
      throw QuadratureError("integrate_gauss_hermite: order cap too small", 0.0,
                            std::numeric_limits<double>::infinity());
    }
    const auto& rule = gauss_hermite_rule(order);
    double sum = 0.0;
    for (const auto& qn : rule) sum += qn.weight * f(qn.node);
    result.evaluations += rule.size();
    if (have_previous) {
      result.value = sum;
      result.error_estimate = std::abs(sum - previous);
      if (result.error_estimate <= spec.tol) return result;
    }
    previous = sum;
    result.value = sum;
    have_previous = true;
    order *= 2;
  }
}

}  // namespace homsense
