#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "homsense/fisher.hpp"
#include "homsense/rng.hpp"
#include "support/stats.hpp"

using namespace homsense;

namespace {

Mat3 analytic_jacobian(const SphericalMomentum& s) {
  const double st = std::sin(s.theta), ct = std::cos(s.theta);
  const double sp = std::sin(s.phi), cp = std::cos(s.phi);
  Mat3 j;
  j.col(0) = Vec3(ct, st * cp, st * sp);
  j.col(1) = Vec3(-s.magnitude * st, s.magnitude * ct * cp, s.magnitude * ct * sp);
  j.col(2) = Vec3(0.0, -s.magnitude * st * sp, s.magnitude * st * cp);
  return j;
}

Mat3 finite_difference_jacobian(const SphericalMomentum& s) {
  const double h = 1e-6;
  Mat3 j;
  for (int p = 0; p < 3; ++p) {
    SphericalMomentum lo = s, hi = s;
    double* lo_p = p == 0 ? &lo.magnitude : (p == 1 ? &lo.theta : &lo.phi);
    double* hi_p = p == 0 ? &hi.magnitude : (p == 1 ? &hi.theta : &hi.phi);
    *lo_p -= h;
    *hi_p += h;
    j.col(p) = (kappa_from_spherical(hi) - kappa_from_spherical(lo)) / (2.0 * h);
  }
  return j;
}

}  // namespace

TEST_CASE("quantum information matrix in spherical parameters") {
  const FisherMatrix q = qfi({4.0, std::numbers::pi / 4.0, std::numbers::pi / 3.0});
  CHECK(q.entries(0, 0) == 1.0);
  CHECK(q.entries(1, 1) == Catch::Approx(16.0).epsilon(1e-15));
  CHECK(q.entries(2, 2) == Catch::Approx(8.0).epsilon(1e-14));
  CHECK(q.entries(0, 1) == 0.0);

  const FisherMatrix polar = qfi({2.0, 0.0, 0.0});
  CHECK(polar.entries(2, 2) == 0.0);

  CHECK_THROWS_AS(qfi({-1.0, 0.0, 0.0}), std::domain_error);
}

TEST_CASE("classical information reaches the quantum bound without distinguishability") {
  // At nu = 1 the contrast kernel is identically one, so the moments become
  // plain Gaussian moments and the classical matrix is gamma^2 times the
  // quantum one.
  for (double gamma : {1.0, 0.7}) {
    const SphericalMomentum s{3.0, std::numbers::pi / 5.0, -std::numbers::pi / 7.0};
    const FisherMatrix f = fisher_spherical(1.0, gamma, s);
    const FisherMatrix q = qfi(s);
    for (int i = 0; i < 3; ++i) {
      CHECK(f.entries(i, i) ==
            Catch::Approx(gamma * gamma * q.entries(i, i)).epsilon(1e-8).margin(1e-10));
    }
  }
}

TEST_CASE("no interference means no momentum information") {
  const FisherMatrix f = fisher_spherical(0.0, 1.0, {3.0, 1.0, 1.0});
  CHECK(f.entries.cwiseAbs().maxCoeff() < 1e-14);

  // Zero beat frequency also kills the signal when photons are partly
  // distinguishable.
  const FisherMatrix z = fisher_cartesian(0.7, 1.0, Vec3::Zero());
  CHECK(z.entries.cwiseAbs().maxCoeff() < 1e-12);

  // Fully indistinguishable photons keep isotropic information at zero kappa.
  const FisherMatrix u = fisher_cartesian(1.0, 0.8, Vec3::Zero());
  CHECK((u.entries - 0.64 * Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("spherical information matches a Monte Carlo average") {
  const double nu = 0.9;
  const SphericalMomentum s{4.0, std::numbers::pi / 2.0, 0.0};
  const FisherMatrix f = fisher_spherical(nu, 1.0, s);

  Rng rng(12345);
  const std::size_t n = 1000000;
  Vec3 sum = Vec3::Zero(), sum_sq = Vec3::Zero();
  for (std::size_t i = 0; i < n; ++i) {
    const double l = rng.normal();
    const double b = beta(nu, s.magnitude * l);
    const Vec3 term(b * l * l, 16.0 * b, 16.0 * b);
    sum += term;
    sum_sq += term.cwiseProduct(term);
  }
  for (int i = 0; i < 3; ++i) {
    const double mean = sum[i] / static_cast<double>(n);
    const double var = sum_sq[i] / static_cast<double>(n) - mean * mean;
    const double se = std::sqrt(var / static_cast<double>(n));
    CHECK(std::abs(f.entries(i, i) - mean) < 3.0 * se);
  }
}

TEST_CASE("pointwise information density integrates to the matrix") {
  const double nu = 0.8;
  const SphericalMomentum s{2.5, 1.1, 0.4};
  const FisherMatrix f = fisher_spherical(nu, 1.0, s, {.tol = 1e-11});
  for (int i = 0; i < 3; ++i) {
    const double integrated = test_support::simpson(
        [&](double l) { return fisher_density(l, nu, s).entries(i, i); }, -8.5, 8.5, 6000);
    CHECK(integrated == Catch::Approx(f.entries(i, i)).epsilon(1e-9).margin(1e-12));
  }
  // The density vanishes where the contrast kernel has its zeros.
  const double node = std::numbers::pi / s.magnitude;
  CHECK(fisher_density(node, nu, s).entries.cwiseAbs().maxCoeff() < 1e-25);
}

TEST_CASE("cartesian matrix has the rank-one plus isotropic structure") {
  const double nu = 0.8, gamma = 0.9;
  const KappaVector kappa(1.0, 2.0, 2.0);
  const FisherMatrix f = fisher_cartesian(nu, gamma, kappa, {.tol = 1e-12});

  // kappa itself is an eigenvector; any orthogonal direction shares the
  // isotropic eigenvalue.
  const Vec3 along = f.entries * kappa.normalized();
  const double lambda_along = along.dot(kappa.normalized());
  CHECK((along - lambda_along * kappa.normalized()).norm() < 1e-12);

  const Vec3 perp = Vec3(2.0, -1.0, 0.0).normalized();
  const Vec3 image = f.entries * perp;
  const double lambda_perp = image.dot(perp);
  CHECK((image - lambda_perp * perp).norm() < 1e-12);

  // Eigenvalues are gamma^2 I2 along kappa and gamma^2 I0 across it; the
  // spherical matrix carries the same two moments.
  const SphericalMomentum s = spherical_from_kappa(kappa);
  const FisherMatrix fs = fisher_spherical(nu, gamma, s, {.tol = 1e-12});
  CHECK(lambda_along == Catch::Approx(fs.entries(0, 0)).epsilon(1e-9));
  CHECK(lambda_perp ==
        Catch::Approx(fs.entries(1, 1) / (s.magnitude * s.magnitude)).epsilon(1e-9));
}

TEST_CASE("spherical and cartesian forms are related by the change of variables") {
  Rng rng(808);
  for (int trial = 0; trial < 6; ++trial) {
    const KappaVector kappa = Vec3(0.5, 0.2, 0.1) + 2.0 * Vec3(rng.uniform(), rng.uniform(),
                                                               rng.uniform());
    const SphericalMomentum s = spherical_from_kappa(kappa);
    const double nu = 0.5 + 0.4 * rng.uniform();
    const FisherMatrix fc = fisher_cartesian(nu, 0.8, kappa, {.tol = 1e-12});
    const FisherMatrix fs = fisher_spherical(nu, 0.8, s, {.tol = 1e-12});

    const Mat3 j = analytic_jacobian(s);
    const Mat3 pulled_back = j.transpose() * fc.entries * j;
    CHECK((pulled_back - fs.entries).cwiseAbs().maxCoeff() < 1e-8);

    const Mat3 jfd = finite_difference_jacobian(s);
    CHECK((jfd - j).cwiseAbs().maxCoeff() < 1e-7);
    const Mat3 pulled_fd = jfd.transpose() * fc.entries * jfd;
    CHECK((pulled_fd - fs.entries).cwiseAbs().maxCoeff() < 1e-5);
  }
}

TEST_CASE("closed-form inverse diagonal matches a direct matrix inverse") {
  Rng rng(909);
  for (int trial = 0; trial < 10; ++trial) {
    const KappaVector kappa = 3.0 * rng.normal3();
    const double nu = 0.3 + 0.6 * rng.uniform();
    const double gamma = 0.5 + 0.5 * rng.uniform();
    const FisherMatrix f = fisher_cartesian(nu, gamma, kappa, {.tol = 1e-12});
    const Mat3 inv = f.entries.inverse();
    for (int axis = 1; axis <= 3; ++axis) {
      const double closed =
          fisher_cartesian_inverse_diag(nu, gamma, kappa, axis, {.tol = 1e-12});
      CHECK(closed == Catch::Approx(inv(axis - 1, axis - 1)).epsilon(1e-9));
    }
  }
  CHECK(fisher_cartesian_inverse_diag(0.0, 1.0, Vec3(1.0, 0.0, 0.0), 1) ==
        std::numeric_limits<double>::infinity());
  CHECK_THROWS_AS(fisher_cartesian_inverse_diag(0.5, 1.0, Vec3(1.0, 0.0, 0.0), 7),
                  std::invalid_argument);
}

TEST_CASE("known-nuisance information is the matrix diagonal") {
  const KappaVector kappa(1.2, -0.7, 2.1);
  const double nu = 0.75, gamma = 0.8;
  const FisherMatrix f = fisher_cartesian(nu, gamma, kappa, {.tol = 1e-12});
  for (int axis = 1; axis <= 3; ++axis) {
    CHECK(fisher_known_nuisance(nu, gamma, kappa, axis, {.tol = 1e-12}) ==
          Catch::Approx(f.entries(axis - 1, axis - 1)).epsilon(1e-10));
  }
}

TEST_CASE("single-axis information chain") {
  // Projecting the data on one axis can only lose information, and treating
  // the other components as unknown can only inflate the variance:
  //   marginal <= known-nuisance  and  1/[F^{-1}]_aa <= F_aa.
  Rng rng(1010);
  int strict = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const KappaVector kappa = 2.5 * rng.normal3();
    const double nu = 0.2 + 0.75 * rng.uniform();
    const double gamma = 0.4 + 0.6 * rng.uniform();
    const int axis = 1 + static_cast<int>(rng.uniform() * 3.0);
    const double nu_eff = effective_distinguishability(nu, kappa, axis);
    const double marginal = fisher_single_param(nu_eff, gamma, kappa[axis - 1]);
    const double known = fisher_known_nuisance(nu, gamma, kappa, axis);
    const double inverse_diag = fisher_cartesian_inverse_diag(nu, gamma, kappa, axis);
    CHECK(marginal <= known * (1.0 + 1e-9) + 1e-12);
    CHECK(1.0 <= known * inverse_diag * (1.0 + 1e-9));
    if (marginal < known * (1.0 - 1e-6)) ++strict;
  }
  CHECK(strict > 50);  // the gap is real, not a numerical tie

  // With no transverse beat the projection loses nothing.
  const KappaVector axial(0.0, 0.0, 4.0);
  CHECK(fisher_single_param(0.8, 0.9, 4.0, {.tol = 1e-12}) ==
        Catch::Approx(fisher_known_nuisance(0.8, 0.9, axial, 3, {.tol = 1e-12}))
            .epsilon(1e-9));
}

TEST_CASE("classical information never exceeds the quantum bound") {
  Rng rng(1111);
  for (int trial = 0; trial < 12; ++trial) {
    const double nu = rng.uniform();
    const double gamma = rng.uniform();
    SphericalMomentum s{4.0 * rng.uniform(), std::numbers::pi * rng.uniform(),
                        std::numbers::pi * (2.0 * rng.uniform() - 1.0)};
    const FisherMatrix f = fisher_spherical(nu, gamma, s);
    const Mat3 gap = gamma * gamma * qfi(s).entries - f.entries;
    Eigen::SelfAdjointEigenSolver<Mat3> es(gap);
    CHECK(es.eigenvalues().minCoeff() > -1e-10);
  }
}

TEST_CASE("information grows with distinguishability") {
  const SphericalMomentum s{3.0, 1.0, 0.5};
  double prev0 = -1.0, prev1 = -1.0;
  for (double nu : {0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
    const FisherMatrix f = fisher_spherical(nu, 1.0, s);
    CHECK(f.entries(0, 0) > prev0);
    CHECK(f.entries(1, 1) > prev1);
    prev0 = f.entries(0, 0);
    prev1 = f.entries(1, 1);
  }
}

TEST_CASE("hermite and truncated rules agree") {
  // Keep nu away from 1 here: the kernel's complex poles approach the real
  // axis as nu grows and the Hermite rule would need an enormous order.
  const SphericalMomentum s{2.0, 0.9, -0.3};
  QuadratureSpec hermite;
  hermite.rule = QuadratureRule::GaussHermiteLike;
  hermite.tol = 1e-10;
  const FisherMatrix a = fisher_spherical(0.6, 0.9, s, {.tol = 1e-11});
  const FisherMatrix b = fisher_spherical(0.6, 0.9, s, hermite);
  CHECK((a.entries - b.entries).cwiseAbs().maxCoeff() < 1e-8);
}

TEST_CASE("reported quadrature error bounds the refinement gap") {
  const SphericalMomentum s{4.0, 1.2, 0.3};
  const FisherMatrix lax = fisher_spherical(0.9, 1.0, s, {.tol = 1e-6});
  const FisherMatrix tight = fisher_spherical(0.9, 1.0, s, {.tol = 1e-13});
  const double gap = (lax.entries - tight.entries).cwiseAbs().maxCoeff();
  CHECK(gap <= std::max(lax.quad_error, 1e-12));
}

TEST_CASE("wavefunction moment certification of the quantum matrix") {
  const SphericalMomentum s{4.0, std::numbers::pi / 4.0, std::numbers::pi / 3.0};
  const QfiMomentCheck check = qfi_moment_check(s, {.tol = 1e-10});
  CHECK(check.diag[0] == Catch::Approx(0.25).epsilon(1e-8));
  CHECK(check.diag[1] == Catch::Approx(4.0).epsilon(1e-8));
  CHECK(check.diag[2] == Catch::Approx(2.0).epsilon(1e-8));
  CHECK(check.offdiag.cwiseAbs().maxCoeff() < 1e-8);
  CHECK(check.braket.cwiseAbs().maxCoeff() < 1e-8);

  const FisherMatrix q = qfi(s);
  for (int i = 0; i < 3; ++i) {
    CHECK(4.0 * check.diag[i] == Catch::Approx(q.entries(i, i)).epsilon(1e-8).margin(1e-8));
  }
}
