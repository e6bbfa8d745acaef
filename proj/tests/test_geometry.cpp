#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <numbers>

#include "homsense/geometry.hpp"
#include "homsense/rng.hpp"
#include "support/jacobi.hpp"

using namespace homsense;

namespace {

Mat3 random_spd(Rng& rng, double jitter = 1.0) {
  Mat3 m;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) m(r, c) = rng.normal();
  return jitter * (m * m.transpose()) + 0.5 * Mat3::Identity();
}

}  // namespace

TEST_CASE("covariance factors reproduce the matrix") {
  Rng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat3 m = random_spd(rng);
    const CovarianceMatrix cov(m);
    CHECK((cov.sqrt() * cov.sqrt() - m).cwiseAbs().maxCoeff() < 1e-11);
    CHECK((cov.inverse() * m - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((cov.inverse_sqrt() * cov.sqrt() - Mat3::Identity()).cwiseAbs().maxCoeff() < 1e-11);
    CHECK(cov.determinant() == Catch::Approx(m.determinant()).epsilon(1e-10));
  }
}

TEST_CASE("covariance square root matches an independent Jacobi factorization") {
  Rng rng(12);
  for (int trial = 0; trial < 20; ++trial) {
    const Mat3 m = random_spd(rng);
    const CovarianceMatrix cov(m);
    const Mat3 oracle_sqrt = test_support::jacobi_sqrt(m);
    CHECK((cov.sqrt() - oracle_sqrt).cwiseAbs().maxCoeff() < 1e-10);
  }
}

TEST_CASE("covariance constructor rejects bad input") {
  Mat3 asym = Mat3::Identity();
  asym(0, 1) = 0.5;  // not mirrored
  CHECK_THROWS_AS(CovarianceMatrix(asym), std::domain_error);

  Mat3 indefinite = Mat3::Identity();
  indefinite(2, 2) = -1.0;
  CHECK_THROWS_AS(CovarianceMatrix(indefinite), std::domain_error);

  Mat3 degenerate = Mat3::Identity();
  degenerate(1, 1) = 1e-14;  // under the 1e-12 relative eigenvalue floor
  CHECK_THROWS_AS(CovarianceMatrix(degenerate), std::domain_error);

  CHECK_THROWS_AS(CovarianceMatrix(Mat3::Zero()), std::domain_error);

  const CovarianceMatrix diag = CovarianceMatrix::from_sigmas(1.0, 2.0, 3.0);
  CHECK(diag.sqrt()(0, 0) == Catch::Approx(1.0));
  CHECK(diag.sqrt()(1, 1) == Catch::Approx(2.0));
  CHECK(diag.sqrt()(2, 2) == Catch::Approx(3.0));
}

TEST_CASE("whitening preserves the beat phase") {
  // rho . kappa must equal delta_r . delta_k: the whitening transform and its
  // inverse transpose cancel.
  Rng rng(13);
  for (int trial = 0; trial < 20; ++trial) {
    const CovarianceMatrix pooled{random_spd(rng)};
    const Vec3 delta_k = rng.normal3();
    const Vec3 delta_r = 3.0 * rng.normal3();
    const Vec3 kappa = kappa_from_physical(pooled, delta_k);
    const Vec3 rho = whiten(pooled, delta_r);
    CHECK(rho.dot(kappa) == Catch::Approx(delta_r.dot(delta_k)).epsilon(1e-10).margin(1e-10));
  }
}

TEST_CASE("lab-frame momentum difference embedding") {
  const Vec3 dk = delta_k_from_lab(1.5, -2.0, 0.75);
  CHECK(dk[0] == -1.5);
  CHECK(dk[1] == 2.0);
  CHECK(dk[2] == 0.75);

  const CovarianceMatrix a = CovarianceMatrix::from_sigmas(1.0, 1.0, 1.0);
  const CovarianceMatrix b = CovarianceMatrix::from_sigmas(2.0, 1.0, 0.5);
  const CovarianceMatrix pooled = pooled_covariance(a, b);
  CHECK((pooled.entries() - (a.entries() + b.entries())).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("spherical conversion round trips") {
  const SphericalMomentum s{5.0, std::numbers::pi / 3.0, std::numbers::pi / 5.0};
  const KappaVector kappa = kappa_from_spherical(s);
  CHECK(kappa[0] == Catch::Approx(2.5).margin(1e-14));
  CHECK(kappa[1] == Catch::Approx(3.5031463461101837).margin(1e-14));
  CHECK(kappa[2] == Catch::Approx(2.5451848022756356).margin(1e-14));

  const SphericalMomentum back = spherical_from_kappa(kappa);
  CHECK(back.magnitude == Catch::Approx(5.0).epsilon(1e-13));
  CHECK(back.theta == Catch::Approx(s.theta).epsilon(1e-13));
  CHECK(back.phi == Catch::Approx(s.phi).epsilon(1e-13));

  Rng rng(14);
  for (int trial = 0; trial < 50; ++trial) {
    const KappaVector k = 4.0 * rng.normal3();
    const KappaVector again = kappa_from_spherical(spherical_from_kappa(k));
    CHECK((again - k).cwiseAbs().maxCoeff() < 1e-12 * (1.0 + k.norm()));
  }
}

TEST_CASE("spherical conversion conventions at degenerate points") {
  const SphericalMomentum zero = spherical_from_kappa(KappaVector::Zero());
  CHECK(zero.magnitude == 0.0);
  CHECK(zero.theta == 0.0);
  CHECK(zero.phi == 0.0);

  // On the polar axis the azimuth defaults to zero.
  const SphericalMomentum polar = spherical_from_kappa(KappaVector(2.0, 0.0, 0.0));
  CHECK(polar.magnitude == Catch::Approx(2.0));
  CHECK(polar.theta == Catch::Approx(0.0).margin(1e-15));
  CHECK(polar.phi == 0.0);

  const SphericalMomentum anti = spherical_from_kappa(KappaVector(-2.0, 0.0, 0.0));
  CHECK(anti.theta == Catch::Approx(std::numbers::pi));

  // sign(0) = +1 puts the negative-kappa_2 half line at phi = +pi.
  const SphericalMomentum half_line = spherical_from_kappa(KappaVector(0.0, -1.0, 0.0));
  CHECK(half_line.theta == Catch::Approx(std::numbers::pi / 2.0));
  CHECK(half_line.phi == Catch::Approx(std::numbers::pi));

  CHECK_THROWS_AS(kappa_from_spherical({-1.0, 0.5, 0.5}), std::domain_error);
  CHECK_THROWS_AS(kappa_from_spherical({1.0, 4.0, 0.5}), std::domain_error);
  CHECK_THROWS_AS(kappa_from_spherical({1.0, 0.5, 4.0}), std::domain_error);
}

TEST_CASE("canonicalization fixes the sign ambiguity") {
  const KappaVector flipped = canonicalize(KappaVector(-1.0, 2.0, 0.0));
  CHECK(flipped == KappaVector(1.0, -2.0, 0.0));

  const KappaVector second_axis = canonicalize(KappaVector(0.0, -0.5, 1.0));
  CHECK(second_axis == KappaVector(0.0, 0.5, -1.0));

  CHECK(canonicalize(KappaVector::Zero()) == KappaVector::Zero());
  CHECK(canonicalize(KappaVector(1.0, 2.0, 3.0)) == KappaVector(1.0, 2.0, 3.0));

  // Below-tolerance leading components defer to the next axis.
  const KappaVector tiny_first = canonicalize(KappaVector(1e-13, -1.0, 0.0));
  CHECK(tiny_first[1] == 1.0);
  CHECK(tiny_first[0] == -1e-13);
}
