#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "dicke/model.hpp"
#include "test_helpers.hpp"

using namespace dicke;

TEST_CASE("lambda eigenvalue counts photonic plus atomic excitations") {
  // (nu, m, j): lambda = nu + m + j
  CHECK(lambda_eigenvalue(BasisLabel{0, -1}, 1) == 0);   // lowest state, j = 1/2
  CHECK(lambda_eigenvalue(BasisLabel{1, +1}, 1) == 2);   // one photon + one flip
  CHECK(lambda_eigenvalue(BasisLabel{3, -4}, 10) == 6);  // nu=3, m=-2, j=5
}

TEST_CASE("lambda eigenvalue rejects invalid labels") {
  CHECK_THROWS_AS(lambda_eigenvalue(BasisLabel{0, 5}, 3), std::invalid_argument);   // |m| > j
  CHECK_THROWS_AS(lambda_eigenvalue(BasisLabel{-1, 1}, 1), std::invalid_argument);  // nu < 0
  CHECK_THROWS_AS(lambda_eigenvalue(BasisLabel{0, 0}, 1), std::invalid_argument);   // m integer, j half
}

TEST_CASE("parity classification") {
  CHECK(parity_from_lambda(0) == Parity::Even);
  CHECK(parity_from_lambda(1) == Parity::Odd);
  // nu=2, m=0, j=1 -> lambda = 3
  CHECK(lambda_eigenvalue(BasisLabel{2, 0}, 2) == 3);
  CHECK(parity_of(BasisLabel{2, 0}, 2) == Parity::Odd);
}

TEST_CASE("parity_of always agrees with the parity of lambda") {
  test_oracle::Rng rng(42);
  for (int trial = 0; trial < 500; ++trial) {
    const int tj = rng.uniform_int(1, 40);
    const int nu = rng.uniform_int(0, 60);
    const int k = rng.uniform_int(0, tj);
    const BasisLabel label{nu, 2 * k - tj};
    const long lambda = lambda_eigenvalue(label, tj);
    CHECK(parity_of(label, tj) == (lambda % 2 == 0 ? Parity::Even : Parity::Odd));
  }
}

TEST_CASE("critical coupling gamma_c = sqrt(omega_a)/2") {
  CHECK(gamma_critical(1.0) == 0.5);
  CHECK(gamma_critical(4.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(gamma_critical(0.25) == doctest::Approx(0.25).epsilon(1e-15));
  CHECK_THROWS_AS(gamma_critical(0.0), std::invalid_argument);
  CHECK_THROWS_AS(gamma_critical(-1.0), std::invalid_argument);
}

TEST_CASE("gamma_critical squared times four recovers omega_a") {
  test_oracle::Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const double omega = rng.uniform(1e-3, 50.0);
    const double gc = gamma_critical(omega);
    CHECK(4.0 * gc * gc == doctest::Approx(omega).epsilon(1e-14));
  }
}

TEST_CASE("coupling ratio") {
  CHECK(coupling_ratio(1.0, 0.5) == 2.0);
  CHECK(coupling_ratio(0.5, 0.5) == 1.0);
  CHECK(coupling_ratio(0.3, 0.5) == doctest::Approx(0.6).epsilon(1e-15));
  CHECK_THROWS_AS(coupling_ratio(1.0, 0.0), std::invalid_argument);
}

TEST_CASE("model params validate their invariants") {
  CHECK_THROWS_AS(ModelParams(0.0, 0.1, 2), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(1.0, 0.1, 0), std::invalid_argument);
  CHECK_THROWS_AS(ModelParams(1.0, std::nan(""), 2), std::invalid_argument);
  const ModelParams p(1.0, 0.3, 5);
  CHECK(p.j() == 2.5);
  CHECK(p.twice_j() == 5);
}
