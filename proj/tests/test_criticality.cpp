#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>

#include "dicke/criticality.hpp"
#include "test_helpers.hpp"

using namespace dicke;

namespace {

std::vector<double> gamma_window(double j, double lo, double hi, int points,
                                 double exponent = -2.0 / 3.0) {
  const double s = std::pow(j, exponent);
  std::vector<double> grid(points);
  for (int i = 0; i < points; ++i)
    grid[i] = 0.5 + (lo + (hi - lo) * i / (points - 1)) * s;
  return grid;
}

}  // namespace

TEST_CASE("fidelity basics") {
  Eigen::VectorXd a(3), b(3);
  a << 1, 0, 0;
  b << 0, 1, 0;
  CHECK(fidelity(a, a) == 1.0);
  CHECK(fidelity(a, b) == 0.0);
  CHECK(fidelity(a, -a) == 1.0);  // sign flips are irrelevant
  Eigen::VectorXd c(2);
  CHECK_THROWS_AS(fidelity(a, c), std::invalid_argument);
}

TEST_CASE("fidelity is symmetric and flip invariant on random states") {
  test_oracle::Rng rng(301);
  for (int trial = 0; trial < 40; ++trial) {
    Eigen::VectorXd a(8), b(8);
    for (int i = 0; i < 8; ++i) {
      a(i) = rng.uniform(-1, 1);
      b(i) = rng.uniform(-1, 1);
    }
    a.normalize();
    b.normalize();
    CHECK(fidelity(a, b) == fidelity(b, a));
    CHECK(fidelity(a, b) == fidelity((-a).eval(), b));
    CHECK(fidelity(a, b) >= 0.0);
    CHECK(fidelity(a, b) <= 1.0);
  }
}

TEST_CASE("neighbouring ground states overlap to second order in delta gamma") {
  // deep normal phase: 1 - F = O(delta^2), tiny
  const double delta = 1e-4;
  const auto va = ground_state(ModelParams(1.0, 0.1, 4), Parity::Even, 40).vector;
  const auto vb = ground_state(ModelParams(1.0, 0.1 + delta, 4), Parity::Even, 40).vector;
  CHECK(1.0 - fidelity(va, vb) <= 1e-7);
  CHECK(1.0 - fidelity(va, vb) >= 0.0);
}

TEST_CASE("susceptibility scan finds the finite-N transition precursor") {
  // j = 5: peak near 1/2 + (1/3) j^(-2/3) = 0.614
  ScanSettings settings;
  settings.threads = 2;
  const auto scan = susceptibility_scan(1.0, 10, Parity::Even, gamma_window(5, 0.03, 1.2, 21),
                                        1e-4, settings);
  CHECK(scan.gamma_peak == doctest::Approx(0.606692).epsilon(5e-4));
  CHECK(std::abs(scan.gamma_peak - 0.614) <= 0.01);
  for (double chi : scan.susceptibility) CHECK(chi >= 0.0);
  CHECK(scan.gamma_peak > scan.gamma_grid.front());
  CHECK(scan.gamma_peak < scan.gamma_grid.back());
  CHECK(scan.gamma_peak_parabolic == doctest::Approx(scan.gamma_peak).epsilon(5e-3));

  SUBCASE("odd sector peaks higher, near 1/2 + (2/5) j^(-2/3)") {
    const auto odd = susceptibility_scan(1.0, 10, Parity::Odd, gamma_window(5, 0.03, 1.2, 21),
                                         1e-4, settings);
    CHECK(odd.gamma_peak == doctest::Approx(0.640085).epsilon(5e-4));
    CHECK(std::abs(odd.gamma_peak - 0.6368) <= 0.01);
    CHECK(odd.gamma_peak > scan.gamma_peak);
  }
}

TEST_CASE("peak location is robust under halving delta gamma") {
  ScanSettings settings;
  settings.threads = 2;
  const auto grid = gamma_window(5, 0.03, 1.2, 21);
  const auto a = susceptibility_scan(1.0, 10, Parity::Even, grid, 1e-4, settings);
  const auto b = susceptibility_scan(1.0, 10, Parity::Even, grid, 5e-5, settings);
  CHECK(std::abs(a.gamma_peak - b.gamma_peak) <= 1e-4);
}

TEST_CASE("a peak on the grid boundary is an error") {
  ScanSettings settings;
  // window entirely above the peak: chi decreases across it
  std::vector<double> grid;
  for (int i = 0; i < 8; ++i) grid.push_back(0.75 + 0.01 * i);
  CHECK_THROWS_WITH_AS(susceptibility_scan(1.0, 10, Parity::Even, grid, 1e-4, settings),
                       doctest::Contains("widen"), std::runtime_error);
}

TEST_CASE("scan input validation") {
  ScanSettings settings;
  std::vector<double> grid{0.5, 0.6, 0.7, 0.6, 0.8};
  CHECK_THROWS_AS(susceptibility_scan(1.0, 10, Parity::Even, grid, 1e-4, settings),
                  std::invalid_argument);
  std::vector<double> coarse{0.5, 0.6, 0.7, 0.8, 0.9};
  CHECK_THROWS_AS(susceptibility_scan(1.0, 10, Parity::Even, coarse, 0.2, settings),
                  std::invalid_argument);
}

TEST_CASE("correspondence map") {
  const auto origin = correspondence_map(0.0, -5.0, 5.0);
  CHECK(origin.q == 0.0);
  CHECK(origin.theta == 0.0);

  const auto pt = correspondence_map(2.0, 0.0, 3.0, 0.0);
  CHECK(pt.q == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(pt.theta == doctest::Approx(std::numbers::pi / 2).epsilon(1e-15));
  CHECK(pt.p == 0.0);

  const auto mirrored = correspondence_map(2.0, 0.0, 3.0, std::numbers::pi);
  CHECK(mirrored.q == doctest::Approx(2.0).epsilon(1e-15));

  CHECK_THROWS_AS(correspondence_map(-0.1, 0.0, 3.0), std::invalid_argument);
  CHECK_THROWS_AS(correspondence_map(1.0, 3.5, 3.0), std::invalid_argument);
  CHECK(correspondence_map(1.0, 3.0 + 1e-13, 3.0).theta ==
        doctest::Approx(std::numbers::pi).epsilon(1e-6));
}

TEST_CASE("exact ground state maps near the universal curve at strong coupling") {
  const ModelParams p(1.0, 1.0, 60);
  const auto [pair, report] = converged_ground(p, Parity::Even, 1e-10);
  const auto labels = enumerate_basis(HilbertSpec(60, report.nu_max_used, Parity::Even));
  const auto pt = correspondence_map(photon_number_mean(pair.vector, labels),
                                     jz_mean(pair.vector, labels), 30.0);
  const double curve = universal_curve(pt.theta, 1.0);
  CHECK(std::abs(pt.q / std::sqrt(60.0) - curve) <= 5e-3);  // measured ~2.3e-3 at N=60
}

TEST_CASE("gamma_c tables") {
  TableSettings settings;
  settings.scan.threads = 2;
  SUBCASE("exact even at j=5") {
    const auto table = gamma_c_table({5.0}, CriticalMethod::ExactEven, settings);
    REQUIRE(table.size() == 1);
    CHECK(table[0].second == doctest::Approx(0.606692).epsilon(5e-4));
    CHECK(table[0].second > 0.5);
  }
  SUBCASE("sas at j=10") {
    const auto table = gamma_c_table({10.0}, CriticalMethod::SAS, settings);
    CHECK(table[0].second == doctest::Approx(0.5522715).epsilon(5e-5));
  }
  SUBCASE("validation") {
    CHECK_THROWS_AS(gamma_c_table({5.0, 4.0}, CriticalMethod::ExactEven, settings),
                    std::invalid_argument);
    CHECK_THROWS_AS(gamma_c_table({1.25}, CriticalMethod::ExactEven, settings),
                    std::invalid_argument);
  }
}

TEST_CASE("even peak and SAS jump approach each other along the ladder") {
  TableSettings settings;
  settings.scan.threads = 2;
  const std::vector<double> js{10.0, 20.0, 40.0};
  const auto exact = gamma_c_table(js, CriticalMethod::ExactEven, settings);
  const auto sas = gamma_c_table(js, CriticalMethod::SAS, settings);
  double prev = 1e9;
  for (std::size_t i = 0; i < js.size(); ++i) {
    const double diff = std::abs(exact[i].second - sas[i].second);
    CHECK(diff < prev);
    prev = diff;
  }
}

TEST_CASE("power-law fit recovers a synthetic exact law") {
  std::vector<std::pair<double, double>> table;
  for (double j : {100.0, 200.0, 300.0, 500.0, 700.0, 900.0})
    table.emplace_back(j, 0.5 + (1.0 / 3.0) * std::pow(j, -2.0 / 3.0));
  const auto fit = fit_power_law(table);
  CHECK(std::abs(fit.exponent + 2.0 / 3.0) <= 1e-12);
  CHECK(fit.amplitude == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(fit.sigma <= 1e-12);
  CHECK(fit.ci95_lo <= fit.exponent);
  CHECK(fit.ci95_hi >= fit.exponent);
  CHECK(fit.n_used == 6);
}

TEST_CASE("power-law fit is scale equivariant") {
  test_oracle::Rng rng(41);
  std::vector<std::pair<double, double>> table;
  for (double j : {10.0, 30.0, 90.0, 270.0})
    table.emplace_back(j, 0.5 + 0.3 * std::pow(j, -0.61) * (1 + 0.02 * rng.uniform(-1, 1)));
  const auto base = fit_power_law(table);
  const double c = 2.718;
  auto scaled = table;
  for (auto& [j, gc] : scaled) gc = 0.5 + c * (gc - 0.5);
  const auto fit2 = fit_power_law(scaled);
  CHECK(std::abs(fit2.exponent - base.exponent) <= 1e-13);
  CHECK(fit2.amplitude == doctest::Approx(c * base.amplitude).epsilon(1e-12));
}

TEST_CASE("power-law fit input guards") {
  std::vector<std::pair<double, double>> short_table{{5.0, 0.6}, {10.0, 0.55}};
  CHECK_THROWS_AS(fit_power_law(short_table), std::invalid_argument);
  std::vector<std::pair<double, double>> at_half{{5.0, 0.6}, {10.0, 0.55}, {20.0, 0.5}};
  CHECK_THROWS_AS(fit_power_law(at_half), std::invalid_argument);

  // a point within 1e-9 of 1/2 is excluded, not fatal
  std::vector<std::pair<double, double>> with_singular{
      {5.0, 0.6}, {10.0, 0.55}, {20.0, 0.53}, {40.0, 0.5 + 1e-10}};
  const auto fit = fit_power_law(with_singular);
  CHECK(fit.n_excluded == 1);
  CHECK(fit.n_used == 3);
}

TEST_CASE("student t quantiles match tabulated values") {
  CHECK(detail::student_t_quantile(0.975, 4) == doctest::Approx(2.7764451).epsilon(1e-6));
  CHECK(detail::student_t_quantile(0.975, 10) == doctest::Approx(2.2281389).epsilon(1e-6));
  CHECK(detail::student_t_quantile(0.975, 18) == doctest::Approx(2.1009220).epsilon(1e-6));
  CHECK(std::abs(detail::student_t_quantile(0.5, 7)) <= 1e-9);
  CHECK(detail::student_t_quantile(0.025, 10) == doctest::Approx(-2.2281389).epsilon(1e-6));
}
