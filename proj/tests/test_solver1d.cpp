#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "ptsim/solver1d.hpp"

using namespace ptsim;

namespace {
constexpr double kPi = std::numbers::pi;

Grid1D wide_grid() {
  Grid1D g;
  g.x0 = -10.0;
  g.dx = 0.005;
  g.n_x = 4001;
  return g;
}
}  // namespace

TEST_CASE("empty box reproduces the exact discrete laplacian spectrum") {
  // With v = 0 the eigenpairs of the three-point stencil are known in closed
  // form: E_k = (4/dx^2) sin^2(k pi / (2(n+1))), psi_k(j) ~ sin(k pi (j+1)/(n+1)).
  Grid1D g;
  g.x0 = 1.0;  // offset must not matter for the spectrum
  g.dx = 0.1;
  g.n_x = 50;
  const std::size_t m = 5;
  const auto set = solve_bound_states([](double) { return 0.0; }, g, m);

  REQUIRE(set.energies.size() == Eigen::Index(m));
  const double n1 = double(g.n_x + 1);
  for (std::size_t k = 1; k <= m; ++k) {
    const double s = std::sin(double(k) * kPi / (2.0 * n1));
    const double exact = 4.0 / (g.dx * g.dx) * s * s;
    CHECK(set.energies(k - 1) == doctest::Approx(exact).epsilon(1e-12));
  }

  // ground-state profile against the exact discrete sine, unit grid norm
  const RVec& psi = set.wavefunctions[0];
  RVec exact_psi(g.n_x);
  for (std::size_t j = 0; j < g.n_x; ++j)
    exact_psi(j) = std::sin(kPi * double(j + 1) / n1);
  exact_psi /= std::sqrt(exact_psi.squaredNorm() * g.dx);
  CHECK((psi - exact_psi).cwiseAbs().maxCoeff() < 1e-10);

  // orthonormality in the grid inner product
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      const double ip = set.wavefunctions[i].dot(set.wavefunctions[j]) * g.dx;
      CHECK(std::abs(ip - (i == j ? 1.0 : 0.0)) < 1e-12);
    }
}

TEST_CASE("harmonic well matches the analytic ladder") {
  const auto set =
      solve_bound_states([](double x) { return x * x; }, wide_grid(), 5);

  for (std::size_t j = 0; j < 5; ++j)
    CHECK(set.energies(j) == doctest::Approx(2.0 * double(j) + 1.0).epsilon(3e-4));

  // |<j| x |j+1>| = sqrt((j+1)/2); diagonal and skip elements vanish
  for (std::size_t j = 0; j + 1 < 5; ++j) {
    CHECK(std::abs(set.x_elements(j, j + 1)) ==
          doctest::Approx(std::sqrt(double(j + 1) / 2.0)).epsilon(1e-5));
    CHECK(std::abs(set.x_elements(j, j)) < 1e-8);
  }
  CHECK(std::abs(set.x_elements(0, 2)) < 1e-8);
  CHECK(std::abs(set.x_elements(1, 3)) < 1e-8);

  // symmetric matrix, deterministic sign convention
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 5; ++j)
      CHECK(set.x_elements(i, j) == set.x_elements(j, i));

  // the ground state is nodeless and positive under the sign rule
  CHECK(set.wavefunctions[0].minCoeff() > -1e-12);
  CHECK(set.wavefunctions[0].maxCoeff() > 0.1);
}

TEST_CASE("morse bound-state machinery") {
  SUBCASE("energies against -(lambda - j - 1/2)^2") {
    const double lambda = 6.0;
    const auto set = solve_morse_bound_states(lambda, 6);
    REQUIRE(set.energies.size() == 6);
    for (std::size_t j = 0; j < 6; ++j) {
      const double d = lambda - double(j) - 0.5;
      CHECK(std::abs(set.energies(j) - (-d * d)) < 0.01);
      CHECK(set.energies(j) < 0.0);
    }
  }

  SUBCASE("bound-state counting") {
    CHECK(morse_bound_state_count(0.3) == 0);
    CHECK(morse_bound_state_count(0.5) == 0);
    CHECK(morse_bound_state_count(0.6) == 1);
    CHECK(morse_bound_state_count(2.0) == 2);
    CHECK(morse_bound_state_count(6.0) == 6);
    CHECK(morse_bound_state_count(10.7) == 11);
  }

  SUBCASE("requests beyond the well depth are rejected") {
    CHECK_THROWS_AS(solve_morse_bound_states(2.0, 3), ArgumentError);
    CHECK_THROWS_AS(morse_potential(0.0), ArgumentError);
    CHECK_THROWS_AS(morse_potential(-1.0), ArgumentError);
  }

  SUBCASE("scaled elements normalize the spectrum and stretch positions") {
    const double lambda = 6.0;
    const auto set = solve_morse_bound_states(lambda, 3);
    const auto [e, x] = morse_scaled_elements(set, lambda);
    CHECK(std::abs(e(0)) < 1e-12);
    CHECK(e(1) == doctest::Approx(1.0));
    // closed form: E~_2 = (E_2 - E_0)/(E_1 - E_0) = 1.8 for lambda = 6
    CHECK(e(2) == doctest::Approx(1.8).epsilon(1e-3));
    // magnitudes are sqrt(lambda)-stretched raw elements; the ladder gauge
    // makes nearest-neighbour elements non-negative regardless of raw signs
    CHECK(x(0, 1) == doctest::Approx(std::sqrt(lambda) * std::abs(set.x_elements(0, 1))));
    CHECK(x(0, 1) >= 0.0);
    CHECK(x(1, 2) >= 0.0);

    const auto one = solve_morse_bound_states(lambda, 1);
    CHECK_THROWS_AS(morse_scaled_elements(one, lambda), ArgumentError);
  }

  SUBCASE("deep wells approach the harmonic ladder") {
    const double lambda = 25.0;
    const auto set = solve_morse_bound_states(lambda, 2);
    const auto [e, x] = morse_scaled_elements(set, lambda);
    CHECK(std::sqrt(2.0) * x(0, 1) == doctest::Approx(1.0).epsilon(0.03));
  }
}

TEST_CASE("morse potential shape") {
  const auto v = morse_potential(3.0);
  CHECK(v(0.0) == doctest::Approx(-9.0));       // minimum -lambda^2 at x = 0
  CHECK(v(30.0) == doctest::Approx(0.0).scale(1.0));  // flat tail
  CHECK(v(-1.0) > 0.0);                          // repulsive wall
  const double h = 1e-6;
  CHECK(std::abs(v(h) - v(-h)) / (2 * h) < 1e-4);  // stationary at the minimum
}

TEST_CASE("grid and argument validation") {
  Grid1D g = wide_grid();
  CHECK_THROWS_AS(solve_bound_states(nullptr, g, 2), ArgumentError);
  CHECK_THROWS_AS(solve_bound_states([](double) { return 0.0; }, g, 0), ArgumentError);
  CHECK_THROWS_AS(solve_bound_states([](double) { return 0.0; }, g, g.n_x + 1),
                  ArgumentError);
  Grid1D bad = g;
  bad.dx = 0.0;
  CHECK_THROWS_AS(solve_bound_states([](double) { return 0.0; }, bad, 2), ArgumentError);
  bad = g;
  bad.n_x = 2;
  CHECK_THROWS_AS(solve_bound_states([](double) { return 0.0; }, bad, 2), ArgumentError);
}

TEST_CASE("tabulated potentials") {
  const std::string path = "test_potential.txt";

  SUBCASE("parsing, sorting, interpolation and clamping") {
    {
      std::ofstream f(path);
      f << "# a comment line\n";
      f << "\n";
      f << "2.0  4.0\n";
      f << "0.0  0.0\n";   // out of order on purpose
      f << "1.0  1.0\n";
      f << "  # indented comment\n";
      f << "3.0  9.0\n";
    }
    const auto v = potential_from_file(path);
    CHECK(v(0.0) == doctest::Approx(0.0));
    CHECK(v(1.0) == doctest::Approx(1.0));
    CHECK(v(0.5) == doctest::Approx(0.5));    // linear between (0,0) and (1,1)
    CHECK(v(1.5) == doctest::Approx(2.5));    // between (1,1) and (2,4)
    CHECK(v(-5.0) == doctest::Approx(0.0));   // clamped left
    CHECK(v(10.0) == doctest::Approx(9.0));   // clamped right
    std::remove(path.c_str());
  }

  SUBCASE("solving from a dense tabulated harmonic well") {
    {
      std::ofstream f(path);
      for (double x = -10.0; x <= 10.0 + 1e-9; x += 0.01)
        f << x << " " << x * x << "\n";
    }
    const auto v = potential_from_file(path);
    const auto set = solve_bound_states(v, wide_grid(), 2);
    CHECK(set.energies(0) == doctest::Approx(1.0).epsilon(1e-3));
    CHECK(set.energies(1) == doctest::Approx(3.0).epsilon(1e-3));
    std::remove(path.c_str());
  }

  SUBCASE("rejects malformed tables") {
    CHECK_THROWS_AS(potential_from_file("no_such_potential.txt"), ConfigError);

    {
      std::ofstream f(path);
      f << "0.0 1.0\n0.0 2.0\n";  // duplicate x
    }
    CHECK_THROWS_AS(potential_from_file(path), ConfigError);

    {
      std::ofstream f(path);
      f << "0.0 1.0\nbanana 2.0\n";
    }
    CHECK_THROWS_AS(potential_from_file(path), ConfigError);

    {
      std::ofstream f(path);
      f << "0.0 1.0\n";  // single point
    }
    CHECK_THROWS_AS(potential_from_file(path), ConfigError);
    std::remove(path.c_str());
  }
}
