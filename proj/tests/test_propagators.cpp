#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ptsim/propagators.hpp"
#include "support/oracles.hpp"

using namespace ptsim;
namespace orc = ptsim::oracle;

namespace {

CMat apply_superop(const CMat& s, const CMat& rho) { return unvec(CVec(s * vec(rho))); }

// Trace functional row vector in the row-major vectorization.
CVec trace_row(std::size_t n) {
  CVec j = CVec::Zero(n * n);
  for (std::size_t i = 0; i < n; ++i) j(i * n + i) = 1.0;
  return j;
}

}  // namespace

TEST_CASE("liouvillian reproduces master-equation dynamics") {
  orc::Rng rng(101);
  const CMat h = orc::random_hermitian(rng, 3);
  std::vector<std::pair<CMat, double>> diss;
  diss.emplace_back(orc::random_matrix(rng, 3, 3), 0.4);
  diss.emplace_back(orc::random_matrix(rng, 3, 3), 0.15);
  const CMat rho0 = orc::random_density(rng, 3);

  const double t = 0.7;
  const CMat prop = matrix_exponential(CMat(liouvillian(h, diss) * t));
  const CMat via_superop = apply_superop(prop, rho0);
  const CMat via_rk4 = orc::rk4_master(h, diss, rho0, t, 4000);
  CHECK(orc::max_abs_diff(via_superop, via_rk4) < 1e-10);
}

TEST_CASE("liouvillian preserves trace, hermiticity and unitary purity") {
  orc::Rng rng(102);
  const CMat h = orc::random_hermitian(rng, 4);
  std::vector<std::pair<CMat, double>> diss;
  diss.emplace_back(orc::random_matrix(rng, 4, 4), 0.8);

  // trace preservation is J^T L = 0 for the generator
  const CVec j = trace_row(4);
  CHECK((j.transpose() * liouvillian(h, diss)).cwiseAbs().maxCoeff() < 1e-13);

  const CMat step = matrix_exponential(CMat(liouvillian(h, diss) * 0.3));
  const CMat rho1 = apply_superop(step, orc::random_density(rng, 4));
  CHECK(std::abs(rho1.trace().real() - 1.0) < 1e-13);
  CHECK(std::abs(rho1.trace().imag()) < 1e-13);
  CHECK(orc::hermiticity_defect(rho1) < 1e-13);

  // no dissipators: purity of a pure state survives
  const CMat u_step = matrix_exponential(CMat(liouvillian(h, {}) * 0.3));
  CMat pure = CMat::Zero(4, 4);
  pure(1, 1) = 1.0;
  const CMat evolved = apply_superop(u_step, pure);
  CHECK(std::abs((evolved * evolved).trace().real() - 1.0) < 1e-12);
}

TEST_CASE("liouvillian validates dimensions and rates") {
  const CMat h = CMat::Identity(3, 3);
  CHECK_THROWS_AS(liouvillian(CMat(CMat::Zero(2, 3)), {}), ArgumentError);
  CHECK_THROWS_AS(liouvillian(h, {{CMat::Identity(2, 2), 1.0}}), ArgumentError);
  CHECK_THROWS_AS(liouvillian(h, {{CMat::Identity(3, 3), -0.5}}), ArgumentError);
}

TEST_CASE("free step propagator samples the Hamiltonian at the given time") {
  SystemSpec sys;
  sys.dim = 2;
  sys.time_dependent = true;
  sys.hamiltonian = [](double t) {
    CMat h = CMat::Zero(2, 2);
    h(0, 1) = t;  // deliberately time-dependent
    h(1, 0) = t;
    return h;
  };
  const double dt = 0.21, t_mid = 1.37;
  const Superoperator s = free_step_propagator(sys, dt, t_mid);
  REQUIRE(s.dim == 4);
  const CMat expect = matrix_exponential(CMat(liouvillian(sys.hamiltonian(t_mid), {}) * dt));
  CHECK(orc::max_abs_diff(s.matrix, expect) < 1e-14);
  CHECK_THROWS_AS(free_step_propagator(sys, 0.0, 0.0), ArgumentError);
}

TEST_CASE("free step propagator with no Hamiltonian is the identity") {
  SystemSpec sys;
  sys.dim = 3;
  const Superoperator s = free_step_propagator(sys, 0.5, 0.25);
  CHECK(orc::max_abs_diff(s.matrix, CMat(CMat::Identity(9, 9))) < 1e-15);
}

TEST_CASE("mode half propagator advances the joint state by dt/2") {
  orc::Rng rng(103);
  ModeSpec mode;
  mode.sys_dim = 2;
  mode.mode_dim = 3;
  const CMat h = orc::random_hermitian(rng, 6);
  mode.joint_hamiltonian = [h](double) { return h; };
  mode.initial_state = orc::random_density(rng, 3);

  const double dt = 0.4;
  const Superoperator s = mode_half_propagator(mode, dt, 0.0);
  REQUIRE(s.dim == 36);
  const CMat expect = matrix_exponential(CMat(liouvillian(h, {}) * (dt / 2)));
  CHECK(orc::max_abs_diff(s.matrix, expect) < 1e-14);
}

TEST_CASE("mode dissipators are embedded on the mode factor only") {
  orc::Rng rng(104);
  ModeSpec mode;
  mode.sys_dim = 2;
  mode.mode_dim = 2;
  const CMat h = orc::random_hermitian(rng, 4);
  mode.joint_hamiltonian = [h](double) { return h; };
  const CMat a = boson_annihilation(2);
  mode.mode_dissipators.emplace_back(a, 0.7);

  const Superoperator s = mode_half_propagator(mode, 0.3, 0.0);
  const CMat lifted = kron(CMat(CMat::Identity(2, 2)), a);
  const CMat expect =
      matrix_exponential(CMat(liouvillian(h, {{lifted, 0.7}}) * 0.15));
  CHECK(orc::max_abs_diff(s.matrix, expect) < 1e-14);

  ModeSpec bad = mode;
  bad.mode_dissipators[0].first = CMat::Identity(3, 3);
  CHECK_THROWS_AS(mode_half_propagator(bad, 0.3, 0.0), ArgumentError);

  ModeSpec wrong_h = mode;
  wrong_h.joint_hamiltonian = [](double) { return CMat(CMat::Identity(3, 3)); };
  CHECK_THROWS_AS(mode_half_propagator(wrong_h, 0.3, 0.0), ArgumentError);
}

TEST_CASE("mode half propagator samples time-dependent generators at t_mid") {
  ModeSpec mode;
  mode.sys_dim = 2;
  mode.mode_dim = 2;
  mode.time_dependent = true;
  mode.joint_hamiltonian = [](double t) {
    CMat h = CMat::Zero(4, 4);
    h(0, 0) = t * t;
    h(3, 3) = -t;
    return h;
  };
  const Superoperator s = mode_half_propagator(mode, 0.2, 2.5);
  const CMat expect =
      matrix_exponential(CMat(liouvillian(mode.joint_hamiltonian(2.5), {}) * 0.1));
  CHECK(orc::max_abs_diff(s.matrix, expect) < 1e-15);
}

TEST_CASE("thermal state follows the Boltzmann weights") {
  const double omega = 1.3, k_t = 0.9;
  const CMat h = omega * boson_number(4);
  const CMat rho = thermal_state(h, k_t);
  CHECK(std::abs(rho.trace().real() - 1.0) < 1e-14);
  CHECK(orc::hermiticity_defect(rho) < 1e-14);
  double z = 0.0;
  for (int n = 0; n < 4; ++n) z += std::exp(-omega * n / k_t);
  for (int n = 0; n < 4; ++n)
    CHECK(std::abs(rho(n, n).real() - std::exp(-omega * n / k_t) / z) < 1e-14);
  // off-diagonals vanish for a diagonal Hamiltonian
  CHECK(std::abs(rho(0, 2)) < 1e-14);
}

TEST_CASE("thermal state at zero temperature projects onto the ground space") {
  const CMat h = 2.0 * boson_number(3);
  const CMat rho = thermal_state(h, 0.0);
  CHECK(std::abs(rho(0, 0).real() - 1.0) < 1e-13);
  CHECK(rho.cwiseAbs().sum() == doctest::Approx(1.0).epsilon(1e-12));

  // degenerate ground space: uniform mixture
  const CMat flat = CMat::Zero(3, 3);
  const CMat rho_flat = thermal_state(flat, -1.0);  // T <= 0 handled alike
  for (int i = 0; i < 3; ++i)
    CHECK(std::abs(rho_flat(i, i).real() - 1.0 / 3.0) < 1e-13);
}

TEST_CASE("thermal state works in a rotated eigenbasis") {
  orc::Rng rng(105);
  const CMat h = orc::random_hermitian(rng, 4);
  const double k_t = 0.6;
  const CMat rho = thermal_state(h, k_t);
  // rho must commute with h and have the right weights
  CHECK(orc::max_abs_diff(CMat(h * rho), CMat(rho * h)) < 1e-12);
  CHECK(std::abs(rho.trace().real() - 1.0) < 1e-13);
  CHECK_THROWS_AS(thermal_state(CMat(CMat::Zero(2, 3)), 1.0), ArgumentError);
}

TEST_CASE("boson ladder operators on the truncated space") {
  const std::size_t m = 4;
  const CMat a = boson_annihilation(m);
  const CMat n_op = boson_number(m);
  for (std::size_t n = 0; n + 1 < m; ++n)
    CHECK(std::abs(a(n, n + 1) - std::sqrt(double(n + 1))) < 1e-15);
  CHECK(orc::max_abs_diff(CMat(a.adjoint() * a), n_op) < 1e-14);
  // truncation shows up only in the last diagonal entry of [a, a+]
  const CMat comm = a * a.adjoint() - a.adjoint() * a;
  for (std::size_t i = 0; i + 1 < m; ++i) CHECK(std::abs(comm(i, i) - 1.0) < 1e-14);
  CHECK(std::abs(comm(m - 1, m - 1) + double(m - 1)) < 1e-14);
}

TEST_CASE("fock insertion implements rho -> a+ rho a") {
  orc::Rng rng(106);
  const std::size_t m = 3;
  const CMat f = fock_insertion(m);
  const CMat a = boson_annihilation(m);
  const CMat rho = orc::random_density(rng, m);
  const CMat expect = a.adjoint() * rho * a;
  CHECK(orc::max_abs_diff(apply_superop(f, rho), expect) < 1e-14);

  // vacuum is promoted to the one-photon state
  CMat vac = CMat::Zero(m, m);
  vac(0, 0) = 1.0;
  CMat one = CMat::Zero(m, m);
  one(1, 1) = 1.0;
  CHECK(orc::max_abs_diff(apply_superop(f, vac), one) < 1e-15);

  CHECK_THROWS_AS(fock_insertion(1), ArgumentError);
}

TEST_CASE("half steps compose into a trace-preserving full step") {
  orc::Rng rng(107);
  ModeSpec mode;
  mode.sys_dim = 2;
  mode.mode_dim = 3;
  const CMat h = orc::random_hermitian(rng, 6);
  mode.joint_hamiltonian = [h](double) { return h; };
  const Superoperator half = mode_half_propagator(mode, 0.5, 0.0);
  const CMat full = half.matrix * half.matrix;
  const CVec j = trace_row(6);
  CHECK((j.transpose() * full - j.transpose()).cwiseAbs().maxCoeff() < 1e-13);
}
