#pragma once

#include <cstddef>
#include <functional>
#include <map>
#include <utility>
#include <vector>

#include "ptsim/common.hpp"
#include "ptsim/tensor_core.hpp"

namespace ptsim {

// Free system: Hamiltonian (possibly time-dependent) plus Markovian
// dissipators (operator, rate). Energies are in units with hbar = 1.
struct SystemSpec {
  std::size_t dim = 2;
  std::function<CMat(double)> hamiltonian;              // N_S x N_S, Hermitian
  std::vector<std::pair<CMat, double>> dissipators;     // (operator, rate >= 0)
  bool time_dependent = false;  // enables per-step propagator caching when false
};

// One environment degree of freedom. The joint Hamiltonian acts on
// system (x) mode with the row-major composite index nu*M + xi.
struct ModeSpec {
  std::size_t sys_dim = 2;
  std::size_t mode_dim = 2;                              // M
  std::function<CMat(double)> joint_hamiltonian;         // (N_S*M) x (N_S*M), Hermitian
  std::vector<std::pair<CMat, double>> mode_dissipators; // M x M operators on the mode
  CMat initial_state;                                    // M x M density matrix
  std::map<std::size_t, CMat> insertions;                // step l -> M^2 x M^2 superoperator
  bool time_dependent = false;
};

// Dense matrix acting on vectorized density matrices.
struct Superoperator {
  std::size_t dim = 0;  // Liouville dimension D
  CMat matrix;          // D x D
};

// Generator of the Lindblad master equation in the row-major vectorization:
// vec(-i[h, rho] + sum_j rate_j (O rho O^+ - 1/2 {O^+O, rho})).
CMat liouvillian(const CMat& h, const std::vector<std::pair<CMat, double>>& dissipators);

// exp(L dt) with the system generator sampled at t_mid.
Superoperator free_step_propagator(const SystemSpec& sys, double dt, double t_mid);

// exp(L dt/2) for the joint system (x) mode generator sampled at t_mid; mode
// dissipators are embedded as I_S (x) O.
Superoperator mode_half_propagator(const ModeSpec& mode, double dt, double t_mid);

// exp(-h/kT)/Z; at T = 0 the uniform mixture over the (possibly degenerate)
// ground space.
CMat thermal_state(const CMat& h_mode, double temperature);

// Superoperator for rho -> a^+ rho a in a truncated boson basis.
CMat fock_insertion(std::size_t mode_dim);

// Mode raising/lowering ladders in the truncated basis (shared helpers).
CMat boson_annihilation(std::size_t mode_dim);
CMat boson_number(std::size_t mode_dim);

}  // namespace ptsim
