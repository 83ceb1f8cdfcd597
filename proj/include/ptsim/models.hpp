#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "ptsim/common.hpp"
#include "ptsim/propagators.hpp"
#include "ptsim/solver1d.hpp"

namespace ptsim {

// Frequency-resolved coupling weight J(omega) >= 0 on its support.
struct SpectralDensity {
  enum class Kind { GaasPhonon, Lorentzian, Flat };
  Kind kind = Kind::Flat;

  // GaAs deformation-potential parameters (SI units; evaluation returns J in
  // 1/ps for omega in 1/ps).
  double rho_mass = 5370.0;     // kg/m^3
  double c_s = 5110.0;          // m/s
  double d_e_ev = 7.0;          // eV
  double d_h_ev = -3.5;         // eV
  double a_e_m = 3.0e-9;        // m
  double a_h_m = 3.0e-9 / 1.15; // m

  // Lorentzian: J(omega) = c_lor (1/pi) gamma / ((omega-omega_c)^2 + gamma^2)
  double lor_c = 0.0;
  double lor_gamma = 0.0;
  double lor_omega_c = 0.0;

  // Flat: constant height on [edge_min, edge_max], zero outside.
  double flat_height = 0.0;
  double flat_min = 0.0;
  double flat_max = 0.0;

  double operator()(double omega) const;

  static SpectralDensity gaas();
  static SpectralDensity lorentzian(double c, double gamma, double omega_c);
  static SpectralDensity flat(double height, double omega_min, double omega_max);
};

struct ContinuumDiscretization {
  std::vector<double> omegas;
  std::vector<double> couplings;      // g_k = sqrt(J(omega_k) d_omega), >= 0
  double density_of_states = 0.0;     // modes per unit energy
};

// Equidistant sampling of J over [range.first, range.second]. Sample points
// sit at interval midpoints, except for the GaAs phonon kind which keeps the
// endpoint convention omega_q = q*d_omega (the q = 0 mode enters with zero
// coupling since J(0) = 0).
ContinuumDiscretization discretize(const SpectralDensity& j,
                                   std::pair<double, double> range, std::size_t n_e);

// --- resonant level --------------------------------------------------------
// Fermionic band sites, each a local two-level mode hopping into a single
// system site (H_S = 0). bandwidth = 0 puts every mode at the system energy.
// initial_occupations[k] in {0, 1}.
std::vector<ModeSpec> resonant_level_modes(std::size_t n_e, double bandwidth, double g,
                                           const std::vector<int>& initial_occupations);

// --- driven quantum dot with phonons and photons ---------------------------
struct PulseParams {
  double area = 3.0 * 3.14159265358979323846;  // pulse area A
  double t0 = 7.0;                             // ps
  double tau_fwhm = 5.0;                       // ps
  double detuning_mev = 1.5;                   // hbar*delta in meV
};
struct PhotonBathParams {
  bool enabled = true;
  bool microscopic = true;   // false: Lindblad decay on the system instead
  double kappa = 0.1;        // 1/ps
  double bandwidth = 10.0;   // 1/ps
  std::size_t n_e = 100;
};
struct PhononBathParams {
  bool enabled = true;
  double omega_max = 5.0 / kHbarMeVps;  // 1/ps (5 meV)
  std::size_t n_e = 100;
};
struct BosonCutoffs {
  std::size_t phonon = 2;  // max excitation number; local dimension = cutoff+1
  std::size_t photon = 1;
};

// Two-level dot {G, X} driven by a detuned Gaussian pulse; GaAs phonons
// couple via pure dephasing, photons via Jaynes-Cummings hopping with g
// chosen so Fermi's golden rule reproduces kappa. Temperature in Kelvin
// applies to the phonon initial states.
std::pair<SystemSpec, std::vector<ModeSpec>> qd_phonon_photon_model(
    const PulseParams& pulse, const PhotonBathParams& photon,
    const PhononBathParams& phonon, double temperature_k, const BosonCutoffs& cutoffs);

// --- central spin ----------------------------------------------------------
// Spin-1/2 bath with Heisenberg coupling (J/N) S.s_k. b is the polarization
// bias of the initial-state sampling (infinity: all spins up; otherwise
// isotropic pure states filtered with acceptance probability
// exp[b (s_z - 1/2)]). Sampling is bit-reproducible for a fixed seed.
std::vector<ModeSpec> central_spin_modes(std::size_t n, double j_total, double b,
                                         std::uint64_t seed);

// --- anharmonic (bound-state) environments ---------------------------------
struct AnharmonicPotential {
  enum class Kind { Harmonic, Morse };
  Kind kind = Kind::Harmonic;
  double lambda = 0.0;  // Morse depth parameter
  static AnharmonicPotential harmonic() { return {Kind::Harmonic, 0.0}; }
  static AnharmonicPotential morse(double lambda) { return {Kind::Morse, lambda}; }
};

// Environment modes built from 1-D bound states: mode Hamiltonian
// sum_j w_k E~_j |j><j| + g_k sum_ij sqrt(2) x~_ij |i><j| (x) |e><e| with the
// scaled energies/positions from the finite-difference solver. k_b_t sets the
// thermal initial state over the retained levels (same energy units as disc).
std::vector<ModeSpec> anharmonic_modes(const AnharmonicPotential& pot, std::size_t m_levels,
                                       const ContinuumDiscretization& disc, double k_b_t);

// --- two-emitter superradiance ---------------------------------------------
// 4-level system {gg, ge, eg, ee}; every photon mode couples to the symmetric
// dipole sum; both emitters start excited. delta detunes the two emitters.
std::pair<SystemSpec, std::vector<ModeSpec>> superradiance_model(
    double delta, const ContinuumDiscretization& disc, std::size_t cutoff = 2);

// --- dispersively coupled driven cavity modes ------------------------------
struct DispersiveParams {
  double omega = 8.5 * 3.14159265358979323846 / 10.0;  // TLS drive strength / g
  std::vector<double> mode_freqs = {11.0, 12.0, 13.0, 14.0};  // omega_k / g
  std::vector<double> pulse_times = {10.0, 20.0, 30.0, 40.0}; // g*tau_k
  std::vector<double> amplitudes = {2.0, 2.0, 2.0, 2.0};      // A_k
  double tau_fwhm = 0.2;        // g*tau_FWHM of the Gaussian drive
  double kappa = 0.0;           // photon loss rate / g
  std::size_t cutoff = 4;       // max photon number per mode
  bool fock_insertions = false; // replace pulses by instantaneous a^+ . a
};

// TLS continuously driven at its bare transition, dispersively coupled to
// driven cavity modes; time in units of 1/g. dt fixes the step grid used to
// schedule Fock insertions.
std::pair<SystemSpec, std::vector<ModeSpec>> dispersive_model(const DispersiveParams& p,
                                                              double dt);

}  // namespace ptsim
