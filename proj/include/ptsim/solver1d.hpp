#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "ptsim/common.hpp"

namespace ptsim {

// Uniform real-space grid x_j = x0 + j*dx, j = 0..n_x-1.
struct Grid1D {
  double x0 = 0.0;
  double dx = 0.0;
  std::size_t n_x = 0;
};

// Lowest eigenpairs of h = -d^2/dx^2 + v(x) on a grid, with hard walls at
// the grid ends. Wavefunctions are unit-normalized with respect to the grid
// inner product (sum psi_i psi_j dx = delta_ij).
struct BoundStateSet {
  RVec energies;                     // ascending
  std::vector<RVec> wavefunctions;   // one real vector per state
  RMat x_elements;                   // <i| x |j>, real symmetric
  Grid1D grid;
};

// Three-point finite-difference eigensolver; returns the lowest m states.
BoundStateSet solve_bound_states(const std::function<double(double)>& v,
                                 const Grid1D& grid, std::size_t m);

// v(x) = Lambda^2 (e^{-2x} - 2 e^{-x}).
std::function<double(double)> morse_potential(double lambda);

// Number of bound (E < 0) Morse states: floor(Lambda + 1/2).
std::size_t morse_bound_state_count(double lambda);

// Convenience: Morse bound states on the default grid x in [-2, 20],
// dx = 0.005; requesting more than the bound-state count is an error.
BoundStateSet solve_morse_bound_states(double lambda, std::size_t m);

// Scale energies by the ground-state gap (E~_j = E_j / dE_g) and positions by
// sqrt(lambda) (x~ = sqrt(lambda) x) so that sqrt(2) x~ approaches the boson
// ladder sqrt(n+1) pattern.
std::pair<RVec, RMat> morse_scaled_elements(const BoundStateSet& bound, double lambda);

// Two-column text file (x, v) -> linearly interpolated potential.
std::function<double(double)> potential_from_file(const std::string& path);

}  // namespace ptsim
