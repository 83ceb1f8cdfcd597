#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "ptsim/common.hpp"
#include "ptsim/propagators.hpp"
#include "ptsim/tensor_core.hpp"

namespace ptsim {

// Compressed environment influence across n time steps: a chain of MPO sites
// Q[l], l = 1..n (stored 0-based), plus closure vectors that allow reading
// out the reduced state at every intermediate step.
struct ProcessTensor {
  std::size_t n_steps = 0;
  std::size_t sys_dim = 1;  // N_S
  double dt = 0.0;
  std::vector<QTensor> q;   // site l at q[l-1]; q.front().d_in = q.back().d_out = 1

  // closures[l] has length equal to the bond dimension after step l
  // (closures[0] pairs with d_0 = 1, closures[n] is the scalar 1).
  std::vector<CVec> closures;
  bool closures_valid = false;

  // Diagnostics: largest relative discarded singular value seen over all
  // truncations, and the per-bond values from the most recent sweep.
  double discarded_max = 0.0;
  std::vector<double> last_sweep_discarded;

  std::size_t bond_cap = 4096;

  std::size_t s2() const { return sys_dim * sys_dim; }
};

enum class SweepDirection { Forward, Backward };

// PT of an empty environment: every site is the identity on the system
// Liouville pair with all bonds of dimension 1.
ProcessTensor trivial_pt(std::size_t n, std::size_t sys_dim, double dt);

// Uncompressed PT of a single mode: bulk bonds M^2, the mode's initial state
// folded into step 1 and the trace functional folded into step n. Insertions
// are applied at their scheduled steps; time-dependent generators are
// sampled at each step midpoint.
ProcessTensor single_mode_pt(const ModeSpec& mode, std::size_t n, double dt);

// Absorb one more mode into the PT (the half-step sandwich), compressing on
// the fly: a fused forward pass (carry + SVD per site) followed by one
// backward sweep, both at the given threshold.
ProcessTensor combine_mode(ProcessTensor pt, const ModeSpec& mode, double epsilon);

// One full compression sweep in the given direction. epsilon = 0 is lossless
// (drops exact-zero singular values only).
ProcessTensor sweep_compress(ProcessTensor pt, double epsilon, SweepDirection direction);

// Fill pt.closures via the backward trace recursion. Valid whenever the PT
// was built from trace-preserving mode propagators.
ProcessTensor compute_closures(ProcessTensor pt);

// Product of two PTs over the shared system legs (environment influences
// applied b-then-a within each step). When final_sweep is true the merged
// chain is compressed at epsilon with one forward and one backward sweep;
// when false the exact product is returned with bond dims multiplied.
ProcessTensor merge_pt(const ProcessTensor& a, const ProcessTensor& b, double epsilon,
                       bool final_sweep);

// Intermediate state of a contraction: r(alpha, d_l) after step `step`.
struct PropagationState {
  CMat r;  // N_S^2 x current bond dim
  std::size_t step = 0;
};

// Full contraction against per-step free-system propagators m_list
// (m_list[l-1] is applied before site l). Returns rho(t_l) for l = 0..n,
// read out through the closures. Requires closures_valid.
std::vector<CMat> contract(const ProcessTensor& pt, const std::vector<Superoperator>& m_list,
                           const CMat& rho0);

// Inner bond dimensions d_0..d_n.
std::vector<std::size_t> bond_profile(const ProcessTensor& pt);

// Versioned little-endian binary snapshot (16-byte complex entries).
void save_pt(const ProcessTensor& pt, const std::string& path);
ProcessTensor load_pt(const std::string& path);

}  // namespace ptsim
