#pragma once

#include <cstddef>
#include <utility>

#include "ptsim/common.hpp"

namespace ptsim {

// Row-major pairing of Hilbert indices (nu, mu) into one Liouville index
// alpha = nu*n + mu. Every module shares this convention.
std::size_t liouville_index(std::size_t nu, std::size_t mu, std::size_t n);
std::pair<std::size_t, std::size_t> liouville_unindex(std::size_t alpha, std::size_t n);

// Vectorize a density matrix row by row (and back).
CVec vec(const CMat& rho);
CMat unvec(const CVec& v);

CMat kron(const CMat& a, const CMat& b);

CMat matrix_exponential(const CMat& a);

struct SVDResult {
  CMat u;                // n x k_eff, orthonormal columns
  RVec singular_values;  // k_eff entries, descending, >= 0
  CMat v_dag;            // k_eff x m, orthonormal rows
  std::size_t k_eff = 0;
  double discarded_max = 0.0;  // largest dropped singular value (0 if none)
};

// Thin SVD keeping the singular values with sigma_i > epsilon * sigma_1
// (always at least one). An all-zero input yields one zero triplet so MPO
// bonds never collapse to dimension zero.
SVDResult truncated_svd(const CMat& a, double epsilon);

// One MPO site Q[d_out, d_in, alpha, alpha_tilde]. Stored as a d_out x
// (s*s*d_in) row-major matrix with column index (alpha*s + alpha_tilde)*d_in
// + d_in_index, s = n_sys2. This layout makes compression sweeps and bond
// contractions plain matrix views of the same buffer:
//   - as (d_out*s*s) x d_in: right-bond contractions / backward-sweep SVD
//   - as d_out x (s*s*d_in): left-bond contractions / forward-sweep SVD
struct QTensor {
  std::size_t d_out = 1;
  std::size_t d_in = 1;
  std::size_t n_sys2 = 1;  // system Liouville dimension N_S^2
  CMat m;                  // d_out x (n_sys2^2 * d_in)

  QTensor() : m(CMat::Zero(1, 1)) {}
  QTensor(std::size_t dout, std::size_t din, std::size_t s2);

  Cplx& at(std::size_t o, std::size_t i, std::size_t a, std::size_t at_);
  Cplx at(std::size_t o, std::size_t i, std::size_t a, std::size_t at_) const;

  // 1x1-bond site acting as the identity on the system Liouville pair.
  static QTensor identity(std::size_t s2);
};

}  // namespace ptsim
