#include "ptsim/propagators.hpp"

#include <cmath>

namespace ptsim {

CMat liouvillian(const CMat& h, const std::vector<std::pair<CMat, double>>& dissipators) {
  if (h.rows() != h.cols()) throw ArgumentError("liouvillian: Hamiltonian not square");
  const Eigen::Index n = h.rows();
  const CMat id = CMat::Identity(n, n);
  const Cplx mi(0.0, -1.0);
  CMat l = mi * (kron(h, id) - kron(id, h.transpose()));
  for (const auto& [op, rate] : dissipators) {
    if (op.rows() != n || op.cols() != n) {
      throw ArgumentError("liouvillian: dissipator is " + std::to_string(op.rows()) +
                          "x" + std::to_string(op.cols()) + " but Hamiltonian dim is " +
                          std::to_string(n));
    }
    if (rate < 0) throw ArgumentError("liouvillian: negative dissipator rate");
    const CMat oo = op.adjoint() * op;
    l += rate * (kron(op, op.conjugate()) -
                 0.5 * (kron(oo, id) + kron(id, oo.transpose())));
  }
  return l;
}

Superoperator free_step_propagator(const SystemSpec& sys, double dt, double t_mid) {
  if (dt <= 0) throw ArgumentError("free_step_propagator: dt must be positive");
  const CMat h = sys.hamiltonian ? sys.hamiltonian(t_mid)
                                 : CMat(CMat::Zero(sys.dim, sys.dim));
  Superoperator s;
  s.dim = sys.dim * sys.dim;
  s.matrix = matrix_exponential(CMat(liouvillian(h, sys.dissipators) * dt));
  return s;
}

Superoperator mode_half_propagator(const ModeSpec& mode, double dt, double t_mid) {
  if (dt <= 0) throw ArgumentError("mode_half_propagator: dt must be positive");
  const std::size_t joint = mode.sys_dim * mode.mode_dim;
  const CMat h = mode.joint_hamiltonian ? mode.joint_hamiltonian(t_mid)
                                        : CMat(CMat::Zero(joint, joint));
  if (static_cast<std::size_t>(h.rows()) != joint) {
    throw ArgumentError("mode_half_propagator: joint Hamiltonian dim " +
                        std::to_string(h.rows()) + " != sys_dim*mode_dim = " +
                        std::to_string(joint));
  }
  std::vector<std::pair<CMat, double>> embedded;
  embedded.reserve(mode.mode_dissipators.size());
  const CMat id_s = CMat::Identity(mode.sys_dim, mode.sys_dim);
  for (const auto& [op, rate] : mode.mode_dissipators) {
    if (static_cast<std::size_t>(op.rows()) != mode.mode_dim ||
        static_cast<std::size_t>(op.cols()) != mode.mode_dim) {
      throw ArgumentError("mode_half_propagator: mode dissipator dim mismatch");
    }
    embedded.emplace_back(kron(id_s, op), rate);
  }
  Superoperator s;
  s.dim = joint * joint;
  s.matrix = matrix_exponential(CMat(liouvillian(h, embedded) * (0.5 * dt)));
  return s;
}

CMat thermal_state(const CMat& h_mode, double temperature) {
  if (h_mode.rows() != h_mode.cols()) throw ArgumentError("thermal_state: not square");
  const Eigen::Index m = h_mode.rows();
  const Eigen::MatrixXcd h_col = h_mode;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h_col);
  const RVec e = es.eigenvalues();
  const Eigen::MatrixXcd v = es.eigenvectors();
  RVec w = RVec::Zero(m);
  if (temperature <= 0.0) {
    // Uniform mixture over the (numerically) degenerate ground space.
    const double scale = std::max(1.0, e.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < m; ++i)
      if (e(i) - e(0) <= 1e-12 * scale) w(i) = 1.0;
  } else {
    for (Eigen::Index i = 0; i < m; ++i) w(i) = std::exp(-(e(i) - e(0)) / temperature);
  }
  w /= w.sum();
  Eigen::MatrixXcd rho = v * w.asDiagonal() * v.adjoint();
  return CMat(rho);
}

CMat boson_annihilation(std::size_t mode_dim) {
  CMat a = CMat::Zero(mode_dim, mode_dim);
  for (std::size_t n = 0; n + 1 < mode_dim; ++n) a(n, n + 1) = std::sqrt(double(n + 1));
  return a;
}

CMat boson_number(std::size_t mode_dim) {
  CMat n = CMat::Zero(mode_dim, mode_dim);
  for (std::size_t k = 0; k < mode_dim; ++k) n(k, k) = double(k);
  return n;
}

CMat fock_insertion(std::size_t mode_dim) {
  if (mode_dim < 2) throw ArgumentError("fock_insertion: mode_dim must be >= 2");
  const CMat a = boson_annihilation(mode_dim);
  const CMat adag = a.adjoint();
  // rho -> a^+ rho a, i.e. kron(a^+, a^T) in the row-major vectorization.
  return kron(adag, a.transpose());
}

}  // namespace ptsim
