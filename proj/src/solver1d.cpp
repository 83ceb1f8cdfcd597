#include "ptsim/solver1d.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>
#include <vector>

#include <lapacke.h>

namespace ptsim {

BoundStateSet solve_bound_states(const std::function<double(double)>& v,
                                 const Grid1D& grid, std::size_t m) {
  if (!v) throw ArgumentError("solve_bound_states: no potential given");
  if (grid.n_x < 3 || grid.dx <= 0)
    throw ArgumentError("solve_bound_states: invalid grid");
  if (m < 1 || m > grid.n_x)
    throw ArgumentError("solve_bound_states: requested " + std::to_string(m) +
                        " states on a grid of " + std::to_string(grid.n_x) +
                        " points");

  const lapack_int n = static_cast<lapack_int>(grid.n_x);
  const lapack_int m_req = static_cast<lapack_int>(m);
  const double inv_dx2 = 1.0 / (grid.dx * grid.dx);

  std::vector<double> diag(grid.n_x), off(grid.n_x, -inv_dx2);
  for (std::size_t j = 0; j < grid.n_x; ++j)
    diag[j] = 2.0 * inv_dx2 + v(grid.x0 + double(j) * grid.dx);

  RVec w(grid.n_x);
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> z(grid.n_x, m);
  std::vector<lapack_int> isuppz(2 * std::max<std::size_t>(1, m));
  lapack_int found = 0;
  const lapack_int info = LAPACKE_dstevr(
      LAPACK_ROW_MAJOR, 'V', 'I', n, diag.data(), off.data(), 0.0, 0.0, 1, m_req,
      0.0, &found, w.data(), z.data(), m_req, isuppz.data());
  if (info != 0 || found < m_req)
    throw NumericalError("solve_bound_states: tridiagonal eigensolver failed (info=" +
                         std::to_string(info) + ")");

  BoundStateSet out;
  out.grid = grid;
  out.energies = w.head(m_req);
  out.wavefunctions.reserve(m);
  for (std::size_t j = 0; j < m; ++j) {
    RVec psi = z.col(j);
    psi /= std::sqrt(psi.squaredNorm() * grid.dx);
    // Deterministic sign: first component above noise level is positive.
    const double peak = psi.cwiseAbs().maxCoeff();
    for (Eigen::Index i = 0; i < psi.size(); ++i) {
      if (std::abs(psi(i)) > 1e-8 * peak) {
        if (psi(i) < 0) psi = -psi;
        break;
      }
    }
    out.wavefunctions.push_back(std::move(psi));
  }

  out.x_elements.resize(m, m);
  RVec xg(grid.n_x);
  for (std::size_t j = 0; j < grid.n_x; ++j) xg(j) = grid.x0 + double(j) * grid.dx;
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      const double val =
          (out.wavefunctions[i].array() * xg.array() * out.wavefunctions[j].array())
              .sum() *
          grid.dx;
      out.x_elements(i, j) = val;
      out.x_elements(j, i) = val;
    }
  return out;
}

std::function<double(double)> morse_potential(double lambda) {
  if (lambda <= 0) throw ArgumentError("morse_potential: lambda must be positive");
  const double l2 = lambda * lambda;
  return [l2](double x) { return l2 * (std::exp(-2.0 * x) - 2.0 * std::exp(-x)); };
}

std::size_t morse_bound_state_count(double lambda) {
  if (lambda <= 0.5) return 0;
  return static_cast<std::size_t>(std::floor(lambda + 0.5));
}

BoundStateSet solve_morse_bound_states(double lambda, std::size_t m) {
  const std::size_t n_bound = morse_bound_state_count(lambda);
  if (m > n_bound)
    throw ArgumentError("solve_morse_bound_states: requested " + std::to_string(m) +
                        " states but lambda = " + std::to_string(lambda) + " binds " +
                        std::to_string(n_bound));
  Grid1D grid;
  grid.x0 = -2.0;
  grid.dx = 0.005;
  grid.n_x = static_cast<std::size_t>(std::llround((20.0 - (-2.0)) / grid.dx)) + 1;
  BoundStateSet out = solve_bound_states(morse_potential(lambda), grid, m);
  for (Eigen::Index j = 0; j < out.energies.size(); ++j)
    if (out.energies(j) >= 0)
      throw NumericalError("solve_morse_bound_states: state " + std::to_string(j) +
                           " is not bound on this grid");
  return out;
}

std::pair<RVec, RMat> morse_scaled_elements(const BoundStateSet& bound, double lambda) {
  if (bound.energies.size() < 2)
    throw ArgumentError("morse_scaled_elements: need at least two states");
  const double gap = bound.energies(1) - bound.energies(0);
  if (gap <= 0) throw NumericalError("morse_scaled_elements: non-positive level gap");
  RVec e = (bound.energies.array() - bound.energies(0)) / gap;
  RMat x = std::sqrt(lambda) * bound.x_elements;
  // The per-state sign convention of solve_bound_states fixes each eigenvector
  // independently, which can leave nearest-neighbour elements with alternating
  // signs. Couplings follow the boson-ladder convention <j+1|x|j> >= 0, so flip
  // state signs cumulatively to restore a non-negative ladder.
  const Eigen::Index m = x.rows();
  RVec sign = RVec::Ones(m);
  for (Eigen::Index j = 1; j < m; ++j)
    sign(j) = (x(j - 1, j) < 0.0) ? -sign(j - 1) : sign(j - 1);
  x = sign.asDiagonal() * x * sign.asDiagonal();
  return {std::move(e), std::move(x)};
}

std::function<double(double)> potential_from_file(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("potential_from_file: cannot open " + path);
  std::vector<std::pair<double, double>> pts;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(f, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::istringstream ss(line);
    double x = 0, val = 0;
    if (!(ss >> x >> val))
      throw ConfigError("potential_from_file: " + path + ":" + std::to_string(lineno) +
                        ": expected two numeric columns");
    pts.emplace_back(x, val);
  }
  if (pts.size() < 2)
    throw ConfigError("potential_from_file: " + path + ": need at least two points");
  std::sort(pts.begin(), pts.end());
  for (std::size_t i = 1; i < pts.size(); ++i)
    if (pts[i].first == pts[i - 1].first)
      throw ConfigError("potential_from_file: " + path + ": duplicate x = " +
                        std::to_string(pts[i].first));
  // Linear interpolation, held constant outside the tabulated range.
  return [pts](double x) {
    if (x <= pts.front().first) return pts.front().second;
    if (x >= pts.back().first) return pts.back().second;
    auto hi = std::lower_bound(pts.begin(), pts.end(), std::make_pair(x, -1e300));
    const auto lo = hi - 1;
    const double t = (x - lo->first) / (hi->first - lo->first);
    return (1.0 - t) * lo->second + t * hi->second;
  };
}

}  // namespace ptsim
