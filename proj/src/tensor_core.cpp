#include "ptsim/tensor_core.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include <lapacke.h>

namespace ptsim {

std::size_t liouville_index(std::size_t nu, std::size_t mu, std::size_t n) {
  if (nu >= n || mu >= n) {
    throw ArgumentError("liouville_index: index (" + std::to_string(nu) + "," +
                        std::to_string(mu) + ") out of range for dim " +
                        std::to_string(n));
  }
  return nu * n + mu;
}

std::pair<std::size_t, std::size_t> liouville_unindex(std::size_t alpha, std::size_t n) {
  if (n == 0 || alpha >= n * n) {
    throw ArgumentError("liouville_unindex: index " + std::to_string(alpha) +
                        " out of range for dim " + std::to_string(n));
  }
  return {alpha / n, alpha % n};
}

CVec vec(const CMat& rho) {
  CVec v(rho.size());
  for (Eigen::Index i = 0; i < rho.rows(); ++i)
    for (Eigen::Index j = 0; j < rho.cols(); ++j) v(i * rho.cols() + j) = rho(i, j);
  return v;
}

CMat unvec(const CVec& v) {
  const auto n = static_cast<Eigen::Index>(std::llround(std::sqrt(double(v.size()))));
  if (n * n != v.size()) throw ArgumentError("unvec: length is not a perfect square");
  CMat rho(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) rho(i, j) = v(i * n + j);
  return rho;
}

CMat kron(const CMat& a, const CMat& b) {
  CMat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CMat matrix_exponential(const CMat& a) {
  if (a.rows() != a.cols()) {
    throw ArgumentError("matrix_exponential: input is " + std::to_string(a.rows()) +
                        "x" + std::to_string(a.cols()) + ", not square");
  }
  // Scaling-and-squaring with a diagonal Pade(13) approximant (Higham's
  // coefficients), computed over a column-major copy for Eigen solve speed.
  using MatC = Eigen::MatrixXcd;
  MatC A = a;
  const double nrm = A.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  int squarings = 0;
  const double theta13 = 5.371920351148152;
  if (nrm > theta13) {
    squarings = std::max(0, int(std::ceil(std::log2(nrm / theta13))));
    A /= std::pow(2.0, squarings);
  }
  static const double b[] = {64764752532480000., 32382376266240000., 7771770303897600.,
                             1187353796428800.,  129060195264000.,   10559470521600.,
                             670442572800.,      33522128640.,       1323241920.,
                             40840800.,          960960.,            16380.,
                             182.,               1.};
  const Eigen::Index n = A.rows();
  const MatC I = MatC::Identity(n, n);
  const MatC A2 = A * A;
  const MatC A4 = A2 * A2;
  const MatC A6 = A2 * A4;
  MatC U = A * (A6 * (b[13] * A6 + b[11] * A4 + b[9] * A2) +
                b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I);
  MatC V = A6 * (b[12] * A6 + b[10] * A4 + b[8] * A2) +
           b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I;
  MatC num = V + U;
  MatC den = V - U;
  MatC R = den.partialPivLu().solve(num);
  for (int s = 0; s < squarings; ++s) R = R * R;
  return CMat(R);
}

namespace {

// LAPACK thin SVD of a row-major matrix; zgesdd with zgesvd fallback.
void full_svd(const CMat& a, CMat& u, RVec& s, CMat& vt) {
  const lapack_int rows = static_cast<lapack_int>(a.rows());
  const lapack_int cols = static_cast<lapack_int>(a.cols());
  const lapack_int k = std::min(rows, cols);
  CMat work = a;  // LAPACK destroys the input
  u.resize(rows, k);
  s.resize(k);
  vt.resize(k, cols);
  lapack_int info = LAPACKE_zgesdd(
      LAPACK_ROW_MAJOR, 'S', rows, cols,
      reinterpret_cast<lapack_complex_double*>(work.data()), cols, s.data(),
      reinterpret_cast<lapack_complex_double*>(u.data()), k,
      reinterpret_cast<lapack_complex_double*>(vt.data()), cols);
  if (info != 0) {
    work = a;
    std::vector<double> superb(std::max<lapack_int>(1, k - 1));
    info = LAPACKE_zgesvd(
        LAPACK_ROW_MAJOR, 'S', 'S', rows, cols,
        reinterpret_cast<lapack_complex_double*>(work.data()), cols, s.data(),
        reinterpret_cast<lapack_complex_double*>(u.data()), k,
        reinterpret_cast<lapack_complex_double*>(vt.data()), cols, superb.data());
  }
  if (info != 0) {
    throw NumericalError("SVD failed to converge on a " + std::to_string(rows) +
                         "x" + std::to_string(cols) + " matrix (info=" +
                         std::to_string(info) + ")");
  }
}

}  // namespace

SVDResult truncated_svd(const CMat& a, double epsilon) {
  if (a.size() == 0) throw ArgumentError("truncated_svd: empty matrix");
  if (epsilon < 0) throw ArgumentError("truncated_svd: negative threshold");

  CMat u, vt;
  RVec s;
  full_svd(a, u, s, vt);

  const double sigma1 = s.size() ? s(0) : 0.0;
  std::size_t keep = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > epsilon * sigma1) ++keep;
  keep = std::max<std::size_t>(keep, 1);  // zero matrix keeps one zero triplet

  SVDResult r;
  r.k_eff = keep;
  r.u = u.leftCols(keep);
  r.singular_values = s.head(keep);
  r.v_dag = vt.topRows(keep);
  r.discarded_max = (static_cast<Eigen::Index>(keep) < s.size()) ? s(keep) : 0.0;
  return r;
}

QTensor::QTensor(std::size_t dout, std::size_t din, std::size_t s2)
    : d_out(dout), d_in(din), n_sys2(s2) {
  const auto root = static_cast<std::size_t>(std::llround(std::sqrt(double(s2))));
  if (root * root != s2)
    throw ArgumentError("QTensor: n_sys2 = " + std::to_string(s2) +
                        " is not a perfect square");
  if (dout == 0 || din == 0) throw ArgumentError("QTensor: zero bond dimension");
  m = CMat::Zero(dout, s2 * s2 * din);
}

Cplx& QTensor::at(std::size_t o, std::size_t i, std::size_t a, std::size_t at_) {
  return m(o, (a * n_sys2 + at_) * d_in + i);
}

Cplx QTensor::at(std::size_t o, std::size_t i, std::size_t a, std::size_t at_) const {
  return m(o, (a * n_sys2 + at_) * d_in + i);
}

QTensor QTensor::identity(std::size_t s2) {
  QTensor q(1, 1, s2);
  for (std::size_t a = 0; a < s2; ++a) q.at(0, 0, a, a) = 1.0;
  return q;
}

}  // namespace ptsim
