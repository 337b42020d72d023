#include "hetsync/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace hetsync::linalg {

namespace {

using Complex = std::complex<double>;

void require_square(const Matrix& m, const char* what) {
  if (m.rows() != m.cols()) {
    std::ostringstream os;
    os << what << " must be square, got " << m.rows() << "x" << m.cols();
    throw Error(Errc::DimensionMismatch, os.str());
  }
}

struct SchurPair {
  ComplexMatrix t;
  ComplexMatrix u;
};

SchurPair complex_schur(const Matrix& a) {
  Eigen::ComplexSchur<Matrix> schur(a, true);
  if (schur.info() != Eigen::Success) {
    throw Error(Errc::ConvergenceFailure, "complex Schur decomposition did not converge");
  }
  return {schur.matrixT(), schur.matrixU()};
}

// Swaps the adjacent diagonal entries k and k+1 of an upper-triangular T,
// updating the unitary basis U so that A = U T U^H still holds.
void swap_adjacent(ComplexMatrix& t, ComplexMatrix& u, Eigen::Index k) {
  const Complex a = t(k, k);
  const Complex b = t(k, k + 1);
  const Complex d = t(k + 1, k + 1);
  const Complex x1 = b;
  const Complex x2 = d - a;
  const double r = std::hypot(std::abs(x1), std::abs(x2));
  if (r == 0.0) return;  // equal eigenvalues, nothing to reorder
  Eigen::Matrix2cd rot;
  rot << x1 / r, -std::conj(x2) / r,
         x2 / r, std::conj(x1) / r;
  const Eigen::Index n = t.rows();
  t.block(k, 0, 2, n) = rot.adjoint() * t.block(k, 0, 2, n);
  t.block(0, k, n, 2) = t.block(0, k, n, 2) * rot;
  u.block(0, k, n, 2) = u.block(0, k, n, 2) * rot;
  t(k + 1, k) = Complex(0.0, 0.0);
  t(k, k) = d;
  t(k + 1, k + 1) = a;
}

// Solves T Y + Y S = F for upper-triangular T (n x n) and S (m x m).
ComplexMatrix triangular_sylvester(const ComplexMatrix& t, const ComplexMatrix& s,
                                   const ComplexMatrix& f) {
  const Eigen::Index n = t.rows();
  const Eigen::Index m = s.rows();
  ComplexMatrix y(n, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    Eigen::VectorXcd rhs = f.col(k);
    for (Eigen::Index j = 0; j < k; ++j) rhs -= s(j, k) * y.col(j);
    ComplexMatrix shifted = t;
    shifted.diagonal().array() += s(k, k);
    y.col(k) = shifted.triangularView<Eigen::Upper>().solve(rhs);
  }
  return y;
}

double relative_lyapunov_residual(const Matrix& a, const Matrix& q, const Matrix& x) {
  const Matrix res = a.transpose() * x + x * a + q;
  return res.norm() / std::max(1.0, q.norm());
}

}  // namespace

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) {
    throw Error(Errc::NonFinite, std::string(what) + " contains NaN or Inf entries");
  }
}

SpectralInfo spectrum(const Matrix& a) {
  require_square(a, "matrix");
  require_finite(a, "matrix");
  SpectralInfo info;
  if (a.rows() == 0) {
    info.max_real_part = -std::numeric_limits<double>::infinity();
    return info;
  }
  Eigen::EigenSolver<Matrix> solver(a, false);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::ConvergenceFailure, "eigenvalue iteration did not converge");
  }
  const Eigen::VectorXcd ev = solver.eigenvalues();
  info.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  info.max_real_part = -std::numeric_limits<double>::infinity();
  for (const auto& lambda : info.eigenvalues) {
    info.max_real_part = std::max(info.max_real_part, lambda.real());
  }
  return info;
}

bool is_hurwitz(const Matrix& a, double tol) { return spectrum(a).max_real_part < -tol; }

bool is_positive_definite(const Matrix& m) {
  require_square(m, "matrix");
  require_finite(m, "matrix");
  const double scale = std::max(1.0, m.cwiseAbs().maxCoeff());
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * scale) {
    throw Error(Errc::NotSymmetric, "definiteness test needs a symmetric matrix");
  }
  Eigen::SelfAdjointEigenSolver<Matrix> solver(symmetrize(m), Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::ConvergenceFailure, "symmetric eigensolver did not converge");
  }
  const Vector& ev = solver.eigenvalues();
  const double norm2 = ev.cwiseAbs().maxCoeff();
  return ev.minCoeff() > 1e-10 * std::max(1.0, norm2);
}

Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c) {
  require_square(a, "A");
  require_square(b, "B");
  require_finite(a, "A");
  require_finite(b, "B");
  require_finite(c, "C");
  if (c.rows() != a.rows() || c.cols() != b.rows()) {
    throw Error(Errc::DimensionMismatch, "Sylvester right-hand side has the wrong shape");
  }
  const SchurPair sa = complex_schur(a);
  const SchurPair sb = complex_schur(b);

  double separation = std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      separation = std::min(separation, std::abs(sa.t(i, i) + sb.t(j, j)));
    }
  }
  if (separation < 1e-9) {
    std::ostringstream os;
    os << "spectra of A and -B overlap (separation " << separation << ")";
    throw Error(Errc::SpectraOverlap, os.str());
  }

  const ComplexMatrix f = sa.u.adjoint() * c.cast<Complex>() * sb.u;
  const ComplexMatrix y = triangular_sylvester(sa.t, sb.t, f);
  const Matrix x = (sa.u * y * sb.u.adjoint()).real();

  const double residual = (a * x + x * b - c).norm() / std::max(1.0, c.norm());
  if (!(residual <= 1e-9)) {
    std::ostringstream os;
    os << "Sylvester residual " << residual << " exceeds 1e-9";
    throw Error(Errc::IllConditioned, os.str());
  }
  return x;
}

Matrix solve_lyapunov(const Matrix& a, const Matrix& q) {
  require_square(a, "A");
  require_square(q, "Q");
  if (q.rows() != a.rows()) {
    throw Error(Errc::DimensionMismatch, "Lyapunov weight must match A");
  }
  require_finite(q, "Q");
  const SpectralInfo spec = spectrum(a);
  if (spec.max_real_part >= -kHurwitzTol) {
    std::ostringstream os;
    os << "Lyapunov solve needs Hurwitz A (max real part " << spec.max_real_part << ")";
    throw Error(Errc::NotHurwitz, os.str());
  }
  const Matrix qs = symmetrize(q);
  Matrix x;
  try {
    x = symmetrize(solve_sylvester(a.transpose(), a, -qs));
  } catch (const Error& e) {
    if (e.code() == Errc::SpectraOverlap || e.code() == Errc::IllConditioned) {
      throw Error(Errc::IllConditioned, std::string("Lyapunov solve failed: ") + e.what());
    }
    throw;
  }
  const double residual = relative_lyapunov_residual(a, qs, x);
  if (!(residual <= 1e-9)) {
    std::ostringstream os;
    os << "Lyapunov residual " << residual << " exceeds 1e-9";
    throw Error(Errc::IllConditioned, os.str());
  }
  return x;
}

double care_residual(const Matrix& a, const Matrix& b, const Matrix& q, const Matrix& p) {
  const Matrix linear = a.transpose() * p + p * a;
  const Matrix quadratic = p * b * b.transpose() * p;
  const Matrix res = linear - quadratic + q;
  return res.norm() / std::max(1.0, q.norm() + linear.norm() + quadratic.norm());
}

Matrix solve_care(const Matrix& a, const Matrix& b, const Matrix& q) {
  require_square(a, "A");
  require_square(q, "Q");
  const Eigen::Index n = a.rows();
  if (b.rows() != n || q.rows() != n) {
    throw Error(Errc::DimensionMismatch, "CARE operands have inconsistent sizes");
  }
  require_finite(a, "A");
  require_finite(b, "B");
  require_finite(q, "Q");
  const double qscale = std::max(1.0, q.cwiseAbs().maxCoeff());
  if ((q - q.transpose()).cwiseAbs().maxCoeff() > 1e-10 * qscale) {
    throw Error(Errc::NotSymmetric, "CARE weight Q must be symmetric");
  }
  if (!is_stabilizable(a, b)) {
    throw Error(Errc::NotStabilizable, "(A, B) is not stabilizable");
  }

  const Matrix bbt = b * b.transpose();
  Matrix h(2 * n, 2 * n);
  h << a, -bbt, -symmetrize(q), -a.transpose();

  SchurPair schur = complex_schur(h);
  const double axis_tol = 1e-9 * std::max(1.0, h.norm());
  Eigen::Index stable = 0;
  for (Eigen::Index i = 0; i < 2 * n; ++i) {
    const double re = schur.t(i, i).real();
    if (std::abs(re) <= axis_tol) {
      std::ostringstream os;
      os << "Hamiltonian eigenvalue " << schur.t(i, i) << " lies on the imaginary axis";
      throw Error(Errc::NoStabilizingSolution, os.str());
    }
    if (re < 0.0) ++stable;
  }
  if (stable != n) {
    throw Error(Errc::NoStabilizingSolution, "Hamiltonian stable subspace has wrong dimension");
  }

  // Move the stable eigenvalues to the leading block.
  for (Eigen::Index target = 0; target < n; ++target) {
    Eigen::Index k = target;
    while (schur.t(k, k).real() >= 0.0) ++k;
    for (Eigen::Index j = k; j > target; --j) swap_adjacent(schur.t, schur.u, j - 1);
  }

  const ComplexMatrix u11 = schur.u.topLeftCorner(n, n);
  const ComplexMatrix u21 = schur.u.bottomLeftCorner(n, n);
  Eigen::JacobiSVD<ComplexMatrix> svd(u11);
  const auto& sv = svd.singularValues();
  if (sv.size() == 0 || sv(sv.size() - 1) < 1e-12 * sv(0)) {
    throw Error(Errc::NoStabilizingSolution, "stable subspace basis is singular");
  }
  // P U11 = U21  <=>  U11^T P^T = U21^T
  const ComplexMatrix pt = u11.transpose().partialPivLu().solve(u21.transpose());
  Matrix p = symmetrize(pt.transpose().real());

  double residual = care_residual(a, b, q, p);
  for (int step = 0; step < 3 && residual > 1e-14; ++step) {
    const Matrix closed = a - bbt * p;
    if (!is_hurwitz(closed)) break;
    Matrix refined;
    try {
      refined = solve_lyapunov(closed, q + p * bbt * p);
    } catch (const Error&) {
      break;
    }
    const double refined_residual = care_residual(a, b, q, refined);
    if (!(refined_residual < residual)) break;
    p = refined;
    residual = refined_residual;
  }

  if (!is_hurwitz(a - bbt * p)) {
    throw Error(Errc::NoStabilizingSolution, "A - B B^T P is not Hurwitz");
  }
  if (!(residual <= 1e-8)) {
    std::ostringstream os;
    os << "Riccati residual " << residual << " exceeds 1e-8";
    throw Error(Errc::IllConditioned, os.str());
  }
  return p;
}

int rank(const ComplexMatrix& m) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const Vector sv = svd.singularValues();
  if (sv(0) == 0.0) return 0;
  return static_cast<int>((sv.array() > kRankTol * sv(0)).count());
}

int rank(const Matrix& m) { return rank(ComplexMatrix(m.cast<Complex>())); }

double min_relative_singular_value(const ComplexMatrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<ComplexMatrix> svd(m);
  const Vector sv = svd.singularValues();
  if (sv(0) == 0.0) return 0.0;
  return sv(std::min(m.rows(), m.cols()) - 1) / sv(0);
}

bool is_stabilizable(const Matrix& a, const Matrix& b) {
  const Eigen::Index n = a.rows();
  for (const auto& lambda : spectrum(a).eigenvalues) {
    if (lambda.real() < -kHurwitzTol) continue;
    ComplexMatrix hautus(n, n + b.cols());
    hautus << a.cast<Complex>() - lambda * ComplexMatrix::Identity(n, n), b.cast<Complex>();
    if (rank(hautus) < n) return false;
  }
  return true;
}

bool is_detectable(const Matrix& c, const Matrix& a) {
  return is_stabilizable(a.transpose(), c.transpose());
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Matrix block_diag(const std::vector<Matrix>& blocks) {
  Eigen::Index rows = 0;
  Eigen::Index cols = 0;
  for (const auto& blk : blocks) {
    rows += blk.rows();
    cols += blk.cols();
  }
  Matrix out = Matrix::Zero(rows, cols);
  Eigen::Index r = 0;
  Eigen::Index c = 0;
  for (const auto& blk : blocks) {
    out.block(r, c, blk.rows(), blk.cols()) = blk;
    r += blk.rows();
    c += blk.cols();
  }
  return out;
}

}  // namespace hetsync::linalg
