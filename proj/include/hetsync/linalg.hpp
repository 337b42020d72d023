#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

#include "hetsync/error.hpp"

namespace hetsync::linalg {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Real parts must stay below -kHurwitzTol for a matrix to count as Hurwitz.
inline constexpr double kHurwitzTol = 1e-10;
/// Relative threshold on singular values used by every rank decision.
inline constexpr double kRankTol = 1e-9;

struct SpectralInfo {
  std::vector<std::complex<double>> eigenvalues;
  double max_real_part = 0.0;
};

/// Throws NonFinite if any entry is NaN or Inf. `what` names the operand.
void require_finite(const Matrix& m, const char* what);

/// Eigenvalues of a general real square matrix (Hessenberg QR).
SpectralInfo spectrum(const Matrix& a);

bool is_hurwitz(const Matrix& a, double tol = kHurwitzTol);

/// Strict definiteness test. Eigenvalues must exceed 1e-10 * max(1, |M|_2).
/// Throws NotSymmetric if M deviates from M^T by more than 1e-10 (scaled).
bool is_positive_definite(const Matrix& m);

/// Solves A^T X + X A + Q = 0 for Hurwitz A (Bartels-Stewart).
Matrix solve_lyapunov(const Matrix& a, const Matrix& q);

/// Solves A X + X B = C (Bartels-Stewart on complex Schur forms).
Matrix solve_sylvester(const Matrix& a, const Matrix& b, const Matrix& c);

/// Stabilizing solution of A^T P + P A - P B B^T P + Q = 0.
///
/// The stable invariant subspace of the Hamiltonian [[A, -BB^T], [-Q, -A^T]]
/// is extracted from a reordered complex Schur form; P = U21 U11^{-1}. One
/// or two Newton (Kleinman) steps polish the result when the residual is
/// above roundoff level.
Matrix solve_care(const Matrix& a, const Matrix& b, const Matrix& q);

/// Frobenius residual of the CARE relative to the size of its terms,
/// |R|_F / max(1, |Q|_F + |A^T P + P A|_F + |P B B^T P|_F). Dividing by |Q|
/// alone cannot be met in double precision once |P| grows past ~1e4.
double care_residual(const Matrix& a, const Matrix& b, const Matrix& q,
                     const Matrix& p);

/// Numerical rank with singular values above kRankTol * sigma_max.
int rank(const ComplexMatrix& m);
int rank(const Matrix& m);

/// Smallest singular value divided by the largest (0 for empty input).
double min_relative_singular_value(const ComplexMatrix& m);

/// Hautus test: rank [A - lambda I, B] = n for every eigenvalue with
/// Re(lambda) >= -kHurwitzTol.
bool is_stabilizable(const Matrix& a, const Matrix& b);

/// (C, A) detectable, the dual of is_stabilizable.
bool is_detectable(const Matrix& c, const Matrix& a);

Matrix kron(const Matrix& a, const Matrix& b);
Matrix block_diag(const std::vector<Matrix>& blocks);

inline Matrix symmetrize(const Matrix& m) { return 0.5 * (m + m.transpose()); }

}  // namespace hetsync::linalg
