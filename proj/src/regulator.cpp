#include "hetsync/regulator.hpp"

#include <algorithm>
#include <sstream>

#include <Eigen/QR>

namespace hetsync {

using linalg::Matrix;
using linalg::Vector;

RegulatorSolution solve_regulator(const AgentModel& m, const Exosystem& e) {
  const Eigen::Index n = m.A.rows();
  const Eigen::Index inputs = m.B.cols();
  const Eigen::Index p = e.R.rows();
  const Eigen::Index r = e.S.rows();
  if (m.C2.rows() != p || m.D2.rows() != p) {
    throw Error(Errc::DimensionMismatch, m.label + ": output dimension differs from exosystem");
  }

  const Matrix eye_r = Matrix::Identity(r, r);
  const Matrix eye_n = Matrix::Identity(n, n);
  // Column-major vec: vec(A Pi) = (I_r (x) A) vec(Pi), vec(Pi S) = (S^T (x) I_n) vec(Pi).
  Matrix lhs = Matrix::Zero(n * r + p * r, n * r + inputs * r);
  lhs.topLeftCorner(n * r, n * r) = linalg::kron(eye_r, m.A) - linalg::kron(e.S.transpose(), eye_n);
  lhs.topRightCorner(n * r, inputs * r) = linalg::kron(eye_r, m.B);
  lhs.bottomLeftCorner(p * r, n * r) = linalg::kron(eye_r, m.C2);
  lhs.bottomRightCorner(p * r, inputs * r) = linalg::kron(eye_r, m.D2);

  Vector rhs = Vector::Zero(n * r + p * r);
  rhs.tail(p * r) = e.R.reshaped();

  Eigen::CompleteOrthogonalDecomposition<Matrix> cod(lhs);
  cod.setThreshold(linalg::kRankTol);
  const Vector unknowns = cod.solve(rhs);

  RegulatorSolution sol;
  sol.Pi = unknowns.head(n * r).reshaped(n, r);
  sol.Gamma = unknowns.tail(inputs * r).reshaped(inputs, r);
  sol.residual_state = (m.A * sol.Pi + m.B * sol.Gamma - sol.Pi * e.S).norm();
  sol.residual_output = (m.C2 * sol.Pi + m.D2 * sol.Gamma - e.R).norm();

  const bool state_ok = sol.residual_state <= 1e-8 * std::max(1.0, sol.Pi.norm());
  const bool output_ok = sol.residual_output <= 1e-8 * std::max(1.0, e.R.norm());
  if (!state_ok || !output_ok) {
    std::ostringstream os;
    os << m.label << ": regulator equations have no solution (residuals " << sol.residual_state
       << ", " << sol.residual_output << ")";
    throw Error(Errc::NoSolution, os.str());
  }
  return sol;
}

}  // namespace hetsync
