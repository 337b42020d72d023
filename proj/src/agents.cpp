#include "hetsync/agents.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <sstream>

namespace hetsync {

using linalg::ComplexMatrix;
using linalg::Matrix;

namespace {

constexpr double kRegularityTol = 1e-10;
constexpr double kImagAxisTol = 1e-9;

void expect_shape(const Matrix& m, Eigen::Index rows, Eigen::Index cols, const std::string& owner,
                  const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream os;
    os << owner << ": " << name << " is " << m.rows() << "x" << m.cols() << ", expected " << rows
       << "x" << cols;
    throw Error(Errc::DimensionMismatch, os.str());
  }
  linalg::require_finite(m, name);
}

std::string format_complex(std::complex<double> z) {
  std::ostringstream os;
  os << z.real();
  if (z.imag() != 0.0) os << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
  return os.str();
}

// Hautus rank test of [A - lambda I, B] at each non-stable eigenvalue of A,
// or at every eigenvalue when `every_mode` is set.
Finding hautus_finding(const char* check, const Matrix& a, const Matrix& b,
                       bool every_mode = false) {
  Finding f{check, 1.0, true, {}};
  const Eigen::Index n = a.rows();
  for (const auto& lambda : linalg::spectrum(a).eigenvalues) {
    if (!every_mode && lambda.real() < -linalg::kHurwitzTol) continue;
    ComplexMatrix pencil(n, n + b.cols());
    pencil << a.cast<std::complex<double>>() - lambda * ComplexMatrix::Identity(n, n),
        b.cast<std::complex<double>>();
    const int r = linalg::rank(pencil);
    f.residual = std::min(f.residual, linalg::min_relative_singular_value(pencil));
    if (r < n && f.pass) {
      f.pass = false;
      std::ostringstream os;
      os << "Hautus rank " << r << " < " << n << " at eigenvalue " << format_complex(lambda);
      f.detail = os.str();
    }
  }
  if (f.pass) f.detail = "full Hautus rank at every tested eigenvalue";
  return f;
}

Finding identity_finding(const char* check, const Matrix& value, const Matrix& expected) {
  const double residual = (value - expected).cwiseAbs().maxCoeff();
  Finding f{check, residual, residual <= kRegularityTol, {}};
  std::ostringstream os;
  os << "max deviation " << residual;
  f.detail = os.str();
  return f;
}

}  // namespace

bool ValidationReport::passed() const {
  return std::all_of(findings.begin(), findings.end(), [](const Finding& f) { return f.pass; });
}

const Finding* ValidationReport::first_failure() const {
  for (const auto& f : findings) {
    if (!f.pass) return &f;
  }
  return nullptr;
}

ValidationReport validate_agent(const AgentModel& m) {
  const std::string owner = m.label.empty() ? std::string("agent") : m.label;
  const Eigen::Index n = m.A.rows();
  if (n == 0) throw Error(Errc::DimensionMismatch, owner + ": A is empty");
  const Eigen::Index inputs = m.B.cols();
  const Eigen::Index dist = m.E.cols();
  const Eigen::Index meas = m.C1.rows();
  const Eigen::Index outs = m.C2.rows();
  expect_shape(m.A, n, n, owner, "A");
  expect_shape(m.B, n, inputs, owner, "B");
  expect_shape(m.E, n, dist, owner, "E");
  expect_shape(m.C1, meas, n, owner, "C1");
  expect_shape(m.D1, meas, dist, owner, "D1");
  expect_shape(m.C2, outs, n, owner, "C2");
  expect_shape(m.D2, outs, inputs, owner, "D2");

  ValidationReport report;
  report.subject = owner;
  report.findings.push_back(hautus_finding("stabilizable(A,B)", m.A, m.B));
  report.findings.push_back(hautus_finding("detectable(C1,A)", m.A.transpose(), m.C1.transpose()));
  report.findings.push_back(
      identity_finding("D1*E^T = 0", m.D1 * m.E.transpose(), Matrix::Zero(meas, n)));
  report.findings.push_back(
      identity_finding("D2^T*C2 = 0", m.D2.transpose() * m.C2, Matrix::Zero(inputs, n)));
  report.findings.push_back(
      identity_finding("D1*D1^T = I", m.D1 * m.D1.transpose(), Matrix::Identity(meas, meas)));
  report.findings.push_back(
      identity_finding("D2^T*D2 = I", m.D2.transpose() * m.D2, Matrix::Identity(inputs, inputs)));
  return report;
}

ValidationReport validate_exosystem(const Exosystem& e) {
  const Eigen::Index r = e.S.rows();
  if (r == 0 || e.S.cols() != r) {
    throw Error(Errc::DimensionMismatch, "exosystem: S must be square and non-empty");
  }
  if (e.R.cols() != r) {
    std::ostringstream os;
    os << "exosystem: R has " << e.R.cols() << " columns, expected " << r;
    throw Error(Errc::DimensionMismatch, os.str());
  }
  linalg::require_finite(e.S, "S");
  linalg::require_finite(e.R, "R");

  ValidationReport report;
  report.subject = "exosystem";

  Finding axis{"spectrum(S) on imaginary axis", 0.0, true, {}};
  for (const auto& lambda : linalg::spectrum(e.S).eigenvalues) {
    axis.residual = std::max(axis.residual, std::abs(lambda.real()));
    if (std::abs(lambda.real()) > kImagAxisTol && axis.pass) {
      axis.pass = false;
      axis.detail = "eigenvalue " + format_complex(lambda) + " is off the imaginary axis";
    }
  }
  if (axis.pass) axis.detail = "all eigenvalues on the imaginary axis";
  report.findings.push_back(axis);

  report.findings.push_back(
      hautus_finding("observable(R,S)", e.S.transpose(), e.R.transpose(), true));
  return report;
}

void require_common_output_dim(const std::vector<AgentModel>& agents, const Exosystem& e) {
  for (const auto& a : agents) {
    if (a.output_dim() != e.output_dim()) {
      std::ostringstream os;
      os << a.label << ": synchronized output dimension " << a.output_dim()
         << " differs from exosystem output dimension " << e.output_dim();
      throw Error(Errc::DimensionMismatch, os.str());
    }
  }
}

}  // namespace hetsync
