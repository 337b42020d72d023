#include "hetsync/graph.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include <Eigen/Eigenvalues>

namespace hetsync {

using linalg::Matrix;
using linalg::Vector;

CommGraph build_graph(int node_count, const std::vector<WeightedEdge>& edges) {
  if (node_count < 2) {
    throw Error(Errc::InvalidArgument, "communication graph needs at least two nodes");
  }
  std::set<std::pair<int, int>> seen;
  for (const auto& e : edges) {
    if (e.i < 1 || e.i > node_count || e.j < 1 || e.j > node_count) {
      std::ostringstream os;
      os << "edge (" << e.i << ", " << e.j << ") references a node outside 1.." << node_count;
      throw Error(Errc::InvalidArgument, os.str());
    }
    if (e.i == e.j) {
      std::ostringstream os;
      os << "self loop at node " << e.i;
      throw Error(Errc::SelfLoop, os.str());
    }
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) {
      std::ostringstream os;
      os << "edge (" << e.i << ", " << e.j << ") has non-positive weight " << e.weight;
      throw Error(Errc::NonPositiveWeight, os.str());
    }
    if (!seen.emplace(std::min(e.i, e.j), std::max(e.i, e.j)).second) {
      std::ostringstream os;
      os << "duplicate edge (" << e.i << ", " << e.j << ")";
      throw Error(Errc::DuplicateEdge, os.str());
    }
  }

  CommGraph g;
  g.edges_ = edges;
  const auto k = static_cast<Eigen::Index>(edges.size());
  g.adjacency_ = Matrix::Zero(node_count, node_count);
  g.incidence_ = Matrix::Zero(node_count, k);
  g.weights_ = Matrix::Zero(k, k);
  for (Eigen::Index col = 0; col < k; ++col) {
    const auto& e = edges[static_cast<std::size_t>(col)];
    const int lo = std::min(e.i, e.j) - 1;
    const int hi = std::max(e.i, e.j) - 1;
    g.adjacency_(lo, hi) = e.weight;
    g.adjacency_(hi, lo) = e.weight;
    g.incidence_(lo, col) = 1.0;
    g.incidence_(hi, col) = -1.0;
    g.weights_(col, col) = e.weight;
  }
  Matrix degree = g.adjacency_.rowwise().sum().asDiagonal();
  g.laplacian_ = degree - g.adjacency_;

  Eigen::SelfAdjointEigenSolver<Matrix> solver(g.laplacian_, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) {
    throw Error(Errc::ConvergenceFailure, "Laplacian eigensolver did not converge");
  }
  g.eigenvalues_ = solver.eigenvalues();
  // Clamp roundoff so the spectrum starts exactly at zero.
  const double top = std::max(1.0, g.eigenvalues_.cwiseAbs().maxCoeff());
  int zeros = 0;
  for (Eigen::Index i = 0; i < g.eigenvalues_.size(); ++i) {
    if (std::abs(g.eigenvalues_(i)) <= 1e-9 * top) {
      g.eigenvalues_(i) = 0.0;
      ++zeros;
    }
  }
  if (zeros != 1) {
    std::ostringstream os;
    os << "graph is disconnected (" << zeros << " zero Laplacian eigenvalues)";
    throw Error(Errc::Disconnected, os.str());
  }
  return g;
}

Matrix disagreement_lift(const CommGraph& g, int p) {
  if (p < 1) throw Error(Errc::InvalidArgument, "output dimension must be positive");
  const Vector root_w = g.weights().diagonal().cwiseSqrt();
  const Matrix scaled = root_w.asDiagonal() * g.incidence().transpose();
  return linalg::kron(scaled, Matrix::Identity(p, p));
}

}  // namespace hetsync
