#include "doctest.h"

#include <cmath>

#include "hetsync/graph.hpp"
#include "support/oracles.hpp"

using namespace hetsync;
using linalg::Matrix;

namespace {

std::vector<WeightedEdge> cycle(int n, double w = 1.0) {
  std::vector<WeightedEdge> e;
  for (int i = 1; i < n; ++i) e.push_back({i, i + 1, w});
  e.push_back({1, n, w});
  return e;
}

// Laplacian built entry by entry from the edge list.
Matrix laplacian_by_hand(int n, const std::vector<WeightedEdge>& edges) {
  Matrix l = Matrix::Zero(n, n);
  for (const auto& e : edges) {
    l(e.i - 1, e.i - 1) += e.weight;
    l(e.j - 1, e.j - 1) += e.weight;
    l(e.i - 1, e.j - 1) -= e.weight;
    l(e.j - 1, e.i - 1) -= e.weight;
  }
  return l;
}

Errc code_of(int n, const std::vector<WeightedEdge>& edges) {
  try {
    build_graph(n, edges);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("expected an hetsync::Error");
  return Errc::InvalidArgument;
}

}  // namespace

TEST_CASE("unit six-cycle") {
  const CommGraph g = build_graph(6, cycle(6));
  CHECK(g.node_count() == 6);
  CHECK(g.edge_count() == 6);
  CHECK(std::abs(g.lambda_max() - 4.0) <= 1e-10);
  CHECK(g.eigenvalues()(0) == 0.0);
  // Eigenvalues of the n-cycle are 2 - 2 cos(2 pi k / n).
  CHECK(g.algebraic_connectivity() == doctest::Approx(1.0));
  CHECK((g.laplacian() - laplacian_by_hand(6, cycle(6))).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("single edge") {
  const CommGraph g = build_graph(2, {{1, 2, 1.0}});
  CHECK(g.laplacian() == Matrix{{1, -1}, {-1, 1}});
  CHECK(g.lambda_max() == doctest::Approx(2.0));
  CHECK(disagreement_lift(g, 1) == Matrix{{1, -1}});
  const Matrix lift = disagreement_lift(build_graph(6, cycle(6)), 2);
  CHECK(lift.rows() == 12);
  CHECK(lift.cols() == 12);
}

TEST_CASE("small graphs with known spectra") {
  CHECK(build_graph(2, {{1, 2, 3.0}}).lambda_max() == doctest::Approx(6.0));
  const CommGraph path = build_graph(4, {{1, 2, 1}, {2, 3, 1}, {3, 4, 1}});
  CHECK(path.lambda_max() == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
  std::vector<WeightedEdge> complete;
  for (int i = 1; i <= 6; ++i)
    for (int j = i + 1; j <= 6; ++j) complete.push_back({i, j, 1.0});
  CHECK(build_graph(6, complete).lambda_max() == doctest::Approx(6.0).epsilon(1e-12));
}

TEST_CASE("incidence, weights and lift identities on random graphs") {
  oracle::Random rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const int n = rng.integer(2, 8);
    std::vector<WeightedEdge> edges;
    for (int i = 2; i <= n; ++i) edges.push_back({rng.integer(1, i - 1), i, rng.uniform(0.1, 3.0)});
    for (int i = 1; i <= n; ++i)
      for (int j = i + 2; j <= n; ++j)
        if (rng.uniform(0, 1) < 0.2) {
          bool present = false;
          for (const auto& e : edges) present |= (e.i == i && e.j == j) || (e.i == j && e.j == i);
          if (!present) edges.push_back({j, i, rng.uniform(0.1, 3.0)});
        }
    const CommGraph g = build_graph(n, edges);
    const Matrix& r = g.incidence();
    CHECK((r * g.weights() * r.transpose() - g.laplacian()).cwiseAbs().maxCoeff() <= 1e-12);
    CHECK((g.laplacian() - laplacian_by_hand(n, edges)).cwiseAbs().maxCoeff() <= 1e-12);

    const Matrix gap = g.lambda_max() * Matrix::Identity(n, n) - g.laplacian();
    CHECK(Eigen::SelfAdjointEigenSolver<Matrix>(gap).eigenvalues().minCoeff() >= -1e-12);

    const int p = rng.integer(1, 3);
    const Matrix m = disagreement_lift(g, p);
    CHECK((m.transpose() * m - oracle::kron(g.laplacian(), Matrix::Identity(p, p))).cwiseAbs().maxCoeff() <=
          1e-12);
  }
}

TEST_CASE("edge orientation does not change the Laplacian") {
  const CommGraph a = build_graph(3, {{1, 2, 2.0}, {2, 3, 0.5}});
  const CommGraph b = build_graph(3, {{2, 1, 2.0}, {3, 2, 0.5}});
  CHECK(a.laplacian() == b.laplacian());
  CHECK(a.incidence() == b.incidence());
  CHECK(a.incidence()(0, 0) == 1.0);
}

TEST_CASE("invalid graphs are rejected") {
  CHECK(code_of(1, {}) == Errc::InvalidArgument);
  CHECK(code_of(3, {{1, 4, 1}}) == Errc::InvalidArgument);
  CHECK(code_of(3, {{1, 1, 1}, {1, 2, 1}, {2, 3, 1}}) == Errc::SelfLoop);
  CHECK(code_of(3, {{1, 2, 1}, {2, 1, 1}, {2, 3, 1}}) == Errc::DuplicateEdge);
  CHECK(code_of(3, {{1, 2, 0}, {2, 3, 1}}) == Errc::NonPositiveWeight);
  CHECK(code_of(3, {{1, 2, -1}, {2, 3, 1}}) == Errc::NonPositiveWeight);
  CHECK(code_of(4, {{1, 2, 1}, {3, 4, 1}}) == Errc::Disconnected);
}
