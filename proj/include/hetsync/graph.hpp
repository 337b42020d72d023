#pragma once

#include <vector>

#include "hetsync/linalg.hpp"

namespace hetsync {

/// Undirected edge between 1-based node labels.
struct WeightedEdge {
  int i = 0;
  int j = 0;
  double weight = 1.0;
};

/// Connected, simple, undirected weighted communication graph.
///
/// Immutable once built. The incidence matrix orients every edge so that the
/// lower-indexed node carries +1, which gives L = R W R^T.
class CommGraph {
 public:
  int node_count() const { return static_cast<int>(adjacency_.rows()); }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<WeightedEdge>& edges() const { return edges_; }

  const linalg::Matrix& adjacency() const { return adjacency_; }
  const linalg::Matrix& laplacian() const { return laplacian_; }
  const linalg::Matrix& incidence() const { return incidence_; }
  const linalg::Matrix& weights() const { return weights_; }

  /// Laplacian eigenvalues in ascending order; the first one is zero.
  const linalg::Vector& eigenvalues() const { return eigenvalues_; }
  double lambda_max() const { return eigenvalues_(eigenvalues_.size() - 1); }
  double algebraic_connectivity() const { return eigenvalues_(1); }

 private:
  friend CommGraph build_graph(int node_count, const std::vector<WeightedEdge>& edges);
  CommGraph() = default;

  std::vector<WeightedEdge> edges_;
  linalg::Matrix adjacency_;
  linalg::Matrix laplacian_;
  linalg::Matrix incidence_;
  linalg::Matrix weights_;
  linalg::Vector eigenvalues_;
};

/// Throws SelfLoop, DuplicateEdge, NonPositiveWeight, Disconnected, or
/// InvalidArgument (node label out of range, fewer than two nodes).
CommGraph build_graph(int node_count, const std::vector<WeightedEdge>& edges);

/// W^{1/2} R^T (x) I_p, mapping stacked agent outputs to weighted edge
/// disagreements. Its Gram matrix is L (x) I_p.
linalg::Matrix disagreement_lift(const CommGraph& g, int p);

}  // namespace hetsync
