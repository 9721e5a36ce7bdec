#pragma once

// Credal ranking: pairwise posterior confidence that one item outranks
// another, and its Graphviz rendering.

#include <string>
#include <vector>

#include <Eigen/Dense>

namespace credal_mcdm {

struct CredalRanking {
  std::vector<std::string> labels;
  Eigen::MatrixXd confidence;  // (i, j): share of draws with item i above item j; 0.5 on the diagonal
  Eigen::VectorXd means;

  /// Item indices by descending mean; ties keep input order.
  std::vector<Eigen::Index> order() const;
};

/// Fraction of rows of `draws` (Q x n) where column i exceeds column j; exact
/// ties count one half.
double credal_confidence(const Eigen::MatrixXd& draws, Eigen::Index i, Eigen::Index j);

CredalRanking credal_ranking(const Eigen::MatrixXd& draws, std::vector<std::string> labels);

/// Directed graph with one node per item, "label (mean)", and an edge u -> v
/// labelled d(u, v) for every pair with d(u, v) >= 0.5. With prune_trivial,
/// edges whose label rounds to 1.00 are kept only between neighbours in the
/// mean order.
std::string ranking_graph_dot(const CredalRanking& ranking, bool prune_trivial = true);

}  // namespace credal_mcdm
