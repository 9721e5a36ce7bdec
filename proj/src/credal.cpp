#include "credal_mcdm/credal.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>
#include <numeric>
#include <set>

#include "credal_mcdm/error.hpp"

namespace credal_mcdm {

namespace {

std::string fixed(double value, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, value);
  return buf;
}

std::string escape(const std::string& text) {
  std::string out;
  for (const char c : text) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  return out;
}

// Graphviz identifiers: [A-Za-z_][A-Za-z0-9_]*, made unique with a suffix.
std::vector<std::string> node_ids(const std::vector<std::string>& labels) {
  std::vector<std::string> ids;
  std::set<std::string> used;
  for (const auto& label : labels) {
    std::string id;
    for (const char c : label) id.push_back(std::isalnum(static_cast<unsigned char>(c)) ? c : '_');
    if (id.empty() || std::isdigit(static_cast<unsigned char>(id.front()))) id.insert(id.begin(), 'n');
    std::string unique = id;
    for (int k = 2; used.count(unique) > 0; ++k) unique = id + "_" + std::to_string(k);
    used.insert(unique);
    ids.push_back(unique);
  }
  return ids;
}

}  // namespace

std::vector<Eigen::Index> CredalRanking::order() const {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(means.size()));
  std::iota(idx.begin(), idx.end(), Eigen::Index{0});
  std::stable_sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return means[a] > means[b]; });
  return idx;
}

double credal_confidence(const Eigen::MatrixXd& draws, Eigen::Index i, Eigen::Index j) {
  if (i < 0 || j < 0 || i >= draws.cols() || j >= draws.cols()) {
    throw Error(ErrorCode::IndexOutOfRange, "item index out of range");
  }
  if (draws.rows() == 0) throw Error(ErrorCode::EmptyInput, "no draws");
  double score = 0.0;
  for (Eigen::Index q = 0; q < draws.rows(); ++q) {
    if (draws(q, i) > draws(q, j)) {
      score += 1.0;
    } else if (draws(q, i) == draws(q, j)) {
      score += 0.5;
    }
  }
  return score / static_cast<double>(draws.rows());
}

CredalRanking credal_ranking(const Eigen::MatrixXd& draws, std::vector<std::string> labels) {
  const Eigen::Index n = draws.cols();
  if (n < 2) throw Error(ErrorCode::DimensionTooSmall, "credal ranking needs at least two items");
  if (static_cast<Eigen::Index>(labels.size()) != n) {
    throw Error(ErrorCode::DimensionMismatch, "one label per item required");
  }
  CredalRanking out;
  out.labels = std::move(labels);
  out.means = draws.colwise().mean().transpose();
  out.confidence = Eigen::MatrixXd::Constant(n, n, 0.5);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) {
      out.confidence(i, j) = credal_confidence(draws, i, j);
      out.confidence(j, i) = 1.0 - out.confidence(i, j);
    }
  }
  return out;
}

std::string ranking_graph_dot(const CredalRanking& ranking, bool prune_trivial) {
  const auto ids = node_ids(ranking.labels);
  const auto order = ranking.order();
  std::string dot = "digraph credal_ranking {\n  rankdir=TB;\n  node [shape=box];\n";
  for (const Eigen::Index i : order) {
    const auto k = static_cast<std::size_t>(i);
    dot += "  " + ids[k] + " [label=\"" + escape(ranking.labels[k]) + " (" + fixed(ranking.means[i], 3) + ")\"];\n";
  }
  for (std::size_t a = 0; a < order.size(); ++a) {
    for (std::size_t b = 0; b < order.size(); ++b) {
      if (a == b) continue;
      const Eigen::Index u = order[a];
      const Eigen::Index v = order[b];
      const double d = ranking.confidence(u, v);
      if (d < 0.5) continue;
      const std::string label = fixed(d, 2);
      if (prune_trivial && label == "1.00" && b != a + 1) continue;
      dot += "  " + ids[static_cast<std::size_t>(u)] + " -> " + ids[static_cast<std::size_t>(v)] + " [label=\"" +
             label + "\"];\n";
    }
  }
  dot += "}\n";
  return dot;
}

}  // namespace credal_mcdm
