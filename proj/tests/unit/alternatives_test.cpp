#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "credal_mcdm/densities.hpp"
#include "credal_mcdm/alternatives.hpp"
#include "test_support.hpp"

using namespace credal_mcdm;
using test_support::check_close;

namespace {

Eigen::MatrixXd weight_draws(std::uint64_t seed, Eigen::Index rows, Eigen::Index n) {
  std::mt19937_64 rng(seed);
  std::gamma_distribution<double> gamma(3.0, 1.0);
  Eigen::MatrixXd w(rows, n);
  for (Eigen::Index q = 0; q < rows; ++q) {
    for (Eigen::Index j = 0; j < n; ++j) w(q, j) = gamma(rng);
    w.row(q) /= w.row(q).sum();
  }
  return w;
}

PerformanceMatrix small_matrix() {
  Eigen::MatrixXd v(4, 3);
  v << 0.9, 0.1, 0.5, 0.2, 0.8, 0.4, 0.9, 0.2, 0.6, 0.0, 0.0, 0.0;
  return PerformanceMatrix::from_values({"p", "q", "r", "zero"}, {"c1", "c2", "c3"}, v);
}

// Brute-force 2-means on a line: best split of the sorted values.
std::vector<int> two_means(const Eigen::VectorXd& u) {
  std::vector<Eigen::Index> idx(static_cast<std::size_t>(u.size()));
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](Eigen::Index a, Eigen::Index b) { return u[a] > u[b]; });
  double best = std::numeric_limits<double>::infinity();
  std::size_t cut = 1;
  for (std::size_t k = 1; k < idx.size(); ++k) {
    double sse = 0.0;
    for (const auto& [from, to] : {std::pair<std::size_t, std::size_t>{0, k}, {k, idx.size()}}) {
      double mean = 0.0;
      for (std::size_t i = from; i < to; ++i) mean += u[idx[i]];
      mean /= static_cast<double>(to - from);
      for (std::size_t i = from; i < to; ++i) sse += (u[idx[i]] - mean) * (u[idx[i]] - mean);
    }
    if (sse < best) {
      best = sse;
      cut = k;
    }
  }
  std::vector<int> label(idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) label[static_cast<std::size_t>(idx[i])] = i < cut ? 0 : 1;
  return label;
}

SortingResult sort_utilities(const Eigen::VectorXd& u, int clusters, double sigma) {
  SortingConfig config;
  config.clusters = clusters;
  config.sigma = sigma;
  const ModelSpec spec = build_sorting_posterior(u, config);
  return summarize_sorting(sample(spec, test_support::quick_config(5)), u, sigma);
}

}  // namespace

TEST_SUITE("alternatives") {
  TEST_CASE("weighted sum examples") {
    Eigen::VectorXd w(5);
    w << 0.083, 0.247, 0.24, 0.323, 0.107;
    Eigen::VectorXd bio(5), alin(5);
    bio << 0, 0.89, 1, 1, 1;
    alin << 0.68, 1, 0.67, 0, 1;
    CHECK(std::abs(aggregate_wsm(bio, w) - 0.889) <= 0.001);
    CHECK(std::abs(aggregate_wsm(alin, w) - 0.571) <= 0.001);
    CHECK(aggregate_wsm(Eigen::VectorXd::Zero(5), w) == 0.0);
  }

  TEST_CASE("performance validation") {
    CHECK_THROWS_AS(PerformanceMatrix::from_values({"a"}, {"x", "y"}, Eigen::RowVector2d(0.5, 1.2)), Error);
    CHECK_THROWS_AS(PerformanceMatrix::from_values({"a", "b"}, {"x", "y"}, Eigen::RowVector2d(0.5, 0.2)), Error);
    CHECK_THROWS_AS(expected_utility(small_matrix(), weight_draws(1, 5, 2)), Error);
  }

  TEST_CASE("expected utility of a linear aggregator uses the mean weights") {
    const PerformanceMatrix perf = small_matrix();
    const Eigen::MatrixXd w = weight_draws(2, 500, 3);
    const Eigen::MatrixXd u = utility_samples(perf, w);
    REQUIRE(u.rows() == 500);
    REQUIRE(u.cols() == 4);
    check_close(expected_utility(perf, w), u.colwise().mean().transpose(), 1e-12);
    check_close(expected_utility(perf, w), perf.values * w.colwise().mean().transpose(), 1e-12);
    check_close(u.col(3), Eigen::VectorXd::Zero(500), 0.0);
  }

  TEST_CASE("non-linear aggregators average over draws") {
    const PerformanceMatrix perf = small_matrix();
    const Eigen::MatrixXd w = weight_draws(3, 200, 3);
    const Aggregator squared{[](const Eigen::Ref<const Eigen::VectorXd>& a,
                                const Eigen::Ref<const Eigen::VectorXd>& x) { return std::pow(a.dot(x), 2); },
                             false};
    const Eigen::VectorXd e = expected_utility(perf, w, squared);
    for (Eigen::Index i = 0; i < 4; ++i) {
      const Eigen::VectorXd per_draw = w * perf.values.row(i).transpose();
      CHECK(e[i] == doctest::Approx(per_draw.array().square().mean()).epsilon(1e-12));
    }
  }

  TEST_CASE("single draw applies G once") {
    const PerformanceMatrix perf = small_matrix();
    const Eigen::RowVector3d w(0.2, 0.3, 0.5);
    check_close(expected_utility(perf, w), perf.values * w.transpose(), 1e-15);
    const CredalRanking r = alternative_credal(perf, w);
    for (Eigen::Index i = 0; i < 4; ++i) {
      for (Eigen::Index j = 0; j < 4; ++j) {
        if (i != j) CHECK((r.confidence(i, j) == 0.0 || r.confidence(i, j) == 1.0));
      }
    }
  }

  TEST_CASE("distributional utility") {
    const Eigen::RowVector3d a(0.9, 0.1, 0.5), w(0.2, 0.3, 0.5);
    CHECK(expected_utility_distributional(a, w) == doctest::Approx(a.dot(w)));
    const Eigen::MatrixXd ad = weight_draws(4, 30, 3);
    const Eigen::MatrixXd wd = weight_draws(5, 40, 3);
    // Linear operator: mean over all pairs equals the product of the means.
    CHECK(expected_utility_distributional(ad, wd) ==
          doctest::Approx(ad.colwise().mean().dot(wd.colwise().mean())).epsilon(1e-12));
  }

  TEST_CASE("dominance is preserved draw by draw") {
    const PerformanceMatrix perf = small_matrix();
    const Eigen::MatrixXd u = utility_samples(perf, weight_draws(6, 300, 3));
    CHECK((u.col(0).array() >= u.col(3).array()).all());
    CHECK((u.col(2).array() >= u.col(3).array()).all());
    // r = (0.9, 0.2, 0.6) dominates p = (0.9, 0.1, 0.5).
    CHECK((u.col(2).array() >= u.col(0).array()).all());
    const CredalRanking r = alternative_credal(perf, weight_draws(6, 300, 3));
    CHECK(r.confidence(2, 0) == 1.0);
  }

  TEST_CASE("sorting recovers two well separated groups") {
    const Eigen::Vector4d u(0.10, 0.12, 0.90, 0.88);
    const SortingResult result = sort_utilities(u, 2, 0.05);
    // Clusters come ordered by descending center.
    CHECK(std::abs(result.centers[0] - 0.89) <= 0.05);
    CHECK(std::abs(result.centers[1] - 0.11) <= 0.05);
    CHECK(result.assignment == std::vector<int>{1, 1, 0, 0});
    for (Eigen::Index i = 0; i < 4; ++i) CHECK(result.memberships.row(i).maxCoeff() >= 0.95);
  }

  TEST_CASE("one cluster sits at the mean utility") {
    const Eigen::Vector4d u(0.10, 0.12, 0.90, 0.88);
    const SortingResult result = sort_utilities(u, 1, 0.05);
    CHECK(std::abs(result.centers[0] - u.mean()) <= 0.05);
    CHECK(result.assignment == std::vector<int>{0, 0, 0, 0});
  }

  TEST_CASE("sorting agrees with a 2-means split of published utilities") {
    Eigen::VectorXd u(6);
    u << 0.889, 0.789, 0.636, 0.627, 0.702, 0.571;
    const std::vector<int> oracle = two_means(u);
    const SortingResult result = sort_utilities(u, 2, 0.05);
    CHECK(result.assignment == oracle);
    CHECK(oracle == std::vector<int>{0, 0, 1, 1, 1, 1});
  }

  TEST_CASE("sorting on utility draws") {
    Eigen::MatrixXd draws(300, 4);
    std::mt19937_64 rng(8);
    std::normal_distribution<double> noise(0.0, 0.01);
    for (Eigen::Index q = 0; q < draws.rows(); ++q) {
      draws.row(q) << 0.10 + noise(rng), 0.12 + noise(rng), 0.90 + noise(rng), 0.88 + noise(rng);
    }
    SortingConfig config;
    config.sigma = 0.05;
    const ModelSpec spec = build_sorting_posterior(draws, config);
    const SortingResult result =
        summarize_sorting(sample(spec, test_support::quick_config(6)), draws.colwise().mean().transpose(), 0.05);
    CHECK(result.assignment == std::vector<int>{1, 1, 0, 0});
  }

  TEST_CASE("sorting errors") {
    SortingConfig config;
    config.clusters = 5;
    CHECK_THROWS_AS(build_sorting_posterior(Eigen::VectorXd(Eigen::Vector4d(0.1, 0.2, 0.3, 0.4)), config), Error);
    config.clusters = 2;
    config.sigma = 0.0;
    CHECK_THROWS_AS(build_sorting_posterior(Eigen::VectorXd(Eigen::Vector4d(0.1, 0.2, 0.3, 0.4)), config), Error);
  }
}
