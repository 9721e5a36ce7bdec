#include <doctest.h>

#include <random>

#include "credal_mcdm/credal.hpp"
#include "credal_mcdm/error.hpp"

using namespace credal_mcdm;

TEST_SUITE("credal") {
  TEST_CASE("confidence examples") {
    const Eigen::MatrixXd same = Eigen::RowVector2d(0.7, 0.3).replicate(10, 1);
    CHECK(credal_confidence(same, 0, 1) == 1.0);
    CHECK(credal_confidence(same, 1, 0) == 0.0);
    Eigen::MatrixXd alternating(10, 2);
    for (int q = 0; q < 10; ++q) alternating.row(q) = q % 2 == 0 ? Eigen::RowVector2d(0.6, 0.4) : Eigen::RowVector2d(0.4, 0.6);
    CHECK(credal_confidence(alternating, 0, 1) == 0.5);
    CHECK(credal_confidence(Eigen::MatrixXd::Ones(4, 2), 0, 1) == 0.5);  // ties count one half
  }

  TEST_CASE("confidence errors") {
    try {
      credal_confidence(Eigen::MatrixXd::Ones(3, 2), 0, 2);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::IndexOutOfRange);
    }
    CHECK_THROWS_AS(credal_confidence(Eigen::MatrixXd(0, 2), 0, 1), Error);
    CHECK_THROWS_AS(credal_ranking(Eigen::MatrixXd::Ones(3, 1), {"a"}), Error);
    CHECK_THROWS_AS(credal_ranking(Eigen::MatrixXd::Ones(3, 2), {"a"}), Error);
  }

  TEST_CASE("complementary confidences") {
    std::mt19937_64 rng(1);
    std::uniform_int_distribution<int> coarse(0, 3);  // coarse values force ties
    Eigen::MatrixXd draws(257, 5);
    for (Eigen::Index q = 0; q < draws.rows(); ++q) {
      for (Eigen::Index j = 0; j < draws.cols(); ++j) draws(q, j) = coarse(rng);
    }
    const CredalRanking r = credal_ranking(draws, {"a", "b", "c", "d", "e"});
    for (Eigen::Index i = 0; i < 5; ++i) {
      CHECK(r.confidence(i, i) == 0.5);
      for (Eigen::Index j = 0; j < 5; ++j) {
        CHECK(r.confidence(i, j) + r.confidence(j, i) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(credal_confidence(draws, i, j) + credal_confidence(draws, j, i) == doctest::Approx(1.0).epsilon(1e-15));
      }
    }
  }

  TEST_CASE("two-item block") {
    Eigen::MatrixXd draws(10, 2);
    for (int q = 0; q < 10; ++q) draws.row(q) = Eigen::RowVector2d(q < 7 ? 1.0 : 0.0, 0.5);
    const CredalRanking r = credal_ranking(draws, {"A", "B"});
    CHECK(r.confidence(0, 1) == doctest::Approx(0.7));
    CHECK(r.confidence(1, 0) == doctest::Approx(0.3));
    CHECK(r.order() == std::vector<Eigen::Index>{0, 1});
    CHECK(ranking_graph_dot(r) ==
          "digraph credal_ranking {\n"
          "  rankdir=TB;\n"
          "  node [shape=box];\n"
          "  A [label=\"A (0.700)\"];\n"
          "  B [label=\"B (0.500)\"];\n"
          "  A -> B [label=\"0.70\"];\n"
          "}\n");
  }

  TEST_CASE("trivial skip edges are pruned") {
    CredalRanking r;
    r.labels = {"low", "high", "mid"};
    r.means = Eigen::Vector3d(0.1, 0.6, 0.3);
    r.confidence.resize(3, 3);
    r.confidence << 0.5, 0.0, 0.1, 1.0, 0.5, 1.0, 0.9, 0.0, 0.5;
    CHECK(r.order() == std::vector<Eigen::Index>{1, 2, 0});
    const std::string pruned = ranking_graph_dot(r);
    CHECK(pruned.find("high -> mid [label=\"1.00\"]") != std::string::npos);
    CHECK(pruned.find("mid -> low [label=\"0.90\"]") != std::string::npos);
    CHECK(pruned.find("high -> low") == std::string::npos);
    const std::string full = ranking_graph_dot(r, false);
    CHECK(full.find("high -> low [label=\"1.00\"]") != std::string::npos);
    // Same input, same bytes.
    CHECK(ranking_graph_dot(r) == pruned);
  }

  TEST_CASE("node ids are valid DOT identifiers") {
    Eigen::MatrixXd draws(2, 3);
    draws << 3, 2, 1, 3, 2, 1;
    const std::string dot = ranking_graph_dot(credal_ranking(draws, {"Recall+", "2nd item", "a\"b"}));
    CHECK(dot.find("Recall_ [label=\"Recall+ (3.000)\"]") != std::string::npos);
    CHECK(dot.find("-> Recall+") == std::string::npos);
    CHECK(dot.find("\"a\\\"b (1.000)\"") != std::string::npos);
  }
}
