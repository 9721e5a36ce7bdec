#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "credal_mcdm/dataset.hpp"
#include "credal_mcdm/error.hpp"
#include "test_support.hpp"

using namespace credal_mcdm;
using test_support::check_close;

namespace {

int error_line(std::string_view text) {
  try {
    parse_dataset(text);
  } catch (const DatasetError& e) {
    return e.line();
  }
  FAIL("expected a DatasetError");
  return -1;
}

std::string error_message(std::string_view text) {
  try {
    parse_dataset(text);
  } catch (const DatasetError& e) {
    return e.what();
  }
  FAIL("expected a DatasetError");
  return {};
}

}  // namespace

TEST_SUITE("dataset") {
  TEST_CASE("every elicitation method parses") {
    const Dataset d = parse_dataset(R"({
  "schemaVersion": "1",
  "criteria": ["a", "b", "c"],
  "decisionMakers": [
    {"id": "p", "method": "ahp", "pcm": [[1, 3, "1/2"], ["1/3", 1, 0.25], [2, 4, 1]]},
    {"id": "q", "method": "ahp", "pcm": [[1, {"kind": "interval", "lo": 2, "hi": 4}, 1], [null, 1, 1], [1, 1, 1]]},
    {"id": "r", "method": "bwm", "best": "b", "worst": 3, "bestToOthers": [2, 1, 5], "othersToWorst": [3, 5, 1]},
    {"id": "s", "method": "bwm", "bestToOthers": [1, {"kind": "normal", "mean": 3, "sd": 1}, 4],
     "othersToWorst": [4, 2, {"kind": "point", "value": 1}]},
    {"id": "t", "method": "pointAllocation", "values": [50, 30, 20]},
    {"id": "u", "method": "smart", "values": [{"kind": "triangular", "lo": 1, "hi": 3}, 5, 9]},
    {"id": "v", "method": "swing", "values": [100, 70, {"kind": "normal", "mean": 20, "sd": 5, "lo": 10, "hi": 30}]}
  ]
})");
    CHECK(d.schema_version == "1");
    CHECK(d.criteria == std::vector<std::string>{"a", "b", "c"});
    REQUIRE(d.records.size() == 7);
    const auto& p = std::get<PairwiseMatrix>(d.records[0].payload);
    CHECK(p.at(0, 2).first == 0.5);
    CHECK(p.at(1, 0).first == doctest::Approx(1.0 / 3.0));
    const auto& q = std::get<PairwiseMatrix>(d.records[1].payload);
    CHECK(q.at(0, 1).kind == UncertainValue::Kind::interval);
    const auto& r = std::get<BestWorst>(d.records[2].payload);
    CHECK(r.best == 1);
    CHECK(r.worst == 2);
    const auto& s = std::get<BestWorst>(d.records[3].payload);
    CHECK(s.best == 0);  // inferred from the unit entries
    CHECK(s.worst == 2);
    CHECK(s.best_to_others[1].kind == UncertainValue::Kind::normal);
    CHECK(std::get<ValueVector>(d.records[5].payload).method == ValueMethod::smart);
    const auto& v = std::get<ValueVector>(d.records[6].payload);
    CHECK(v.method == ValueMethod::swing);
    CHECK(v.values[2].is_bounded());
    CHECK_FALSE(d.performance);
    CHECK_FALSE(d.covariance);
  }

  TEST_CASE("performance block is normalized on load") {
    const Dataset d = parse_dataset(R"({
  "schemaVersion": "1",
  "criteria": ["price", "speed"],
  "decisionMakers": [{"id": "a", "method": "pointAllocation", "values": [60, 40]}],
  "performance": {
    "alternatives": ["x", "y", "z"],
    "values": [[10, 1], [20, 3], [30, 2]],
    "criterionTypes": ["cost", "benefit"]
  },
  "covariance": "fromPerformance"
})");
    REQUIRE(d.performance);
    Eigen::MatrixXd expected(3, 2);
    expected << 1.0, 0.0, 0.5, 1.0, 0.0, 0.5;
    check_close(d.performance->values.reshaped(), expected.reshaped(), 1e-15);
    CHECK(d.performance->alternatives == std::vector<std::string>{"x", "y", "z"});
    REQUIRE(d.covariance);
    CHECK((*d.covariance)(0, 0) == doctest::Approx(1.0));
    CHECK((*d.covariance)(0, 1) == doctest::Approx(-0.5));
  }

  TEST_CASE("normalization rules") {
    Eigen::MatrixXd raw(3, 3);
    raw << 1, 5, 7, 3, 5, 8, 2, 5, 9;
    const Eigen::MatrixXd n = normalize_performance(raw, {CriterionType::benefit, CriterionType::cost, CriterionType::cost});
    check_close(n.col(0), Eigen::Vector3d(0.0, 1.0, 0.5), 1e-15);
    check_close(n.col(1), Eigen::Vector3d::Ones(), 0.0);  // constant column
    check_close(n.col(2), Eigen::Vector3d(1.0, 0.5, 0.0), 1e-15);
    CHECK_THROWS_AS(normalize_performance(raw, {CriterionType::benefit}), Error);
  }

  TEST_CASE("pre-normalized tables pass through") {
    const Dataset d = load_dataset(CREDAL_MCDM_DATA_DIR "/ontology_matching.json");
    REQUIRE(d.performance);
    CHECK(d.performance->values(0, 0) == 0.0);  // a cost column is not reflected again
    CHECK(d.performance->values(1, 3) == 0.829);
    CHECK(d.performance->criteria == d.criteria);
  }

  TEST_CASE("errors carry line numbers") {
    CHECK(error_line("{\n  \"schemaVersion\": \"1\",\n  \"criteria\": [\"a\", \"b\"\n}") == 4);
    CHECK(error_line("{\n  \"schemaVersion\": 1,\n  \"criteria\": [\"a\", \"b\"],\n  \"decisionMakers\": []\n}") == 2);
    const std::string mismatch = R"({
  "schemaVersion": "1",
  "criteria": ["a", "b", "c"],
  "decisionMakers": [
    {"id": "fine", "method": "pointAllocation", "values": [1, 2, 3]},
    {"id": "short", "method": "pointAllocation", "values": [1, 2]}
  ]
})";
    CHECK(error_line(mismatch) == 6);
    CHECK(error_message(mismatch).find("short") != std::string::npos);
    CHECK(error_message(mismatch).rfind("line 6: ", 0) == 0);
    const std::string nonreciprocal = R"({
  "schemaVersion": "1",
  "criteria": ["a", "b"],
  "decisionMakers": [
    {"id": "x",
     "method": "ahp",
     "pcm": [[1, 3], [3, 1]]}
  ]
})";
    CHECK(error_line(nonreciprocal) == 5);
    CHECK(error_message(nonreciprocal).find("NonReciprocal") != std::string::npos);
  }

  TEST_CASE("structural errors") {
    CHECK(error_message(R"({"schemaVersion": "1", "criteria": ["a", "a"], "decisionMakers": []})").find("duplicate") !=
          std::string::npos);
    CHECK(error_message(R"({"schemaVersion": "1", "criteria": ["a", "b"], "decisionMakers": []})")
              .find("decisionMakers") != std::string::npos);
    CHECK(error_message(R"({"schemaVersion": "1", "criteria": ["a", "b"], "decisionMakers": [
      {"id": "x", "method": "vote", "values": [1, 2]}]})")
              .find("unknown method") != std::string::npos);
    CHECK(error_message(R"({"schemaVersion": "1", "criteria": ["a", "b"], "decisionMakers": [
      {"id": "x", "method": "pointAllocation", "values": [1, 2]},
      {"id": "x", "method": "pointAllocation", "values": [2, 1]}]})")
              .find("duplicate decision-maker") != std::string::npos);
    CHECK(error_message(R"({"schemaVersion": "1", "criteria": ["a", "b"], "decisionMakers": [
      {"id": "x", "method": "pointAllocation", "values": [1, 2]}],
      "performance": {"alternatives": ["p"], "values": [[0.1, 0.2, 0.3]]}})")
              .find("entries") != std::string::npos);
    CHECK_THROWS_AS(load_dataset("/nonexistent/dataset.json"), DatasetError);
  }

  TEST_CASE("number formatting round trips") {
    for (double v : {0.1, 1.0 / 3.0, 1e-300, 123456.789, -2.5, 0.0}) {
      CHECK(std::stod(format_number(v)) == v);
    }
    CHECK(format_number(0.5) == "0.5");
    CHECK(format_number(2.0) == "2");
  }

  TEST_CASE("samples CSV layout") {
    PosteriorSamples s;
    s.blocks.push_back({"w", ConstraintKind::simplex, 2, 0, 0, false, 0, 0});
    s.blocks.push_back({"g", ConstraintKind::positive, 1, 0, 0, true, 2, 1});
    Eigen::MatrixXd c1(2, 3), c2(1, 3);
    c1 << 0.25, 0.75, 2, 0.5, 0.5, 3;
    c2 << 0.1, 0.9, 1.5;
    s.chains = {c1, c2.replicate(2, 1)};
    CHECK(samples_csv(s) ==
          "chain,iteration,w[1],w[2],g\n"
          "1,1,0.25,0.75,2\n"
          "1,2,0.5,0.5,3\n"
          "2,1,0.1,0.9,1.5\n"
          "2,2,0.1,0.9,1.5\n");
  }

  TEST_CASE("atomic writes leave no temporary file") {
    const auto dir = std::filesystem::temp_directory_path() / "credal_mcdm_atomic_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "out.txt";
    write_file_atomic(path, "first");
    write_file_atomic(path, "second");
    std::ifstream in(path);
    std::string content((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    CHECK(content == "second");
    CHECK_FALSE(std::filesystem::exists(dir / "out.txt.tmp"));
    std::filesystem::remove_all(dir);
  }
}
