#include <doctest.h>

#include <random>

#include "credal_mcdm/compositions.hpp"
#include "test_support.hpp"

using namespace credal_mcdm;
using test_support::check_close;

TEST_SUITE("compositions") {
  TEST_CASE("closure examples") {
    check_close(closure(Eigen::Vector3d(50, 30, 20)).values(), Eigen::Vector3d(0.5, 0.3, 0.2), 1e-15);
    check_close(closure(Eigen::Vector4d(1, 1, 1, 1)).values(), Eigen::Vector4d::Constant(0.25), 1e-15);
    Eigen::VectorXd aw(8);
    aw << 7, 6, 4, 9, 5, 8, 1, 3;
    check_close(closure(aw).values(), aw / 43.0, 1e-15);
  }

  TEST_CASE("closure rejects bad input") {
    CHECK_THROWS_AS(closure(Eigen::VectorXd::Constant(1, 2.0)), Error);
    try {
      closure(Eigen::Vector3d(1, 0, 2));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonPositiveEntry);
    }
    try {
      closure(Eigen::Vector2d(1, -1));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::NonPositiveEntry);
    }
    try {
      Composition::from_values(Eigen::Vector2d(0.5, 0.6));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::InvalidParameter);
    }
  }

  TEST_CASE("clr examples") {
    check_close(clr(closure(Eigen::Vector3d(1, 1, 1))).values(), Eigen::Vector3d::Zero(), 1e-15);
    const Eigen::VectorXd v = clr(closure(Eigen::Vector3d(0.5, 0.25, 0.25))).values();
    check_close(v, Eigen::Vector3d(0.4621, -0.2310, -0.2310), 1e-4);
    check_close(v, Eigen::Vector3d(2.0 / 3.0, -1.0 / 3.0, -1.0 / 3.0) * std::log(2.0), 1e-15);
  }

  TEST_CASE("clr_inverse examples") {
    check_close(clr_inverse(Eigen::Vector3d::Zero()).values(), Eigen::Vector3d::Constant(1.0 / 3.0), 1e-15);
    check_close(clr_inverse(Eigen::Vector3d(0.4621, -0.2310, -0.2310)).values(), Eigen::Vector3d(0.5, 0.25, 0.25),
                1e-4);
    for (double c : {-30.0, -1.0, 2.5, 40.0}) {
      check_close(clr_inverse(Eigen::Vector4d::Constant(c)).values(), Eigen::Vector4d::Constant(0.25), 1e-15);
    }
  }

  TEST_CASE("clr_inverse reports overflow") {
    try {
      clr_inverse(Eigen::Vector2d(1e4, -1e4));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::Overflow);
    }
    CHECK_THROWS_AS(clr_inverse(Eigen::Vector2d(std::numeric_limits<double>::infinity(), 0)), Error);
  }

  TEST_CASE("properties on random compositions") {
    std::mt19937_64 rng(7);
    std::gamma_distribution<double> gamma(0.7, 1.0);
    for (int trial = 0; trial < 200; ++trial) {
      const int n = 2 + trial % 7;
      Eigen::VectorXd raw(n);
      for (int j = 0; j < n; ++j) raw[j] = gamma(rng) + 1e-6;
      const Composition w = closure(raw);
      CHECK(std::abs(w.values().sum() - 1.0) <= kSimplexTolerance);
      // Closure is idempotent and scale invariant.
      check_close(closure(w).values(), w.values(), 1e-15);
      check_close(closure((raw * 37.5).eval()).values(), w.values(), 1e-14);
      const ClrVector v = clr(w);
      CHECK(std::abs(v.values().sum()) <= kSimplexTolerance);
      check_close(clr_inverse(v).values(), w.values(), kRoundTripTolerance);
    }
  }

  TEST_CASE("templated on the scalar type") {
    const BasicComposition<float> w = closure(Eigen::Vector3f(2.f, 1.f, 1.f));
    CHECK(w[0] == doctest::Approx(0.5f));
    const auto back = clr_inverse(clr(w));
    CHECK(back[1] == doctest::Approx(0.25f));
  }
}
