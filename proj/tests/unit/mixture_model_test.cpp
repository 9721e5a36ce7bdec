#include <doctest.h>

#include <cmath>
#include <random>

#include "credal_mcdm/densities.hpp"
#include "credal_mcdm/dataset.hpp"
#include "credal_mcdm/mixture_model.hpp"
#include "test_support.hpp"

using namespace credal_mcdm;
using test_support::block_mean;
using test_support::check_close;
using test_support::quick_config;
using test_support::ratio_matrix;

namespace {

Eigen::VectorXd random_composition(std::mt19937_64& rng, int n) {
  std::gamma_distribution<double> gamma(2.0, 1.0);
  Eigen::VectorXd raw(n);
  for (int j = 0; j < n; ++j) raw[j] = gamma(rng);
  return raw / raw.sum();
}

// Fake sample set with the block layout of a mixture fit: omega[z] then
// gamma_omega[z], one chain per entry of `chain_centers`.
PosteriorSamples fake_mixture(const std::vector<std::vector<Eigen::Vector3d>>& chain_centers) {
  PosteriorSamples s;
  const int clusters = static_cast<int>(chain_centers.front().size());
  Eigen::Index offset = 0;
  for (int z = 1; z <= clusters; ++z) {
    ParameterBlock omega{"omega[" + std::to_string(z) + "]", ConstraintKind::simplex, 3, 0, 0, false, offset, 0};
    s.blocks.push_back(omega);
    offset += 3;
    ParameterBlock gamma{"gamma_omega[" + std::to_string(z) + "]", ConstraintKind::positive, 1, 0, 0, true, offset, 0};
    s.blocks.push_back(gamma);
    offset += 1;
  }
  for (const auto& centers : chain_centers) {
    Eigen::MatrixXd chain(5, offset);
    for (int z = 0; z < clusters; ++z) {
      for (Eigen::Index row = 0; row < chain.rows(); ++row) {
        chain.row(row).segment(4 * z, 3) = centers[static_cast<std::size_t>(z)].transpose();
        chain(row, 4 * z + 3) = 100.0 * centers[static_cast<std::size_t>(z)][0];
      }
    }
    s.chains.push_back(chain);
  }
  return s;
}

}  // namespace

TEST_SUITE("mixture_model") {
  TEST_CASE("single component reduces to the Dirichlet density") {
    const Eigen::Vector3d w(0.2, 0.5, 0.3), center(0.3, 0.4, 0.3);
    const double got = marginal_mixture_logdensity(w, Eigen::VectorXd::Ones(1), {center}, Eigen::VectorXd::Constant(1, 7.0));
    CHECK(got == log_dirichlet_mean(w, center, 7.0));
  }

  TEST_CASE("marginal equals brute-force enumeration") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> conc(0.5, 50.0);
    for (int trial = 0; trial < 100; ++trial) {
      const int z_count = 1 + trial % 5;
      const int n = 2 + trial % 4;
      const Eigen::VectorXd w = random_composition(rng, n);
      const Eigen::VectorXd theta = random_composition(rng, z_count);
      std::vector<Eigen::VectorXd> centers;
      Eigen::VectorXd gammas(z_count);
      for (int z = 0; z < z_count; ++z) {
        centers.push_back(random_composition(rng, n));
        gammas[z] = conc(rng);
      }
      // Enumerate the membership variable and sum the joint in linear space.
      double joint_sum = 0.0;
      for (int z = 0; z < z_count; ++z) {
        joint_sum += theta[z] * std::exp(log_dirichlet_mean(w, centers[static_cast<std::size_t>(z)], gammas[z]));
      }
      CHECK(std::abs(marginal_mixture_logdensity(w, theta, centers, gammas) - std::log(joint_sum)) <= 1e-10);
    }
  }

  TEST_CASE("empty components drop out") {
    const Eigen::Vector2d w(0.3, 0.7);
    const std::vector<Eigen::VectorXd> centers{Eigen::Vector2d(0.5, 0.5), Eigen::Vector2d(0.2, 0.8)};
    const double got = marginal_mixture_logdensity(w, Eigen::Vector2d(0.0, 1.0), centers, Eigen::Vector2d(3, 4));
    CHECK(got == doctest::Approx(log_dirichlet_mean(w, centers[1], 4.0)));
    CHECK_THROWS_AS(marginal_mixture_logdensity(w, Eigen::Vector3d(0.2, 0.3, 0.5), centers, Eigen::Vector2d(3, 4)),
                    Error);
  }

  TEST_CASE("construction errors") {
    std::vector<PreferenceRecord> records{PreferenceRecord::ahp("a", Eigen::Matrix3d::Ones()),
                                          PreferenceRecord::ahp("b", Eigen::Matrix3d::Ones())};
    MixtureConfig config;
    config.clusters = 3;
    try {
      build_mixture_posterior(records, config);
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TooManyClusters);
    }
    config.clusters = 0;
    CHECK_THROWS_AS(build_mixture_posterior(records, config), Error);
    config.clusters = 1;
    CHECK_THROWS_AS(build_mixture_posterior({}, config), Error);
  }

  TEST_CASE("relabelling leaves aligned chains alone") {
    const Eigen::Vector3d a(0.6, 0.3, 0.1), b(0.1, 0.3, 0.6);
    const PosteriorSamples s = fake_mixture({{a, b}, {a, b}});
    const PosteriorSamples r = relabel_chains(s);
    for (std::size_t c = 0; c < s.chains.size(); ++c) CHECK(r.chains[c] == s.chains[c]);
  }

  TEST_CASE("relabelling undoes a constructed swap") {
    const Eigen::Vector3d a(0.6, 0.3, 0.1), b(0.1, 0.3, 0.6), c(0.3, 0.4, 0.3);
    const PosteriorSamples s = fake_mixture({{a, b, c}, {c, a, b}, {b, c, a}});
    const PosteriorSamples r = relabel_chains(s);
    for (std::size_t k = 0; k < 3; ++k) CHECK(r.chains[k] == s.chains[0]);
  }

  TEST_CASE("relabelling refuses large component counts") {
    std::vector<Eigen::Vector3d> centers(kMaxRelabelClusters + 1, Eigen::Vector3d::Constant(1.0 / 3.0));
    try {
      relabel_chains(fake_mixture({centers, centers}));
      FAIL("expected an error");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::ClusterCountTooLarge);
    }
  }

  TEST_CASE("single component: responsibilities are one, center tracks the group model") {
    const Dataset data = load_dataset(CREDAL_MCDM_DATA_DIR "/ahp_group.json");
    MixtureConfig config;
    config.clusters = 1;
    const ModelSpec spec = build_mixture_posterior(data.records, config);
    const PosteriorSamples s = sample(spec, quick_config());
    CHECK(component_count(s) == 1);
    const MixtureResult result = summarize_mixture(s);
    CHECK((result.memberships.array() == 1.0).all());
    Eigen::VectorXd aggregated(5);
    aggregated << 0.443, 0.251, 0.112, 0.132, 0.062;
    check_close(result.centers.row(0).transpose(), aggregated, 0.03);
  }

  // Known gap: with one record per component and the default vague priors,
  // chains often settle into a merged configuration, so this may fail.
  TEST_CASE("one component per distinct record" * doctest::may_fail()) {
    const std::vector<Eigen::VectorXd> generators{Eigen::Vector3d(0.7, 0.2, 0.1), Eigen::Vector3d(0.1, 0.2, 0.7),
                                                  Eigen::Vector3d(0.2, 0.7, 0.1)};
    std::vector<PreferenceRecord> records;
    for (std::size_t r = 0; r < generators.size(); ++r) {
      records.push_back(PreferenceRecord::ahp("dm" + std::to_string(r), ratio_matrix(generators[r])));
    }
    MixtureConfig config;
    config.clusters = 3;
    const MixtureResult result = summarize_mixture(sample(build_mixture_posterior(records, config), quick_config()));
    std::vector<bool> used(3, false);
    for (Eigen::Index z = 0; z < 3; ++z) {
      int match = -1;
      for (int r = 0; r < 3; ++r) {
        if ((result.centers.row(z).transpose() - generators[static_cast<std::size_t>(r)]).cwiseAbs().maxCoeff() <=
            0.05) {
          match = r;
        }
      }
      INFO("component " << z << ": " << result.centers.row(z));
      REQUIRE(match >= 0);
      CHECK_FALSE(used[static_cast<std::size_t>(match)]);
      used[static_cast<std::size_t>(match)] = true;
    }
  }

  TEST_CASE("responsibilities need a mixture fit") {
    PosteriorSamples s;
    s.blocks.push_back({"w", ConstraintKind::simplex, 3, 0, 0, false, 0, 0});
    s.chains.push_back(Eigen::MatrixXd::Constant(2, 3, 1.0 / 3.0));
    CHECK(component_count(s) == 0);
    CHECK_THROWS_AS(responsibilities(s), Error);
  }
}
