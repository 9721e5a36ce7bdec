// credal_mcdm: fit, cluster and evaluate from a JSON dataset.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "credal_mcdm/alternatives.hpp"
#include "credal_mcdm/credal.hpp"
#include "credal_mcdm/dataset.hpp"
#include "credal_mcdm/error.hpp"
#include "credal_mcdm/group_model.hpp"
#include "credal_mcdm/mixture_model.hpp"
#include "credal_mcdm/sampler.hpp"

namespace fs = std::filesystem;
using namespace credal_mcdm;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSampler = 3;
constexpr double kRhatWarning = 1.05;

struct SamplerError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string dataset;
  std::string out = ".";
  std::string aggregation = "dirichlet";
  double epsilon = 1e-3;
  int chains = 4;
  int warmup = 2000;
  int draws = 2000;
  std::uint64_t seed = 1;
  bool serial = false;
  int groups = 2;
  int sort = 0;
  double sigma = 1.0;
  bool average_utilities = false;
};

SamplerConfig sampler_config(const Options& o) {
  SamplerConfig c;
  c.chains = o.chains;
  c.warmup = o.warmup;
  c.draws = o.draws;
  c.seed = o.seed;
  c.parallel = !o.serial;
  return c;
}

PosteriorSamples run_sampler(const ModelSpec& spec, const SamplerConfig& config) {
  for (const auto& w : spec.warnings) std::cerr << "warning: " << w << "\n";
  try {
    PosteriorSamples s = sample(spec, config);
    apply_report_rules(s, spec.report);
    return s;
  } catch (const Error& e) {
    if (e.code() == ErrorCode::InvalidParameter) throw;
    throw SamplerError(e.what());
  }
}

Json config_json(const SamplerConfig& c) {
  return Json{{"chains", c.chains},
              {"warmup", c.warmup},
              {"draws", c.draws},
              {"seed", c.seed},
              {"targetAcceptance", c.target_acceptance},
              {"adaptWindow", c.adapt_window}};
}

Json summary_json(const PosteriorSamples& samples) {
  Json rows = Json::array();
  bool flagged = false;
  for (const auto& r : summarize(samples)) {
    rows.push_back(Json{{"parameter", r.parameter},
                        {"mean", r.mean},
                        {"sd", r.sd},
                        {"q2.5", r.q025},
                        {"q50", r.q50},
                        {"q97.5", r.q975},
                        {"rhat", std::isfinite(r.rhat) ? Json(r.rhat) : Json(nullptr)},
                        {"ess", std::isfinite(r.ess) ? Json(r.ess) : Json(nullptr)}});
    if (std::isfinite(r.rhat) && r.rhat > kRhatWarning && !flagged) {
      std::cerr << "warning: rhat above " << kRhatWarning << " (first: " << r.parameter << " " << r.rhat
                << "); consider more warmup or draws\n";
      flagged = true;
    }
  }
  Json chains = Json::array();
  for (const auto& c : samples.chain_info) {
    chains.push_back(Json{{"seed", c.seed}, {"acceptanceRate", c.acceptance_rate}});
    if (c.acceptance_rate < 0.1 || c.acceptance_rate > 0.6) {
      std::cerr << "warning: chain acceptance rate " << c.acceptance_rate << " outside [0.1, 0.6]\n";
    }
  }
  return Json{{"parameters", rows}, {"chains", chains}};
}

Json ranking_json(const CredalRanking& r) {
  Json confidence = Json::array();
  for (Eigen::Index i = 0; i < r.confidence.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index j = 0; j < r.confidence.cols(); ++j) row.push_back(r.confidence(i, j));
    confidence.push_back(row);
  }
  Json means = Json::array();
  for (Eigen::Index i = 0; i < r.means.size(); ++i) means.push_back(r.means[i]);
  return Json{{"labels", r.labels}, {"means", means}, {"confidence", confidence}};
}

void write_json(const fs::path& path, const Json& j) { write_file_atomic(path, j.dump(2) + "\n"); }

// Weight samples that summarize the group: w_star, or w[1] for a single DM.
std::string weight_block(const PosteriorSamples& s) { return s.contains("w_star") ? "w_star" : "w[1]"; }

PosteriorSamples fit_group(const Dataset& data, const Options& o, const SamplerConfig& config) {
  GroupConfig gc;
  if (o.aggregation == "logistic-normal") {
    const auto n = static_cast<Eigen::Index>(data.criteria.size());
    gc.aggregation = LogisticNormalAggregation{data.covariance.value_or(o.epsilon * Eigen::MatrixXd::Identity(n, n)), {}};
  }
  return run_sampler(build_group_posterior(data.records, gc), config);
}

int cmd_fit(const Options& o) {
  const Dataset data = load_dataset(o.dataset);
  const SamplerConfig config = sampler_config(o);
  const PosteriorSamples samples = fit_group(data, o, config);
  fs::create_directories(o.out);

  const std::string block = weight_block(samples);
  const CredalRanking ranking = credal_ranking(samples.pooled(block), data.criteria);
  Json summary = summary_json(samples);
  summary["seed"] = config.seed;
  summary["aggregation"] = o.aggregation;
  summary["config"] = config_json(config);
  summary["rankedBlock"] = block;
  summary["criteriaRanking"] = ranking_json(ranking);

  write_file_atomic(fs::path(o.out) / "samples.csv", samples_csv(samples));
  write_json(fs::path(o.out) / "summary.json", summary);
  write_file_atomic(fs::path(o.out) / "criteria_ranking.dot", ranking_graph_dot(ranking));
  std::cout << "wrote " << o.out << "/{samples.csv,summary.json,criteria_ranking.dot}\n";
  return 0;
}

int cmd_cluster(const Options& o) {
  const Dataset data = load_dataset(o.dataset);
  const SamplerConfig config = sampler_config(o);
  MixtureConfig mc;
  mc.clusters = o.groups;
  const ModelSpec spec = build_mixture_posterior(data.records, mc);
  const MixtureResult result = summarize_mixture(run_sampler(spec, config));
  fs::create_directories(o.out);

  Json centers = Json::array();
  for (Eigen::Index z = 0; z < result.centers.rows(); ++z) {
    Json weights = Json::object();
    for (Eigen::Index k = 0; k < result.centers.cols(); ++k) {
      weights[data.criteria[static_cast<std::size_t>(k)]] = result.centers(z, k);
    }
    Json members = Json::array();
    for (Eigen::Index r = 0; r < result.memberships.rows(); ++r) {
      Eigen::Index best = 0;
      result.memberships.row(r).maxCoeff(&best);
      if (best == z) members.push_back(data.records[static_cast<std::size_t>(r)].dm_id);
    }
    centers.push_back(Json{{"cluster", z + 1},
                           {"weights", weights},
                           {"concentration", result.concentrations[z]},
                           {"members", members}});
  }
  Json out = summary_json(result.samples);
  out["seed"] = config.seed;
  out["config"] = config_json(config);
  out["clusters"] = centers;

  std::string csv = "dm";
  for (Eigen::Index z = 0; z < result.memberships.cols(); ++z) csv += ",cluster" + std::to_string(z + 1);
  csv += "\n";
  for (Eigen::Index r = 0; r < result.memberships.rows(); ++r) {
    csv += data.records[static_cast<std::size_t>(r)].dm_id;
    for (Eigen::Index z = 0; z < result.memberships.cols(); ++z) csv += "," + format_number(result.memberships(r, z));
    csv += "\n";
  }

  write_file_atomic(fs::path(o.out) / "samples.csv", samples_csv(result.samples));
  write_json(fs::path(o.out) / "centers.json", out);
  write_file_atomic(fs::path(o.out) / "responsibilities.csv", csv);
  std::cout << "wrote " << o.out << "/{samples.csv,centers.json,responsibilities.csv}\n";
  return 0;
}

int cmd_evaluate(const Options& o) {
  const Dataset data = load_dataset(o.dataset);
  if (!data.performance) throw DatasetError(0, "evaluate needs a \"performance\" block in the dataset");
  const PerformanceMatrix& perf = *data.performance;
  const SamplerConfig config = sampler_config(o);
  const PosteriorSamples samples = fit_group(data, o, config);
  const Eigen::MatrixXd weights = samples.pooled(weight_block(samples));
  fs::create_directories(o.out);

  const Eigen::MatrixXd utilities = utility_samples(perf, weights);
  const Eigen::VectorXd expected = expected_utility(perf, weights);
  const CredalRanking ranking = alternative_credal(perf, weights);
  Json alts = Json::array();
  for (Eigen::Index i = 0; i < utilities.cols(); ++i) {
    std::vector<double> u(utilities.col(i).data(), utilities.col(i).data() + utilities.rows());
    const double mean = utilities.col(i).mean();
    const double sd = std::sqrt((utilities.col(i).array() - mean).square().sum() /
                                std::max<double>(1.0, static_cast<double>(utilities.rows() - 1)));
    alts.push_back(Json{{"alternative", perf.alternatives[static_cast<std::size_t>(i)]},
                        {"expectedUtility", expected[i]},
                        {"sd", sd},
                        {"q2.5", quantile(u, 0.025)},
                        {"q50", quantile(u, 0.5)},
                        {"q97.5", quantile(u, 0.975)}});
  }
  write_json(fs::path(o.out) / "utilities.json",
             Json{{"seed", config.seed}, {"config", config_json(config)}, {"alternatives", alts},
                  {"ranking", ranking_json(ranking)}});
  write_file_atomic(fs::path(o.out) / "alternatives_ranking.dot", ranking_graph_dot(ranking));
  std::cout << "wrote " << o.out << "/{utilities.json,alternatives_ranking.dot";

  if (o.sort > 0) {
    SortingConfig sc;
    sc.clusters = o.sort;
    sc.sigma = o.sigma;
    const ModelSpec spec =
        o.average_utilities ? build_sorting_posterior(utilities, sc) : build_sorting_posterior(expected, sc);
    const SortingResult sorted = summarize_sorting(run_sampler(spec, config), expected, o.sigma);
    Json clusters = Json::array();
    for (Eigen::Index z = 0; z < sorted.centers.size(); ++z) {
      Json members = Json::array();
      for (std::size_t i = 0; i < sorted.assignment.size(); ++i) {
        if (sorted.assignment[i] == z) members.push_back(perf.alternatives[i]);
      }
      clusters.push_back(Json{{"cluster", z + 1}, {"center", sorted.centers[z]}, {"members", members}});
    }
    Json rows = Json::array();
    for (Eigen::Index i = 0; i < sorted.memberships.rows(); ++i) {
      Json p = Json::array();
      for (Eigen::Index z = 0; z < sorted.memberships.cols(); ++z) p.push_back(sorted.memberships(i, z));
      rows.push_back(Json{{"alternative", perf.alternatives[static_cast<std::size_t>(i)]},
                          {"cluster", sorted.assignment[static_cast<std::size_t>(i)] + 1},
                          {"memberships", p}});
    }
    write_json(fs::path(o.out) / "sorting.json",
               Json{{"clusters", clusters}, {"sigma", o.sigma}, {"averagedOverDraws", o.average_utilities},
                    {"alternatives", rows}});
    std::cout << ",sorting.json";
  }
  std::cout << "}\n";
  return 0;
}

void add_sampler_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("dataset", o.dataset, "dataset JSON file")->required()->check(CLI::ExistingFile);
  cmd->add_option("--chains", o.chains, "number of chains")->check(CLI::PositiveNumber);
  cmd->add_option("--warmup", o.warmup, "warmup iterations per chain")->check(CLI::PositiveNumber);
  cmd->add_option("--draws", o.draws, "kept iterations per chain")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "random seed (default: $CREDAL_MCDM_SEED, else 1)");
  cmd->add_option("--out", o.out, "output directory");
  cmd->add_flag("--serial", o.serial, "run chains one after another");
}

void add_aggregation_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--aggregation", o.aggregation, "group aggregation")
      ->check(CLI::IsMember({"dirichlet", "logistic-normal"}));
  cmd->add_option("--epsilon", o.epsilon, "logistic-normal covariance epsilon*I when the dataset has none")
      ->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bayesian multi-criteria decision making with credal ranking"};
  app.require_subcommand(1);
  Options o;

  auto* fit = app.add_subcommand("fit", "fit individual and aggregated criteria weights");
  add_sampler_flags(fit, o);
  add_aggregation_flags(fit, o);

  auto* cluster = app.add_subcommand("cluster", "group decision-makers with a mixture model");
  add_sampler_flags(cluster, o);
  cluster->add_option("--groups", o.groups, "number of subgroups")->required()->check(CLI::PositiveNumber);

  auto* evaluate = app.add_subcommand("evaluate", "evaluate, rank and optionally sort alternatives");
  add_sampler_flags(evaluate, o);
  add_aggregation_flags(evaluate, o);
  evaluate->add_option("--sort", o.sort, "number of sorting clusters")->check(CLI::PositiveNumber);
  evaluate->add_option("--sigma", o.sigma, "utility spread within a sorting cluster")->check(CLI::PositiveNumber);
  evaluate->add_flag("--average-utilities", o.average_utilities, "sort on utility draws instead of means");

  CLI11_PARSE(app, argc, argv);

  for (auto* cmd : {fit, cluster, evaluate}) {
    if (cmd->parsed() && cmd->count("--seed") == 0) {
      if (const char* env = std::getenv("CREDAL_MCDM_SEED")) {
        try {
          o.seed = std::stoull(env);
        } catch (const std::exception&) {
          std::cerr << "error: CREDAL_MCDM_SEED is not an unsigned integer\n";
          return kExitValidation;
        }
      }
    }
  }

  try {
    if (fit->parsed()) return cmd_fit(o);
    if (cluster->parsed()) return cmd_cluster(o);
    return cmd_evaluate(o);
  } catch (const DatasetError& e) {
    std::cerr << "error: " << o.dataset << ": " << e.what() << "\n";
    return kExitValidation;
  } catch (const SamplerError& e) {
    std::cerr << "sampler error: " << e.what() << "\n";
    return kExitSampler;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
