#include "credal_mcdm/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <random>
#include <thread>

#include "credal_mcdm/compositions.hpp"
#include "credal_mcdm/error.hpp"

namespace credal_mcdm {

namespace {

constexpr double kInitialScale = 0.5;
constexpr double kAdaptationRate = 2.0;
constexpr double kInitJitter = 0.5;
constexpr int kInitAttempts = 100;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

struct ChainResult {
  Eigen::MatrixXd draws;
  ChainInfo info;
  std::exception_ptr error;
};

void run_chain(const ModelSpec& model, const SamplerConfig& config, int chain, ChainResult& result) {
  const ParameterLayout& layout = model.layout;
  const Eigen::Index dim = layout.unconstrained_size();
  result.info.seed = chain_seed(config.seed, chain);
  std::mt19937_64 rng(result.info.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);

  Eigen::VectorXd scratch;
  const Eigen::VectorXd start = layout.to_unconstrained(model.initial);
  const double start_lp = model.log_posterior(start, scratch);
  if (!std::isfinite(start_lp)) {
    throw Error(ErrorCode::NonFiniteStart, "log-posterior is not finite at the initial point");
  }

  Eigen::VectorXd u = start;
  double lp = start_lp;
  for (int attempt = 0; attempt < kInitAttempts; ++attempt) {
    Eigen::VectorXd trial = start;
    for (Eigen::Index k = 0; k < dim; ++k) trial[k] += kInitJitter * (2.0 * uniform(rng) - 1.0);
    const double trial_lp = model.log_posterior(trial, scratch);
    if (std::isfinite(trial_lp)) {
      u = trial;
      lp = trial_lp;
      break;
    }
  }

  // Moves 0..dim-1 perturb one coordinate. Each simplex block of three or
  // more parts gets one extra move shifting all its log-ratios together
  // (this moves the reference part), and the model may add directions.
  std::vector<Eigen::Index> shift_offset;
  std::vector<Eigen::Index> shift_size;
  for (const auto& b : layout.blocks()) {
    if (b.kind == ConstraintKind::simplex && b.free_size() >= 2) {
      shift_offset.push_back(b.free_offset);
      shift_size.push_back(b.free_size());
    }
  }
  const Eigen::Index shifts = static_cast<Eigen::Index>(shift_offset.size());
  for (const auto& d : model.joint_moves) {
    if (d.size() != dim) throw Error(ErrorCode::LayoutMismatch, "joint move has the wrong dimension");
  }
  const Eigen::Index moves = dim + shifts + static_cast<Eigen::Index>(model.joint_moves.size());

  Eigen::VectorXd log_scale = Eigen::VectorXd::Constant(moves, std::log(kInitialScale));
  Eigen::VectorXd scale = log_scale.array().exp();
  std::vector<int> window_accepts(static_cast<std::size_t>(moves), 0);
  long long warmup_accepts = 0;
  long long sampling_accepts = 0;
  const int window = std::max(1, config.adapt_window);

  result.draws.resize(config.draws, layout.constrained_size());
  Eigen::VectorXd x;
  Eigen::VectorXd saved;
  const int total = config.warmup + config.draws;
  for (int it = 0; it < total; ++it) {
    const bool warming = it < config.warmup;
    for (Eigen::Index k = 0; k < moves; ++k) {
      const double step = scale[k] * normal(rng);
      Eigen::Index first = k;
      Eigen::Index length = 1;
      const Eigen::VectorXd* direction = nullptr;
      if (k >= dim + shifts) {
        direction = &model.joint_moves[static_cast<std::size_t>(k - dim - shifts)];
        first = 0;
        length = dim;
      } else if (k >= dim) {
        first = shift_offset[static_cast<std::size_t>(k - dim)];
        length = shift_size[static_cast<std::size_t>(k - dim)];
      }
      saved = u.segment(first, length);
      if (direction) {
        u += step * *direction;
      } else {
        u.segment(first, length).array() += step;
      }
      const double proposal_lp = model.log_posterior(u, scratch);
      const double log_u = std::log(uniform(rng));
      if (log_u < proposal_lp - lp) {
        lp = proposal_lp;
        if (warming) {
          ++window_accepts[static_cast<std::size_t>(k)];
          ++warmup_accepts;
        } else {
          ++sampling_accepts;
        }
      } else {
        u.segment(first, length) = saved;
      }
    }
    if (warming) {
      if ((it + 1) % window == 0) {
        for (Eigen::Index k = 0; k < moves; ++k) {
          const double rate = static_cast<double>(window_accepts[static_cast<std::size_t>(k)]) / window;
          log_scale[k] += kAdaptationRate * (rate - config.target_acceptance);
          window_accepts[static_cast<std::size_t>(k)] = 0;
        }
        scale = log_scale.array().exp();
      }
      continue;
    }
    layout.from_unconstrained(u, x);
    result.draws.row(it - config.warmup) = x.transpose();
  }

  if (dim > 0 && config.warmup > 0 && warmup_accepts == 0) {
    throw Error(ErrorCode::AllProposalsRejected,
                "chain " + std::to_string(chain) + " rejected every proposal during warmup");
  }
  const double proposals = static_cast<double>(moves) * config.draws;
  result.info.acceptance_rate = proposals > 0 ? static_cast<double>(sampling_accepts) / proposals : 1.0;
}

void check_config(const SamplerConfig& config) {
  if (config.chains < 1) throw Error(ErrorCode::InvalidParameter, "need at least one chain");
  if (config.warmup < 1 || config.draws < 1) throw Error(ErrorCode::InvalidParameter, "warmup and draws must be >= 1");
  if (!(config.target_acceptance > 0.0 && config.target_acceptance < 1.0)) {
    throw Error(ErrorCode::InvalidParameter, "target acceptance must lie in (0, 1)");
  }
  if (config.adapt_window < 1) throw Error(ErrorCode::InvalidParameter, "adapt window must be >= 1");
}

// Chain variance terms shared by rhat and ess.
struct ChainMoments {
  double within = 0.0;    // W: mean of per-chain variances
  double var_plus = 0.0;  // pooled variance estimate
};

ChainMoments chain_moments(const Eigen::MatrixXd& draws) {
  const double n = static_cast<double>(draws.rows());
  const Eigen::Index m = draws.cols();
  const Eigen::RowVectorXd means = draws.colwise().mean();
  double within = 0.0;
  for (Eigen::Index c = 0; c < m; ++c) {
    within += (draws.col(c).array() - means[c]).square().sum() / (n - 1.0);
  }
  within /= static_cast<double>(m);
  double between_over_n = 0.0;
  if (m > 1) {
    between_over_n = (means.array() - means.mean()).square().sum() / static_cast<double>(m - 1);
  }
  return {within, (n - 1.0) / n * within + between_over_n};
}

}  // namespace

std::uint64_t chain_seed(std::uint64_t seed, int chain) {
  return splitmix64(splitmix64(seed) ^ static_cast<std::uint64_t>(chain + 1));
}

std::vector<std::string> PosteriorSamples::column_names() const {
  std::vector<std::string> names;
  for (const auto& b : blocks) {
    if (b.scalar) {
      names.push_back(b.name);
      continue;
    }
    for (Eigen::Index k = 0; k < b.size; ++k) names.push_back(b.name + "[" + std::to_string(k + 1) + "]");
  }
  return names;
}

const ParameterBlock& PosteriorSamples::block(std::string_view name) const {
  for (const auto& b : blocks) {
    if (b.name == name) return b;
  }
  throw Error(ErrorCode::LayoutMismatch, "no block named '" + std::string(name) + "' in samples");
}

bool PosteriorSamples::contains(std::string_view name) const noexcept {
  return std::any_of(blocks.begin(), blocks.end(), [&](const ParameterBlock& b) { return b.name == name; });
}

Eigen::Index PosteriorSamples::column_index(std::string_view column_name) const {
  const auto names = column_names();
  const auto it = std::find(names.begin(), names.end(), column_name);
  if (it == names.end()) {
    throw Error(ErrorCode::LayoutMismatch, "no column named '" + std::string(column_name) + "' in samples");
  }
  return static_cast<Eigen::Index>(it - names.begin());
}

Eigen::MatrixXd PosteriorSamples::pooled(std::string_view block_name) const {
  const ParameterBlock& b = block(block_name);
  const Eigen::Index n = num_draws();
  Eigen::MatrixXd out(n * num_chains(), b.size);
  for (Eigen::Index c = 0; c < num_chains(); ++c) {
    out.middleRows(c * n, n) = chains[static_cast<std::size_t>(c)].middleCols(b.offset, b.size);
  }
  return out;
}

Eigen::MatrixXd PosteriorSamples::column(Eigen::Index index) const {
  if (index < 0 || index >= num_columns()) throw Error(ErrorCode::IndexOutOfRange, "column index out of range");
  Eigen::MatrixXd out(num_draws(), num_chains());
  for (Eigen::Index c = 0; c < num_chains(); ++c) out.col(c) = chains[static_cast<std::size_t>(c)].col(index);
  return out;
}

PosteriorSamples sample(const ModelSpec& model, const SamplerConfig& config) {
  check_config(config);
  std::vector<ChainResult> results(static_cast<std::size_t>(config.chains));
  auto guarded = [&](int c) {
    try {
      run_chain(model, config, c, results[static_cast<std::size_t>(c)]);
    } catch (...) {
      results[static_cast<std::size_t>(c)].error = std::current_exception();
    }
  };
  if (config.parallel && config.chains > 1) {
    std::vector<std::thread> threads;
    for (int c = 0; c < config.chains; ++c) threads.emplace_back(guarded, c);
    for (auto& t : threads) t.join();
  } else {
    for (int c = 0; c < config.chains; ++c) guarded(c);
  }

  PosteriorSamples out;
  out.blocks = model.layout.blocks();
  out.config = config;
  for (auto& r : results) {
    if (r.error) std::rethrow_exception(r.error);
    out.chains.push_back(std::move(r.draws));
    out.chain_info.push_back(r.info);
  }
  apply_report_rules(out, model.report);
  return out;
}

void apply_report_rules(PosteriorSamples& samples, const std::vector<ReportRule>& rules) {
  for (const auto& rule : rules) {
    const ParameterBlock source = samples.block(rule.source);
    ParameterBlock target = source;
    target.name = rule.target;
    target.kind = ConstraintKind::simplex;
    target.offset = samples.num_columns();
    for (auto& chain : samples.chains) {
      Eigen::MatrixXd grown(chain.rows(), chain.cols() + source.size);
      grown.leftCols(chain.cols()) = chain;
      for (Eigen::Index i = 0; i < chain.rows(); ++i) {
        const Eigen::VectorXd v = chain.row(i).segment(source.offset, source.size).transpose();
        grown.row(i).tail(source.size) = clr_inverse(v).values().transpose();
      }
      chain = std::move(grown);
    }
    samples.blocks.push_back(std::move(target));
  }
}

double rhat(const Eigen::MatrixXd& draws) {
  if (draws.cols() < 2) throw Error(ErrorCode::SingleChain, "rhat needs at least two chains");
  const Eigen::Index half = draws.rows() / 2;
  if (half < 2) throw Error(ErrorCode::InvalidParameter, "rhat needs at least four draws per chain");
  Eigen::MatrixXd split(half, 2 * draws.cols());
  for (Eigen::Index c = 0; c < draws.cols(); ++c) {
    split.col(2 * c) = draws.col(c).head(half);
    split.col(2 * c + 1) = draws.col(c).tail(half);
  }
  const ChainMoments mom = chain_moments(split);
  if (mom.within <= 0.0) {
    return mom.var_plus <= 0.0 ? std::numeric_limits<double>::quiet_NaN() : std::numeric_limits<double>::infinity();
  }
  return std::sqrt(mom.var_plus / mom.within);
}

double rhat(const PosteriorSamples& samples, Eigen::Index column) { return rhat(samples.column(column)); }

double rhat(const PosteriorSamples& samples, std::string_view column_name) {
  return rhat(samples, samples.column_index(column_name));
}

double ess(const Eigen::MatrixXd& draws) {
  const Eigen::Index n = draws.rows();
  const Eigen::Index m = draws.cols();
  if (n < 4) throw Error(ErrorCode::InvalidParameter, "ess needs at least four draws per chain");
  const ChainMoments mom = chain_moments(draws);
  if (!(mom.var_plus > 0.0)) return std::numeric_limits<double>::quiet_NaN();

  const Eigen::MatrixXd centered = draws.rowwise() - draws.colwise().mean();
  // Mean over chains of the lag-t autocovariance (biased, divided by n).
  auto mean_autocov = [&](Eigen::Index lag) {
    double total = 0.0;
    for (Eigen::Index c = 0; c < m; ++c) {
      total += centered.col(c).head(n - lag).dot(centered.col(c).tail(n - lag));
    }
    return total / (static_cast<double>(n) * static_cast<double>(m));
  };
  auto rho = [&](Eigen::Index lag) { return 1.0 - (mom.within - mean_autocov(lag)) / mom.var_plus; };

  double tau = -1.0;
  double previous_pair = std::numeric_limits<double>::infinity();
  for (Eigen::Index t = 0; t + 1 < n; t += 2) {
    double pair = (t == 0 ? 1.0 : rho(t)) + rho(t + 1);
    if (pair < 0.0) break;
    pair = std::min(pair, previous_pair);
    previous_pair = pair;
    tau += 2.0 * pair;
  }
  const double total = static_cast<double>(n * m);
  tau = std::max(tau, 1.0 / std::log10(std::max(total, 10.0)));
  return total / tau;
}

double ess(const PosteriorSamples& samples, Eigen::Index column) { return ess(samples.column(column)); }

double ess(const PosteriorSamples& samples, std::string_view column_name) {
  return ess(samples, samples.column_index(column_name));
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw Error(ErrorCode::EmptyInput, "quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * p;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

std::vector<SummaryRow> summarize(const PosteriorSamples& samples) {
  if (samples.num_chains() == 0 || samples.num_draws() == 0) {
    throw Error(ErrorCode::EmptyInput, "no draws to summarize");
  }
  const auto names = samples.column_names();
  std::vector<SummaryRow> rows;
  rows.reserve(names.size());
  for (Eigen::Index col = 0; col < samples.num_columns(); ++col) {
    const Eigen::MatrixXd draws = samples.column(col);
    SummaryRow row;
    row.parameter = names[static_cast<std::size_t>(col)];
    row.mean = draws.mean();
    const double count = static_cast<double>(draws.size());
    row.sd = count > 1 ? std::sqrt((draws.array() - row.mean).square().sum() / (count - 1.0)) : 0.0;
    std::vector<double> values(draws.data(), draws.data() + draws.size());
    row.q025 = quantile(values, 0.025);
    row.q50 = quantile(values, 0.5);
    row.q975 = quantile(values, 0.975);
    const bool diagnosable = samples.num_draws() >= 4;
    row.rhat = diagnosable && samples.num_chains() > 1 ? rhat(draws) : std::numeric_limits<double>::quiet_NaN();
    row.ess = diagnosable ? ess(draws) : std::numeric_limits<double>::quiet_NaN();
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace credal_mcdm
