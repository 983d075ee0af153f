#include "chshsim/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <thread>

#include "chshsim/errors.hpp"

namespace chshsim {

void ExperimentConfig::validate() const {
  if (model.empty()) {
    throw ConfigError("config: model name is empty");
  }
  if (trials < 1) {
    throw ConfigError("config: trials must be at least 1");
  }
  if (chunk_size < 1) {
    throw ConfigError("config: chunk_size must be at least 1");
  }
  double sum = 0.0;
  for (double p : pair_probabilities) {
    if (!std::isfinite(p) || p < 0.0) {
      throw ConfigError("config: pair probabilities must be finite and non-negative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    throw ConfigError("config: pair probabilities must sum to 1");
  }
}

std::array<double, 4> ExperimentConfig::only(SettingPair pair) {
  std::array<double, 4> p{0.0, 0.0, 0.0, 0.0};
  p[pair.ordinal()] = 1.0;
  return p;
}

ConditioningContext context_for(const ModelSpec& model, const ExperimentConfig& config, SettingPair pair) {
  if (model.supports(Unconditioned{})) {
    return Unconditioned{};
  }
  if (config.conditioning_side == Side::Alice) {
    return OnAliceSetting{config.settings.alice(pair.alice_index())};
  }
  return OnBobSetting{config.settings.bob(pair.bob_index())};
}

Angle sample_lambda(const ModelSpec& model, const ConditioningContext& context, Substream& rng) {
  model.require_context(context);
  if (model.inverse_cdf()) {
    return model.inverse_cdf()(rng.uniform(), context);
  }
  const auto bound = model.density_bound();
  if (!bound) {
    throw ModelError("model '" + model.name() + "' has neither an inverse CDF nor a density bound");
  }
  // Uniform proposal on the circle.
  for (;;) {
    const Angle candidate(kTwoPi * rng.uniform());
    if (rng.uniform() * *bound < model.lambda_density(candidate, context)) {
      return candidate;
    }
  }
}

SettingPair choose_pair(const std::array<double, 4>& probabilities, double u) {
  double cumulative = 0.0;
  int last_positive = 0;
  for (int i = 0; i < 4; ++i) {
    if (probabilities[i] <= 0.0) continue;
    last_positive = i;
    cumulative += probabilities[i];
    if (u < cumulative) return SettingPair::from_ordinal(i);
  }
  // Rounding left the total a hair below 1.
  return SettingPair::from_ordinal(last_positive);
}

namespace {

void fill_chunk(const ExperimentConfig& config, const ModelSpec& model, std::uint64_t chunk,
                std::span<TrialRecord> out) {
  Substream pair_rng(config.seed, Stream::SettingChoice, chunk);
  Substream lambda_rng(config.seed, Stream::HiddenVariable, chunk);
  const std::uint64_t first = chunk * config.chunk_size;
  for (std::size_t j = 0; j < out.size(); ++j) {
    const SettingPair pair = choose_pair(config.pair_probabilities, pair_rng.uniform());
    const Angle lambda = sample_lambda(model, context_for(model, config, pair), lambda_rng);
    const Outcome a = model.outcome_a(config.settings.alice(pair.alice_index()), lambda);
    const Outcome b = model.outcome_b(config.settings.bob(pair.bob_index()), lambda);
    out[j] = TrialRecord{first + j + 1, pair, a, b, a * b, lambda};
  }
}

}  // namespace

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config, const ModelSpec& model,
                                        unsigned workers) {
  config.validate();
  if (!model.sampleable()) {
    throw OracleOnly("model '" + model.name() + "' is oracle-only and cannot be sampled");
  }
  for (const auto pair : SettingPair::all()) {
    if (config.pair_probabilities[pair.ordinal()] > 0.0) {
      model.require_context(context_for(model, config, pair));
    }
  }

  std::vector<TrialRecord> records(config.trials);
  const std::uint64_t chunks = (config.trials + config.chunk_size - 1) / config.chunk_size;
  if (workers == 0) {
    workers = std::max(1u, std::thread::hardware_concurrency());
  }
  workers = static_cast<unsigned>(std::min<std::uint64_t>(workers, chunks));

  std::atomic<std::uint64_t> next_chunk{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto work = [&] {
    try {
      for (std::uint64_t c = next_chunk++; c < chunks; c = next_chunk++) {
        const std::uint64_t begin = c * config.chunk_size;
        const std::uint64_t end = std::min(config.trials, begin + config.chunk_size);
        fill_chunk(config, model, c, std::span(records).subspan(begin, end - begin));
      }
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
      next_chunk = chunks;
    }
  };

  if (workers <= 1) {
    work();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
  }
  if (failure) std::rethrow_exception(failure);
  return records;
}

std::vector<TrialRecord> run_experiment(const ExperimentConfig& config, const ModelCatalog& catalog,
                                        unsigned workers) {
  config.validate();
  return run_experiment(config, catalog.get(config.model), workers);
}

}  // namespace chshsim
