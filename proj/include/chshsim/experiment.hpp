#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chshsim/angle.hpp"
#include "chshsim/model.hpp"
#include "chshsim/models.hpp"
#include "chshsim/rng.hpp"

namespace chshsim {

struct ExperimentConfig {
  std::string model = "feldmann";
  Settings settings = Settings::chsh_optimal();
  /// Probabilities of (1,1), (1,2), (2,1), (2,2), in that order.
  std::array<double, 4> pair_probabilities{0.25, 0.25, 0.25, 0.25};
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  /// Which wing's setting the density is conditioned on, for models whose
  /// density depends on a setting. Ignored for measurement-independent models.
  Side conditioning_side = Side::Alice;
  std::uint64_t chunk_size = 65536;

  /// Throws ConfigError.
  void validate() const;

  /// All trials on one pair, i.e. probability 1 for that pair.
  static std::array<double, 4> only(SettingPair pair);
};

/// One simulated event. Per-wing outcomes and lambda are present for freshly
/// simulated records; records read back from an event table carry only the
/// product (and lambda when it was written).
struct TrialRecord {
  std::uint64_t index = 0;  // 1-based event number
  SettingPair pair{1, 1};
  std::optional<Outcome> a_outcome;
  std::optional<Outcome> b_outcome;
  Outcome product = Outcome::plus();
  std::optional<Angle> lambda;
};

/// Density conditioning used for a trial on `pair` under `config`.
ConditioningContext context_for(const ModelSpec& model, const ExperimentConfig& config, SettingPair pair);

/// Draw one lambda from the model's density under `context`. Uses the
/// model's inverse CDF (one uniform draw) when available, otherwise
/// rejection sampling under the model's density bound.
/// Throws OracleOnly / UnsupportedContext / ModelError.
Angle sample_lambda(const ModelSpec& model, const ConditioningContext& context, Substream& rng);

/// Pick the setting pair whose cumulative probability interval contains u.
SettingPair choose_pair(const std::array<double, 4>& probabilities, double u);

/// Run the idealized experiment: for each trial draw a setting pair, then
/// lambda from the (possibly setting-conditioned) density, then both
/// outcomes. Work is split into chunks of config.chunk_size trials, each with
/// its own substreams, so the output is identical for any worker count.
/// workers == 0 picks the hardware concurrency.
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config, const ModelSpec& model,
                                        unsigned workers = 0);
std::vector<TrialRecord> run_experiment(const ExperimentConfig& config,
                                        const ModelCatalog& catalog = ModelCatalog::standard(),
                                        unsigned workers = 0);

}  // namespace chshsim
