#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "chshsim/angle.hpp"
#include "chshsim/experiment.hpp"
#include "chshsim/model.hpp"

namespace chshsim {

/// Mean of +-1 data with its Monte Carlo standard error (sample standard
/// deviation, n - 1 denominator, over sqrt(n); zero when n == 1).
struct CorrelationEstimate {
  SettingPair pair{1, 1};
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t count = 0;
};

struct ChshReport {
  std::array<CorrelationEstimate, 4> correlations;  // canonical pair order
  double s_value = 0.0;
  double s_std_error = 0.0;
};

/// Every outcome of one hidden-variable value under all four settings.
/// Only a simulator can produce this: in an experiment three of the four
/// products are never measured.
struct CounterfactualTrial {
  Angle lambda;
  Outcome a1 = Outcome::plus();
  Outcome a2 = Outcome::plus();
  Outcome b1 = Outcome::plus();
  Outcome b2 = Outcome::plus();
  double s_trial = 0.0;
};

/// Throws InsufficientData when no record has `pair`.
CorrelationEstimate estimate_correlation(std::span<const TrialRecord> records, SettingPair pair);

/// S = E11 - E12 + E21 + E22 with root-sum-square standard error.
/// Throws InsufficientData naming the first missing pair.
ChshReport chsh_statistic(std::span<const TrialRecord> records);

/// Combine four correlation estimates into a report.
ChshReport combine_chsh(const std::array<CorrelationEstimate, 4>& correlations);

CounterfactualTrial counterfactual_trial(const ModelSpec& model, const Settings& settings, Angle lambda);

/// C(lambda) = A1 B1 - A1 B2 + A2 B1 + A2 B2 evaluated at one lambda.
double pointwise_c(const ModelSpec& model, const Settings& settings, Angle lambda);

/// Empirical <A_i> (side Alice) or <B_k> (side Bob) over records measured
/// with that setting. The returned pair names the index on `side`; the
/// other index is 1. Throws InsufficientData when wing outcomes are missing.
CorrelationEstimate marginal_estimate(std::span<const TrialRecord> records, Side side, int index);

/// Ensemble mean of s_trial with lambda drawn from one chosen density.
struct CounterfactualAverage {
  ConditioningContext context;
  double mean = 0.0;
  double std_error = 0.0;
  std::uint64_t count = 0;
};

CounterfactualAverage counterfactual_average(const ModelSpec& model, const Settings& settings,
                                             const ConditioningContext& context, std::uint64_t samples,
                                             std::uint64_t seed);

/// Two-sample Kolmogorov-Smirnov statistic: sup |F_x - F_y|.
double ks_two_sample(std::vector<double> x, std::vector<double> y);

/// Asymptotic two-sample KS critical value at significance alpha.
double ks_critical_value(std::size_t n, std::size_t m, double alpha);

struct RegularityEntry {
  SettingPair first{1, 1};
  SettingPair second{1, 1};
  std::size_t first_count = 0;
  std::size_t second_count = 0;
  double sup_distance = 0.0;
  double threshold = 0.0;
  bool passed = false;
};

struct RegularityReport {
  std::vector<RegularityEntry> entries;  // the 6 unordered pairs of setting pairs
  bool all_passed = false;
};

/// Compare the empirical lambda distributions of every two setting pairs.
/// With a fixed threshold every comparison uses it; otherwise each uses the
/// KS critical value at `alpha` for its sample sizes.
/// Throws InsufficientData when lambda was not retained or a pair is empty.
RegularityReport regularity_check(std::span<const TrialRecord> records,
                                  std::optional<double> threshold = std::nullopt, double alpha = 1e-3);

}  // namespace chshsim
