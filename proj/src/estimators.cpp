#include "chshsim/estimators.hpp"

#include <algorithm>
#include <cmath>

#include "chshsim/errors.hpp"
#include "chshsim/rng.hpp"

namespace chshsim {

namespace {

// Data are +-1, so the mean and the unbiased variance follow exactly from
// the count of +1 values; no floating summation order is involved.
CorrelationEstimate from_counts(SettingPair pair, std::uint64_t plus, std::uint64_t count) {
  CorrelationEstimate e;
  e.pair = pair;
  e.count = count;
  const double n = static_cast<double>(count);
  e.mean = (2.0 * static_cast<double>(plus) - n) / n;
  if (count > 1) {
    const double variance = std::max(0.0, n * (1.0 - e.mean * e.mean) / (n - 1.0));
    e.std_error = std::sqrt(variance / n);
  }
  return e;
}

}  // namespace

CorrelationEstimate estimate_correlation(std::span<const TrialRecord> records, SettingPair pair) {
  std::uint64_t plus = 0;
  std::uint64_t count = 0;
  for (const auto& r : records) {
    if (!(r.pair == pair)) continue;
    ++count;
    if (r.product == Outcome::plus()) ++plus;
  }
  if (count == 0) {
    throw InsufficientData("no records for setting pair " + pair.label());
  }
  return from_counts(pair, plus, count);
}

ChshReport combine_chsh(const std::array<CorrelationEstimate, 4>& correlations) {
  ChshReport report;
  report.correlations = correlations;
  double variance = 0.0;
  for (const auto& e : correlations) {
    report.s_value += e.pair.chsh_sign() * e.mean;
    variance += e.std_error * e.std_error;
  }
  report.s_std_error = std::sqrt(variance);
  return report;
}

ChshReport chsh_statistic(std::span<const TrialRecord> records) {
  std::array<std::uint64_t, 4> plus{};
  std::array<std::uint64_t, 4> count{};
  for (const auto& r : records) {
    const int i = r.pair.ordinal();
    ++count[i];
    if (r.product == Outcome::plus()) ++plus[i];
  }
  std::array<CorrelationEstimate, 4> correlations;
  for (const auto pair : SettingPair::all()) {
    const int i = pair.ordinal();
    if (count[i] == 0) {
      throw InsufficientData("no records for setting pair " + pair.label() +
                             "; all four pairs are needed for S");
    }
    correlations[i] = from_counts(pair, plus[i], count[i]);
  }
  return combine_chsh(correlations);
}

CounterfactualTrial counterfactual_trial(const ModelSpec& model, const Settings& settings, Angle lambda) {
  CounterfactualTrial t;
  t.lambda = lambda;
  t.a1 = model.outcome_a(settings.a1, lambda);
  t.a2 = model.outcome_a(settings.a2, lambda);
  t.b1 = model.outcome_b(settings.b1, lambda);
  t.b2 = model.outcome_b(settings.b2, lambda);
  t.s_trial = (t.a1 * t.b1).value() - (t.a1 * t.b2).value() + (t.a2 * t.b1).value() + (t.a2 * t.b2).value();
  return t;
}

double pointwise_c(const ModelSpec& model, const Settings& settings, Angle lambda) {
  const int a1 = model.outcome_a(settings.a1, lambda).value();
  const int a2 = model.outcome_a(settings.a2, lambda).value();
  const int b1 = model.outcome_b(settings.b1, lambda).value();
  const int b2 = model.outcome_b(settings.b2, lambda).value();
  return a1 * b1 - a1 * b2 + a2 * b1 + a2 * b2;
}

CorrelationEstimate marginal_estimate(std::span<const TrialRecord> records, Side side, int index) {
  const SettingPair label = side == Side::Alice ? SettingPair(index, 1) : SettingPair(1, index);
  std::uint64_t plus = 0;
  std::uint64_t count = 0;
  for (const auto& r : records) {
    const int used = side == Side::Alice ? r.pair.alice_index() : r.pair.bob_index();
    if (used != index) continue;
    const auto& outcome = side == Side::Alice ? r.a_outcome : r.b_outcome;
    if (!outcome) {
      throw InsufficientData("records carry products only; per-wing outcomes are needed for marginals");
    }
    ++count;
    if (*outcome == Outcome::plus()) ++plus;
  }
  if (count == 0) {
    throw InsufficientData("no records with " + to_string(side) + " setting " + std::to_string(index));
  }
  return from_counts(label, plus, count);
}

CounterfactualAverage counterfactual_average(const ModelSpec& model, const Settings& settings,
                                             const ConditioningContext& context, std::uint64_t samples,
                                             std::uint64_t seed) {
  if (samples < 1) {
    throw InvalidInput("counterfactual average needs at least one sample");
  }
  Substream rng(seed, Stream::Counterfactual, 0);
  // s_trial is +-2: count the +2s.
  std::uint64_t positive = 0;
  for (std::uint64_t i = 0; i < samples; ++i) {
    const Angle lambda = sample_lambda(model, context, rng);
    if (pointwise_c(model, settings, lambda) > 0) ++positive;
  }
  const auto half = from_counts(SettingPair(1, 1), positive, samples);
  return CounterfactualAverage{context, 2.0 * half.mean, 2.0 * half.std_error, samples};
}

double ks_two_sample(std::vector<double> x, std::vector<double> y) {
  if (x.empty() || y.empty()) {
    throw InsufficientData("KS statistic needs two non-empty samples");
  }
  std::sort(x.begin(), x.end());
  std::sort(y.begin(), y.end());
  const double nx = static_cast<double>(x.size());
  const double ny = static_cast<double>(y.size());
  std::size_t i = 0;
  std::size_t j = 0;
  double sup = 0.0;
  while (i < x.size() && j < y.size()) {
    const double v = std::min(x[i], y[j]);
    while (i < x.size() && x[i] == v) ++i;
    while (j < y.size() && y[j] == v) ++j;
    sup = std::max(sup, std::abs(static_cast<double>(i) / nx - static_cast<double>(j) / ny));
  }
  return sup;
}

double ks_critical_value(std::size_t n, std::size_t m, double alpha) {
  if (n == 0 || m == 0 || !(alpha > 0.0 && alpha < 1.0)) {
    throw InvalidInput("KS critical value needs positive sample sizes and alpha in (0, 1)");
  }
  const double c = std::sqrt(-0.5 * std::log(alpha / 2.0));
  const double nn = static_cast<double>(n);
  const double mm = static_cast<double>(m);
  return c * std::sqrt((nn + mm) / (nn * mm));
}

RegularityReport regularity_check(std::span<const TrialRecord> records, std::optional<double> threshold,
                                  double alpha) {
  std::array<std::vector<double>, 4> lambdas;
  for (const auto& r : records) {
    if (!r.lambda) {
      throw InsufficientData(
          "records do not retain lambda; rerun the experiment in debug mode (--debug-lambda)");
    }
    lambdas[r.pair.ordinal()].push_back(r.lambda->radians());
  }
  for (const auto pair : SettingPair::all()) {
    if (lambdas[pair.ordinal()].empty()) {
      throw InsufficientData("no records for setting pair " + pair.label());
    }
  }
  RegularityReport report;
  report.all_passed = true;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      RegularityEntry e;
      e.first = SettingPair::from_ordinal(i);
      e.second = SettingPair::from_ordinal(j);
      e.first_count = lambdas[i].size();
      e.second_count = lambdas[j].size();
      e.sup_distance = ks_two_sample(lambdas[i], lambdas[j]);
      e.threshold = threshold.value_or(ks_critical_value(e.first_count, e.second_count, alpha));
      e.passed = e.sup_distance < e.threshold;
      report.all_passed = report.all_passed && e.passed;
      report.entries.push_back(e);
    }
  }
  return report;
}

}  // namespace chshsim
