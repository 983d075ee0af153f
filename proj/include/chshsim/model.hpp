#pragma once

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "chshsim/angle.hpp"

namespace chshsim {

struct Unconditioned {
  friend bool operator==(Unconditioned, Unconditioned) = default;
};
struct OnAliceSetting {
  Angle setting;
  friend bool operator==(OnAliceSetting, OnAliceSetting) = default;
};
struct OnBobSetting {
  Angle setting;
  friend bool operator==(OnBobSetting, OnBobSetting) = default;
};

/// What the hidden-variable density is allowed to depend on. A model that
/// respects measurement independence only accepts Unconditioned.
using ConditioningContext = std::variant<Unconditioned, OnAliceSetting, OnBobSetting>;

std::optional<Angle> conditioning_angle(const ConditioningContext& context);
std::string to_string(const ConditioningContext& context);

enum class Side { Alice, Bob };
std::string to_string(Side side);

using OutcomeFn = std::function<Outcome(Angle setting, Angle lambda)>;
using DensityFn = std::function<double(Angle lambda, const ConditioningContext& context)>;
using CorrelationFn = std::function<double(Angle a, Angle b)>;
/// Maps u in [0, 1) to a draw from the density for the given context.
using InverseCdfFn = std::function<Angle(double u, const ConditioningContext& context)>;
using BreakpointFn = std::function<std::vector<Angle>(Angle setting)>;
using ContextPointsFn = std::function<std::vector<Angle>(const ConditioningContext& context)>;

/// A deterministic local hidden-variable model.
///
/// Outcome functions see only their own wing's setting and lambda, so
/// locality is structural. A model without outcome functions and density is
/// oracle-only: it can report a closed-form correlation but cannot be
/// sampled. The optional hooks (inverse CDF, breakpoints, zero sets) let the
/// sampler and the quadrature take exact fast paths; without them they fall
/// back to rejection sampling and adaptive integration.
class ModelSpec {
 public:
  struct Definition {
    std::string name;
    OutcomeFn outcome_a;
    OutcomeFn outcome_b;
    DensityFn lambda_density;
    bool accepts_unconditioned = false;
    bool accepts_setting_conditioned = false;
    std::optional<CorrelationFn> analytic_correlation;
    InverseCdfFn inverse_cdf;
    /// Upper bound of the density; envelope for rejection sampling.
    std::optional<double> density_bound;
    /// Points where an outcome function changes sign for a given setting.
    BreakpointFn outcome_breakpoints;
    /// Points where the density is not smooth for a given context.
    ContextPointsFn density_breakpoints;
    /// Exact zero set of the density for a given context.
    ContextPointsFn density_zero_set;
  };

  /// Throws InvalidInput on an empty name, on exactly one outcome function,
  /// or on a density that accepts no context.
  explicit ModelSpec(Definition definition);

  [[nodiscard]] const std::string& name() const { return def_.name; }
  [[nodiscard]] bool has_outcomes() const { return static_cast<bool>(def_.outcome_a); }
  [[nodiscard]] bool has_density() const { return static_cast<bool>(def_.lambda_density); }
  [[nodiscard]] bool sampleable() const { return has_outcomes() && has_density(); }
  [[nodiscard]] bool respects_measurement_independence() const {
    return has_density() && def_.accepts_unconditioned && !def_.accepts_setting_conditioned;
  }
  [[nodiscard]] bool supports(const ConditioningContext& context) const;

  // These throw OracleOnly when the model lacks the corresponding piece,
  // and lambda_density throws UnsupportedContext for a rejected context.
  [[nodiscard]] Outcome outcome_a(Angle setting, Angle lambda) const;
  [[nodiscard]] Outcome outcome_b(Angle setting, Angle lambda) const;
  [[nodiscard]] Outcome outcome(Side side, Angle setting, Angle lambda) const;
  [[nodiscard]] double lambda_density(Angle lambda, const ConditioningContext& context) const;
  void require_context(const ConditioningContext& context) const;

  [[nodiscard]] bool has_analytic_correlation() const { return def_.analytic_correlation.has_value(); }
  [[nodiscard]] std::optional<double> analytic_correlation(Angle a, Angle b) const;

  [[nodiscard]] const InverseCdfFn& inverse_cdf() const { return def_.inverse_cdf; }
  [[nodiscard]] std::optional<double> density_bound() const { return def_.density_bound; }
  [[nodiscard]] std::vector<Angle> outcome_breakpoints(Angle setting) const;
  [[nodiscard]] std::vector<Angle> density_breakpoints(const ConditioningContext& context) const;
  [[nodiscard]] bool has_density_zero_set() const { return static_cast<bool>(def_.density_zero_set); }
  [[nodiscard]] std::vector<Angle> density_zero_set(const ConditioningContext& context) const;

 private:
  Definition def_;
};

}  // namespace chshsim
