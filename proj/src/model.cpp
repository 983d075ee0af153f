#include "chshsim/model.hpp"

#include <cstdio>

#include "chshsim/errors.hpp"

namespace chshsim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

std::string format_radians(Angle a) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", a.radians());
  return buf;
}

}  // namespace

std::optional<Angle> conditioning_angle(const ConditioningContext& context) {
  return std::visit(Overloaded{[](Unconditioned) -> std::optional<Angle> { return std::nullopt; },
                               [](OnAliceSetting c) -> std::optional<Angle> { return c.setting; },
                               [](OnBobSetting c) -> std::optional<Angle> { return c.setting; }},
                    context);
}

std::string to_string(const ConditioningContext& context) {
  return std::visit(
      Overloaded{[](Unconditioned) { return std::string("unconditioned"); },
                 [](OnAliceSetting c) { return "alice(" + format_radians(c.setting) + ")"; },
                 [](OnBobSetting c) { return "bob(" + format_radians(c.setting) + ")"; }},
      context);
}

std::string to_string(Side side) { return side == Side::Alice ? "alice" : "bob"; }

ModelSpec::ModelSpec(Definition definition) : def_(std::move(definition)) {
  if (def_.name.empty()) {
    throw InvalidInput("model name must not be empty");
  }
  if (static_cast<bool>(def_.outcome_a) != static_cast<bool>(def_.outcome_b)) {
    throw InvalidInput("model '" + def_.name + "' must define both outcome functions or neither");
  }
  if (def_.lambda_density && !def_.accepts_unconditioned && !def_.accepts_setting_conditioned) {
    throw InvalidInput("model '" + def_.name + "' has a density that accepts no context");
  }
  if (def_.density_bound && !(*def_.density_bound > 0.0)) {
    throw InvalidInput("model '" + def_.name + "' density bound must be positive");
  }
}

bool ModelSpec::supports(const ConditioningContext& context) const {
  if (!has_density()) return false;
  return std::holds_alternative<Unconditioned>(context) ? def_.accepts_unconditioned
                                                        : def_.accepts_setting_conditioned;
}

void ModelSpec::require_context(const ConditioningContext& context) const {
  if (!has_density()) {
    throw OracleOnly("model '" + name() + "' is oracle-only and has no hidden-variable density");
  }
  if (!supports(context)) {
    throw UnsupportedContext("model '" + name() + "' does not support conditioning context " +
                             to_string(context));
  }
}

Outcome ModelSpec::outcome_a(Angle setting, Angle lambda) const {
  if (!has_outcomes()) {
    throw OracleOnly("model '" + name() + "' is oracle-only and has no outcome functions");
  }
  return def_.outcome_a(setting, lambda);
}

Outcome ModelSpec::outcome_b(Angle setting, Angle lambda) const {
  if (!has_outcomes()) {
    throw OracleOnly("model '" + name() + "' is oracle-only and has no outcome functions");
  }
  return def_.outcome_b(setting, lambda);
}

Outcome ModelSpec::outcome(Side side, Angle setting, Angle lambda) const {
  return side == Side::Alice ? outcome_a(setting, lambda) : outcome_b(setting, lambda);
}

double ModelSpec::lambda_density(Angle lambda, const ConditioningContext& context) const {
  require_context(context);
  return def_.lambda_density(lambda, context);
}

std::optional<double> ModelSpec::analytic_correlation(Angle a, Angle b) const {
  if (!def_.analytic_correlation) return std::nullopt;
  return (*def_.analytic_correlation)(a, b);
}

std::vector<Angle> ModelSpec::outcome_breakpoints(Angle setting) const {
  return def_.outcome_breakpoints ? def_.outcome_breakpoints(setting) : std::vector<Angle>{};
}

std::vector<Angle> ModelSpec::density_breakpoints(const ConditioningContext& context) const {
  require_context(context);
  return def_.density_breakpoints ? def_.density_breakpoints(context) : std::vector<Angle>{};
}

std::vector<Angle> ModelSpec::density_zero_set(const ConditioningContext& context) const {
  require_context(context);
  return def_.density_zero_set ? def_.density_zero_set(context) : std::vector<Angle>{};
}

}  // namespace chshsim
