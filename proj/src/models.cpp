#include "chshsim/models.hpp"

#include <cmath>
#include <numbers>

#include "chshsim/errors.hpp"

namespace chshsim {

namespace {

using std::numbers::pi;

std::vector<Angle> quarter_turn_points(Angle u) {
  return {Angle(u.radians() + pi / 2), Angle(u.radians() - pi / 2)};
}

Angle setting_of(const ConditioningContext& context) {
  auto angle = conditioning_angle(context);
  if (!angle) {
    throw UnsupportedContext("context carries no setting");
  }
  return *angle;
}

// Inverse CDF of |cos(x)|/4 on [0, 2pi): each quarter period carries mass
// 1/4. On even quarters |cos| falls from 1 to 0 and the local CDF is sin(y);
// on odd quarters it rises and the local CDF is 1 - cos(y) = 2 sin^2(y/2).
double abs_cos_inverse_cdf(double u) {
  const double scaled = 4.0 * u;
  const int quarter = std::min(3, static_cast<int>(scaled));
  const double r = scaled - quarter;
  const double offset = (quarter % 2 == 0) ? std::asin(r) : 2.0 * std::asin(std::sqrt(0.5 * r));
  return quarter * (pi / 2) + offset;
}

}  // namespace

Outcome sign_outcome_a(Angle setting, Angle lambda) {
  return sign_conv(std::cos(lambda.radians() - setting.radians()));
}

Outcome sign_outcome_b(Angle setting, Angle lambda) {
  return -sign_conv(std::cos(lambda.radians() - setting.radians()));
}

ModelSpec feldmann_model() {
  ModelSpec::Definition def;
  def.name = "feldmann";
  def.outcome_a = sign_outcome_a;
  def.outcome_b = sign_outcome_b;
  def.accepts_setting_conditioned = true;
  def.lambda_density = [](Angle lambda, const ConditioningContext& context) {
    return 0.25 * std::abs(std::cos(lambda.radians() - setting_of(context).radians()));
  };
  def.analytic_correlation = [](Angle a, Angle b) { return -std::cos(a.radians() - b.radians()); };
  def.inverse_cdf = [](double u, const ConditioningContext& context) {
    return Angle(abs_cos_inverse_cdf(u) + setting_of(context).radians());
  };
  def.density_bound = 0.25;
  def.outcome_breakpoints = quarter_turn_points;
  def.density_breakpoints = [](const ConditioningContext& c) { return quarter_turn_points(setting_of(c)); };
  def.density_zero_set = [](const ConditioningContext& c) { return quarter_turn_points(setting_of(c)); };
  return ModelSpec(std::move(def));
}

ModelSpec uniform_sign_model() {
  ModelSpec::Definition def;
  def.name = "uniform-sign";
  def.outcome_a = sign_outcome_a;
  def.outcome_b = sign_outcome_b;
  def.accepts_unconditioned = true;
  def.lambda_density = [](Angle, const ConditioningContext&) { return 1.0 / kTwoPi; };
  def.analytic_correlation = [](Angle a, Angle b) { return -1.0 + 2.0 * separation(a, b) / pi; };
  def.inverse_cdf = [](double u, const ConditioningContext&) { return Angle(kTwoPi * u); };
  def.density_bound = 1.0 / kTwoPi;
  def.outcome_breakpoints = quarter_turn_points;
  def.density_breakpoints = [](const ConditioningContext&) { return std::vector<Angle>{}; };
  def.density_zero_set = [](const ConditioningContext&) { return std::vector<Angle>{}; };
  return ModelSpec(std::move(def));
}

ModelSpec singlet_oracle() {
  ModelSpec::Definition def;
  def.name = "singlet-oracle";
  def.analytic_correlation = [](Angle a, Angle b) { return -std::cos(a.radians() - b.radians()); };
  return ModelSpec(std::move(def));
}

void ModelCatalog::add(ModelSpec model) {
  const std::string name = model.name();
  if (!entries_.emplace(name, std::move(model)).second) {
    throw InvalidInput("model '" + name + "' is already registered");
  }
}

const ModelSpec& ModelCatalog::get(const std::string& name) const {
  auto it = entries_.find(name);
  if (it == entries_.end()) {
    std::string known;
    for (const auto& entry : entries_) {
      known += (known.empty() ? "" : ", ") + entry.first;
    }
    throw UnknownModel("unknown model '" + name + "'; available models: " + known);
  }
  return it->second;
}

std::vector<std::string> ModelCatalog::names() const {
  std::vector<std::string> out;
  out.reserve(entries_.size());
  for (const auto& entry : entries_) out.push_back(entry.first);
  return out;
}

const ModelCatalog& ModelCatalog::standard() {
  static const ModelCatalog catalog = [] {
    ModelCatalog c;
    c.add(feldmann_model());
    c.add(uniform_sign_model());
    c.add(singlet_oracle());
    return c;
  }();
  return catalog;
}

}  // namespace chshsim
