#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "chshsim/angle.hpp"
#include "chshsim/model.hpp"

namespace chshsim {

enum class QuadratureMethod { CompositeSimpson, Adaptive };

struct QuadratureSettings {
  QuadratureMethod method = QuadratureMethod::CompositeSimpson;
  /// Panels per smooth piece for the composite rule; even and >= 64.
  int panels = 512;
  /// Absolute tolerance for the adaptive rule.
  double tolerance = 1e-12;
  std::uint64_t max_evaluations = 20'000'000;

  /// Throws InvalidInput.
  void validate() const;
};

/// Integrate f over [lo, hi], splitting at the given breakpoints so that
/// each piece is smooth. Piece endpoints are evaluated one-sidedly (nudged
/// into the piece) so a jump exactly at a breakpoint never leaks its other
/// side's value into the rule. Throws QuadratureBudgetExceeded.
double integrate_piecewise(const std::function<double(double)>& f, double lo, double hi,
                           std::vector<double> breakpoints, const QuadratureSettings& q = {});

/// Integral over the full circle [0, 2pi).
double integrate_circle(const std::function<double(Angle)>& f, const std::vector<Angle>& breakpoints,
                        const QuadratureSettings& q = {});

/// int A(a, l) B(b, l) p(l | context) dl, split at every sign flip of the
/// outcomes and every kink of the density.
double quad_correlation(const ModelSpec& model, Angle a, Angle b, const ConditioningContext& context,
                        const QuadratureSettings& q = {});

/// Single-wing mean: int A(setting, l) p(l | context) dl (or B for Bob).
double quad_marginal(const ModelSpec& model, Side side, Angle setting, const ConditioningContext& context,
                     const QuadratureSettings& q = {});

/// int p(l | context) dl; 1 for a valid model.
double density_normalization(const ModelSpec& model, const ConditioningContext& context,
                             const QuadratureSettings& q = {});

/// E11 - E12 + E21 + E22 for a correlation function.
double analytic_chsh(const std::function<double(Angle, Angle)>& correlation, const Settings& settings);

/// S for a model: closed form when it has one, otherwise quadrature with
/// the density conditioned on `side`'s setting (or unconditioned).
double model_chsh(const ModelSpec& model, const Settings& settings, Side side = Side::Alice,
                  const QuadratureSettings& q = {});

inline constexpr double kMiTolerance = 1e-9;

struct MiDiagnostic {
  ConditioningContext first;
  ConditioningContext second;
  double tv_distance = 0.0;
  bool mi_respected = true;
};

/// Total-variation distance 1/2 int |p1 - p2| between two conditional
/// hidden-variable densities. Crossings of p1 and p2 are located by a grid
/// scan plus bisection and added as breakpoints.
double tv_distance(const ModelSpec& model, const ConditioningContext& first, const ConditioningContext& second,
                   const QuadratureSettings& q = {});

MiDiagnostic mi_diagnostic(const ModelSpec& model, const ConditioningContext& first,
                           const ConditioningContext& second, const QuadratureSettings& q = {});

struct CfPairEntry {
  SettingPair pair{1, 1};
  ConditioningContext context;
  std::vector<Angle> zero_set;
  /// False when the model has no zero-set hook and the set came from a grid scan.
  bool exact = true;
};

/// Counterfactual freedom, p(a_i, b_k | l) != 0 for every l, can be kept for
/// a setting-conditioned density only if the unconditional p(l) vanishes
/// wherever some p(l | a_i, b_k) does. That is possible exactly when the
/// union of the zero sets has measure below the whole circle; isolated
/// points always qualify.
struct CfFreedomReport {
  std::string model;
  bool applicable = false;
  std::vector<CfPairEntry> pairs;
  /// Points where the unconditional density must vanish.
  std::vector<Angle> required_unconditional_zeros;
  /// Lebesgue measure of that set (0 for isolated points).
  double excluded_measure = 0.0;
  bool cf_respected = false;
  std::string note;
};

CfFreedomReport cf_freedom_report(const ModelSpec& model, const Settings& settings, Side side = Side::Alice);

}  // namespace chshsim
