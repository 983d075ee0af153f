#include "chshsim/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "chshsim/errors.hpp"

namespace chshsim {

namespace {

class Budget {
 public:
  explicit Budget(std::uint64_t limit) : limit_(limit) {}
  void spend(std::uint64_t n) {
    used_ += n;
    if (used_ > limit_) {
      throw QuadratureBudgetExceeded("quadrature exceeded " + std::to_string(limit_) + " evaluations");
    }
  }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

double composite_simpson(const std::function<double(double)>& f, double lo, double hi, double f_lo,
                         double f_hi, int panels) {
  const double h = (hi - lo) / panels;
  double odd = 0.0;
  double even = 0.0;
  for (int i = 1; i < panels; ++i) {
    const double v = f(lo + i * h);
    (i % 2 == 1 ? odd : even) += v;
  }
  return h / 3.0 * (f_lo + 4.0 * odd + 2.0 * even + f_hi);
}

double adaptive_step(const std::function<double(double)>& f, double lo, double hi, double f_lo, double f_mid,
                     double f_hi, double whole, double tol, int depth, Budget& budget) {
  const double mid = 0.5 * (lo + hi);
  const double lm = 0.5 * (lo + mid);
  const double rm = 0.5 * (mid + hi);
  budget.spend(2);
  const double f_lm = f(lm);
  const double f_rm = f(rm);
  const double left = (mid - lo) / 6.0 * (f_lo + 4.0 * f_lm + f_mid);
  const double right = (hi - mid) / 6.0 * (f_mid + 4.0 * f_rm + f_hi);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_step(f, lo, mid, f_lo, f_lm, f_mid, left, 0.5 * tol, depth - 1, budget) +
         adaptive_step(f, mid, hi, f_mid, f_rm, f_hi, right, 0.5 * tol, depth - 1, budget);
}

std::vector<double> as_radians(const std::vector<Angle>& angles) {
  std::vector<double> out;
  out.reserve(angles.size());
  for (const auto& a : angles) out.push_back(a.radians());
  return out;
}

}  // namespace

void QuadratureSettings::validate() const {
  if (method == QuadratureMethod::CompositeSimpson && (panels < 64 || panels % 2 != 0)) {
    throw InvalidInput("composite Simpson needs an even panel count of at least 64");
  }
  if (method == QuadratureMethod::Adaptive && !(tolerance > 0.0)) {
    throw InvalidInput("adaptive quadrature needs a positive tolerance");
  }
  if (max_evaluations == 0) {
    throw InvalidInput("quadrature evaluation budget must be positive");
  }
}

double integrate_piecewise(const std::function<double(double)>& f, double lo, double hi,
                           std::vector<double> breakpoints, const QuadratureSettings& q) {
  q.validate();
  if (!(hi > lo)) return 0.0;
  std::vector<double> cuts{lo, hi};
  for (double b : breakpoints) {
    if (b > lo && b < hi) cuts.push_back(b);
  }
  std::sort(cuts.begin(), cuts.end());
  // Pieces shorter than this are dropped; their contribution is below any
  // tolerance used here.
  constexpr double kMinPiece = 1e-13;
  std::vector<double> edges{cuts.front()};
  for (std::size_t i = 1; i < cuts.size(); ++i) {
    if (cuts[i] - edges.back() > kMinPiece) edges.push_back(cuts[i]);
  }
  if (edges.size() == 1) return 0.0;
  edges.back() = hi;

  Budget budget(q.max_evaluations);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
    const double a = edges[i];
    const double b = edges[i + 1];
    const double len = b - a;
    const double nudge = std::min(0.25 * len, std::max(1e-10 * len, 1e-14));
    const double f_a = f(a + nudge);
    const double f_b = f(b - nudge);
    if (q.method == QuadratureMethod::CompositeSimpson) {
      budget.spend(static_cast<std::uint64_t>(q.panels) + 1);
      total += composite_simpson(f, a, b, f_a, f_b, q.panels);
    } else {
      budget.spend(3);
      const double f_m = f(0.5 * (a + b));
      const double whole = len / 6.0 * (f_a + 4.0 * f_m + f_b);
      total += adaptive_step(f, a, b, f_a, f_m, f_b, whole, q.tolerance * len / (hi - lo), 50, budget);
    }
  }
  return total;
}

double integrate_circle(const std::function<double(Angle)>& f, const std::vector<Angle>& breakpoints,
                        const QuadratureSettings& q) {
  return integrate_piecewise([&f](double x) { return f(Angle(x)); }, 0.0, kTwoPi, as_radians(breakpoints), q);
}

double quad_correlation(const ModelSpec& model, Angle a, Angle b, const ConditioningContext& context,
                        const QuadratureSettings& q) {
  model.require_context(context);
  if (!model.has_outcomes()) {
    throw OracleOnly("model '" + model.name() + "' has no outcome functions");
  }
  std::vector<Angle> cuts = model.outcome_breakpoints(a);
  for (auto p : model.outcome_breakpoints(b)) cuts.push_back(p);
  for (auto p : model.density_breakpoints(context)) cuts.push_back(p);
  return integrate_circle(
      [&](Angle lambda) {
        return (model.outcome_a(a, lambda) * model.outcome_b(b, lambda)).value() *
               model.lambda_density(lambda, context);
      },
      cuts, q);
}

double quad_marginal(const ModelSpec& model, Side side, Angle setting, const ConditioningContext& context,
                     const QuadratureSettings& q) {
  model.require_context(context);
  if (!model.has_outcomes()) {
    throw OracleOnly("model '" + model.name() + "' has no outcome functions");
  }
  std::vector<Angle> cuts = model.outcome_breakpoints(setting);
  for (auto p : model.density_breakpoints(context)) cuts.push_back(p);
  return integrate_circle(
      [&](Angle lambda) {
        return model.outcome(side, setting, lambda).value() * model.lambda_density(lambda, context);
      },
      cuts, q);
}

double density_normalization(const ModelSpec& model, const ConditioningContext& context,
                             const QuadratureSettings& q) {
  return integrate_circle([&](Angle lambda) { return model.lambda_density(lambda, context); },
                          model.density_breakpoints(context), q);
}

double analytic_chsh(const std::function<double(Angle, Angle)>& correlation, const Settings& s) {
  return correlation(s.a1, s.b1) - correlation(s.a1, s.b2) + correlation(s.a2, s.b1) + correlation(s.a2, s.b2);
}

double model_chsh(const ModelSpec& model, const Settings& settings, Side side, const QuadratureSettings& q) {
  if (model.has_analytic_correlation()) {
    return analytic_chsh([&](Angle a, Angle b) { return *model.analytic_correlation(a, b); }, settings);
  }
  double s = 0.0;
  for (const auto pair : SettingPair::all()) {
    const Angle a = settings.alice(pair.alice_index());
    const Angle b = settings.bob(pair.bob_index());
    ConditioningContext context = Unconditioned{};
    if (!model.supports(context)) {
      context = side == Side::Alice ? ConditioningContext{OnAliceSetting{a}} : ConditioningContext{OnBobSetting{b}};
    }
    s += pair.chsh_sign() * quad_correlation(model, a, b, context, q);
  }
  return s;
}

double tv_distance(const ModelSpec& model, const ConditioningContext& first, const ConditioningContext& second,
                   const QuadratureSettings& q) {
  auto diff = [&](double x) {
    const Angle lambda(x);
    return model.lambda_density(lambda, first) - model.lambda_density(lambda, second);
  };
  std::vector<double> cuts = as_radians(model.density_breakpoints(first));
  for (auto p : model.density_breakpoints(second)) cuts.push_back(p.radians());

  // Kinks of |p1 - p2| where the densities cross.
  constexpr int kScan = 4096;
  const double step = kTwoPi / kScan;
  double x0 = 0.0;
  double d0 = diff(x0);
  for (int i = 1; i <= kScan; ++i) {
    const double x1 = i * step;
    const double d1 = diff(x1);
    if (d0 == 0.0) {
      cuts.push_back(x0);
    } else if (d0 * d1 < 0.0) {
      double lo = x0;
      double hi = x1;
      double d_lo = d0;
      for (int it = 0; it < 80 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        const double d_mid = diff(mid);
        if ((d_mid < 0.0) == (d_lo < 0.0)) {
          lo = mid;
          d_lo = d_mid;
        } else {
          hi = mid;
        }
      }
      cuts.push_back(0.5 * (lo + hi));
    }
    x0 = x1;
    d0 = d1;
  }
  return 0.5 * integrate_piecewise([&](double x) { return std::abs(diff(x)); }, 0.0, kTwoPi, cuts, q);
}

MiDiagnostic mi_diagnostic(const ModelSpec& model, const ConditioningContext& first,
                           const ConditioningContext& second, const QuadratureSettings& q) {
  MiDiagnostic d{first, second, tv_distance(model, first, second, q), true};
  d.mi_respected = d.tv_distance < kMiTolerance;
  return d;
}

CfFreedomReport cf_freedom_report(const ModelSpec& model, const Settings& settings, Side side) {
  CfFreedomReport report;
  report.model = model.name();
  if (!model.has_density()) {
    report.note = "not applicable: oracle-only model has no hidden-variable density";
    return report;
  }
  report.applicable = true;

  constexpr int kScan = 10000;
  std::vector<bool> scanned_zero(kScan, false);
  for (const auto pair : SettingPair::all()) {
    CfPairEntry entry;
    entry.pair = pair;
    if (model.supports(Unconditioned{})) {
      entry.context = Unconditioned{};
    } else if (side == Side::Alice) {
      entry.context = OnAliceSetting{settings.alice(pair.alice_index())};
    } else {
      entry.context = OnBobSetting{settings.bob(pair.bob_index())};
    }
    if (model.has_density_zero_set()) {
      entry.zero_set = model.density_zero_set(entry.context);
    } else {
      entry.exact = false;
      for (int i = 0; i < kScan; ++i) {
        const Angle lambda(kTwoPi * i / kScan);
        if (model.lambda_density(lambda, entry.context) <= 0.0) {
          entry.zero_set.push_back(lambda);
          scanned_zero[i] = true;
        }
      }
    }
    std::sort(entry.zero_set.begin(), entry.zero_set.end());
    for (auto z : entry.zero_set) report.required_unconditional_zeros.push_back(z);
    report.pairs.push_back(std::move(entry));
  }
  auto& zeros = report.required_unconditional_zeros;
  std::sort(zeros.begin(), zeros.end());
  zeros.erase(std::unique(zeros.begin(), zeros.end()), zeros.end());

  // Exact zero sets are finite point sets; a scanned set is estimated by the
  // fraction of grid points at which the density vanished.
  // A scan resolves the support only to the grid, so a handful of
  // surviving cells (boundary points lost to rounding) do not count.
  const auto excluded_cells = std::count(scanned_zero.begin(), scanned_zero.end(), true);
  report.excluded_measure = kTwoPi * static_cast<double>(excluded_cells) / kScan;
  report.cf_respected = kScan - excluded_cells > 4;
  if (zeros.empty()) {
    report.note = "density is strictly positive; every setting pair is eligible at every lambda";
  } else {
    report.note = "conditional densities vanish at isolated points; p(a,b|lambda) != 0 holds for all "
                  "lambda provided the unconditional p(lambda) vanishes there";
  }
  return report;
}

}  // namespace chshsim
