#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chshsim/errors.hpp"
#include "chshsim/models.hpp"
#include "chshsim/quadrature.hpp"
#include "oracles.hpp"

using namespace chshsim;
using std::numbers::pi;

namespace {

std::vector<std::pair<double, double>> random_pairs(std::uint64_t seed, int n) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(0.0, oracle::kTwoPi);
  std::vector<std::pair<double, double>> out;
  for (int i = 0; i < n; ++i) out.emplace_back(dist(gen), dist(gen));
  return out;
}

}  // namespace

TEST_CASE("piecewise integration of smooth and jump integrands") {
  CHECK(integrate_piecewise([](double x) { return std::sin(x); }, 0.0, pi, {}) == doctest::Approx(2.0).epsilon(1e-10));
  // Step at 1: only exact with the breakpoint.
  auto step = [](double x) { return x < 1.0 ? 0.0 : 1.0; };
  CHECK(integrate_piecewise(step, 0.0, 2.0, {1.0}) == doctest::Approx(1.0).epsilon(1e-13));
  QuadratureSettings adaptive;
  adaptive.method = QuadratureMethod::Adaptive;
  adaptive.tolerance = 1e-10;
  CHECK(integrate_piecewise([](double x) { return std::exp(x); }, 0.0, 1.0, {}, adaptive) ==
        doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-10));
  // Without the breakpoint the adaptive rule still converges on the jump.
  CHECK(std::abs(integrate_piecewise(step, 0.0, 2.0, {}, adaptive) - 1.0) < 1e-6);
}

TEST_CASE("quadrature settings validation and budget") {
  QuadratureSettings q;
  q.panels = 63;
  CHECK_THROWS_AS(q.validate(), InvalidInput);
  q.panels = 32;
  CHECK_THROWS_AS(q.validate(), InvalidInput);
  q = {};
  q.method = QuadratureMethod::Adaptive;
  q.tolerance = 0.0;
  CHECK_THROWS_AS(q.validate(), InvalidInput);
  q = {};
  q.max_evaluations = 100;
  CHECK_THROWS_AS(integrate_piecewise([](double x) { return x; }, 0.0, 1.0, {}, q), QuadratureBudgetExceeded);
}

TEST_CASE("quad_correlation examples") {
  const auto f = feldmann_model();
  const double target = -std::sqrt(2.0) / 2;
  CHECK(std::abs(quad_correlation(f, Angle(0), Angle(pi / 4), OnAliceSetting{Angle(0)}) - target) < 1e-8);
  CHECK(std::abs(quad_correlation(f, Angle(0), Angle(pi / 4), OnBobSetting{Angle(pi / 4)}) - target) < 1e-8);
  const auto u = uniform_sign_model();
  CHECK(std::abs(quad_correlation(u, Angle(0), Angle(pi / 4), Unconditioned{}) - -0.5) < 1e-8);
  CHECK_THROWS_AS(quad_correlation(f, Angle(0), Angle(1), Unconditioned{}), UnsupportedContext);
  CHECK_THROWS_AS(quad_correlation(singlet_oracle(), Angle(0), Angle(1), Unconditioned{}), OracleOnly);
}

TEST_CASE("quadrature matches closed forms and conditioning symmetry holds") {
  const auto f = feldmann_model();
  const auto u = uniform_sign_model();
  for (auto [a, b] : random_pairs(21, 16)) {
    const Angle aa(a), bb(b);
    const double via_alice = quad_correlation(f, aa, bb, OnAliceSetting{aa});
    const double via_bob = quad_correlation(f, aa, bb, OnBobSetting{bb});
    CHECK(std::abs(via_alice - *f.analytic_correlation(aa, bb)) <= 1e-8);
    CHECK(std::abs(via_bob - *f.analytic_correlation(aa, bb)) <= 1e-8);
    CHECK(std::abs(via_alice - via_bob) <= 1e-8);
    CHECK(std::abs(quad_correlation(u, aa, bb, Unconditioned{}) - *u.analytic_correlation(aa, bb)) <= 1e-8);
  }
}

TEST_CASE("marginals vanish") {
  const auto f = feldmann_model();
  for (auto [a, b] : random_pairs(22, 16)) {
    const Angle aa(a), bb(b);
    CHECK(std::abs(quad_marginal(f, Side::Alice, aa, OnAliceSetting{aa})) < 1e-8);
    CHECK(std::abs(quad_marginal(f, Side::Alice, aa, OnBobSetting{bb})) < 1e-8);
    CHECK(std::abs(quad_marginal(f, Side::Bob, bb, OnBobSetting{bb})) < 1e-8);
    CHECK(std::abs(quad_marginal(f, Side::Bob, bb, OnAliceSetting{aa})) < 1e-8);
  }
  CHECK(std::abs(quad_marginal(uniform_sign_model(), Side::Bob, Angle(0.4), Unconditioned{})) < 1e-8);
}

TEST_CASE("analytic CHSH") {
  const auto optimal = Settings::chsh_optimal();
  const auto singlet = singlet_oracle();
  auto singlet_fn = [&](Angle a, Angle b) { return *singlet.analytic_correlation(a, b); };
  CHECK(std::abs(analytic_chsh(singlet_fn, optimal) + 2.0 * std::sqrt(2.0)) < 1e-12);
  CHECK(std::abs(model_chsh(uniform_sign_model(), optimal) + 2.0) < 1e-12);
  CHECK(analytic_chsh([](Angle, Angle) { return 0.0; }, optimal) == 0.0);

  // Quadrature fallback for a model without a closed form.
  auto def_model = [] {
    ModelSpec::Definition def;
    def.name = "no-closed-form";
    def.outcome_a = sign_outcome_a;
    def.outcome_b = sign_outcome_b;
    def.accepts_setting_conditioned = true;
    def.lambda_density = [](Angle l, const ConditioningContext& c) {
      return 0.25 * std::abs(std::cos(l.radians() - conditioning_angle(c)->radians()));
    };
    def.outcome_breakpoints = [](Angle s) {
      return std::vector<Angle>{Angle(s.radians() + pi / 2), Angle(s.radians() - pi / 2)};
    };
    return ModelSpec(def);
  }();
  CHECK(std::abs(model_chsh(def_model, optimal) + 2.0 * std::sqrt(2.0)) < 1e-8);
}

TEST_CASE("MI diagnostic against the brute-force TV oracle") {
  const auto f = feldmann_model();
  const auto u = uniform_sign_model();
  const double oracle_tv = oracle::feldmann_tv(0.0, pi / 4, 4'000'000);
  CHECK(std::abs(oracle_tv - oracle::kFeldmannTvZeroVsQuarterPi) < 1e-9);

  const auto same_u = mi_diagnostic(u, Unconditioned{}, Unconditioned{});
  CHECK(same_u.tv_distance == 0.0);
  CHECK(same_u.mi_respected);
  const auto same_f = mi_diagnostic(f, OnAliceSetting{Angle(0)}, OnAliceSetting{Angle(0)});
  CHECK(same_f.tv_distance == 0.0);
  const auto diff = mi_diagnostic(f, OnAliceSetting{Angle(0)}, OnAliceSetting{Angle(pi / 4)});
  CHECK(std::abs(diff.tv_distance - oracle::kFeldmannTvZeroVsQuarterPi) < 1e-6);
  CHECK_FALSE(diff.mi_respected);
}

TEST_CASE("TV distance is a metric on conditional densities") {
  const auto f = feldmann_model();
  std::mt19937_64 gen(31);
  std::uniform_real_distribution<double> dist(0.0, oracle::kTwoPi);
  for (int i = 0; i < 6; ++i) {
    const ConditioningContext x = OnAliceSetting{Angle(dist(gen))};
    const ConditioningContext y = OnBobSetting{Angle(dist(gen))};
    const ConditioningContext z = OnAliceSetting{Angle(dist(gen))};
    const double xy = tv_distance(f, x, y);
    const double yx = tv_distance(f, y, x);
    const double yz = tv_distance(f, y, z);
    const double xz = tv_distance(f, x, z);
    CHECK(std::abs(xy - yx) < 1e-9);
    CHECK(xz <= xy + yz + 1e-9);
    CHECK(xy >= 0.0);
    CHECK(xy <= 1.0 + 1e-9);
  }
}

TEST_CASE("counterfactual freedom report") {
  const auto f = feldmann_model();
  const Settings s{Angle(0), Angle(0), Angle(0), Angle(0)};
  const auto r = cf_freedom_report(f, s);
  REQUIRE(r.applicable);
  REQUIRE(r.pairs.size() == 4);
  REQUIRE(r.pairs[0].zero_set.size() == 2);
  CHECK(r.pairs[0].zero_set[0].radians() == doctest::Approx(pi / 2));
  CHECK(r.pairs[0].zero_set[1].radians() == doctest::Approx(3 * pi / 2));
  CHECK(r.cf_respected);
  CHECK(r.excluded_measure == 0.0);

  const Settings distinct{Angle(0.1), Angle(0.9), Angle(1.7), Angle(2.5)};
  const auto bob = cf_freedom_report(f, distinct, Side::Bob);
  CHECK(bob.pairs.size() == 4);
  CHECK(bob.required_unconditional_zeros.size() == 4);  // two distinct b settings, two zeros each
  const auto alice = cf_freedom_report(f, distinct, Side::Alice);
  CHECK(alice.pairs[0].zero_set != alice.pairs[2].zero_set);

  const auto u = cf_freedom_report(uniform_sign_model(), distinct);
  CHECK(u.cf_respected);
  CHECK(u.required_unconditional_zeros.empty());
  for (const auto& p : u.pairs) CHECK(p.zero_set.empty());

  const auto o = cf_freedom_report(singlet_oracle(), distinct);
  CHECK_FALSE(o.applicable);
}

TEST_CASE("CF report falls back to a grid scan and flags large zero sets") {
  ModelSpec::Definition def;
  def.name = "half-circle";
  def.outcome_a = sign_outcome_a;
  def.outcome_b = sign_outcome_b;
  def.accepts_setting_conditioned = true;
  // Supported only on the half circle facing the conditioning setting.
  def.lambda_density = [](Angle l, const ConditioningContext& c) {
    const double v = std::cos(l.radians() - conditioning_angle(c)->radians());
    return v > 0.0 ? 0.5 * v : 0.0;
  };
  const ModelSpec m(def);
  const auto same = cf_freedom_report(m, Settings{Angle(0), Angle(0), Angle(0), Angle(0)});
  CHECK_FALSE(same.pairs[0].exact);
  CHECK(same.excluded_measure == doctest::Approx(pi).epsilon(1e-3));
  CHECK(same.cf_respected);
  const auto opposite = cf_freedom_report(m, Settings{Angle(0), Angle(pi), Angle(0), Angle(0)});
  CHECK(opposite.excluded_measure == doctest::Approx(2 * pi).epsilon(1e-3));
  CHECK_FALSE(opposite.cf_respected);
}
