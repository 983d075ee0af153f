// Acceptance suite: one line per criterion, non-zero exit if any fails.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "chshsim/estimators.hpp"
#include "chshsim/experiment.hpp"
#include "chshsim/models.hpp"
#include "chshsim/quadrature.hpp"
#include "commands.hpp"
#include "oracles.hpp"

using namespace chshsim;
using std::numbers::pi;
namespace fs = std::filesystem;

namespace {

const double kTsirelson = 2.0 * std::sqrt(2.0);

struct Criterion {
  int id;
  std::string name;
  std::function<bool(std::string&)> check;
};

std::string fmt(const char* format, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, format, a, b, c);
  return buf;
}

Angle uniform_angle(std::mt19937_64& gen) {
  return Angle(std::uniform_real_distribution<double>(0.0, kTwoPi)(gen));
}

ExperimentConfig base_config(const std::string& model, std::uint64_t trials, std::uint64_t seed) {
  ExperimentConfig c;
  c.model = model;
  c.trials = trials;
  c.seed = seed;
  return c;
}

bool feldmann_correlation(std::string& detail) {
  std::mt19937_64 gen(101);
  const auto model = feldmann_model();
  double worst_z = 0.0;
  double worst_quad = 0.0;
  for (int i = 0; i < 8; ++i) {
    const Angle a = uniform_angle(gen);
    const Angle b = uniform_angle(gen);
    const double truth = -std::cos(a.radians() - b.radians());
    auto c = base_config("feldmann", 1'000'000, 1000 + i);
    c.settings = Settings{a, Angle(0), b, Angle(0)};
    c.pair_probabilities = ExperimentConfig::only(SettingPair(1, 1));
    const auto est = estimate_correlation(run_experiment(c), SettingPair(1, 1));
    worst_z = std::max(worst_z, std::abs(est.mean - truth) / est.std_error);
    worst_quad = std::max(worst_quad, std::abs(quad_correlation(model, a, b, OnAliceSetting{a}) - truth));
  }
  detail = fmt("max |MC - (-cos)| = %.2f std errors (limit 5); max |quad - (-cos)| = %.2e (limit 1e-8)", worst_z,
               worst_quad);
  return worst_z <= 5.0 && worst_quad <= 1e-8;
}

bool chsh_violation(std::string& detail) {
  auto c = base_config("feldmann", 4'000'000, 2);
  const auto report = chsh_statistic(run_experiment(c));
  const auto model = feldmann_model();
  const double analytic = analytic_chsh([&](Angle a, Angle b) { return *model.analytic_correlation(a, b); },
                                        Settings::chsh_optimal());
  const double empirical_gap = std::abs(std::abs(report.s_value) - kTsirelson);
  const double analytic_gap = std::abs(std::abs(analytic) - kTsirelson);
  detail = fmt("empirical S = %.5f (|dev| %.5f, limit 0.02); analytic S = %.15f", report.s_value, empirical_gap,
               analytic) +
           fmt(" (|dev| %.1e, limit 1e-12)", analytic_gap);
  return empirical_gap <= 0.02 && analytic_gap <= 1e-12;
}

bool mi_bound(std::string& detail) {
  std::mt19937_64 gen(303);
  double worst_excess = -1e9;
  for (int i = 0; i < 100; ++i) {
    auto c = base_config("uniform-sign", 400'000, 3000 + i);
    c.settings = Settings{uniform_angle(gen), uniform_angle(gen), uniform_angle(gen), uniform_angle(gen)};
    const auto r = chsh_statistic(run_experiment(c));
    worst_excess = std::max(worst_excess, std::abs(r.s_value) - (2.0 + 5.0 * r.s_std_error));
  }
  const auto opt = chsh_statistic(run_experiment(base_config("uniform-sign", 4'000'000, 3)));
  detail = fmt("max over 100 quadruples of |S| - (2 + 5 se) = %.5f (must be <= 0); optimal S = %.5f (target -2 +/- 0.02)",
               worst_excess, opt.s_value);
  return worst_excess <= 0.0 && std::abs(opt.s_value + 2.0) <= 0.02;
}

bool counterfactual_identity(std::string& detail) {
  std::mt19937_64 gen(404);
  const std::array<ModelSpec, 2> models{feldmann_model(), uniform_sign_model()};
  long mismatches = 0;
  for (int i = 0; i < 100000; ++i) {
    const auto& m = models[i % 2];
    const Settings s{uniform_angle(gen), uniform_angle(gen), uniform_angle(gen), uniform_angle(gen)};
    const Angle lambda = uniform_angle(gen);
    const auto t = counterfactual_trial(m, s, lambda);
    const double c = pointwise_c(m, s, lambda);
    const int factored = t.a1.value() * (t.b1.value() - t.b2.value()) + t.a2.value() * (t.b1.value() + t.b2.value());
    if (c != t.s_trial || (t.s_trial != 2.0 && t.s_trial != -2.0) || factored != static_cast<int>(t.s_trial)) {
      ++mismatches;
    }
  }
  detail = fmt("%.0f mismatches in 1e5 draws (C(lambda) = s_trial in {-2,+2}, factored form equal)",
               static_cast<double>(mismatches));
  return mismatches == 0;
}

bool consistency_equations(std::string& detail) {
  std::mt19937_64 gen(505);
  const auto model = feldmann_model();
  double worst = 0.0;
  for (int i = 0; i < 16; ++i) {
    const Angle a = uniform_angle(gen);
    const Angle b = uniform_angle(gen);
    worst = std::max(worst, std::abs(quad_correlation(model, a, b, OnAliceSetting{a}) -
                                     quad_correlation(model, a, b, OnBobSetting{b})));
  }
  auto alice = base_config("feldmann", 4'000'000, 51);
  auto bob = base_config("feldmann", 4'000'000, 52);
  bob.conditioning_side = Side::Bob;
  const auto ra = chsh_statistic(run_experiment(alice));
  const auto rb = chsh_statistic(run_experiment(bob));
  const double combined = std::hypot(ra.s_std_error, rb.s_std_error);
  const double z = std::abs(ra.s_value - rb.s_value) / combined;
  detail = fmt("max |quad_alice - quad_bob| = %.2e (limit 1e-8); S_alice - S_bob = %.2f combined std errors (limit 5)",
               worst, z);
  return worst <= 1e-8 && z <= 5.0;
}

bool vanishing_marginals(std::string& detail) {
  std::mt19937_64 gen(606);
  const auto model = feldmann_model();
  double worst_quad = 0.0;
  for (int i = 0; i < 16; ++i) {
    const Angle a = uniform_angle(gen);
    const Angle b = uniform_angle(gen);
    for (const ConditioningContext& ctx : {ConditioningContext{OnAliceSetting{a}}, ConditioningContext{OnBobSetting{b}}}) {
      worst_quad = std::max(worst_quad, std::abs(quad_marginal(model, Side::Alice, a, ctx)));
      worst_quad = std::max(worst_quad, std::abs(quad_marginal(model, Side::Bob, b, ctx)));
    }
  }
  const auto records = run_experiment(base_config("feldmann", 4'000'000, 6));
  double worst_ratio = 0.0;
  std::uint64_t min_count = ~0ULL;
  for (Side side : {Side::Alice, Side::Bob}) {
    for (int index : {1, 2}) {
      const auto m = marginal_estimate(records, side, index);
      min_count = std::min(min_count, m.count);
      worst_ratio = std::max(worst_ratio, std::abs(m.mean) / (5.0 / std::sqrt(static_cast<double>(m.count))));
    }
  }
  detail = fmt("max |quad marginal| = %.2e (limit 1e-8); max |<A_i>|,|<B_k>| = %.2f of 5/sqrt(N), N >= %.0f",
               worst_quad, worst_ratio, static_cast<double>(min_count));
  return worst_quad <= 1e-8 && worst_ratio <= 1.0 && min_count >= 1'000'000;
}

bool mi_diagnostic_check(std::string& detail) {
  const double riemann = oracle::feldmann_tv(0.0, pi / 4);
  const auto d = mi_diagnostic(feldmann_model(), OnAliceSetting{Angle(0)}, OnAliceSetting{Angle(pi / 4)});
  const auto u = mi_diagnostic(uniform_sign_model(), Unconditioned{}, Unconditioned{});
  const double gap = std::abs(d.tv_distance - riemann);
  detail = fmt("feldmann TV = %.12f vs Riemann oracle %.12f (|diff| limit 1e-6, > 0.05)", d.tv_distance, riemann) +
           fmt("; uniform-sign TV = %.1e (limit 1e-9)", u.tv_distance);
  return gap <= 1e-6 && std::abs(riemann - oracle::kFeldmannTvZeroVsQuarterPi) <= 1e-9 && d.tv_distance > 0.05 &&
         !d.mi_respected && u.tv_distance <= 1e-9 && u.mi_respected;
}

bool reproducibility_hypothesis(std::string& detail) {
  const auto uniform = regularity_check(run_experiment(base_config("uniform-sign", 400'000, 8)), 0.01);
  double worst_uniform = 0.0;
  for (const auto& e : uniform.entries) worst_uniform = std::max(worst_uniform, e.sup_distance);

  auto c = base_config("feldmann", 400'000, 81);
  c.settings = Settings{Angle(0), Angle(pi / 4), Angle(pi / 8), Angle(5 * pi / 8)};
  const auto feld = regularity_check(run_experiment(c));
  const double truth = oracle::feldmann_cdf_sup_distance(0.0, pi / 4);
  double min_cross = 1.0;
  double max_shared = 0.0;
  for (const auto& e : feld.entries) {
    if (e.first.alice_index() != e.second.alice_index()) {
      min_cross = std::min(min_cross, e.sup_distance);
    } else {
      max_shared = std::max(max_shared, e.sup_distance);
    }
  }
  detail = fmt("uniform-sign max sup-distance = %.5f (limit 0.01); feldmann cross-conditioning min = %.4f vs truth %.4f",
               worst_uniform, min_cross, truth) +
           fmt(" (must be >= half), shared-setting max = %.5f (limit 0.01)", max_shared);
  return worst_uniform < 0.01 && uniform.entries.size() == 6 && min_cross >= 0.5 * truth && max_shared < 0.01;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool determinism(std::string& detail) {
  const fs::path dir = fs::temp_directory_path() / "chshsim_acceptance_determinism";
  fs::remove_all(dir);
  fs::create_directories(dir);
  const fs::path config = dir / "config.json";
  std::ofstream(config) << nlohmann::json{{"model", "feldmann"}, {"trials", 1'000'000}, {"seed", 9}, {"chunk_size", 10000}}.dump();
  std::vector<std::string> files;
  bool ok = true;
  for (const char* workers : {"1", "2", "8"}) {
    const fs::path out = dir / (std::string("w") + workers);
    std::ostringstream sink;
    ok = ok && chshsim::cli::run_cli({"chshsim", "run", "-c", config.string(), "-o", out.string(), "-w", workers,
                                      "--debug-lambda"},
                                     sink, sink) == 0;
    files.push_back(slurp(out / "events.csv"));
  }
  ok = ok && !files[0].empty() && files[0] == files[1] && files[0] == files[2];
  detail = fmt("events.csv (%.0f bytes, 1e6 trials, lambda included) identical under 1, 2, 8 workers",
               static_cast<double>(files[0].size()));
  fs::remove_all(dir);
  return ok;
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Feldmann correlation reproduction", feldmann_correlation},
      {2, "CHSH violation at optimal settings", chsh_violation},
      {3, "CHSH bound for the MI-respecting baseline", mi_bound},
      {4, "Pointwise counterfactual identity", counterfactual_identity},
      {5, "Consistency equations (Alice vs Bob conditioning)", consistency_equations},
      {6, "Vanishing marginals", vanishing_marginals},
      {7, "MI diagnostic", mi_diagnostic_check},
      {8, "Reproducibility-hypothesis check", reproducibility_hypothesis},
      {9, "Determinism across worker counts", determinism},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    std::string detail;
    bool passed = false;
    try {
      passed = c.check(detail);
    } catch (const std::exception& e) {
      detail = std::string("exception: ") + e.what();
    }
    if (!passed) ++failures;
    std::printf("[%s] AC%d %s: %s\n", passed ? "PASS" : "FAIL", c.id, c.name.c_str(), detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d/%zu acceptance criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
