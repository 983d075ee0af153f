#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "chshsim/errors.hpp"
#include "chshsim/estimators.hpp"
#include "chshsim/event_table.hpp"
#include "chshsim/experiment.hpp"
#include "chshsim/models.hpp"
#include "chshsim/quadrature.hpp"
#include "chshsim/serialize.hpp"
#include "chshsim/version.hpp"

namespace chshsim::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string default_output_dir() {
  const char* env = std::getenv(kOutputDirEnv);
  return (env != nullptr && *env != '\0') ? env : "chshsim-out";
}

std::string fmt(double v, int precision = 6) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", precision, v);
  return buf;
}

void write_json(const fs::path& path, const json& doc) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot write '" + path.string() + "'");
  out << doc.dump(2) << '\n';
}

void print_report(std::ostream& out, const ChshReport& report) {
  out << "pair   mean        std_error   count\n";
  for (const auto& e : report.correlations) {
    out << e.pair.label() << "   " << fmt(e.mean) << "   " << fmt(e.std_error) << "   " << e.count << '\n';
  }
  out << "S = " << fmt(report.s_value) << " +/- " << fmt(report.s_std_error) << "   |S| = "
      << fmt(std::abs(report.s_value)) << '\n';
}

struct RunOptions {
  std::string config;
  std::string output_dir = default_output_dir();
  unsigned workers = 0;
  bool debug_lambda = false;
  bool degrees = false;
};

int cmd_run(const RunOptions& o, std::ostream& out) {
  const auto start = std::chrono::steady_clock::now();
  const ExperimentConfig config = load_config(o.config, o.degrees);
  const ModelSpec& model = ModelCatalog::standard().get(config.model);
  const auto records = run_experiment(config, model, o.workers);
  const ChshReport report = chsh_statistic(records);

  const fs::path dir(o.output_dir);
  fs::create_directories(dir);
  const fs::path events = dir / "events.csv";
  const fs::path report_path = dir / "report.json";
  const fs::path manifest = dir / "manifest.json";
  {
    std::ofstream csv(events);
    if (!csv) throw InputError("cannot write '" + events.string() + "'");
    write_event_csv(csv, emit_event_table(records, o.debug_lambda));
  }
  write_json(report_path, report_document(report, config));
  const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_json(manifest, json{{"tool", "chshsim"},
                            {"version", kVersion},
                            {"config", to_json(config)},
                            {"rng", {{"algorithm", std::string(kRngAlgorithm)}, {"seed", config.seed}}},
                            {"debug_lambda", o.debug_lambda},
                            {"workers", o.workers},
                            {"outputs",
                             {{"events", events.string()},
                              {"report", report_path.string()},
                              {"manifest", manifest.string()}}},
                            {"wall_clock_seconds", seconds}});
  out << "model " << config.model << ", " << config.trials << " trials\n";
  print_report(out, report);
  out << "wrote " << events.string() << ", " << report_path.string() << ", " << manifest.string() << '\n';
  return 0;
}

std::vector<TrialRecord> load_events(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open events file '" + path + "'");
  return read_event_csv(in);
}

int cmd_analyze(const std::string& events_path, const std::string& config_path, std::string report_path,
                bool degrees, std::ostream& out) {
  const ExperimentConfig config = load_config(config_path, degrees);
  const auto records = load_events(events_path);
  if (records.empty()) throw InsufficientData("event table '" + events_path + "' contains no events");
  const ChshReport report = chsh_statistic(records);
  if (report_path.empty()) report_path = (fs::path(events_path).parent_path() / "report.json").string();
  print_report(out, report);
  write_json(report_path, report_document(report, config));
  out << "wrote " << report_path << '\n';
  return 0;
}

int cmd_table(const std::string& events_path, std::size_t limit, std::ostream& out) {
  auto records = load_events(events_path);
  if (limit > 0 && records.size() > limit) records.resize(limit);
  out << render_event_text(emit_event_table(records, true));
  return 0;
}

struct ScanOptions {
  std::string config;
  std::string parameter = "b1";
  double from = 0.0;
  double to = std::numbers::pi;
  int steps = 33;
  std::string output;
  bool analytic_only = false;
  bool degrees = false;
  unsigned workers = 0;
};

int cmd_scan(const ScanOptions& o, std::ostream& out) {
  if (o.steps < 1) throw InvalidInput("scan needs at least one step");
  const ExperimentConfig base = load_config(o.config, o.degrees);
  const ModelSpec& model = ModelCatalog::standard().get(base.model);
  const double scale = o.degrees ? std::numbers::pi / 180.0 : 1.0;
  const fs::path path = o.output.empty() ? fs::path(default_output_dir()) / "scan.csv" : fs::path(o.output);
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream csv(path);
  if (!csv) throw InputError("cannot write '" + path.string() + "'");
  csv << "parameter_value,S_analytic,S_empirical,std_error\n";
  char line[160];
  for (int i = 0; i < o.steps; ++i) {
    const double value = scale * (o.steps == 1 ? o.from : o.from + (o.to - o.from) * i / (o.steps - 1));
    ExperimentConfig config = base;
    auto& s = config.settings;
    if (o.parameter == "a1") s.a1 = Angle(value);
    else if (o.parameter == "a2") s.a2 = Angle(value);
    else if (o.parameter == "b1") s.b1 = Angle(value);
    else if (o.parameter == "b2") s.b2 = Angle(value);
    else if (o.parameter == "rotation") s = base.settings.rotated(value);
    else throw InvalidInput("scan parameter must be one of a1, a2, b1, b2, rotation");
    const double analytic = model_chsh(model, config.settings, config.conditioning_side);
    if (model.sampleable() && !o.analytic_only) {
      const auto report = chsh_statistic(run_experiment(config, model, o.workers));
      std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g,%.17g\n", value, analytic, report.s_value,
                    report.s_std_error);
    } else {
      std::snprintf(line, sizeof line, "%.17g,%.17g,,\n", value, analytic);
    }
    csv << line;
  }
  out << "wrote " << o.steps << " rows to " << path.string() << '\n';
  return 0;
}

int cmd_diagnose(const std::string& config_path, bool debug_lambda, bool degrees, unsigned workers,
                 const std::string& json_path, std::ostream& out) {
  const ExperimentConfig config = load_config(config_path, degrees);
  const ModelSpec& model = ModelCatalog::standard().get(config.model);
  json doc{{"model", model.name()}};
  out << "model: " << model.name() << '\n';

  if (!model.has_density()) {
    out << "measurement independence: not applicable (oracle-only model)\n";
    out << "counterfactual freedom: not applicable (oracle-only model)\n";
    if (debug_lambda) out << "regularity check: not applicable (oracle-only model)\n";
    doc["applicable"] = false;
    if (!json_path.empty()) write_json(json_path, doc);
    return 0;
  }
  doc["applicable"] = true;

  out << "measurement independence: TV distance between p(lambda|a_i,b_k) densities\n";
  std::array<ConditioningContext, 4> contexts;
  for (const auto pair : SettingPair::all()) contexts[pair.ordinal()] = context_for(model, config, pair);
  json mi = json::array();
  double max_tv = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      const auto d = mi_diagnostic(model, contexts[i], contexts[j]);
      max_tv = std::max(max_tv, d.tv_distance);
      out << "  " << SettingPair::from_ordinal(i).label() << " vs " << SettingPair::from_ordinal(j).label() << "  "
          << to_string(d.first) << " vs " << to_string(d.second) << "  tv = " << fmt(d.tv_distance, 10) << '\n';
      auto entry = to_json(d);
      entry["pairs"] = {SettingPair::from_ordinal(i).label(), SettingPair::from_ordinal(j).label()};
      mi.push_back(entry);
    }
  }
  const bool mi_ok = max_tv < kMiTolerance;
  out << (mi_ok ? "  MI respected" : "  MI violated") << " (max TV = " << fmt(max_tv, 10) << ")\n";
  doc["mi"] = {{"comparisons", mi}, {"max_tv", max_tv}, {"mi_respected", mi_ok}};

  const auto cf = cf_freedom_report(model, config.settings, config.conditioning_side);
  out << "counterfactual freedom: zero sets of p(lambda|a_i,b_k)\n";
  for (const auto& p : cf.pairs) {
    out << "  " << p.pair.label() << "  " << to_string(p.context) << "  {";
    for (std::size_t k = 0; k < p.zero_set.size(); ++k) out << (k ? ", " : "") << fmt(p.zero_set[k].radians());
    out << "}\n";
  }
  out << (cf.cf_respected ? "  CF respected" : "  CF violated") << ": " << cf.note << '\n';
  doc["cf"] = to_json(cf);

  if (debug_lambda) {
    const auto records = run_experiment(config, model, workers);
    const auto reg = regularity_check(records);
    out << "regularity check: KS sup-distance between lambda samples of setting pairs\n";
    for (const auto& e : reg.entries) {
      out << "  " << e.first.label() << " vs " << e.second.label() << "  D = " << fmt(e.sup_distance)
          << "  threshold = " << fmt(e.threshold) << "  " << (e.passed ? "pass" : "FAIL") << '\n';
    }
    out << (reg.all_passed ? "  lambda law is the same for every setting pair\n"
                           : "  lambda law differs across setting pairs\n");
    doc["regularity"] = to_json(reg);
  }
  if (!json_path.empty()) write_json(json_path, doc);
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"CHSH Bell-test simulator for deterministic local hidden-variable models"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  RunOptions run;
  auto* run_cmd = app.add_subcommand("run", "Simulate an experiment; write events.csv, report.json, manifest.json");
  run_cmd->add_option("-c,--config", run.config, "Experiment config (JSON) or a run manifest")->required();
  run_cmd->add_option("-o,--output-dir", run.output_dir,
                      std::string("Output directory (default: $") + kOutputDirEnv + " or chshsim-out)");
  run_cmd->add_option("-w,--workers", run.workers, "Worker threads (0 = all cores)");
  run_cmd->add_flag("--debug-lambda", run.debug_lambda, "Write the hidden variable into events.csv");
  run_cmd->add_flag("--degrees", run.degrees, "Config angles are in degrees");

  std::string events_path;
  std::string config_path;
  std::string report_path;
  bool degrees = false;
  auto* analyze_cmd = app.add_subcommand("analyze", "Estimate correlations and S from an events.csv");
  analyze_cmd->add_option("-e,--events", events_path, "Event table CSV")->required();
  analyze_cmd->add_option("-c,--config", config_path, "Config the events came from")->required();
  analyze_cmd->add_option("-r,--report", report_path, "Report path (default: report.json beside the events)");
  analyze_cmd->add_flag("--degrees", degrees, "Config angles are in degrees");

  ScanOptions scan;
  auto* scan_cmd = app.add_subcommand("scan", "Sweep one setting (or a global rotation) and tabulate S");
  scan_cmd->add_option("-c,--config", scan.config, "Base experiment config")->required();
  scan_cmd->add_option("-p,--parameter", scan.parameter, "a1, a2, b1, b2 or rotation")
      ->check(CLI::IsMember({"a1", "a2", "b1", "b2", "rotation"}));
  scan_cmd->add_option("--from", scan.from, "First parameter value");
  scan_cmd->add_option("--to", scan.to, "Last parameter value");
  scan_cmd->add_option("-n,--steps", scan.steps, "Number of rows");
  scan_cmd->add_option("-o,--output", scan.output, "Output CSV (default: <output dir>/scan.csv)");
  scan_cmd->add_flag("--analytic-only", scan.analytic_only, "Skip the Monte Carlo column");
  scan_cmd->add_flag("--degrees", scan.degrees, "Config angles and the range are in degrees");
  scan_cmd->add_option("-w,--workers", scan.workers, "Worker threads (0 = all cores)");

  bool diag_debug = false;
  unsigned diag_workers = 0;
  std::string diag_json;
  auto* diag_cmd = app.add_subcommand("diagnose", "Measurement-independence, counterfactual-freedom and regularity diagnostics");
  diag_cmd->add_option("-c,--config", config_path, "Experiment config")->required();
  diag_cmd->add_flag("--debug-lambda", diag_debug, "Also simulate and run the lambda regularity check");
  diag_cmd->add_flag("--degrees", degrees, "Config angles are in degrees");
  diag_cmd->add_option("-w,--workers", diag_workers, "Worker threads (0 = all cores)");
  diag_cmd->add_option("--json", diag_json, "Also write the diagnostics as JSON");

  std::size_t limit = 0;
  auto* table_cmd = app.add_subcommand("table", "Render an events.csv as an aligned text table");
  table_cmd->add_option("-e,--events", events_path, "Event table CSV")->required();
  table_cmd->add_option("-n,--limit", limit, "Show at most this many events (0 = all)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend() - (args.empty() ? 0 : 1));
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& e) {
    err << e.what() << '\n';
    return 1;
  }

  try {
    if (*run_cmd) return cmd_run(run, out);
    if (*analyze_cmd) return cmd_analyze(events_path, config_path, report_path, degrees, out);
    if (*scan_cmd) return cmd_scan(scan, out);
    if (*diag_cmd) return cmd_diagnose(config_path, diag_debug, degrees, diag_workers, diag_json, out);
    if (*table_cmd) return cmd_table(events_path, limit, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const ModelError& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 2;
  }
  return 1;
}

}  // namespace chshsim::cli
