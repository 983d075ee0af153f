#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "chshsim/errors.hpp"
#include "chshsim/estimators.hpp"
#include "chshsim/event_table.hpp"
#include "chshsim/experiment.hpp"
#include "chshsim/models.hpp"
#include "chshsim/quadrature.hpp"
#include "chshsim/serialize.hpp"
#include "chshsim/version.hpp"

PYBIND11_MAKE_OPAQUE(std::vector<chshsim::TrialRecord>)

namespace py = pybind11;
using namespace chshsim;

namespace {

using Records = std::vector<TrialRecord>;

Settings make_settings(double a1, double a2, double b1, double b2) {
  return Settings{Angle(a1), Angle(a2), Angle(b1), Angle(b2)};
}

ConditioningContext make_context(const std::string& kind, std::optional<double> setting) {
  if (kind == "unconditioned") return Unconditioned{};
  if (!setting) throw InvalidInput("a setting-conditioned context needs a setting angle");
  if (kind == "alice") return OnAliceSetting{Angle(*setting)};
  if (kind == "bob") return OnBobSetting{Angle(*setting)};
  throw InvalidInput("context kind must be 'unconditioned', 'alice' or 'bob'");
}

const ModelSpec& model_named(const std::string& name) { return ModelCatalog::standard().get(name); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "CHSH Bell-test simulator for deterministic local hidden-variable models";
  m.attr("__version__") = kVersion;
  m.attr("RNG_ALGORITHM") = std::string(kRngAlgorithm);

  auto input_error = py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<ModelError>(m, "ModelError", PyExc_RuntimeError);
  (void)input_error;

  m.def("normalize", [](double raw) { return normalize(raw).radians(); }, py::arg("radians"));
  m.def("sign_conv", [](double x) { return sign_conv(x).value(); }, py::arg("x"));

  py::enum_<Side>(m, "Side").value("Alice", Side::Alice).value("Bob", Side::Bob);

  py::class_<Settings>(m, "Settings")
      .def(py::init(&make_settings), py::arg("a1"), py::arg("a2"), py::arg("b1"), py::arg("b2"))
      .def_static("chsh_optimal", &Settings::chsh_optimal)
      .def_property_readonly("a1", [](const Settings& s) { return s.a1.radians(); })
      .def_property_readonly("a2", [](const Settings& s) { return s.a2.radians(); })
      .def_property_readonly("b1", [](const Settings& s) { return s.b1.radians(); })
      .def_property_readonly("b2", [](const Settings& s) { return s.b2.radians(); });

  py::class_<ModelSpec>(m, "Model")
      .def_property_readonly("name", &ModelSpec::name)
      .def_property_readonly("sampleable", &ModelSpec::sampleable)
      .def_property_readonly("respects_measurement_independence", &ModelSpec::respects_measurement_independence)
      .def("analytic_correlation",
           [](const ModelSpec& mdl, double a, double b) { return mdl.analytic_correlation(Angle(a), Angle(b)); })
      .def("outcome_a", [](const ModelSpec& mdl, double s, double l) { return mdl.outcome_a(Angle(s), Angle(l)).value(); })
      .def("outcome_b", [](const ModelSpec& mdl, double s, double l) { return mdl.outcome_b(Angle(s), Angle(l)).value(); })
      .def("lambda_density",
           [](const ModelSpec& mdl, double lambda, const std::string& kind, std::optional<double> setting) {
             return mdl.lambda_density(Angle(lambda), make_context(kind, setting));
           },
           py::arg("lambda_"), py::arg("context") = "unconditioned", py::arg("setting") = py::none());

  m.def("get_model", &model_named, py::return_value_policy::reference, py::arg("name"));
  m.def("model_names", [] { return ModelCatalog::standard().names(); });

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def(py::init<>())
      .def_readwrite("model", &ExperimentConfig::model)
      .def_readwrite("settings", &ExperimentConfig::settings)
      .def_readwrite("pair_probabilities", &ExperimentConfig::pair_probabilities)
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("seed", &ExperimentConfig::seed)
      .def_readwrite("conditioning_side", &ExperimentConfig::conditioning_side)
      .def_readwrite("chunk_size", &ExperimentConfig::chunk_size)
      .def("validate", &ExperimentConfig::validate)
      .def("to_json", [](const ExperimentConfig& c) { return to_json(c).dump(); })
      .def_static("from_json", [](const std::string& text) { return parse_config(nlohmann::json::parse(text)); });

  py::class_<CorrelationEstimate>(m, "CorrelationEstimate")
      .def_property_readonly("pair", [](const CorrelationEstimate& e) { return e.pair.label(); })
      .def_readonly("mean", &CorrelationEstimate::mean)
      .def_readonly("std_error", &CorrelationEstimate::std_error)
      .def_readonly("count", &CorrelationEstimate::count);

  py::class_<ChshReport>(m, "ChshReport")
      .def_readonly("correlations", &ChshReport::correlations)
      .def_readonly("s_value", &ChshReport::s_value)
      .def_readonly("s_std_error", &ChshReport::s_std_error)
      .def("to_json", [](const ChshReport& r) { return to_json(r).dump(); });

  py::class_<Records>(m, "Records")
      .def("__len__", [](const Records& r) { return r.size(); })
      .def("products", [](const Records& r) {
        std::vector<int> out;
        out.reserve(r.size());
        for (const auto& t : r) out.push_back(t.product.value());
        return out;
      })
      .def("pair_ordinals", [](const Records& r) {
        std::vector<int> out;
        out.reserve(r.size());
        for (const auto& t : r) out.push_back(t.pair.ordinal());
        return out;
      })
      .def("event_csv", [](const Records& r, bool include_lambda) {
        std::ostringstream out;
        write_event_csv(out, emit_event_table(r, include_lambda));
        return out.str();
      }, py::arg("include_lambda") = false);

  m.def("run_experiment",
        [](const ExperimentConfig& c, unsigned workers) {
          py::gil_scoped_release release;
          return run_experiment(c, ModelCatalog::standard(), workers);
        },
        py::arg("config"), py::arg("workers") = 0);
  m.def("chsh_statistic", [](const Records& r) { return chsh_statistic(r); });
  m.def("estimate_correlation",
        [](const Records& r, int alice, int bob) { return estimate_correlation(r, SettingPair(alice, bob)); });
  m.def("marginal_estimate", [](const Records& r, Side side, int index) { return marginal_estimate(r, side, index); });
  m.def("regularity_check", [](const Records& r, std::optional<double> threshold) {
    return to_json(regularity_check(r, threshold)).dump();
  }, py::arg("records"), py::arg("threshold") = py::none());

  m.def("counterfactual_trial", [](const std::string& model, const Settings& s, double lambda) {
    const auto t = counterfactual_trial(model_named(model), s, Angle(lambda));
    return py::make_tuple(t.a1.value(), t.a2.value(), t.b1.value(), t.b2.value(), t.s_trial);
  });
  m.def("pointwise_c", [](const std::string& model, const Settings& s, double lambda) {
    return pointwise_c(model_named(model), s, Angle(lambda));
  });

  m.def("quad_correlation",
        [](const std::string& model, double a, double b, const std::string& kind, std::optional<double> setting) {
          return quad_correlation(model_named(model), Angle(a), Angle(b), make_context(kind, setting));
        },
        py::arg("model"), py::arg("a"), py::arg("b"), py::arg("context") = "unconditioned",
        py::arg("setting") = py::none());
  m.def("quad_marginal",
        [](const std::string& model, Side side, double setting, const std::string& kind,
           std::optional<double> context_setting) {
          return quad_marginal(model_named(model), side, Angle(setting), make_context(kind, context_setting));
        },
        py::arg("model"), py::arg("side"), py::arg("setting"), py::arg("context") = "unconditioned",
        py::arg("context_setting") = py::none());
  m.def("analytic_chsh", [](const std::string& model, const Settings& s, Side side) {
    return model_chsh(model_named(model), s, side);
  }, py::arg("model"), py::arg("settings"), py::arg("side") = Side::Alice);
  m.def("tv_distance",
        [](const std::string& model, const std::string& kind1, std::optional<double> s1, const std::string& kind2,
           std::optional<double> s2) {
          return tv_distance(model_named(model), make_context(kind1, s1), make_context(kind2, s2));
        });
  m.def("cf_freedom_report", [](const std::string& model, const Settings& s, Side side) {
    return to_json(cf_freedom_report(model_named(model), s, side)).dump();
  }, py::arg("model"), py::arg("settings"), py::arg("side") = Side::Alice);
}
