#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "relaymix/channel.hpp"
#include "relaymix/closedform.hpp"
#include "relaymix/errors.hpp"
#include "relaymix/experiments.hpp"
#include "relaymix/geometry.hpp"
#include "relaymix/laplace.hpp"
#include "relaymix/mcengine.hpp"
#include "relaymix/netmodel.hpp"

namespace py = pybind11;
using namespace relaymix;

PYBIND11_MODULE(_core, m) {
  m.doc() =
      "Outage analysis for a relay-assisted decentralized wireless network";
  m.attr("__version__") = tool_version;

  const auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ValidationError>(m, "ValidationError", base);
  py::register_exception<UnsupportedCorrelation>(m, "UnsupportedCorrelation",
                                                 base);
  py::register_exception<QuadratureNonConvergence>(
      m, "QuadratureNonConvergence", base);
  py::register_exception<HypothesisViolated>(m, "HypothesisViolated", base);
  py::register_exception<RootNotBracketed>(m, "RootNotBracketed", base);
  py::register_exception<IntegrationBudgetExceeded>(
      m, "IntegrationBudgetExceeded", base);
  py::register_exception<TargetUnreachable>(m, "TargetUnreachable", base);
  py::register_exception<MaxIterations>(m, "MaxIterations", base);
  py::register_exception<UnknownFigure>(m, "UnknownFigure", base);
  py::register_exception<ConfigParseError>(m, "ConfigParseError", base);
  py::register_exception<CoincidentPoints>(m, "CoincidentPoints", base);

  py::class_<NetworkParams>(m, "NetworkParams")
      .def(py::init<>())
      .def_readwrite("lambda_s", &NetworkParams::lambda_s)
      .def_readwrite("lambda_in", &NetworkParams::lambda_in)
      .def_readwrite("alpha", &NetworkParams::alpha)
      .def_readwrite("rate", &NetworkParams::rate)
      .def_readwrite("dest_distance", &NetworkParams::dest_distance)
      .def_readwrite("phi0", &NetworkParams::phi0)
      .def_readwrite("p_r", &NetworkParams::p_r)
      .def_readwrite("rho", &NetworkParams::rho)
      .def_readwrite("tau", &NetworkParams::tau);

  py::class_<DerivedScalars>(m, "DerivedScalars")
      .def_readonly("threshold", &DerivedScalars::threshold)
      .def_readonly("interference_c", &DerivedScalars::interference_c)
      .def_readonly("outage_delta", &DerivedScalars::outage_delta)
      .def_readonly("delta_mix", &DerivedScalars::delta_mix)
      .def_readonly("nu", &DerivedScalars::nu)
      .def_readonly("sigma_in", &DerivedScalars::sigma_in)
      .def_readonly("sigma_k", &DerivedScalars::sigma_k)
      .def_readonly("s_scale", &DerivedScalars::s_scale);

  py::class_<Vec2>(m, "Vec2")
      .def(py::init<>())
      .def(py::init([](double x, double y) { return Vec2{x, y}; }),
           py::arg("x"), py::arg("y"))
      .def_readwrite("x", &Vec2::x)
      .def_readwrite("y", &Vec2::y);

  m.def("require_valid", &require_valid, py::arg("params"));
  m.def("threshold_from_rate", &threshold_from_rate, py::arg("rate"));
  m.def("sigma_in_of", &sigma_in_of, py::arg("lambda_in"));
  m.def("lambda_in_of_sigma", &lambda_in_of_sigma, py::arg("sigma_in"));
  m.def("derive_scalars", &derive_scalars, py::arg("params"));

  py::class_<BoundResult>(m, "BoundResult")
      .def_readonly("value", &BoundResult::value)
      .def_readonly("clamped", &BoundResult::clamped);

  py::class_<SigmaResult>(m, "SigmaResult")
      .def_readonly("root", &SigmaResult::root)
      .def_readonly("closed_bound", &SigmaResult::closed_bound);

  py::class_<ActivationAnalysis>(m, "ActivationAnalysis")
      .def_readonly("decided_p_r", &ActivationAnalysis::decided_p_r)
      .def_readonly("sigma_in", &ActivationAnalysis::sigma_in)
      .def_readonly("concavity", &ActivationAnalysis::concavity)
      .def_readonly("threshold", &ActivationAnalysis::threshold)
      .def_readonly("gain_ratio", &ActivationAnalysis::gain_ratio);

  py::class_<Phi0Result>(m, "Phi0Result")
      .def_readonly("phi0_star", &Phi0Result::phi0_star)
      .def_readonly("ratio_at_star", &Phi0Result::ratio_at_star);

  py::enum_<RateScheme>(m, "RateScheme")
      .value("Dt", RateScheme::Dt)
      .value("Mix", RateScheme::Mix);

  m.def("op_dt", &op_dt, py::arg("params"));
  m.def("op_mix_upper_bound", &op_mix_upper_bound, py::arg("params"),
        py::arg("p_r"));
  m.def("nuttall_q20", &nuttall_q20, py::arg("s"));
  m.def("expected_relay_dest_distance",
        py::overload_cast<const NetworkParams&>(
            &expected_relay_dest_distance),
        py::arg("params"));
  m.def("expected_relay_dest_distance",
        py::overload_cast<double, double, double>(
            &expected_relay_dest_distance),
        py::arg("sigma_in"), py::arg("phi0"), py::arg("dest_distance"));
  m.def("expected_distance_bound", &expected_distance_bound,
        py::arg("sigma_in"), py::arg("phi0"), py::arg("dest_distance"));
  m.def("gamma_factor", &gamma_factor, py::arg("s"), py::arg("phi0"));
  m.def("sigma_c", &sigma_c, py::arg("params"));
  m.def("sigma_t", &sigma_t, py::arg("params"));
  m.def("op_gain_ratio", &op_gain_ratio, py::arg("params"));
  m.def("activation_decision", &activation_decision, py::arg("params"));
  m.def("optimize_phi0", &optimize_phi0, py::arg("params"),
        py::arg("grid_cells") = 64);
  m.def("max_rate_for_op", &max_rate_for_op, py::arg("params"),
        py::arg("op_target"), py::arg("scheme"),
        py::arg("abs_tol") = 1e-4);

  py::class_<LtOptions>(m, "LtOptions")
      .def(py::init<>())
      .def_readwrite("t_target_rel_error", &LtOptions::t_target_rel_error)
      .def_readwrite("t_max_samples", &LtOptions::t_max_samples)
      .def_readwrite("t_min_samples", &LtOptions::t_min_samples)
      .def_readwrite("seed", &LtOptions::seed)
      .def_readwrite("throw_on_budget", &LtOptions::throw_on_budget)
      .def_readwrite("f_abs_tol", &LtOptions::f_abs_tol);

  py::class_<JointLtResult>(m, "JointLtResult")
      .def_readonly("value", &JointLtResult::value)
      .def_readonly("exponent", &JointLtResult::exponent)
      .def_readonly("pair_exponent", &JointLtResult::pair_exponent)
      .def_readonly("pair_std_error", &JointLtResult::pair_std_error)
      .def_readonly("pair_samples", &JointLtResult::pair_samples)
      .def_readonly("overlap", &JointLtResult::overlap);

  py::class_<ExactOutageOptions>(m, "ExactOutageOptions")
      .def(py::init<>())
      .def_readwrite("r_samples", &ExactOutageOptions::r_samples)
      .def_readwrite("seed", &ExactOutageOptions::seed)
      .def_readwrite("inner", &ExactOutageOptions::inner);

  py::class_<ExactOutageResult>(m, "ExactOutageResult")
      .def_readonly("value", &ExactOutageResult::value)
      .def_readonly("std_error", &ExactOutageResult::std_error)
      .def_readonly("direct_fail", &ExactOutageResult::direct_fail)
      .def_readonly("relay_fail", &ExactOutageResult::relay_fail);

  m.def("lt_interference_closed", &lt_interference_closed, py::arg("omega"),
        py::arg("params"), py::arg("p_r"));
  m.def("lt_interference_joint", &lt_interference_joint,
        py::arg("omega_dest"), py::arg("omega_relay"), py::arg("params"),
        py::arg("p_r"), py::arg("relay_pos"),
        py::arg("options") = LtOptions{});
  m.def("op_mix_exact", &op_mix_exact, py::arg("params"), py::arg("p_r"),
        py::arg("options") = ExactOutageOptions{});

  py::enum_<McScheme>(m, "McScheme")
      .value("Mixed", McScheme::Mixed)
      .value("DirectOnly", McScheme::DirectOnly)
      .value("RelayAlways", McScheme::RelayAlways);

  py::enum_<ActivationRule>(m, "ActivationRule")
      .value("Bernoulli", ActivationRule::Bernoulli)
      .value("SourceRelayThreshold", ActivationRule::SourceRelayThreshold)
      .value("RelayDestThreshold", ActivationRule::RelayDestThreshold);

  py::enum_<ThresholdFieldRule>(m, "ThresholdFieldRule")
      .value("FieldConsistent", ThresholdFieldRule::FieldConsistent)
      .value("MarginalProbability", ThresholdFieldRule::MarginalProbability);

  py::class_<McOptions>(m, "McOptions")
      .def(py::init<>())
      .def_readwrite("realizations", &McOptions::realizations)
      .def_readwrite("seed", &McOptions::seed)
      .def_readwrite("workers", &McOptions::workers)
      .def_readwrite("far_field", &McOptions::far_field)
      .def_readwrite("window_radius", &McOptions::window_radius)
      .def_readwrite("activation", &McOptions::activation)
      .def_readwrite("field_rule", &McOptions::field_rule)
      .def_readwrite("threshold_value", &McOptions::threshold_value);

  py::class_<McCounts>(m, "McCounts")
      .def_readonly("realizations", &McCounts::realizations)
      .def_readonly("outages", &McCounts::outages)
      .def_readonly("relay_mode", &McCounts::relay_mode)
      .def_readonly("relay_outage", &McCounts::relay_outage)
      .def_readonly("relay_decode_fail", &McCounts::relay_decode_fail)
      .def_readonly("combined_fail", &McCounts::combined_fail)
      .def_readonly("direct_fail", &McCounts::direct_fail)
      .def_readonly("interferers", &McCounts::interferers)
      .def_readonly("interferer_active", &McCounts::interferer_active);

  py::class_<McResult>(m, "McResult")
      .def_readonly("outage_prob", &McResult::outage_prob)
      .def_readonly("std_error", &McResult::std_error)
      .def_readonly("counts", &McResult::counts)
      .def_readonly("window_radius", &McResult::window_radius)
      .def_readonly("activation_prob", &McResult::activation_prob);

  py::class_<ThresholdSearchResult>(m, "ThresholdSearchResult")
      .def_readonly("threshold", &ThresholdSearchResult::threshold)
      .def_readonly("outage_prob", &ThresholdSearchResult::outage_prob)
      .def_readonly("std_error", &ThresholdSearchResult::std_error)
      .def_readonly("evaluations", &ThresholdSearchResult::evaluations);

  m.def("estimate_op", &estimate_op, py::arg("params"), py::arg("scheme"),
        py::arg("options") = McOptions{});
  m.def("estimate_op_curve", &estimate_op_curve, py::arg("params"),
        py::arg("p_r_grid"), py::arg("scheme"),
        py::arg("options") = McOptions{});
  m.def("optimize_threshold", &optimize_threshold, py::arg("params"),
        py::arg("rule"), py::arg("options") = McOptions{},
        py::arg("budget") = 24);
}
