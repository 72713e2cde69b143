// Python bindings for the gate-synthesis core.  The surface mirrors the C++
// headers: gates and their algebra, gate sets, cost models, the sequence
// database, nearest-sequence synthesis, the layer-proportion model, and the
// cost-scaling experiment driver.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "hiersynth/cost_model.hpp"
#include "hiersynth/errors.hpp"
#include "hiersynth/experiment.hpp"
#include "hiersynth/gate.hpp"
#include "hiersynth/gate_set.hpp"
#include "hiersynth/proportions.hpp"
#include "hiersynth/rng.hpp"
#include "hiersynth/sequence_db.hpp"
#include "hiersynth/stats.hpp"
#include "hiersynth/synthesizer.hpp"

namespace py = pybind11;
using namespace hiersynth;

namespace {

std::string repr_gate(const GateElement& g) {
    std::ostringstream out;
    out.precision(12);
    out << "GateElement(w=" << g.w << ", x=" << g.x << ", y=" << g.y << ", z=" << g.z
        << ")";
    return out.str();
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Cost-optimal single-qubit gate sequences over Clifford-hierarchy "
              "rotation layers";

    py::register_exception_translator([](std::exception_ptr p) {
        try {
            if (p) {
                std::rethrow_exception(p);
            }
        } catch (const IoError& e) {
            PyErr_SetString(PyExc_OSError, e.what());
        } catch (const FormatError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const ResourceLimitError& e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        } catch (const DegenerateError& e) {
            PyErr_SetString(PyExc_ArithmeticError, e.what());
        } catch (const DomainError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const BudgetError& e) {
            PyErr_SetString(PyExc_ValueError, e.what());
        } catch (const Error& e) {
            PyErr_SetString(PyExc_RuntimeError, e.what());
        }
    });

    // ---- gates ----------------------------------------------------------
    py::class_<GateElement>(m, "GateElement",
                            "PSU(2) element as a sign-canonical quaternion")
        .def(py::init<>())
        .def_readonly("w", &GateElement::w)
        .def_readonly("x", &GateElement::x)
        .def_readonly("y", &GateElement::y)
        .def_readonly("z", &GateElement::z)
        .def("__eq__",
             [](const GateElement& a, const GateElement& b) { return a == b; })
        .def("__repr__", &repr_gate);

    m.def("identity_gate", &identity_gate);
    m.def("gate_h", &gate_h);
    m.def("gate_s", &gate_s);
    m.def("gate_t", &gate_t);
    m.def("gate_x", &gate_x);
    m.def("gate_y", &gate_y);
    m.def("gate_z", &gate_z);
    m.def("rz", &rz, py::arg("theta"), "Z-rotation by the given angle");
    m.def("compose", &compose, py::arg("a"), py::arg("b"),
          "Product a*b (a applied after b)");
    m.def("adjoint", &adjoint);
    m.def("trace_distance", &trace_distance, py::arg("a"), py::arg("b"),
          "sqrt(1 - |<a, b>|), the projective metric used everywhere");
    m.def("parse_gate", &parse_gate, py::arg("text"),
          "Parse literals like 'H S H' or 'Rz(pi/4)'");
    m.def("format_gate", &format_gate);

    py::class_<Rng>(m, "Rng", "Seeded portable random generator")
        .def(py::init<std::uint64_t>(), py::arg("seed"))
        .def("next_u64", &Rng::next_u64);
    m.def("haar_random_gate", &haar_random_gate, py::arg("rng"),
          "Haar-uniform PSU(2) element");

    // ---- gate sets and cost models --------------------------------------
    py::class_<GateSetSpec>(m, "GateSetSpec")
        .def_static("set_k", &GateSetSpec::set_k, py::arg("k"),
                    "Conventional ladder: set k holds rotation layers 3..k+2")
        .def_static("for_max_order", &GateSetSpec::for_max_order, py::arg("l"))
        .def_readonly("max_order", &GateSetSpec::max_order)
        .def("__eq__",
             [](const GateSetSpec& a, const GateSetSpec& b) { return a == b; });

    py::class_<BaseGate>(m, "BaseGate")
        .def_readonly("id", &BaseGate::id)
        .def_readonly("label", &BaseGate::label)
        .def_readonly("element", &BaseGate::element)
        .def_readonly("order", &BaseGate::order);

    py::class_<GateSet>(m, "GateSet")
        .def_readonly("spec", &GateSet::spec)
        .def_readonly("gates", &GateSet::gates)
        .def_readonly("fingerprint", &GateSet::fingerprint)
        .def("__len__", [](const GateSet& s) { return s.gates.size(); });
    m.def("build_gate_set", &build_gate_set, py::arg("spec"));

    py::class_<CostModel>(m, "CostModel")
        .def_static("catalyst_direct", &CostModel::catalyst_direct,
                    py::arg("max_order"))
        .def_static("catalyst_magic", &CostModel::catalyst_magic, py::arg("max_order"))
        .def_static("distillation", &CostModel::distillation, py::arg("mu"),
                    py::arg("max_order"))
        .def_static("custom", &CostModel::custom, py::arg("table"))
        .def("order_cost", &CostModel::order_cost, py::arg("l"))
        .def("cheapest_rotation_cost", &CostModel::cheapest_rotation_cost);

    // ---- sequence database ----------------------------------------------
    py::class_<SeqNode>(m, "SeqNode")
        .def_readonly("combined", &SeqNode::combined)
        .def_readonly("cost", &SeqNode::cost)
        .def_readonly("parent", &SeqNode::parent)
        .def_readonly("base_gate", &SeqNode::base_gate)
        .def_readonly("depth", &SeqNode::depth);

    py::class_<SequenceDatabase>(m, "SequenceDatabase")
        .def(py::init<GateSet, CostModel, std::uint64_t>(), py::arg("set"),
             py::arg("model"), py::arg("node_ceiling") = kDefaultNodeCeiling)
        .def_static("generate", &SequenceDatabase::generate, py::arg("set"),
                    py::arg("model"), py::arg("max_cost"),
                    py::arg("node_ceiling") = kDefaultNodeCeiling,
                    py::call_guard<py::gil_scoped_release>())
        .def("grow", &SequenceDatabase::grow, py::arg("new_max_cost"),
             py::call_guard<py::gil_scoped_release>())
        .def("watermark", &SequenceDatabase::watermark)
        .def("__len__", &SequenceDatabase::size)
        .def("node", &SequenceDatabase::node, py::arg("id"),
             py::return_value_policy::reference_internal)
        .def("decode_sequence", &SequenceDatabase::decode_sequence, py::arg("id"))
        .def("recompose", &SequenceDatabase::recompose, py::arg("id"))
        .def("save", &SequenceDatabase::save, py::arg("path"))
        .def_static("load", &SequenceDatabase::load, py::arg("path"))
        .def_property_readonly("gate_set", &SequenceDatabase::gate_set,
                               py::return_value_policy::reference_internal)
        .def_property_readonly("cost_model", &SequenceDatabase::cost_model,
                               py::return_value_policy::reference_internal);

    // ---- synthesis --------------------------------------------------------
    py::class_<GrowthPolicy>(m, "GrowthPolicy")
        .def(py::init([](double increment, double ceiling) {
                 return GrowthPolicy{increment, ceiling};
             }),
             py::arg("increment") = 0.0, py::arg("ceiling") = 10000.0)
        .def_readwrite("increment", &GrowthPolicy::increment)
        .def_readwrite("ceiling", &GrowthPolicy::ceiling);

    py::class_<SynthesisResult>(m, "SynthesisResult")
        .def_readonly("node_id", &SynthesisResult::node_id)
        .def_readonly("gate_ids", &SynthesisResult::gate_ids)
        .def_readonly("gate_labels", &SynthesisResult::gate_labels)
        .def_readonly("cost", &SynthesisResult::cost)
        .def_readonly("achieved_error", &SynthesisResult::achieved_error)
        .def_readonly("epsilon", &SynthesisResult::epsilon)
        .def_readonly("grew_to", &SynthesisResult::grew_to);

    py::class_<VerifyReport>(m, "VerifyReport")
        .def_readonly("pass_", &VerifyReport::pass)
        .def_readonly("cost_ok", &VerifyReport::cost_ok)
        .def_readonly("error_ok", &VerifyReport::error_ok)
        .def_readonly("bound_ok", &VerifyReport::bound_ok)
        .def_readonly("recomputed_cost", &VerifyReport::recomputed_cost)
        .def_readonly("recomputed_error", &VerifyReport::recomputed_error);

    py::class_<Synthesizer>(m, "Synthesizer")
        .def(py::init<SequenceDatabase&, GrowthPolicy>(), py::arg("db"),
             py::arg("policy") = GrowthPolicy{}, py::keep_alive<1, 2>())
        .def("synthesize", &Synthesizer::synthesize, py::arg("target"),
             py::arg("epsilon"), py::call_guard<py::gil_scoped_release>())
        .def("synthesize_batch", &Synthesizer::synthesize_batch, py::arg("targets"),
             py::arg("epsilon"), py::call_guard<py::gil_scoped_release>())
        .def("search_radius", &Synthesizer::search_radius, py::arg("epsilon"));

    m.def("scan_synthesize", &scan_synthesize, py::arg("db"), py::arg("target"),
          py::arg("epsilon"),
          "Exhaustive reference lookup; None when nothing is within epsilon");
    m.def("verify", &verify, py::arg("db"), py::arg("result"), py::arg("target"));

    // ---- proportion model -------------------------------------------------
    py::class_<ProportionParams>(m, "ProportionParams")
        .def(py::init([](int max_order, std::vector<double> costs,
                         std::vector<std::uint64_t> set_sizes, double max_cost) {
                 ProportionParams p;
                 p.max_order = max_order;
                 p.costs = std::move(costs);
                 p.set_sizes = std::move(set_sizes);
                 p.max_cost = max_cost;
                 return p;
             }),
             py::arg("max_order"), py::arg("costs"),
             py::arg("set_sizes") = std::vector<std::uint64_t>{},
             py::arg("max_cost") = 0.0)
        .def_readwrite("max_order", &ProportionParams::max_order)
        .def_readwrite("costs", &ProportionParams::costs)
        .def_readwrite("set_sizes", &ProportionParams::set_sizes)
        .def_readwrite("max_cost", &ProportionParams::max_cost);

    py::class_<ProportionResult>(m, "ProportionResult")
        .def_readonly("p", &ProportionResult::p)
        .def_readonly("log_total_configs", &ProportionResult::log_total_configs);

    m.def("proportions", &proportions, py::arg("params"),
          py::call_guard<py::gil_scoped_release>(),
          "Modeled share of each rotation layer among admissible sequences");
    m.def("empirical_proportions", &empirical_proportions, py::arg("gates"),
          py::arg("results"),
          "Observed rotation-layer shares across synthesized sequences");

    // ---- statistics and experiments ----------------------------------------
    py::class_<FitResult>(m, "FitResult")
        .def_readonly("slope", &FitResult::slope)
        .def_readonly("intercept", &FitResult::intercept)
        .def_readonly("slope_ci", &FitResult::slope_ci)
        .def_readonly("intercept_ci", &FitResult::intercept_ci)
        .def_readonly("residual_stddev", &FitResult::residual_stddev)
        .def_readonly("n", &FitResult::n);

    m.def(
        "ols_fit",
        [](const std::vector<std::pair<double, double>>& pts) {
            std::vector<FitPoint> points;
            points.reserve(pts.size());
            for (const auto& [x, y] : pts) {
                points.push_back({x, y});
            }
            return ols_fit(points);
        },
        py::arg("points"), "Least-squares line with 95% confidence half-widths");
    m.def("student_t_critical", &student_t_critical, py::arg("level"), py::arg("dof"));

    py::class_<ScalingReduction>(m, "ScalingReduction")
        .def_readonly("percent", &ScalingReduction::percent)
        .def_readonly("uncertainty", &ScalingReduction::uncertainty);
    m.def("scaling_reduction", &scaling_reduction, py::arg("baseline"),
          py::arg("other"));

    py::class_<ExperimentSpec>(m, "ExperimentSpec")
        .def(py::init<>())
        .def_readwrite("set_spec", &ExperimentSpec::set_spec)
        .def_readwrite("cost_model", &ExperimentSpec::cost_model)
        .def_readwrite("epsilons", &ExperimentSpec::epsilons)
        .def_readwrite("target_count", &ExperimentSpec::target_count)
        .def_readwrite("seed", &ExperimentSpec::seed)
        .def_readwrite("growth_increment", &ExperimentSpec::growth_increment)
        .def_readwrite("growth_ceiling", &ExperimentSpec::growth_ceiling)
        .def_readwrite("forced_targets", &ExperimentSpec::forced_targets);

    py::class_<ExperimentRow>(m, "ExperimentRow")
        .def_readonly("epsilon", &ExperimentRow::epsilon)
        .def_readonly("mean_cost", &ExperimentRow::mean_cost)
        .def_readonly("stderr_cost", &ExperimentRow::stderr_cost)
        .def_readonly("n", &ExperimentRow::n);

    py::class_<ExperimentTable>(m, "ExperimentTable")
        .def_readonly("rows", &ExperimentTable::rows)
        .def_readonly("target_hash", &ExperimentTable::target_hash)
        .def_readonly("final_watermark", &ExperimentTable::final_watermark)
        .def_readonly("partial", &ExperimentTable::partial)
        .def("to_json", [](const ExperimentTable& t) { return table_to_json(t); });

    m.def(
        "run_experiment",
        [](const ExperimentSpec& spec) { return run_experiment(spec); },
        py::arg("spec"), py::call_guard<py::gil_scoped_release>(),
        "Synthesize the target pool at every accuracy and tabulate mean costs");
    m.def("table_from_json", &table_from_json, py::arg("text"));
    m.def("fit_to_json", &fit_to_json, py::arg("fit"));
}
