#include <pybind11/complex.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "painleve/asymptotics.hpp"

namespace py = pybind11;
using namespace painleve;

namespace {

Equation equation_from(const std::string& name) {
    if (name == "p1") return Equation::painleve_i();
    if (name == "p2") return Equation::painleve_ii();
    if (name == "toy") return Equation::toy_model();
    throw Error(ErrorCode::InvalidArgument, "equation must be 'p1', 'p2' or 'toy', got '" + name + "'");
}

Direction direction_from(const std::string& name) {
    if (name == "neg") return Direction::NegativeT;
    if (name == "pos") return Direction::PositiveT;
    throw Error(ErrorCode::InvalidArgument, "direction must be 'neg' or 'pos', got '" + name + "'");
}

SearchMode mode_from(const Equation& eq, const std::string& name, double fixed_value) {
    if (eq.kind() == EquationKind::ToyModel) return SearchMode::toy();
    if (name == "slope") return SearchMode::slope(fixed_value);
    if (name == "value") return SearchMode::value(fixed_value);
    throw Error(ErrorCode::InvalidArgument, "mode must be 'slope' or 'value', got '" + name + "'");
}

// Default direction for a plain trajectory: towards -t except the toy model.
Direction default_direction(const Equation& eq) {
    return eq.kind() == EquationKind::ToyModel ? Direction::PositiveT : Direction::NegativeT;
}

}  // namespace

PYBIND11_MODULE(_painleve, m) {
    m.doc() = "Movable poles and nonlinear eigenvalues of the Painleve I and II equations";

    py::register_exception<Error>(m, "PainleveError", PyExc_RuntimeError);

    py::class_<IntegrationConfig>(m, "IntegrationConfig")
        .def(py::init<>())
        .def_readwrite("rel_tol", &IntegrationConfig::rel_tol)
        .def_readwrite("abs_tol", &IntegrationConfig::abs_tol)
        .def_readwrite("pole_trigger", &IntegrationConfig::pole_trigger)
        .def_readwrite("purity_tol", &IntegrationConfig::purity_tol)
        .def_readwrite("t_horizon", &IntegrationConfig::t_horizon)
        .def_readwrite("max_poles", &IntegrationConfig::max_poles)
        .def_readwrite("min_step", &IntegrationConfig::min_step)
        .def_readwrite("max_step", &IntegrationConfig::max_step)
        .def_readwrite("radius_fraction", &IntegrationConfig::radius_fraction)
        .def_readwrite("min_radius", &IntegrationConfig::min_radius)
        .def_readwrite("max_radius", &IntegrationConfig::max_radius)
        .def_property(
            "detour_side",
            [](const IntegrationConfig& c) { return c.detour_side == DetourSide::Upper ? "upper" : "lower"; },
            [](IntegrationConfig& c, const std::string& s) {
                if (s != "upper" && s != "lower")
                    throw Error(ErrorCode::InvalidArgument, "detour_side must be 'upper' or 'lower'");
                c.detour_side = s == "upper" ? DetourSide::Upper : DetourSide::Lower;
            });

    py::class_<PoleEvent>(m, "PoleEvent")
        .def_readonly("location", &PoleEvent::location)
        .def_readonly("order", &PoleEvent::order)
        .def_readonly("detour_radius", &PoleEvent::detour_radius)
        .def_readonly("entry_value", &PoleEvent::entry_value)
        .def("__repr__", [](const PoleEvent& p) {
            return "PoleEvent(location=" + std::to_string(p.location) + ", order=" + std::to_string(p.order) + ")";
        });

    py::class_<Trajectory>(m, "Trajectory")
        .def_readonly("poles", &Trajectory::poles)
        .def_readonly("terminal_t", &Trajectory::terminal_t)
        .def_property_readonly("termination", [](const Trajectory& t) { return to_string(t.termination); })
        .def_property_readonly("path",
                               [](const Trajectory& t) {
                                   std::vector<std::tuple<cplx, cplx, cplx>> out;
                                   for (const State& s : t.samples) out.emplace_back(s.t, s.y, s.yp);
                                   return out;
                               },
                               "Every accepted point (t, y, y') including detour arcs.")
        .def("real_samples",
             [](const Trajectory& t) {
                 std::vector<std::tuple<double, double, double>> out;
                 for (const State& s : t.real_samples()) out.emplace_back(s.t.real(), s.y.real(), s.yp.real());
                 return out;
             },
             "Real-axis samples as (t, y, y') tuples.");

    m.def(
        "integrate",
        [](const std::string& equation, double y0, double slope, std::optional<std::string> direction,
           std::optional<IntegrationConfig> config) {
            const Equation eq = equation_from(equation);
            const Direction dir = direction ? direction_from(*direction) : default_direction(eq);
            py::gil_scoped_release release;
            return integrate(eq, {y0, slope, 0.0}, dir, config.value_or(IntegrationConfig{}));
        },
        py::arg("equation"), py::arg("y0"), py::arg("slope") = 0.0, py::arg("direction") = py::none(),
        py::arg("config") = py::none(), "Integrates one initial-value problem from t = 0.");

    py::class_<SolutionClass>(m, "SolutionClass")
        .def_property_readonly("tag", [](const SolutionClass& c) { return to_string(c.tag); })
        .def_readonly("pole_count", &SolutionClass::pole_count)
        .def_readonly("confidence_window", &SolutionClass::confidence_window);

    m.def(
        "classify",
        [](const std::string& equation, const Trajectory& traj, const std::string& direction) {
            return classify(equation_from(equation), traj, direction_from(direction));
        },
        py::arg("equation"), py::arg("trajectory"), py::arg("direction"));
    m.def("count_toy_maxima", &count_toy_maxima, py::arg("trajectory"));

    py::class_<EigenvalueRecord>(m, "EigenvalueRecord")
        .def_readonly("index", &EigenvalueRecord::index)
        .def_readonly("value", &EigenvalueRecord::value)
        .def_readonly("bracket_width", &EigenvalueRecord::bracket_width)
        .def_readonly("pole_count", &EigenvalueRecord::pole_count)
        .def_property_readonly("mode", [](const EigenvalueRecord& r) { return to_string(r.mode.kind); })
        .def("__repr__", [](const EigenvalueRecord& r) {
            char buf[96];
            std::snprintf(buf, sizeof buf, "EigenvalueRecord(index=%d, value=%.12g)", r.index, r.value);
            return std::string(buf);
        });

    py::class_<EigenTable>(m, "EigenTable")
        .def_readonly("records", &EigenTable::records)
        .def_readonly("failed_index", &EigenTable::failed_index)
        .def_readonly("failure", &EigenTable::failure)
        .def_readonly("warnings", &EigenTable::warnings)
        .def_property_readonly("values", [](const EigenTable& t) {
            std::vector<double> v;
            for (const EigenvalueRecord& r : t.records) v.push_back(r.value);
            return v;
        });

    m.def(
        "eigen_table",
        [](const std::string& equation, const std::string& mode, int n, double tol, double fixed_value,
           unsigned threads) {
            const Equation eq = equation_from(equation);
            const SearchMode sm = mode_from(eq, mode, fixed_value);
            SolverConfig cfg;
            cfg.threads = threads;
            py::gil_scoped_release release;
            return eigen_table(eq, sm, n, tol, cfg);
        },
        py::arg("equation"), py::arg("mode") = "slope", py::arg("n") = 5, py::arg("tol") = 1e-10,
        py::arg("fixed_value") = 0.0, py::arg("threads") = 0u,
        "Eigenvalues n = 1..n; a partial table carries failed_index and failure.");

    m.def(
        "validate_separatrix",
        [](const std::string& equation, const EigenvalueRecord& record) {
            return validate_separatrix(equation_from(equation), record);
        },
        py::arg("equation"), py::arg("record"));

    m.def("gamma", &gamma_fn, py::arg("x"));
    m.def(
        "wkb_energy", [](double g, double epsilon, int n) { return wkb_energy({g, epsilon}, n); },
        py::arg("g"), py::arg("epsilon"), py::arg("n"));
    m.def("hermitian_quartic_energy", &hermitian_quartic_energy, py::arg("n"));
    m.def("closed_form_constants", [] {
        const WkbConstants c = closed_form_constants();
        py::dict d;
        d["B_I"] = c.b_i;
        d["C_I"] = c.c_i;
        d["B_II"] = c.b_ii;
        d["C_II"] = c.c_ii;
        return d;
    });

    py::class_<RichardsonResult>(m, "RichardsonResult")
        .def_readonly("estimate", &RichardsonResult::estimate)
        .def_readonly("order", &RichardsonResult::order)
        .def_readonly("stability", &RichardsonResult::stability);

    m.def(
        "richardson",
        [](const std::vector<double>& seq, int order, int first_index, double offset) {
            return richardson_shifted(seq, order, offset, first_index);
        },
        py::arg("seq"), py::arg("order"), py::arg("first_index") = 1, py::arg("offset") = 0.0);

    m.def(
        "extract_constant",
        [](const std::vector<EigenvalueRecord>& records, double exponent, int order, bool even_odd) {
            const ConstantExtraction ex = extract_constant(
                records, exponent, order, even_odd ? SubsequenceSplit::EvenOdd : SubsequenceSplit::None);
            return std::make_pair(ex.estimate, ex.odd_estimate);
        },
        py::arg("records"), py::arg("exponent"), py::arg("order"), py::arg("even_odd") = false,
        "Returns (estimate, odd_estimate); odd_estimate is None unless even_odd.");

    m.def(
        "energy", [](const std::string& eq, double y, double yp) { return energy(equation_from(eq), y, yp); },
        py::arg("equation"), py::arg("y"), py::arg("yp"));
    m.def(
        "asymptotic_branch",
        [](const std::string& eq, double t, int sign) {
            return asymptotic_branch(equation_from(eq), t, sign >= 0 ? Branch::Plus : Branch::Minus);
        },
        py::arg("equation"), py::arg("t"), py::arg("sign") = 1);
}
