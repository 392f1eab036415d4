#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "bbfs/batteries.hpp"
#include "bbfs/expr.hpp"
#include "bbfs/grid.hpp"
#include "bbfs/harness.hpp"
#include "bbfs/operators.hpp"
#include "bbfs/runner.hpp"
#include "bbfs/spaces.hpp"
#include "bbfs/wavelets.hpp"
#include "bbfs/weights.hpp"

namespace py = pybind11;
using namespace bbfs;

namespace {

Grid make_grid_py(int n, const std::vector<double>& box, int level) {
    Box b;
    b.n = n;
    if (n == 1) {
        if (box.size() != 2) throw ContractError("box must be [lo, hi]");
        b.lo[0] = box[0];
        b.hi[0] = box[1];
    } else {
        if (box.size() != 4) throw ContractError("box must be [lox, hix, loy, hiy]");
        b.lo[0] = box[0];
        b.hi[0] = box[1];
        b.lo[1] = box[2];
        b.hi[1] = box[3];
    }
    return Grid::make(n, b, level);
}

GridFunction sample_expr(const Grid& g, const std::string& text) {
    Expression e = Expression::parse(text);
    return sample(g, [&](Point x) { return e(x); });
}

// single-space shorthand: the text is the body of one space block
SpaceSpec space_from_config(const std::string& text) {
    ConfigNode node = ConfigNode::parse(text);
    std::string cfg = "seed = 0\ngrid { n = 1 box = [-4, 4] L = 6 }\nspaces { X {\n" +
                      node.serialize() + "} }\n";
    Experiment exp = build_experiment(ConfigNode::parse(cfg));
    return exp.spaces.at("X");
}

py::dict run_config_text(const std::string& text) {
    ConfigNode cfg = ConfigNode::parse(text);
    Experiment exp = build_experiment(cfg);
    RunResult res = run_experiment(exp);
    py::dict out;
    out["exit_code"] = res.exit_code;
    out["pass"] = res.pass;
    out["json"] = res.json_text;
    out["table"] = res.table_text;
    out["csv"] = res.csv_text;
    out["effective_config"] = res.effective_config;
    return out;
}

}  // namespace

PYBIND11_MODULE(_bbfs, m) {
    m.doc() = "ball Banach function space norms, operators and verification checks";

    py::register_exception<ContractError>(m, "BbfsContractError", PyExc_ValueError);
    py::register_exception<NumericError>(m, "BbfsNumericError", PyExc_RuntimeError);

    py::class_<Grid>(m, "Grid")
        .def_property_readonly("n", &Grid::dim)
        .def_property_readonly("level", &Grid::level)
        .def_property_readonly("h", &Grid::h)
        .def_property_readonly("cell_count", &Grid::cell_count)
        .def("center",
             [](const Grid& g, std::int64_t i) {
                 Point p = g.center(i);
                 return std::vector<double>(p.begin(), p.begin() + g.dim());
             })
        .def("__repr__", [](const Grid& g) {
            std::ostringstream os;
            os << "Grid(n=" << g.dim() << ", L=" << g.level()
               << ", cells=" << g.cell_count() << ")";
            return os.str();
        });

    py::class_<GridFunction>(m, "GridFunction")
        .def_property_readonly("grid", &GridFunction::grid)
        .def_property_readonly("values",
                               [](const GridFunction& f) { return f.values(); })
        .def("__len__", &GridFunction::size)
        .def("__getitem__",
             [](const GridFunction& f, std::int64_t i) {
                 if (i < 0 || i >= f.size()) throw py::index_error();
                 return f[i];
             })
        .def("max_abs", &GridFunction::max_abs);

    m.def("make_grid", &make_grid_py, py::arg("n"), py::arg("box"), py::arg("level"));
    m.def("sample_expr", &sample_expr, py::arg("grid"), py::arg("expr"));
    m.def("grid_function", [](const Grid& g, const std::vector<double>& values) {
        return GridFunction(g, values);
    });
    m.def("integrate", [](const GridFunction& f) { return integrate(f); });
    m.def("lp_norm",
          [](const GridFunction& f, double p) { return lp_norm(f, p); },
          py::arg("f"), py::arg("p"));

    m.def(
        "maximal",
        [](const GridFunction& f, const std::string& normalization, bool exhaustive) {
            MaximalOptions o;
            o.normalization = normalization == "paper" ? MaxNormalization::paper
                                                       : MaxNormalization::measure;
            o.exhaustive_radii = exhaustive;
            return maximal(f, o);
        },
        py::arg("f"), py::arg("normalization") = "measure",
        py::arg("exhaustive") = false);
    m.def("riesz",
          [](const GridFunction& f, int axis) { return riesz(f, axis); },
          py::arg("f"), py::arg("axis") = 0);
    m.def(
        "bessel_potential",
        [](const GridFunction& f, double s, bool inverse) {
            return bessel_potential(
                f, s, inverse ? BesselDirection::inverse : BesselDirection::forward);
        },
        py::arg("f"), py::arg("s"), py::arg("inverse") = false);

    m.def(
        "ap_constant",
        [](const GridFunction& w, double p) {
            ApEstimate est = ap_constant(w, p);
            py::dict d;
            d["value"] = est.value;
            d["witness_lo"] = est.witness.lo[0];
            d["witness_side"] = est.witness.side;
            d["cubes"] = est.cube_count;
            return d;
        },
        py::arg("w"), py::arg("p"));
    m.def("a1_constant",
          [](const GridFunction& w) { return a1_constant(w, MaximalOptions{}); });
    m.def("dual_weight", &dual_weight, py::arg("w"), py::arg("p"));

    py::class_<SpaceSpec>(m, "SpaceSpec")
        .def_property_readonly("separable", &SpaceSpec::separable)
        .def("describe", &SpaceSpec::describe)
        .def("__repr__", [](const SpaceSpec& s) { return s.describe(); });

    m.def("space", &space_from_config, py::arg("config_text"),
          "build a space from a config block, e.g. \"tag = Lorentz p = 2 q = 1\"");
    m.def(
        "space_norm",
        [](const SpaceSpec& X, const GridFunction& f) { return space_norm(X, f); },
        py::arg("space"), py::arg("f"));
    m.def("kothe_dual", [](const SpaceSpec& X) -> py::object {
        auto d = kothe_dual(X);
        if (!d) return py::none();
        return py::cast(*d);
    });

    py::class_<WaveletSystem>(m, "WaveletSystem")
        .def_property_readonly("support_n", &WaveletSystem::support_n)
        .def_property_readonly("smoothness", &WaveletSystem::smoothness)
        .def_property_readonly("cascade_level", &WaveletSystem::cascade_level)
        .def("__repr__", [](const WaveletSystem& s) {
            return "WaveletSystem(" + to_string(s.family()) + ")";
        });

    m.def(
        "build_system",
        [](const std::string& family, int n, int J, int cascade) {
            WaveletFamily f = WaveletFamily::haar;
            if (family == "db2") f = WaveletFamily::db2;
            else if (family == "db3") f = WaveletFamily::db3;
            else if (family == "db4") f = WaveletFamily::db4;
            else if (family != "haar") throw ContractError("unknown family " + family);
            return WaveletSystem::build(f, n, J, cascade);
        },
        py::arg("family"), py::arg("n") = 1, py::arg("J") = 0, py::arg("cascade") = 12);

    py::class_<WaveletCoefficients>(m, "WaveletCoefficients")
        .def_property_readonly("count", &WaveletCoefficients::count)
        .def("sum_squares", &WaveletCoefficients::sum_squares);

    m.def("analyze",
          [](const GridFunction& f, const WaveletSystem& sys, int j_max, int margin) {
              return analyze(f, sys, j_max, margin);
          },
          py::arg("f"), py::arg("system"), py::arg("j_max"), py::arg("margin") = 2);
    m.def("square_function_V", &square_function_V);
    m.def("square_function_W", &square_function_W, py::arg("coeffs"), py::arg("system"),
          py::arg("s") = 0.0);
    m.def("partial_sum", &partial_sum, py::arg("coeffs"), py::arg("system"),
          py::arg("j_cut"));

    m.def("run_config", &run_config_text, py::arg("config_text"),
          "parse, validate and run an experiment config; returns reports");
    m.def("list_spaces", &list_spaces_text);
    m.def("list_checks", &list_checks_text);
}
