#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <filesystem>

#include "yfl/config.hpp"
#include "yfl/estimates.hpp"
#include "yfl/experiments.hpp"
#include "yfl/expr.hpp"
#include "yfl/field_io.hpp"
#include "yfl/flow.hpp"
#include "yfl/report.hpp"
#include "yfl/yamabe_constant.hpp"

namespace py = pybind11;
using namespace yfl;

namespace {

using Array = py::array_t<double, py::array::c_style | py::array::forcecast>;

Array to_numpy(const ScalarField& f) {
    std::vector<py::ssize_t> shape(f.grid().nodes.begin(), f.grid().nodes.end());
    Array out(shape);
    std::copy(f.data().begin(), f.data().end(), out.mutable_data());
    return out;
}

ScalarField from_numpy(const GridPtr& grid, const Array& a) {
    if (a.ndim() != grid->dim) throw std::invalid_argument("array has the wrong number of axes");
    for (int k = 0; k < grid->dim; ++k) {
        if (static_cast<std::size_t>(a.shape(k)) != grid->nodes[k])
            throw std::invalid_argument("array shape does not match the grid");
    }
    return ScalarField(grid, std::vector<double>(a.data(), a.data() + a.size()));
}

// Accepts an expression string, a number or an array shaped like the grid.
ScalarField field_arg(const GridPtr& grid, const py::object& v) {
    if (py::isinstance<py::str>(v)) return sample_expression(grid, v.cast<std::string>());
    if (py::isinstance<py::float_>(v) || py::isinstance<py::int_>(v)) return ScalarField(grid, v.cast<double>());
    return from_numpy(grid, v.cast<Array>());
}

KeyValueConfig config_of(const py::dict& d) {
    KeyValueConfig c;
    for (const auto& [k, v] : d) {
        const std::string key = py::str(k);
        if (py::isinstance<py::list>(v) || py::isinstance<py::tuple>(v)) {
            std::string joined;
            for (const auto& item : v) joined += (joined.empty() ? "" : ",") + std::string(py::str(item));
            c.set(key, joined);
        } else if (py::isinstance<py::bool_>(v)) {
            c.set(key, v.cast<bool>() ? "true" : "false");
        } else if (py::isinstance<py::float_>(v)) {
            c.set(key, format_double(v.cast<double>()));
        } else {
            c.set(key, py::str(v));
        }
    }
    return c;
}

py::object parse_json(const std::string& text) { return py::module_::import("json").attr("loads")(text); }

py::dict series_dict(const TimeSeries& ts) {
    const std::size_t m = ts.samples.size();
    auto column = [&](auto get) {
        Array a(static_cast<py::ssize_t>(m));
        for (std::size_t k = 0; k < m; ++k) a.mutable_data()[k] = get(ts.samples[k]);
        return a;
    };
    py::dict d;
    d["t"] = column([](const MonitorSample& s) { return s.t; });
    d["volume"] = column([](const MonitorSample& s) { return s.volume; });
    d["r"] = column([](const MonitorSample& s) { return s.r; });
    d["total_scalar"] = column([](const MonitorSample& s) { return s.total_scalar; });
    d["u_min"] = column([](const MonitorSample& s) { return s.u_min; });
    d["u_max"] = column([](const MonitorSample& s) { return s.u_max; });
    d["inf_R"] = column([](const MonitorSample& s) { return s.inf_R; });
    d["sup_R"] = column([](const MonitorSample& s) { return s.sup_R; });
    d["int_R2"] = column([](const MonitorSample& s) { return s.int_R2; });
    d["int_dev2"] = column([](const MonitorSample& s) { return s.int_dev2; });
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Yamabe flow on periodic tori: conformal geometry, flows, estimates and experiments.";

    py::class_<Background, std::shared_ptr<Background>>(m, "Background")
        .def_property_readonly("dim", &Background::dim)
        .def_property_readonly("nodes", [](const Background& b) { return b.grid->nodes; })
        .def_property_readonly("periods", [](const Background& b) { return b.grid->periods; })
        .def_property_readonly("kind", [](const Background& b) { return std::string(to_string(b.kind)); })
        .def_property_readonly("R0", [](const Background& b) { return to_numpy(b.R0); })
        .def_property_readonly("volume", &Background::volume)
        .def("manifest", &Background::manifest)
        .def("sample", [](const Background& b, const std::string& expr) { return to_numpy(sample_expression(b.grid, expr)); },
             py::arg("expr"), "Samples a field expression on the background grid.");

    m.def(
        "background",
        [](const std::string& kind, int n, py::object nodes, py::object periods, const std::string& phi,
           const std::string& R0, const std::string& diff) {
            py::dict d;
            d["kind"] = kind;
            d["n"] = n;
            d["nodes"] = nodes;
            d["periods"] = periods;
            d["phi"] = phi;
            d["R0"] = R0;
            d["diff"] = diff;
            BackgroundPtr bg = background_spec_from_config(config_of(d)).build();
            return std::const_pointer_cast<Background>(bg);
        },
        py::arg("kind") = "flat", py::arg("n") = 3, py::arg("nodes") = 16, py::arg("periods") = 1.0,
        py::arg("phi") = "1", py::arg("R0") = "0", py::arg("diff") = "spectral",
        "Builds a flat, conformally-flat (phi) or synthetic (R0) background.");

    auto metric = [](const std::shared_ptr<Background>& bg, const py::object& u) {
        return ConformalMetric(bg, field_arg(bg->grid, u));
    };
    m.def("scalar_curvature", [=](const std::shared_ptr<Background>& bg, const py::object& u) {
        return to_numpy(scalar_curvature(metric(bg, u)));
    }, py::arg("background"), py::arg("u"));
    m.def("volume", [=](const std::shared_ptr<Background>& bg, const py::object& u) { return volume(metric(bg, u)); },
          py::arg("background"), py::arg("u"));
    m.def("total_scalar", [=](const std::shared_ptr<Background>& bg, const py::object& u) {
        return total_scalar(metric(bg, u));
    }, py::arg("background"), py::arg("u"));
    m.def("dirichlet_total", [=](const std::shared_ptr<Background>& bg, const py::object& u) {
        return dirichlet_total(metric(bg, u));
    }, py::arg("background"), py::arg("u"));
    m.def("yamabe_quotient", [=](const std::shared_ptr<Background>& bg, const py::object& u) {
        return yamabe_quotient(metric(bg, u));
    }, py::arg("background"), py::arg("u"));

    py::class_<TimeSeries>(m, "TimeSeries")
        .def_readonly("completed", &TimeSeries::completed)
        .def_readonly("abort_reason", &TimeSeries::abort_reason)
        .def_readonly("warnings", &TimeSeries::warnings)
        .def_property_readonly("monitors", &series_dict)
        .def_property_readonly("final_u", [](const TimeSeries& ts) { return to_numpy(ts.final_u); })
        .def_property_readonly("snapshots", [](const TimeSeries& ts) {
            py::list out;
            for (const auto& s : ts.snapshots) out.append(py::make_tuple(s.t, to_numpy(s.u)));
            return out;
        });

    m.def(
        "run_flow",
        [](const std::shared_ptr<Background>& bg, const py::object& u0, const std::string& mode, double dt, double T,
           const std::string& stepper, std::size_t monitor_stride, std::size_t snapshot_every) {
            FlowConfig c;
            c.mode = parse_flow_mode(mode);
            c.dt = dt;
            c.horizon = T;
            c.stepper = parse_stepper(stepper);
            c.monitor_stride = monitor_stride;
            c.snapshot_every = snapshot_every;
            const ScalarField u = field_arg(bg->grid, u0);
            py::gil_scoped_release release;
            return run_flow(u, bg, c);
        },
        py::arg("background"), py::arg("u0"), py::arg("mode") = "normalized", py::arg("dt") = 1e-4,
        py::arg("T") = 0.5, py::arg("stepper") = "semi-implicit", py::arg("monitor_stride") = 1,
        py::arg("snapshot_every") = 0);

    m.def("dr_dt_residual", &dr_dt_residual, py::arg("series"));
    m.def("scalar_evolution_residual",
          [](const TimeSeries& ts, const std::shared_ptr<Background>& bg) { return scalar_evolution_residual(ts, bg); },
          py::arg("series"), py::arg("background"));

    m.def(
        "gronwall_bound",
        [](const std::vector<double>& alpha, const std::vector<double>& beta, const std::vector<double>& t) {
            return gronwall_bound(alpha, beta, t);
        },
        py::arg("alpha"), py::arg("beta"), py::arg("t"));

    auto report = [](const EstimateReport& r) { return parse_json(to_json(r).dump()); };
    m.def("ye_min_check", [=](const TimeSeries& ts, double Y, double vol) { return report(ye_min_bound_check(ts, Y, vol)); },
          py::arg("series"), py::arg("Y"), py::arg("vol"));
    m.def("ye_max_check", [=](const TimeSeries& ts, double kappa, double vol, double R0_min) {
        return report(ye_max_bound_check(ts, kappa, vol, R0_min));
    }, py::arg("series"), py::arg("kappa"), py::arg("vol"), py::arg("R0_min"));
    m.def("scalar_lower_check", [=](const TimeSeries& ts, double delta) {
        return report(scalar_lower_preservation_check(ts, delta));
    }, py::arg("series"), py::arg("delta"));
    m.def("brendle_sup_check", [=](const TimeSeries& ts, double kappa, double vol, double sigma) {
        return report(brendle_sup_bound_check(ts, kappa, vol, sigma));
    }, py::arg("series"), py::arg("kappa"), py::arg("vol"), py::arg("sigma"));
    m.def("volume_bounds_check", [=](const TimeSeries& ts, double kappa, double Y) {
        return report(volume_bounds_check(ts, kappa, Y));
    }, py::arg("series"), py::arg("kappa"), py::arg("Y") = 0.0);
    m.def("c_psi", [](const std::shared_ptr<Background>& bg, const py::object& psi) {
        return c_psi(*bg, field_arg(bg->grid, psi)).value;
    }, py::arg("background"), py::arg("psi"));

    m.def(
        "run_experiment",
        [](const py::dict& config, const std::string& out) {
            const ExperimentSpec spec = experiment_from_config(config_of(config));
            const std::string hash = config_hash(config_of(config));
            ClosednessReport r;
            {
                py::gil_scoped_release release;
                r = run_closedness_experiment(spec);
            }
            if (!out.empty()) emit_report(std::filesystem::path(out), r, hash);
            return parse_json(report_json(r, hash));
        },
        py::arg("config"), py::arg("out") = "",
        "Runs a closedness experiment from CLI-style keys; optionally writes the report directory.");

    m.def(
        "estimate_yamabe_constant",
        [](const std::shared_ptr<Background>& bg, std::size_t starts, double T, double dt, std::uint64_t seed) {
            YamabeEstimateConfig c;
            c.starts = starts;
            c.horizon = T;
            c.dt = dt;
            c.seed = seed;
            YamabeEstimate e;
            {
                py::gil_scoped_release release;
                e = estimate_yamabe_constant(bg, c);
            }
            py::list finals;
            for (const auto& s : e.starts) finals.append(s.final_quotient);
            py::dict d;
            d["value"] = e.value;
            d["best_start"] = e.best_start;
            d["final_quotients"] = finals;
            return d;
        },
        py::arg("background"), py::arg("starts") = 4, py::arg("T") = 0.2, py::arg("dt") = 1e-4, py::arg("seed") = 1);
}
