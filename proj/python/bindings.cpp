#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>

#include "suppflow/config.hpp"
#include "suppflow/functionals.hpp"
#include "suppflow/stationary.hpp"

namespace py = pybind11;
using namespace suppflow;

namespace {

GridKind kind_from(const std::string& kind) {
    if (kind == "circle") return GridKind::Circle;
    if (kind == "axisymmetric") return GridKind::Axisymmetric;
    throw std::invalid_argument("grid kind must be 'circle' or 'axisymmetric'");
}

ConvexBodyState ball_body(double radius, int n, int m, const std::string& kind) {
    return realize(ball_recipe(radius), build_grid(n, m, kind_from(kind)));
}

ConvexBodyState body_from_config_text(const std::string& text) {
    KeyValues kv = parse_key_values(text);
    FlowConfig cfg = flow_config_from(kv);
    return realize(cfg.initial, build_grid(cfg.grid_n, cfg.grid_m, cfg.grid_kind));
}

py::dict check_from_config(const std::string& text) {
    KeyValues kv = parse_key_values(text);
    FlowConfig cfg = flow_config_from(kv);
    auto body = realize(cfg.initial, build_grid(cfg.grid_n, cfg.grid_m, cfg.grid_kind));
    py::dict out;
    ConditionIReport ci = check_condition_i(cfg.forcing, cfg.beta);
    out["condition_i"] = ci.verdict == Verdict::Pass   ? "pass"
                         : ci.verdict == Verdict::Fail ? "fail"
                                                       : "inconclusive";
    out["lower_bracket"] = std::vector<double>{ci.lower_bracket[0], ci.lower_bracket[1]};
    out["upper_bracket"] = std::vector<double>{ci.upper_bracket[0], ci.upper_bracket[1]};
    ConditionIIReport cii = check_condition_ii(cfg.forcing, cfg.beta, body);
    out["condition_ii"] = cii.pass ? "pass" : "fail";
    if (cfg.forcing.x_independent()) {
        ConditionIIIReport ciii = check_condition_iii_decay(cfg.forcing, cfg.beta);
        out["condition_iii"] = ciii.pass ? "pass" : "fail";
    } else {
        out["condition_iii"] = "not_applicable";
    }
    UniquenessReport uq = check_uniqueness_condition(cfg.forcing, cfg.beta);
    out["uniqueness"] = uq.pass ? "pass" : "fail";
    return out;
}

py::dict run_from_config(const std::string& text) {
    KeyValues kv = parse_key_values(text);
    FlowConfig cfg = flow_config_from(kv);
    FlowResult res = run_normalized(cfg);
    py::dict out;
    out["status"] = res.status == FlowStatus::Converged ? "converged"
                    : res.status == FlowStatus::Stalled ? "stalled"
                                                        : "not_converged";
    out["residual"] = res.residual;
    out["steps"] = res.steps;
    out["final_body"] = res.final_body;
    out["trace_csv"] = res.trace.to_csv();
    MonitorVerdicts mv = monitor_suite(res.trace);
    out["sandwich"] = mv.sandwich_pass;
    out["sign_preserved"] = mv.sign_preserved;
    return out;
}

py::dict solve_from_config(const std::string& text) {
    KeyValues kv = parse_key_values(text);
    FlowConfig cfg = flow_config_from(kv);
    StationaryResult res = solve_stationary(cfg);
    py::dict out;
    out["converged"] = res.converged;
    out["residual"] = res.residual;
    out["curvature_residual"] = res.curvature_residual;
    out["asphericity"] = res.asphericity;
    out["final_body"] = res.final_body;
    if (res.predicted_radius) out["predicted_radius"] = *res.predicted_radius;
    if (res.cross_distance) out["cross_distance"] = *res.cross_distance;
    RoundnessVerdict rv = roundness_certificate(res);
    out["roundness"] = rv == RoundnessVerdict::Pass   ? "pass"
                       : rv == RoundnessVerdict::Fail ? "fail"
                                                      : "not_applicable";
    return out;
}

}  // namespace

PYBIND11_MODULE(_suppflow, m) {
    m.doc() = "anisotropic support-function flow toolkit";
    m.attr("__version__") = kArtifactVersion;

    py::class_<ConvexBodyState>(m, "Body")
        .def_property_readonly("u", [](const ConvexBodyState& b) { return b.u.values; })
        .def_property_readonly("rho", [](const ConvexBodyState& b) { return b.rho.values; })
        .def_property_readonly("angles",
                               [](const ConvexBodyState& b) { return b.grid().node_angles; })
        .def_property_readonly("dimension", &ConvexBodyState::dimension)
        .def("asphericity", &ConvexBodyState::asphericity)
        .def("lambda_min", &ConvexBodyState::lambda_min)
        .def("to_csv", &body_to_csv);

    m.def("sphere_area", &sphere_area, py::arg("n"));
    m.def("ball", &ball_body, py::arg("radius"), py::arg("n") = 1, py::arg("m") = 128,
          py::arg("kind") = "circle");
    m.def("body_from_config", &body_from_config_text, py::arg("config_text"));
    m.def("sup_distance", &sup_distance);
    m.def(
        "verify_body",
        [](const ConvexBodyState& b, double tol) { return verify_body(b, tol).all_pass(); },
        py::arg("body"), py::arg("tol") = 1e-8);

    m.def(
        "quermassintegral",
        [](const ConvexBodyState& b, int k) {
            return modified_quermassintegral(b, sigma_k_root(k, b.dimension()));
        },
        py::arg("body"), py::arg("k") = 1);
    m.def("dual_volume", &dual_volume, py::arg("body"), py::arg("q"));
    m.def(
        "sphere_radius",
        [](const std::string& text) {
            KeyValues kv = parse_key_values(text);
            return sphere_solution_radius(forcing_from(kv), kv.get_double("flow.beta", 0.5));
        },
        py::arg("config_text"));

    m.def("check", &check_from_config, py::arg("config_text"));
    m.def("run", &run_from_config, py::arg("config_text"));
    m.def("solve", &solve_from_config, py::arg("config_text"));

    m.def("config_hash", [](const std::string& text) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(config_hash(parse_key_values(text))));
        return std::string(buf);
    });
}
