#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "cofree/errors.hpp"
#include "cofree/harness.hpp"

namespace py = pybind11;
using namespace cofree;

namespace {

RunConfig config_from(const std::string& text, const std::string& base_dir) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    return parse_config(j, base_dir);
}

py::dict roc_dict(const RocResult& r) {
    py::dict d;
    d["tau_up"] = r.tau_up;
    d["tau_down"] = r.tau_down;
    d["auc"] = r.auc;
    d["fnr_at_tau"] = r.fnr_at_tau;
    d["fpr_at_tau"] = r.fpr_at_tau;
    return d;
}

GateState gate_state(const std::string& mode, int safe_count, int sat_count) {
    GateState g;
    for (GateMode m : {GateMode::run, GateMode::blocked, GateMode::halted})
        if (to_string(m) == mode) {
            g.mode = m;
            g.safe_count = safe_count;
            g.sat_count = sat_count;
            return g;
        }
    throw ConfigError("unknown gate mode: " + mode);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Self-collision risk estimation and risk-gated execution for planar dual-arm rollouts";

    auto base = py::register_exception<Error>(m, "Error");
    py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
    py::register_exception<FormatError>(m, "FormatError", base.ptr());
    py::register_exception<DimensionError>(m, "DimensionError", base.ptr());
    py::register_exception<JointLimitError>(m, "JointLimitError", base.ptr());
    py::register_exception<RuntimeFailure>(m, "RuntimeFailure", base.ptr());

    py::class_<RunConfig>(m, "RunConfig")
        .def(py::init<>())
        .def_static("from_json", &config_from, py::arg("text"), py::arg("base_dir") = ".")
        .def_static("load", &load_config, py::arg("path"))
        .def("to_json", [](const RunConfig& c) { return c.to_json().dump(); })
        .def("digest", &RunConfig::digest)
        .def("resolve", &RunConfig::resolve)
        .def_readwrite("seed", &RunConfig::seed)
        .def_readwrite("base_dir", &RunConfig::base_dir);

    m.def("segment_distance",
          [](const Vec2& p0, const Vec2& p1, const Vec2& q0, const Vec2& q1) {
              return segment_closest_distance({p0, p1}, {q0, q1});
          },
          py::arg("p0"), py::arg("p1"), py::arg("q0"), py::arg("q1"));
    m.def("capsule_distance",
          [](const Vec2& p0, const Vec2& p1, double ra, const Vec2& q0, const Vec2& q1, double rb, double inflation) {
              return capsule_distance({{p0, p1}, ra}, {{q0, q1}, rb}, inflation);
          },
          py::arg("p0"), py::arg("p1"), py::arg("ra"), py::arg("q0"), py::arg("q1"), py::arg("rb"),
          py::arg("inflation") = 0.0);

    m.def("gate_step",
          [](double r_hat, const std::string& mode, int safe_count, int sat_count, double tau_up, double tau_down,
             int K, double r_sat, int W) {
              GateConfig cfg;
              cfg.tau_up = tau_up;
              cfg.tau_down = tau_down;
              cfg.K = K;
              cfg.r_sat = r_sat;
              cfg.W = W;
              cfg.validate();
              auto [next, d] = gate_step(gate_state(mode, safe_count, sat_count), r_hat, cfg);
              return py::make_tuple(std::string(to_string(next.mode)), next.safe_count, next.sat_count,
                                    std::string(to_string(d)));
          },
          py::arg("r_hat"), py::arg("mode") = "RUN", py::arg("safe_count") = 0, py::arg("sat_count") = 0,
          py::arg("tau_up") = 0.5, py::arg("tau_down") = 0.25, py::arg("K") = 3, py::arg("r_sat") = 0.99,
          py::arg("W") = 50);
    m.def("soft_scale", &soft_scale, py::arg("r_hat"), py::arg("tau_up"));
    m.def("distance_fallback", &distance_fallback, py::arg("d_hat"), py::arg("d0"));
    m.def("risk_weight", &risk_weight, py::arg("r_hat"), py::arg("kappa"));

    m.def("roc_tune",
          [](const std::vector<double>& s, const std::vector<int>& y, double fn_target) {
              return roc_dict(roc_tune(s, y, fn_target));
          },
          py::arg("scores"), py::arg("labels"), py::arg("fn_target") = 0.05);
    m.def("expected_calibration_error",
          [](const std::vector<double>& s, const std::vector<int>& y, int bins) {
              return compute_calibration(s, y, bins).ece;
          },
          py::arg("scores"), py::arg("labels"), py::arg("bins") = 10);

    py::class_<EstimatorParams>(m, "Estimator")
        .def_static("initialize", [](std::uint64_t seed) { return EstimatorParams::initialize({}, seed); },
                    py::arg("seed"))
        .def_static("load", [](const std::string& path) { return load_estimator(path); }, py::arg("path"))
        .def("save", [](const EstimatorParams& p, const std::string& path) { save_estimator(path, p, ""); },
             py::arg("path"))
        .def_readwrite("temperature", &EstimatorParams::temperature)
        .def_property_readonly("num_parameters", &EstimatorParams::size)
        .def(
            "predict",
            [](const EstimatorParams& p, const Eigen::VectorXd& proprio, const Eigen::VectorXd& z,
               const Eigen::MatrixXd& plan) {
                const RiskPrediction r = predict_risk(p, {proprio, z, plan});
                py::dict d;
                d["r_hat"] = r.r_hat;
                d["logit"] = r.logit;
                d["d_hat"] = r.d_hat;
                d["ttc_hat"] = r.ttc_hat;
                return d;
            },
            py::arg("proprio"), py::arg("z"), py::arg("plan"))
        .def("latency_us",
             [](const EstimatorParams& p, int horizon, int trials) {
                 const LatencyStats s = measure_latency(p, horizon, trials);
                 return py::make_tuple(s.p50_us, s.p95_us);
             },
             py::arg("horizon") = 10, py::arg("trials") = 1000);

    m.attr("PROPRIO_DIM") = kProprioDim;
    m.attr("SCENE_DIM") = kSceneDim;

    m.def("gen_data",
          [](const RunConfig& cfg) {
              const Dataset ds = gen_data(cfg);
              write_dataset(cfg.resolve(cfg.dataset_path), ds);
              return ds.samples.size();
          },
          py::arg("config"), py::call_guard<py::gil_scoped_release>());
    m.def("train_estimator",
          [](const RunConfig& cfg) {
              RocResult roc;
              {
                  py::gil_scoped_release nogil;
                  const auto [train_split, heldout] =
                      split_train_heldout(cfg, read_dataset(cfg.resolve(cfg.dataset_path)));
                  EstimatorParams p = train_estimator(cfg, train_split);
                  calibrate_temperature(p, heldout.samples);
                  roc = tune_thresholds(cfg, p, heldout);
                  save_estimator(cfg.resolve(cfg.estimator.checkpoint), p, cfg.digest());
                  write_thresholds(cfg.resolve(cfg.gate.thresholds_file), roc);
              }
              return roc_dict(roc);
          },
          py::arg("config"));
    m.def("run_episode",
          [](const RunConfig& cfg, const std::string& mode, const std::string& task, std::uint64_t seed) {
              const RunMode rm = parse_mode(mode);
              const EpisodeLog log = run_episode(load_runtime(cfg, rm), rm, parse_task(task), seed);
              return to_json(log).dump();
          },
          py::arg("config"), py::arg("mode"), py::arg("task"), py::arg("seed"));
    m.def("evaluate",
          [](const RunConfig& cfg, const std::string& mode, const std::string& log_dir) {
              const RunMode rm = parse_mode(mode);
              return to_json(evaluate(load_runtime(cfg, rm), rm, log_dir)).dump();
          },
          py::arg("config"), py::arg("mode"), py::arg("log_dir") = "");
}
