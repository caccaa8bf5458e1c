// Copyright 2026 The airaoi Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <vector>

#include "json.hpp"

#include "airaoi/common.hpp"
#include "airaoi/config.hpp"
#include "airaoi/diagnostics.hpp"
#include "airaoi/power.hpp"
#include "airaoi/report.hpp"
#include "airaoi/scheduler.hpp"
#include "airaoi/simulation.hpp"

namespace py = pybind11;
using namespace airaoi;

namespace {

py::object to_python(const nlohmann::json& j) {
    return py::module_::import("json").attr("loads")(j.dump());
}

harness::ExperimentConfig config_from_python(const py::object& cfg) {
    if (cfg.is_none()) return harness::ExperimentConfig{};
    const std::string text = py::module_::import("json").attr("dumps")(cfg).cast<std::string>();
    auto c = harness::config_from_json(nlohmann::json::parse(text));
    c.validate();
    return c;
}

py::dict record_to_dict(const harness::RoundRecord& r) {
    py::dict d;
    d["round"] = r.round;
    d["k_opt"] = r.k_opt;
    d["selected"] = r.selected;
    d["skipped"] = r.skipped;
    d["completion_time"] = r.completion_time;
    d["ws_paoi"] = r.ws_paoi;
    d["mse"] = r.mse;
    d["eta"] = r.eta;
    d["alpha"] = r.alpha;
    d["gains"] = r.gains;
    d["paoi"] = r.paoi;
    d["train_loss"] = r.train_loss;
    d["test_accuracy"] = r.test_accuracy;
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Age-aware device selection and power control for over-the-air federated learning";

    py::register_exception<DegenerateError>(m, "DegenerateError", PyExc_ArithmeticError);
    py::register_exception<BisectionError>(m, "BisectionError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    m.def(
        "instantaneous_mse",
        [](const std::vector<double>& alphas, double eta, const std::vector<double>& gains,
           const std::vector<double>& max_powers, double noise_variance) {
            return power::instantaneous_mse(alphas, eta, gains, max_powers, noise_variance).total();
        },
        py::arg("alphas"), py::arg("eta"), py::arg("gains"), py::arg("max_powers"),
        py::arg("noise_variance"));

    m.def(
        "optimal_eta",
        [](const std::vector<double>& alphas, const std::vector<double>& gains,
           const std::vector<double>& max_powers, double noise_variance) {
            return power::optimal_eta(alphas, gains, max_powers, noise_variance);
        },
        py::arg("alphas"), py::arg("gains"), py::arg("max_powers"), py::arg("noise_variance"));

    m.def("alpha_for_multiplier", &power::alpha_for_multiplier, py::arg("eta"), py::arg("gain"),
          py::arg("max_power"), py::arg("multiplier"));

    m.def(
        "optimal_alpha_offline",
        [](const std::vector<double>& etas, const std::vector<double>& gains, double max_power,
           double avg_power, std::size_t horizon) {
            const auto s = power::optimal_alpha_offline(etas, gains, max_power, avg_power, horizon);
            py::dict d;
            d["alpha"] = s.alpha;
            d["multiplier"] = s.multiplier;
            d["budget_binding"] = s.budget_binding;
            d["residual"] = s.residual;
            return d;
        },
        py::arg("etas"), py::arg("gains"), py::arg("max_power"), py::arg("avg_power"),
        py::arg("horizon"));

    m.def(
        "alternating_optimize",
        [](const std::vector<std::vector<std::size_t>>& devices,
           const std::vector<std::vector<double>>& gains, const std::vector<double>& max_power,
           const std::vector<double>& avg_power, double noise_variance, double epsilon0,
           std::size_t max_iterations) {
            if (devices.size() != gains.size())
                throw std::invalid_argument("devices and gains differ in round count");
            power::PowerProblem p;
            p.max_power = max_power;
            p.avg_power = avg_power;
            p.noise_variance = noise_variance;
            for (std::size_t t = 0; t < devices.size(); ++t) p.rounds.push_back({devices[t], gains[t]});
            power::AlternatingOptions opts;
            opts.epsilon0 = epsilon0;
            opts.max_iterations = max_iterations;
            const auto r = power::alternating_optimize(p, opts);
            py::dict d;
            d["alpha"] = r.plan.alpha;
            d["eta"] = r.plan.eta;
            d["iterations"] = r.iterations;
            d["mse_history"] = r.mse_history;
            return d;
        },
        py::arg("devices"), py::arg("gains"), py::arg("max_power"), py::arg("avg_power"),
        py::arg("noise_variance"), py::arg("epsilon0") = 1e-5, py::arg("max_iterations") = 1000);

    m.def(
        "greedy_select",
        [](const std::vector<double>& weights, const std::vector<double>& paoi,
           const std::vector<double>& total_times) {
            const scheduler::AoIState s{paoi, weights, 0};
            s.validate();
            const auto d = scheduler::greedy_select(scheduler::priorities(s, total_times), total_times,
                                                    weights, paoi);
            py::dict out;
            out["selected"] = d.selected;
            out["k_opt"] = d.k_opt;
            out["predicted_ws_paoi"] = d.predicted_ws_paoi;
            out["completion_time"] = d.completion_time;
            return out;
        },
        py::arg("weights"), py::arg("paoi"), py::arg("total_times"));

    m.def(
        "convergence_bound",
        [](const py::dict& params, bool rescale) {
            diagnostics::BoundParams p;
            for (auto item : params) {
                const auto key = item.first.cast<std::string>();
                const auto& v = item.second;
                if (key == "smoothness") p.smoothness = v.cast<double>();
                else if (key == "gradient_noise") p.gradient_noise = v.cast<double>();
                else if (key == "heterogeneity") p.heterogeneity = v.cast<double>();
                else if (key == "element_variance_cap") p.element_variance_cap = v.cast<double>();
                else if (key == "gradient_norm_cap") p.gradient_norm_cap = v.cast<double>();
                else if (key == "dimension") p.dimension = v.cast<std::size_t>();
                else if (key == "devices") p.devices = v.cast<std::size_t>();
                else if (key == "selected") p.selected = v.cast<std::size_t>();
                else if (key == "rounds") p.rounds = v.cast<std::size_t>();
                else if (key == "learning_rate") p.learning_rate = v.cast<double>();
                else if (key == "local_iterations") p.local_iterations = v.cast<std::size_t>();
                else if (key == "initial_gap") p.initial_gap = v.cast<double>();
                else if (key == "mse_trace") p.mse_trace = v.cast<std::vector<double>>();
                else if (key == "weight_skew") p.weight_skew = v.cast<double>();
                else throw ConfigError("unknown bound parameter '" + key + "'");
            }
            return to_python(harness::bound_to_json(diagnostics::convergence_bound(p, rescale)));
        },
        py::arg("params"), py::arg("rescale_for_weights") = false);

    m.def(
        "run",
        [](const py::object& config, const std::string& policy, std::uint64_t seed, py::object snr_db,
           bool records) {
            const auto c = config_from_python(config);
            const auto p = policy.empty() ? c.policy : harness::parse_policy(policy);
            const double snr = snr_db.is_none() ? c.snr_db.front() : snr_db.cast<double>();
            const auto res = harness::run_experiment(c, p, seed, snr);
            py::dict out = to_python(harness::summary_to_json(c, res));
            if (records) {
                py::list rs;
                for (const auto& r : res.records) rs.append(record_to_dict(r));
                out["records"] = rs;
            }
            return out;
        },
        py::arg("config") = py::none(), py::arg("policy") = "", py::arg("seed") = 1,
        py::arg("snr_db") = py::none(), py::arg("records") = false);

    m.def(
        "sweep_snr",
        [](const py::object& config) {
            const auto rows = harness::sweep_snr(config_from_python(config));
            py::list out;
            for (const auto& r : rows) {
                py::dict d;
                d["policy"] = harness::to_string(r.policy);
                d["snr_db"] = r.snr_db;
                d["mse_mean"] = r.mse.mean;
                d["mse_stderr"] = r.mse.stderr_;
                d["per_seed_mse"] = r.per_seed_mse;
                out.append(d);
            }
            return out;
        },
        py::arg("config") = py::none());

    m.def(
        "default_config", []() { return to_python(harness::config_to_json(harness::ExperimentConfig{})); });
}
