// SPDX-License-Identifier: Apache-2.0
//
// massloc: position and orientation error bounds for massive antenna arrays
// Copyright (C) 2026 massloc contributors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#include "massloc/ambiguity.hpp"
#include "massloc/cli.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace massloc::cli
{
    using nlohmann::json;

    namespace
    {
        double num(const json &j, const char *key, const std::string &where)
        {
            const auto &v = j.at(key);
            if (!v.is_number())
                throw ConfigError(where + "." + key, "expected a number");
            return v.get<double>();
        }

        bool flag(const json &j, const char *key, const std::string &where)
        {
            const auto &v = j.at(key);
            if (!v.is_boolean())
                throw ConfigError(where + "." + key, "expected true or false");
            return v.get<bool>();
        }

        uint64_t count(const json &j, const char *key, const std::string &where)
        {
            const auto &v = j.at(key);
            if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<int64_t>() >= 0))
                throw ConfigError(where + "." + key, "expected a non-negative integer");
            return v.get<uint64_t>();
        }

        std::vector<double> vec(const json &j, const char *key, size_t n, const std::string &where)
        {
            const auto &v = j.at(key);
            if (!v.is_array() || v.size() != n)
                throw ConfigError(where + "." + key, "expected an array of " + std::to_string(n) + " numbers");
            std::vector<double> out;
            for (const auto &e : v)
            {
                if (!e.is_number())
                    throw ConfigError(where + "." + key, "expected an array of numbers");
                out.push_back(e.get<double>());
            }
            return out;
        }

        std::vector<size_t> counts(const json &v, const std::string &where)
        {
            auto positive = [](const json &e) {
                return e.is_number_integer() && e.get<int64_t>() > 0;
            };
            std::vector<size_t> out;
            if (positive(v))
                return {v.get<size_t>()};
            if (!v.is_array() || v.empty())
                throw ConfigError(where, "expected a positive integer or a non-empty array of them");
            for (const auto &e : v)
            {
                if (!positive(e))
                    throw ConfigError(where, "expected positive integers");
                out.push_back(e.get<size_t>());
            }
            return out;
        }

        void reject_unknown(const json &j, const json &allowed, const std::string &where)
        {
            if (!j.is_object())
                throw ConfigError(where, "expected an object");
            for (auto it = j.begin(); it != j.end(); ++it)
                if (!allowed.contains(it.key()))
                    throw ConfigError(where + "." + it.key(), "unknown field");
        }

        size_t line_of(const std::string &text, size_t byte)
        {
            size_t line = 1;
            for (size_t k = 0; k < std::min(byte, text.size()); ++k)
                if (text[k] == '\n')
                    ++line;
            return line;
        }

        SweepKind sweep_kind(const std::string &s, const std::string &where)
        {
            if (s == "nrx")
                return SweepKind::nrx;
            if (s == "ntx")
                return SweepKind::ntx;
            if (s == "grid")
                return SweepKind::grid;
            if (s == "table1")
                return SweepKind::table1;
            if (s == "ambiguity")
                return SweepKind::ambiguity;
            throw ConfigError(where, "unknown sweep kind '" + s + "'");
        }
    }

    json default_experiment_json()
    {
        const ExperimentConfig d;
        return json{
            {"fc_hz", d.fc},
            {"bandwidth_hz", d.bandwidth},
            {"rolloff", d.rolloff},
            {"n_freq", d.n_freq},
            {"mimo_layout", "interleaved"},
            {"tx_power_w", d.tx_power},
            {"pulse_duration_s", d.pulse_duration},
            {"noise_figure_db", d.noise_figure_db},
            {"snr1", 0.0},
            {"tx_position_m", {d.tx_position.x(), d.tx_position.y(), d.tx_position.z()}},
            {"tx_orientation_rad", {0.0, 0.0}},
            {"rx_orientation_rad", {0.0, 0.0}},
            {"random_rx_orientation", d.random_rx_orientation},
            {"d_ant_m", 0.0},
            {"steering_rad", nullptr},
            {"n_paths", d.n_paths},
            {"arrival_rate_per_ns", d.arrival_rate * 1e-9},
            {"horizon_ns", d.horizon * 1e9},
            {"pdp_decay_ns", d.pdp_decay * 1e9},
            {"sync", d.sync},
            {"sigma_eps_ns", d.sigma_eps * 1e9},
            {"quantization", d.quantization},
            {"orientation_aware", d.orientation_aware},
            {"n_cycles", d.n_cycles},
            {"master_seed", d.master_seed},
            {"threads", d.threads},
        };
    }

    ExperimentConfig experiment_from_json(const json &in, const std::string &where)
    {
        const json defaults = default_experiment_json();
        reject_unknown(in, defaults, where);
        json j = defaults;
        j.merge_patch(in);

        ExperimentConfig e;
        e.fc = num(j, "fc_hz", where);
        e.bandwidth = num(j, "bandwidth_hz", where);
        e.rolloff = num(j, "rolloff", where);
        e.n_freq = count(j, "n_freq", where);
        const auto layout = j.at("mimo_layout");
        if (layout == "interleaved")
            e.mimo_layout = MimoLayout::interleaved;
        else if (layout == "contiguous")
            e.mimo_layout = MimoLayout::contiguous;
        else
            throw ConfigError(where + ".mimo_layout", "expected \"interleaved\" or \"contiguous\"");
        e.tx_power = num(j, "tx_power_w", where);
        e.pulse_duration = num(j, "pulse_duration_s", where);
        e.noise_figure_db = num(j, "noise_figure_db", where);
        e.snr1 = num(j, "snr1", where);
        const auto p = vec(j, "tx_position_m", 3, where);
        e.tx_position = Vec3(p[0], p[1], p[2]);
        const auto to = vec(j, "tx_orientation_rad", 2, where);
        e.tx_orientation = {to[0], to[1]};
        const auto ro = vec(j, "rx_orientation_rad", 2, where);
        e.rx_orientation = {ro[0], ro[1]};
        e.random_rx_orientation = flag(j, "random_rx_orientation", where);
        e.d_ant = num(j, "d_ant_m", where);
        if (!j.at("steering_rad").is_null())
        {
            const auto st = vec(j, "steering_rad", 2, where);
            e.steering = Angles{st[0], st[1]};
        }
        e.n_paths = count(j, "n_paths", where);
        e.arrival_rate = num(j, "arrival_rate_per_ns", where) * 1e9;
        e.horizon = num(j, "horizon_ns", where) * 1e-9;
        e.pdp_decay = num(j, "pdp_decay_ns", where) * 1e-9;
        e.sync = flag(j, "sync", where);
        e.sigma_eps = num(j, "sigma_eps_ns", where) * 1e-9;
        e.quantization = flag(j, "quantization", where);
        e.orientation_aware = flag(j, "orientation_aware", where);
        e.n_cycles = count(j, "n_cycles", where);
        e.master_seed = count(j, "master_seed", where);
        e.threads = unsigned(count(j, "threads", where));
        return e;
    }

    RunConfig parse_config(const std::string &text)
    {
        json doc;
        try
        {
            doc = json::parse(text);
        }
        catch (const json::parse_error &e)
        {
            throw ConfigError("line " + std::to_string(line_of(text, e.byte)), e.what());
        }

        const json top_allowed = {{"schema_version", 0}, {"experiment", 0}, {"sweeps", 0}, {"ambiguity_check", 0}};
        reject_unknown(doc, top_allowed, "config");

        RunConfig cfg;
        cfg.snapshot = doc;
        if (!doc.contains("schema_version") || !doc["schema_version"].is_number_integer())
            throw ConfigError("schema_version", "required integer field missing");
        cfg.schema_version = doc["schema_version"].get<int>();
        if (cfg.schema_version != kSchemaVersion)
            throw ConfigError("schema_version", "unsupported version " + std::to_string(cfg.schema_version));

        const json top_exp = doc.value("experiment", json::object());
        cfg.experiment = experiment_from_json(top_exp, "experiment");

        if (doc.contains("ambiguity_check"))
        {
            const json &a = doc["ambiguity_check"];
            reject_unknown(a, json{{"gap_db", 0}, {"sigma_sim_mv", 0}, {"target_p", 0}}, "ambiguity_check");
            if (a.contains("gap_db"))
                cfg.check.gap_db = num(a, "gap_db", "ambiguity_check");
            if (a.contains("sigma_sim_mv"))
                cfg.check.sigma_sim = num(a, "sigma_sim_mv", "ambiguity_check") * 1e-3;
            if (a.contains("target_p"))
                cfg.check.target_p = num(a, "target_p", "ambiguity_check");
        }

        const json sweeps = doc.value("sweeps", json::array());
        if (!sweeps.is_array())
            throw ConfigError("sweeps", "expected an array");
        const json sweep_allowed = {{"name", 0}, {"kind", 0}, {"schemes", 0}, {"n_tx", 0}, {"n_rx", 0},
                                    {"experiment", 0}, {"grid", 0}, {"af", 0}};
        for (size_t k = 0; k < sweeps.size(); ++k)
        {
            const std::string where = "sweeps[" + std::to_string(k) + "]";
            const json &sj = sweeps[k];
            reject_unknown(sj, sweep_allowed, where);
            SweepSpec s;
            if (!sj.contains("name") || !sj["name"].is_string() || sj["name"].get<std::string>().empty())
                throw ConfigError(where + ".name", "required non-empty string");
            s.name = sj["name"].get<std::string>();
            if (s.name.find_first_of("/\\") != std::string::npos || s.name == "manifest")
                throw ConfigError(where + ".name", "must be a plain file stem other than 'manifest'");
            if (!sj.contains("kind") || !sj["kind"].is_string())
                throw ConfigError(where + ".kind", "required string");
            s.kind = sweep_kind(sj["kind"].get<std::string>(), where + ".kind");

            if (s.kind != SweepKind::table1)
            {
                const json schemes = sj.value("schemes", json::array({"mimo", "phased", "timed", "random"}));
                if (!schemes.is_array() || schemes.empty())
                    throw ConfigError(where + ".schemes", "expected a non-empty array");
                for (const auto &n : schemes)
                {
                    try
                    {
                        s.schemes.push_back(scheme_from_string(n.get<std::string>()));
                    }
                    catch (const std::exception &e)
                    {
                        throw ConfigError(where + ".schemes", e.what());
                    }
                }
                s.n_tx = counts(sj.value("n_tx", json(25)), where + ".n_tx");
                s.n_rx = counts(sj.value("n_rx", json(25)), where + ".n_rx");
            }

            s.experiment_json = top_exp;
            if (sj.contains("experiment"))
                s.experiment_json.merge_patch(sj["experiment"]);
            s.experiment = experiment_from_json(s.experiment_json, where + ".experiment");

            if (sj.contains("grid"))
            {
                const json &g = sj["grid"];
                const std::string gw = where + ".grid";
                reject_unknown(g, json{{"x_min", 0}, {"x_max", 0}, {"y_min", 0}, {"y_max", 0}, {"step", 0}}, gw);
                if (g.contains("x_min"))
                    s.grid.x_min = num(g, "x_min", gw);
                if (g.contains("x_max"))
                    s.grid.x_max = num(g, "x_max", gw);
                if (g.contains("y_min"))
                    s.grid.y_min = num(g, "y_min", gw);
                if (g.contains("y_max"))
                    s.grid.y_max = num(g, "y_max", gw);
                if (g.contains("step"))
                    s.grid.step = num(g, "step", gw);
            }
            if (sj.contains("af"))
            {
                const json &a = sj["af"];
                const std::string aw = where + ".af";
                reject_unknown(a, json{{"half_extent_m", 0}, {"spacing_m", 0}}, aw);
                if (a.contains("half_extent_m"))
                    s.af_half_extent = num(a, "half_extent_m", aw);
                if (a.contains("spacing_m"))
                    s.af_spacing = num(a, "spacing_m", aw);
            }
            for (const auto &other : cfg.sweeps)
                if (other.name == s.name)
                    throw ConfigError(where + ".name", "duplicate sweep name '" + s.name + "'");
            cfg.sweeps.push_back(std::move(s));
        }
        return cfg;
    }

    RunConfig load_config(const std::filesystem::path &path)
    {
        std::ifstream in(path, std::ios::binary);
        if (!in)
            throw ConfigError(path.string(), "cannot open file");
        std::ostringstream ss;
        ss << in.rdbuf();
        return parse_config(ss.str());
    }

    namespace
    {
        bool perfect_square(size_t n)
        {
            const auto s = size_t(std::llround(std::sqrt(double(n))));
            return n > 0 && s * s == n;
        }

        void check_experiment(const ExperimentConfig &e, const std::string &where, std::vector<Diagnostic> &out)
        {
            auto err = [&](const std::string &f, const std::string &m) { out.push_back({Diagnostic::error, where + "." + f, m}); };
            if (!(e.fc > 0.0))
                err("fc_hz", "must be positive");
            if (!(e.bandwidth > 0.0) || !(e.bandwidth < 2.0 * e.fc))
                err("bandwidth_hz", "must be positive and below 2 fc");
            if (!(e.rolloff >= 0.0 && e.rolloff <= 1.0))
                err("rolloff", "must be in [0, 1]");
            if (e.n_freq < 64)
                err("n_freq", "must be at least 64");
            if (!(e.tx_power > 0.0))
                err("tx_power_w", "must be positive");
            if (!(e.pulse_duration > 0.0))
                err("pulse_duration_s", "must be positive");
            if (e.snr1 < 0.0)
                err("snr1", "must be non-negative (0 uses the link budget)");
            if (!(e.tx_position.norm() > 0.0))
                err("tx_position_m", "must differ from the Rx centroid at the origin");
            if (e.d_ant < 0.0)
                err("d_ant_m", "must be non-negative (0 selects half the shortest wavelength)");
            if (e.n_paths != 1 && !(e.arrival_rate > 0.0))
                err("arrival_rate_per_ns", "must be positive with multipath");
            if (e.n_paths == 0 && !(e.horizon > 0.0))
                err("horizon_ns", "must be positive for a Poisson path count");
            if (e.n_paths != 1 && !(e.pdp_decay > 0.0))
                err("pdp_decay_ns", "must be positive with multipath");
            if (e.sync && !(e.sigma_eps > 0.0))
                err("sigma_eps_ns", "must be positive when sync is enabled");
            if (e.n_cycles < 1)
                err("n_cycles", "must be at least 1");
            const Vec3 &p = e.tx_position;
            if (std::hypot(p.x(), p.y()) <= 1e-12 * p.norm())
                err("tx_position_m", "line of sight along the z axis has an undefined azimuth");
        }
    }

    std::vector<Diagnostic> validate(const RunConfig &cfg)
    {
        std::vector<Diagnostic> out;
        check_experiment(cfg.experiment, "experiment", out);
        for (size_t k = 0; k < cfg.sweeps.size(); ++k)
        {
            const auto &s = cfg.sweeps[k];
            const std::string where = "sweeps[" + std::to_string(k) + "]";
            if (s.kind == SweepKind::table1)
                continue;
            check_experiment(s.experiment, where + ".experiment", out);
            for (size_t n : s.n_tx)
                if (!perfect_square(n))
                    out.push_back({Diagnostic::error, where + ".n_tx", std::to_string(n) + " is not a perfect square"});
            for (size_t n : s.n_rx)
                if (!perfect_square(n))
                    out.push_back({Diagnostic::error, where + ".n_rx", std::to_string(n) + " is not a perfect square"});
            if (s.kind == SweepKind::grid && !(s.grid.step > 0.0))
                out.push_back({Diagnostic::error, where + ".grid.step", "must be positive"});
            if (s.kind == SweepKind::ambiguity && (!(s.af_spacing > 0.0) || !(s.af_half_extent > 0.0)))
                out.push_back({Diagnostic::error, where + ".af", "spacing and extent must be positive"});

            // Far field: distance at least 50 array diameters
            const double d_ant = s.experiment.d_ant_resolved();
            size_t n_max = 1;
            for (size_t n : s.n_tx)
                n_max = std::max(n_max, n);
            for (size_t n : s.n_rx)
                n_max = std::max(n_max, n);
            if (perfect_square(n_max) && d_ant > 0.0)
            {
                const double diameter = ArrayGeometry::planar_square(n_max, d_ant).diameter();
                const double d = s.experiment.tx_position.norm();
                if (s.kind != SweepKind::grid && d < 50.0 * diameter)
                    out.push_back({Diagnostic::warning, where + ".experiment.tx_position_m",
                                   "distance " + format_number(d) + " m is below 50 array diameters (" +
                                       format_number(50.0 * diameter) + " m); far-field model not accurate"});
            }
        }

        const auto &c = cfg.check;
        if (!(c.target_p > 0.0 && c.target_p < 0.5))
        {
            out.push_back({Diagnostic::error, "ambiguity_check.target_p", "must be in (0, 1/2)"});
        }
        else
        {
            const double thr = noise_threshold(db_to_linear(c.gap_db), c.target_p);
            if (c.sigma_sim > thr)
                out.push_back({Diagnostic::warning, "ambiguity_check.sigma_sim_mv",
                               "simulated noise " + format_number(c.sigma_sim * 1e3) + " mV exceeds the threshold " +
                                   format_number(thr * 1e3) + " mV at P_A = " + format_number(c.target_p)});
        }
        return out;
    }
}
