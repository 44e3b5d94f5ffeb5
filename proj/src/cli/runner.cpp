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

#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>

namespace massloc::cli
{
    using nlohmann::json;
    namespace fs = std::filesystem;

    namespace
    {
        constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

        CsvTable sweep_table(const SweepSpec &sweep)
        {
            const bool by_rx = sweep.kind == SweepKind::nrx;
            CsvTable t({by_rx ? "sweep_n_rx" : "sweep_n_tx", "scheme", "n_tx", "n_rx", "peb_m", "oeb_deg", "stderr",
                        "oeb_stderr", "n_identifiable", "n_unidentifiable", "n_rejected"});
            for (SchemeKind kind : sweep.schemes)
            {
                for (size_t n_tx : sweep.n_tx)
                {
                    for (size_t n_rx : sweep.n_rx)
                    {
                        t.row().add(by_rx ? n_rx : n_tx).add(to_string(kind)).add(n_tx).add(n_rx);
                        try
                        {
                            const CellResult r = run_cell(sweep.experiment, n_tx, n_rx, kind);
                            t.add(r.peb)
                                .add(r.oeb)
                                .add(r.peb_stderr)
                                .add(r.oeb_stderr)
                                .add(r.n_identifiable)
                                .add(r.n_unidentifiable)
                                .add(r.n_rejected);
                        }
                        catch (const AllCyclesUnidentifiable &)
                        {
                            t.add(kNaN).add(kNaN).add(kNaN).add(kNaN).add(size_t(0)).add(sweep.experiment.n_cycles).add(size_t(0));
                        }
                    }
                }
            }
            return t;
        }

        CsvTable grid_table(const SweepSpec &sweep)
        {
            CsvTable t({"scheme", "n_tx", "n_rx", "x_m", "y_m", "near_field", "identifiable", "peb_m", "stderr", "oeb_deg"});
            for (SchemeKind kind : sweep.schemes)
                for (size_t n_tx : sweep.n_tx)
                    for (size_t n_rx : sweep.n_rx)
                        for (const auto &g : run_grid(sweep.experiment, sweep.grid, n_tx, n_rx, kind))
                            t.row()
                                .add(to_string(kind))
                                .add(n_tx)
                                .add(n_rx)
                                .add(g.x)
                                .add(g.y)
                                .add(size_t(g.near_field))
                                .add(size_t(g.identifiable))
                                .add(g.peb)
                                .add(g.peb_stderr)
                                .add(g.oeb);
            return t;
        }

        double tabulated_gap(SchemeKind kind, size_t n_rx)
        {
            for (const auto &r : table1_rows())
                if (r.scheme == to_string(kind) && r.n_rx == n_rx)
                    return r.gap_db;
            return kNaN;
        }

        CsvTable ambiguity_table(const SweepSpec &sweep, const AmbiguityCheck &check)
        {
            CsvTable t({"scheme", "n_tx", "n_rx", "peak", "sidelobe", "sidelobe_x_m", "sidelobe_y_m", "sidelobe_z_m",
                        "gamma_linear", "gamma_db", "gamma_tabulated_db", "sigma_thr_mv", "sigma_sim_mv", "p_ambiguity"});
            const ExperimentConfig &e = sweep.experiment;
            for (SchemeKind kind : sweep.schemes)
            {
                for (size_t n_tx : sweep.n_tx)
                {
                    for (size_t n_rx : sweep.n_rx)
                    {
                        const SpectrumSet spectra = make_spectra(e, n_tx, kind);
                        const CycleSetup c = make_cycle(e, n_tx, n_rx, kind, 0);
                        GridSpec grid;
                        grid.center = e.tx_position;
                        grid.half_extent = sweep.af_half_extent;
                        grid.spacing = sweep.af_spacing;
                        const AfSurface surf = scan(c.scenario, c.scheme, spectra, grid, e.threads);
                        const AmbiguityReport rep = report(surf, check.target_p, check.sigma_sim);
                        const double peak = surf.values[surf.main_peak_index];
                        const bool has_side = surf.best_sidelobe_index != AfSurface::npos;
                        const Vec3 sp = has_side ? surf.grid_points[surf.best_sidelobe_index] : Vec3::Constant(kNaN);
                        t.row()
                            .add(to_string(kind))
                            .add(n_tx)
                            .add(n_rx)
                            .add(peak)
                            .add(has_side ? surf.values[surf.best_sidelobe_index] : kNaN)
                            .add(sp.x())
                            .add(sp.y())
                            .add(sp.z())
                            .add(rep.gap_linear)
                            .add(rep.gap_db)
                            .add(tabulated_gap(kind, n_rx))
                            .add(rep.sigma_thr * 1e3)
                            .add(check.sigma_sim * 1e3)
                            .add(rep.p_ambiguity);
                    }
                }
            }
            return t;
        }

        void write_file(const fs::path &path, const std::string &data)
        {
            std::ofstream out(path, std::ios::binary | std::ios::trunc);
            if (!out)
                throw std::runtime_error("cannot write " + path.string());
            out.write(data.data(), std::streamsize(data.size()));
            if (!out)
                throw std::runtime_error("write failed: " + path.string());
        }

        // Files written so far; removed unless commit() is called
        class OutputSet
        {
        public:
            explicit OutputSet(fs::path dir) : dir_(std::move(dir)) {}
            ~OutputSet()
            {
                if (committed_)
                    return;
                std::error_code ec;
                for (const auto &n : names_)
                    fs::remove(dir_ / n, ec);
            }

            void write(const std::string &name, const std::string &data)
            {
                names_.push_back(name);
                write_file(dir_ / name, data);
            }

            void commit() { committed_ = true; }
            const std::vector<std::string> &names() const { return names_; }

        private:
            fs::path dir_;
            std::vector<std::string> names_;
            bool committed_ = false;
        };
    }

    std::vector<std::string> run(const RunConfig &cfg_in, const fs::path &out_dir, const RunOptions &options)
    {
        RunConfig cfg = cfg_in;
        for (auto &s : cfg.sweeps)
        {
            if (options.seed)
                s.experiment.master_seed = *options.seed;
            if (options.threads)
                s.experiment.threads = *options.threads;
        }
        if (options.seed)
            cfg.experiment.master_seed = *options.seed;

        for (const auto &d : validate(cfg))
            if (d.level == Diagnostic::error)
                throw ConfigError(d.field, d.message);

        fs::create_directories(out_dir);
        const auto t0 = std::chrono::steady_clock::now();

        OutputSet files(out_dir);
        json outputs = json::array();
        json sweeps = json::array();
        for (const auto &s : cfg.sweeps)
        {
            CsvTable table = [&] {
                switch (s.kind)
                {
                case SweepKind::nrx:
                case SweepKind::ntx:
                    return sweep_table(s);
                case SweepKind::grid:
                    return grid_table(s);
                case SweepKind::ambiguity:
                    return ambiguity_table(s, cfg.check);
                case SweepKind::table1:
                    break;
                }
                return table1_csv();
            }();
            const std::string csv_name = s.name + ".csv";
            const std::string csv = table.str();
            files.write(csv_name, csv);
            const std::string script_name = "plot_" + s.name + ".py";
            const std::string script = plot_script(s, csv_name);
            files.write(script_name, script);
            outputs.push_back({{"file", csv_name}, {"sha256", sha256_hex(csv)}});
            outputs.push_back({{"file", script_name}, {"sha256", sha256_hex(script)}});
            sweeps.push_back({{"name", s.name}, {"master_seed", s.experiment.master_seed}});
        }

        const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        json manifest = {
            {"tool", "massloc"},
            {"tool_version", kToolVersion},
            {"schema_version", cfg.schema_version},
            {"master_seed", cfg.experiment.master_seed},
            {"seed_override", options.seed ? json(*options.seed) : json(nullptr)},
            {"threads_override", options.threads ? json(*options.threads) : json(nullptr)},
            {"config", cfg.snapshot},
            {"sweeps", sweeps},
            {"outputs", outputs},
            {"wall_time_s", wall},
        };
        files.write("manifest.json", manifest.dump(2) + "\n");
        files.commit();
        return files.names();
    }

    std::vector<std::string> write_table1(const fs::path &out_dir)
    {
        RunConfig cfg;
        SweepSpec s;
        s.name = "table1";
        s.kind = SweepKind::table1;
        cfg.sweeps.push_back(s);
        cfg.snapshot = {{"schema_version", kSchemaVersion}, {"sweeps", {{{"name", "table1"}, {"kind", "table1"}}}}};
        return run(cfg, out_dir);
    }
}
