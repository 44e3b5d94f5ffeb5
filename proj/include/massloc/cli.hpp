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

#ifndef MASSLOC_CLI_HPP
#define MASSLOC_CLI_HPP

#include "massloc/montecarlo.hpp"

#include <json.hpp>

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace massloc::cli
{
    constexpr int kSchemaVersion = 1;
    constexpr const char *kToolVersion = "1.0.0";

    // Malformed configuration; `where` names the field or the line
    struct ConfigError : std::runtime_error
    {
        std::string where;
        ConfigError(std::string location, const std::string &message)
            : std::runtime_error(location + ": " + message), where(std::move(location))
        {
        }
    };

    enum class SweepKind
    {
        nrx,       // PEB/OEB vs N_rx
        ntx,       // PEB/OEB vs N_tx
        grid,      // PEB over Tx positions in a plane
        table1,    // Noise thresholds from tabulated gaps
        ambiguity  // AF scan, gap and threshold
    };

    struct SweepSpec
    {
        std::string name; // Output file stem
        SweepKind kind = SweepKind::nrx;
        std::vector<SchemeKind> schemes;
        std::vector<size_t> n_tx;
        std::vector<size_t> n_rx;
        ExperimentConfig experiment; // Top-level experiment with the sweep overrides applied
        nlohmann::json experiment_json;
        PlaneGrid grid;
        double af_half_extent = 4.0; // [m]
        double af_spacing = 0.2;     // [m]
    };

    // Operating rule: the simulated noise must stay below the threshold of the tabulated gap
    struct AmbiguityCheck
    {
        double gap_db = -36.9;
        double sigma_sim = 0.022e-3; // [V]
        double target_p = 1e-2;
    };

    struct RunConfig
    {
        int schema_version = kSchemaVersion;
        ExperimentConfig experiment;
        std::vector<SweepSpec> sweeps;
        AmbiguityCheck check;
        nlohmann::json snapshot; // Parsed document, as read
    };

    // Experiment keys with their defaults
    nlohmann::json default_experiment_json();
    ExperimentConfig experiment_from_json(const nlohmann::json &j, const std::string &where);

    RunConfig parse_config(const std::string &text);
    RunConfig load_config(const std::filesystem::path &path);

    struct Diagnostic
    {
        enum Level
        {
            error,
            warning
        } level;
        std::string field;
        std::string message;
    };

    std::vector<Diagnostic> validate(const RunConfig &cfg);

    // Tabulated (scheme, N_rx, gap [dB], sigma_thr [mV], sigma_sim [mV]) rows
    struct Table1Row
    {
        std::string scheme;
        size_t n_rx;
        double gap_db;
        double sigma_thr_mv;
        double sigma_sim_mv;
    };
    const std::vector<Table1Row> &table1_rows();

    // CSV table with locale-independent scientific formatting
    class CsvTable
    {
    public:
        explicit CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

        CsvTable &row();
        CsvTable &add(double v);
        CsvTable &add(size_t v);
        CsvTable &add(const std::string &v);
        std::string str() const;
        size_t rows() const { return rows_.size(); }

    private:
        std::vector<std::string> header_;
        std::vector<std::vector<std::string>> rows_;
    };

    // %.9e with '.' as decimal separator, independent of the global locale
    std::string format_number(double v);

    std::string sha256_hex(const std::string &data);

    // Matplotlib script plotting one CSV
    std::string plot_script(const SweepSpec &sweep, const std::string &csv_name);

    struct RunOptions
    {
        std::optional<uint64_t> seed;
        std::optional<unsigned> threads;
    };

    // Writes one CSV and one plot script per sweep, then manifest.json; removes partial outputs on failure.
    // Returns the written file names.
    std::vector<std::string> run(const RunConfig &cfg, const std::filesystem::path &out_dir, const RunOptions &options = {});

    // Table of thresholds recomputed from the tabulated gaps
    CsvTable table1_csv();

    std::vector<std::string> write_table1(const std::filesystem::path &out_dir);
}

#endif
