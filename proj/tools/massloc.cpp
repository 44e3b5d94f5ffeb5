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

#include "massloc/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace cli = massloc::cli;

namespace
{
    int print_diagnostics(const std::vector<cli::Diagnostic> &diags)
    {
        int errors = 0;
        for (const auto &d : diags)
        {
            const bool err = d.level == cli::Diagnostic::error;
            errors += err;
            std::cerr << (err ? "error: " : "warning: ") << d.field << ": " << d.message << "\n";
        }
        return errors;
    }
}

int main(int argc, char **argv)
{
    CLI::App app{"Position and orientation error bounds for MIMO and beamforming arrays"};
    app.set_version_flag("--version", std::string(cli::kToolVersion));
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::optional<uint64_t> seed;
    std::optional<unsigned> threads;

    auto *run = app.add_subcommand("run", "Run every sweep of a configuration");
    run->add_option("config", config_path, "JSON configuration")->required();
    run->add_option("--out", out_dir, "Output directory")->required();
    run->add_option("--seed", seed, "Master seed override");
    run->add_option("--threads", threads, "Worker threads")->check(CLI::PositiveNumber);

    auto *val = app.add_subcommand("validate", "Check a configuration");
    val->add_option("config", config_path, "JSON configuration")->required();

    auto *t1 = app.add_subcommand("table1", "Noise thresholds from the tabulated gaps");
    t1->add_option("--out", out_dir, "Output directory")->required();

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::ParseError &e)
    {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }

    try
    {
        if (*val)
        {
            const auto cfg = cli::load_config(config_path);
            const int errors = print_diagnostics(cli::validate(cfg));
            if (errors == 0)
                std::cout << "ok\n";
            return errors ? 1 : 0;
        }
        if (*run)
        {
            const auto cfg = cli::load_config(config_path);
            print_diagnostics(cli::validate(cfg));
            for (const auto &f : cli::run(cfg, out_dir, {seed, threads}))
                std::cout << out_dir << "/" << f << "\n";
            return 0;
        }
        for (const auto &f : cli::write_table1(out_dir))
            std::cout << out_dir << "/" << f << "\n";
        return 0;
    }
    catch (const cli::ConfigError &e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }
    catch (const std::exception &e)
    {
        std::cerr << "runtime failure: " << e.what() << "\n";
        return 2;
    }
}
