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

#include <openssl/evp.h>

#include <charconv>
#include <cmath>
#include <stdexcept>

namespace massloc::cli
{
    std::string format_number(double v)
    {
        if (std::isnan(v))
            return "nan";
        if (std::isinf(v))
            return v > 0 ? "inf" : "-inf";
        char buf[64];
        const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::scientific, 9);
        if (res.ec != std::errc())
            throw std::runtime_error("format_number: conversion failed");
        return std::string(buf, res.ptr);
    }

    CsvTable &CsvTable::row()
    {
        rows_.emplace_back();
        return *this;
    }

    CsvTable &CsvTable::add(double v)
    {
        return add(format_number(v));
    }

    CsvTable &CsvTable::add(size_t v)
    {
        return add(std::to_string(v));
    }

    CsvTable &CsvTable::add(const std::string &v)
    {
        if (rows_.empty())
            row();
        if (rows_.back().size() >= header_.size())
            throw std::logic_error("CsvTable: more fields than columns");
        if (v.find_first_of(",\"\n") != std::string::npos)
            rows_.back().push_back("\"" + v + "\"");
        else
            rows_.back().push_back(v);
        return *this;
    }

    std::string CsvTable::str() const
    {
        std::string out;
        auto line = [&](const std::vector<std::string> &fields) {
            for (size_t k = 0; k < fields.size(); ++k)
            {
                if (k)
                    out += ',';
                out += fields[k];
            }
            out += '\n';
        };
        line(header_);
        for (const auto &r : rows_)
        {
            if (r.size() != header_.size())
                throw std::logic_error("CsvTable: incomplete row");
            line(r);
        }
        return out;
    }

    std::string sha256_hex(const std::string &data)
    {
        unsigned char digest[EVP_MAX_MD_SIZE];
        unsigned int len = 0;
        if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
            throw std::runtime_error("sha256: digest failed");
        static const char *hex = "0123456789abcdef";
        std::string out;
        for (unsigned k = 0; k < len; ++k)
        {
            out += hex[digest[k] >> 4];
            out += hex[digest[k] & 0xf];
        }
        return out;
    }

    const std::vector<Table1Row> &table1_rows()
    {
        static const std::vector<Table1Row> rows = {
            {"mimo", 4, -36.9, 0.062, 0.022},   {"mimo", 36, -32.1, 0.187, 0.022},
            {"mimo", 100, -29.9, 0.313, 0.022}, {"phased", 4, -33.5, 0.136, 0.022},
            {"phased", 36, -28.7, 0.406, 0.022}, {"phased", 100, -26.5, 0.677, 0.022},
        };
        return rows;
    }

    CsvTable table1_csv()
    {
        CsvTable t({"scheme", "n_rx", "gamma_db", "sigma_thr_mv", "sigma_thr_tabulated_mv", "sigma_sim_mv",
                    "p_ambiguity_at_sim"});
        for (const auto &r : table1_rows())
        {
            const double gap = db_to_linear(r.gap_db);
            const double thr = noise_threshold(gap, 1e-2);
            t.row()
                .add(r.scheme)
                .add(r.n_rx)
                .add(r.gap_db)
                .add(thr * 1e3)
                .add(r.sigma_thr_mv)
                .add(r.sigma_sim_mv)
                .add(ambiguity_probability(gap, r.sigma_sim_mv * 1e-3));
        }
        return t;
    }

    std::string plot_script(const SweepSpec &sweep, const std::string &csv_name)
    {
        std::string s = "#!/usr/bin/env python3\n"
                        "# Plots " + csv_name + "\n"
                        "import csv\n"
                        "import sys\n"
                        "from collections import defaultdict\n"
                        "import matplotlib\n"
                        "matplotlib.use('Agg')\n"
                        "import matplotlib.pyplot as plt\n\n"
                        "here = sys.argv[1] if len(sys.argv) > 1 else '.'\n"
                        "with open(f'{here}/" + csv_name + "') as fh:\n"
                        "    rows = list(csv.DictReader(fh))\n\n";
        switch (sweep.kind)
        {
        case SweepKind::nrx:
        case SweepKind::ntx:
        {
            const std::string var = sweep.kind == SweepKind::nrx ? "n_rx" : "n_tx";
            s += "series = defaultdict(list)\n"
                 "for r in rows:\n"
                 "    series[r['scheme']].append((int(r['" + var + "']), float(r['peb_m']), float(r['oeb_deg'])))\n"
                 "fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(10, 4))\n"
                 "for name, pts in sorted(series.items()):\n"
                 "    pts.sort()\n"
                 "    ax1.semilogy([p[0] for p in pts], [p[1] for p in pts], marker='o', label=name)\n"
                 "    ax2.semilogy([p[0] for p in pts], [p[2] for p in pts], marker='o', label=name)\n"
                 "ax1.set_xlabel('" + var + "')\n"
                 "ax1.set_ylabel('PEB [m]')\n"
                 "ax2.set_xlabel('" + var + "')\n"
                 "ax2.set_ylabel('OEB [deg]')\n"
                 "ax1.legend()\n"
                 "ax1.grid(True, which='both')\n"
                 "ax2.grid(True, which='both')\n";
            break;
        }
        case SweepKind::grid:
            s += "import numpy as np\n"
                 "groups = defaultdict(list)\n"
                 "for r in rows:\n"
                 "    groups[(r['scheme'], r['n_tx'], r['n_rx'])].append(r)\n"
                 "fig, axes = plt.subplots(1, len(groups), figsize=(5 * len(groups), 4), squeeze=False)\n"
                 "for ax, (key, rs) in zip(axes[0], sorted(groups.items())):\n"
                 "    xs = sorted({float(r['x_m']) for r in rs})\n"
                 "    ys = sorted({float(r['y_m']) for r in rs})\n"
                 "    z = np.full((len(ys), len(xs)), np.nan)\n"
                 "    for r in rs:\n"
                 "        z[ys.index(float(r['y_m'])), xs.index(float(r['x_m']))] = float(r['peb_m'])\n"
                 "    im = ax.pcolormesh(xs, ys, np.log10(z), shading='nearest')\n"
                 "    fig.colorbar(im, ax=ax, label='log10 PEB [m]')\n"
                 "    ax.set_title(' '.join(key))\n"
                 "    ax.set_xlabel('x [m]')\n"
                 "    ax.set_ylabel('y [m]')\n";
            break;
        case SweepKind::ambiguity:
            s += "fig, ax = plt.subplots(figsize=(6, 4))\n"
                 "labels = [f\"{r['scheme']} {r['n_tx']}x{r['n_rx']}\" for r in rows]\n"
                 "ax.bar(labels, [float(r['gamma_db']) for r in rows])\n"
                 "ax.set_ylabel('gap [dB]')\n";
            break;
        case SweepKind::table1:
            s += "fig, ax = plt.subplots(figsize=(6, 4))\n"
                 "labels = [f\"{r['scheme']} {r['n_rx']}\" for r in rows]\n"
                 "ax.bar(labels, [float(r['sigma_thr_mv']) for r in rows], label='threshold')\n"
                 "ax.plot(labels, [float(r['sigma_sim_mv']) for r in rows], 'k--', label='simulated')\n"
                 "ax.set_ylabel('noise std [mV]')\n"
                 "ax.legend()\n";
            break;
        }
        const std::string png = csv_name.substr(0, csv_name.rfind('.')) + ".png";
        s += "fig.tight_layout()\n"
             "fig.savefig(f'{here}/" + png + "', dpi=150)\n";
        return s;
    }
}
