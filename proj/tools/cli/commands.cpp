// SPDX-License-Identifier: Apache-2.0
//
// nfcrb - wideband compressed-domain Cramer-Rao bounds for near-field arrays
// Copyright (C) 2026 The nfcrb authors
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

#include "cli/commands.hpp"

#include "cli/output.hpp"
#include "cli/svg.hpp"

#include "nfcrb/covariance.hpp"
#include "nfcrb/error.hpp"
#include "nfcrb/parallel.hpp"
#include "nfcrb/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>

#ifndef NFCRB_VERSION
#define NFCRB_VERSION "0.0.0"
#endif

namespace nfcrb::cli {

namespace fs = std::filesystem;

namespace {

const std::string kBlue = "#1f77b4";
const std::string kOrange = "#ff7f0e";
const std::string kGreen = "#2ca02c";
const std::string kRed = "#d62728";
const std::string kPurple = "#9467bd";
const std::string kDashed = "7 4";
const std::string kDotted = "2 3";

using Row = std::vector<std::pair<std::string, CsvCell>>;

CsvTable table_from(const std::vector<Row> &rows)
{
    std::vector<std::string> header;
    for (const auto &[k, v] : rows.at(0)) {
        header.push_back(k);
    }
    CsvTable t(header);
    for (const auto &r : rows) {
        std::vector<CsvCell> cells;
        for (const auto &[k, v] : r) {
            cells.push_back(v);
        }
        t.add_row(std::move(cells));
    }
    return t;
}

nlohmann::json json_from(const std::vector<Row> &rows)
{
    nlohmann::json arr = nlohmann::json::array();
    for (const auto &r : rows) {
        nlohmann::json o = nlohmann::json::object();
        for (const auto &[k, v] : r) {
            if (const auto *d = std::get_if<double>(&v)) {
                o[k] = json_number(*d);
            } else if (const auto *i = std::get_if<std::int64_t>(&v)) {
                o[k] = *i;
            } else {
                o[k] = std::get<std::string>(v);
            }
        }
        arr.push_back(o);
    }
    return arr;
}

CsvCell I(int v) { return static_cast<std::int64_t>(v); }
CsvCell I(std::size_t v) { return static_cast<std::int64_t>(v); }
CsvCell seed_cell(std::uint64_t v) { return std::to_string(v); }
CsvCell flag(bool b) { return static_cast<std::int64_t>(b ? 1 : 0); }

/// Writes the files of one command into the output directory and records
/// them. Every file carries the resolved config and seed list.
class Emitter {
public:
    Emitter(const ExperimentConfig &cfg, std::string command, nlohmann::json notes = nlohmann::json::object())
        : cfg_(cfg), command_(std::move(command)), notes_(std::move(notes))
    {
        prepare_output_dir(cfg_.out_dir);
    }

    nlohmann::json metadata() const
    {
        nlohmann::json m;
        m["tool"] = "nfcrb";
        m["version"] = NFCRB_VERSION;
        m["command"] = command_;
        m["seeds"] = seeds_.empty() ? cfg_.seed_list() : seeds_;
        m["config"] = cfg_.to_json();
        if (!notes_.empty()) {
            m["notes"] = notes_;
        }
        return m;
    }

    /// Seeds actually consumed, when the command uses fewer than configured.
    void use_seeds(std::vector<std::uint64_t> seeds) { seeds_ = std::move(seeds); }

    void csv(const std::string &stem, const CsvTable &table)
    {
        if (!cfg_.wants("csv")) {
            return;
        }
        put(stem + ".csv", [&](const fs::path &p) { table.write(p); });
        put(stem + ".meta.json", [&](const fs::path &p) {
            nlohmann::json m = metadata();
            m["describes"] = stem + ".csv";
            m["columns"] = table.header();
            m["rows"] = table.rows();
            write_json(p, m);
        });
    }

    void json(const std::string &stem, nlohmann::json body)
    {
        if (!cfg_.wants("json")) {
            return;
        }
        body["metadata"] = metadata();
        put(stem + ".json", [&](const fs::path &p) { write_json(p, body); });
    }

    void svg(const std::string &stem, svg::Figure fig)
    {
        if (!cfg_.wants("svg")) {
            return;
        }
        fig.metadata_json = metadata().dump();
        put(stem + ".svg", [&](const fs::path &p) { write_text(p, svg::render(fig)); });
    }

    std::vector<fs::path> files() const { return files_; }

private:
    template <typename Fn>
    void put(const std::string &name, Fn &&fn)
    {
        const fs::path p = fs::path(cfg_.out_dir) / name;
        fn(p);
        files_.push_back(p);
    }

    const ExperimentConfig &cfg_;
    std::string command_;
    nlohmann::json notes_;
    std::vector<std::uint64_t> seeds_;
    std::vector<fs::path> files_;
};

/// Mean and spread across seeds of a positive quantity, averaged in dB.
struct Band {
    double mean = 0.0;
    double lo = 0.0;
    double hi = 0.0;
};

Band db_band(const std::vector<double> &v)
{
    std::vector<double> logs;
    logs.reserve(v.size());
    for (double x : v) {
        logs.push_back(std::log10(x));
    }
    const SeedStats st = seed_stats(logs);
    return {std::pow(10.0, st.mean), std::pow(10.0, st.min), std::pow(10.0, st.max)};
}

/// Plain mean/min/max, for quantities already in dB.
Band lin_band(const std::vector<double> &v)
{
    const SeedStats st = seed_stats(v);
    return {st.mean, st.min, st.max};
}

FimOptions point_options(FimCache *cache)
{
    FimOptions o;
    o.workers = 1;
    o.cache = cache;
    return o;
}

/// One compressed evaluation, without the per-subcarrier matrices.
struct PointRecord {
    int K = 0;
    int Ks = 0;
    double B_eff = 0.0;
    CrbReport wb;
    CrbReport nb;
    Decomposition dec;
    double gd_bound_db = 0.0;
    double beta_min = 0.0;
    double beta_max = 0.0;
    int pinv_rank = 0;
};

PointRecord evaluate(const Scenario &s, const Combiner &c, double B, FimCache *cache, bool with_beta = false)
{
    const OperatingPoint op = evaluate_operating_point(s, c, B, point_options(cache));
    PointRecord r;
    r.K = op.K;
    r.Ks = op.Ks;
    r.B_eff = op.B_eff_hz;
    r.wb = op.wideband;
    r.nb = op.narrowband;
    r.dec = op.decomposition;
    r.gd_bound_db = op.gd_scalar_bound_db;
    r.pinv_rank = op.fim.wb.rank;
    if (with_beta) {
        const RVec beta = beta_diagnostic(op.fim);
        r.beta_min = beta.minCoeff();
        r.beta_max = beta.maxCoeff();
    }
    return r;
}

std::vector<Combiner> make_combiners(const ExperimentConfig &cfg, const std::vector<std::uint64_t> &seeds,
                                     int n_rf)
{
    std::vector<Combiner> out;
    out.reserve(seeds.size());
    for (auto sd : seeds) {
        out.push_back(cfg.combiner(sd, n_rf));
    }
    return out;
}

template <typename Get>
std::vector<double> collect(std::size_t n, Get &&get)
{
    std::vector<double> v(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = get(i);
    }
    return v;
}

double mhz(double hz) { return hz / 1e6; }

std::string label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%g", v);
    return buf;
}

std::vector<double> column(const std::vector<Row> &rows, const std::string &name, std::int64_t path = 0)
{
    std::vector<double> out;
    for (const auto &r : rows) {
        std::int64_t p = 0;
        double value = std::nan("");
        for (const auto &[k, v] : r) {
            if (k == "path") p = std::get<std::int64_t>(v);
            if (k == name) {
                if (const auto *d = std::get_if<double>(&v)) value = *d;
                else if (const auto *i = std::get_if<std::int64_t>(&v)) value = static_cast<double>(*i);
            }
        }
        if (p == path) {
            out.push_back(value);
        }
    }
    return out;
}

svg::Series series(std::string label, std::vector<double> x, std::vector<double> y, std::string color,
                   std::string dash = {})
{
    svg::Series s;
    s.label = std::move(label);
    s.x = std::move(x);
    s.y = std::move(y);
    s.color = std::move(color);
    s.dash = std::move(dash);
    s.markers = s.dash.empty();
    return s;
}

svg::Series banded(svg::Series s, std::vector<double> lo, std::vector<double> hi)
{
    s.band_lo = std::move(lo);
    s.band_hi = std::move(hi);
    return s;
}

std::string seed_label(const ExperimentConfig &cfg)
{
    const auto seeds = cfg.seed_list();
    if (cfg.combiner_kind == "identity") {
        return "W = I";
    }
    return seeds.size() == 1 ? "seed " + std::to_string(seeds.front())
                             : std::to_string(seeds.size()) + "-seed mean, min/max band";
}

} // namespace

// ---------------------------------------------------------------- mismatch

CommandResult cmd_mismatch(const ExperimentConfig &cfg)
{
    const nlohmann::json notes = {
        {"max_delta", "maximum over the full (alpha, r) grid; edge_max_delta is the maximum over r at "
                      "the subcarrier farthest from f_c"},
        {"theta_deg", cfg.paths.front().theta_deg},
        {"snr_db", cfg.N0 ? nlohmann::json(nullptr) : nlohmann::json(cfg.snr_db)},
    };
    Emitter em(cfg, "mismatch", notes);
    const Scenario s = cfg.scenario();
    const std::uint64_t seed = cfg.seed_list().front();
    em.use_seeds({seed});
    const Combiner c = cfg.combiner(seed, cfg.N_RF);

    const auto &Bs = cfg.mismatch_B_hz;
    std::vector<MismatchGrid> grids(Bs.size());
    std::vector<OfdmGrid> ofdm(Bs.size());
    parallel_for(Bs.size(), cfg.workers, [&](std::size_t b) {
        ofdm[b] = s.grid(Bs[b]);
        std::vector<double> alphas = ofdm[b].selected_alphas();
        if (std::find(alphas.begin(), alphas.end(), 1.0) == alphas.end()) {
            alphas.push_back(1.0);
            std::sort(alphas.begin(), alphas.end());
        }
        grids[b] = mismatch_grid(s.cfg, c, s.paths.theta(0), s.N0, s.paths.p(0), alphas, cfg.mismatch_range_m);
    });

    CsvTable table({"B_mhz", "alpha", "r_m", "delta"});
    std::vector<Row> summary_rows;
    svg::Figure fig;
    fig.title = "Relative covariance mismatch, theta = " + label(cfg.paths.front().theta_deg) +
                " deg, N_RF = " + std::to_string(c.n_rf()) + ", " +
                (c.kind() == CombinerKind::Identity ? std::string("W = I") : "seed " + std::to_string(seed));
    for (std::size_t b = 0; b < Bs.size(); ++b) {
        const MismatchGrid &g = grids[b];
        Eigen::Index ai = 0, ri = 0;
        g.delta.maxCoeff(&ai, &ri);
        for (Eigen::Index i = 0; i < g.alphas.size(); ++i) {
            for (Eigen::Index j = 0; j < g.ranges.size(); ++j) {
                table.add_row({mhz(Bs[b]), g.alphas(i), g.ranges(j), g.delta(i, j)});
            }
        }
        summary_rows.push_back({{"B_mhz", mhz(Bs[b])},
                                {"K", I(ofdm[b].K)},
                                {"Ks", I(ofdm[b].Ks())},
                                {"n_alpha", I(static_cast<int>(g.alphas.size()))},
                                {"n_range", I(static_cast<int>(g.ranges.size()))},
                                {"max_delta", g.max_delta},
                                {"edge_max_delta", g.edge_max()},
                                {"argmax_alpha", g.alphas(ai)},
                                {"argmax_r_m", g.ranges(ri)}});

        svg::HeatPanel hp;
        hp.title = "B = " + label(mhz(Bs[b])) + " MHz, max = " +
                   label(std::round(g.max_delta * 1000.0) / 1000.0);
        hp.xlabel = "f_k - f_c (MHz)";
        hp.ylabel = "range r (m)";
        hp.colorbar_label = "delta (white contour: delta = 0.05)";
        hp.logy = true;
        hp.contour = 0.05;
        for (Eigen::Index i = 0; i < g.alphas.size(); ++i) {
            hp.x.push_back(mhz((g.alphas(i) - 1.0) * s.cfg.f_c));
            std::vector<double> col(static_cast<std::size_t>(g.ranges.size()));
            for (Eigen::Index j = 0; j < g.ranges.size(); ++j) {
                col[static_cast<std::size_t>(j)] = g.delta(i, j);
            }
            hp.z.push_back(std::move(col));
        }
        hp.y.assign(g.ranges.data(), g.ranges.data() + g.ranges.size());
        fig.panels.emplace_back(std::move(hp));
    }

    em.csv("mismatch", table);
    CommandResult res;
    res.summary = {{"bandwidths", json_from(summary_rows)}};
    em.json("mismatch", res.summary);
    em.svg("mismatch", std::move(fig));
    res.files = em.files();
    return res;
}

// ---------------------------------------------------------------- sweep-bw

CommandResult cmd_sweep_bandwidth(const ExperimentConfig &cfg)
{
    Emitter em(cfg, "sweep-bw");
    const Scenario s = cfg.scenario();
    const auto seeds = cfg.seed_list();
    const auto combs = make_combiners(cfg, seeds, cfg.N_RF);
    const auto &Bs = cfg.B_sweep_hz;
    const std::size_t nS = seeds.size();

    FimCache cache;
    std::vector<PointRecord> pts(Bs.size() * nS);
    parallel_for(pts.size(), cfg.workers, [&](std::size_t i) {
        pts[i] = evaluate(s, combs[i % nS], Bs[i / nS], &cache);
    });

    std::vector<Row> per_seed;
    std::vector<Row> summary;
    for (std::size_t b = 0; b < Bs.size(); ++b) {
        const PointRecord &p0 = pts[b * nS];
        for (int l = 0; l < s.paths.d(); ++l) {
            const auto L = static_cast<std::size_t>(l);
            auto at = [&](std::size_t k) -> const PointRecord & { return pts[b * nS + k]; };
            for (std::size_t k = 0; k < nS; ++k) {
                const PointRecord &p = at(k);
                const PathCrb &wb = p.wb.paths[L], &nb = p.nb.paths[L], &dd = p.dec.dd.paths[L];
                const PathGains &g = p.dec.paths[L];
                per_seed.push_back({{"B_mhz", mhz(Bs[b])},
                                    {"seed", seed_cell(seeds[k])},
                                    {"path", I(l)},
                                    {"K", I(p.K)},
                                    {"Ks", I(p.Ks)},
                                    {"B_eff_mhz", mhz(p.B_eff)},
                                    {"theta_std_deg_wb", wb.theta_std_deg},
                                    {"theta_std_deg_nb", nb.theta_std_deg},
                                    {"theta_std_deg_dd", dd.theta_std_deg},
                                    {"r_std_m_wb", wb.range_std_m},
                                    {"r_std_m_nb", nb.range_std_m},
                                    {"r_std_m_dd", dd.range_std_m},
                                    {"r_inf", flag(wb.range_infinite)},
                                    {"delta_dd_db", p.dec.delta_dd_db},
                                    {"delta_gd_theta_db", g.gd_theta_db},
                                    {"delta_gd_r_db", g.gd_r_db},
                                    {"delta_total_theta_db", g.total_theta_db},
                                    {"delta_total_r_db", g.total_r_db},
                                    {"gd_scalar_bound_db", p.gd_bound_db}});
            }
            auto field = [&](auto get) { return collect(nS, [&](std::size_t k) { return get(at(k)); }); };
            const Band rwb = db_band(field([&](const PointRecord &p) { return p.wb.paths[L].range_std_m; }));
            const Band rnb = db_band(field([&](const PointRecord &p) { return p.nb.paths[L].range_std_m; }));
            const Band rdd = db_band(field([&](const PointRecord &p) { return p.dec.dd.paths[L].range_std_m; }));
            const Band twb = db_band(field([&](const PointRecord &p) { return p.wb.paths[L].theta_std_deg; }));
            const Band tnb = db_band(field([&](const PointRecord &p) { return p.nb.paths[L].theta_std_deg; }));
            const Band tdd = db_band(field([&](const PointRecord &p) { return p.dec.dd.paths[L].theta_std_deg; }));
            const Band gr = lin_band(field([&](const PointRecord &p) { return p.dec.paths[L].gd_r_db; }));
            const Band gt = lin_band(field([&](const PointRecord &p) { return p.dec.paths[L].gd_theta_db; }));
            const Band tot = lin_band(field([&](const PointRecord &p) { return p.dec.paths[L].total_r_db; }));
            summary.push_back({{"B_mhz", mhz(Bs[b])},
                               {"path", I(l)},
                               {"K", I(p0.K)},
                               {"Ks", I(p0.Ks)},
                               {"B_eff_mhz", mhz(p0.B_eff)},
                               {"r_std_m_wb", rwb.mean},
                               {"r_std_m_wb_min", rwb.lo},
                               {"r_std_m_wb_max", rwb.hi},
                               {"r_std_m_nb", rnb.mean},
                               {"r_std_m_nb_min", rnb.lo},
                               {"r_std_m_nb_max", rnb.hi},
                               {"r_std_m_dd", rdd.mean},
                               {"theta_std_deg_wb", twb.mean},
                               {"theta_std_deg_wb_min", twb.lo},
                               {"theta_std_deg_wb_max", twb.hi},
                               {"theta_std_deg_nb", tnb.mean},
                               {"theta_std_deg_dd", tdd.mean},
                               {"r_inf", flag(p0.wb.paths[L].range_infinite)},
                               {"delta_dd_db", p0.dec.delta_dd_db},
                               {"delta_gd_r_db", gr.mean},
                               {"delta_gd_r_db_min", gr.lo},
                               {"delta_gd_r_db_max", gr.hi},
                               {"delta_gd_theta_db", gt.mean},
                               {"delta_gd_theta_db_min", gt.lo},
                               {"delta_gd_theta_db_max", gt.hi},
                               {"delta_total_r_db", tot.mean},
                               {"gd_scalar_bound_db", p0.gd_bound_db},
                               {"n_seeds", I(nS)}});
        }
    }

    em.csv("sweep_bw_seeds", table_from(per_seed));
    em.csv("sweep_bw", table_from(summary));

    svg::Figure fig;
    fig.title = "CRB vs bandwidth, r = " + label(cfg.paths.front().r_m) + " m, N_RF = " +
                std::to_string(cfg.N_RF) + ", " + seed_label(cfg);
    const auto B = column(summary, "B_mhz");
    svg::LinePanel pr{"Range", "bandwidth B (MHz)", "sqrt(CRB_r) (m)", true, true, {}, {}};
    pr.series.push_back(banded(series("wideband", B, column(summary, "r_std_m_wb"), kBlue),
                               column(summary, "r_std_m_wb_min"), column(summary, "r_std_m_wb_max")));
    pr.series.push_back(banded(series("narrowband", B, column(summary, "r_std_m_nb"), kOrange, kDotted),
                               column(summary, "r_std_m_nb_min"), column(summary, "r_std_m_nb_max")));
    pr.series.push_back(series("narrowband / sqrt(Ks)", B, column(summary, "r_std_m_dd"), kGreen, kDashed));
    pr.legend = svg::Legend::CenterRight;
    svg::LinePanel pt{"Angle", "bandwidth B (MHz)", "sqrt(CRB_theta) (deg)", true, true, {}, {}};
    pt.legend = svg::Legend::CenterRight;
    pt.series.push_back(banded(series("wideband", B, column(summary, "theta_std_deg_wb"), kBlue),
                               column(summary, "theta_std_deg_wb_min"), column(summary, "theta_std_deg_wb_max")));
    pt.series.push_back(series("narrowband", B, column(summary, "theta_std_deg_nb"), kOrange, kDotted));
    pt.series.push_back(series("narrowband / sqrt(Ks)", B, column(summary, "theta_std_deg_dd"), kGreen, kDashed));
    svg::LinePanel pg{"Geometric diversity gain", "bandwidth B (MHz)", "delta_gd (dB)", true, false, {}, {}};
    pg.series.push_back(banded(series("range", B, column(summary, "delta_gd_r_db"), kBlue),
                               column(summary, "delta_gd_r_db_min"), column(summary, "delta_gd_r_db_max")));
    pg.series.push_back(banded(series("angle", B, column(summary, "delta_gd_theta_db"), kRed, kDashed),
                               column(summary, "delta_gd_theta_db_min"), column(summary, "delta_gd_theta_db_max")));
    pg.series.push_back(series("scalar bound", B, column(summary, "gd_scalar_bound_db"), kPurple, kDotted));
    fig.panels = {pr, pt, pg};

    CommandResult res;
    res.summary = {{"points", json_from(summary)}};
    em.json("sweep_bw", res.summary);
    em.svg("sweep_bw", std::move(fig));
    res.files = em.files();
    return res;
}

// ---------------------------------------------------------------- sweep-range

CommandResult cmd_sweep_range(const ExperimentConfig &cfg)
{
    Emitter em(cfg, "sweep-range");
    const auto seeds = cfg.seed_list();
    const auto combs = make_combiners(cfg, seeds, cfg.N_RF);
    const auto &ranges = cfg.range_list_m;
    const std::size_t nS = seeds.size();
    const double B = cfg.B_hz;

    std::vector<Scenario> scen;
    for (double r : ranges) {
        scen.push_back(cfg.scenario_at_range(r));
    }
    std::vector<PointRecord> pts(ranges.size() * nS);
    std::vector<CrbReport> full(ranges.size());
    const std::size_t n_comp = pts.size();
    parallel_for(n_comp + ranges.size(), cfg.workers, [&](std::size_t i) {
        if (i < n_comp) {
            pts[i] = evaluate(scen[i / nS], combs[i % nS], B, nullptr);
        } else {
            const std::size_t ri = i - n_comp;
            full[ri] = full_array_wideband(scen[ri], B, point_options(nullptr));
        }
    });

    std::vector<Row> per_seed;
    std::vector<Row> summary;
    const int d = scen.front().paths.d();
    for (std::size_t ri = 0; ri < ranges.size(); ++ri) {
        auto at = [&](std::size_t k) -> const PointRecord & { return pts[ri * nS + k]; };
        for (int l = 0; l < d; ++l) {
            const auto L = static_cast<std::size_t>(l);
            const PathCrb &fa = full[ri].paths[L];
            std::vector<double> gap_r(nS), gap_t(nS);
            for (std::size_t k = 0; k < nS; ++k) {
                const PointRecord &p = at(k);
                const GapDb gap = compression_gap(p.wb, full[ri])[L];
                gap_r[k] = gap.r_db;
                gap_t[k] = gap.theta_db;
                per_seed.push_back({{"r_m", ranges[ri]},
                                    {"seed", seed_cell(seeds[k])},
                                    {"path", I(l)},
                                    {"theta_std_deg_wb", p.wb.paths[L].theta_std_deg},
                                    {"theta_std_deg_nb", p.nb.paths[L].theta_std_deg},
                                    {"r_std_m_wb", p.wb.paths[L].range_std_m},
                                    {"r_std_m_nb", p.nb.paths[L].range_std_m},
                                    {"r_inf", flag(p.wb.paths[L].range_infinite)},
                                    {"delta_total_r_db", p.dec.paths[L].total_r_db},
                                    {"gap_theta_db", gap.theta_db},
                                    {"gap_r_db", gap.r_db}});
            }
            auto field = [&](auto get) { return collect(nS, [&](std::size_t k) { return get(at(k)); }); };
            const Band twb = db_band(field([&](const PointRecord &p) { return p.wb.paths[L].theta_std_deg; }));
            const Band tnb = db_band(field([&](const PointRecord &p) { return p.nb.paths[L].theta_std_deg; }));
            const Band rwb = db_band(field([&](const PointRecord &p) { return p.wb.paths[L].range_std_m; }));
            const Band rnb = db_band(field([&](const PointRecord &p) { return p.nb.paths[L].range_std_m; }));
            const Band tot = lin_band(field([&](const PointRecord &p) { return p.dec.paths[L].total_r_db; }));
            const Band gr = lin_band(gap_r);
            const Band gt = lin_band(gap_t);
            summary.push_back({{"r_m", ranges[ri]},
                               {"path", I(l)},
                               {"theta_std_deg_wb", twb.mean},
                               {"theta_std_deg_wb_min", twb.lo},
                               {"theta_std_deg_wb_max", twb.hi},
                               {"theta_std_deg_nb", tnb.mean},
                               {"theta_std_deg_nb_min", tnb.lo},
                               {"theta_std_deg_nb_max", tnb.hi},
                               {"theta_std_deg_full", fa.theta_std_deg},
                               {"r_std_m_wb", rwb.mean},
                               {"r_std_m_wb_min", rwb.lo},
                               {"r_std_m_wb_max", rwb.hi},
                               {"r_std_m_nb", rnb.mean},
                               {"r_std_m_nb_min", rnb.lo},
                               {"r_std_m_nb_max", rnb.hi},
                               {"r_std_m_full", fa.range_std_m},
                               {"r_inf", flag(fa.range_infinite)},
                               {"delta_total_r_db", tot.mean},
                               {"gap_theta_db", gt.mean},
                               {"gap_r_db", gr.mean},
                               {"gap_r_db_min", gr.lo},
                               {"gap_r_db_max", gr.hi},
                               {"n_seeds", I(nS)}});
        }
    }

    em.csv("sweep_range_seeds", table_from(per_seed));
    em.csv("sweep_range", table_from(summary));

    svg::Figure fig;
    fig.title = "CRB vs range, B = " + label(mhz(B)) + " MHz, N_RF = " +
                std::to_string(cfg.N_RF) + ", " + seed_label(cfg);
    const auto r = column(summary, "r_m");
    std::vector<svg::VLine> vl;
    if (cfg.ebrd_m) {
        vl.push_back({*cfg.ebrd_m, "EBRD"});
    }
    svg::LinePanel pt{"Angle", "range r (m)", "sqrt(CRB_theta) (deg)", true, true, {}, vl};
    pt.series.push_back(banded(series("wideband, compressed", r, column(summary, "theta_std_deg_wb"), kBlue),
                               column(summary, "theta_std_deg_wb_min"), column(summary, "theta_std_deg_wb_max")));
    pt.series.push_back(banded(series("narrowband, compressed", r, column(summary, "theta_std_deg_nb"), kOrange, kDotted),
                               column(summary, "theta_std_deg_nb_min"), column(summary, "theta_std_deg_nb_max")));
    pt.series.push_back(series("wideband, full array", r, column(summary, "theta_std_deg_full"), kGreen, kDashed));
    pt.legend = svg::Legend::CenterRight;
    svg::LinePanel pr{"Range", "range r (m)", "sqrt(CRB_r) (m)", true, true, {}, vl};
    pr.legend = svg::Legend::BottomRight;
    pr.series.push_back(banded(series("wideband, compressed", r, column(summary, "r_std_m_wb"), kBlue),
                               column(summary, "r_std_m_wb_min"), column(summary, "r_std_m_wb_max")));
    pr.series.push_back(banded(series("narrowband, compressed", r, column(summary, "r_std_m_nb"), kOrange, kDotted),
                               column(summary, "r_std_m_nb_min"), column(summary, "r_std_m_nb_max")));
    pr.series.push_back(series("wideband, full array", r, column(summary, "r_std_m_full"), kGreen, kDashed));
    fig.panels = {pt, pr};

    CommandResult res;
    res.summary = {{"points", json_from(summary)}};
    em.json("sweep_range", res.summary);
    em.svg("sweep_range", std::move(fig));
    res.files = em.files();
    return res;
}

// ---------------------------------------------------------------- sweep-nrf

CommandResult cmd_sweep_nrf(const ExperimentConfig &cfg)
{
    Emitter em(cfg, "sweep-nrf");
    const Scenario s = cfg.scenario();
    const auto seeds = cfg.seed_list();
    const auto &nrf = cfg.N_RF_sweep;
    const std::size_t nS = seeds.size();
    const double B = cfg.B_hz;

    std::vector<std::vector<Combiner>> combs;
    for (int n : nrf) {
        combs.push_back(make_combiners(cfg, seeds, n));
    }
    std::vector<PointRecord> pts(nrf.size() * nS);
    CrbReport full;
    parallel_for(pts.size() + 1, cfg.workers, [&](std::size_t i) {
        if (i < pts.size()) {
            pts[i] = evaluate(s, combs[i / nS][i % nS], B, nullptr);
        } else {
            full = full_array_wideband(s, B, point_options(nullptr));
        }
    });

    std::vector<Row> per_seed;
    std::vector<Row> summary;
    nlohmann::json monotone = nlohmann::json::array();
    for (int l = 0; l < s.paths.d(); ++l) {
        const auto L = static_cast<std::size_t>(l);
        std::vector<double> gap_means;
        for (std::size_t n = 0; n < nrf.size(); ++n) {
            auto at = [&](std::size_t k) -> const PointRecord & { return pts[n * nS + k]; };
            std::vector<double> gr(nS), gt(nS);
            for (std::size_t k = 0; k < nS; ++k) {
                const PointRecord &p = at(k);
                const GapDb gap = compression_gap(p.wb, full)[L];
                gr[k] = gap.r_db;
                gt[k] = gap.theta_db;
                per_seed.push_back({{"N_RF", I(nrf[n])},
                                    {"seed", seed_cell(seeds[k])},
                                    {"path", I(l)},
                                    {"theta_std_deg", p.wb.paths[L].theta_std_deg},
                                    {"r_std_m", p.wb.paths[L].range_std_m},
                                    {"r_inf", flag(p.wb.paths[L].range_infinite)},
                                    {"gap_theta_db", gap.theta_db},
                                    {"gap_r_db", gap.r_db}});
            }
            auto field = [&](auto get) { return collect(nS, [&](std::size_t k) { return get(at(k)); }); };
            const Band r = db_band(field([&](const PointRecord &p) { return p.wb.paths[L].range_std_m; }));
            const Band t = db_band(field([&](const PointRecord &p) { return p.wb.paths[L].theta_std_deg; }));
            const Band g = lin_band(gr);
            const Band gth = lin_band(gt);
            gap_means.push_back(g.mean);
            summary.push_back({{"N_RF", I(nrf[n])},
                               {"path", I(l)},
                               {"r_std_m", r.mean},
                               {"r_std_m_min", r.lo},
                               {"r_std_m_max", r.hi},
                               {"r_std_m_full", full.paths[L].range_std_m},
                               {"theta_std_deg", t.mean},
                               {"theta_std_deg_min", t.lo},
                               {"theta_std_deg_max", t.hi},
                               {"theta_std_deg_full", full.paths[L].theta_std_deg},
                               {"r_inf", flag(full.paths[L].range_infinite)},
                               {"gap_r_db", g.mean},
                               {"gap_r_db_min", g.lo},
                               {"gap_r_db_max", g.hi},
                               {"gap_theta_db", gth.mean},
                               {"gap_theta_db_min", gth.lo},
                               {"gap_theta_db_max", gth.hi},
                               {"n_seeds", I(nS)}});
        }
        std::vector<std::size_t> order(nrf.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](auto a, auto b) { return nrf[a] < nrf[b]; });
        bool mono = true;
        for (std::size_t i = 1; i < order.size(); ++i) {
            mono = mono && gap_means[order[i]] <= gap_means[order[i - 1]];
        }
        monotone.push_back(mono);
    }

    em.csv("sweep_nrf_seeds", table_from(per_seed));
    em.csv("sweep_nrf", table_from(summary));

    svg::Figure fig;
    fig.title = "CRB vs N_RF, B = " + label(mhz(B)) + " MHz, r = " +
                label(cfg.paths.front().r_m) + " m, " + seed_label(cfg);
    const auto x = column(summary, "N_RF");
    svg::LinePanel pr{"Range", "N_RF", "sqrt(CRB_r) (m)", true, true, {}, {}};
    pr.series.push_back(banded(series("compressed, wideband", x, column(summary, "r_std_m"), kBlue),
                               column(summary, "r_std_m_min"), column(summary, "r_std_m_max")));
    pr.series.push_back(series("full array, wideband", x, column(summary, "r_std_m_full"), kGreen, kDashed));
    svg::LinePanel pg{"Compression gap", "N_RF", "gap (dB)", true, false, {}, {}};
    pg.series.push_back(banded(series("range", x, column(summary, "gap_r_db"), kBlue),
                               column(summary, "gap_r_db_min"), column(summary, "gap_r_db_max")));
    pg.series.push_back(banded(series("angle", x, column(summary, "gap_theta_db"), kRed, kDashed),
                               column(summary, "gap_theta_db_min"), column(summary, "gap_theta_db_max")));
    fig.panels = {pr, pg};

    CommandResult res;
    res.summary = {{"points", json_from(summary)}, {"gap_r_monotone_nonincreasing", monotone}};
    em.json("sweep_nrf", res.summary);
    em.svg("sweep_nrf", std::move(fig));
    res.files = em.files();
    return res;
}

// ---------------------------------------------------------------- decompose

CommandResult cmd_decompose(const ExperimentConfig &cfg)
{
    Emitter em(cfg, "decompose");
    const Scenario s = cfg.scenario();
    const auto seeds = cfg.seed_list();
    const auto combs = make_combiners(cfg, seeds, cfg.N_RF);
    const std::size_t nS = seeds.size();
    const double B = cfg.B_hz;

    std::vector<PointRecord> pts(nS);
    CrbReport full;
    parallel_for(nS + 1, cfg.workers, [&](std::size_t i) {
        if (i < nS) {
            pts[i] = evaluate(s, combs[i], B, nullptr, true);
        } else {
            full = full_array_wideband(s, B, point_options(nullptr));
        }
    });

    std::vector<Row> rows;
    std::vector<Row> mean_rows;
    for (int l = 0; l < s.paths.d(); ++l) {
        const auto L = static_cast<std::size_t>(l);
        for (std::size_t k = 0; k < nS; ++k) {
            const PointRecord &p = pts[k];
            const PathCrb &wb = p.wb.paths[L], &nb = p.nb.paths[L], &dd = p.dec.dd.paths[L];
            const PathGains &g = p.dec.paths[L];
            const GapDb gap = compression_gap(p.wb, full)[L];
            rows.push_back({{"seed", seed_cell(seeds[k])},
                            {"path", I(l)},
                            {"Ks", I(p.Ks)},
                            {"theta_std_deg_nb", nb.theta_std_deg},
                            {"theta_std_deg_dd", dd.theta_std_deg},
                            {"theta_std_deg_wb", wb.theta_std_deg},
                            {"r_std_m_nb", nb.range_std_m},
                            {"r_std_m_dd", dd.range_std_m},
                            {"r_std_m_wb", wb.range_std_m},
                            {"r_inf", flag(wb.range_infinite)},
                            {"delta_dd_db", p.dec.delta_dd_db},
                            {"delta_gd_theta_db", g.gd_theta_db},
                            {"delta_gd_r_db", g.gd_r_db},
                            {"delta_total_theta_db", g.total_theta_db},
                            {"delta_total_r_db", g.total_r_db},
                            {"gap_theta_db", gap.theta_db},
                            {"gap_r_db", gap.r_db},
                            {"beta_min", p.beta_min},
                            {"beta_max", p.beta_max},
                            {"pinv_rank", I(p.pinv_rank)}});
        }
        auto field = [&](auto get) { return collect(nS, [&](std::size_t k) { return get(pts[k]); }); };
        auto gapf = [&](bool range) {
            return collect(nS, [&](std::size_t k) {
                const GapDb g = compression_gap(pts[k].wb, full)[L];
                return range ? g.r_db : g.theta_db;
            });
        };
        mean_rows.push_back(
            {{"path", I(l)},
             {"r_std_m_nb", db_band(field([&](const PointRecord &p) { return p.nb.paths[L].range_std_m; })).mean},
             {"r_std_m_dd", db_band(field([&](const PointRecord &p) { return p.dec.dd.paths[L].range_std_m; })).mean},
             {"r_std_m_wb", db_band(field([&](const PointRecord &p) { return p.wb.paths[L].range_std_m; })).mean},
             {"r_std_m_full", full.paths[L].range_std_m},
             {"theta_std_deg_nb", db_band(field([&](const PointRecord &p) { return p.nb.paths[L].theta_std_deg; })).mean},
             {"theta_std_deg_wb", db_band(field([&](const PointRecord &p) { return p.wb.paths[L].theta_std_deg; })).mean},
             {"theta_std_deg_full", full.paths[L].theta_std_deg},
             {"delta_dd_db", pts.front().dec.delta_dd_db},
             {"delta_gd_r_db", lin_band(field([&](const PointRecord &p) { return p.dec.paths[L].gd_r_db; })).mean},
             {"delta_gd_theta_db", lin_band(field([&](const PointRecord &p) { return p.dec.paths[L].gd_theta_db; })).mean},
             {"delta_total_r_db", lin_band(field([&](const PointRecord &p) { return p.dec.paths[L].total_r_db; })).mean},
             {"gap_r_db", lin_band(gapf(true)).mean},
             {"gap_theta_db", lin_band(gapf(false)).mean},
             {"n_seeds", I(nS)}});
    }

    em.csv("decompose", table_from(rows));
    CommandResult res;
    const PointRecord &p0 = pts.front();
    res.summary = {{"operating_point",
                    {{"B_hz", B}, {"K", p0.K}, {"Ks", p0.Ks}, {"B_eff_hz", p0.B_eff},
                     {"gd_scalar_bound_db", p0.gd_bound_db}}},
                   {"per_seed", json_from(rows)},
                   {"seed_mean", json_from(mean_rows)}};
    em.json("decompose", res.summary);
    res.files = em.files();
    return res;
}

// ---------------------------------------------------------------- verify

CommandResult cmd_verify(const ExperimentConfig &cfg, bool inject_fault)
{
    Emitter em(cfg, "verify", {{"inject_fault", inject_fault}});
    VerifyOptions opts;
    opts.bandwidth_hz = cfg.B_hz;
    opts.N_RF = cfg.N_RF;
    opts.seed = cfg.seed_list().front();
    em.use_seeds({opts.seed});
    opts.workers = cfg.workers;
    opts.inject_derivative_fault = inject_fault;
    const VerifyReport rep = run_verification(cfg.scenario(), opts);

    nlohmann::json checks = nlohmann::json::array();
    std::vector<Row> rows;
    for (const auto &c : rep.checks) {
        checks.push_back({{"name", c.name},
                          {"passed", c.passed},
                          {"value", json_number(c.value)},
                          {"threshold", json_number(c.threshold)},
                          {"detail", c.detail},
                          {"gating", c.gating}});
        rows.push_back({{"check", c.name},
                        {"passed", flag(c.passed)},
                        {"gating", flag(c.gating)},
                        {"value", c.value},
                        {"threshold", c.threshold},
                        {"detail", c.detail}});
    }
    em.csv("verify", table_from(rows));
    CommandResult res;
    res.summary = {{"all_passed", rep.all_passed()}, {"checks", checks}};
    em.json("verify", res.summary);
    res.files = em.files();
    res.exit_code = rep.all_passed() ? kExitOk : kExitVerification;
    return res;
}

// ---------------------------------------------------------------- entry point

namespace {

void print_summary(std::ostream &out, const std::string &command, const CommandResult &res)
{
    if (command == "verify") {
        for (const auto &c : res.summary["checks"]) {
            const bool gating = c["gating"].get<bool>();
            out << (c["passed"].get<bool>() ? "PASS " : gating ? "FAIL " : "INFO ") << c["name"].get<std::string>()
                << "  "
                << c["detail"].get<std::string>() << "\n";
        }
    } else if (command == "mismatch") {
        for (const auto &b : res.summary["bandwidths"]) {
            out << "B = " << b["B_mhz"] << " MHz  max_delta = " << b["max_delta"]
                << "  edge_max_delta = " << b["edge_max_delta"] << "\n";
        }
    } else if (command == "decompose") {
        for (const auto &m : res.summary["seed_mean"]) {
            out << "path " << m["path"] << ": delta_dd = " << m["delta_dd_db"] << " dB, delta_gd(r) = "
                << m["delta_gd_r_db"] << " dB, delta_gd(theta) = " << m["delta_gd_theta_db"]
                << " dB, gap(r) = " << m["gap_r_db"] << " dB\n";
        }
    }
    for (const auto &f : res.files) {
        out << "wrote " << f.string() << "\n";
    }
}

/// Pulls "--a.b=value" and "--a.b value" pairs out of the argument list.
std::vector<std::pair<std::string, std::string>> take_dotted(std::vector<std::string> &args)
{
    std::vector<std::pair<std::string, std::string>> out;
    std::vector<std::string> rest;
    for (std::size_t i = 0; i < args.size(); ++i) {
        const std::string &a = args[i];
        if (a.rfind("--", 0) == 0) {
            const std::size_t eq = a.find('=');
            const std::string key = a.substr(2, eq == std::string::npos ? std::string::npos : eq - 2);
            if (key.find('.') != std::string::npos) {
                if (eq != std::string::npos) {
                    out.emplace_back(key, a.substr(eq + 1));
                } else if (i + 1 < args.size()) {
                    out.emplace_back(key, args[++i]);
                } else {
                    throw UsageError("option --" + key + " needs a value");
                }
                continue;
            }
        }
        rest.push_back(a);
    }
    args = std::move(rest);
    return out;
}

} // namespace

int run_cli(const std::vector<std::string> &args_in, std::ostream &out, std::ostream &err)
{
    std::vector<std::string> args = args_in;
    std::vector<std::pair<std::string, std::string>> overrides;
    try {
        overrides = take_dotted(args);
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    }

    CLI::App app{"Wideband compressed-domain Cramer-Rao bounds for near-field arrays"};
    app.name("nfcrb");
    app.set_version_flag("--version", NFCRB_VERSION);
    app.require_subcommand(1);
    app.fallthrough();
    app.footer("Any config key can be overridden with --section.key VALUE, e.g. --ofdm.B_hz 8e8 or "
               "--paths.0.r_m 10. Lists take comma-separated values.");

    std::optional<std::string> config_path;
    std::optional<std::string> out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> seeds;
    std::optional<int> workers;
    std::vector<std::string> formats;
    std::optional<double> ebrd;
    bool inject_fault = false;

    app.add_option("--config", config_path, "YAML config file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory");
    app.add_option("--seed", seed, "first combiner seed");
    app.add_option("--seeds", seeds, "number of consecutive seeds")->check(CLI::PositiveNumber);
    app.add_option("--workers", workers, "parallel sweep points")->check(CLI::PositiveNumber);
    app.add_option("--format", formats, "output formats")
        ->delimiter(',')
        ->check(CLI::IsMember({"csv", "json", "svg"}));
    app.add_option("--ebrd-m", ebrd, "draw a vertical EBRD marker at this range (m)");

    const std::map<std::string, std::string> commands{
        {"mismatch", "relative covariance mismatch over (subcarrier, range)"},
        {"sweep-bw", "CRB and its decomposition versus bandwidth"},
        {"sweep-range", "CRB versus range for compressed and full-array receivers"},
        {"sweep-nrf", "compression gap versus the number of RF chains"},
        {"decompose", "data/geometric diversity split at one operating point"},
        {"verify", "run the numerical property checks"},
    };
    std::map<std::string, CLI::App *> subs;
    for (const auto &[name, help] : commands) {
        subs[name] = app.add_subcommand(name, help);
    }
    subs["verify"]->add_flag("--inject-fault", inject_fault,
                             "perturb one analytic derivative so the finite-difference check must fail");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError &e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    std::string command;
    for (const auto &[name, sub] : subs) {
        if (sub->parsed()) {
            command = name;
        }
    }

    try {
        if (out_dir) overrides.emplace_back("output.dir", *out_dir);
        if (seed) overrides.emplace_back("combiner.seed", std::to_string(*seed));
        if (seeds) overrides.emplace_back("combiner.seeds", std::to_string(*seeds));
        if (workers) overrides.emplace_back("run.workers", std::to_string(*workers));
        if (ebrd) overrides.emplace_back("sweep.ebrd_m", format_double(*ebrd));
        if (!formats.empty()) {
            std::string joined = "[";
            for (std::size_t i = 0; i < formats.size(); ++i) {
                joined += (i ? "," : "") + formats[i];
            }
            overrides.emplace_back("output.formats", joined + "]");
        }
        const ExperimentConfig cfg = load_config(config_path, overrides);

        CommandResult res;
        if (command == "mismatch") res = cmd_mismatch(cfg);
        else if (command == "sweep-bw") res = cmd_sweep_bandwidth(cfg);
        else if (command == "sweep-range") res = cmd_sweep_range(cfg);
        else if (command == "sweep-nrf") res = cmd_sweep_nrf(cfg);
        else if (command == "decompose") res = cmd_decompose(cfg);
        else res = cmd_verify(cfg, inject_fault);
        print_summary(out, command, res);
        return res.exit_code;
    } catch (const UsageError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const OutputError &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::invalid_argument &e) {
        err << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const ConsistencyError &e) {
        err << "verification failure: " << e.what() << "\n";
        return kExitVerification;
    } catch (const NumericalError &e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    } catch (const std::exception &e) {
        err << "numerical failure: " << e.what() << "\n";
        return kExitNumerical;
    }
}

} // namespace nfcrb::cli
