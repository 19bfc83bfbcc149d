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

#include <doctest.h>

#include "cli/commands.hpp"
#include "cli/config.hpp"
#include "cli/output.hpp"
#include "cli/svg.hpp"

#include <nlohmann/json.hpp>
#include <yaml-cpp/yaml.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

using namespace nfcrb;
using namespace nfcrb::cli;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string &name)
{
    const char *base = std::getenv("NFCRB_TEST_TMP");
    const fs::path dir = fs::path(base ? base : fs::temp_directory_path().string()) / name;
    fs::remove_all(dir);
    return dir;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path &p)
{
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(slurp(p));
    std::string line;
    while (std::getline(in, line)) {
        std::vector<std::string> cells;
        std::string cell;
        std::istringstream ls(line);
        while (std::getline(ls, cell, ',')) {
            cells.push_back(cell);
        }
        if (!line.empty() && line.back() == ',') {
            cells.emplace_back();
        }
        rows.push_back(cells);
    }
    return rows;
}

std::size_t col(const std::vector<std::string> &header, const std::string &name)
{
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    FAIL("missing column " << name);
    return 0;
}

struct Run {
    int code;
    std::string out;
    std::string err;
};

// Small problem so every subcommand finishes in well under a second.
std::vector<std::string> small(const std::string &command, const fs::path &out)
{
    return {command,
            "--out",
            out.string(),
            "--seeds",
            "2",
            "--array.M",
            "32",
            "--ofdm.Ks_max",
            "16",
            "--combiner.N_RF",
            "8",
            "--combiner.N_RF_sweep",
            "4,8,16",
            "--ofdm.B_sweep_hz",
            "50e6,200e6,800e6",
            "--sweep.range_list_m",
            "2,5,20",
            "--sweep.mismatch_range_m",
            "2,5,20,50"};
}

Run run(std::vector<std::string> args, const std::vector<std::string> &extra = {})
{
    args.insert(args.end(), extra.begin(), extra.end());
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    return {code, out.str(), err.str()};
}

} // namespace

TEST_CASE("number formatting")
{
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(1.0 / 3.0) == "0.33333333333333331");
    CHECK(format_double(-2.0) == "-2");
    CHECK(format_double(std::numeric_limits<double>::infinity()).empty());
    CHECK(format_double(std::nan("")).empty());
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
    CHECK(json_number(1.5) == 1.5);
    CHECK(json_number(std::numeric_limits<double>::infinity()) == "inf");
    CHECK(json_number(-std::numeric_limits<double>::infinity()) == "-inf");
}

TEST_CASE("csv table")
{
    CsvTable t({"name", "value", "count"});
    t.add_row({std::string("a,b"), 0.5, std::int64_t{3}});
    t.add_row({std::string("say \"hi\""), std::numeric_limits<double>::infinity(), std::int64_t{-1}});
    CHECK(t.rows() == 2);
    CHECK(t.str() == "name,value,count\n\"a,b\",0.5,3\n\"say \"\"hi\"\"\",,-1\n");
    CHECK_THROWS_AS(t.add_row({0.1}), std::invalid_argument);
}

TEST_CASE("config defaults")
{
    const ExperimentConfig c;
    CHECK(c.M == 256);
    CHECK(c.f_c_hz == 28e9);
    CHECK(c.B_sweep_hz.size() == 16);
    CHECK(c.B_sweep_hz.front() == 50e6);
    CHECK(c.B_sweep_hz.back() == 800e6);
    CHECK(c.noise_power() == doctest::Approx(0.1));
    CHECK(c.seed_list() == std::vector<std::uint64_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10});
    CHECK(c.combiner(3, 16).W() == Combiner::random(256, 16, 3).W());
    CHECK_NOTHROW(c.validate());
    const nlohmann::json j = c.to_json();
    CHECK(j["array"]["M"] == 256);
    CHECK(j["combiner"]["N_RF"] == 16);
}

TEST_CASE("yaml config and overrides")
{
    SUBCASE("dotted scalars, lists and path entries")
    {
        const ExperimentConfig c = load_config(std::nullopt, {{"ofdm.B_hz", "8e8"},
                                                              {"combiner.N_RF_sweep", "2,4"},
                                                              {"paths.1.theta_deg", "70"},
                                                              {"paths.1.r_m", ".inf"},
                                                              {"noise.N0", "0.5"},
                                                              {"combiner.seed", "0x10"}});
        CHECK(c.B_hz == 8e8);
        CHECK(c.N_RF_sweep == std::vector<int>{2, 4});
        REQUIRE(c.paths.size() == 2);
        CHECK(c.paths[0].theta_deg == 40.0);
        CHECK(c.paths[1].theta_deg == 70.0);
        CHECK(std::isinf(c.paths[1].r_m));
        CHECK(c.noise_power() == 0.5);
        CHECK(c.seed == 16);
        CHECK(c.scenario().paths.d() == 2);
        CHECK(c.scenario().paths.kappa(1) == 0.0);
        CHECK(c.scenario_at_range(9.0).paths.r(0) == 9.0);
    }
    SUBCASE("file with overrides on top")
    {
        const fs::path dir = scratch("yaml_cfg");
        fs::create_directories(dir);
        const fs::path file = dir / "c.yaml";
        std::ofstream(file) << "array:\n  M: 64\ncombiner:\n  seed_list: [5, 9]\n  N_RF: 4\n"
                               "paths:\n  - {theta_deg: 30, r_m: 3}\n";
        const ExperimentConfig a = load_config(file.string(), {});
        CHECK(a.M == 64);
        CHECK(a.seed_list() == std::vector<std::uint64_t>{5, 9});
        CHECK(a.paths[0].theta_deg == 30.0);
        const ExperimentConfig b = load_config(file.string(), {{"combiner.seed", "3"}, {"combiner.seeds", "2"}});
        CHECK(b.seed_list() == std::vector<std::uint64_t>{3, 4});
    }
    SUBCASE("rejections")
    {
        CHECK_THROWS_AS(load_config(std::nullopt, {{"array.Mx", "3"}}), UsageError);
        CHECK_THROWS_AS(load_config(std::nullopt, {{"array.M", "1"}}), UsageError);
        CHECK_THROWS_AS(load_config(std::nullopt, {{"combiner.N_RF", "300"}}), UsageError);
        CHECK_THROWS_AS(load_config(std::nullopt, {{"output.formats", "png"}}), UsageError);
        CHECK_THROWS_AS(load_config(std::nullopt, {{"combiner.kind", "dft"}}), UsageError);
        CHECK_THROWS_AS(load_config(std::nullopt, {{"ofdm.B_hz", "abc"}}), UsageError);
        CHECK_THROWS_AS(load_config(std::string("/nonexistent/c.yaml"), {}), UsageError);
    }
    SUBCASE("every advertised key is accepted")
    {
        for (const std::string &k : known_keys()) {
            YAML::Node root;
            CHECK_NOTHROW(apply_override(root, k, "1"));
        }
    }
}

TEST_CASE("shipped configs")
{
    const char *dir = std::getenv("NFCRB_CONFIG_DIR");
    if (dir == nullptr) {
        MESSAGE("NFCRB_CONFIG_DIR not set");
        return;
    }
    const ExperimentConfig def = load_config((fs::path(dir) / "default.yaml").string(), {});
    CHECK(def.to_json() == ExperimentConfig().to_json());
    const ExperimentConfig two = load_config((fs::path(dir) / "two_paths.yaml").string(), {});
    CHECK(two.paths.size() == 2);
    CHECK(two.seed_list().size() == 5);
}

TEST_CASE("svg helpers")
{
    const auto t = svg::linear_ticks(0.0, 1.0);
    CHECK(t.front() == 0.0);
    CHECK(t.back() == doctest::Approx(1.0));
    CHECK(t.size() >= 3);
    CHECK(svg::log_ticks(1.0, 1000.0) == std::vector<double>{1.0, 10.0, 100.0, 1000.0});
    CHECK(svg::colormap(0.0).size() == 7);
    CHECK(svg::colormap(0.0) != svg::colormap(1.0));

    // z = x on a 3 x 2 grid: level 0.5 crosses once between x = 0 and x = 1.
    const std::vector<double> x{0.0, 1.0, 2.0};
    const std::vector<double> y{0.0, 1.0};
    const std::vector<std::vector<double>> z{{0.0, 0.0}, {1.0, 1.0}, {2.0, 2.0}};
    const auto seg = svg::contour_segments(x, y, z, 0.5);
    REQUIRE(seg.size() == 1);
    CHECK(seg[0].x0 == doctest::Approx(0.5));
    CHECK(seg[0].x1 == doctest::Approx(0.5));
    CHECK(svg::contour_segments(x, y, z, 5.0).empty());

    svg::Figure fig;
    fig.title = "a < b";
    svg::LinePanel lp;
    lp.logx = true;
    lp.series.push_back({"s", {1.0, 10.0}, {2.0, 3.0}, {}, {}, "#000000", "", true});
    fig.panels.emplace_back(lp);
    fig.metadata_json = R"({"k": 1})";
    const std::string doc = svg::render(fig);
    CHECK(doc.find("<svg") != std::string::npos);
    CHECK(doc.find("a &lt; b") != std::string::npos);
    CHECK(doc.find("<metadata>") != std::string::npos);
    CHECK(doc.find("</svg>") != std::string::npos);
}

TEST_CASE("command line exit codes")
{
    CHECK(run({}).code == kExitUsage);
    CHECK(run({"bogus"}).code == kExitUsage);
    CHECK(run({"decompose", "--array.nope", "1"}).code == kExitUsage);
    CHECK(run({"decompose", "--format", "png"}).code == kExitUsage);
    CHECK(run({"decompose", "--config", "/nonexistent.yaml"}).code == kExitUsage);
    CHECK(run(small("decompose", "/proc/nfcrb_cannot_write")).code == kExitUsage);
    CHECK(run({"--help"}).code == kExitOk);

    const fs::path out = scratch("endfire");
    const Run endfire = run(small("decompose", out), {"--paths.0.theta_deg", "0"});
    CHECK(endfire.code == kExitNumerical);
    CHECK_FALSE(endfire.err.empty());
}

TEST_CASE("verify command")
{
    const fs::path out = scratch("verify");
    const Run ok = run({"verify", "--out", out.string()});
    CHECK(ok.code == kExitOk);
    CHECK(ok.out.find("FAIL") == std::string::npos);
    CHECK(fs::exists(out / "verify.csv"));

    const Run bad = run({"verify", "--out", out.string(), "--inject-fault"});
    CHECK(bad.code == kExitVerification);
    CHECK(bad.out.find("FAIL derivative_finite_difference") != std::string::npos);
}

TEST_CASE("outputs are deterministic and self-describing")
{
    const fs::path a = scratch("det_a");
    const fs::path b = scratch("det_b");
    REQUIRE(run(small("sweep-bw", a)).code == kExitOk);
    REQUIRE(run(small("sweep-bw", b), {"--workers", "3"}).code == kExitOk);
    for (const char *f : {"sweep_bw.csv", "sweep_bw_seeds.csv"}) {
        CHECK(slurp(a / f) == slurp(b / f));
    }
    CHECK(fs::exists(a / "sweep_bw.svg"));
    CHECK(fs::exists(a / "sweep_bw.json"));

    const auto meta = nlohmann::json::parse(slurp(a / "sweep_bw.meta.json"));
    CHECK(meta["seeds"] == nlohmann::json::array({1, 2}));
    CHECK(meta["config"]["array"]["M"] == 32);
    CHECK(meta["config"]["ofdm"]["Ks_max"] == 16);
    const auto j = nlohmann::json::parse(slurp(a / "sweep_bw.json"));
    CHECK(j["metadata"]["seeds"] == meta["seeds"]);
    CHECK(slurp(a / "sweep_bw.svg").find("\"seeds\"") != std::string::npos);

    const auto rows = read_csv(a / "sweep_bw_seeds.csv");
    CHECK(rows.size() == 1 + 3 * 2);
}

TEST_CASE("format selection")
{
    const fs::path out = scratch("csv_only");
    REQUIRE(run(small("decompose", out), {"--format", "csv"}).code == kExitOk);
    CHECK(fs::exists(out / "decompose.csv"));
    CHECK(fs::exists(out / "decompose.meta.json"));
    CHECK_FALSE(fs::exists(out / "decompose.json"));
    CHECK_FALSE(fs::exists(out / "decompose.svg"));
}

TEST_CASE("mismatch output")
{
    const fs::path out = scratch("mismatch");
    REQUIRE(run(small("mismatch", out), {"--sweep.mismatch_B_hz", "1e6,100e6"}).code == kExitOk);
    std::size_t expected = 0;
    for (double B : {1e6, 100e6}) {
        const OfdmGrid g = build_grid(28e9, 120e3, B, 16);
        std::vector<double> al = g.selected_alphas();
        const bool has_unit = std::find(al.begin(), al.end(), 1.0) != al.end();
        expected += (al.size() + (has_unit ? 0 : 1)) * 4;
    }
    const auto rows = read_csv(out / "mismatch.csv");
    REQUIRE(rows.size() == 1 + expected);
    const std::size_t ia = col(rows[0], "alpha");
    const std::size_t id = col(rows[0], "delta");
    int unit_rows = 0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (std::stod(rows[i][ia]) == 1.0) {
            ++unit_rows;
            CHECK(std::stod(rows[i][id]) == 0.0);
        } else {
            CHECK(std::stod(rows[i][id]) > 0.0);
        }
    }
    CHECK(unit_rows == 2 * 4);
    const auto j = nlohmann::json::parse(slurp(out / "mismatch.json"));
    CHECK(j["metadata"]["seeds"] == nlohmann::json::array({1}));
}

TEST_CASE("sweep-nrf with the identity combiner has no gap")
{
    const fs::path out = scratch("nrf_identity");
    REQUIRE(run(small("sweep-nrf", out), {"--combiner.kind", "identity", "--format", "csv"}).code == kExitOk);
    const auto rows = read_csv(out / "sweep_nrf.csv");
    REQUIRE(rows.size() > 1);
    const std::size_t g = col(rows[0], "gap_r_db");
    for (std::size_t i = 1; i < rows.size(); ++i) {
        CHECK(std::abs(std::stod(rows[i][g])) < 1e-9);
    }
}

TEST_CASE("sweep-nrf gap shrinks with more RF chains")
{
    const fs::path out = scratch("nrf_random");
    REQUIRE(run(small("sweep-nrf", out), {"--format", "csv,json"}).code == kExitOk);
    const auto j = nlohmann::json::parse(slurp(out / "sweep_nrf.json"));
    CHECK(j["gap_r_monotone_nonincreasing"] == nlohmann::json::array({true}));
}

TEST_CASE("far-field range in a sweep is written as an empty cell with a flag")
{
    const fs::path out = scratch("range_inf");
    REQUIRE(run(small("sweep-range", out), {"--sweep.range_list_m", "3,.inf", "--format", "csv"}).code == kExitOk);
    const auto rows = read_csv(out / "sweep_range.csv");
    REQUIRE(rows.size() == 3);
    const std::size_t ir = col(rows[0], "r_m");
    const std::size_t is = col(rows[0], "r_std_m_wb");
    const std::size_t fl = col(rows[0], "r_inf");
    CHECK(rows[1][fl] == "0");
    CHECK_FALSE(rows[1][is].empty());
    CHECK(rows[2][ir].empty());
    CHECK(rows[2][is].empty());
    CHECK(rows[2][fl] == "1");
}
