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

#include "cli/config.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>

namespace nfcrb::cli {

namespace {

const std::map<std::string, std::set<std::string>> &schema()
{
    static const std::map<std::string, std::set<std::string>> s{
        {"array", {"M", "f_c_hz"}},
        {"ofdm", {"delta_f_hz", "B_hz", "B_sweep_hz", "Ks_max"}},
        {"noise", {"snr_db", "N0"}},
        {"combiner", {"kind", "N_RF", "N_RF_sweep", "seed", "seeds", "seed_list"}},
        {"snapshots", {"N"}},
        {"sweep", {"range_list_m", "mismatch_B_hz", "mismatch_range_m", "ebrd_m"}},
        {"output", {"dir", "formats"}},
        {"run", {"workers"}},
    };
    return s;
}

const std::set<std::string> kPathKeys{"theta_deg", "r_m", "p"};

std::string describe(const YAML::Node &n)
{
    if (n.IsScalar()) {
        return "'" + n.Scalar() + "'";
    }
    return n.IsSequence() ? "<list>" : "<map>";
}

double as_double(const YAML::Node &n, const std::string &key)
{
    if (n.IsScalar()) {
        try {
            return n.as<double>();
        } catch (const YAML::Exception &) {
        }
    }
    throw UsageError("config key '" + key + "': expected a number, got " + describe(n));
}

int as_int(const YAML::Node &n, const std::string &key)
{
    const double v = as_double(n, key);
    if (v != std::floor(v) || std::abs(v) > 1e9) {
        throw UsageError("config key '" + key + "': expected an integer, got " + describe(n));
    }
    return static_cast<int>(v);
}

std::uint64_t parse_u64(const std::string &text, const std::string &key)
{
    std::string_view sv(text);
    int base = 10;
    if (sv.size() > 2 && sv[0] == '0' && (sv[1] == 'x' || sv[1] == 'X')) {
        sv.remove_prefix(2);
        base = 16;
    }
    std::uint64_t v = 0;
    const auto [ptr, ec] = std::from_chars(sv.data(), sv.data() + sv.size(), v, base);
    if (ec != std::errc{} || ptr != sv.data() + sv.size() || sv.empty()) {
        throw UsageError("config key '" + key + "': expected an unsigned 64-bit integer, got '" +
                         text + "'");
    }
    return v;
}

std::uint64_t as_u64(const YAML::Node &n, const std::string &key)
{
    if (!n.IsScalar()) {
        throw UsageError("config key '" + key + "': expected an unsigned integer, got " +
                         describe(n));
    }
    return parse_u64(n.Scalar(), key);
}

std::string as_string(const YAML::Node &n, const std::string &key)
{
    if (!n.IsScalar()) {
        throw UsageError("config key '" + key + "': expected a string, got " + describe(n));
    }
    return n.Scalar();
}

template <typename T, typename Conv>
std::vector<T> as_list(const YAML::Node &n, const std::string &key, Conv conv)
{
    std::vector<T> out;
    if (n.IsSequence()) {
        for (std::size_t i = 0; i < n.size(); ++i) {
            out.push_back(conv(n[i], key + "." + std::to_string(i)));
        }
    } else {
        out.push_back(conv(n, key));
    }
    if (out.empty()) {
        throw UsageError("config key '" + key + "': list is empty");
    }
    return out;
}

void check_map(const YAML::Node &n, const std::string &where)
{
    if (!n.IsMap()) {
        throw UsageError("config section '" + where + "' must be a mapping");
    }
}

bool is_index(const std::string &s)
{
    return !s.empty() && std::all_of(s.begin(), s.end(), [](char ch) { return ch >= '0' && ch <= '9'; });
}

nlohmann::json num(double v)
{
    if (std::isfinite(v)) {
        return v;
    }
    return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
}

} // namespace

ExperimentConfig::ExperimentConfig()
    : B_sweep_hz(log_space(50e6, 800e6, 16)),
      range_list_m(log_space(1.0, 100.0, 20)),
      mismatch_range_m(log_space(1.0, 100.0, 60))
{
}

double ExperimentConfig::noise_power() const
{
    return N0 ? *N0 : noise_from_snr(snr_db, 1.0);
}

Scenario ExperimentConfig::scenario() const
{
    Scenario s;
    s.cfg = ArrayConfig::make(M, f_c_hz);
    std::vector<double> th, r, p;
    for (const auto &ps : paths) {
        th.push_back(ps.theta_deg * kPi / 180.0);
        r.push_back(ps.r_m);
        p.push_back(ps.p);
    }
    s.paths = PathSet::make(s.cfg, th, r, p);
    s.N0 = noise_power();
    s.N = N;
    s.delta_f = delta_f_hz;
    s.Ks_max = Ks_max;
    return s;
}

Scenario ExperimentConfig::scenario_at_range(double range_m) const
{
    ExperimentConfig c = *this;
    c.paths.front().r_m = range_m;
    return c.scenario();
}

Combiner ExperimentConfig::combiner(std::uint64_t seed_value, int n_rf) const
{
    if (combiner_kind == "identity") {
        return Combiner::identity(M);
    }
    return Combiner::random(M, n_rf, seed_value);
}

std::vector<std::uint64_t> ExperimentConfig::seed_list() const
{
    if (!seed_list_override.empty()) {
        return seed_list_override;
    }
    return seed_sequence(seed, seeds);
}

bool ExperimentConfig::wants(const std::string &format) const
{
    return std::find(formats.begin(), formats.end(), format) != formats.end();
}

nlohmann::json ExperimentConfig::to_json() const
{
    nlohmann::json j;
    j["array"] = {{"M", M}, {"f_c_hz", f_c_hz}};
    j["ofdm"] = {{"delta_f_hz", delta_f_hz}, {"B_hz", B_hz}, {"B_sweep_hz", B_sweep_hz}, {"Ks_max", Ks_max}};
    nlohmann::json ps = nlohmann::json::array();
    for (const auto &p : paths) {
        ps.push_back({{"theta_deg", num(p.theta_deg)}, {"r_m", num(p.r_m)}, {"p", num(p.p)}});
    }
    j["paths"] = ps;
    j["noise"] = {{"snr_db", snr_db}, {"N0", noise_power()}, {"N0_from", N0 ? "N0" : "snr_db"}};
    j["combiner"] = {{"kind", combiner_kind}, {"N_RF", N_RF},       {"N_RF_sweep", N_RF_sweep},
                     {"seed", seed},          {"seeds", seeds},     {"seed_list", seed_list()}};
    j["snapshots"] = {{"N", N}};
    j["sweep"] = {{"range_list_m", range_list_m},
                  {"mismatch_B_hz", mismatch_B_hz},
                  {"mismatch_range_m", mismatch_range_m},
                  {"ebrd_m", ebrd_m ? nlohmann::json(*ebrd_m) : nlohmann::json(nullptr)}};
    j["output"] = {{"dir", out_dir}, {"formats", formats}};
    j["run"] = {{"workers", workers}};
    return j;
}

void ExperimentConfig::validate() const
{
    auto fail = [](const std::string &msg) { throw UsageError("invalid config: " + msg); };
    if (M < 2) fail("array.M must be >= 2");
    if (!(f_c_hz > 0.0) || !std::isfinite(f_c_hz)) fail("array.f_c_hz must be positive");
    if (!(delta_f_hz > 0.0) || !std::isfinite(delta_f_hz)) fail("ofdm.delta_f_hz must be positive");
    if (!(B_hz >= delta_f_hz)) fail("ofdm.B_hz must be >= ofdm.delta_f_hz");
    for (double b : B_sweep_hz) {
        if (!(b >= delta_f_hz)) fail("ofdm.B_sweep_hz entries must be >= ofdm.delta_f_hz");
    }
    for (double b : mismatch_B_hz) {
        if (!(b >= delta_f_hz)) fail("sweep.mismatch_B_hz entries must be >= ofdm.delta_f_hz");
    }
    if (Ks_max < 1) fail("ofdm.Ks_max must be >= 1");
    if (paths.empty()) fail("at least one path is required");
    for (const auto &p : paths) {
        if (!std::isfinite(p.theta_deg)) fail("paths.theta_deg must be finite");
        if (!(p.r_m > 0.0)) fail("paths.r_m must be positive (inf allowed)");
        if (!(p.p >= 0.0) || !std::isfinite(p.p)) fail("paths.p must be finite and >= 0");
    }
    if (!std::isfinite(snr_db)) fail("noise.snr_db must be finite");
    if (N0 && !(*N0 > 0.0 && std::isfinite(*N0))) fail("noise.N0 must be positive");
    if (combiner_kind != "random" && combiner_kind != "identity") {
        fail("combiner.kind must be 'random' or 'identity'");
    }
    if (N_RF < 1 || N_RF > M) fail("combiner.N_RF must be in [1, M]");
    for (int n : N_RF_sweep) {
        if (n < 1 || n > M) fail("combiner.N_RF_sweep entries must be in [1, M]");
    }
    if (seeds < 1) fail("combiner.seeds must be >= 1");
    if (N < 1) fail("snapshots.N must be >= 1");
    for (double r : range_list_m) {
        if (!(r > 0.0)) fail("sweep.range_list_m entries must be positive");
    }
    for (double r : mismatch_range_m) {
        if (!(r > 0.0) || !std::isfinite(r)) fail("sweep.mismatch_range_m entries must be positive");
    }
    if (ebrd_m && !(*ebrd_m > 0.0)) fail("sweep.ebrd_m must be positive");
    if (formats.empty()) fail("output.formats must not be empty");
    for (const auto &f : formats) {
        if (f != "csv" && f != "json" && f != "svg") fail("unknown output format '" + f + "'");
    }
    if (workers < 1) fail("run.workers must be >= 1");
}

ExperimentConfig config_from_yaml(const YAML::Node &root)
{
    ExperimentConfig c;
    if (!root || root.IsNull()) {
        return c;
    }
    check_map(root, "<root>");
    for (const auto &kv : root) {
        const std::string section = kv.first.as<std::string>();
        const YAML::Node &node = kv.second;
        if (section == "paths") {
            if (!node.IsSequence() || node.size() == 0) {
                throw UsageError("config key 'paths' must be a non-empty list");
            }
            c.paths.clear();
            for (std::size_t i = 0; i < node.size(); ++i) {
                const std::string where = "paths." + std::to_string(i);
                PathSpec ps;
                if (!node[i].IsNull()) {
                    check_map(node[i], where);
                }
                for (const auto &f : node[i]) {
                    const std::string key = f.first.as<std::string>();
                    if (!kPathKeys.count(key)) {
                        throw UsageError("unknown config key '" + where + "." + key + "'");
                    }
                    const double v = as_double(f.second, where + "." + key);
                    (key == "theta_deg" ? ps.theta_deg : key == "r_m" ? ps.r_m : ps.p) = v;
                }
                c.paths.push_back(ps);
            }
            continue;
        }
        const auto sit = schema().find(section);
        if (sit == schema().end()) {
            throw UsageError("unknown config section '" + section + "'");
        }
        if (node.IsNull()) {
            continue;
        }
        check_map(node, section);
        for (const auto &f : node) {
            const std::string key = f.first.as<std::string>();
            const std::string full = section + "." + key;
            const YAML::Node &v = f.second;
            if (!sit->second.count(key)) {
                throw UsageError("unknown config key '" + full + "'");
            }
            if (full == "array.M") c.M = as_int(v, full);
            else if (full == "array.f_c_hz") c.f_c_hz = as_double(v, full);
            else if (full == "ofdm.delta_f_hz") c.delta_f_hz = as_double(v, full);
            else if (full == "ofdm.B_hz") c.B_hz = as_double(v, full);
            else if (full == "ofdm.B_sweep_hz") c.B_sweep_hz = as_list<double>(v, full, as_double);
            else if (full == "ofdm.Ks_max") c.Ks_max = as_int(v, full);
            else if (full == "noise.snr_db") c.snr_db = as_double(v, full);
            else if (full == "noise.N0") {
                if (v.IsNull()) c.N0.reset();
                else c.N0 = as_double(v, full);
            }
            else if (full == "combiner.kind") c.combiner_kind = as_string(v, full);
            else if (full == "combiner.N_RF") c.N_RF = as_int(v, full);
            else if (full == "combiner.N_RF_sweep") c.N_RF_sweep = as_list<int>(v, full, as_int);
            else if (full == "combiner.seed") c.seed = as_u64(v, full);
            else if (full == "combiner.seeds") c.seeds = as_int(v, full);
            else if (full == "combiner.seed_list") {
                if (v.IsNull()) c.seed_list_override.clear();
                else c.seed_list_override = as_list<std::uint64_t>(v, full, as_u64);
            }
            else if (full == "snapshots.N") c.N = as_int(v, full);
            else if (full == "sweep.range_list_m") c.range_list_m = as_list<double>(v, full, as_double);
            else if (full == "sweep.mismatch_B_hz") c.mismatch_B_hz = as_list<double>(v, full, as_double);
            else if (full == "sweep.mismatch_range_m") c.mismatch_range_m = as_list<double>(v, full, as_double);
            else if (full == "sweep.ebrd_m") {
                if (v.IsNull()) c.ebrd_m.reset();
                else c.ebrd_m = as_double(v, full);
            }
            else if (full == "output.dir") c.out_dir = as_string(v, full);
            else if (full == "output.formats") c.formats = as_list<std::string>(v, full, as_string);
            else if (full == "run.workers") c.workers = as_int(v, full);
        }
    }
    return c;
}

void apply_override(YAML::Node &root, const std::string &dotted, const std::string &value)
{
    std::vector<std::string> parts;
    std::size_t start = 0;
    while (true) {
        const std::size_t dot = dotted.find('.', start);
        parts.push_back(dotted.substr(start, dot - start));
        if (dot == std::string::npos) break;
        start = dot + 1;
    }
    for (const auto &p : parts) {
        if (p.empty()) {
            throw UsageError("malformed override key '" + dotted + "'");
        }
    }
    if (value.empty()) {
        throw UsageError("override '" + dotted + "' needs a value");
    }

    YAML::Node parsed;
    const bool bare_list = value.find(',') != std::string::npos && value.front() != '[';
    try {
        parsed = YAML::Load(bare_list ? "[" + value + "]" : value);
    } catch (const YAML::Exception &e) {
        throw UsageError("override '" + dotted + "': cannot parse value '" + value + "'");
    }

    if (!root || !root.IsMap()) {
        root = YAML::Node(YAML::NodeType::Map);
    }
    YAML::Node cur = root;
    for (std::size_t i = 0; i + 1 < parts.size(); ++i) {
        const std::string &seg = parts[i];
        YAML::Node next;
        if (is_index(seg)) {
            if (!cur.IsSequence()) {
                if (cur.IsDefined() && !cur.IsNull()) {
                    throw UsageError("override '" + dotted + "': '" + seg + "' indexes a non-list");
                }
                cur = YAML::Node(YAML::NodeType::Sequence);
            }
            const std::size_t idx = std::stoul(seg);
            while (cur.size() <= idx) {
                cur.push_back(YAML::Node(YAML::NodeType::Map));
            }
            next.reset(cur[idx]);
        } else {
            if (!cur.IsMap()) {
                if (cur.IsDefined() && !cur.IsNull()) {
                    throw UsageError("override '" + dotted + "': '" + seg + "' is not a section");
                }
                cur = YAML::Node(YAML::NodeType::Map);
            }
            next.reset(cur[seg]);
        }
        cur.reset(next);
    }
    const std::string &leaf = parts.back();
    if (is_index(leaf)) {
        if (!cur.IsSequence()) {
            throw UsageError("override '" + dotted + "': '" + leaf + "' indexes a non-list");
        }
        const std::size_t idx = std::stoul(leaf);
        if (idx >= cur.size()) {
            throw UsageError("override '" + dotted + "': index out of range");
        }
        cur[idx] = parsed;
    } else {
        if (cur.IsDefined() && !cur.IsNull() && !cur.IsMap()) {
            throw UsageError("override '" + dotted + "': parent is not a section");
        }
        cur[leaf] = parsed;
    }
}

ExperimentConfig load_config(const std::optional<std::string> &path,
                             const std::vector<std::pair<std::string, std::string>> &overrides)
{
    YAML::Node root;
    if (path) {
        std::ifstream in(*path);
        if (!in) {
            throw UsageError("cannot read config file '" + *path + "'");
        }
        try {
            root = YAML::Load(in);
        } catch (const YAML::Exception &e) {
            throw UsageError("config file '" + *path + "': " + e.what());
        }
    }
    for (const auto &[key, value] : overrides) {
        if (key == "combiner.seed" || key == "combiner.seeds") {
            if (root.IsMap() && root["combiner"].IsMap()) {
                root["combiner"].remove("seed_list");
            }
        }
        apply_override(root, key, value);
    }
    ExperimentConfig c = config_from_yaml(root);
    c.validate();
    return c;
}

const std::vector<std::string> &known_keys()
{
    static const std::vector<std::string> keys = [] {
        std::vector<std::string> k;
        for (const auto &[section, fields] : schema()) {
            for (const auto &f : fields) {
                k.push_back(section + "." + f);
            }
        }
        return k;
    }();
    return keys;
}

} // namespace nfcrb::cli
