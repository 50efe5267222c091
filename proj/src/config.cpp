// SPDX-License-Identifier: Apache-2.0
//
// risdf: multi-RIS / decode-and-forward relay MISO downlink simulator and optimizer
// Copyright (C) 2026 The risdf authors
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

#include "risdf/config.hpp"

#include <json.hpp>

#include <cmath>
#include <fstream>
#include <sstream>

namespace risdf
{

using json = nlohmann::json;

double distance(const Point2 &a, const Point2 &b)
{
    return std::hypot(a[0] - b[0], a[1] - b[1]);
}

void SystemConfig::validate() const
{
    auto require = [](bool ok, const std::string &what)
    {
        if (!ok)
            throw ConfigError("invalid SystemConfig: " + what);
    };
    require(M >= 1 && N >= 1 && L >= 1 && J >= 1 && I >= 1 && K >= 1, "all counts must be >= 1");
    require(P_bs_max > 0.0 && P_r_max > 0.0, "power budgets must be > 0");
    require(sigma_user_sq > 0.0 && sigma_relay_sq > 0.0, "noise variances must be > 0");
    require(gamma_relay_th > 0.0, "gamma_relay_th must be > 0");
    require(B >= 1 && B <= 16, "B must be in [1, 16]");
    require(rician_kappa >= 0.0, "rician_kappa must be >= 0");
    require(beta0 > 0.0, "beta0 must be > 0");
    require(alpha_nlos > 0.0 && alpha_los > 0.0, "path-loss exponents must be > 0");
    require(D >= 1, "D must be >= 1");
    require(q >= 2 && q % 2 == 0, "q must be even and >= 2");
    require(static_cast<int>(rate_th_user.size()) == I, "rate_th_user must have I rows");
    for (const auto &row : rate_th_user)
    {
        require(static_cast<int>(row.size()) == K, "rate_th_user rows must have K entries");
        for (double v : row)
            require(v > 0.0, "user rate thresholds must be > 0");
    }
    require(static_cast<int>(rate_th_group.size()) == I, "rate_th_group must have I entries");
    for (double v : rate_th_group)
        require(v > 0.0, "group rate thresholds must be > 0");
}

void SystemConfig::set_uniform_thresholds(double user_th, double group_th)
{
    rate_th_user.assign(static_cast<std::size_t>(I), std::vector<double>(static_cast<std::size_t>(K), user_th));
    rate_th_group.assign(static_cast<std::size_t>(I), group_th);
}

void SystemConfig::resize_users(int new_k)
{
    if (new_k < 1)
        throw ConfigError("invalid SystemConfig: K must be >= 1");
    for (auto &row : rate_th_user)
    {
        double fill = row.empty() ? 1.0 : row.front();
        row.resize(static_cast<std::size_t>(new_k), fill);
    }
    K = new_k;
}

SystemConfig SystemConfig::paper_defaults()
{
    SystemConfig cfg;
    cfg.set_uniform_thresholds(1.0, 1.0);
    return cfg;
}

SystemConfig SystemConfig::desk_defaults()
{
    SystemConfig cfg;
    cfg.M = 4;
    cfg.N = 8;
    cfg.L = 2;
    cfg.J = 2;
    cfg.I = 2;
    cfg.K = 2;
    cfg.B = 2;
    cfg.q = 32;
    cfg.D = 2;
    cfg.alpha_nlos = 2.5;
    cfg.set_uniform_thresholds(1.0, 1.0);
    return cfg;
}

// ---------- topology ----------

void NetworkTopology::validate(const SystemConfig &cfg) const
{
    auto require = [](bool ok, const std::string &what)
    {
        if (!ok)
            throw ConfigError("invalid NetworkTopology: " + what);
    };
    require(static_cast<int>(ris_pos.size()) == cfg.I, "ris_pos must have I entries");
    require(static_cast<int>(group_center.size()) == cfg.I, "group_center must have I entries");
    require(static_cast<int>(relay_pos.size()) == cfg.J, "relay_pos must have J entries");
    require(std::isfinite(group_radius) && group_radius > 0.0, "group_radius must be > 0");

    std::vector<Point2> nodes{bs_pos};
    nodes.insert(nodes.end(), ris_pos.begin(), ris_pos.end());
    nodes.insert(nodes.end(), relay_pos.begin(), relay_pos.end());
    nodes.insert(nodes.end(), group_center.begin(), group_center.end());
    for (const auto &p : nodes)
        require(std::isfinite(p[0]) && std::isfinite(p[1]), "positions must be finite");
    for (std::size_t a = 0; a < nodes.size(); ++a)
        for (std::size_t b = a + 1; b < nodes.size(); ++b)
            require(distance(nodes[a], nodes[b]) > 0.0, "named nodes must not coincide");
}

NetworkTopology NetworkTopology::location_preset(int index)
{
    NetworkTopology t;
    t.bs_pos = {0.0, 0.0};
    t.group_radius = 10.0;
    switch (index)
    {
    case 1:
        t.ris_pos = {{50.0, 100.0}, {50.0, -80.0}};
        t.relay_pos = {{100.0, -10.0}, {80.0, 25.0}};
        t.group_center = {{200.0, 75.0}, {200.0, 10.0}};
        break;
    case 2:
        t.ris_pos = {{75.0, 100.0}, {75.0, -80.0}};
        t.relay_pos = {{100.0, -10.0}, {80.0, 25.0}};
        t.group_center = {{200.0, 75.0}, {200.0, 10.0}};
        break;
    case 3:
        t.ris_pos = {{150.0, 100.0}, {150.0, -80.0}};
        t.relay_pos = {{300.0, -10.0}, {240.0, 25.0}};
        t.group_center = {{600.0, 75.0}, {600.0, 10.0}};
        break;
    case 4:
        t.ris_pos = {{225.0, 100.0}, {225.0, -80.0}};
        t.relay_pos = {{300.0, -10.0}, {240.0, 25.0}};
        t.group_center = {{600.0, 75.0}, {600.0, 10.0}};
        break;
    default:
        throw ConfigError("unknown location preset Loc" + std::to_string(index));
    }
    return t;
}

NetworkTopology NetworkTopology::for_config(const SystemConfig &cfg, int preset)
{
    NetworkTopology t = location_preset(preset);
    // Extra groups/relays are spread along y beyond the preset nodes.
    auto fit = [](std::vector<Point2> &v, int n, Point2 step)
    {
        const std::size_t base = v.size();
        for (int idx = static_cast<int>(base); idx < n; ++idx)
        {
            Point2 p = v[static_cast<std::size_t>(idx) % base];
            const double shift = static_cast<double>(idx / static_cast<int>(base));
            v.push_back({p[0] + step[0] * shift, p[1] + step[1] * shift});
        }
        v.resize(static_cast<std::size_t>(n));
    };
    fit(t.ris_pos, cfg.I, {0.0, 60.0});
    fit(t.group_center, cfg.I, {0.0, 60.0});
    fit(t.relay_pos, cfg.J, {0.0, 45.0});
    return t;
}

// ---------- JSON ----------

namespace
{

template <typename T>
void read_opt(const json &j, const char *key, T &out)
{
    if (j.contains(key))
        out = j.at(key).get<T>();
}

Point2 read_point(const json &j, const std::string &what)
{
    if (!j.is_array() || j.size() != 2)
        throw ConfigError("config: '" + what + "' must be a [x, y] pair");
    return {j[0].get<double>(), j[1].get<double>()};
}

std::vector<Point2> read_points(const json &j, const std::string &what)
{
    if (!j.is_array())
        throw ConfigError("config: '" + what + "' must be a list of [x, y] pairs");
    std::vector<Point2> out;
    for (const auto &p : j)
        out.push_back(read_point(p, what));
    return out;
}

} // namespace

ScenarioConfig parse_scenario(const std::string &json_text)
{
    json root;
    try
    {
        root = json::parse(json_text);
    }
    catch (const json::parse_error &e)
    {
        throw ConfigError(std::string("config: parse error: ") + e.what());
    }

    ScenarioConfig sc;
    std::string base = root.value("base", std::string("desk"));
    if (base == "desk")
        sc.system = SystemConfig::desk_defaults();
    else if (base == "paper")
        sc.system = SystemConfig::paper_defaults();
    else
        throw ConfigError("config: unknown base '" + base + "' (expected desk|paper)");

    try
    {
        if (root.contains("system"))
        {
            const json &s = root.at("system");
            SystemConfig &c = sc.system;
            read_opt(s, "M", c.M);
            read_opt(s, "N", c.N);
            read_opt(s, "L", c.L);
            read_opt(s, "J", c.J);
            read_opt(s, "I", c.I);
            read_opt(s, "K", c.K);
            read_opt(s, "P_bs_max", c.P_bs_max);
            read_opt(s, "P_r_max", c.P_r_max);
            read_opt(s, "sigma_user_sq", c.sigma_user_sq);
            read_opt(s, "sigma_relay_sq", c.sigma_relay_sq);
            read_opt(s, "gamma_relay_th", c.gamma_relay_th);
            read_opt(s, "B", c.B);
            read_opt(s, "rician_kappa", c.rician_kappa);
            read_opt(s, "beta0", c.beta0);
            read_opt(s, "alpha_nlos", c.alpha_nlos);
            read_opt(s, "alpha_los", c.alpha_los);
            read_opt(s, "D", c.D);
            read_opt(s, "q", c.q);
            read_opt(s, "seed", c.seed);
            read_opt(s, "noiseless_sinr", c.noiseless_sinr);
            read_opt(s, "half_duplex_prelog", c.half_duplex_prelog);
            read_opt(s, "freeze_theta1", c.freeze_theta1);
            read_opt(s, "freeze_theta2", c.freeze_theta2);

            // Thresholds: scalar broadcast or explicit tables.
            double user_fill = c.rate_th_user.empty() || c.rate_th_user[0].empty() ? 1.0 : c.rate_th_user[0][0];
            double group_fill = c.rate_th_group.empty() ? 1.0 : c.rate_th_group[0];
            c.set_uniform_thresholds(user_fill, group_fill);
            if (s.contains("rate_th_user"))
            {
                const json &t = s.at("rate_th_user");
                if (t.is_number())
                    c.set_uniform_thresholds(t.get<double>(), c.rate_th_group[0]);
                else
                    c.rate_th_user = t.get<std::vector<std::vector<double>>>();
            }
            if (s.contains("rate_th_group"))
            {
                const json &t = s.at("rate_th_group");
                if (t.is_number())
                    c.rate_th_group.assign(static_cast<std::size_t>(c.I), t.get<double>());
                else
                    c.rate_th_group = t.get<std::vector<double>>();
            }
        }

        int preset = 1;
        json topo = root.contains("topology") ? root.at("topology") : json::object();
        read_opt(topo, "preset", preset);
        sc.topology = NetworkTopology::for_config(sc.system, preset);
        if (topo.contains("bs_pos"))
            sc.topology.bs_pos = read_point(topo.at("bs_pos"), "bs_pos");
        if (topo.contains("ris_pos"))
            sc.topology.ris_pos = read_points(topo.at("ris_pos"), "ris_pos");
        if (topo.contains("relay_pos"))
            sc.topology.relay_pos = read_points(topo.at("relay_pos"), "relay_pos");
        if (topo.contains("group_center"))
            sc.topology.group_center = read_points(topo.at("group_center"), "group_center");
        read_opt(topo, "group_radius", sc.topology.group_radius);
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("config: bad value: ") + e.what());
    }

    sc.system.validate();
    sc.topology.validate(sc.system);
    return sc;
}

ScenarioConfig load_scenario(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_scenario(ss.str());
}

std::string scenario_to_json(const ScenarioConfig &sc)
{
    const SystemConfig &c = sc.system;
    json s = {
        {"M", c.M},
        {"N", c.N},
        {"L", c.L},
        {"J", c.J},
        {"I", c.I},
        {"K", c.K},
        {"P_bs_max", c.P_bs_max},
        {"P_r_max", c.P_r_max},
        {"sigma_user_sq", c.sigma_user_sq},
        {"sigma_relay_sq", c.sigma_relay_sq},
        {"gamma_relay_th", c.gamma_relay_th},
        {"B", c.B},
        {"rate_th_user", c.rate_th_user},
        {"rate_th_group", c.rate_th_group},
        {"rician_kappa", c.rician_kappa},
        {"beta0", c.beta0},
        {"alpha_nlos", c.alpha_nlos},
        {"alpha_los", c.alpha_los},
        {"D", c.D},
        {"q", c.q},
        {"seed", c.seed},
        {"noiseless_sinr", c.noiseless_sinr},
        {"half_duplex_prelog", c.half_duplex_prelog},
        {"freeze_theta1", c.freeze_theta1},
        {"freeze_theta2", c.freeze_theta2},
    };
    auto pts = [](const std::vector<Point2> &v)
    {
        json a = json::array();
        for (const auto &p : v)
            a.push_back({p[0], p[1]});
        return a;
    };
    json t = {
        {"bs_pos", {sc.topology.bs_pos[0], sc.topology.bs_pos[1]}},
        {"ris_pos", pts(sc.topology.ris_pos)},
        {"relay_pos", pts(sc.topology.relay_pos)},
        {"group_center", pts(sc.topology.group_center)},
        {"group_radius", sc.topology.group_radius},
    };
    json root = {{"system", s}, {"topology", t}};
    return root.dump(2);
}

void save_scenario(const ScenarioConfig &scenario, const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError("config: cannot write '" + path + "'");
    out << scenario_to_json(scenario) << "\n";
}

} // namespace risdf
