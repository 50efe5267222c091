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


#include "risdf/experiments.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

using namespace risdf;
namespace fs = std::filesystem;
using doctest::Approx;

namespace
{

fs::path fresh_dir(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / name;
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

std::vector<std::string> lines(const std::string &text)
{
    std::vector<std::string> out;
    std::istringstream in(text);
    std::string l;
    while (std::getline(in, l))
        out.push_back(l);
    return out;
}

ScenarioConfig tiny_scenario()
{
    return parse_scenario(R"({"system": {"M": 2, "N": 2, "L": 2, "I": 1, "K": 1, "B": 1, "q": 8, "D": 1}})");
}

const char *kSmokeSpec = R"({
    "name": "smoke",
    "scenario": {"system": {"M": 2, "N": 2, "L": 2, "I": 1, "K": 1, "B": 1, "q": 8, "D": 1}},
    "methods": ["jofd_tg", "jofd_random"],
    "sweep": {"variable": "lambda", "values": [0, 100]},
    "num_train": 16, "num_test": 4, "seed": 2,
    "train": {"epochs": 1, "batch_size": 8}
})";

} // namespace

TEST_CASE("gen_data is deterministic and self-describing")
{
    const ScenarioConfig sc = tiny_scenario();
    const fs::path a = fresh_dir("risdf_gd_a"), b = fresh_dir("risdf_gd_b");
    const DataManifest m = gen_data(sc, a.string(), 6, 3, 4);
    gen_data(sc, b.string(), 6, 3, 4);
    CHECK(slurp(a / "train.bin") == slurp(b / "train.bin"));
    CHECK(slurp(a / "test.bin") == slurp(b / "test.bin"));
    CHECK(slurp(a / "manifest.json") == slurp(b / "manifest.json"));
    const DataManifest back = read_manifest((a / "manifest.json").string());
    CHECK(back.num_train == 6);
    CHECK(back.num_test == 3);
    CHECK(back.seed == 4);
    CHECK(back.config_hash == m.config_hash);
    CHECK(back.config_hash == config_hash(load_scenario((a / "scenario.json").string())));
    const auto test = load_dataset((a / "test.bin").string(), sc.system);
    REQUIRE(test.size() == 3);
    for (const auto &r : test)
        CHECK_NOTHROW(r.validate(sc.system));
    CHECK_THROWS_AS(gen_data(sc, a.string(), 0, 3, 4), DomainError);
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("config hash tracks the scenario")
{
    ScenarioConfig sc = tiny_scenario();
    const std::string h = config_hash(sc);
    CHECK(h.size() == 16);
    sc.system.sigma_user_sq *= 2.0;
    CHECK(config_hash(sc) != h);
}

TEST_CASE("split shares one dataset")
{
    const ScenarioConfig sc = tiny_scenario();
    const DataSplit s = make_split(sc, 5, 2, 3);
    const auto all = generate_dataset(sc.system, sc.topology, 3, 7);
    CHECK(s.train.size() == 5);
    CHECK(s.test.front() == all[5]);
}

TEST_CASE("experiment spec parsing")
{
    const ExperimentSpec spec = parse_experiment_spec(kSmokeSpec);
    CHECK(spec.name == "smoke");
    CHECK(spec.methods.size() == 2);
    CHECK(spec.sweep_values == std::vector<double>{0.0, 100.0});
    CHECK(spec.scenario.system.M == 2);
    CHECK(spec.options.train.epochs == 1);
    CHECK(spec.num_train == 16);

    CHECK_THROWS_AS(parse_experiment_spec(R"({"methods": []})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec(R"({"methods": ["magic"]})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec(R"({"methods": ["oracle"], "sweep": {"variable": "M", "values": []}})"),
                    ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec(R"({"methods": ["oracle"], "config": "missing.json"})"), ConfigError);
    CHECK_THROWS_AS(parse_experiment_spec("not json"), ConfigError);
}

TEST_CASE("sweep values map onto the scenario and training options")
{
    const ScenarioConfig base = parse_scenario("{}");
    MethodOptions opt;
    CHECK(apply_sweep_value(base, "M", 6, opt).system.M == 6);
    CHECK(apply_sweep_value(base, "K", 3, opt).system.rate_th_user[1].size() == 3);
    CHECK(apply_sweep_value(base, "location", 3, opt).topology.ris_pos[0] == Point2{150.0, 100.0});
    apply_sweep_value(base, "lambda", 2000, opt);
    CHECK(opt.train.lambda == 2000.0);
    CHECK_THROWS_AS(apply_sweep_value(base, "N", 2.5, opt), ConfigError);
    CHECK_THROWS_AS(apply_sweep_value(base, "location", 7, opt), ConfigError);
    CHECK_THROWS_AS(apply_sweep_value(base, "sigma", 1, opt), ConfigError);
}

TEST_CASE("every method runs and reports one row per test sample")
{
    const ScenarioConfig sc = tiny_scenario();
    const DataSplit data = make_split(sc, 16, 3, 5);
    MethodOptions opt;
    opt.train.epochs = 1;
    opt.train.batch_size = 8;
    opt.pso.particles = 8;
    opt.pso.iterations = 5;
    for (const auto &m : method_names())
    {
        const MethodResult r = run_method(m, sc.system, data, opt);
        CHECK(r.reports.size() == 3);
        CHECK(r.summary.samples == 3);
        CHECK(r.history.has_value() == (m == "jofd_tg" || m == "jogd_tg" || m == "jocd_tg" || m == "jofd_dnn"));
    }
    CHECK_THROWS_AS(run_method("nope", sc.system, data, opt), ConfigError);
}

TEST_CASE("sweep output is reproducible and the combined table is the union of points")
{
    ExperimentSpec spec = parse_experiment_spec(kSmokeSpec);
    const fs::path a = fresh_dir("risdf_sweep_a"), b = fresh_dir("risdf_sweep_b");
    spec.out_dir = a.string();
    const auto rows = run_sweep(spec);
    spec.out_dir = b.string();
    run_sweep(spec);
    CHECK(rows.size() == 4);
    for (const char *f : {"combined.csv", "point_0.csv", "point_1.csv", "history_1_jofd_tg.csv"})
        CHECK(slurp(a / f) == slurp(b / f));

    const auto combined = lines(slurp(a / "combined.csv"));
    CHECK(combined.front() == "method,sweep_variable,sweep_value,sum_rate,satisfaction_rate,decode_fraction,samples");
    CHECK(combined.size() == 5);
    // Each combined mean equals the mean over the matching per-point rows.
    for (const auto &row : rows)
    {
        const std::size_t point = row.value == 0.0 ? 0 : 1;
        const auto pl = lines(slurp(a / ("point_" + std::to_string(point) + ".csv")));
        double total = 0.0;
        std::set<std::string> samples;
        for (std::size_t l = 1; l < pl.size(); ++l)
        {
            std::vector<std::string> cells;
            std::stringstream ss(pl[l]);
            std::string cell;
            while (std::getline(ss, cell, ','))
                cells.push_back(cell);
            if (cells[0] != row.method)
                continue;
            total += std::stod(cells[7]);
            samples.insert(cells[1]);
        }
        CHECK(total / static_cast<double>(samples.size()) == Approx(row.summary.mean_sum_rate).epsilon(1e-8));
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("report renders one chart per sweep and is a pure function of the CSVs")
{
    const fs::path runs = fresh_dir("risdf_rep_runs"), out1 = fresh_dir("risdf_rep_1"), out2 = fresh_dir("risdf_rep_2");
    fs::create_directories(runs / "x");
    fs::create_directories(runs / "y");
    const std::string table = "method,sweep_variable,sweep_value,sum_rate,satisfaction_rate,decode_fraction,samples\n"
                              "a,lambda,0,1.5,0.5,1,4\na,lambda,10,2.5,0.75,1,4\nb,lambda,0,1,0.25,1,4\n";
    std::ofstream(runs / "x" / "combined.csv") << table;
    std::ofstream(runs / "y" / "combined.csv") << table;
    std::ofstream(runs / "x" / "history_0_a.csv") << "epoch,loss,sum_rate,satisfaction_rate\n1,5,1,0.5\n2,4,2,0.6\n";
    const ReportResult r = render_report(runs.string(), out1.string());
    render_report(runs.string(), out2.string());
    CHECK(r.sweep_charts == 2);
    CHECK(r.history_charts == 1);
    for (const auto &e : fs::directory_iterator(out1))
        CHECK(slurp(e.path()) == slurp(out2 / e.path().filename()));
    CHECK(lines(slurp(out1 / "summary.csv")).size() == 7);

    std::ofstream(runs / "y" / "combined.csv") << "method,sweep_variable,sweep_value,sum_rate\na,lambda,0,1\n";
    CHECK_THROWS_WITH_AS(render_report(runs.string(), out1.string()), doctest::Contains("satisfaction_rate"),
                         FormatError);
    CHECK_THROWS_AS(render_report((runs / "missing").string(), out1.string()), ConfigError);
    for (const auto &p : {runs, out1, out2})
        fs::remove_all(p);
}

TEST_CASE("cross-K table: one row per test K, same K retains everything")
{
    const ScenarioConfig sc = parse_scenario(R"({"system": {"M": 2, "N": 2, "L": 2, "B": 1, "q": 8, "D": 1}})");
    TrainConfig tc;
    tc.epochs = 1;
    tc.batch_size = 8;
    const auto rows = run_crossk(sc, 2, {2, 3}, 16, 3, 1, tc);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].test_k == 2);
    CHECK(rows[0].retention_pct == Approx(100.0));
    CHECK(rows[1].test_k == 3);
    std::ostringstream out;
    write_crossk_csv(out, rows);
    CHECK(lines(out.str()).front() == "test_k,sum_rate_cross,sum_rate_same,retention_pct");
    CHECK_THROWS_AS(run_crossk(sc, 2, {}, 16, 3, 1, tc), ConfigError);
}

TEST_CASE("metrics and summary CSV")
{
    const SystemConfig c = tiny_scenario().system;
    Rng rng(1);
    std::vector<RateReport> reports;
    for (const auto &real : testing::make_data(c, 3))
        reports.push_back(evaluate_strategy(real, testing::random_test_strategy(c, rng), c));
    std::ostringstream m, s;
    write_metrics_csv(m, reports);
    write_summary_csv(s, summarize(reports));
    CHECK(lines(m.str()).size() == 1 + 3 * static_cast<std::size_t>(c.num_users()));
    const auto sl = lines(s.str());
    CHECK(sl[0] == "metric,value");
    CHECK(sl[1] == "samples,3");
}
