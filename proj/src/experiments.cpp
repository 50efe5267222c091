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

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>

namespace risdf
{

using json = nlohmann::json;
namespace fs = std::filesystem;

namespace
{

std::ofstream open_out(const std::string &path)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write '" + path + "'");
    return out;
}

std::string read_text(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void log_line(std::ostream *log, const std::string &msg)
{
    if (log)
        *log << msg << std::endl;
}

std::string fmt(double v, int precision = 6)
{
    std::ostringstream s;
    s << std::setprecision(precision) << v;
    return s.str();
}

} // namespace

std::string config_hash(const ScenarioConfig &scenario)
{
    const std::string text = scenario_to_json(scenario);
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : text)
    {
        h ^= c;
        h *= 1099511628211ull;
    }
    std::ostringstream s;
    s << std::hex << std::setw(16) << std::setfill('0') << h;
    return s.str();
}

// ---------- datasets ----------

DataSplit make_split(const ScenarioConfig &scenario, std::size_t n_train, std::size_t n_test, std::uint64_t seed)
{
    std::vector<ChannelRealization> all = generate_dataset(scenario.system, scenario.topology, seed, n_train + n_test);
    DataSplit split;
    split.train.assign(std::make_move_iterator(all.begin()),
                       std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(n_train)));
    split.test.assign(std::make_move_iterator(all.begin() + static_cast<std::ptrdiff_t>(n_train)),
                      std::make_move_iterator(all.end()));
    return split;
}

DataManifest gen_data(const ScenarioConfig &scenario, const std::string &out_dir, std::size_t n_train,
                      std::size_t n_test, std::uint64_t seed)
{
    if (n_train == 0 || n_test == 0)
        throw DomainError("gen-data: train and test counts must be >= 1");
    fs::create_directories(out_dir);
    const DataSplit split = make_split(scenario, n_train, n_test, seed);
    DataManifest m;
    m.config_hash = config_hash(scenario);
    m.num_train = n_train;
    m.num_test = n_test;
    m.seed = seed;
    save_dataset(split.train, (fs::path(out_dir) / m.train_file).string());
    save_dataset(split.test, (fs::path(out_dir) / m.test_file).string());
    save_scenario(scenario, (fs::path(out_dir) / "scenario.json").string());
    json j = {{"config_hash", m.config_hash}, {"num_train", m.num_train}, {"num_test", m.num_test},
              {"seed", m.seed},               {"train_file", m.train_file}, {"test_file", m.test_file}};
    open_out((fs::path(out_dir) / "manifest.json").string()) << j.dump(2) << "\n";
    return m;
}

DataManifest read_manifest(const std::string &path)
{
    try
    {
        const json j = json::parse(read_text(path));
        DataManifest m;
        m.config_hash = j.at("config_hash").get<std::string>();
        m.num_train = j.at("num_train").get<std::size_t>();
        m.num_test = j.at("num_test").get<std::size_t>();
        m.seed = j.at("seed").get<std::uint64_t>();
        m.train_file = j.value("train_file", m.train_file);
        m.test_file = j.value("test_file", m.test_file);
        return m;
    }
    catch (const json::exception &e)
    {
        throw FormatError("manifest '" + path + "': " + e.what());
    }
}

// ---------- methods ----------

const std::vector<std::string> &method_names()
{
    static const std::vector<std::string> names = {"jofd_tg",  "jogd_tg",     "jocd_tg", "jofd_dnn",
                                                   "jofd_pso", "jofd_random", "oracle"};
    return names;
}

void check_method(const std::string &method)
{
    const auto &names = method_names();
    if (std::find(names.begin(), names.end(), method) == names.end())
        throw ConfigError("unknown method '" + method + "'");
}

GnnParams train_gnn(const SystemConfig &cfg, const std::vector<ChannelRealization> &train_set, const TrainConfig &tc,
                    std::uint64_t init_seed, TrainHistory *history, std::ostream *log)
{
    GnnParams params(cfg);
    params.init(init_seed);
    params.scale = fit_input_scale(train_set, cfg);
    TrainHistory h = train(params, train_set, cfg, tc,
                           [&](const EpochStats &e, const RVector &)
                           {
                               log_line(log, "  epoch " + std::to_string(e.epoch) + " loss " + fmt(e.loss) +
                                                 " sum_rate " + fmt(e.sum_rate) + " satisfaction " +
                                                 fmt(e.satisfaction_rate));
                           });
    if (history)
        *history = std::move(h);
    return params;
}

std::vector<RateReport> evaluate_gnn(const GnnParams &params, const std::vector<ChannelRealization> &data,
                                     const SystemConfig &cfg, Mode mode)
{
    std::vector<RateReport> out;
    out.reserve(data.size());
    for (const auto &r : data)
        out.push_back(forward(r, params, cfg, mode).report);
    return out;
}

MethodResult run_method(const std::string &method, const SystemConfig &cfg, const DataSplit &data,
                        const MethodOptions &opt)
{
    check_method(method);
    if (data.test.empty())
        throw DomainError("run_method: empty test set");
    MethodResult res;
    res.method = method;
    log_line(opt.log, "method " + method);

    if (method == "jofd_tg" || method == "jogd_tg" || method == "jocd_tg")
    {
        TrainConfig tc = opt.train;
        tc.loss_kind = method == "jofd_tg" ? LossKind::fine : method == "jogd_tg" ? LossKind::group : LossKind::coarse;
        TrainHistory h;
        const GnnParams params = train_gnn(cfg, data.train, tc, opt.seed, &h, opt.log);
        res.history = std::move(h);
        res.reports = evaluate_gnn(params, data.test, cfg, Mode::eval);
    }
    else if (method == "jofd_dnn")
    {
        TrainConfig tc = opt.train;
        tc.loss_kind = LossKind::fine;
        const int hidden = opt.dnn_hidden > 0 ? opt.dnn_hidden : flat_dnn_hidden_for(cfg, GnnParams(cfg).size());
        FlatDnn dnn(cfg, hidden);
        dnn.init(opt.seed);
        dnn.fit_scale(data.train);
        res.history = flat_dnn_train(dnn, data.train, cfg, tc,
                                     [&](const EpochStats &e, const RVector &)
                                     {
                                         log_line(opt.log, "  epoch " + std::to_string(e.epoch) + " loss " +
                                                               fmt(e.loss) + " sum_rate " + fmt(e.sum_rate));
                                     });
        for (const auto &r : data.test)
            res.reports.push_back(flat_dnn_forward(r, dnn, cfg, Mode::eval).report);
    }
    else if (method == "jofd_pso")
    {
        for (std::size_t t = 0; t < data.test.size(); ++t)
        {
            PsoConfig pc = opt.pso;
            pc.seed = opt.pso.seed + t;
            res.reports.push_back(pso_optimize(data.test[t], cfg, pc).report);
        }
    }
    else if (method == "jofd_random")
    {
        for (std::size_t t = 0; t < data.test.size(); ++t)
        {
            Rng rng(opt.seed, t);
            res.reports.push_back(evaluate_strategy(data.test[t], random_strategy(data.test[t], cfg, rng), cfg));
        }
    }
    else
    {
        for (const auto &r : data.test)
            res.reports.push_back(brute_force_oracle(r, cfg).report);
    }
    res.summary = summarize(res.reports);
    log_line(opt.log, "  " + method + ": sum_rate " + fmt(res.summary.mean_sum_rate) + " satisfaction " +
                          fmt(res.summary.satisfaction_rate));
    return res;
}

// ---------- CSV ----------

void write_metrics_csv(std::ostream &out, const std::vector<RateReport> &reports, const std::string &method)
{
    write_report_csv_header(out, !method.empty());
    for (std::size_t t = 0; t < reports.size(); ++t)
        write_report_csv_rows(out, reports[t], t, method);
}

void write_summary_csv(std::ostream &out, const EvalSummary &s)
{
    out << "metric,value\n" << std::setprecision(10);
    out << "samples," << s.samples << "\n";
    out << "mean_sum_rate," << s.mean_sum_rate << "\n";
    out << "satisfaction_rate," << s.satisfaction_rate << "\n";
    out << "decode_fraction," << s.decode_fraction << "\n";
}

// ---------- sweeps ----------

void ExperimentSpec::validate() const
{
    if (methods.empty())
        throw ConfigError("experiment: methods must be non-empty");
    for (const auto &m : methods)
        check_method(m);
    if (!sweep_variable.empty() && sweep_values.empty())
        throw ConfigError("experiment: sweep declared without values");
    if (num_train == 0 || num_test == 0)
        throw ConfigError("experiment: num_train and num_test must be >= 1");
    options.train.validate();
}

ExperimentSpec parse_experiment_spec(const std::string &json_text, const std::string &base_dir)
{
    ExperimentSpec spec;
    try
    {
        const json j = json::parse(json_text);
        spec.name = j.value("name", spec.name);
        if (j.contains("config"))
        {
            fs::path p = j.at("config").get<std::string>();
            if (p.is_relative())
                p = fs::path(base_dir) / p;
            spec.scenario = load_scenario(p.string());
        }
        else if (j.contains("scenario"))
            spec.scenario = parse_scenario(j.at("scenario").dump());
        else
            spec.scenario = parse_scenario("{}");
        spec.methods = j.at("methods").get<std::vector<std::string>>();
        if (j.contains("sweep"))
        {
            spec.sweep_variable = j.at("sweep").at("variable").get<std::string>();
            spec.sweep_values = j.at("sweep").at("values").get<std::vector<double>>();
        }
        spec.num_train = j.value("num_train", spec.num_train);
        spec.num_test = j.value("num_test", spec.num_test);
        spec.seed = j.value("seed", spec.seed);
        spec.options.seed = spec.seed;
        spec.options.pso.seed = spec.seed;
        spec.out_dir = j.value("out", spec.out_dir);
        if (j.contains("train"))
        {
            const json &t = j.at("train");
            TrainConfig &tc = spec.options.train;
            if (t.contains("loss"))
                tc.loss_kind = parse_loss_kind(t.at("loss").get<std::string>());
            tc.beta = t.value("beta", tc.beta);
            tc.lambda = t.value("lambda", tc.lambda);
            tc.epochs = t.value("epochs", tc.epochs);
            tc.batch_size = t.value("batch_size", tc.batch_size);
            tc.learning_rate = t.value("learning_rate", tc.learning_rate);
            tc.lr_decay = t.value("lr_decay", tc.lr_decay);
            tc.group_sum_penalty = t.value("group_sum_penalty", tc.group_sum_penalty);
            tc.rate_margin = t.value("rate_margin", tc.rate_margin);
            tc.seed = spec.seed;
        }
        if (j.contains("pso"))
        {
            const json &p = j.at("pso");
            PsoConfig &pc = spec.options.pso;
            pc.particles = p.value("particles", pc.particles);
            pc.iterations = p.value("iterations", pc.iterations);
            pc.inertia = p.value("inertia", pc.inertia);
            pc.cognitive = p.value("cognitive", pc.cognitive);
            pc.social = p.value("social", pc.social);
        }
        spec.options.dnn_hidden = j.value("dnn_hidden", 0);
    }
    catch (const json::exception &e)
    {
        throw ConfigError(std::string("experiment: ") + e.what());
    }
    spec.validate();
    return spec;
}

ExperimentSpec load_experiment_spec(const std::string &path)
{
    return parse_experiment_spec(read_text(path), fs::path(path).parent_path().string());
}

ScenarioConfig apply_sweep_value(const ScenarioConfig &base, const std::string &variable, double value,
                                 MethodOptions &options)
{
    ScenarioConfig sc = base;
    SystemConfig &c = sc.system;
    const int iv = static_cast<int>(std::lround(value));
    auto require_int = [&]
    {
        if (std::abs(value - iv) > 1e-9 || iv < 1)
            throw ConfigError("sweep: '" + variable + "' needs positive integer values");
    };
    if (variable == "lambda")
        options.train.lambda = value;
    else if (variable == "beta")
        options.train.beta = value;
    else if (variable == "M")
        require_int(), c.M = iv;
    else if (variable == "N")
        require_int(), c.N = iv;
    else if (variable == "L")
        require_int(), c.L = iv;
    else if (variable == "B")
        require_int(), c.B = iv;
    else if (variable == "K")
        require_int(), c.resize_users(iv);
    else if (variable == "location")
    {
        require_int();
        sc.topology = NetworkTopology::for_config(c, iv);
    }
    else
        throw ConfigError("sweep: unknown variable '" + variable +
                          "' (expected lambda, beta, M, N, L, K, B or location)");
    c.validate();
    sc.topology.validate(c);
    return sc;
}

void write_combined_csv(std::ostream &out, const std::vector<SweepRow> &rows)
{
    out << "method,sweep_variable,sweep_value,sum_rate,satisfaction_rate,decode_fraction,samples\n"
        << std::setprecision(10);
    for (const auto &r : rows)
        out << r.method << ',' << r.variable << ',' << r.value << ',' << r.summary.mean_sum_rate << ','
            << r.summary.satisfaction_rate << ',' << r.summary.decode_fraction << ',' << r.summary.samples << '\n';
}

std::vector<SweepRow> run_sweep(const ExperimentSpec &spec)
{
    spec.validate();
    fs::create_directories(spec.out_dir);
    const std::string variable = spec.sweep_variable.empty() ? "none" : spec.sweep_variable;
    const std::vector<double> values = spec.sweep_variable.empty() ? std::vector<double>{0.0} : spec.sweep_values;

    std::vector<SweepRow> rows;
    for (std::size_t p = 0; p < values.size(); ++p)
    {
        MethodOptions opt = spec.options;
        const ScenarioConfig sc =
            spec.sweep_variable.empty() ? spec.scenario : apply_sweep_value(spec.scenario, variable, values[p], opt);
        log_line(opt.log, "sweep point " + variable + "=" + fmt(values[p]));
        const DataSplit data = make_split(sc, spec.num_train, spec.num_test, spec.seed);
        std::ofstream point = open_out((fs::path(spec.out_dir) / ("point_" + std::to_string(p) + ".csv")).string());
        write_report_csv_header(point, true);
        for (const auto &m : spec.methods)
        {
            MethodResult res = run_method(m, sc.system, data, opt);
            for (std::size_t t = 0; t < res.reports.size(); ++t)
                write_report_csv_rows(point, res.reports[t], t, m);
            if (res.history)
                res.history->save_csv(
                    (fs::path(spec.out_dir) / ("history_" + std::to_string(p) + "_" + m + ".csv")).string());
            rows.push_back({m, variable, values[p], res.summary});
        }
    }
    std::ofstream combined = open_out((fs::path(spec.out_dir) / "combined.csv").string());
    write_combined_csv(combined, rows);
    return rows;
}

// ---------- cross-K ----------

std::vector<CrossKRow> run_crossk(const ScenarioConfig &scenario, int train_k, const std::vector<int> &test_ks,
                                  std::size_t n_train, std::size_t n_test, std::uint64_t seed, const TrainConfig &tc,
                                  std::ostream *log)
{
    if (test_ks.empty())
        throw ConfigError("crossk: test-k list is empty");
    auto with_k = [&](int k)
    {
        ScenarioConfig sc = scenario;
        sc.system.resize_users(k);
        sc.system.validate();
        return sc;
    };
    const ScenarioConfig base = with_k(train_k);
    log_line(log, "training at K=" + std::to_string(train_k));
    const GnnParams cross = train_gnn(base.system, make_split(base, n_train, 0, seed).train, tc, seed, nullptr, log);

    std::vector<CrossKRow> rows;
    for (int k : test_ks)
    {
        const ScenarioConfig sc = with_k(k);
        const DataSplit data = make_split(sc, n_train, n_test, seed + 1000 * static_cast<std::uint64_t>(k));
        CrossKRow row;
        row.test_k = k;
        row.cross_sum_rate = summarize(evaluate_gnn(cross, data.test, sc.system, Mode::eval)).mean_sum_rate;
        if (k == train_k)
            row.same_sum_rate = row.cross_sum_rate;
        else
        {
            log_line(log, "training at K=" + std::to_string(k));
            const GnnParams same = train_gnn(sc.system, data.train, tc, seed, nullptr, log);
            row.same_sum_rate = summarize(evaluate_gnn(same, data.test, sc.system, Mode::eval)).mean_sum_rate;
        }
        row.retention_pct = row.same_sum_rate > 0.0 ? 100.0 * row.cross_sum_rate / row.same_sum_rate : 0.0;
        log_line(log, "K=" + std::to_string(k) + " cross " + fmt(row.cross_sum_rate) + " same " +
                          fmt(row.same_sum_rate) + " retention " + fmt(row.retention_pct, 4) + "%");
        rows.push_back(row);
    }
    return rows;
}

void write_crossk_csv(std::ostream &out, const std::vector<CrossKRow> &rows)
{
    out << "test_k,sum_rate_cross,sum_rate_same,retention_pct\n" << std::setprecision(10);
    for (const auto &r : rows)
        out << r.test_k << ',' << r.cross_sum_rate << ',' << r.same_sum_rate << ',' << r.retention_pct << '\n';
}

// ---------- report ----------

namespace
{

struct Table
{
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    std::size_t column(const std::string &name, const std::string &source) const
    {
        auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end())
            throw FormatError("report: missing column '" + name + "' in " + source);
        return static_cast<std::size_t>(it - header.begin());
    }
};

std::vector<std::string> split_csv_line(const std::string &line)
{
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ','))
        out.push_back(cell);
    if (!line.empty() && line.back() == ',')
        out.emplace_back();
    return out;
}

Table read_csv(const std::string &path)
{
    std::ifstream in(path);
    if (!in)
        throw FormatError("report: cannot open '" + path + "'");
    Table t;
    std::string line;
    if (!std::getline(in, line))
        throw FormatError("report: '" + path + "' is empty");
    t.header = split_csv_line(line);
    while (std::getline(in, line))
        if (!line.empty())
        {
            t.rows.push_back(split_csv_line(line));
            if (t.rows.back().size() != t.header.size())
                throw FormatError("report: ragged row in '" + path + "'");
        }
    return t;
}

double to_num(const std::string &s, const std::string &source)
{
    try
    {
        std::size_t used = 0;
        const double v = std::stod(s, &used);
        if (used != s.size())
            throw std::invalid_argument(s);
        return v;
    }
    catch (const std::exception &)
    {
        throw FormatError("report: non-numeric value '" + s + "' in " + source);
    }
}

struct Series
{
    std::string label;
    std::vector<std::pair<double, double>> points;
};

const char *kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf"};

// One panel at (ox, oy) of size w x h.
void svg_panel(std::ostream &out, double ox, double oy, double w, double h, const std::string &title,
               const std::string &xlabel, const std::vector<Series> &series)
{
    double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
    bool first = true;
    for (const auto &s : series)
        for (const auto &[x, y] : s.points)
        {
            if (first)
            {
                xmin = xmax = x;
                ymin = ymax = y;
                first = false;
            }
            xmin = std::min(xmin, x);
            xmax = std::max(xmax, x);
            ymin = std::min(ymin, y);
            ymax = std::max(ymax, y);
        }
    if (xmax == xmin)
        xmax = xmin + 1.0;
    if (ymax == ymin)
        ymax = ymin + 1.0;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;
    const double left = ox + 60, right = ox + w - 20, top = oy + 30, bottom = oy + h - 40;
    auto px = [&](double x) { return left + (x - xmin) / (xmax - xmin) * (right - left); };
    auto py = [&](double y) { return bottom - (y - ymin) / (ymax - ymin) * (bottom - top); };

    out << std::fixed << std::setprecision(2);
    out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << oy + 18 << "\" text-anchor=\"middle\">" << title
        << "</text>\n";
    out << "<rect x=\"" << left << "\" y=\"" << top << "\" width=\"" << right - left << "\" height=\"" << bottom - top
        << "\" fill=\"none\" stroke=\"#444\"/>\n";
    for (int t = 0; t <= 4; ++t)
    {
        const double yv = ymin + (ymax - ymin) * t / 4.0, xv = xmin + (xmax - xmin) * t / 4.0;
        out << "<text x=\"" << left - 5 << "\" y=\"" << py(yv) + 4 << "\" text-anchor=\"end\" font-size=\"10\">"
            << std::setprecision(3) << yv << "</text>\n";
        out << "<text x=\"" << px(xv) << "\" y=\"" << bottom + 14 << "\" text-anchor=\"middle\" font-size=\"10\">"
            << xv << "</text>\n"
            << std::setprecision(2);
    }
    out << "<text x=\"" << (left + right) / 2 << "\" y=\"" << bottom + 32 << "\" text-anchor=\"middle\">" << xlabel
        << "</text>\n";
    for (std::size_t s = 0; s < series.size(); ++s)
    {
        const char *colour = kPalette[s % (sizeof(kPalette) / sizeof(kPalette[0]))];
        out << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (const auto &[x, y] : series[s].points)
            out << px(x) << ',' << py(y) << ' ';
        out << "\"/>\n";
        for (const auto &[x, y] : series[s].points)
            out << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << colour << "\"/>\n";
        out << "<text x=\"" << right - 5 << "\" y=\"" << top + 14 + 14 * static_cast<double>(s)
            << "\" text-anchor=\"end\" font-size=\"11\" fill=\"" << colour << "\">" << series[s].label << "</text>\n";
    }
}

void write_svg(const std::string &path, double width, double height, const std::function<void(std::ostream &)> &body)
{
    std::ofstream out = open_out(path);
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    body(out);
    out << "</svg>\n";
}

std::string slug(const fs::path &rel)
{
    std::string s = rel.parent_path().string();
    std::replace(s.begin(), s.end(), '/', '_');
    return s.empty() ? "root" : s;
}

} // namespace

ReportResult render_report(const std::string &runs_dir, const std::string &out_dir)
{
    if (!fs::is_directory(runs_dir))
        throw ConfigError("report: runs directory '" + runs_dir + "' does not exist");
    std::vector<fs::path> combined, histories;
    for (const auto &entry : fs::recursive_directory_iterator(runs_dir))
    {
        if (!entry.is_regular_file())
            continue;
        const std::string name = entry.path().filename().string();
        if (name == "combined.csv")
            combined.push_back(entry.path());
        else if (name.rfind("history", 0) == 0 && entry.path().extension() == ".csv")
            histories.push_back(entry.path());
    }
    std::sort(combined.begin(), combined.end());
    std::sort(histories.begin(), histories.end());
    fs::create_directories(out_dir);

    ReportResult res;
    std::ofstream summary = open_out((fs::path(out_dir) / "summary.csv").string());
    summary << "source,method,sweep_variable,sweep_value,sum_rate,satisfaction_rate\n";
    for (const auto &path : combined)
    {
        const std::string source = fs::relative(path, runs_dir).string();
        const Table t = read_csv(path.string());
        const std::size_t cm = t.column("method", source), cv = t.column("sweep_variable", source),
                          cx = t.column("sweep_value", source), cr = t.column("sum_rate", source),
                          cs = t.column("satisfaction_rate", source);
        std::map<std::string, std::size_t> order;
        std::vector<Series> rate, sat;
        std::string variable;
        for (const auto &row : t.rows)
        {
            variable = row[cv];
            if (!order.count(row[cm]))
            {
                order[row[cm]] = rate.size();
                rate.push_back({row[cm], {}});
                sat.push_back({row[cm], {}});
            }
            const std::size_t k = order[row[cm]];
            const double x = to_num(row[cx], source);
            rate[k].points.push_back({x, to_num(row[cr], source)});
            sat[k].points.push_back({x, to_num(row[cs], source)});
            summary << source << ',' << row[cm] << ',' << row[cv] << ',' << row[cx] << ',' << row[cr] << ','
                    << row[cs] << '\n';
        }
        for (auto *set : {&rate, &sat})
            for (auto &s : *set)
                std::sort(s.points.begin(), s.points.end());
        const std::string file = "sweep_" + slug(fs::relative(path, runs_dir)) + ".svg";
        write_svg((fs::path(out_dir) / file).string(), 900, 380,
                  [&](std::ostream &out)
                  {
                      svg_panel(out, 0, 0, 450, 380, "Sum rate (bps/Hz)", variable, rate);
                      svg_panel(out, 450, 0, 450, 380, "Satisfaction rate", variable, sat);
                  });
        ++res.sweep_charts;
    }
    for (const auto &path : histories)
    {
        const std::string source = fs::relative(path, runs_dir).string();
        const Table t = read_csv(path.string());
        const std::size_t ce = t.column("epoch", source), cl = t.column("loss", source),
                          cr = t.column("sum_rate", source), cs = t.column("satisfaction_rate", source);
        Series loss{"loss", {}}, rate{"sum rate", {}}, sat{"satisfaction", {}};
        for (const auto &row : t.rows)
        {
            const double e = to_num(row[ce], source);
            loss.points.push_back({e, to_num(row[cl], source)});
            rate.points.push_back({e, to_num(row[cr], source)});
            sat.points.push_back({e, to_num(row[cs], source)});
        }
        std::string stem = fs::relative(path, runs_dir).replace_extension().string();
        std::replace(stem.begin(), stem.end(), '/', '_');
        write_svg((fs::path(out_dir) / ("training_" + stem + ".svg")).string(), 1200, 340,
                  [&](std::ostream &out)
                  {
                      svg_panel(out, 0, 0, 400, 340, "Loss", "epoch", {loss});
                      svg_panel(out, 400, 0, 400, 340, "Sum rate (bps/Hz)", "epoch", {rate});
                      svg_panel(out, 800, 0, 400, 340, "Satisfaction rate", "epoch", {sat});
                  });
        ++res.history_charts;
    }
    return res;
}

} // namespace risdf
