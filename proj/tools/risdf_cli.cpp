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


// risdf command-line front end: gen-data, train, eval, sweep, report, crossk.

#include "risdf/experiments.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace fs = std::filesystem;
using namespace risdf;

namespace
{

// Exit codes of the machine-readable error line.
enum ExitCode
{
    kOk = 0,
    kInternal = 1,
    kUsage = 2,
    kConfig = 3,
    kFormat = 4,
    kDomain = 5,
    kTraining = 6,
};

int report_error(int code, const std::string &kind, const std::string &message)
{
    std::string escaped;
    for (char c : message)
    {
        if (c == '"' || c == '\\')
            escaped += '\\';
        escaped += c == '\n' ? ' ' : c;
    }
    std::cerr << "risdf-error code=" << code << " kind=" << kind << " message=\"" << escaped << "\"" << std::endl;
    return code;
}

std::ofstream open_out(const fs::path &path)
{
    std::ofstream out(path);
    if (!out)
        throw ConfigError("cannot write '" + path.string() + "'");
    return out;
}

// A dataset argument is either a file or a gen-data directory.
std::string dataset_path(const std::string &data, const std::string &which)
{
    if (fs::is_directory(data))
        return (fs::path(data) / (which + ".bin")).string();
    if (!fs::exists(data))
        throw ConfigError("dataset '" + data + "' does not exist");
    return data;
}

ScenarioConfig resolve_scenario(const std::string &config, const std::string &data)
{
    if (!config.empty())
        return load_scenario(config);
    const fs::path dir = fs::is_directory(data) ? fs::path(data) : fs::path(data).parent_path();
    const fs::path guess = dir / "scenario.json";
    if (!fs::exists(guess))
        throw ConfigError("no --config given and no scenario.json next to '" + data + "'");
    return load_scenario(guess.string());
}

std::vector<int> parse_int_list(const std::string &text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        try
        {
            std::size_t used = 0;
            out.push_back(std::stoi(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        }
        catch (const std::exception &)
        {
            throw ConfigError("bad integer '" + item + "' in list '" + text + "'");
        }
    }
    if (out.empty())
        throw ConfigError("empty integer list");
    return out;
}

struct TrainFlags
{
    std::string loss = "fine";
    double beta = 1000.0;
    double lambda = 1000.0;
    int epochs = 20;
    int batch = 64;
    double lr = 1e-3;
    double decay = 1e-6;
    double margin = 0.0;
    std::uint64_t seed = 1;
    bool group_sum = false;

    void add(CLI::App *app)
    {
        app->add_option("--loss", loss, "coarse, group or fine")->check(CLI::IsMember({"coarse", "group", "fine"}));
        app->add_option("--beta", beta, "decode penalty weight");
        app->add_option("--lambda", lambda, "rate penalty weight");
        app->add_option("--epochs", epochs);
        app->add_option("--batch-size", batch);
        app->add_option("--lr", lr, "Adam learning rate");
        app->add_option("--lr-decay", decay);
        app->add_option("--rate-margin", margin, "added to thresholds inside the penalty");
        app->add_option("--seed", seed);
        app->add_flag("--group-sum", group_sum, "group loss penalizes the group's summed rate");
    }

    TrainConfig build() const
    {
        TrainConfig tc;
        tc.loss_kind = parse_loss_kind(loss);
        tc.beta = beta;
        tc.lambda = lambda;
        tc.epochs = epochs;
        tc.batch_size = batch;
        tc.learning_rate = lr;
        tc.lr_decay = decay;
        tc.rate_margin = margin;
        tc.seed = seed;
        tc.group_sum_penalty = group_sum;
        tc.validate();
        return tc;
    }
};

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"risdf: multi-RIS decode-and-forward relay downlink optimizer"};
    app.require_subcommand(1);
    app.fallthrough();
    bool quiet = false;
    app.add_flag("-q,--quiet", quiet, "suppress progress output");

    // gen-data
    std::string gd_config, gd_out;
    std::size_t gd_train = 2000, gd_test = 500;
    std::uint64_t gd_seed = 1;
    CLI::App *gen = app.add_subcommand("gen-data", "generate train/test channel datasets");
    gen->add_option("--config", gd_config, "scenario JSON")->required();
    gen->add_option("--out", gd_out, "output directory")->required();
    gen->add_option("--num-train", gd_train);
    gen->add_option("--num-test", gd_test);
    gen->add_option("--seed", gd_seed);

    // train
    std::string tr_config, tr_data, tr_out, tr_resume;
    int tr_ckpt_every = 0;
    TrainFlags tr_flags;
    CLI::App *trn = app.add_subcommand("train", "train the two-phase GNN");
    trn->add_option("--config", tr_config, "scenario JSON (default: scenario.json beside the data)");
    trn->add_option("--data", tr_data, "gen-data directory or dataset file")->required();
    trn->add_option("--out", tr_out, "output directory")->required();
    trn->add_option("--checkpoint-every", tr_ckpt_every, "epochs between checkpoints (0: final only)");
    trn->add_option("--init", tr_resume, "start from this checkpoint");
    tr_flags.add(trn);

    // eval
    std::string ev_model, ev_data, ev_config, ev_out, ev_quant = "on";
    CLI::App *ev = app.add_subcommand("eval", "evaluate a checkpoint on a dataset");
    ev->add_option("--model", ev_model, "checkpoint file")->required();
    ev->add_option("--data", ev_data, "gen-data directory (test split) or dataset file")->required();
    ev->add_option("--config", ev_config, "scenario JSON (default: scenario.json beside the data)");
    ev->add_option("--quantize", ev_quant, "on: discrete phases, off: continuous")
        ->check(CLI::IsMember({"on", "off"}));
    ev->add_option("--out", ev_out, "output directory")->required();

    // sweep
    std::string sw_spec, sw_out;
    CLI::App *sw = app.add_subcommand("sweep", "run an experiment spec");
    sw->add_option("--spec", sw_spec, "experiment JSON")->required();
    sw->add_option("--out", sw_out, "override the spec's output directory");

    // report
    std::string rp_runs, rp_out;
    CLI::App *rp = app.add_subcommand("report", "render SVG charts and a summary table from run CSVs");
    rp->add_option("--runs", rp_runs, "directory searched for combined.csv and history*.csv")->required();
    rp->add_option("--out", rp_out, "output directory")->required();

    // crossk
    std::string ck_config, ck_out, ck_test = "3,4";
    int ck_train_k = 2;
    std::size_t ck_ntrain = 2000, ck_ntest = 500;
    TrainFlags ck_flags;
    CLI::App *ck = app.add_subcommand("crossk", "train at one K, evaluate at several");
    ck->add_option("--config", ck_config, "scenario JSON")->required();
    ck->add_option("--train-k", ck_train_k);
    ck->add_option("--test-k", ck_test, "comma-separated list");
    ck->add_option("--num-train", ck_ntrain);
    ck->add_option("--num-test", ck_ntest);
    ck->add_option("--out", ck_out, "output directory")->required();
    ck_flags.add(ck);

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::CallForAllHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        return report_error(kUsage, "usage", e.what());
    }

    std::ostream *log = quiet ? nullptr : &std::cerr;
    try
    {
        if (gen->parsed())
        {
            const DataManifest m = gen_data(load_scenario(gd_config), gd_out, gd_train, gd_test, gd_seed);
            if (log)
                *log << "wrote " << m.num_train << " train / " << m.num_test << " test samples to " << gd_out
                     << " (config " << m.config_hash << ")\n";
        }
        else if (trn->parsed())
        {
            const ScenarioConfig sc = resolve_scenario(tr_config, tr_data);
            const auto data = load_dataset(dataset_path(tr_data, "train"), sc.system);
            if (data.empty())
                throw DomainError("train: dataset is empty");
            TrainConfig tc = tr_flags.build();
            fs::create_directories(tr_out);
            tc.checkpoint_every = tr_ckpt_every;
            tc.checkpoint_dir = tr_ckpt_every > 0 ? tr_out : "";
            GnnParams params(sc.system);
            if (tr_resume.empty())
            {
                params.init(tc.seed);
                params.scale = fit_input_scale(data, sc.system);
            }
            else
            {
                params = load_checkpoint(tr_resume);
                params.check_compatible(sc.system);
            }
            const TrainHistory h = train(params, data, sc.system, tc,
                                         [&](const EpochStats &e, const RVector &)
                                         {
                                             if (log)
                                                 *log << "epoch " << e.epoch << " loss " << e.loss << " sum_rate "
                                                      << e.sum_rate << " satisfaction " << e.satisfaction_rate << "\n";
                                         });
            save_checkpoint(params, (fs::path(tr_out) / "model.ckpt").string());
            h.save_csv((fs::path(tr_out) / "history.csv").string());
        }
        else if (ev->parsed())
        {
            const ScenarioConfig sc = resolve_scenario(ev_config, ev_data);
            const auto data = load_dataset(dataset_path(ev_data, "test"), sc.system);
            if (data.empty())
                throw DomainError("eval: dataset is empty");
            const GnnParams params = load_checkpoint(ev_model);
            params.check_compatible(sc.system);
            const auto reports = evaluate_gnn(params, data, sc.system, ev_quant == "on" ? Mode::eval : Mode::train);
            fs::create_directories(ev_out);
            std::ofstream metrics = open_out(fs::path(ev_out) / "metrics.csv");
            write_metrics_csv(metrics, reports);
            const EvalSummary s = summarize(reports);
            std::ofstream summary = open_out(fs::path(ev_out) / "summary.csv");
            write_summary_csv(summary, s);
            if (log)
                *log << "mean sum rate " << s.mean_sum_rate << ", satisfaction " << s.satisfaction_rate
                     << ", decode fraction " << s.decode_fraction << "\n";
        }
        else if (sw->parsed())
        {
            ExperimentSpec spec = load_experiment_spec(sw_spec);
            if (!sw_out.empty())
                spec.out_dir = sw_out;
            spec.options.log = log;
            const auto rows = run_sweep(spec);
            if (log)
                write_combined_csv(*log, rows);
        }
        else if (rp->parsed())
        {
            const ReportResult r = render_report(rp_runs, rp_out);
            if (log)
                *log << r.sweep_charts << " sweep charts, " << r.history_charts << " training charts\n";
        }
        else if (ck->parsed())
        {
            const ScenarioConfig sc = load_scenario(ck_config);
            const auto rows = run_crossk(sc, ck_train_k, parse_int_list(ck_test), ck_ntrain, ck_ntest,
                                         ck_flags.seed, ck_flags.build(), log);
            fs::create_directories(ck_out);
            std::ofstream out = open_out(fs::path(ck_out) / "crossk.csv");
            write_crossk_csv(out, rows);
        }
    }
    catch (const ConfigError &e)
    {
        return report_error(kConfig, "config", e.what());
    }
    catch (const FormatError &e)
    {
        return report_error(kFormat, "format", e.what());
    }
    catch (const DomainError &e)
    {
        return report_error(kDomain, "domain", e.what());
    }
    catch (const TrainingError &e)
    {
        return report_error(kTraining, "training", e.what());
    }
    catch (const std::exception &e)
    {
        return report_error(kInternal, "internal", e.what());
    }
    return kOk;
}
