// Copyright 2026 The QResNet Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// qres: command-line entry point.
//
// Exit codes: 0 success, 1 runtime failure, 2 usage or argument error.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qres/circuits.hpp"
#include "qres/config.hpp"
#include "qres/data.hpp"
#include "qres/error.hpp"
#include "qres/metrics.hpp"
#include "qres/parallel.hpp"
#include "qres/qlayer.hpp"
#include "qres/train.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitRuntime = 1;
constexpr int kExitUsage = 2;

std::string g_invocation;

/// Usage problems detected after CLI11 parsing.
struct UsageError : qres::ArgumentError {
    using qres::ArgumentError::ArgumentError;
};

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string join17(const std::vector<double> &values) {
    std::string out;
    for (std::size_t i = 0; i < values.size(); ++i) {
        out += (i ? " " : "") + fmt17(values[i]);
    }
    return out;
}

std::vector<double> parse_list(const std::string &text, const char *what) {
    std::vector<double> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception &) {
            used = 0;
        }
        if (used == 0 || used != item.size()) {
            throw UsageError(std::string("bad number '") + item + "' in " + what);
        }
        out.push_back(v);
    }
    return out;
}

void echo_startup(const std::string &extra = {}) {
    std::cerr << "# invocation: " << g_invocation << '\n';
    std::cerr << "# threads: " << qres::thread_count() << '\n';
    if (!extra.empty()) {
        std::cerr << extra << '\n';
    }
}

// ---------------------------------------------------------------------------

struct GenerateArgs {
    std::string out;
    std::size_t n_per_class = 100;
    std::size_t side = 16;
    std::uint64_t seed = 42;
    double difficulty = 0.2;
    std::string fractions = "0.65,0.15,0.20";
};

int run_generate(const GenerateArgs &a) {
    if (!(a.difficulty >= 0.0 && a.difficulty <= 1.0)) {
        throw UsageError("--difficulty must lie in [0, 1], got " +
                         fmt17(a.difficulty));
    }
    const std::vector<double> f = parse_list(a.fractions, "--fractions");
    if (f.size() != 3) {
        throw UsageError("--fractions takes exactly three values");
    }
    qres::SyntheticOptions opts;
    opts.n_per_class = a.n_per_class;
    opts.side = a.side;
    opts.seed = a.seed;
    opts.difficulty = a.difficulty;
    opts.fractions = {f[0], f[1], f[2]};
    echo_startup("# generate: out=" + a.out +
                 " n_per_class=" + std::to_string(a.n_per_class) +
                 " side=" + std::to_string(a.side) +
                 " seed=" + std::to_string(a.seed) +
                 " difficulty=" + fmt17(a.difficulty) +
                 " fractions=" + a.fractions);
    const qres::Manifest m = qres::generate_synthetic(opts, a.out);
    std::size_t counts[3] = {0, 0, 0};
    for (const qres::ManifestEntry &e : m.entries) {
        if (e.split != qres::Split::unassigned) {
            ++counts[static_cast<int>(e.split) - 1];
        }
    }
    std::cout << "wrote " << m.entries.size() << " volumes to " << a.out
              << " (train " << counts[0] << ", val " << counts[1] << ", test "
              << counts[2] << ")\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct TrainArgs {
    std::string config;
    std::string manifest, out, head, channels, resume;
    std::size_t epochs = 0, batch_size = 0, patience = 0, qubits = 0,
                fm_reps = 0, ansatz_reps = 0, input_side = 0, blocks = 0;
    double lr = 0, threshold = 0;
    std::uint64_t seed = 0;
};

int run_train(const TrainArgs &a, CLI::App &cmd, std::size_t threads) {
    qres::RunConfig cfg =
        a.config.empty() ? qres::RunConfig{} : qres::load_run_config(a.config);
    auto given = [&cmd](const char *name) { return cmd.count(name) > 0; };
    if (given("--manifest")) cfg.manifest = a.manifest;
    if (given("--out")) cfg.out_dir = a.out;
    if (given("--head")) cfg.net.head = qres::parse_head(a.head);
    if (given("--epochs")) cfg.train.epochs = a.epochs;
    if (given("--batch-size")) cfg.train.batch_size = a.batch_size;
    if (given("--lr")) cfg.train.learning_rate = a.lr;
    if (given("--seed")) cfg.train.seed = a.seed;
    if (given("--patience")) cfg.train.patience = a.patience;
    if (given("--threshold")) cfg.train.threshold = a.threshold;
    if (given("--qubits")) cfg.qlayer.n_qubits = a.qubits;
    if (given("--fm-reps")) cfg.qlayer.fm_reps = a.fm_reps;
    if (given("--ansatz-reps")) cfg.qlayer.ansatz_reps = a.ansatz_reps;
    if (given("--input-side")) cfg.net.input_side = a.input_side;
    if (given("--blocks")) cfg.net.blocks_per_stage = a.blocks;
    if (given("--channels")) {
        cfg.net.channels.clear();
        for (double c : parse_list(a.channels, "--channels")) {
            if (c < 1 || c != static_cast<double>(static_cast<std::size_t>(c))) {
                throw UsageError("--channels entries must be positive integers");
            }
            cfg.net.channels.push_back(static_cast<std::size_t>(c));
        }
    }
    if (threads > 0) cfg.threads = threads;
    cfg.finalize();
    if (cfg.manifest.empty()) {
        throw UsageError("no manifest: pass --manifest or set data.manifest");
    }
    echo_startup("# effective config:\n" + qres::dump_run_config(cfg));

    qres::TrainOptions opts;
    if (!a.resume.empty()) {
        if (!std::filesystem::exists(a.resume)) {
            throw UsageError("resume checkpoint '" + a.resume + "' does not exist");
        }
        opts.resume_from = a.resume;
    }
    opts.log = &std::cout;
    std::cout << "# epoch  train_loss  val_auc  val_acc\n";
    const qres::TrainResult r = qres::train(cfg, opts);
    std::cout << "best val AUC " << fmt17(r.best_val_auc) << " at epoch "
              << r.best_epoch << "; checkpoint " << r.best_checkpoint.string()
              << '\n';
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct EvalArgs {
    std::string checkpoint, split = "test", manifest, out;
    double threshold = 0.5;
};

qres::Split parse_eval_split(const std::string &name) {
    const qres::Split s = qres::parse_split(name);
    if (s == qres::Split::unassigned) {
        throw UsageError("--split must be train, val or test");
    }
    return s;
}

void require_checkpoint(const std::string &path) {
    if (!std::filesystem::exists(path)) {
        throw UsageError("checkpoint '" + path + "' does not exist (train first)");
    }
}

int run_eval(const EvalArgs &a, CLI::App &cmd) {
    require_checkpoint(a.checkpoint);
    const qres::Split split = parse_eval_split(a.split);
    echo_startup("# eval: checkpoint=" + a.checkpoint + " split=" + a.split +
                 (a.manifest.empty() ? "" : " manifest=" + a.manifest) +
                 (cmd.count("--threshold") ? " threshold=" + fmt17(a.threshold)
                                           : ""));
    const qres::Checkpoint ckpt = qres::load_checkpoint(a.checkpoint);
    const std::optional<double> threshold =
        cmd.count("--threshold") ? std::optional<double>(a.threshold)
                                 : std::nullopt;
    const qres::EvalReport r =
        qres::evaluate(a.checkpoint, split, a.manifest, threshold);
    if (r.sen_undefined) {
        std::cerr << "warning: split has no positives; SEN reported as 0\n";
    }
    if (r.spe_undefined) {
        std::cerr << "warning: split has no negatives; SPE reported as 0\n";
    }
    std::printf("%-6s %-10s %5s %4s %4s %4s %4s %7s %7s %7s %7s\n", "split",
                "head", "n", "TP", "FP", "TN", "FN", "AUC", "ACC", "SEN", "SPE");
    std::printf("%-6s %-10s %5zu %4zu %4zu %4zu %4zu %7.3f %7.3f %7.3f %7.3f\n",
                a.split.c_str(), qres::to_string(ckpt.config.net.head).c_str(),
                r.counts.total(), r.counts.tp, r.counts.fp, r.counts.tn,
                r.counts.fn, r.auc, r.acc, r.sen, r.spe);
    std::printf("%s\n", qres::summary_line(r).c_str());
    return kExitOk;
}

int run_roc(const EvalArgs &a) {
    require_checkpoint(a.checkpoint);
    const qres::Split split = parse_eval_split(a.split);
    echo_startup("# roc: checkpoint=" + a.checkpoint + " split=" + a.split +
                 " out=" + a.out);
    const qres::EvalReport r = qres::evaluate(a.checkpoint, split, a.manifest);
    if (r.auc_undefined) {
        throw qres::ArgumentError("ROC needs both classes in split '" + a.split +
                                  "'");
    }
    std::ofstream out(a.out);
    if (!out) {
        throw qres::Error("cannot write '" + a.out + "'");
    }
    qres::write_roc(out, r.roc_points);
    std::cout << "wrote " << r.roc_points.size() << " ROC points to " << a.out
              << " (AUC=" << fmt17(r.auc) << ")\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
    std::string circuit, qlayer, show = "both";
};

int run_simulate(const SimulateArgs &a) {
    echo_startup();
    if (a.circuit.empty() && a.qlayer.empty()) {
        throw UsageError("simulate needs --circuit or --qlayer");
    }
    if (!a.circuit.empty()) {
        std::ifstream in(a.circuit);
        if (!in) {
            throw UsageError("cannot open circuit file '" + a.circuit + "'");
        }
        const qres::Circuit c = qres::parse_circuit(in);
        if (a.show != "state") {
            std::cout << qres::format_circuit(c);
        }
        if (a.show != "gates") {
            const qres::StateVector s = qres::simulate(c);
            for (std::size_t i = 0; i < s.size(); ++i) {
                std::cout << i << '\t' << fmt17(s[i].real()) << '\t'
                          << fmt17(s[i].imag()) << '\n';
            }
        }
        return kExitOk;
    }

    std::ifstream in(a.qlayer);
    if (!in) {
        throw UsageError("cannot open qlayer file '" + a.qlayer + "'");
    }
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw qres::ArgumentError(std::string("qlayer file is not valid JSON: ") +
                                  e.what());
    }
    for (const auto &[key, value] : j.items()) {
        if (key != "features" && key != "params" && key != "fm_reps" &&
            key != "ansatz_reps") {
            throw qres::ArgumentError("unknown qlayer key '" + key + "'");
        }
    }
    std::vector<double> features;
    qres::QLayerConfig cfg;
    try {
        features = j.at("features").get<std::vector<double>>();
        cfg.params = j.value("params", std::vector<double>{});
        cfg.fm_reps = j.value("fm_reps", std::size_t{2});
        cfg.ansatz_reps = j.value("ansatz_reps", std::size_t{1});
    } catch (const nlohmann::json::exception &e) {
        throw qres::ArgumentError(std::string("bad qlayer file: ") + e.what());
    }
    cfg.n_qubits = features.size();
    const qres::QLayerResult r = qres::qlayer_evaluate(features, cfg);
    std::cout << "p=" << fmt17(r.probability) << '\n';
    std::cout << "grad_params=" << join17(r.grad_params) << '\n';
    std::cout << "grad_features=" << join17(r.grad_features) << '\n';
    return kExitOk;
}

} // namespace

int main(int argc, char **argv) {
    for (int i = 0; i < argc; ++i) {
        g_invocation += (i ? " " : "") + std::string(argv[i]);
    }

    CLI::App app{"Hybrid quantum-classical 3D volume classifier"};
    app.require_subcommand(1);
    std::size_t threads = 0;
    app.add_option("--threads", threads,
                   "Worker thread cap (default: QRES_THREADS or all cores)");

    GenerateArgs gen;
    CLI::App *generate = app.add_subcommand("generate", "Write a synthetic dataset");
    generate->add_option("--out", gen.out, "Output directory")->required();
    generate->add_option("--n-per-class", gen.n_per_class, "Volumes per class")
        ->check(CLI::PositiveNumber);
    generate->add_option("--side", gen.side, "Cube side in voxels")
        ->check(CLI::Range(8, 1024));
    generate->add_option("--seed", gen.seed, "Random seed");
    generate->add_option("--difficulty", gen.difficulty, "0 = easy, 1 = chance");
    generate->add_option("--fractions", gen.fractions,
                         "train,val,test fractions");

    TrainArgs tr;
    CLI::App *train = app.add_subcommand("train", "Train a model");
    train->add_option("--config", tr.config, "JSON run configuration")
        ->check(CLI::ExistingFile);
    train->add_option("--manifest", tr.manifest, "Dataset manifest");
    train->add_option("--out", tr.out, "Output directory");
    train->add_option("--head", tr.head, "quantum or classical")
        ->check(CLI::IsMember({"quantum", "classical"}));
    train->add_option("--epochs", tr.epochs);
    train->add_option("--batch-size", tr.batch_size);
    train->add_option("--lr", tr.lr);
    train->add_option("--seed", tr.seed);
    train->add_option("--patience", tr.patience);
    train->add_option("--threshold", tr.threshold);
    train->add_option("--qubits", tr.qubits);
    train->add_option("--fm-reps", tr.fm_reps);
    train->add_option("--ansatz-reps", tr.ansatz_reps);
    train->add_option("--input-side", tr.input_side);
    train->add_option("--channels", tr.channels, "Comma-separated stage widths");
    train->add_option("--blocks", tr.blocks, "Residual blocks per stage");
    train->add_option("--resume", tr.resume, "Continue from a checkpoint");

    EvalArgs ev;
    CLI::App *eval = app.add_subcommand("eval", "Evaluate a checkpoint");
    eval->add_option("--checkpoint", ev.checkpoint)->required();
    eval->add_option("--split", ev.split, "train, val or test");
    eval->add_option("--manifest", ev.manifest, "Override the manifest path");
    eval->add_option("--threshold", ev.threshold, "Decision threshold");

    EvalArgs rc;
    CLI::App *roc = app.add_subcommand("roc", "Write ROC points");
    roc->add_option("--checkpoint", rc.checkpoint)->required();
    roc->add_option("--split", rc.split, "train, val or test");
    roc->add_option("--manifest", rc.manifest, "Override the manifest path");
    roc->add_option("--out", rc.out, "Output file")->required();

    SimulateArgs sim;
    CLI::App *simulate = app.add_subcommand("simulate", "Run a circuit or qlayer");
    auto *circ = simulate->add_option("--circuit", sim.circuit, "Gate-list file");
    auto *ql = simulate->add_option("--qlayer", sim.qlayer,
                                    "JSON with features, params, fm_reps, ansatz_reps");
    circ->excludes(ql);
    simulate->add_option("--show", sim.show, "gates, state or both")
        ->check(CLI::IsMember({"gates", "state", "both"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        if (e.get_exit_code() == static_cast<int>(CLI::ExitCodes::Success)) {
            return app.exit(e);
        }
        app.exit(e, std::cerr, std::cerr);
        CLI::App *active = &app;
        for (CLI::App *sub : app.get_subcommands()) {
            active = sub;
        }
        std::cerr << active->help();
        return kExitUsage;
    }

    if (threads == 0) {
        if (const char *env = std::getenv("QRES_THREADS")) {
            try {
                threads = std::stoul(env);
            } catch (const std::exception &) {
                std::cerr << "error: QRES_THREADS must be a number\n";
                return kExitUsage;
            }
        }
    }
    qres::set_thread_count(threads);

    try {
        if (*generate) return run_generate(gen);
        if (*train) return run_train(tr, *train, threads);
        if (*eval) return run_eval(ev, *eval);
        if (*roc) return run_roc(rc);
        if (*simulate) return run_simulate(sim);
    } catch (const qres::ArgumentError &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitRuntime;
    }
    return kExitUsage;
}
