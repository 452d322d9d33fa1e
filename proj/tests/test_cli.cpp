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
#include <array>
#include <memory>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include <sys/wait.h>

#include <gtest/gtest.h>

#include "qres/circuits.hpp"
#include "scratch.hpp"

namespace qres {
namespace {

using testing_util::ScratchDir;
using testing_util::slurp;
using testing_util::spit;

struct CliResult {
    int code = -1;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::string &args, const ScratchDir &dir) {
    const std::string err_file = (dir / "stderr.txt").string();
    const std::string cmd =
        std::string("'") + QRES_CLI_PATH + "' " + args + " 2>'" + err_file + "'";
    CliResult r;
    FILE *pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) {
        return r;
    }
    std::array<char, 4096> buf{};
    std::size_t n = 0;
    while ((n = std::fread(buf.data(), 1, buf.size(), pipe)) > 0) {
        r.out.append(buf.data(), n);
    }
    const int status = ::pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.err = slurp(err_file);
    return r;
}

std::string q(const std::filesystem::path &p) { return "'" + p.string() + "'"; }

std::vector<std::string> lines_of(const std::string &text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
        lines.push_back(line);
    }
    return lines;
}

std::string summary_of(const std::string &out) {
    for (const std::string &line : lines_of(out)) {
        if (line.rfind("AUC=", 0) == 0) {
            return line;
        }
    }
    return {};
}

TEST(Cli, GenerateIsDeterministic) {
    ScratchDir dir("cli_gen");
    const std::string args = " --n-per-class 5 --side 16 --seed 7";
    ASSERT_EQ(run_cli("generate --out " + q(dir / "a") + args, dir).code, 0);
    ASSERT_EQ(run_cli("generate --out " + q(dir / "b") + args, dir).code, 0);
    std::size_t files = 0;
    for (const auto &e : std::filesystem::directory_iterator(dir / "a")) {
        EXPECT_EQ(slurp(e.path()), slurp(dir / "b" / e.path().filename().string()));
        ++files;
    }
    EXPECT_EQ(files, 11u);
}

TEST(Cli, GenerateArgumentErrors) {
    ScratchDir dir("cli_args");
    const CliResult missing = run_cli("generate --n-per-class 5", dir);
    EXPECT_EQ(missing.code, 2);
    EXPECT_NE(missing.err.find("Usage"), std::string::npos);
    const CliResult range = run_cli("generate --out " + q(dir / "x") + " --difficulty 1.5", dir);
    EXPECT_EQ(range.code, 2);
    EXPECT_NE(range.err.find("difficulty"), std::string::npos);
    EXPECT_EQ(run_cli("frobnicate", dir).code, 2);
    EXPECT_EQ(run_cli("", dir).code, 2);
}

TEST(Cli, EvalWithoutCheckpointExitsTwo) {
    ScratchDir dir("cli_nockpt");
    EXPECT_EQ(run_cli("eval --checkpoint " + q(dir / "run" / "best.qrck") +
                          " --split test",
                      dir)
                  .code,
              2);
}

class CliTraining : public ::testing::Test {
  protected:
    static void SetUpTestSuite() {
        dir_ = std::make_unique<ScratchDir>("cli_train");
        ASSERT_EQ(run_cli("generate --out " + q(*dir_ / "data") +
                              " --n-per-class 8 --side 8 --seed 5 --difficulty 0"
                              " --fractions 0.5,0.25,0.25",
                          *dir_)
                      .code,
                  0);
    }
    static void TearDownTestSuite() { dir_.reset(); }

    static std::string train_args(const std::string &out, const std::string &head,
                                  int epochs = 40) {
        return "train --manifest " + q(*dir_ / "data" / "manifest.tsv") + " --out " +
               q(*dir_ / out) + " --head " + head + " --epochs " + std::to_string(epochs) +
               " --input-side 8 --channels 4 --qubits 2 --batch-size 4 --lr 0.02";
    }

    static std::unique_ptr<ScratchDir> dir_;
};

std::unique_ptr<ScratchDir> CliTraining::dir_;

TEST_F(CliTraining, OverfitEvalPrintsPerfectAccuracy) {
    const CliResult t = run_cli(train_args("runq", "quantum"), *dir_);
    ASSERT_EQ(t.code, 0) << t.err;
    EXPECT_EQ(lines_of(t.out).size(), 42u); // header, 40 epochs, best-checkpoint note
    const CliResult e = run_cli("eval --checkpoint " + q(*dir_ / "runq" / "last.qrck") +
                              " --split train",
                          *dir_);
    ASSERT_EQ(e.code, 0) << e.err;
    EXPECT_NE(summary_of(e.out).find("ACC=1.000"), std::string::npos) << e.out;
}

TEST_F(CliTraining, BothHeadsGiveComparableReports) {
    std::vector<std::string> summaries;
    for (const std::string head : {"quantum", "classical"}) {
        const CliResult t = run_cli(train_args("run_" + head, head, 3), *dir_);
        ASSERT_EQ(t.code, 0) << t.err;
        const CliResult e = run_cli("eval --checkpoint " +
                                  q(*dir_ / ("run_" + head) / "best.qrck") +
                                  " --split test",
                              *dir_);
        ASSERT_EQ(e.code, 0) << e.err;
        EXPECT_NE(e.out.find(head), std::string::npos);
        summaries.push_back(summary_of(e.out));
    }
    for (const std::string &s : summaries) {
        EXPECT_EQ(s.rfind("AUC=", 0), 0u);
        EXPECT_NE(s.find(" ACC="), std::string::npos);
        EXPECT_LT(s.find("ACC="), s.find("SEN="));
        EXPECT_LT(s.find("SEN="), s.find("SPE="));
    }
    EXPECT_EQ(run_cli(train_args("bad", "hybrid"), *dir_).code, 2);
}

TEST_F(CliTraining, RocEndpoints) {
    const CliResult t = run_cli(train_args("roc", "quantum", 2), *dir_);
    ASSERT_EQ(t.code, 0) << t.err;
    const auto out = *dir_ / "roc.tsv";
    ASSERT_EQ(run_cli("roc --checkpoint " + q(*dir_ / "roc" / "best.qrck") +
                          " --split val --out " + q(out),
                      *dir_)
                  .code,
              0);
    const std::vector<std::string> rows = lines_of(slurp(out));
    ASSERT_GE(rows.size(), 2u);
    EXPECT_EQ(rows.front(), "0\t0\tinf");
    EXPECT_EQ(rows.back(), "1\t1\t-inf");
}

TEST_F(CliTraining, ConfigFileAndOverrides) {
    spit(*dir_ / "cfg.json",
         R"({"net": {"input_side": 8, "channels": [2]}, "qlayer": {"n_qubits": 2},
             "train": {"epochs": 1, "batch_size": 4}})");
    const CliResult t = run_cli("train --config " + q(*dir_ / "cfg.json") + " --manifest " +
                              q(*dir_ / "data" / "manifest.tsv") + " --out " +
                              q(*dir_ / "cfgrun") + " --epochs 2",
                          *dir_);
    ASSERT_EQ(t.code, 0) << t.err;
    EXPECT_EQ(lines_of(t.out).size(), 4u);
    spit(*dir_ / "bad.json", R"({"train": {"epoch": 1}})");
    EXPECT_EQ(run_cli("train --config " + q(*dir_ / "bad.json"), *dir_).code, 2);
}

TEST(Cli, SimulateZeroQlayer) {
    ScratchDir dir("cli_sim");
    spit(dir / "q.json", R"({"features": [0], "params": [0, 0], "fm_reps": 1})");
    const CliResult r = run_cli("simulate --qlayer " + q(dir / "q.json"), dir);
    ASSERT_EQ(r.code, 0) << r.err;
    const std::vector<std::string> rows = lines_of(r.out);
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_EQ(rows[0], "p=0.5");
    EXPECT_EQ(rows[1].rfind("grad_params=", 0), 0u);
    EXPECT_EQ(rows[2].rfind("grad_features=", 0), 0u);
}

TEST(Cli, SimulateGateListRoundTrip) {
    ScratchDir dir("cli_rt");
    Circuit c;
    c.n_qubits = 3;
    c.gates = {Gate::h(0), Gate::ry(1, 0.1 + 0.2), Gate::cx(0, 2),
               Gate::zz(1, 2, -2.718281828459045), Gate::rz(2, 1e-300)};
    spit(dir / "c.txt", format_circuit(c));
    const CliResult r = run_cli("simulate --circuit " + q(dir / "c.txt") + " --show gates", dir);
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(parse_circuit(r.out), c);

    const CliResult s = run_cli("simulate --circuit " + q(dir / "c.txt") + " --show state", dir);
    ASSERT_EQ(s.code, 0);
    EXPECT_EQ(lines_of(s.out).size(), 8u);
    const CliResult bad = run_cli("simulate --circuit " + q(dir / "c.txt") + " --qlayer x", dir);
    EXPECT_EQ(bad.code, 2);
    EXPECT_EQ(run_cli("simulate", dir).code, 2);
}

} // namespace
} // namespace qres
