// Copyright 2026 The adiatherm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// adiatherm <command> [--config file.json] [--seed S] [--out DIR] ...
// Exit codes: 0 ok, 1 usage/IO, 2 config, 3 backend capacity, 4 numerical.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "adiatherm/cli.hpp"

namespace cli = adiatherm::cli;

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw cli::ConfigError("cannot read config file " + path);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string describe_schema(const cli::Command& command) {
    std::string out = "config keys (defaults):\n";
    for (const auto& f : command.schema) out += "  " + f.name + " = " + f.default_value.dump() + "  " + f.help + "\n";
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Thermal state preparation by adiabatic evolution: experiment runner"};
    app.require_subcommand(1);

    struct Flags {
        std::string config_path;
        std::uint64_t seed = 0;
        std::string out = ".";
        std::string backend;
        int trajectories = 0;
        int shots = 0;
        bool dump_circuit = false;
        bool wall_time = false;
    };
    std::vector<std::pair<CLI::App*, Flags>> subs;
    subs.reserve(cli::commands().size());
    for (const auto& command : cli::commands()) {
        auto* sub = app.add_subcommand(command.name, command.summary);
        sub->footer(describe_schema(command));
        subs.emplace_back(sub, Flags{});
        auto& f = subs.back().second;
        sub->add_option("--config", f.config_path, "flat JSON config file");
        sub->add_option("--seed", f.seed, "master seed (u64)");
        sub->add_option("--out", f.out, "output directory")->capture_default_str();
        sub->add_option("--backend", f.backend, "dm, sv or traj")->check(CLI::IsMember({"dm", "sv", "traj"}));
        sub->add_option("--trajectories", f.trajectories, "trajectory count K");
        sub->add_option("--shots", f.shots, "emulated shots per basis");
        sub->add_flag("--dump-circuit", f.dump_circuit, "write the circuits in text form");
        sub->add_flag("--wall-time", f.wall_time, "record wall-clock time in the manifest");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : cli::kExitUsage;
    }

    for (std::size_t i = 0; i < subs.size(); ++i) {
        auto* sub = subs[i].first;
        if (!sub->parsed()) continue;
        const auto& f = subs[i].second;
        const auto& command = cli::commands()[i];
        cli::RunOptions options;
        try {
            if (!f.config_path.empty()) options.config_text = read_file(f.config_path);
        } catch (const cli::ConfigError& e) {
            std::cerr << "config error: " << e.what() << "\n";
            return cli::kExitConfig;
        }
        if (sub->count("--seed") > 0) options.seed = f.seed;
        if (sub->count("--backend") > 0) options.backend = f.backend;
        if (sub->count("--trajectories") > 0) options.trajectories = f.trajectories;
        if (sub->count("--shots") > 0) options.shots = f.shots;
        options.dump_circuit = f.dump_circuit;
        options.record_wall_time = f.wall_time;
        options.out_dir = f.out;
        return cli::run_command_safely(command, options, std::cerr);
    }
    return cli::kExitUsage;
}
