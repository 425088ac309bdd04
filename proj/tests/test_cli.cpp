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

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <string>

#include <doctest.h>

#include "adiatherm/cli.hpp"

using namespace adiatherm;
using namespace adiatherm::cli;
namespace fs = std::filesystem;

namespace {

/// Fresh scratch directory removed on scope exit.
class ScratchDir {
  public:
    explicit ScratchDir(const std::string& tag) : path_(fs::temp_directory_path() / ("adiatherm_test_" + tag)) {
        fs::remove_all(path_);
        fs::create_directories(path_);
    }
    ~ScratchDir() {
        std::error_code ec;
        fs::remove_all(path_, ec);
    }
    ScratchDir(const ScratchDir&) = delete;
    ScratchDir& operator=(const ScratchDir&) = delete;
    const fs::path& path() const { return path_; }

  private:
    fs::path path_;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

std::string first_line(const fs::path& p) {
    std::ifstream in(p);
    std::string line;
    std::getline(in, line);
    return line;
}

int run_cli(const std::string& args) {
    const std::string cmd = std::string(ADIATHERM_CLI_PATH) + " " + args + " >/dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

const Schema kSchema{
    {"seed", FieldKind::Integer, 1, "seed"},
    {"x", FieldKind::Number, 0.5, "a number"},
    {"n", FieldKind::Integer, 4, "an integer"},
    {"flag", FieldKind::Boolean, false, "a flag"},
    {"name", FieldKind::String, "a", "a string"},
    {"xs", FieldKind::NumberList, Json::array({1.0, 2.0}), "numbers"},
    {"ns", FieldKind::IntegerList, Json::array({1, 2}), "integers"},
    {"maybe", FieldKind::OptionalNumber, nullptr, "optional"},
};

}  // namespace

TEST_CASE("config defaults and overrides") {
    const auto d = Config::parse(kSchema, "  \n");
    CHECK(d.number("x") == 0.5);
    CHECK(d.integer("n") == 4);
    CHECK_FALSE(d.boolean("flag"));
    CHECK(d.text("name") == "a");
    CHECK(d.numbers("xs") == std::vector<double>{1.0, 2.0});
    CHECK(d.integers("ns") == std::vector<int>{1, 2});
    CHECK_FALSE(d.optional_number("maybe").has_value());
    CHECK(d.seed() == 1);

    const auto c = Config::parse(kSchema, R"({"x": 2, "n": 6.0, "maybe": 0.25, "seed": 18446744073709551615})");
    CHECK(c.number("x") == 2.0);
    CHECK(c.integer("n") == 6);
    CHECK(*c.optional_number("maybe") == 0.25);
    CHECK(c.seed() == std::numeric_limits<std::uint64_t>::max());
    // Resolved values keep schema order and include defaults.
    auto it = c.values().begin();
    CHECK(it.key() == "seed");
    CHECK(c.values().size() == kSchema.size());
}

TEST_CASE("config rejects malformed input") {
    CHECK_THROWS_AS(Config::parse(kSchema, "{"), ConfigError);
    CHECK_THROWS_AS(Config::parse(kSchema, "[1, 2]"), ConfigError);
    CHECK_THROWS_AS(Config::parse(kSchema, R"({"unknown": 1})"), ConfigError);
    CHECK_THROWS_AS(Config::parse(kSchema, R"({"x": {"nested": 1}})"), ConfigError);
    CHECK_THROWS_AS(Config::parse(kSchema, R"({"x": "1.0"})"), ConfigError);
    CHECK_THROWS_AS(Config::parse(kSchema, R"({"n": 2.5})"), ConfigError);
    CHECK_THROWS_AS(Config::parse(kSchema, R"({"flag": 1})"), ConfigError);
    CHECK_THROWS_AS(Config::parse(kSchema, R"({"xs": [1, "a"]})"), ConfigError);
    CHECK_THROWS_AS(Config::parse(kSchema, R"({"n": 1e12})").integer("n"), ConfigError);
    CHECK_THROWS_AS(Config::parse(kSchema, R"({"seed": -3})").seed(), ConfigError);
    CHECK_THROWS_AS(Config::parse(kSchema, "").number("nope"), ConfigError);
}

TEST_CASE("number formatting is shortest round-trip") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(-0.0) == "0");
    CHECK(format_number(1e-300) == "1e-300");
    CHECK(format_number(std::nan("")) == "nan");
    CHECK(format_number(-std::numeric_limits<double>::infinity()) == "-inf");
    for (double v : {1.0 / 3.0, -2.465012345678901, 6.02e23}) CHECK(std::stod(format_number(v)) == v);
}

TEST_CASE("CSV table") {
    CsvTable t({"a", "b"});
    t.row({"1", "2"}).row({"3", "4"});
    CHECK(t.str() == "a,b\n1,2\n3,4\n");
    CHECK(t.rows() == 2);
    CHECK_THROWS_AS(t.row({"1"}), InvalidArgument);
}

TEST_CASE("command registry") {
    for (const char* name :
         {"quench-vs-adiabatic", "gibbs-compare", "noise-curves", "adiabaticity", "table1", "perturb-scaling"}) {
        const auto& c = find_command(name);
        CHECK(c.name == name);
        REQUIRE(!c.schema.empty());
        CHECK(c.schema[0].name == "seed");
        CHECK_NOTHROW(Config::parse(c.schema, ""));
    }
    CHECK_THROWS_AS(find_command("nope"), ConfigError);
}

TEST_CASE("small runs write the documented headers and identical bytes on rerun") {
    ScratchDir a("rerun_a");
    ScratchDir b("rerun_b");
    RunOptions opts;
    opts.config_text = R"({"n_list": [4, 6], "steps": 6, "dt": 0.1})";
    for (const auto* dir : {&a, &b}) {
        opts.out_dir = dir->path();
        run_command(find_command("quench-vs-adiabatic"), opts);
    }
    for (const auto& entry : fs::directory_iterator(a.path())) {
        const auto other = b.path() / entry.path().filename();
        REQUIRE(fs::exists(other));
        CHECK(slurp(entry.path()) == slurp(other));
        CHECK(entry.path().extension() != ".tmp");
    }
    CHECK(first_line(a.path() / "timeseries_adiabatic_N4.csv") == kTimeSeriesHeader);
    CHECK(first_line(a.path() / "timeseries_quench_N6.csv") == kTimeSeriesHeader);
    CHECK(first_line(a.path() / "drift.csv") == "N,inv_N,drift_area,quench_plateau");

    const auto manifest = Json::parse(slurp(a.path() / "manifest.json"));
    CHECK(manifest["command"] == "quench-vs-adiabatic");
    CHECK(manifest["config"]["steps"] == 6);
    CHECK(manifest["config"]["h_x"] == 1.0);  // defaults are echoed
    CHECK_FALSE(manifest.contains("wall_time_s"));
    for (const auto& f : manifest["outputs"]) CHECK(fs::exists(a.path() / f.get<std::string>()));
}

TEST_CASE("thermal curve files use the curve header") {
    ScratchDir d("curves");
    RunOptions opts;
    opts.config_text = R"({"n": 4, "steps": 6, "h_x_list": [1], "h_z_list": [1], "j_list": [-1],
                           "compare_beta_max": 3.0, "beta0_max": 1.0})";
    opts.out_dir = d.path();
    opts.record_wall_time = true;
    run_command(find_command("gibbs-compare"), opts);
    CHECK(first_line(d.path() / "curves_set0.csv") == kCurveHeader);
    CHECK(Json::parse(slurp(d.path() / "manifest.json")).contains("wall_time_s"));
}

TEST_CASE("table1 writes a flat JSON object") {
    ScratchDir d("table1");
    RunOptions opts;
    opts.config_text = R"({"lx": 2, "ly": 2})";
    opts.out_dir = d.path();
    run_command(find_command("table1"), opts);
    const auto t = Json::parse(slurp(d.path() / "table1.json"));
    CHECK(t.is_object());
    for (const auto& [key, value] : t.items()) CHECK_FALSE(value.is_object());
    CHECK(t.contains("e"));
    CHECK(t.contains("e error"));
    CHECK(t["m"].get<double>() == doctest::Approx(-1.0));
    CHECK(t["hardware temperature"].get<double>() == doctest::Approx(2.562).epsilon(0.03 / 2.562));
}

TEST_CASE("flag overrides are checked against the schema") {
    ScratchDir d("flags");
    RunOptions opts;
    opts.out_dir = d.path();
    opts.shots = 10;
    CHECK_THROWS_AS(run_command(find_command("perturb-scaling"), opts), ConfigError);
    opts.shots.reset();
    opts.backend = "sv";
    CHECK_THROWS_AS(run_command(find_command("adiabaticity"), opts), InvalidArgument);
}

TEST_CASE("executable exit codes") {
    ScratchDir d("exit");
    const auto out = d.path().string();
    auto write = [&](const std::string& name, const std::string& text) {
        std::ofstream(d.path() / name) << text;
        return (d.path() / name).string();
    };
    const auto ok = write("ok.json", R"({"n_list": [4], "t_count": 9, "fit_t_min": 1, "lambdas": [1, 2]})");
    CHECK(run_cli("perturb-scaling --config " + ok + " --out " + out) == kExitOk);
    CHECK(fs::exists(d.path() / "manifest.json"));
    CHECK(fs::exists(d.path() / "slopes.csv"));

    CHECK(run_cli("") == kExitUsage);
    CHECK(run_cli("no-such-command") == kExitUsage);
    CHECK(run_cli("table1 --backend quantum") == kExitUsage);
    CHECK(run_cli("table1 --config " + out + "/missing.json --out " + out) == kExitConfig);
    CHECK(run_cli("table1 --config " + write("bad.json", "{\"lx\": ") + " --out " + out) == kExitConfig);
    CHECK(run_cli("table1 --config " + write("unknown.json", R"({"lz": 3})") + " --out " + out) == kExitConfig);
    CHECK(run_cli("perturb-scaling --config " + write("big.json", R"({"n_list": [10]})") + " --out " + out) ==
          kExitCapacity);
    CHECK(run_cli("table1 --backend dm --out " + out) == kExitCapacity);
    // An empty comparison window is reported as nan rather than failing the run.
    CHECK(run_cli("gibbs-compare --config " + write("empty.json", R"({"n": 4, "steps": 4, "h_x_list": [1],
        "h_z_list": [1], "j_list": [-1], "compare_beta_min": 50, "compare_beta_max": 60, "beta0_max": 0.5})") +
                  " --out " + out) == kExitOk);
    CHECK(slurp(d.path() / "agreement.csv").find("nan") != std::string::npos);
    CHECK(run_cli("perturb-scaling --help") == kExitOk);
}
