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

#ifndef ADIATHERM_CLI_HPP
#define ADIATHERM_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <json.hpp>

#include "adiatherm/types.hpp"

namespace adiatherm::cli {

using Json = nlohmann::ordered_json;

/// Malformed config text, unknown key, wrong type or out-of-range value.
class ConfigError : public InvalidArgument {
  public:
    using InvalidArgument::InvalidArgument;
};

enum class FieldKind { Number, Integer, Boolean, String, NumberList, IntegerList, OptionalNumber };

struct Field {
    std::string name;
    FieldKind kind = FieldKind::Number;
    Json default_value;
    std::string help;
};

using Schema = std::vector<Field>;

/// Flat key-value configuration checked against a schema. Every schema key
/// is present after parsing, defaults filled in, in schema order.
class Config {
  public:
    /// Empty or whitespace-only text yields the defaults.
    static Config parse(const Schema& schema, std::string_view text);

    /// Replaces one value after type checking (used by command-line flags).
    void set(std::string_view key, const Json& value);

    double number(std::string_view key) const;
    std::optional<double> optional_number(std::string_view key) const;
    int integer(std::string_view key) const;
    std::uint64_t seed() const;
    bool boolean(std::string_view key) const;
    std::string text(std::string_view key) const;
    std::vector<double> numbers(std::string_view key) const;
    std::vector<int> integers(std::string_view key) const;

    /// Resolved configuration, defaults included.
    const Json& values() const { return values_; }

  private:
    const Field& field(std::string_view key) const;
    const Json& value(std::string_view key) const;

    Schema schema_;
    Json values_ = Json::object();
};

/// Shortest round-trip decimal form; identical across runs for identical input.
std::string format_number(double v);

/// Small CSV builder with a fixed header.
class CsvTable {
  public:
    explicit CsvTable(std::vector<std::string> header);
    CsvTable& row(std::vector<std::string> cells);
    std::string header_line() const;
    std::string str() const;
    std::size_t rows() const { return rows_.size(); }

  private:
    std::vector<std::string> header_;
    std::vector<std::vector<std::string>> rows_;
};

inline constexpr std::string_view kCurveHeader = "beta0,E,S,beta_f,p,M,dt,N";
inline constexpr std::string_view kTimeSeriesHeader = "t,S_exact,S_xestimate,setting,N,p";

/// Files produced by one subcommand, relative to the output directory.
struct RunOutput {
    std::vector<std::pair<std::string, std::string>> files;
    void add(std::string name, std::string contents) { files.emplace_back(std::move(name), std::move(contents)); }
};

/// Command-line overrides; unset fields keep the config file's values.
struct RunOptions {
    std::string config_text;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> backend;
    std::optional<int> trajectories;
    std::optional<int> shots;
    bool dump_circuit = false;
    std::filesystem::path out_dir = ".";
    /// Adds wall-clock seconds to the manifest; off by default so that
    /// reruns stay byte-identical.
    bool record_wall_time = false;
};

struct Command {
    std::string name;
    std::string summary;
    Schema schema;
    std::function<RunOutput(const Config&, bool dump_circuit)> run;
};

const std::vector<Command>& commands();
const Command& find_command(std::string_view name);

/// Resolves the config, runs the command and writes its files plus
/// manifest.json into out_dir, each through a temporary and a rename.
/// Returns the resolved config.
Config run_command(const Command& command, const RunOptions& options);

enum ExitCode : int {
    kExitOk = 0,
    kExitUsage = 1,
    kExitConfig = 2,
    kExitCapacity = 3,
    kExitNumerical = 4,
};

/// run_command with exceptions mapped to exit codes and reported on err.
int run_command_safely(const Command& command, const RunOptions& options, std::ostream& err);

/// Atomic single-file write: contents go to a sibling temporary first.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace adiatherm::cli

#endif  // ADIATHERM_CLI_HPP
