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

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <system_error>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "adiatherm/cli.hpp"

namespace adiatherm::cli {

namespace {

bool is_integral_number(const Json& v) {
    if (v.is_number_integer() || v.is_number_unsigned()) return true;
    if (!v.is_number_float()) return false;
    const double d = v.get<double>();
    return std::isfinite(d) && d == std::floor(d) && std::abs(d) < 9.0e15;
}

std::string_view kind_name(FieldKind kind) {
    switch (kind) {
        case FieldKind::Number: return "number";
        case FieldKind::Integer: return "integer";
        case FieldKind::Boolean: return "boolean";
        case FieldKind::String: return "string";
        case FieldKind::NumberList: return "list of numbers";
        case FieldKind::IntegerList: return "list of integers";
        case FieldKind::OptionalNumber: return "number or null";
    }
    return "value";
}

/// Canonical stored form: integers as int64 (or uint64 for seeds), numbers as double.
Json coerce(const Field& f, const Json& v) {
    auto fail = [&] {
        return ConfigError(fmt::format("config key '{}' must be a {}, got {}", f.name, kind_name(f.kind), v.dump()));
    };
    auto as_number = [&](const Json& x) {
        if (!x.is_number()) throw fail();
        const double d = x.get<double>();
        if (!std::isfinite(d)) throw fail();
        return Json(d);
    };
    auto as_integer = [&](const Json& x) {
        if (!is_integral_number(x)) throw fail();
        if (x.is_number_unsigned()) return Json(x.get<std::uint64_t>());
        return Json(static_cast<std::int64_t>(x.get<double>()));
    };
    switch (f.kind) {
        case FieldKind::Number: return as_number(v);
        case FieldKind::OptionalNumber: return v.is_null() ? Json(nullptr) : as_number(v);
        case FieldKind::Integer: return as_integer(v);
        case FieldKind::Boolean:
            if (!v.is_boolean()) throw fail();
            return v;
        case FieldKind::String:
            if (!v.is_string()) throw fail();
            return v;
        case FieldKind::NumberList:
        case FieldKind::IntegerList: {
            if (!v.is_array()) throw fail();
            Json out = Json::array();
            for (const auto& x : v) out.push_back(f.kind == FieldKind::NumberList ? as_number(x) : as_integer(x));
            return out;
        }
    }
    throw fail();
}

}  // namespace

Config Config::parse(const Schema& schema, std::string_view text) {
    Config cfg;
    cfg.schema_ = schema;
    for (const auto& f : schema) cfg.values_[f.name] = coerce(f, f.default_value);

    const bool blank = std::all_of(text.begin(), text.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); });
    if (blank) return cfg;
    Json parsed;
    try {
        parsed = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw ConfigError(fmt::format("config is not valid JSON: {}", e.what()));
    }
    if (!parsed.is_object()) throw ConfigError("config must be a single JSON object of key-value pairs");
    for (const auto& [key, v] : parsed.items()) {
        if (v.is_object()) throw ConfigError(fmt::format("config key '{}' is nested; the format is flat", key));
        cfg.set(key, v);
    }
    return cfg;
}

const Field& Config::field(std::string_view key) const {
    for (const auto& f : schema_) {
        if (f.name == key) return f;
    }
    throw ConfigError(fmt::format("unknown config key '{}'", key));
}

void Config::set(std::string_view key, const Json& v) { values_[std::string(key)] = coerce(field(key), v); }

const Json& Config::value(std::string_view key) const {
    field(key);
    return values_.at(std::string(key));
}

double Config::number(std::string_view key) const { return value(key).get<double>(); }

std::optional<double> Config::optional_number(std::string_view key) const {
    const Json& v = value(key);
    if (v.is_null()) return std::nullopt;
    return v.get<double>();
}

int Config::integer(std::string_view key) const {
    const Json& v = value(key);
    if (v.is_number_unsigned() && v.get<std::uint64_t>() > static_cast<std::uint64_t>(std::numeric_limits<int>::max())) {
        throw ConfigError(fmt::format("config key '{}' is out of range", key));
    }
    const auto i = v.get<std::int64_t>();
    if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
        throw ConfigError(fmt::format("config key '{}' is out of range", key));
    }
    return static_cast<int>(i);
}

std::uint64_t Config::seed() const {
    const Json& v = value("seed");
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    const auto i = v.get<std::int64_t>();
    if (i < 0) throw ConfigError("seed must be non-negative");
    return static_cast<std::uint64_t>(i);
}

bool Config::boolean(std::string_view key) const { return value(key).get<bool>(); }

std::string Config::text(std::string_view key) const { return value(key).get<std::string>(); }

std::vector<double> Config::numbers(std::string_view key) const { return value(key).get<std::vector<double>>(); }

std::vector<int> Config::integers(std::string_view key) const {
    std::vector<int> out;
    for (const auto& v : value(key)) {
        const auto i = v.get<std::int64_t>();
        if (i < std::numeric_limits<int>::min() || i > std::numeric_limits<int>::max()) {
            throw ConfigError(fmt::format("config key '{}' holds an out-of-range entry", key));
        }
        out.push_back(static_cast<int>(i));
    }
    return out;
}

std::string format_number(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    if (v == 0.0) return "0";  // folds -0
    return fmt::format("{}", v);
}

CsvTable::CsvTable(std::vector<std::string> header) : header_(std::move(header)) {}

CsvTable& CsvTable::row(std::vector<std::string> cells) {
    if (cells.size() != header_.size()) {
        throw InvalidArgument(fmt::format("CSV row has {} cells, header has {}", cells.size(), header_.size()));
    }
    rows_.push_back(std::move(cells));
    return *this;
}

std::string CsvTable::header_line() const { return fmt::format("{}", fmt::join(header_, ",")); }

std::string CsvTable::str() const {
    std::string out = header_line() + "\n";
    for (const auto& r : rows_) out += fmt::format("{}\n", fmt::join(r, ","));
    return out;
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error(fmt::format("cannot open {} for writing", tmp.string()));
        f.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        f.flush();
        if (!f) throw std::runtime_error(fmt::format("write to {} failed", tmp.string()));
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw std::runtime_error(fmt::format("cannot rename into {}", path.string()));
    }
}

}  // namespace adiatherm::cli
