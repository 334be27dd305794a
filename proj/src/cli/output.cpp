// Copyright 2026 The mdf-sim Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <algorithm>
#include <cmath>
#include <cstdio>

#include "mdf/cli.hpp"

namespace mdf::cli {

std::string format_number(double x) {
    if (x == 0.0) {
        return "0";
    }
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace {

void dump_into(const nlohmann::json &j, int indent, std::string &out, bool pretty = true) {
    const std::string pad(static_cast<std::size_t>(indent + 2), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
        case nlohmann::json::value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += pretty ? "{\n" : "{";
            bool first = true;
            for (const auto &[key, value] : j.items()) {
                if (!first) {
                    out += pretty ? ",\n" : ", ";
                }
                first = false;
                out += (pretty ? pad : "") + nlohmann::json(key).dump() + ": ";
                dump_into(value, indent + 2, out, pretty);
            }
            out += pretty ? "\n" + close_pad + "}" : "}";
            return;
        }
        case nlohmann::json::value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            // Arrays of scalars stay on one line.
            bool scalars = std::all_of(j.begin(), j.end(), [](const nlohmann::json &e) { return e.is_primitive(); });
            if (scalars || !pretty) {
                out += "[";
                for (std::size_t i = 0; i < j.size(); ++i) {
                    if (i != 0) {
                        out += ", ";
                    }
                    dump_into(j[i], indent, out, pretty);
                }
                out += "]";
                return;
            }
            out += "[\n";
            for (std::size_t i = 0; i < j.size(); ++i) {
                if (i != 0) {
                    out += ",\n";
                }
                out += pad;
                dump_into(j[i], indent + 2, out);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case nlohmann::json::value_t::number_float:
            out += format_number(j.get<double>());
            return;
        default:
            out += j.dump();
            return;
    }
}

std::string comment_line(const char *label, const nlohmann::json &j) {
    std::string flat;
    dump_into(j, 0, flat, false);
    return std::string("# ") + label + ": " + flat + "\n";
}

}  // namespace

std::string dump_json(const nlohmann::json &j) {
    std::string out;
    dump_into(j, 0, out);
    out += "\n";
    return out;
}

CsvWriter::CsvWriter(const nlohmann::json &config, const nlohmann::json &diagnostics, std::vector<std::string> columns) {
    text_ += comment_line("config", config);
    text_ += comment_line("diagnostics", diagnostics);
    for (std::size_t i = 0; i < columns.size(); ++i) {
        text_ += (i == 0 ? "" : ",") + columns[i];
    }
    text_ += "\n";
}

void CsvWriter::row(std::initializer_list<double> values) {
    bool first = true;
    for (double v : values) {
        text_ += (first ? "" : ",") + format_number(v);
        first = false;
    }
    text_ += "\n";
}

void CsvWriter::row_ints(std::initializer_list<long long> ints, std::initializer_list<double> values) {
    bool first = true;
    for (long long v : ints) {
        text_ += (first ? "" : ",") + std::to_string(v);
        first = false;
    }
    for (double v : values) {
        text_ += (first ? "" : ",") + format_number(v);
        first = false;
    }
    text_ += "\n";
}

}  // namespace mdf::cli
