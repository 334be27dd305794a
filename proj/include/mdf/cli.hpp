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


#ifndef MDF_CLI_HPP
#define MDF_CLI_HPP

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

namespace mdf::cli {

/// Bad parameters; reported with exit code 2.
class ConfigError : public std::invalid_argument {
   public:
    using std::invalid_argument::invalid_argument;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitInvalidConfig = 2;
inline constexpr int kExitDegenerate = 3;

/// Every parameter any subcommand understands. Which ones a command reads is
/// decided by resolved_config().
struct RunConfig {
    std::string command;
    std::string input = "mixture";  // pipeline: uniform | macro | mixture
    double g = 1.87;
    int s0 = 200;
    int delta_th = 0;
    double trust = 0.9;
    double tap_r = 0.1;
    double loss_R = 0.0;
    int S = 20;
    int Delta = 0;
    bool two_mode = false;
    bool processed = false;
    std::string weighting = "detection";
    int component = 0;
    double tail = 1e-9;
    std::vector<double> R_grid;
    std::vector<int> th_grid;

    std::string out = ".";
    std::string format = "csv";
    unsigned workers = 0;
    bool no_cache = false;
};

/// Throws ConfigError on out-of-range parameters.
void validate(const RunConfig &config);

/// The parameters that determine a command's output, as a JSON object with
/// sorted keys. Execution settings (workers, output location, cache use) are
/// excluded so that they cannot change the bytes written.
nlohmann::json resolved_config(const RunConfig &config);

/// A file produced by a command, relative to the output directory.
struct OutputFile {
    std::string name;
    std::string contents;
};

/// printf("%.12g"), with -0 printed as 0.
std::string format_number(double x);

/// CSV table with the resolved config and diagnostics embedded as leading
/// comment lines.
class CsvWriter {
   public:
    CsvWriter(const nlohmann::json &config, const nlohmann::json &diagnostics, std::vector<std::string> columns);
    void row(std::initializer_list<double> values);
    void row_ints(std::initializer_list<long long> ints, std::initializer_list<double> values);
    std::string str() const {
        return text_;
    }

   private:
    std::string text_;
};

/// Serialises JSON deterministically (sorted keys, %.12g numbers).
std::string dump_json(const nlohmann::json &j);

/// Runs the command described by config and returns its files.
std::vector<OutputFile> execute(const RunConfig &config);

std::uint64_t fnv1a(std::string_view bytes);

/// Content-addressed store of previous outputs, keyed by the FNV-1a hash of
/// the canonical resolved config.
class ResultCache {
   public:
    explicit ResultCache(std::filesystem::path dir);
    std::optional<std::vector<OutputFile>> load(const nlohmann::json &key) const;
    void store(const nlohmann::json &key, const std::vector<OutputFile> &files) const;
    std::filesystem::path entry_path(const nlohmann::json &key) const;

   private:
    std::filesystem::path dir_;
};

/// Full command-line entry point; returns the process exit code.
int run(int argc, char **argv);

}  // namespace mdf::cli

#endif
