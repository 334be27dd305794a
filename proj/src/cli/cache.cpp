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


#include <cstdio>
#include <fstream>
#include <sstream>

#include "mdf/cli.hpp"

namespace mdf::cli {

std::uint64_t fnv1a(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

ResultCache::ResultCache(std::filesystem::path dir) : dir_(std::move(dir)) {
}

std::filesystem::path ResultCache::entry_path(const nlohmann::json &key) const {
    char hex[17];
    std::snprintf(hex, sizeof hex, "%016llx", static_cast<unsigned long long>(fnv1a(key.dump())));
    return dir_ / (std::string(hex) + ".json");
}

std::optional<std::vector<OutputFile>> ResultCache::load(const nlohmann::json &key) const {
    std::ifstream in(entry_path(key));
    if (!in) {
        return std::nullopt;
    }
    nlohmann::json entry;
    try {
        in >> entry;
        // A hash collision or an older layout is treated as a miss.
        if (entry.at("key") != key) {
            return std::nullopt;
        }
        std::vector<OutputFile> files;
        for (const auto &f : entry.at("files")) {
            files.push_back({f.at("name").get<std::string>(), f.at("contents").get<std::string>()});
        }
        return files;
    } catch (const nlohmann::json::exception &) {
        return std::nullopt;
    }
}

void ResultCache::store(const nlohmann::json &key, const std::vector<OutputFile> &files) const {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) {
        return;
    }
    nlohmann::json entry{{"key", key}, {"files", nlohmann::json::array()}};
    for (const auto &f : files) {
        entry["files"].push_back({{"name", f.name}, {"contents", f.contents}});
    }
    // Write-then-rename so a concurrent reader never sees half an entry.
    std::filesystem::path final_path = entry_path(key);
    std::filesystem::path tmp = final_path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp);
        out << entry.dump();
        if (!out) {
            return;
        }
    }
    std::filesystem::rename(tmp, final_path, ec);
}

}  // namespace mdf::cli
