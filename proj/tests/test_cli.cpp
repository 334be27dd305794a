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


#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "mdf/cli.hpp"

namespace mdf::cli {
namespace {

namespace fs = std::filesystem;

fs::path fresh_dir(const std::string &name) {
    fs::path p = fs::temp_directory_path() / ("mdf_cli_test_" + name + "_" + std::to_string(::getpid()));
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path &p) {
    std::ifstream is(p, std::ios::binary);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

int run_cli(const std::string &args, const fs::path &stderr_file = "/dev/null") {
    std::string cmd = std::string(MDF_CLI_PATH) + " " + args + " > /dev/null 2> " + stderr_file.string();
    int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

TEST(FormatNumber, Examples) {
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(-0.0), "0");
    EXPECT_EQ(format_number(1.0 / 3.0), "0.333333333333");
    EXPECT_EQ(format_number(1e-20), "1e-20");
}

TEST(Fnv1a, KnownVectors) {
    EXPECT_EQ(fnv1a(""), 0xcbf29ce484222325ULL);
    EXPECT_EQ(fnv1a("a"), 0xaf63dc4c8601ec8cULL);
    EXPECT_EQ(fnv1a("foobar"), 0x85944171f73967e8ULL);
}

TEST(ResolvedConfig, ExcludesExecutionSettings) {
    RunConfig a;
    a.command = "ideal";
    RunConfig b = a;
    b.workers = 7;
    b.out = "/elsewhere";
    b.no_cache = true;
    EXPECT_EQ(resolved_config(a), resolved_config(b));
    b.g = 1.0;
    EXPECT_NE(resolved_config(a), resolved_config(b));
}

TEST(Validate, RejectsBadParameters) {
    RunConfig c;
    c.command = "conditional";
    c.S = 3;
    c.Delta = 0;
    EXPECT_THROW(validate(c), ConfigError);
    c.S = 4;
    EXPECT_NO_THROW(validate(c));
    c.trust = 2.0;
    EXPECT_THROW(validate(c), ConfigError);
    RunConfig p;
    p.command = "pipeline";
    p.tap_r = 1.0;
    EXPECT_THROW(validate(p), ConfigError);
    p.tap_r = 0.1;
    p.input = "bogus";
    EXPECT_THROW(validate(p), ConfigError);
    RunConfig f;
    f.command = "ideal";
    f.format = "xml";
    EXPECT_THROW(validate(f), ConfigError);
}

TEST(Execute, ConditionalSmallOutcome) {
    RunConfig c;
    c.command = "conditional";
    c.S = 2;
    c.Delta = 0;
    std::vector<OutputFile> files = execute(c);
    ASSERT_EQ(files.size(), 2u);
    EXPECT_EQ(files[0].name, "conditional.csv");
    EXPECT_EQ(files[1].name, "conditional_summary.json");
    const std::string &t = files[0].contents;
    EXPECT_EQ(t.rfind("# config: ", 0), 0u);
    EXPECT_NE(t.find("\n-2,0.5\n"), std::string::npos);
    EXPECT_NE(t.find("\n0,0\n"), std::string::npos);
    EXPECT_NE(t.find("\n2,0.5\n"), std::string::npos);
}

TEST(Execute, JsonFormatIsParseable) {
    RunConfig c;
    c.command = "conditional";
    c.S = 4;
    c.Delta = 0;
    c.format = "json";
    std::vector<OutputFile> files = execute(c);
    ASSERT_EQ(files.size(), 1u);
    EXPECT_EQ(files[0].name, "conditional.json");
    nlohmann::json j = nlohmann::json::parse(files[0].contents);
    EXPECT_TRUE(j.contains("config"));
}

TEST(Cache, RoundTripAndKeyCheck) {
    fs::path dir = fresh_dir("cache");
    ResultCache cache(dir);
    nlohmann::json key{{"a", 1}};
    EXPECT_FALSE(cache.load(key).has_value());
    cache.store(key, {{"x.csv", "1,2\n"}});
    auto got = cache.load(key);
    ASSERT_TRUE(got.has_value());
    ASSERT_EQ(got->size(), 1u);
    EXPECT_EQ((*got)[0].contents, "1,2\n");
    EXPECT_FALSE(cache.load(nlohmann::json{{"a", 2}}).has_value());
    fs::remove_all(dir);
}

TEST(Binary, ExitCodes) {
    fs::path dir = fresh_dir("exit");
    fs::path err = dir / "err.txt";
    EXPECT_EQ(run_cli("conditional --S 4 --Delta 0 --no-cache --out " + dir.string()), 0);
    EXPECT_TRUE(fs::exists(dir / "conditional.csv"));
    EXPECT_EQ(run_cli("conditional --S 3 --Delta 0 --out " + dir.string(), err), 2);
    EXPECT_NE(slurp(err).find("\"invalid_config\""), std::string::npos);
    EXPECT_EQ(run_cli("ideal --g -1 --out " + dir.string()), 2);
    EXPECT_EQ(run_cli("nosuchcommand"), 2);
    EXPECT_EQ(run_cli("pipeline --input uniform --s0 0 --tap-r 0.1 --S 2 --Delta 0 --no-cache --out " + dir.string(), err), 3);
    EXPECT_NE(slurp(err).find("\"degenerate_conditioning\""), std::string::npos);
    fs::remove_all(dir);
}

TEST(Binary, ConfigFileSections) {
    fs::path dir = fresh_dir("config");
    fs::path cfg = dir / "run.toml";
    std::ofstream(cfg) << "[conditional]\nS = 6\nDelta = 2\n";
    ASSERT_EQ(run_cli("--config " + cfg.string() + " conditional --no-cache --out " + dir.string()), 0);
    std::string t = slurp(dir / "conditional.csv");
    EXPECT_NE(t.find("\"S\": 6"), std::string::npos);
    ASSERT_EQ(run_cli("--config " + cfg.string() + " conditional --S 8 --no-cache --out " + dir.string()), 0);
    t = slurp(dir / "conditional.csv");
    EXPECT_NE(t.find("\"S\": 8"), std::string::npos);
    fs::remove_all(dir);
}

TEST(Binary, WorkerCountDoesNotChangeBytes) {
    fs::path a = fresh_dir("w1");
    fs::path b = fresh_dir("w3");
    const std::string args = "pipeline --input macro --g 1.0 --S 6 --Delta 2 --loss-R 0.3 --no-cache";
    ASSERT_EQ(run_cli(args + " --workers 1 --out " + a.string()), 0);
    ASSERT_EQ(run_cli(args + " --workers 3 --out " + b.string()), 0);
    for (const char *name : {"pipeline.csv", "pipeline_joint.csv"}) {
        EXPECT_EQ(slurp(a / name), slurp(b / name)) << name;
    }
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST(Binary, CachedRunIsByteIdentical) {
    fs::path dir = fresh_dir("cached");
    const std::string args = "ideal --g 0.7 --delta-th 2 --out " + dir.string();
    ASSERT_EQ(run_cli(args), 0);
    std::string first = slurp(dir / "ideal.csv");
    ASSERT_FALSE(fs::is_empty(dir / ".mdf-cache"));
    ASSERT_EQ(run_cli(args), 0);
    EXPECT_EQ(slurp(dir / "ideal.csv"), first);
    fs::remove_all(dir);
}

}  // namespace
}  // namespace mdf::cli
