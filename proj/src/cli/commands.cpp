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


#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>

#include "mdf/cli.hpp"
#include "mdf/errors.hpp"
#include "mdf/ideal_filter.hpp"
#include "mdf/operational.hpp"

namespace mdf::cli {

namespace {

using nlohmann::json;

constexpr int kOutputVersion = 1;

void require(bool ok, const std::string &message) {
    if (!ok) {
        throw ConfigError(message);
    }
}

bool is_unit_interval(double x) {
    return x >= 0.0 && x <= 1.0;
}

Parallelism parallelism(const RunConfig &c) {
    return Parallelism{c.workers};
}

json peak_json(const Peak &p) {
    return {{"k", p.k}, {"l", p.l}, {"value", p.value}};
}

json report_json(const DistinguishabilityReport &r) {
    return {{"v", r.v}, {"P_S1", r.P_S1}, {"P_S2", r.P_S2}, {"diagonal", r.diagonal}, {"success_prob", r.success_prob}};
}

StateEnsemble pipeline_input(const RunConfig &c) {
    if (c.input == "uniform") {
        return StateEnsemble(uniform_diff_state(c.s0));
    }
    if (c.input == "macro") {
        return StateEnsemble(macro_qubit(GainParam(c.g), Orientation::Phi, c.tail));
    }
    return macro_qubit_mixture(GainParam(c.g), c.tail);
}

/// Either name.csv + name_summary.json, or a single name.json.
std::vector<OutputFile> package(const RunConfig &c, const std::string &name, const json &config, const json &diagnostics,
                                const json &summary, const std::vector<std::string> &columns,
                                const std::vector<std::vector<double>> &rows, std::size_t int_columns) {
    if (c.format == "json") {
        json data = json::array();
        for (const auto &r : rows) {
            json row = json::array();
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i < int_columns) {
                    row.push_back(static_cast<long long>(std::llround(r[i])));
                } else {
                    row.push_back(r[i]);
                }
            }
            data.push_back(std::move(row));
        }
        json doc{{"config", config}, {"diagnostics", diagnostics}, {"summary", summary}, {"columns", columns},
                 {"data", std::move(data)}};
        return {{name + ".json", dump_json(doc)}};
    }
    std::string text;
    {
        CsvWriter w(config, diagnostics, columns);
        text = w.str();
    }
    for (const auto &r : rows) {
        for (std::size_t i = 0; i < r.size(); ++i) {
            if (i != 0) {
                text += ",";
            }
            text += i < int_columns ? std::to_string(std::llround(r[i])) : format_number(r[i]);
        }
        text += "\n";
    }
    json side{{"config", config}, {"diagnostics", diagnostics}, {"summary", summary}};
    return {{name + ".csv", text}, {name + "_summary.json", dump_json(side)}};
}

std::vector<std::vector<double>> joint_rows(const JointPhotonDistribution &p) {
    std::vector<std::vector<double>> rows;
    for (int k = 0; k < p.rows(); ++k) {
        for (int l = 0; l < p.cols(); ++l) {
            if (p(k, l) > 0.0) {
                rows.push_back({static_cast<double>(k), static_cast<double>(l), p(k, l)});
            }
        }
    }
    return rows;
}

/// Nonzero entries; with lattice set, every d of the parity of S_ref instead.
std::vector<std::vector<double>> diff_rows(const DiffDistribution &d, bool lattice = false) {
    std::vector<std::vector<double>> rows;
    for (int x = -d.S_ref(); x <= d.S_ref(); ++x) {
        if (lattice ? (x + d.S_ref()) % 2 == 0 : d(x) > 0.0) {
            rows.push_back({static_cast<double>(x), d(x)});
        }
    }
    return rows;
}

/// (s_t, delta_t, prob) sorted by s_t then delta_t.
std::vector<std::vector<double>> sum_diff_rows(const JointPhotonDistribution &p) {
    std::vector<std::vector<double>> rows;
    const int s_max = p.rows() + p.cols() - 2;
    for (int s = 0; s <= s_max; ++s) {
        for (int l = std::min(s, p.cols() - 1); l >= 0; --l) {
            int k = s - l;
            if (k >= p.rows()) {
                break;
            }
            if (p(k, l) > 0.0) {
                rows.push_back({static_cast<double>(s), static_cast<double>(k - l), p(k, l)});
            }
        }
    }
    return rows;
}

std::vector<OutputFile> run_ideal(const RunConfig &c, const json &config) {
    TwoModeFockState phi = macro_qubit(GainParam(c.g), Orientation::Phi, c.tail);
    double ps = 0.0;
    FilterThreshold th(c.delta_th);
    JointPhotonDistribution p =
        lossy_photon_distribution(StateEnsemble(phi), LossChannel(c.loss_R), th, &ps, parallelism(c));
    DistinguishabilityReport rep = distinguishability(p, ps);
    PeakSummary peaks = peak_summary(p);
    json diagnostics{{"tail_mass", phi.tail_mass()}, {"discarded_mass", p.discarded_mass},
                     {"grid", {p.rows(), p.cols()}}, {"terms", phi.size()}};
    json summary = report_json(rep);
    summary["peaks"] = {{"s1", peak_json(peaks.s1)},
                        {"s2", peak_json(peaks.s2)},
                        {"left_edge", peak_json(peaks.left_edge)},
                        {"bottom_edge", peak_json(peaks.bottom_edge)}};
    summary["gap_depth"] = gap_depth(p, th);
    return package(c, "ideal", config, diagnostics, summary, {"k", "l", "p"}, joint_rows(p), 2);
}

std::vector<OutputFile> run_conditional(const RunConfig &c, const json &config) {
    DiffDistribution d = pbs_conditional_diff(DetectionOutcome(c.S, c.Delta));
    TrustPolicy policy(c.delta_th, c.trust);
    double acc = acceptance_probability(d, c.delta_th);
    json diagnostics{{"normalisation", d.total()}};
    json summary{{"acceptance", acc}, {"shutter_open", shutter_decision(d, policy)}};
    return package(c, "conditional", config, diagnostics, summary, {"delta_r", "prob"}, diff_rows(d, true), 1);
}

std::vector<OutputFile> run_pipeline(const RunConfig &c, const json &config) {
    StateEnsemble input = pipeline_input(c);
    TapSpec tap(c.tap_r);
    TrustPolicy policy(c.delta_th, c.trust);
    json diagnostics{{"tail_mass", input.tail_mass()}};

    if (c.processed) {
        ProcessedOptions opt;
        opt.weighting = c.weighting == "uniform" ? Weighting::Uniform : Weighting::Detection;
        opt.component = static_cast<std::size_t>(c.component);
        opt.par = parallelism(c);
        ProcessedResult r = processed_photon_distribution(input, tap, policy, opt);
        json slices = json::array();
        for (const auto &s : r.slices) {
            slices.push_back({{"S", s.S}, {"outcome_probability", s.outcome_probability},
                              {"acceptance", s.acceptance}, {"accepted", s.accepted}});
        }
        diagnostics["discarded_mass"] = r.p.discarded_mass;
        json summary = report_json(r.report);
        summary["slices"] = std::move(slices);
        return package(c, "processed", config, diagnostics, summary, {"k", "l", "p"}, joint_rows(r.p), 2);
    }

    DetectionOutcome out(c.S, c.Delta);
    if (c.two_mode) {
        ConditionalFamily family(input, tap, out.K(), out.L(), false, parallelism(c));
        double P = 0.0;
        DiffDistribution d = two_mode_diff_marginal(family, out, &P);
        diagnostics["outcome_probability"] = P;
        diagnostics["normalisation"] = d.total();
        json summary{{"acceptance", acceptance_probability(d, c.delta_th)}, {"shutter_open", shutter_decision(d, policy)}};
        return package(c, "pipeline", config, diagnostics, summary, {"delta_t", "prob"}, diff_rows(d), 1);
    }

    ConditionalJoint joint = lossy_transmitted_joint(input, tap, out, LossChannel(c.loss_R), parallelism(c));
    DiffDistribution d = transmitted_diff_marginal(joint.p);
    diagnostics["outcome_probability"] = joint.outcome_probability;
    diagnostics["normalisation"] = d.total();
    json summary{{"acceptance", acceptance_probability(d, c.delta_th)}, {"shutter_open", shutter_decision(d, policy)}};
    std::vector<OutputFile> files =
        package(c, "pipeline", config, diagnostics, summary, {"delta_t", "prob"}, diff_rows(d), 1);
    std::vector<OutputFile> joint_files =
        package(c, "pipeline_joint", config, diagnostics, summary, {"s_t", "delta_t", "prob"}, sum_diff_rows(joint.p), 2);
    // The summary sidecar would be a duplicate; keep only the table.
    files.push_back(joint_files.front());
    return files;
}

std::vector<OutputFile> run_sweep(const RunConfig &c, const json &config) {
    std::vector<int> thresholds = c.th_grid.empty() ? std::vector<int>{c.delta_th} : c.th_grid;
    std::vector<double> grid = c.R_grid;
    if (grid.empty()) {
        for (int i = 0; i <= 10; ++i) {
            grid.push_back(i / 10.0);
        }
    }
    std::vector<std::vector<double>> rows;
    for (int th : thresholds) {
        for (const auto &row : distinguishability_vs_loss(GainParam(c.g), FilterThreshold(th), grid, c.tail, parallelism(c))) {
            rows.push_back({static_cast<double>(th), row.R, row.v, row.success_prob});
        }
    }
    json diagnostics{{"points", rows.size()}};
    json summary = json::object();
    return package(c, "sweep", config, diagnostics, summary, {"delta_th", "R", "v", "p_s"}, rows, 1);
}

}  // namespace

void validate(const RunConfig &c) {
    require(c.command == "ideal" || c.command == "conditional" || c.command == "pipeline" || c.command == "sweep",
            "unknown command '" + c.command + "'");
    require(std::isfinite(c.g) && c.g > 0.0, "--g must be finite and positive");
    require(c.s0 >= 0 && c.s0 <= 100000, "--s0 must lie in [0, 100000]");
    require(c.delta_th >= 0, "--delta-th must be non-negative");
    require(is_unit_interval(c.trust), "--trust must lie in [0,1]");
    require(c.tap_r >= 0.0 && c.tap_r < 1.0, "--tap-r must lie in [0,1)");
    require(is_unit_interval(c.loss_R), "--loss-R must lie in [0,1]");
    require(c.S >= 0, "--S must be non-negative");
    require(std::abs(c.Delta) <= c.S, "|--Delta| must not exceed --S");
    require((c.S + c.Delta) % 2 == 0, "--S and --Delta must have the same parity");
    require(c.tail > 0.0 && c.tail < 1.0, "--tail must lie in (0,1)");
    require(c.format == "csv" || c.format == "json", "--format must be csv or json");
    require(c.weighting == "detection" || c.weighting == "uniform", "--weighting must be detection or uniform");
    require(c.input == "uniform" || c.input == "macro" || c.input == "mixture",
            "--input must be uniform, macro or mixture");
    require(c.component >= 0 && c.component <= 1, "--component must be 0 or 1");
    require(!(c.input != "mixture" && c.component != 0), "--component 1 needs the mixture input");
    require(!(c.two_mode && c.loss_R > 0.0), "--two-mode does not support --loss-R");
    require(!(c.two_mode && c.processed), "--two-mode and --processed are exclusive");
    for (double R : c.R_grid) {
        require(is_unit_interval(R), "sweep loss values must lie in [0,1]");
    }
    for (int th : c.th_grid) {
        require(th >= 0, "sweep thresholds must be non-negative");
    }
}

json resolved_config(const RunConfig &c) {
    json j{{"command", c.command}, {"format", c.format}, {"version", kOutputVersion}};
    if (c.command == "ideal") {
        j.update({{"g", c.g}, {"delta_th", c.delta_th}, {"loss_R", c.loss_R}, {"tail", c.tail}});
    } else if (c.command == "conditional") {
        j.update({{"S", c.S}, {"Delta", c.Delta}, {"delta_th", c.delta_th}, {"trust", c.trust}});
    } else if (c.command == "pipeline") {
        j.update({{"input", c.input}, {"tap_r", c.tap_r}, {"delta_th", c.delta_th}, {"trust", c.trust}});
        if (c.input == "uniform") {
            j["s0"] = c.s0;
        } else {
            j["g"] = c.g;
            j["tail"] = c.tail;
        }
        if (c.processed) {
            j.update({{"processed", true}, {"weighting", c.weighting}, {"component", c.component}});
        } else {
            j.update({{"S", c.S}, {"Delta", c.Delta}, {"two_mode", c.two_mode}, {"loss_R", c.loss_R}});
        }
    } else if (c.command == "sweep") {
        j.update({{"g", c.g}, {"tail", c.tail}});
        j["delta_th"] = c.th_grid.empty() ? json::array({c.delta_th}) : json(c.th_grid);
        j["loss_R"] = json(c.R_grid);
    }
    return j;
}

std::vector<OutputFile> execute(const RunConfig &c) {
    validate(c);
    json config = resolved_config(c);
    if (c.command == "ideal") {
        return run_ideal(c, config);
    }
    if (c.command == "conditional") {
        return run_conditional(c, config);
    }
    if (c.command == "pipeline") {
        return run_pipeline(c, config);
    }
    return run_sweep(c, config);
}

namespace {

void print_error(const char *kind, const std::string &message) {
    json err{{"error", kind}, {"message", message}};
    std::cerr << err.dump() << "\n";
}

void add_common(CLI::App *sub, RunConfig &c) {
    sub->add_option("--out", c.out, "Output directory")->capture_default_str();
    sub->add_option("--format", c.format, "csv or json")->capture_default_str();
    sub->add_option("--workers", c.workers, "Worker threads (0 = all cores)")->capture_default_str();
    sub->add_flag("--no-cache", c.no_cache, "Recompute even when a cached result exists");
    sub->add_option("--tail", c.tail, "Truncation tail tolerance")->capture_default_str();
}

}  // namespace

int run(int argc, char **argv) {
    CLI::App app{"Modulus-of-intensity-difference filter simulator"};
    app.set_config("--config", "", "TOML or INI file; one section per subcommand, flags override it");
    app.require_subcommand(1);
    RunConfig c;

    CLI::App *ideal = app.add_subcommand("ideal", "Filtered macro-qubit photon distribution under loss");
    ideal->add_option("--g", c.g, "Parametric gain")->capture_default_str();
    ideal->add_option("--delta-th", c.delta_th, "Filter threshold")->capture_default_str();
    ideal->add_option("--loss-R", c.loss_R, "Loss reflectivity")->capture_default_str();

    CLI::App *conditional = app.add_subcommand("conditional", "Reflected-difference distribution behind the PBS");
    conditional->add_option("--S", c.S, "Detected photons K+L")->capture_default_str();
    conditional->add_option("--Delta", c.Delta, "Detected difference L-K")->capture_default_str();
    conditional->add_option("--delta-th", c.delta_th, "Filter threshold")->capture_default_str();
    conditional->add_option("--trust", c.trust, "Trust level")->capture_default_str();

    CLI::App *pipeline = app.add_subcommand("pipeline", "Tap, PBS and conditional transmitted statistics");
    pipeline->add_option("--input", c.input, "uniform, macro or mixture")->capture_default_str();
    pipeline->add_option("--g", c.g, "Parametric gain")->capture_default_str();
    pipeline->add_option("--s0", c.s0, "Photon number of the uniform input")->capture_default_str();
    pipeline->add_option("--tap-r", c.tap_r, "Tap reflectivity")->capture_default_str();
    pipeline->add_option("--S", c.S, "Detected photons K+L")->capture_default_str();
    pipeline->add_option("--Delta", c.Delta, "Detected difference L-K")->capture_default_str();
    pipeline->add_option("--delta-th", c.delta_th, "Filter threshold")->capture_default_str();
    pipeline->add_option("--trust", c.trust, "Trust level")->capture_default_str();
    pipeline->add_option("--loss-R", c.loss_R, "Loss on the transmitted beam")->capture_default_str();
    pipeline->add_flag("--two-mode", c.two_mode, "Two independent copies on the same detectors");
    pipeline->add_flag("--processed", c.processed, "Sum over accepted S at Delta = 0");
    pipeline->add_option("--weighting", c.weighting, "detection or uniform")->capture_default_str();
    pipeline->add_option("--component", c.component, "Reported ensemble component")->capture_default_str();

    CLI::App *sweep = app.add_subcommand("sweep", "Distinguishability against loss");
    sweep->add_option("--g", c.g, "Parametric gain")->capture_default_str();
    sweep->add_option("--delta-th", c.th_grid, "Filter thresholds")->delimiter(',');
    sweep->add_option("--loss-R", c.R_grid, "Loss values")->delimiter(',');

    for (CLI::App *sub : {ideal, conditional, pipeline, sweep}) {
        add_common(sub, c);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        print_error("invalid_config", e.what());
        return kExitInvalidConfig;
    }
    c.command = app.get_subcommands().front()->get_name();

    try {
        validate(c);
        json key = resolved_config(c);
        std::filesystem::path out_dir(c.out);
        const char *env_cache = std::getenv("MDF_CACHE_DIR");
        ResultCache cache(env_cache != nullptr ? std::filesystem::path(env_cache) : out_dir / ".mdf-cache");

        std::optional<std::vector<OutputFile>> files;
        if (!c.no_cache) {
            files = cache.load(key);
        }
        if (!files) {
            files = execute(c);
            cache.store(key, *files);
        }
        std::filesystem::create_directories(out_dir);
        for (const auto &f : *files) {
            std::ofstream os(out_dir / f.name, std::ios::binary);
            os << f.contents;
            if (!os) {
                throw std::runtime_error("cannot write " + (out_dir / f.name).string());
            }
            std::cout << (out_dir / f.name).string() << "\n";
        }
    } catch (const ConfigError &e) {
        print_error("invalid_config", e.what());
        return kExitInvalidConfig;
    } catch (const DegenerateConditioning &e) {
        print_error("degenerate_conditioning", e.what());
        return kExitDegenerate;
    } catch (const EmptyAcceptedSet &e) {
        print_error("empty_accepted_set", e.what());
        return kExitDegenerate;
    } catch (const std::domain_error &e) {
        print_error("degenerate_conditioning", e.what());
        return kExitDegenerate;
    } catch (const std::invalid_argument &e) {
        print_error("invalid_config", e.what());
        return kExitInvalidConfig;
    } catch (const std::exception &e) {
        print_error("internal", e.what());
        return 1;
    }
    return kExitOk;
}

}  // namespace mdf::cli
