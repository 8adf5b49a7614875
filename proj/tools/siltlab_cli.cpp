// siltlab: batch runner for the walk, oracle, rare-event and scenery experiments.
//
// Every command echoes its configuration into each record and writes
// <name>.csv and <name>.jsonl into the output directory, plus the CSV on
// stdout. Exit codes: 0 ok, 2 invalid configuration, 3 resource budget,
// 1 anything else.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <string>

#include "CLI11.hpp"
#include "siltlab/error.hpp"
#include "siltlab/experiment.hpp"

namespace {

struct CommandOptions {
    std::map<std::string, std::string> values;
    std::string config_file;
    std::string output_dir;
    std::string name;
    bool record_timing = false;
};

std::filesystem::path output_dir(const CommandOptions& opts) {
    if (!opts.output_dir.empty()) {
        return opts.output_dir;
    }
    if (const char* env = std::getenv("SILTLAB_OUTPUT_DIR"); env && *env) {
        return env;
    }
    return "siltlab-output";
}

int execute(const std::string& command, CLI::App& sub, CommandOptions& opts) {
    siltlab::ExperimentConfig cfg;
    cfg.command = command;
    cfg.record_timing = opts.record_timing;
    if (!opts.config_file.empty()) {
        cfg.params = siltlab::read_config_file(opts.config_file);
    }
    for (const auto& p : siltlab::command_params(command)) {
        if (sub.get_option("--" + p.name)->count() > 0) {
            cfg.params[p.name] = opts.values[p.name];
        }
    }
    const auto table = siltlab::run(cfg);

    const auto dir = output_dir(opts);
    std::filesystem::create_directories(dir);
    const std::string stem = opts.name.empty() ? command : opts.name;
    std::ofstream csv(dir / (stem + ".csv"), std::ios::binary);
    std::ofstream jsonl(dir / (stem + ".jsonl"), std::ios::binary);
    if (!csv || !jsonl) {
        throw siltlab::ResourceError("cannot write results into " + dir.string());
    }
    table.write_csv(csv);
    table.write_jsonl(jsonl);
    table.write_csv(std::cout);
    return 0;
}

}  // namespace

const std::map<std::string, std::string> kDescriptions = {
    {"walk", "simulate walks and summarize their local times"},
    {"decompose", "dyadic strand decomposition checks on sampled paths"},
    {"oracle", "exact quantities by DP or enumeration"},
    {"tail", "Monte Carlo tail of the SILT or the range"},
    {"confine", "confined walks: survival and visited fraction"},
    {"rwrs", "random walk in random scenery tails and region III probe"},
    {"zeta", "speed exponent and region for (alpha, beta)"},
    {"report", "level-set moments and their decay in z"},
    {"sweep", "scaling sweep over horizons with a log-log fit"},
};

int main(int argc, char** argv) {
    CLI::App app{"Self-intersection local times, confinement and random scenery experiments"};
    app.set_version_flag("--version", siltlab::kVersion);
    app.require_subcommand(1);

    std::map<std::string, CommandOptions> options;
    std::map<std::string, CLI::App*> subs;
    for (const auto& command : siltlab::command_names()) {
        auto& opts = options[command];
        auto* sub = app.add_subcommand(command, kDescriptions.at(command));
        for (const auto& p : siltlab::command_params(command)) {
            sub->add_option("--" + p.name, opts.values[p.name], p.help + " (default " +
                                                                    (p.fallback.empty() ? "none" : p.fallback) + ")");
        }
        sub->add_option("--config", opts.config_file, "key=value file; flags take precedence");
        sub->add_option("--output-dir", opts.output_dir, "result directory (default $SILTLAB_OUTPUT_DIR)");
        sub->add_option("--name", opts.name, "file stem of the result files (default: command)");
        sub->add_flag("--record-timing", opts.record_timing, "append wall-clock time to every record");
        subs[command] = sub;
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "siltlab: " << e.what() << '\n';
        return 2;
    }

    try {
        for (const auto& [command, sub] : subs) {
            if (sub->parsed()) {
                return execute(command, *sub, options[command]);
            }
        }
    } catch (const siltlab::DomainError& e) {
        std::cerr << "siltlab: " << e.what() << '\n';
        return 2;
    } catch (const std::bad_alloc&) {
        std::cerr << "siltlab: out of memory\n";
        return 3;
    } catch (const siltlab::ResourceError& e) {
        std::cerr << "siltlab: " << e.what() << '\n';
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "siltlab: " << e.what() << '\n';
        return 1;
    }
    return 1;
}
