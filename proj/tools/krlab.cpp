#include <CLI11.hpp>

#include <cstdint>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <thread>
#include <vector>

#include "krlab/errors.hpp"
#include "krlab/harness.hpp"
#include "krlab/presets.hpp"

namespace {

namespace h = krlab::harness;

constexpr int kExitOk = 0;
constexpr int kExitConfig = 2;
constexpr int kExitGuard = 3;

struct Selection {
    std::string preset;
    std::string config_path;
    std::string out_dir;
    std::optional<std::uint64_t> seed;
    std::optional<int> grid;
    std::optional<int> kicks;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

void add_selection(CLI::App* cmd, Selection& s, bool allow_config) {
    auto* preset = cmd->add_option("--preset", s.preset, "named figure recipe");
    if (allow_config) {
        auto* config = cmd->add_option("--config", s.config_path, "configuration file")->check(CLI::ExistingFile);
        preset->excludes(config);
        config->excludes(preset);
    }
    cmd->add_option("--out-dir", s.out_dir, "output directory (default: config, then $" +
                                                std::string(h::kOutDirEnv) + ", then ./krlab-out)");
    cmd->add_option("--seed", s.seed, "ensemble sampling seed");
    cmd->add_option("--grid", s.grid, "momentum grid half-width n_max")->check(CLI::PositiveNumber);
    cmd->add_option("--kicks", s.kicks, "number of kicks")->check(CLI::NonNegativeNumber);
    cmd->add_option("--threads", s.threads, "worker threads")->check(CLI::PositiveNumber);
}

std::vector<h::ExperimentConfig> selected_runs(const Selection& s) {
    std::vector<h::ExperimentConfig> runs;
    if (!s.preset.empty()) {
        runs = h::find_preset(s.preset).runs;
    } else if (!s.config_path.empty()) {
        runs.push_back(h::load_config(s.config_path));
    } else {
        throw krlab::ConfigError("preset", "give --preset NAME or --config PATH");
    }
    for (auto& c : runs) {
        if (s.seed) {
            c.set_seed(*s.seed);
        }
        if (s.grid) {
            c.n_max = *s.grid;
        }
        if (s.kicks) {
            c.kick.kicks = *s.kicks;
        }
        c.validate();
    }
    return runs;
}

void report(const std::vector<std::filesystem::path>& paths) {
    for (const auto& p : paths) {
        std::cout << p.string() << '\n';
    }
}

// Returns true when every point passed the grid guard.
bool execute(const h::ExperimentConfig& c, const Selection& s) {
    const auto dir = h::resolve_output_dir(s.out_dir, c);
    const h::RunOptions opts{s.threads};
    if (c.mode == h::Mode::section) {
        report(h::write_outputs(dir, c, h::run_section(c, opts)));
        return true;
    }
    const auto result = h::run(c, opts);
    report(h::write_outputs(dir, c, result));
    for (const auto& row : result.rows) {
        if (row.status != h::PointStatus::ok) {
            std::cerr << c.name << ": " << result.meta.axis << " = " << h::format_double(row.value) << ": "
                      << row.message << '\n';
        }
    }
    return !result.any_failure();
}

int run_all(const Selection& s, bool sections_only) {
    bool ok = true;
    std::size_t executed = 0;
    for (const auto& c : selected_runs(s)) {
        if (sections_only && c.mode != h::Mode::section) {
            continue;
        }
        ok = execute(c, s) && ok;
        ++executed;
    }
    if (executed == 0) {
        throw krlab::ConfigError("preset", "no pseudo-classical section runs in this selection");
    }
    return ok ? kExitOk : kExitGuard;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Phase-modulated kicked-rotor laboratory"};
    app.set_version_flag("--version", std::string(h::kVersion));
    app.require_subcommand(1);

    Selection run_sel;
    auto* run = app.add_subcommand("run", "run a preset or configuration file and write CSV output");
    add_selection(run, run_sel, true);

    Selection section_sel;
    auto* poincare = app.add_subcommand("poincare", "pseudo-classical sections of a preset");
    add_selection(poincare, section_sel, false);
    poincare->get_option("--preset")->required();

    auto* list = app.add_subcommand("list-presets", "list presets with descriptions");

    Selection dump_sel;
    auto* dump = app.add_subcommand("dump-config", "print the configurations of a preset or file");
    add_selection(dump, dump_sel, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitConfig;
    }

    try {
        if (*list) {
            for (const auto& p : h::list_presets()) {
                std::cout << p.name << '\t' << p.description << '\n';
            }
            return kExitOk;
        }
        if (*dump) {
            bool first = true;
            for (const auto& c : selected_runs(dump_sel)) {
                std::cout << (first ? "" : "\n") << h::serialize(c);
                first = false;
            }
            return kExitOk;
        }
        if (*poincare) {
            return run_all(section_sel, true);
        }
        return run_all(run_sel, false);
    } catch (const krlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const krlab::GridError& e) {
        std::cerr << e.what() << '\n';
        return kExitGuard;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
