#include "krlab/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <limits>
#include <ostream>

#include "krlab/diagnostics.hpp"
#include "krlab/errors.hpp"
#include "krlab/parallel.hpp"
#include "krlab/spectral.hpp"

namespace krlab::harness {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string utc_timestamp() {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
}

RunMetadata make_meta(const ExperimentConfig& config) {
    RunMetadata m;
    m.name = config.name;
    m.axis = config.sweep ? std::string(to_string(config.sweep->axis)) : "point";
    m.config_hash = config_hash(config);
    m.timestamp = utc_timestamp();
    return m;
}

void write_header(std::ostream& out, const RunMetadata& meta) {
    out << "# krlab " << meta.version << " name=" << meta.name << " axis=" << meta.axis
        << " config_hash=" << hash_hex(meta.config_hash) << '\n';
    out << "# timestamp=" << meta.timestamp << '\n';
}

diagnostics::Window fit_window(const AnalysisSpec& a, std::size_t length) {
    auto w = diagnostics::default_window(length);
    if (a.fit_first) {
        w.first = *a.fit_first;
    }
    if (a.fit_last) {
        w.last = std::min(*a.fit_last, length - 1);
    }
    return w;
}

template <typename Fit>
void try_fit(Fit&& fit, double& value, double& r2) {
    try {
        const auto r = fit();
        value = r.value;
        r2 = r.r_squared;
    } catch (const diagnostics::FitError&) {
        value = kNaN;
        r2 = kNaN;
    }
}

struct PointOutcome {
    SweepRow row;
    std::vector<double> energies;
    std::vector<double> p0;
    std::vector<PointDistribution> distributions;
};

PointOutcome run_point(const ExperimentConfig& config, std::size_t index, double value, unsigned threads) {
    PointOutcome out;
    SweepRow& row = out.row;
    row.value = value;
    const model::KickParams kick = config.kick_at(value);
    const AnalysisSpec& a = config.analysis;

    const int m = spectral::resonance_order_of(kick.ratio);
    row.profile = m > 0 ? spectral::resonance_energy_profile(kick.alpha, m) : kNaN;

    quantum::EvolveOptions opts;
    opts.threads = threads;
    opts.snapshot_kicks = a.snapshot_kicks;
    const int loc_kick = a.localization_kick.value_or(kick.kicks);
    if (loc_kick != kick.kicks) {
        opts.snapshot_kicks.push_back(loc_kick);
    }

    quantum::Trajectory traj;
    try {
        traj = quantum::evolve(config.initial, kick, config.n_max, opts);
    } catch (const GridError& e) {
        row.energy = row.p0_fraction = row.q = row.q_r2 = row.diffusion = row.xi = row.xi_r2 = kNaN;
        row.status = PointStatus::grid_guard;
        row.message = e.what();
        return out;
    }

    row.energy = traj.energies.back();
    row.p0_fraction = traj.p0_fractions.back();
    const auto window = fit_window(a, traj.energies.size());
    try_fit([&] { return diagnostics::fit_power_law(traj.energies, window); }, row.q, row.q_r2);
    double unused = 0.0;
    try_fit([&] { return diagnostics::diffusion_constant(traj.energies, window); }, row.diffusion, unused);

    const quantum::MomentumDistribution* loc = &traj.final_distribution;
    for (const auto& [k, d] : traj.snapshots) {
        if (k == loc_kick) {
            loc = &d;
        }
    }
    try_fit([&] { return diagnostics::localization_fit(*loc); }, row.xi, row.xi_r2);

    if (a.write_distributions) {
        for (const auto& [k, d] : traj.snapshots) {
            if (std::find(a.snapshot_kicks.begin(), a.snapshot_kicks.end(), k) != a.snapshot_kicks.end()) {
                out.distributions.push_back({index, k, quantum::bin_distribution(d, a.distribution_bins)});
            }
        }
        out.distributions.push_back(
            {index, kick.kicks, quantum::bin_distribution(traj.final_distribution, a.distribution_bins)});
    }
    out.energies = std::move(traj.energies);
    out.p0 = std::move(traj.p0_fractions);
    return out;
}

}  // namespace

bool SweepResult::any_failure() const {
    return std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) { return r.status != PointStatus::ok; });
}

SweepResult run(const ExperimentConfig& config, const RunOptions& options) {
    config.validate();
    if (config.mode != Mode::quantum) {
        throw ConfigError("mode", "run() needs a quantum-mode configuration");
    }
    const auto values = config.axis_values();
    std::vector<PointOutcome> outcomes(values.size());
    const unsigned threads = std::max(1u, options.threads);
    if (values.size() >= threads) {
        parallel_for(values.size(), threads, [&](std::size_t i) { outcomes[i] = run_point(config, i, values[i], 1); });
    } else {
        for (std::size_t i = 0; i < values.size(); ++i) {
            outcomes[i] = run_point(config, i, values[i], threads);
        }
    }

    SweepResult result;
    result.meta = make_meta(config);
    for (auto& o : outcomes) {
        result.rows.push_back(std::move(o.row));
        result.energy_series.push_back(std::move(o.energies));
        result.p0_series.push_back(std::move(o.p0));
        for (auto& d : o.distributions) {
            result.distributions.push_back(std::move(d));
        }
    }
    return result;
}

SectionResult run_section(const ExperimentConfig& config, const RunOptions& options) {
    config.validate();
    if (config.sweep && config.sweep->axis != SweepAxis::alpha) {
        throw ConfigError("sweep.axis", "section runs sweep alpha only");
    }
    std::vector<double> alphas = config.sweep ? config.sweep->values : std::vector<double>{config.kick.alpha};
    const auto seeds = pseudoclassical::seed_grid(config.section.seeds_per_side);

    SectionResult result;
    result.meta = make_meta(config);
    for (double alpha : alphas) {
        pseudoclassical::SectionParams sp;
        sp.k_eps = config.section.k_eps;
        sp.alpha = alpha;
        sp.ratio = config.kick.ratio;
        sp.phi0 = config.kick.phi0;
        sp.steps = config.section.steps;

        const auto extents = pseudoclassical::orbit_extents(sp, seeds, options.threads);
        SectionRow row;
        row.alpha = alpha;
        std::size_t librating = 0;
        double span = 0.0;
        for (const auto& e : extents) {
            librating += e.librating() ? 1 : 0;
            span += e.J_span;
        }
        row.librating_fraction = static_cast<double>(librating) / static_cast<double>(extents.size());
        row.mean_J_span = span / static_cast<double>(extents.size());
        result.rows.push_back(row);
        result.sections.push_back(pseudoclassical::poincare_section(sp, seeds, options.threads));
    }
    return result;
}

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_summary_csv(std::ostream& out, const SweepResult& result) {
    write_header(out, result.meta);
    out << result.meta.axis << ",energy,p0_fraction,q,q_r2,diffusion,xi,xi_r2,profile,status\n";
    for (const auto& r : result.rows) {
        out << format_double(r.value) << ',' << format_double(r.energy) << ',' << format_double(r.p0_fraction)
            << ',' << format_double(r.q) << ',' << format_double(r.q_r2) << ',' << format_double(r.diffusion)
            << ',' << format_double(r.xi) << ',' << format_double(r.xi_r2) << ',' << format_double(r.profile)
            << ',' << (r.status == PointStatus::ok ? "ok" : "grid_guard") << '\n';
    }
}

void write_series_csv(std::ostream& out, const SweepResult& result) {
    write_header(out, result.meta);
    out << result.meta.axis << ",kick,energy,p0_fraction\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& e = result.energy_series[i];
        const auto& p = result.p0_series[i];
        for (std::size_t k = 0; k < e.size(); ++k) {
            out << format_double(result.rows[i].value) << ',' << k << ',' << format_double(e[k]) << ','
                << format_double(p[k]) << '\n';
        }
    }
}

void write_distribution_csv(std::ostream& out, const RunMetadata& meta, const quantum::MomentumDistribution& dist) {
    write_header(out, meta);
    out << "p,probability\n";
    for (std::size_t i = 0; i < dist.size(); ++i) {
        out << format_double(dist.p[i]) << ',' << format_double(dist.probability[i]) << '\n';
    }
}

void write_section_summary_csv(std::ostream& out, const SectionResult& result) {
    write_header(out, result.meta);
    out << "alpha,librating_fraction,mean_J_span\n";
    for (const auto& r : result.rows) {
        out << format_double(r.alpha) << ',' << format_double(r.librating_fraction) << ','
            << format_double(r.mean_J_span) << '\n';
    }
}

void write_section_csv(std::ostream& out, const SectionResult& result) {
    write_header(out, result.meta);
    out << "alpha,seed,step,theta,J\n";
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const std::string alpha = format_double(result.rows[i].alpha);
        for (const auto& pt : result.sections[i]) {
            out << alpha << ',' << pt.seed << ',' << pt.step << ',' << format_double(pt.theta) << ','
                << format_double(pt.J) << '\n';
        }
    }
}

namespace {

template <typename Writer>
std::filesystem::path write_file(const std::filesystem::path& path, Writer&& writer) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write " + path.string());
    }
    writer(out);
    out.close();
    if (!out) {
        throw std::runtime_error("error writing " + path.string());
    }
    return path;
}

std::filesystem::path write_config(const std::filesystem::path& dir, const ExperimentConfig& config) {
    return write_file(dir / (config.name + ".cfg"), [&](std::ostream& o) { o << serialize(config); });
}

}  // namespace

std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& dir, const ExperimentConfig& config,
                                                 const SweepResult& result) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> paths;
    const std::string& name = config.name;
    paths.push_back(write_file(dir / (name + ".csv"), [&](std::ostream& o) { write_summary_csv(o, result); }));
    paths.push_back(write_file(dir / (name + "_series.csv"), [&](std::ostream& o) { write_series_csv(o, result); }));
    for (const auto& d : result.distributions) {
        const auto file = name + "_dist_" + std::to_string(d.point) + "_k" + std::to_string(d.kick) + ".csv";
        paths.push_back(
            write_file(dir / file, [&](std::ostream& o) { write_distribution_csv(o, result.meta, d.distribution); }));
    }
    paths.push_back(write_config(dir, config));
    return paths;
}

std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& dir, const ExperimentConfig& config,
                                                 const SectionResult& result) {
    std::filesystem::create_directories(dir);
    std::vector<std::filesystem::path> paths;
    const std::string& name = config.name;
    paths.push_back(
        write_file(dir / (name + ".csv"), [&](std::ostream& o) { write_section_summary_csv(o, result); }));
    paths.push_back(write_file(dir / (name + "_section.csv"), [&](std::ostream& o) { write_section_csv(o, result); }));
    paths.push_back(write_config(dir, config));
    return paths;
}

std::filesystem::path resolve_output_dir(const std::string& cli_value, const ExperimentConfig& config) {
    if (!cli_value.empty()) {
        return cli_value;
    }
    if (!config.output_dir.empty()) {
        return config.output_dir;
    }
    if (const char* env = std::getenv(kOutDirEnv); env != nullptr && *env != '\0') {
        return env;
    }
    return "krlab-out";
}

}  // namespace krlab::harness
