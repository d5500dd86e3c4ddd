#pragma once

// Sweep orchestration and CSV output.
//
// Files written for a quantum run named NAME (see docs/csv_schema.md):
//   NAME.csv             one row per sweep point
//   NAME_series.csv      per-kick energy and zero-momentum fraction
//   NAME_dist_I_kK.csv   momentum distribution of point I after K kicks
//   NAME.cfg             the configuration that produced them
// and for a section run: NAME.csv (per-alpha island statistics) and
// NAME_section.csv (all iterates).
//
// Every CSV starts with two comment lines: run metadata, then the
// timestamp. Everything after the timestamp line is a deterministic
// function of the configuration.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "krlab/config.hpp"
#include "krlab/pseudoclassical.hpp"
#include "krlab/quantum.hpp"

namespace krlab::harness {

inline constexpr const char* kVersion = "0.1.0";

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "KRLAB_OUT_DIR";

enum class PointStatus { ok, grid_guard };

struct SweepRow {
    double value = 0.0;
    double energy = 0.0;
    double p0_fraction = 0.0;
    double q = 0.0;
    double q_r2 = 0.0;
    double diffusion = 0.0;
    double xi = 0.0;
    double xi_r2 = 0.0;
    double profile = 0.0;  // resonance energy profile at this point, NaN off resonance
    PointStatus status = PointStatus::ok;
    std::string message;   // failure detail, empty when ok
};

struct PointDistribution {
    std::size_t point = 0;
    int kick = 0;
    quantum::MomentumDistribution distribution;
};

struct RunMetadata {
    std::string name;
    std::string axis;  // sweep axis name, "point" for a single run
    std::uint64_t config_hash = 0;
    std::string version = kVersion;
    std::string timestamp;
};

struct SweepResult {
    RunMetadata meta;
    std::vector<SweepRow> rows;
    std::vector<std::vector<double>> energy_series;  // per point
    std::vector<std::vector<double>> p0_series;
    std::vector<PointDistribution> distributions;

    bool any_failure() const;
};

struct SectionRow {
    double alpha = 0.0;
    double librating_fraction = 0.0;
    double mean_J_span = 0.0;
};

struct SectionResult {
    RunMetadata meta;
    std::vector<SectionRow> rows;
    std::vector<std::vector<pseudoclassical::SectionPoint>> sections;  // per alpha
};

struct RunOptions {
    unsigned threads = 1;
};

/// Quantum sweep. A grid-guard failure is recorded on its row and the
/// remaining points still run.
SweepResult run(const ExperimentConfig& config, const RunOptions& options = {});

/// Pseudo-classical sections for each alpha of the sweep (or the base alpha).
SectionResult run_section(const ExperimentConfig& config, const RunOptions& options = {});

void write_summary_csv(std::ostream& out, const SweepResult& result);
void write_series_csv(std::ostream& out, const SweepResult& result);
void write_distribution_csv(std::ostream& out, const RunMetadata& meta,
                            const quantum::MomentumDistribution& dist);
void write_section_summary_csv(std::ostream& out, const SectionResult& result);
void write_section_csv(std::ostream& out, const SectionResult& result);

/// Writes all files of a run into `dir` (created if missing); returns their paths.
std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& dir,
                                                 const ExperimentConfig& config,
                                                 const SweepResult& result);
std::vector<std::filesystem::path> write_outputs(const std::filesystem::path& dir,
                                                 const ExperimentConfig& config,
                                                 const SectionResult& result);

/// `--out-dir`, else the config's output.dir, else $KRLAB_OUT_DIR, else "krlab-out".
std::filesystem::path resolve_output_dir(const std::string& cli_value, const ExperimentConfig& config);

/// 17 significant digits; "nan" for NaN.
std::string format_double(double v);

}  // namespace krlab::harness
