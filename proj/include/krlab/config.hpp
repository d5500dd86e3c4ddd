#pragma once

// Experiment configuration: a flat list of `section.key = value` lines.
// Numeric values accept the expressions of evaluate_expression, so
// incommensurate ratios stay exact ("sqrt(3)/4").
//
//   name = fig9
//   kick.k = 2
//   kick.ell = 2
//   kick.ratio = sqrt(3)/4
//   initial.kind = gaussian
//   initial.fwhm = 0.4
//   sweep.axis = alpha
//   sweep.start = 0
//   sweep.stop = pi
//   sweep.step = pi/12

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "krlab/model.hpp"
#include "krlab/quantum.hpp"

namespace krlab::harness {

enum class Mode { quantum, section };

enum class SweepAxis { alpha, ratio, epsilon, phi0, kicks };

std::string_view to_string(SweepAxis axis);
std::string_view to_string(Mode mode);

struct Sweep {
    SweepAxis axis = SweepAxis::alpha;
    std::vector<double> values;

    friend bool operator==(const Sweep&, const Sweep&) = default;
};

struct AnalysisSpec {
    std::optional<std::size_t> fit_first;  // kick index; default: last two-thirds
    std::optional<std::size_t> fit_last;
    std::vector<int> snapshot_kicks;
    bool write_distributions = false;
    int distribution_bins = 1;  // bins per unit of 2*hbar*k_L; 0 = exact points
    std::optional<int> localization_kick;  // default: final kick

    friend bool operator==(const AnalysisSpec&, const AnalysisSpec&) = default;
};

struct SectionSpec {
    double k_eps = 0.1;
    int seeds_per_side = 40;
    int steps = 500;

    friend bool operator==(const SectionSpec&, const SectionSpec&) = default;
};

struct ExperimentConfig {
    std::string name = "run";
    std::string description;
    Mode mode = Mode::quantum;
    model::KickParams kick;
    quantum::InitialCondition initial = quantum::PlaneWave{};
    int n_max = 2048;
    std::optional<Sweep> sweep;
    std::uint64_t seed = 0;
    std::string output_dir;
    AnalysisSpec analysis;
    SectionSpec section;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    /// Seed for random ensemble sampling; kept in sync with `initial`.
    void set_seed(std::uint64_t value);

    /// Sweep values, or a single point at the base value when no sweep is set.
    std::vector<double> axis_values() const;

    /// Base parameters with the sweep axis set to `value`.
    model::KickParams kick_at(double value) const;

    friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize(const ExperimentConfig& config);

/// FNV-1a over the serialized form.
std::uint64_t config_hash(const ExperimentConfig& config);
std::string hash_hex(std::uint64_t hash);

}  // namespace krlab::harness
