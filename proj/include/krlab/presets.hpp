#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "krlab/config.hpp"

namespace krlab::harness {

/// A named figure recipe: one or more runs sharing a purpose.
struct Preset {
    std::string name;
    std::string description;
    std::vector<ExperimentConfig> runs;
};

/// All presets in a stable order.
const std::vector<Preset>& presets();

/// Throws ConfigError("preset", ...) for unknown names.
const Preset& find_preset(std::string_view name);

struct PresetSummary {
    std::string name;
    std::string description;
};

std::vector<PresetSummary> list_presets();

}  // namespace krlab::harness
