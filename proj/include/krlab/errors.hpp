#pragma once

#include <stdexcept>
#include <string>

namespace krlab {

/// Invalid experiment configuration. `field()` carries the dotted key path
/// (e.g. "kick.alpha") when the error can be attributed to one entry.
class ConfigError : public std::runtime_error {
public:
    ConfigError(std::string field, const std::string& what)
        : std::runtime_error(field.empty() ? what : field + ": " + what), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// The momentum grid is too small: probability reached the outermost orders.
class GridError : public std::runtime_error {
public:
    GridError(int n_max, double edge_occupation, int kick)
        : std::runtime_error("grid guard: edge occupation " + std::to_string(edge_occupation) +
                             " at n_max=" + std::to_string(n_max) + " after kick " +
                             std::to_string(kick)),
          n_max_(n_max), edge_(edge_occupation), kick_(kick) {}

    int n_max() const noexcept { return n_max_; }
    double edge_occupation() const noexcept { return edge_; }
    int kick() const noexcept { return kick_; }

private:
    int n_max_;
    double edge_;
    int kick_;
};

}  // namespace krlab
