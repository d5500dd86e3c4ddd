#include "krlab/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "krlab/errors.hpp"
#include "krlab/expr.hpp"

namespace krlab::harness {

namespace {

std::string trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::string item;
    std::istringstream in(text);
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) {
            out.push_back(item);
        }
    }
    return out;
}

// Key/value entries of one config text; every key must be consumed.
class Entries {
public:
    explicit Entries(std::string_view text) {
        std::istringstream in{std::string(text)};
        std::string line;
        int number = 0;
        while (std::getline(in, line)) {
            ++number;
            const std::string t = trim(line);
            if (t.empty() || t[0] == '#') {
                continue;
            }
            const auto eq = t.find('=');
            if (eq == std::string::npos) {
                throw ConfigError("", "line " + std::to_string(number) + ": expected 'key = value'");
            }
            const std::string key = trim(std::string_view(t).substr(0, eq));
            const std::string value = trim(std::string_view(t).substr(eq + 1));
            if (key.empty()) {
                throw ConfigError("", "line " + std::to_string(number) + ": empty key");
            }
            if (!entries_.emplace(key, value).second) {
                throw ConfigError(key, "duplicate key");
            }
        }
    }

    bool has(const std::string& key) const { return entries_.count(key) != 0; }

    std::optional<std::string> text(const std::string& key) {
        const auto it = entries_.find(key);
        if (it == entries_.end()) {
            return std::nullopt;
        }
        std::string v = it->second;
        entries_.erase(it);
        return v;
    }

    std::optional<double> number(const std::string& key) {
        const auto t = text(key);
        if (!t) {
            return std::nullopt;
        }
        try {
            return evaluate_expression(*t);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(key, e.what());
        }
    }

    std::optional<long long> integer(const std::string& key) {
        const auto v = number(key);
        if (!v) {
            return std::nullopt;
        }
        if (!std::isfinite(*v) || std::floor(*v) != *v || std::abs(*v) > 9.0e15) {
            throw ConfigError(key, "expected an integer");
        }
        return static_cast<long long>(*v);
    }

    std::optional<bool> boolean(const std::string& key) {
        const auto t = text(key);
        if (!t) {
            return std::nullopt;
        }
        if (*t == "true" || *t == "1" || *t == "yes") {
            return true;
        }
        if (*t == "false" || *t == "0" || *t == "no") {
            return false;
        }
        throw ConfigError(key, "expected true or false");
    }

    std::vector<double> numbers(const std::string& key) {
        const auto t = text(key);
        std::vector<double> out;
        if (!t) {
            return out;
        }
        for (const auto& item : split_list(*t)) {
            try {
                out.push_back(evaluate_expression(item));
            } catch (const std::invalid_argument& e) {
                throw ConfigError(key, e.what());
            }
        }
        return out;
    }

    void expect_consumed() const {
        if (!entries_.empty()) {
            throw ConfigError(entries_.begin()->first, "unknown key");
        }
    }

private:
    std::map<std::string, std::string> entries_;
};

SweepAxis parse_axis(const std::string& s) {
    if (s == "alpha") return SweepAxis::alpha;
    if (s == "ratio") return SweepAxis::ratio;
    if (s == "epsilon") return SweepAxis::epsilon;
    if (s == "phi0") return SweepAxis::phi0;
    if (s == "kicks") return SweepAxis::kicks;
    throw ConfigError("sweep.axis", "unknown axis '" + s + "'");
}

}  // namespace

std::string_view to_string(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::alpha: return "alpha";
        case SweepAxis::ratio: return "ratio";
        case SweepAxis::epsilon: return "epsilon";
        case SweepAxis::phi0: return "phi0";
        case SweepAxis::kicks: return "kicks";
    }
    return "?";
}

std::string_view to_string(Mode mode) { return mode == Mode::quantum ? "quantum" : "section"; }

void ExperimentConfig::set_seed(std::uint64_t value) {
    seed = value;
    if (auto* g = std::get_if<quantum::GaussianEnsemble>(&initial)) {
        g->seed = value;
    }
}

std::vector<double> ExperimentConfig::axis_values() const {
    if (!sweep) {
        return {0.0};
    }
    return sweep->values;
}

model::KickParams ExperimentConfig::kick_at(double value) const {
    model::KickParams p = kick;
    if (!sweep) {
        return p;
    }
    switch (sweep->axis) {
        case SweepAxis::alpha: p.alpha = value; break;
        case SweepAxis::ratio: p.ratio = value; break;
        case SweepAxis::epsilon: p.period.epsilon = value; break;
        case SweepAxis::phi0: p.phi0 = value; break;
        case SweepAxis::kicks: p.kicks = static_cast<int>(value); break;
    }
    return p;
}

void ExperimentConfig::validate() const {
    if (name.empty() || name.find_first_of("/\\ \t") != std::string::npos) {
        throw ConfigError("name", "must be a non-empty file stem without spaces or slashes");
    }
    auto check_kick = [](const model::KickParams& p, const std::string& where) {
        try {
            p.validate();
        } catch (const std::invalid_argument& e) {
            throw ConfigError(where, e.what());
        }
    };
    check_kick(kick, "kick");
    if (n_max < 8) {
        throw ConfigError("grid.n_max", "must be at least 8");
    }
    if (const auto* g = std::get_if<quantum::GaussianEnsemble>(&initial)) {
        if (!(g->sigma > 0.0)) {
            throw ConfigError("initial.sigma", "must be positive");
        }
        if (g->members < 1) {
            throw ConfigError("initial.members", "must be at least 1");
        }
    } else {
        const double beta = std::get<quantum::PlaneWave>(initial).beta;
        if (!(beta >= -0.5 && beta < 0.5)) {
            throw ConfigError("initial.beta", "must lie in [-1/2, 1/2)");
        }
    }
    if (sweep) {
        if (sweep->values.empty()) {
            throw ConfigError("sweep.values", "sweep has no points");
        }
        for (double v : sweep->values) {
            if (sweep->axis == SweepAxis::kicks && (std::floor(v) != v || v < 1.0)) {
                throw ConfigError("sweep.values", "kick counts must be positive integers");
            }
            check_kick(kick_at(v), "sweep.values");
        }
    }
    const auto& a = analysis;
    if (a.fit_first && a.fit_last && *a.fit_last < *a.fit_first + 4) {
        throw ConfigError("analysis.fit_last", "fit window needs at least 5 points");
    }
    if (a.distribution_bins < 0) {
        throw ConfigError("analysis.distribution_bins", "must be non-negative");
    }
    for (int k : a.snapshot_kicks) {
        if (k < 0) {
            throw ConfigError("analysis.snapshots", "kick indices must be non-negative");
        }
    }
    if (a.localization_kick && *a.localization_kick < 0) {
        throw ConfigError("analysis.localization_kick", "must be non-negative");
    }
    if (!(section.k_eps >= 0.0)) {
        throw ConfigError("section.k_epsilon", "must be non-negative");
    }
    if (section.seeds_per_side < 1) {
        throw ConfigError("section.seeds_per_side", "must be at least 1");
    }
    if (section.steps < 1) {
        throw ConfigError("section.steps", "must be at least 1");
    }
    if (mode == Mode::section && sweep && sweep->axis != SweepAxis::alpha) {
        throw ConfigError("sweep.axis", "section runs can only sweep alpha");
    }
}

ExperimentConfig parse_config(std::string_view text) {
    Entries e(text);
    ExperimentConfig c;

    if (auto v = e.text("name")) c.name = *v;
    if (auto v = e.text("description")) c.description = *v;
    if (auto v = e.text("mode")) {
        if (*v == "quantum") {
            c.mode = Mode::quantum;
        } else if (*v == "section") {
            c.mode = Mode::section;
        } else {
            throw ConfigError("mode", "expected quantum or section");
        }
    }
    if (auto v = e.integer("seed")) {
        if (*v < 0) {
            throw ConfigError("seed", "must be non-negative");
        }
        c.seed = static_cast<std::uint64_t>(*v);
    }
    if (auto v = e.text("output.dir")) c.output_dir = *v;
    if (auto v = e.integer("grid.n_max")) c.n_max = static_cast<int>(*v);

    if (auto v = e.number("kick.k")) c.kick.kick_strength = *v;
    const bool has_split = e.has("kick.ell") || e.has("kick.epsilon");
    if (auto v = e.number("kick.period")) {
        if (has_split) {
            throw ConfigError("kick.period", "give either kick.period or kick.ell/kick.epsilon");
        }
        try {
            c.kick.period = model::ScaledPeriod::from_value(*v);
        } catch (const std::invalid_argument& err) {
            throw ConfigError("kick.period", err.what());
        }
    }
    if (auto v = e.integer("kick.ell")) c.kick.period.ell = static_cast<int>(*v);
    if (auto v = e.number("kick.epsilon")) c.kick.period.epsilon = *v;
    if (auto v = e.number("kick.alpha")) c.kick.alpha = *v;
    if (auto v = e.number("kick.ratio")) c.kick.ratio = *v;
    if (auto v = e.number("kick.phi0")) c.kick.phi0 = *v;
    if (auto v = e.integer("kick.count")) c.kick.kicks = static_cast<int>(*v);

    const std::string kind = e.text("initial.kind").value_or("plane_wave");
    if (kind == "plane_wave") {
        quantum::PlaneWave pw;
        if (auto v = e.number("initial.beta")) pw.beta = *v;
        c.initial = pw;
    } else if (kind == "gaussian") {
        quantum::GaussianEnsemble g;
        const auto sigma = e.number("initial.sigma");
        const auto fwhm = e.number("initial.fwhm");
        if (sigma && fwhm) {
            throw ConfigError("initial.fwhm", "give either initial.sigma or initial.fwhm");
        }
        if (!sigma && !fwhm) {
            throw ConfigError("initial.sigma", "gaussian initial condition needs a width");
        }
        g.sigma = sigma ? *sigma : quantum::sigma_from_fwhm(*fwhm);
        if (auto v = e.integer("initial.members")) g.members = static_cast<int>(*v);
        if (auto v = e.text("initial.sampling")) {
            if (*v == "stratified") {
                g.sampling = quantum::Sampling::stratified;
            } else if (*v == "random") {
                g.sampling = quantum::Sampling::random;
            } else {
                throw ConfigError("initial.sampling", "expected stratified or random");
            }
        }
        c.initial = g;
    } else {
        throw ConfigError("initial.kind", "expected plane_wave or gaussian");
    }
    c.set_seed(c.seed);

    const std::string axis = e.text("sweep.axis").value_or("none");
    auto values = e.numbers("sweep.values");
    const auto start = e.number("sweep.start");
    const auto stop = e.number("sweep.stop");
    const auto step = e.number("sweep.step");
    if (axis != "none") {
        Sweep s;
        s.axis = parse_axis(axis);
        if (!values.empty()) {
            if (start || stop || step) {
                throw ConfigError("sweep.values", "give either a value list or start/stop/step");
            }
            s.values = std::move(values);
        } else {
            if (!start || !stop || !step) {
                throw ConfigError("sweep", "needs sweep.values or sweep.start/stop/step");
            }
            if (!(*step > 0.0) || *stop < *start) {
                throw ConfigError("sweep.step", "needs step > 0 and stop >= start");
            }
            const double span = (*stop - *start) / *step;
            const double intervals = std::round(span);
            if (std::abs(span - intervals) > 1e-9 * std::max(1.0, span)) {
                throw ConfigError("sweep.step", "range is not a whole number of steps");
            }
            const auto count = static_cast<long long>(intervals) + 1;
            if (count > 1000000) {
                throw ConfigError("sweep.step", "too many sweep points");
            }
            for (long long i = 0; i < count; ++i) {
                s.values.push_back(i + 1 == count ? *stop : *start + static_cast<double>(i) * *step);
            }
        }
        c.sweep = std::move(s);
    } else if (!values.empty() || start || stop || step) {
        throw ConfigError("sweep.axis", "sweep values given without an axis");
    }

    if (auto v = e.integer("analysis.fit_first")) {
        if (*v < 0) throw ConfigError("analysis.fit_first", "must be non-negative");
        c.analysis.fit_first = static_cast<std::size_t>(*v);
    }
    if (auto v = e.integer("analysis.fit_last")) {
        if (*v < 0) throw ConfigError("analysis.fit_last", "must be non-negative");
        c.analysis.fit_last = static_cast<std::size_t>(*v);
    }
    for (double k : e.numbers("analysis.snapshots")) {
        if (std::floor(k) != k) {
            throw ConfigError("analysis.snapshots", "kick indices must be integers");
        }
        c.analysis.snapshot_kicks.push_back(static_cast<int>(k));
    }
    if (auto v = e.boolean("analysis.distributions")) c.analysis.write_distributions = *v;
    if (auto v = e.integer("analysis.distribution_bins")) c.analysis.distribution_bins = static_cast<int>(*v);
    if (auto v = e.integer("analysis.localization_kick")) c.analysis.localization_kick = static_cast<int>(*v);

    if (auto v = e.number("section.k_epsilon")) c.section.k_eps = *v;
    if (auto v = e.integer("section.seeds_per_side")) c.section.seeds_per_side = static_cast<int>(*v);
    if (auto v = e.integer("section.steps")) c.section.steps = static_cast<int>(*v);

    e.expect_consumed();
    c.validate();
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ConfigError("", "cannot read config file " + path.string());
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize(const ExperimentConfig& c) {
    std::ostringstream out;
    out << "name = " << c.name << '\n';
    if (!c.description.empty()) {
        out << "description = " << c.description << '\n';
    }
    out << "mode = " << to_string(c.mode) << '\n';
    out << "seed = " << c.seed << '\n';
    if (!c.output_dir.empty()) {
        out << "output.dir = " << c.output_dir << '\n';
    }
    out << "grid.n_max = " << c.n_max << '\n';
    out << "kick.k = " << format_number(c.kick.kick_strength) << '\n';
    out << "kick.ell = " << c.kick.period.ell << '\n';
    out << "kick.epsilon = " << format_number(c.kick.period.epsilon) << '\n';
    out << "kick.alpha = " << format_number(c.kick.alpha) << '\n';
    out << "kick.ratio = " << format_number(c.kick.ratio) << '\n';
    out << "kick.phi0 = " << format_number(c.kick.phi0) << '\n';
    out << "kick.count = " << c.kick.kicks << '\n';
    if (const auto* g = std::get_if<quantum::GaussianEnsemble>(&c.initial)) {
        out << "initial.kind = gaussian\n";
        out << "initial.sigma = " << format_number(g->sigma) << '\n';
        out << "initial.members = " << g->members << '\n';
        out << "initial.sampling = "
            << (g->sampling == quantum::Sampling::stratified ? "stratified" : "random") << '\n';
    } else {
        out << "initial.kind = plane_wave\n";
        out << "initial.beta = " << format_number(std::get<quantum::PlaneWave>(c.initial).beta) << '\n';
    }
    if (c.sweep) {
        out << "sweep.axis = " << to_string(c.sweep->axis) << '\n';
        out << "sweep.values = ";
        for (std::size_t i = 0; i < c.sweep->values.size(); ++i) {
            out << (i ? ", " : "") << format_number(c.sweep->values[i]);
        }
        out << '\n';
    }
    const auto& a = c.analysis;
    if (a.fit_first) out << "analysis.fit_first = " << *a.fit_first << '\n';
    if (a.fit_last) out << "analysis.fit_last = " << *a.fit_last << '\n';
    if (!a.snapshot_kicks.empty()) {
        out << "analysis.snapshots = ";
        for (std::size_t i = 0; i < a.snapshot_kicks.size(); ++i) {
            out << (i ? ", " : "") << a.snapshot_kicks[i];
        }
        out << '\n';
    }
    out << "analysis.distributions = " << (a.write_distributions ? "true" : "false") << '\n';
    out << "analysis.distribution_bins = " << a.distribution_bins << '\n';
    if (a.localization_kick) out << "analysis.localization_kick = " << *a.localization_kick << '\n';
    out << "section.k_epsilon = " << format_number(c.section.k_eps) << '\n';
    out << "section.seeds_per_side = " << c.section.seeds_per_side << '\n';
    out << "section.steps = " << c.section.steps << '\n';
    return out.str();
}

std::uint64_t config_hash(const ExperimentConfig& config) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize(config)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string hash_hex(std::uint64_t hash) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(hash));
    return buf;
}

}  // namespace krlab::harness
