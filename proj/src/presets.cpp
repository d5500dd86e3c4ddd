#include "krlab/presets.hpp"

#include <cmath>
#include <numbers>

#include "krlab/errors.hpp"

namespace krlab::harness {

namespace {

constexpr double pi = std::numbers::pi;
const double kSqrt3Over4 = std::sqrt(3.0) / 4.0;

// Expanded condensate: 0.4 hbar*k_L FWHM in momentum.
quantum::GaussianEnsemble condensate() {
    quantum::GaussianEnsemble g;
    g.sigma = quantum::sigma_from_fwhm(0.4);
    g.members = 256;
    return g;
}

quantum::GaussianEnsemble narrow_packet() {
    quantum::GaussianEnsemble g;
    g.sigma = 0.05;
    g.members = 64;
    return g;
}

Sweep range(SweepAxis axis, double start, double step, int count) {
    Sweep s;
    s.axis = axis;
    for (int i = 0; i < count; ++i) {
        s.values.push_back(start + i * step);
    }
    return s;
}

Sweep list(SweepAxis axis, std::vector<double> values) { return Sweep{axis, std::move(values)}; }

ExperimentConfig base(std::string name, double k, int ell, double eps, int kicks) {
    ExperimentConfig c;
    c.name = std::move(name);
    c.kick.kick_strength = k;
    c.kick.period = {ell, eps};
    c.kick.kicks = kicks;
    return c;
}

Preset fig2() {
    Preset p{"fig2",
             "energy vs modulation amplitude at r = 1/4 and r = 1/2, 14 kicks, ℸ = 2π, "
             "σ = 0.05 p_r, with the spectral profile for comparison",
             {}};
    for (const auto& [tag, r] : {std::pair{"fig2_r1-4", 0.25}, std::pair{"fig2_r1-2", 0.5}}) {
        auto c = base(tag, 2.0, 1, 0.0, 14);
        c.kick.ratio = r;
        c.initial = narrow_packet();
        c.n_max = 512;
        c.sweep = range(SweepAxis::alpha, 0.0, 2.0 * pi / 49.0, 50);
        c.sweep->values.back() = 2.0 * pi;
        p.runs.push_back(std::move(c));
    }
    return p;
}

Preset fig3() {
    Preset p{"fig3",
             "simulated energy and zero-momentum fraction around r = 1/2 at α = π/6, ℸ = 2π, "
             "for 8, 14 and 22 kicks (k = 1.7, 2.0, 2.1)",
             {}};
    for (const auto& [kicks, k] : {std::pair{8, 1.7}, std::pair{14, 2.0}, std::pair{22, 2.1}}) {
        auto c = base("fig3_N" + std::to_string(kicks), k, 1, 0.0, kicks);
        c.kick.alpha = pi / 6.0;
        c.initial = condensate();
        c.n_max = 512;
        c.sweep = range(SweepAxis::ratio, 0.4, 0.005, 41);
        p.runs.push_back(std::move(c));
    }
    return p;
}

Preset fig5() {
    Preset p{"fig5", "energy vs initial modulation phase φ₀, α = π/2, r = 1/2, 10 kicks, k = 2, ℸ = 2π", {}};
    auto c = base("fig5", 2.0, 1, 0.0, 10);
    c.kick.alpha = pi / 2.0;
    c.kick.ratio = 0.5;
    c.initial = condensate();
    c.n_max = 512;
    c.sweep = range(SweepAxis::phi0, 0.0, pi / 20.0, 41);
    p.runs.push_back(std::move(c));
    return p;
}

Preset fig6() {
    Preset p{"fig6",
             "even/odd kick-number comparison at k = 2, ℓ = 1, α = π/6: second-order resonance "
             "around r = 1/4 for 28, 29 and 30 kicks",
             {}};
    for (int kicks : {28, 29, 30}) {
        auto c = base("fig6_N" + std::to_string(kicks), 2.0, 1, 0.0, kicks);
        c.kick.alpha = pi / 6.0;
        // cosine one kick before the first pulse
        c.kick.phi0 = pi / 2.0;
        c.initial = narrow_packet();
        c.n_max = 512;
        c.sweep = range(SweepAxis::ratio, 0.2, 0.0025, 41);
        p.runs.push_back(std::move(c));
    }
    return p;
}

Preset fig7() {
    Preset p{"fig7",
             "resonance fall-off with phase noise at 15 kicks, k = 0.65, ℓ = 2, r = √3/4; "
             "pseudo-classical sections at k|ε| = 0.1 for α = 0, π/18, π/6, π/3",
             {}};
    auto c = base("fig7", 0.65, 2, 0.0, 15);
    c.kick.ratio = kSqrt3Over4;
    c.initial = condensate();
    c.n_max = 512;
    c.sweep = range(SweepAxis::alpha, 0.0, pi / 36.0, 19);
    p.runs.push_back(c);

    auto s = base("fig7_sections", 0.65, 2, 0.0, 15);
    s.mode = Mode::section;
    s.kick.ratio = kSqrt3Over4;
    s.sweep = list(SweepAxis::alpha, {0.0, pi / 18.0, pi / 6.0, pi / 3.0});
    s.section = SectionSpec{0.1, 40, 500};
    p.runs.push_back(std::move(s));
    return p;
}

Preset fig8() {
    Preset p{"fig8",
             "energy vs detuning ε around the ℓ = 2 resonance, 30 kicks, k = 0.65, r = √3/4, "
             "for α = 0, π/12, π/6, π/3",
             {}};
    const std::pair<const char*, double> alphas[] = {
        {"fig8_a0", 0.0}, {"fig8_a1-12", pi / 12.0}, {"fig8_a1-6", pi / 6.0}, {"fig8_a1-3", pi / 3.0}};
    for (const auto& [tag, alpha] : alphas) {
        auto c = base(tag, 0.65, 2, 0.0, 30);
        c.kick.alpha = alpha;
        c.kick.ratio = kSqrt3Over4;
        c.initial = condensate();
        c.n_max = 512;
        c.sweep = range(SweepAxis::epsilon, -0.3, 0.025, 25);
        p.runs.push_back(std::move(c));
    }
    return p;
}

Preset fig9() {
    Preset p{"fig9",
             "phase noise on resonance: k = 2, ε = 0, ℓ = 2, r = √3/4, α from 0 to π, 300 kicks; "
             "E(t) series and diffusion constants",
             {}};
    auto c = base("fig9", 2.0, 2, 0.0, 300);
    c.kick.ratio = kSqrt3Over4;
    c.initial = condensate();
    c.n_max = 2048;
    c.sweep = range(SweepAxis::alpha, 0.0, pi / 12.0, 13);
    c.analysis.fit_first = 30;
    c.analysis.fit_last = 300;
    p.runs.push_back(std::move(c));
    return p;
}

Preset fig10() {
    Preset p{"fig10",
             "localization and its destruction at ε = 0.4, k = 3, ℓ = 2, r = √3/4, 300 kicks; "
             "momentum distributions after 70 kicks",
             {}};
    auto c = base("fig10", 3.0, 2, 0.4, 300);
    c.kick.ratio = kSqrt3Over4;
    c.initial = condensate();
    c.n_max = 512;
    c.sweep = list(SweepAxis::alpha, {0.0, pi / 24.0, pi / 12.0, pi / 6.0, pi / 3.0});
    c.analysis.fit_first = 70;
    c.analysis.fit_last = 300;
    c.analysis.snapshot_kicks = {70};
    c.analysis.localization_kick = 70;
    c.analysis.write_distributions = true;
    p.runs.push_back(std::move(c));
    return p;
}

std::vector<Preset> build() {
    std::vector<Preset> all = {fig2(), fig3(), fig5(), fig6(), fig7(), fig8(), fig9(), fig10()};
    for (auto& preset : all) {
        for (auto& run : preset.runs) {
            run.description = preset.description;
        }
    }
    return all;
}

}  // namespace

const std::vector<Preset>& presets() {
    static const std::vector<Preset> all = build();
    return all;
}

const Preset& find_preset(std::string_view name) {
    for (const auto& p : presets()) {
        if (p.name == name) {
            return p;
        }
    }
    throw ConfigError("preset", "unknown preset '" + std::string(name) + "'");
}

std::vector<PresetSummary> list_presets() {
    std::vector<PresetSummary> out;
    for (const auto& p : presets()) {
        out.push_back({p.name, p.description});
    }
    return out;
}

}  // namespace krlab::harness
