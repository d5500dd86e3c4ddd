#include <doctest.h>

#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>

#include "krlab/config.hpp"
#include "krlab/errors.hpp"
#include "krlab/expr.hpp"
#include "krlab/presets.hpp"

using namespace krlab;
using namespace krlab::harness;
constexpr double pi = std::numbers::pi;

namespace {

std::string field_of(std::string_view text) {
    try {
        parse_config(text);
    } catch (const ConfigError& e) {
        return e.field();
    }
    return "<accepted>";
}

}  // namespace

TEST_SUITE("config") {

TEST_CASE("expressions") {
    CHECK(evaluate_expression("sqrt(3)/4") == std::sqrt(3.0) / 4.0);
    CHECK(evaluate_expression("2*pi/49") == 2.0 * pi / 49.0);
    CHECK(evaluate_expression("-pi/2") == -pi / 2.0);
    CHECK(evaluate_expression(" (1 + 2) * 3 ") == 9.0);
    CHECK(evaluate_expression("1e-3") == 1e-3);
    CHECK(evaluate_expression("2 - 3 - 4") == -5.0);
    CHECK(evaluate_expression("8 / 2 / 2") == 2.0);
    for (const char* bad : {"", "2+", "sqrt(", "abc", "1 2", "(1", "sqrt(-1)", "1/0"}) {
        CAPTURE(bad);
        CHECK_THROWS_AS(evaluate_expression(bad), std::invalid_argument);
    }
}

TEST_CASE("a full configuration parses") {
    const auto c = parse_config(R"(# noise on resonance
name = demo
kick.k = 2
kick.ell = 2
kick.ratio = sqrt(3)/4
kick.count = 30
grid.n_max = 256
initial.kind = gaussian
initial.fwhm = 0.4
initial.members = 32
seed = 5
sweep.axis = alpha
sweep.start = 0
sweep.stop = pi
sweep.step = pi/12
analysis.fit_first = 10
analysis.snapshots = 10, 20
)");
    CHECK(c.name == "demo");
    CHECK(c.kick.ratio == std::sqrt(3.0) / 4.0);
    CHECK(c.kick.period == model::ScaledPeriod{2, 0.0});
    const auto& g = std::get<quantum::GaussianEnsemble>(c.initial);
    CHECK(g.sigma == quantum::sigma_from_fwhm(0.4));
    CHECK(g.seed == 5);
    REQUIRE(c.sweep);
    CHECK(c.sweep->values.size() == 13);
    CHECK(c.sweep->values.back() == pi);
    CHECK(c.kick_at(c.sweep->values[2]).alpha == doctest::Approx(pi / 6.0));
    CHECK(c.analysis.snapshot_kicks == std::vector<int>{10, 20});
}

TEST_CASE("a period given as one number splits into resonance and detuning") {
    const auto c = parse_config("kick.k = 1\nkick.period = 4*pi + 0.25\n");
    CHECK(c.kick.period.ell == 2);
    CHECK(c.kick.period.epsilon == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(field_of("kick.k = 1\nkick.period = 4*pi\nkick.ell = 2\n") == "kick.period");
}

TEST_CASE("errors name the offending key") {
    CHECK(field_of("kick.k = 1\nkick.colour = red\n") == "kick.colour");
    CHECK(field_of("kick.k = 1\nkick.k = 2\n") == "kick.k");
    CHECK(field_of("kick.k = -1\n") == "kick");
    CHECK(field_of("kick.k = 1\nkick.alpha = two\n") == "kick.alpha");
    CHECK(field_of("kick.k = 1\ngrid.n_max = 4\n") == "grid.n_max");
    CHECK(field_of("kick.k = 1\ninitial.kind = gaussian\n") == "initial.sigma");
    CHECK(field_of("kick.k = 1\ninitial.kind = gaussian\ninitial.sigma = 0.1\ninitial.sampling = sobol\n") ==
          "initial.sampling");
    CHECK(field_of("kick.k = 1\nsweep.axis = gamma\nsweep.values = 1\n") == "sweep.axis");
    CHECK(field_of("kick.k = 1\nsweep.values = 1, 2\n") == "sweep.axis");
    CHECK(field_of("kick.k = 1\nsweep.axis = alpha\nsweep.start = 0\nsweep.stop = 1\nsweep.step = 0.3\n") ==
          "sweep.step");
    CHECK(field_of("kick.k = 1\nsweep.axis = kicks\nsweep.values = 1.5\n") == "sweep.values");
    CHECK(field_of("kick.k = 1\nanalysis.fit_first = 10\nanalysis.fit_last = 12\n") == "analysis.fit_last");
    CHECK(field_of("kick.k = 1\nmode = section\nsweep.axis = ratio\nsweep.values = 0.1\n") == "sweep.axis");
    CHECK(field_of("kick.k = 1\nname = has space\n") == "name");
    CHECK(field_of("kick.k = 1\n") == "<accepted>");
}

TEST_CASE("sweep axes select the swept parameter") {
    auto c = parse_config("kick.k = 1\nkick.count = 3\nsweep.axis = kicks\nsweep.values = 2, 4\n");
    CHECK(c.kick_at(4.0).kicks == 4);
    c = parse_config("kick.k = 1\nsweep.axis = epsilon\nsweep.values = -0.1, 0.1\n");
    CHECK(c.kick_at(0.1).period.epsilon == 0.1);
    c = parse_config("kick.k = 1\nsweep.axis = phi0\nsweep.values = 1\n");
    CHECK(c.kick_at(1.0).phi0 == 1.0);
    c = parse_config("kick.k = 1\n");
    CHECK(c.axis_values().size() == 1);
    CHECK(c.kick_at(123.0) == c.kick);
}

TEST_CASE("every preset round-trips through its serialized form") {
    for (const auto& preset : presets()) {
        for (const auto& run : preset.runs) {
            CAPTURE(run.name);
            const auto text = serialize(run);
            const auto back = parse_config(text);
            CHECK(back == run);
            CHECK(serialize(back) == text);
            CHECK(config_hash(back) == config_hash(run));
        }
    }
}

TEST_CASE("config files load from disk") {
    const auto path = std::filesystem::temp_directory_path() / "krlab_test_config.cfg";
    {
        std::ofstream out(path);
        out << "name = from_disk\nkick.k = 1.5\n";
    }
    CHECK(load_config(path).kick.kick_strength == 1.5);
    std::filesystem::remove(path);
    CHECK_THROWS_AS(load_config(path), ConfigError);
}

TEST_CASE("hash tracks the configuration") {
    auto a = parse_config("kick.k = 1\n");
    auto b = a;
    CHECK(config_hash(a) == config_hash(b));
    b.kick.alpha = 0.1;
    CHECK(config_hash(a) != config_hash(b));
    CHECK(hash_hex(0xabcULL) == "0000000000000abc");
}

TEST_CASE("presets are listed in a stable order with their descriptions") {
    const auto list = list_presets();
    std::vector<std::string> names;
    for (const auto& p : list) {
        names.push_back(p.name);
    }
    CHECK(names == std::vector<std::string>{"fig2", "fig3", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"});
    auto describe = [&](const std::string& n) { return find_preset(n).description; };
    CHECK(describe("fig6").find("even/odd kick-number comparison") != std::string::npos);
    CHECK(describe("fig6").find("k = 2, ℓ = 1, α = π/6") != std::string::npos);
    CHECK(describe("fig10").find("ε = 0.4, k = 3, ℓ = 2") != std::string::npos);
    CHECK(describe("fig7").find("15 kicks") != std::string::npos);
    CHECK(describe("fig7").find("k = 0.65") != std::string::npos);
    CHECK_THROWS_AS(find_preset("fig4"), ConfigError);
}

TEST_CASE("preset parameters") {
    const auto& fig2 = find_preset("fig2").runs;
    REQUIRE(fig2.size() == 2);
    CHECK(fig2[0].sweep->values.size() == 50);
    CHECK(fig2[0].sweep->values.back() == 2.0 * pi);
    CHECK(fig2[0].kick.kicks == 14);
    CHECK(fig2[0].kick.period == model::ScaledPeriod{1, 0.0});
    CHECK(std::get<quantum::GaussianEnsemble>(fig2[0].initial).sigma == 0.05);

    const auto& fig9 = find_preset("fig9").runs.at(0);
    CHECK(fig9.kick.kick_strength == 2.0);
    CHECK(fig9.kick.period == model::ScaledPeriod{2, 0.0});
    CHECK(fig9.kick.ratio == std::sqrt(3.0) / 4.0);
    CHECK(fig9.sweep->values.front() == 0.0);
    CHECK(fig9.sweep->values.back() == doctest::Approx(pi));

    const auto& fig7 = find_preset("fig7").runs;
    REQUIRE(fig7.size() == 2);
    CHECK(fig7[1].mode == Mode::section);
    CHECK(fig7[1].section.k_eps == 0.1);
}

}
