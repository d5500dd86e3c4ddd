#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <sstream>

#include "krlab/diagnostics.hpp"
#include "krlab/errors.hpp"
#include "krlab/harness.hpp"
#include "krlab/quantum.hpp"

using namespace krlab;
using namespace krlab::harness;
constexpr double pi = std::numbers::pi;

namespace {

ExperimentConfig small_sweep() {
    return parse_config(R"(name = small
kick.k = 2
kick.ell = 2
kick.epsilon = 0.3
kick.ratio = sqrt(3)/4
kick.count = 12
grid.n_max = 128
initial.kind = gaussian
initial.fwhm = 0.4
initial.members = 8
sweep.axis = alpha
sweep.values = 0, pi/6, pi/3
)");
}

// Everything after the timestamp line.
std::string body(const std::string& csv) {
    std::istringstream in(csv);
    std::string line, out;
    int n = 0;
    while (std::getline(in, line)) {
        if (++n > 2) {
            out += line + '\n';
        }
    }
    return out;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream in(text);
    for (std::string l; std::getline(in, l);) {
        out.push_back(l);
    }
    return out;
}

template <typename Writer>
std::string capture(Writer&& w) {
    std::ostringstream out;
    w(out);
    return out.str();
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("rows follow the sweep and agree with direct evolution") {
    const auto c = small_sweep();
    const auto r = run(c);
    REQUIRE(r.rows.size() == 3);
    CHECK_FALSE(r.any_failure());
    CHECK(r.meta.axis == "alpha");
    CHECK(r.meta.config_hash == config_hash(c));
    const auto traj = quantum::evolve(c.initial, c.kick_at(pi / 3.0), c.n_max);
    CHECK(r.rows[2].energy == traj.energies.back());
    CHECK(r.rows[2].p0_fraction == traj.p0_fractions.back());
    CHECK(r.energy_series[2] == traj.energies);
    const auto q = diagnostics::fit_power_law(traj.energies);
    CHECK(r.rows[2].q == q.value);
    // incommensurate ratio: no resonance profile
    CHECK(std::isnan(r.rows[0].profile));
}

TEST_CASE("a single point gives one row") {
    auto c = small_sweep();
    c.sweep.reset();
    const auto r = run(c);
    CHECK(r.rows.size() == 1);
    CHECK(r.meta.axis == "point");
    const auto csv = capture([&](std::ostream& o) { write_summary_csv(o, r); });
    CHECK(lines(csv).size() == 4);
}

TEST_CASE("profile column holds the resonance prediction on resonance") {
    auto c = parse_config(R"(name = res
kick.k = 2
kick.ell = 1
kick.ratio = 1/2
kick.count = 4
grid.n_max = 64
sweep.axis = alpha
sweep.values = 0.7
)");
    const auto r = run(c);
    CHECK(r.rows[0].profile == doctest::Approx(std::pow(std::sin(0.7), 2) / 4.0));
}

TEST_CASE("identical configurations give identical CSV bodies") {
    const auto c = small_sweep();
    const auto a = run(c);
    const auto b = run(c);
    const auto sa = capture([&](std::ostream& o) { write_summary_csv(o, a); });
    const auto sb = capture([&](std::ostream& o) { write_summary_csv(o, b); });
    CHECK(body(sa) == body(sb));
    CHECK(body(capture([&](std::ostream& o) { write_series_csv(o, a); })) ==
          body(capture([&](std::ostream& o) { write_series_csv(o, b); })));
}

TEST_CASE("parallel execution does not change the output") {
    const auto c = small_sweep();
    const auto serial = run(c, {1});
    for (unsigned threads : {2u, 3u, 8u}) {
        CAPTURE(threads);
        const auto par = run(c, {threads});
        CHECK(body(capture([&](std::ostream& o) { write_summary_csv(o, serial); })) ==
              body(capture([&](std::ostream& o) { write_summary_csv(o, par); })));
        CHECK(par.energy_series == serial.energy_series);
    }
}

TEST_CASE("random sampling depends on the seed only") {
    auto c = small_sweep();
    std::get<quantum::GaussianEnsemble>(c.initial).sampling = quantum::Sampling::random;
    c.set_seed(11);
    const auto a = run(c);
    const auto b = run(c);
    CHECK(a.energy_series == b.energy_series);
    c.set_seed(12);
    CHECK(run(c).energy_series != a.energy_series);
}

TEST_CASE("a grid failure marks its row and the sweep continues") {
    // on resonance the width grows like k*N and outruns the largest grid
    const auto c = parse_config(R"(name = guard
kick.k = 40
kick.ell = 2
kick.count = 2
grid.n_max = 16
sweep.axis = kicks
sweep.values = 2, 450, 3
)");
    const auto r = run(c);
    REQUIRE(r.rows.size() == 3);
    CHECK(r.rows[0].status == PointStatus::ok);
    CHECK(r.rows[1].status == PointStatus::grid_guard);
    CHECK(std::isnan(r.rows[1].energy));
    CHECK(r.rows[1].message.find("grid guard") != std::string::npos);
    CHECK(r.rows[2].status == PointStatus::ok);
    CHECK(r.rows[2].energy == doctest::Approx(2.0 * 120.0 * 120.0).epsilon(1e-9));
    CHECK(r.any_failure());
    const auto csv = lines(capture([&](std::ostream& o) { write_summary_csv(o, r); }));
    CHECK(csv[4].substr(0, 4) == "450,");
    CHECK(csv[4].find(",nan,") != std::string::npos);
    CHECK(csv[4].substr(csv[4].size() - 10) == "grid_guard");
}

TEST_CASE("summary CSV layout") {
    const auto r = run(small_sweep());
    const auto csv = lines(capture([&](std::ostream& o) { write_summary_csv(o, r); }));
    REQUIRE(csv.size() == 6);
    CHECK(csv[0].rfind("# krlab 0.1.0 name=small axis=alpha config_hash=", 0) == 0);
    CHECK(csv[1].rfind("# timestamp=", 0) == 0);
    CHECK(csv[2] == "alpha,energy,p0_fraction,q,q_r2,diffusion,xi,xi_r2,profile,status");
    // 17 significant digits
    CHECK(csv[4].rfind("0.52359877559829882,", 0) == 0);
    CHECK(format_double(0.1) == "0.10000000000000001");
    CHECK(format_double(std::nan("")) == "nan");
    CHECK(std::stod(format_double(pi)) == pi);
}

TEST_CASE("series CSV has one row per point and kick") {
    const auto r = run(small_sweep());
    const auto csv = lines(capture([&](std::ostream& o) { write_series_csv(o, r); }));
    CHECK(csv[2] == "alpha,kick,energy,p0_fraction");
    CHECK(csv.size() == 3 + 3 * 13);
    CHECK(csv[3].rfind("0,0,", 0) == 0);
}

TEST_CASE("outputs land in the directory with the documented names") {
    auto c = small_sweep();
    c.analysis.write_distributions = true;
    c.analysis.snapshot_kicks = {5};
    c.analysis.distribution_bins = 0;
    const auto dir = std::filesystem::temp_directory_path() / "krlab_harness_out";
    std::filesystem::remove_all(dir);
    const auto r = run(c);
    REQUIRE(r.distributions.size() == 6);
    const auto paths = write_outputs(dir, c, r);
    for (const char* name : {"small.csv", "small_series.csv", "small.cfg", "small_dist_0_k5.csv",
                             "small_dist_0_k12.csv", "small_dist_2_k12.csv"}) {
        CAPTURE(name);
        CHECK(std::filesystem::exists(dir / name));
    }
    CHECK(paths.size() == 9);
    CHECK(parse_config(slurp(dir / "small.cfg")) == c);
    const auto dist = lines(slurp(dir / "small_dist_1_k12.csv"));
    CHECK(dist[2] == "p,probability");
    double total = 0.0;
    for (std::size_t i = 3; i < dist.size(); ++i) {
        total += std::stod(dist[i].substr(dist[i].find(',') + 1));
    }
    CHECK(total == doctest::Approx(1.0).epsilon(1e-12));
    std::filesystem::remove_all(dir);
}

TEST_CASE("section runs report island statistics") {
    auto c = parse_config(R"(name = sec
mode = section
kick.k = 1
kick.ratio = sqrt(3)/4
sweep.axis = alpha
sweep.values = 0, pi/3
section.k_epsilon = 0.1
section.seeds_per_side = 8
section.steps = 100
)");
    const auto r = run_section(c);
    REQUIRE(r.rows.size() == 2);
    CHECK(r.sections[0].size() == 64 * 100);
    CHECK(r.rows[0].librating_fraction > 0.0);
    CHECK(r.rows[0].librating_fraction < 1.0);
    const auto summary = lines(capture([&](std::ostream& o) { write_section_summary_csv(o, r); }));
    CHECK(summary[2] == "alpha,librating_fraction,mean_J_span");
    CHECK(summary.size() == 5);
    const auto points = lines(capture([&](std::ostream& o) { write_section_csv(o, r); }));
    CHECK(points[2] == "alpha,seed,step,theta,J");
    CHECK(points.size() == 3 + 2 * 64 * 100);
    CHECK_THROWS_AS(run(c), ConfigError);
}

TEST_CASE("output directory precedence") {
    auto c = small_sweep();
    ::unsetenv(kOutDirEnv);
    CHECK(resolve_output_dir("", c) == "krlab-out");
    ::setenv(kOutDirEnv, "/tmp/from-env", 1);
    CHECK(resolve_output_dir("", c) == "/tmp/from-env");
    c.output_dir = "from-config";
    CHECK(resolve_output_dir("", c) == "from-config");
    CHECK(resolve_output_dir("cli", c) == "cli");
    ::unsetenv(kOutDirEnv);
}

}
