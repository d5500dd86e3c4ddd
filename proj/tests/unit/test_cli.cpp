#include <doctest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace {

namespace fs = std::filesystem;

struct Outcome {
    int code;
    std::string out;
};

Outcome cli(const std::string& args) {
    const auto log = fs::temp_directory_path() / "krlab_cli_stdout.txt";
    const std::string cmd = std::string(KRLAB_CLI_PATH) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    std::ifstream in(log);
    std::ostringstream s;
    s << in.rdbuf();
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, s.str()};
}

fs::path write_config(const std::string& name, const std::string& text) {
    const auto path = fs::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path;
}

}  // namespace

TEST_SUITE("cli") {

TEST_CASE("list-presets prints every preset") {
    const auto r = cli("list-presets");
    CHECK(r.code == 0);
    for (const char* name : {"fig2", "fig3", "fig5", "fig6", "fig7", "fig8", "fig9", "fig10"}) {
        CHECK(r.out.find(std::string(name) + "\t") != std::string::npos);
    }
}

TEST_CASE("a successful run writes its files and exits 0") {
    const auto dir = fs::temp_directory_path() / "krlab_cli_ok";
    fs::remove_all(dir);
    const auto cfg = write_config("krlab_cli_ok.cfg", "name = tiny\nkick.k = 1\nkick.ell = 1\nkick.count = 3\n"
                                                      "grid.n_max = 32\nsweep.axis = alpha\nsweep.values = 0, 1\n");
    const auto r = cli("run --config " + cfg.string() + " --out-dir " + dir.string());
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "tiny.csv"));
    CHECK(fs::exists(dir / "tiny_series.csv"));
    CHECK(fs::exists(dir / "tiny.cfg"));
    fs::remove_all(dir);
}

TEST_CASE("overrides apply to the configuration") {
    const auto cfg = write_config("krlab_cli_override.cfg", "name = ov\nkick.k = 1\nkick.count = 3\n");
    const auto r = cli("dump-config --config " + cfg.string() + " --kicks 7 --grid 64 --seed 9");
    CHECK(r.code == 0);
    CHECK(r.out.find("kick.count = 7") != std::string::npos);
    CHECK(r.out.find("grid.n_max = 64") != std::string::npos);
    CHECK(r.out.find("seed = 9") != std::string::npos);
}

TEST_CASE("configuration errors exit 2") {
    const auto cfg = write_config("krlab_cli_bad.cfg", "name = bad\nkick.k = 1\nkick.colour = red\n");
    const auto bad = cli("run --config " + cfg.string());
    CHECK(bad.code == 2);
    CHECK(bad.out.find("kick.colour") != std::string::npos);
    CHECK(cli("run --preset nonexistent").code == 2);
    CHECK(cli("run").code == 2);
    CHECK(cli("frobnicate").code == 2);
    CHECK(cli("poincare --preset fig9").code == 2);  // no section runs
    CHECK(cli("run --preset fig2 --grid 4").code == 2);
}

TEST_CASE("grid-guard failures exit 3 after writing the other points") {
    const auto dir = fs::temp_directory_path() / "krlab_cli_guard";
    fs::remove_all(dir);
    const auto cfg = write_config("krlab_cli_guard.cfg", "name = guard\nkick.k = 40\nkick.ell = 2\ngrid.n_max = 16\n"
                                                         "sweep.axis = kicks\nsweep.values = 2, 450\n");
    const auto r = cli("run --config " + cfg.string() + " --out-dir " + dir.string());
    CHECK(r.code == 3);
    CHECK(r.out.find("grid guard") != std::string::npos);
    CHECK(fs::exists(dir / "guard.csv"));
    fs::remove_all(dir);
}

TEST_CASE("poincare runs the section part of a preset") {
    const auto dir = fs::temp_directory_path() / "krlab_cli_sections";
    fs::remove_all(dir);
    const auto r = cli("poincare --preset fig7 --out-dir " + dir.string());
    CHECK(r.code == 0);
    CHECK(fs::exists(dir / "fig7_sections.csv"));
    CHECK(fs::exists(dir / "fig7_sections_section.csv"));
    CHECK_FALSE(fs::exists(dir / "fig7.csv"));
    fs::remove_all(dir);
}

}
