#include "support.hpp"
#include "fanopair/presets.hpp"

#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <sys/wait.h>

using namespace fanopair;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path p = fs::temp_directory_path() / ("fanopair_test_" + name);
    fs::remove_all(p);
    fs::create_directories(p);
    return p;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string& args, const fs::path& log) {
    const char* exe = std::getenv("FANOPAIR_CLI");
    REQUIRE(exe);
    const std::string cmd = std::string(exe) + " " + args + " > " + log.string() + " 2>&1";
    const int status = std::system(cmd.c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace

TEST_CASE("preset registry") {
    CHECK(figure_presets().size() == 19);
    for (const auto& p : figure_presets()) {
        CHECK_FALSE(p.curves.empty());
        for (const auto& c : p.curves) CHECK(validate(resolve_params(c.params)).ok());
    }
    CHECK(find_preset("fig9a").check.has_value());
    CHECK_THROWS_AS(find_preset("fig99"), Error);
}

TEST_CASE("parameter overrides by name") {
    const ConfigMap base = find_preset("fig2a").curves[0].params;
    const RawParams r = resolve_params(with_parameter(base, "gammabar", 1.0));
    CHECK(std::abs(r.J_a - 1.0 / std::sqrt(kPi)) < 1e-15);
    CHECK(std::abs(r.J_b - 1.0 / std::sqrt(kPi)) < 1e-15);
    CHECK(resolve_params(with_parameter(base, "J_ab", 0.5)).J_ab == Complex(0.5));
    CHECK_THROWS_AS(with_parameter(base, "bogus", 1.0), Error);
    CHECK_THROWS_AS(with_parameter(base, "mut", 1.0), Error);  // raw key in a caption-style set

    const ConfigMap merged = merge_config(base, ConfigMap{{"q", "2"}});
    CHECK(merged.at("q_a") == "2");
    CHECK(merged.at("q_b") == "2");
}

TEST_CASE("sweeps: product state has N = 0, N grows with gammabar, rows keep input order") {
    const ConfigMap base = find_preset("fig2a").curves[0].params;
    const GridSpec g{GridKind::Adapted, 129, 12.0};
    const Table zero = sweep(base, "J_ab", {0.0}, {"N"}, g);
    CHECK(std::abs(zero.rows[0][1]) < 1e-10);

    const Table t = sweep(base, "gammabar", {1.0, 0.0, 0.5}, {"N", "C"}, g);
    REQUIRE(t.rows.size() == 3);
    CHECK(t.columns == std::vector<std::string>{"gammabar", "N", "C"});
    CHECK(t.rows[0][0] == 1.0);
    CHECK(t.rows[1][0] == 0.0);
    CHECK(t.rows[1][1] < t.rows[2][1]);
    CHECK(t.rows[2][1] < t.rows[0][1]);
    CHECK(t.rows[0][2] < 0.0);

    CHECK_THROWS_AS(sweep(base, "gammabar", {0.0}, {"nonsense"}, g), Error);
}

TEST_CASE("interior maxima") {
    CHECK(interior_maxima({0, 1, 2, 3}) == 0);
    CHECK(interior_maxima({0, 2, 1}) == 1);
    CHECK(interior_maxima({0, 2, 2, 2, 1}) == 1);
    CHECK(interior_maxima({0, 2, 1, 3, 0}) == 2);
    CHECK(interior_maxima({0, 1.0, 1.0 + 1e-12, 1.0, 0.5}) == 1);
}

TEST_CASE("diagnostic report") {
    std::ostringstream free, balanced;
    emit_report(free, testing::fig2(), {GridKind::Adapted, 129, 12.0});
    CHECK(free.str().find("FLAG") == std::string::npos);
    CHECK(free.str().find("PASS") != std::string::npos);
    CHECK(free.str().find("cond(P) = ") != std::string::npos);
    emit_report(balanced, testing::fig2(1.0, 2.0), {GridKind::Adapted, 129, 12.0});
    CHECK(balanced.str().find("skipped") != std::string::npos);
    CHECK(balanced.str().find("residual") != std::string::npos);
}

TEST_CASE("run_figure writes identical files on repeated runs") {
    std::ostringstream log;
    RunOptions o;
    o.out_dir = scratch_dir("fig2a_1").string();
    const FigureOutcome first = run_figure("fig2a", o, log);
    o.out_dir = scratch_dir("fig2a_2").string();
    o.plot = true;
    const FigureOutcome second = run_figure("fig2a", o, log);
    REQUIRE_FALSE(first.files.empty());
    for (const auto& f : first.files) {
        const fs::path name = fs::path(f).filename();
        CHECK(slurp(f) == slurp(fs::path(o.out_dir) / name));
    }
    CHECK(second.files.size() > first.files.size());  // gnuplot script
    const std::string csv = slurp(first.files[0]);
    CHECK(csv.rfind("# preset=fig2a", 0) == 0);
}

TEST_CASE("captioned value check and tolerance failure") {
    std::ostringstream log;
    RunOptions o;
    o.out_dir = scratch_dir("fig9a").string();
    const FigureOutcome ok = run_figure("fig9a", o, log);
    CHECK(ok.passed);
    REQUIRE(ok.checks.size() == 1);
    CHECK(ok.checks[0].find("PASS") != std::string::npos);

    o.tolerance = 1e-9;
    CHECK_THROWS_AS(run_figure("fig9a", o, log), Error);
}

TEST_CASE("command line: subcommands and exit codes") {
    const fs::path dir = scratch_dir("cli");
    const fs::path log = dir / "log.txt";
    CHECK(run_cli("list", log) == 0);
    CHECK(slurp(log).find("fig12") != std::string::npos);

    CHECK(run_cli("figure fig2b --out " + dir.string(), log) == 0);
    CHECK(fs::exists(dir / "fig2b_marginal_a.csv"));

    CHECK(run_cli("figure nope", log) == 2);
    CHECK(run_cli("figure fig9a --tolerance 1e-9 --out " + dir.string(), log) == 3);

    CHECK(run_cli("sweep --param gammabar --values 0,1 --observables N --grid-points 129 --out " + dir.string(),
                  log) == 0);
    CHECK(run_cli("sweep --param bogus --values 0 --out " + dir.string(), log) == 2);

    CHECK(run_cli("negativity --preset fig3b --bruteforce", log) == 0);
    CHECK(slurp(log).find("N") != std::string::npos);

    CHECK(run_cli("balance --preset fig4a --curve 1", log) == 0);
    CHECK(run_cli("report --set gammabar=1 --out " + dir.string(), log) == 0);
    CHECK(run_cli("spectrum --axis a --out " + dir.string(), log) == 0);
}
