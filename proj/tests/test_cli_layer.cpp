#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "nsul/config.hpp"
#include "nsul/csvio.hpp"
#include "nsul/experiment.hpp"
#include "nsul/snapshot.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

using namespace nsul;

namespace {

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct TempDir {
    std::filesystem::path path;
    TempDir(const char* tag) {
        path = std::filesystem::temp_directory_path() /
               (std::string("nsul_test_") + tag + "_" + std::to_string(::getpid()));
        std::filesystem::create_directories(path);
    }
    ~TempDir() { std::filesystem::remove_all(path); }
};

}  // namespace

TEST_CASE("config defaults and parsing") {
    ExperimentConfig def = parse_config_text("", "inline");
    CHECK(def.grid.n1 == 64);
    CHECK(def.nu == doctest::Approx(0.1));
    CHECK(def.dt == doctest::Approx(1e-3));
    CHECK(def.ladder_kind == "exact");

    std::string text =
        "# comment\n"
        "grid.n1 = 32\n"
        "grid.n2 = 32\n"
        "physics.nu = 0.5\n"
        "physics.u_inf1 = 1.25\n"
        "ic.family = random_bandlimited\n"
        "ic.seed = 17\n"
        "scheme.name = picard\n"
        "scheme.dt = 0.0005\n"
        "monitors.list = thm1, thm2\n"
        "output.snapshot_times = 0.0, 0.5\n"
        "output.ladder_kind = bs\n";
    ExperimentConfig cfg = parse_config_text(text, "inline");
    CHECK(cfg.grid.n1 == 32);
    CHECK(cfg.nu == doctest::Approx(0.5));
    CHECK(cfg.u_inf[0] == doctest::Approx(1.25));
    CHECK(cfg.ic.family == "random_bandlimited");
    CHECK(cfg.ic.seed == 17);
    CHECK(cfg.scheme == Scheme::picard);
    REQUIRE(cfg.monitors.size() == 2);
    CHECK(cfg.monitors[1] == "thm2");
    REQUIRE(cfg.snapshot_times.size() == 2);
    CHECK(cfg.snapshot_times[1] == doctest::Approx(0.5));
}

TEST_CASE("config rejection names the offending line") {
    try {
        parse_config_text("grid.n1 = 32\nbogus.key = 1\n", "myfile.cfg");
        FAIL("expected rejection");
    } catch (const std::exception& e) {
        std::string msg = e.what();
        CHECK(msg.find("myfile.cfg:2") != std::string::npos);
        CHECK(msg.find("bogus.key") != std::string::npos);
    }
    try {
        parse_config_text("physics.nu = fast\n", "f.cfg");
        FAIL("expected rejection");
    } catch (const std::exception& e) {
        CHECK(std::string(e.what()).find("physics.nu") != std::string::npos);
    }
    CHECK_THROWS(parse_config_text("monitors.list = thm1, nonsense\n", "m.cfg"));
    CHECK_THROWS(parse_config_text("scheme.name = leapfrog\n", "s.cfg"));
}

TEST_CASE("config echo parses back to the same settings") {
    std::string text =
        "grid.n1 = 16\ngrid.n2 = 16\nphysics.nu = 0.25\nic.family = lamb_oseen\n"
        "ic.sigma = 2.5\nmonitors.list = thm1\noutput.ladder_kind = qdecomp\n";
    ExperimentConfig a = parse_config_text(text, "inline");
    ExperimentConfig b = parse_config_text(config_echo(a), "echo");
    CHECK(config_echo(a) == config_echo(b));
    CHECK(b.grid.n1 == 16);
    CHECK(b.nu == doctest::Approx(0.25));
    CHECK(b.ic.family == "lamb_oseen");
    CHECK(b.ic.sigma == doctest::Approx(2.5));
    CHECK(b.ladder_kind == "qdecomp");
}

TEST_CASE("double formatting round-trips") {
    for (double v : {0.0, 1.0, -1.5, 0.1, 1e-300, 3.141592653589793, 2.2250738585072014e-308}) {
        std::string s = format_double(v);
        CHECK(std::stod(s) == v);
    }
    CHECK(format_double(0.1) == "0.1");
}

TEST_CASE("csv writer is deterministic and shape-checked") {
    auto render = [] {
        std::ostringstream out;
        CsvWriter w(out);
        w.header({"t", "value"});
        w.numeric_row({0.1, 2.5});
        w.numeric_row({0.2, 1.0 / 3.0});
        return out.str();
    };
    std::string a = render(), b = render();
    CHECK(a == b);
    CHECK(a.find("t,value\n") == 0);

    std::ostringstream out;
    CsvWriter w(out);
    w.header({"a", "b"});
    CHECK_THROWS(w.numeric_row({1.0}));
    CHECK_THROWS(w.row({"1", "2", "3"}));
}

TEST_CASE("snapshot round trip is bit exact") {
    TempDir dir("snap");
    GridSpec g{16, 8, 2.0, 4.0};
    Snapshot snap;
    snap.grid = g;
    snap.t = 0.75;
    ScalarField f(g);
    for (int i = 0; i < g.size(); ++i) f[i] = std::sin(0.1 * i) * 1e-7 + i;
    snap.fields.emplace_back("omega", f);
    std::string path = (dir.path / "a.nsul").string();
    write_snapshot(path, snap);
    Snapshot back = read_snapshot(path);
    CHECK(back.t == 0.75);
    CHECK(back.grid.n1 == 16);
    CHECK(back.grid.n2 == 8);
    REQUIRE(back.fields.size() == 1);
    CHECK(back.fields[0].first == "omega");
    for (int i = 0; i < g.size(); ++i) CHECK(back.fields[0].second[i] == f[i]);

    // corrupt magic
    std::string bad = (dir.path / "bad.nsul").string();
    std::ofstream(bad, std::ios::binary) << "XXXX garbage";
    CHECK_THROWS(read_snapshot(bad));
    CHECK_THROWS(read_snapshot((dir.path / "absent.nsul").string()));
}

TEST_CASE("initial condition families") {
    GridSpec g{32, 32, 2.0 * M_PI, 2.0 * M_PI};
    InitialConditionSpec spec;
    spec.family = "taylor_green";
    SolverState tg = build_initial_state(spec, g, {0.0, 0.0});
    CHECK(tg.u.max_norm() == doctest::Approx(1.0).epsilon(1e-6));

    spec.family = "constant";
    spec.u1 = 2.0;
    SolverState c = build_initial_state(spec, g, {0.0, 0.0});
    CHECK(c.u.max_norm() == doctest::Approx(2.0));
    CHECK(c.omega.max_abs() == 0.0);

    spec.family = "lamb_oseen";
    SolverState lo = build_initial_state(spec, g, {0.0, 0.0});
    CHECK(std::abs(lo.omega.mean()) < 1e-12);

    spec.family = "random_bandlimited";
    spec.seed = 5;
    SolverState r1 = build_initial_state(spec, g, {0.0, 0.0});
    SolverState r2 = build_initial_state(spec, g, {0.0, 0.0});
    CHECK(r1.omega.max_abs() == r2.omega.max_abs());  // deterministic in the seed

    spec.family = "unknown";
    CHECK_THROWS(build_initial_state(spec, g, {0.0, 0.0}));
}

TEST_CASE("experiment smoke run writes its artifacts") {
    TempDir dir("run");
    ExperimentConfig cfg = parse_config_text(
        "grid.n1 = 32\ngrid.n2 = 32\nphysics.nu = 0.2\nscheme.dt = 0.002\n"
        "scheme.t_end = 0.02\nmonitors.list = thm1, thm2, ul_energy\n"
        "output.every = 2\noutput.snapshot_times = 0.02\n",
        "inline");
    RunOutput out = run_experiment(cfg, dir.path.string());
    CHECK(std::filesystem::exists(out.csv_path));
    CHECK(std::filesystem::exists(out.manifest_path));
    CHECK(out.samples.size() > 1);
    CHECK(out.energy_residual < 1e-6);
    CHECK(!out.fits.empty());
    std::string csv = slurp(out.csv_path);
    CHECK(csv.find("thm1_ratio") != std::string::npos);
    // identical run reproduces the diagnostics byte for byte
    TempDir dir2("run2");
    RunOutput out2 = run_experiment(cfg, dir2.path.string());
    CHECK(slurp(out2.csv_path) == csv);
}

TEST_CASE("refinement ladders report a convergence order") {
    TempDir dir("ladder");
    ExperimentConfig cfg = parse_config_text(
        "grid.n1 = 16\ngrid.n2 = 16\nphysics.nu = 0.2\nscheme.t_end = 0.05\n"
        "output.ladder_kind = exact\n",
        "inline");
    LadderReport rep = run_ladder(cfg, 3, dir.path.string());
    CHECK(rep.kind == "exact");
    REQUIRE(rep.errors.size() == 3);
    CHECK(std::filesystem::exists(dir.path / "ladder.csv"));
}
