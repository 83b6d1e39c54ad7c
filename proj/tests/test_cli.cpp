// End-to-end tests for the bllt command line tool. Each case spawns the real
// binary via std::system, then inspects exit codes, stdout and the written
// artifacts; library calls are used only to compute independent expectations.

#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include <doctest.h>
#include <json.hpp>

#include "bllt/environment.hpp"
#include "bllt/evolution.hpp"
#include "bllt/io_csv.hpp"
#include "bllt/llt.hpp"

#ifndef BLLT_CLI_PATH
#error "BLLT_CLI_PATH must point at the bllt executable"
#endif

namespace fs = std::filesystem;
using namespace bllt;

namespace {

struct TempDir {
    fs::path path;

    TempDir() {
        static int counter = 0;
        path = fs::temp_directory_path() /
               ("bllt_cli_" + std::to_string(::getpid()) + "_" +
                std::to_string(++counter));
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() {
        std::error_code ec;
        fs::remove_all(path, ec);
    }
    TempDir(const TempDir&) = delete;
    TempDir& operator=(const TempDir&) = delete;

    fs::path operator/(const std::string& name) const { return path / name; }
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

struct RunResult {
    int exit_code = -1;
    std::string out;
    std::string err;
};

RunResult run_cli(const TempDir& dir, const std::string& args) {
    static int run_id = 0;
    ++run_id;
    const fs::path out = dir / ("stdout_" + std::to_string(run_id) + ".txt");
    const fs::path err = dir / ("stderr_" + std::to_string(run_id) + ".txt");
    const std::string cmd = std::string(BLLT_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    REQUIRE(status != -1);
    RunResult r;
    r.exit_code = (status >> 8) & 0xff; // POSIX wait status -> child exit code
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

bool contains(const std::string& hay, const std::string& needle) {
    return hay.find(needle) != std::string::npos;
}

double value_after(const std::string& out, const std::string& key) {
    const auto pos = out.find(key);
    REQUIRE(pos != std::string::npos);
    return std::strtod(out.c_str() + pos + key.size(), nullptr);
}

} // namespace

TEST_CASE("cli: requires a subcommand and offers help") {
    TempDir dir;
    CHECK(run_cli(dir, "").exit_code == 2);
    CHECK(run_cli(dir, "frobnicate").exit_code == 2);

    const RunResult help = run_cli(dir, "--help");
    CHECK(help.exit_code == 0);
    CHECK(contains(help.out, "gen-env"));
    CHECK(contains(help.out, "evolve"));
    CHECK(contains(help.out, "montecarlo"));
}

TEST_CASE("cli: gen-env writes a deterministic, loadable environment") {
    TempDir dir;
    const fs::path env1 = dir / "env1.env";
    const fs::path env2 = dir / "env2.env";
    const std::string base =
        "gen-env --law uniform:0.1,0.5 --window -40,40 --seed 5";

    const RunResult r1 = run_cli(dir, base + " --out " + env1.string());
    REQUIRE(r1.exit_code == 0);
    CHECK(contains(r1.out, "wrote " + env1.string()));
    CHECK(contains(r1.out, "window=[-40,40]"));

    const Environment loaded = load_environment(env1);
    CHECK(loaded.lo() == -40);
    CHECK(loaded.hi() == 40);
    CHECK(loaded.law().to_string() ==
          LawDescriptor::parse("uniform:0.1,0.5").to_string());

    const Environment direct = Environment::generate(
        LawDescriptor::parse("uniform:0.1,0.5"), -40, 40, 5);
    CHECK(loaded.fingerprint_hex() == direct.fingerprint_hex());
    CHECK(contains(r1.out, "fingerprint=" + direct.fingerprint_hex()));

    const RunResult r2 = run_cli(dir, base + " --out " + env2.string());
    REQUIRE(r2.exit_code == 0);
    CHECK(slurp(env1) == slurp(env2)); // reruns are byte-identical

    CHECK(run_cli(dir, "gen-env --law uniform:0.1,0.5 --window -8.5,8 "
                       "--seed 1 --out " + env2.string())
              .exit_code == 2); // non-integer window bound
}

TEST_CASE("cli: stochastic laws need a seed and BLLT_SEED substitutes for "
          "--seed") {
    TempDir dir;
    const fs::path out = dir / "env.env";

    const RunResult missing = run_cli(
        dir, "gen-env --law uniform:0.1,0.5 --window -8,8 --out " + out.string());
    CHECK(missing.exit_code == 2);
    CHECK(contains(missing.err, "seed"));

    // deterministic laws need no seed
    CHECK(run_cli(dir, "gen-env --law constant:0.5 --window -8,8 --out " +
                           out.string())
              .exit_code == 0);

    const fs::path flagged = dir / "flagged.env";
    const fs::path via_env = dir / "via_env.env";
    REQUIRE(run_cli(dir, "gen-env --law uniform:0.1,0.5 --window -8,8 "
                         "--seed 77 --out " + flagged.string())
                .exit_code == 0);
    REQUIRE(::setenv("BLLT_SEED", "77", 1) == 0);
    const RunResult env_run =
        run_cli(dir, "gen-env --law uniform:0.1,0.5 --window -8,8 --out " +
                         via_env.string());
    ::unsetenv("BLLT_SEED");
    REQUIRE(env_run.exit_code == 0);
    CHECK(slurp(via_env) == slurp(flagged));
}

TEST_CASE("cli: evolve forward matches the library and validates its flags") {
    TempDir dir;
    const fs::path envp = dir / "env.env";
    REQUIRE(run_cli(dir, "gen-env --law uniform:0.1,0.5 --window -40,40 "
                         "--seed 5 --out " + envp.string())
                .exit_code == 0);

    const fs::path csv = dir / "fwd.csv";
    const RunResult r = run_cli(
        dir, "evolve --env " + envp.string() + " --n 16 --out " + csv.string());
    REQUIRE(r.exit_code == 0);
    CHECK(contains(r.out, "kind=forward n=16"));
    CHECK(std::fabs(value_after(r.out, "sum=") - 1.0) <= 1e-12);

    const Environment env = load_environment(envp);
    const KernelSnapshot snap = forward_pmf(env, 16);
    const auto [ks, vs] = read_xy_csv(csv);
    REQUIRE(ks.size() == snap.f.values().size());
    for (std::size_t i = 0; i < ks.size(); ++i) {
        CHECK(ks[i] ==
              static_cast<double>(snap.f.lo() + static_cast<Site>(i)));
        CHECK(vs[i] == snap.f.values()[i]); // %.17g round-trips exactly
    }
    const std::string text = slurp(csv);
    CHECK(contains(text, "# kind=forward\n"));
    CHECK(contains(text, "# n=16\n"));
    CHECK(contains(text, "# config command=evolve\n"));
    CHECK(contains(text, "# env_fingerprint=" + env.fingerprint_hex()));

    const fs::path rb = dir / "rb.csv";
    REQUIRE(run_cli(dir, "evolve --env " + envp.string() +
                             " --kind reversed_b --n 8 --out " + rb.string())
                .exit_code == 0);
    CHECK(contains(slurp(rb), "# kind=reversed_b\n"));

    const std::string junk_out = " --out " + (dir / "junk.csv").string();
    const std::string ev = "evolve --env " + envp.string();
    CHECK(run_cli(dir, ev + junk_out).exit_code == 2);           // no --n
    CHECK(run_cli(dir, ev + " --n 4 --t 1" + junk_out).exit_code == 2);
    CHECK(run_cli(dir, ev + " --kind poissonized" + junk_out).exit_code == 2);
    CHECK(run_cli(dir, ev + " --kind sideways --n 4" + junk_out).exit_code == 2);
    CHECK(run_cli(dir, ev + " --n -3" + junk_out).exit_code == 2);
    CHECK(run_cli(dir, ev + " --n 1000" + junk_out).exit_code == 2); // window
    CHECK_FALSE(fs::exists(dir / "junk.csv"));
}

TEST_CASE("cli: evolve poissonized stamps t and tol into the artifact") {
    TempDir dir;
    const fs::path envp = dir / "env.env";
    REQUIRE(run_cli(dir, "gen-env --law constant:0.5 --window -60,60 --out " +
                             envp.string())
                .exit_code == 0);
    const fs::path csv = dir / "poi.csv";
    const RunResult r =
        run_cli(dir, "evolve --env " + envp.string() +
                         " --kind poissonized --t 2.5 --tol 1e-10 --out " +
                         csv.string());
    REQUIRE(r.exit_code == 0);
    const std::string text = slurp(csv);
    CHECK(contains(text, "# kind=poissonized\n"));
    CHECK(contains(text, "# t=2.5\n"));
    CHECK(contains(text, "# tol=" + format_g17(1e-10) + "\n"));
    CHECK(std::fabs(value_after(r.out, "sum=") - 1.0) <= 1e-9);
}

TEST_CASE("cli: llt prints a sup-error table matching the library") {
    TempDir dir;
    const fs::path envp = dir / "env.env";
    REQUIRE(run_cli(dir, "gen-env --law uniform:0.1,0.5 --window -40,40 "
                         "--seed 5 --out " + envp.string())
                .exit_code == 0);
    const Environment env = load_environment(envp);

    const fs::path csv = dir / "llt.csv";
    const RunResult r =
        run_cli(dir, "llt --env " + envp.string() +
                         " --n 4 --n 16 --variant g --out " + csv.string());
    REQUIRE(r.exit_code == 0);

    std::vector<double> expected;
    for (long long n : {4LL, 16LL}) {
        const GaussianRef ref = GaussianRef::from_environment(env, n);
        expected.push_back(llt_sup_error_discrete(env, n, Interval{-2.0, 2.0},
                                                  ref, DiscreteVariant::G));
    }
    CHECK(contains(r.out, "n,sup_error\n"));
    CHECK(contains(r.out, "4," + format_g17(expected[0]) + "\n"));
    CHECK(contains(r.out, "16," + format_g17(expected[1]) + "\n"));

    const auto [xs, es] = read_xy_csv(csv);
    REQUIRE(xs.size() == 2);
    CHECK(xs[0] == 4.0);
    CHECK(xs[1] == 16.0);
    CHECK(es[0] == expected[0]);
    CHECK(es[1] == expected[1]);

    const std::string ll = "llt --env " + envp.string();
    CHECK(run_cli(dir, ll + " --variant continuous --n 4").exit_code == 2);
    CHECK(run_cli(dir, ll + " --variant g --t 1").exit_code == 2);
    CHECK(run_cli(dir, ll).exit_code == 2); // neither --n nor --t
}

TEST_CASE("cli: diagnose writes a JSON report and exits by overall status") {
    TempDir dir;
    const fs::path envp = dir / "env.env";
    REQUIRE(run_cli(dir, "gen-env --law uniform:0.1,0.5 --window -40,40 "
                         "--seed 5 --out " + envp.string())
                .exit_code == 0);

    const fs::path rep = dir / "report.json";
    const RunResult r = run_cli(dir, "diagnose --env " + envp.string() +
                                         " --horizon 16 --out " + rep.string());
    REQUIRE(r.exit_code == 0); // every asserted inequality holds
    CHECK(contains(r.out, "all_pass=true"));
    CHECK(contains(r.out, "PASS "));
    CHECK(contains(r.out, "INFO "));
    CHECK(contains(r.out, "wrote " + rep.string()));

    const nlohmann::json j = nlohmann::json::parse(slurp(rep));
    CHECK(j.at("all_pass").get<bool>());
    CHECK(j.at("horizon").get<long long>() == 16);
    CHECK(j.at("env_fingerprint").get<std::string>() ==
          load_environment(envp).fingerprint_hex());
    CHECK(j.at("config").at("command").get<std::string>() == "diagnose");
    CHECK(j.at("checks").size() == 12);

    CHECK(run_cli(dir, "diagnose --env " + envp.string() +
                           " --horizon 15 --out " + rep.string())
              .exit_code == 2);
}

TEST_CASE("cli: figure1 writes three curves plus an svg overlay") {
    TempDir dir;
    const fs::path envp = dir / "env.env";
    REQUIRE(run_cli(dir, "gen-env --law constant:0.5 --window -40,40 --out " +
                             envp.string())
                .exit_code == 0);

    const std::string prefix = (dir / "fig").string();
    const RunResult r = run_cli(dir, "figure1 --env " + envp.string() +
                                         " --n 32 --out " + prefix);
    REQUIRE(r.exit_code == 0);
    for (const char* suffix : {"_pmf.csv", "_gauss.csv", "_heat.csv", ".svg"}) {
        CHECK(fs::exists(prefix + suffix));
        CHECK(contains(r.out, "wrote " + prefix + suffix));
    }
    // the simple symmetric walk has unit diffusivity, so the fitted constants
    // and the two discrete curves are exact
    CHECK(contains(r.out, "sigma2_hat=1\n"));
    CHECK(contains(r.out, "mu_hat=2\n"));
    const auto [ks_p, vs_p] = read_xy_csv(prefix + std::string("_pmf.csv"));
    const auto [ks_h, vs_h] = read_xy_csv(prefix + std::string("_heat.csv"));
    REQUIRE(ks_p.size() == ks_h.size());
    for (std::size_t i = 0; i < vs_p.size(); ++i) {
        CHECK(std::fabs(vs_p[i] - vs_h[i]) <= 1e-12);
    }

    const std::string prefix2 = (dir / "fig2").string();
    REQUIRE(run_cli(dir, "figure1 --env " + envp.string() + " --n 32 --out " +
                             prefix2)
                .exit_code == 0);
    CHECK(slurp(prefix + std::string(".svg")) ==
          slurp(prefix2 + std::string(".svg")));
    CHECK(slurp(prefix + std::string("_pmf.csv")) ==
          slurp(prefix2 + std::string("_pmf.csv")));
}

TEST_CASE("cli: montecarlo is reproducible and close to the exact law") {
    TempDir dir;
    const fs::path envp = dir / "env.env";
    REQUIRE(run_cli(dir, "gen-env --law uniform:0.1,0.5 --window -70,70 "
                         "--seed 5 --out " + envp.string())
                .exit_code == 0);

    const std::string base =
        "montecarlo --env " + envp.string() + " --n 64 --count 4000";
    const RunResult a = run_cli(dir, base + " --seed 9");
    REQUIRE(a.exit_code == 0);
    const RunResult b = run_cli(dir, base + " --seed 9");
    CHECK(a.out == b.out); // bitwise reproducible

    REQUIRE(::setenv("BLLT_SEED", "9", 1) == 0);
    const RunResult via_env = run_cli(dir, base);
    ::unsetenv("BLLT_SEED");
    CHECK(via_env.out == a.out);

    const RunResult c = run_cli(dir, base + " --seed 10");
    CHECK(c.out != a.out);

    CHECK(value_after(a.out, "tv_distance=") < 0.1);
    CHECK(value_after(a.out, "kolmogorov=") < 0.12);
    const double s2 = value_after(a.out, "sigma2_hat=");
    CHECK(s2 > 0.2);
    CHECK(s2 < 1.0);

    CHECK(run_cli(dir, "montecarlo --env " + envp.string() +
                           " --n 4 --count 0 --seed 1")
              .exit_code == 2);
}

TEST_CASE("cli: config file supplies defaults, flags win, unknown keys fail") {
    TempDir dir;
    const fs::path cfg = dir / "cfg.ini";
    const fs::path out1 = dir / "cfg_env.env";
    const fs::path out2 = dir / "cfg_env2.env";
    {
        std::ofstream f(cfg);
        f << "[gen-env]\n"
          << "law=\"constant:0.5\"\n"
          << "window=\"-8,8\"\n"
          << "out=" << out1.string() << "\n";
    }

    const RunResult r1 = run_cli(dir, "--config " + cfg.string() + " gen-env");
    REQUIRE(r1.exit_code == 0);
    REQUIRE(fs::exists(out1));
    const Environment env1 = load_environment(out1);
    CHECK(env1.law().to_string() == "constant:0.5");
    CHECK(env1.lo() == -8);
    CHECK(env1.hi() == 8);

    // a flag overrides the config value for the same option
    const RunResult r2 = run_cli(dir, "--config " + cfg.string() +
                                          " gen-env --out " + out2.string());
    REQUIRE(r2.exit_code == 0);
    REQUIRE(fs::exists(out2));
    CHECK(slurp(out2) == slurp(out1));

    {
        std::ofstream f(cfg, std::ios::app);
        f << "frobnicate=1\n";
    }
    CHECK(run_cli(dir, "--config " + cfg.string() + " gen-env").exit_code == 2);

    CHECK(run_cli(dir, "--config " + (dir / "missing.ini").string() +
                           " gen-env --law constant:0.5 --window -4,4 --out " +
                           out2.string())
              .exit_code == 2);
}

TEST_CASE("cli: unreadable or corrupt inputs exit with the i/o code") {
    TempDir dir;
    const std::string sink = " --out " + (dir / "sink.csv").string();

    CHECK(run_cli(dir, "evolve --env " + (dir / "missing.env").string() +
                           " --n 2" + sink)
              .exit_code == 3);

    const fs::path bad = dir / "bad.env";
    {
        std::ofstream f(bad);
        f << "this is not an environment\n";
    }
    CHECK(run_cli(dir, "evolve --env " + bad.string() + " --n 2" + sink)
              .exit_code == 3);
    CHECK(run_cli(dir, "diagnose --env " + bad.string() + " --horizon 16 --out " +
                           (dir / "z.json").string())
              .exit_code == 3);

    // weight outside the admissible half-open interval: corrupt data, not usage
    const fs::path dom = dir / "dom.env";
    {
        std::ofstream f(dom);
        f << "law=constant:0.5\nlo=0\n0x1.8p-1\n";
    }
    CHECK(run_cli(dir, "evolve --env " + dom.string() + " --n 1" + sink)
              .exit_code == 3);
    CHECK_FALSE(fs::exists(dir / "sink.csv"));
}
