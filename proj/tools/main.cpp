// bllt: exact distribution evolution and diffusive-limit diagnostics for
// balanced nearest-neighbour random walks in fixed site-dependent
// environments.
//
// Exit codes: 0 success; 1 an asserted inequality check failed; 2 usage or
// parameter error; 3 I/O failure or unparseable/corrupt input file.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bllt/diagnostics.hpp"
#include "bllt/environment.hpp"
#include "bllt/errors.hpp"
#include "bllt/evolution.hpp"
#include "bllt/io_csv.hpp"
#include "bllt/llt.hpp"
#include "bllt/markov.hpp"

namespace {

using namespace bllt;

constexpr int kExitOk = 0;
constexpr int kExitCheckViolation = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;

std::pair<double, double> parse_double_pair(const std::string& text,
                                            const char* flag) {
    const auto comma = text.find(',');
    if (comma == std::string::npos) {
        throw UsageError(std::string(flag) + ": expected '<lo>,<hi>', got '" +
                         text + "'");
    }
    try {
        std::size_t used = 0;
        const std::string a = text.substr(0, comma), b = text.substr(comma + 1);
        const double lo = std::stod(a, &used);
        if (used != a.size()) throw std::invalid_argument(a);
        const double hi = std::stod(b, &used);
        if (used != b.size()) throw std::invalid_argument(b);
        return {lo, hi};
    } catch (const std::exception&) {
        throw UsageError(std::string(flag) + ": cannot parse '" + text + "'");
    }
}

std::pair<Site, Site> parse_site_pair(const std::string& text, const char* flag) {
    const auto [lo, hi] = parse_double_pair(text, flag);
    const auto li = static_cast<Site>(lo), hs = static_cast<Site>(hi);
    if (static_cast<double>(li) != lo || static_cast<double>(hs) != hi) {
        throw UsageError(std::string(flag) + ": expected integers, got '" +
                         text + "'");
    }
    return {li, hs};
}

/// Effective-config lines stamped as comments into every output artifact.
struct ConfigEcho {
    std::vector<std::string> lines;

    void add(const std::string& key, const std::string& value) {
        lines.push_back("config " + key + "=" + value);
    }
    void add(const std::string& key, double value) { add(key, format_g17(value)); }
    void add(const std::string& key, long long value) {
        add(key, std::to_string(value));
    }
    void add_env(const Environment& env, const std::string& path) {
        add("env", path);
        add("env_law", env.law().to_string());
        add("env_fingerprint", env.fingerprint_hex());
    }
};

void print_line(const std::string& s) { std::fputs((s + "\n").c_str(), stdout); }

// ---------------------------------------------------------------- gen-env

struct GenEnvArgs {
    std::string law;
    std::string window;
    std::string out;
    std::uint64_t seed = 0;
    CLI::Option* seed_opt = nullptr;
};

int run_gen_env(const GenEnvArgs& a) {
    LawDescriptor law;
    try {
        law = LawDescriptor::parse(a.law);
        law.validate();
    } catch (const ParseError& e) {
        // malformed text on the command line is a usage error, not bad input data
        throw UsageError(e.what());
    }
    const auto [lo, hi] = parse_site_pair(a.window, "--window");
    std::optional<std::uint64_t> seed;
    if (a.seed_opt->count() > 0) seed = a.seed; // flag, config or BLLT_SEED
    if (law.is_stochastic() && !seed) {
        throw UsageError("gen-env: law '" + a.law +
                         "' is stochastic; provide --seed or BLLT_SEED");
    }
    const Environment env = Environment::generate(law, lo, hi, seed);

    ConfigEcho echo;
    echo.add("command", "gen-env");
    echo.add("law", law.to_string());
    echo.add("window", std::to_string(lo) + "," + std::to_string(hi));
    if (seed) echo.add("seed", std::to_string(*seed));
    echo.add("generator", "splitmix64 per-site hash");
    save(env, a.out, echo.lines);

    print_line("wrote " + a.out);
    print_line("window=[" + std::to_string(env.lo()) + "," +
               std::to_string(env.hi()) + "]");
    print_line("fingerprint=" + env.fingerprint_hex());
    return kExitOk;
}

// ----------------------------------------------------------------- evolve

struct EvolveArgs {
    std::string env_path;
    std::string kind = "forward";
    long long n = -1;
    double t = -1.0;
    double tol = 1e-9;
    std::string out;
    CLI::Option *n_opt = nullptr, *t_opt = nullptr;
};

int run_evolve(const EvolveArgs& a) {
    const Environment env = load_environment(a.env_path);
    KernelSnapshot snap;
    if (a.kind == "poissonized") {
        if (a.t_opt->count() == 0) {
            throw UsageError("evolve: --kind poissonized requires --t");
        }
        snap = poissonized(env, a.t, a.tol);
    } else {
        if (a.n_opt->count() == 0) {
            throw UsageError("evolve: --kind " + a.kind + " requires --n");
        }
        if (a.t_opt->count() > 0) {
            throw UsageError("evolve: --t only applies to --kind poissonized");
        }
        if (a.kind == "forward") snap = forward_pmf(env, a.n);
        else if (a.kind == "reversed_a") snap = reversed_a(env, a.n);
        else snap = reversed_b(env, a.n);
    }

    ConfigEcho echo;
    echo.add("command", "evolve");
    echo.add_env(env, a.env_path);
    echo.add("kind", a.kind);
    if (a.kind == "poissonized") {
        echo.add("t", a.t);
        echo.add("tol", a.tol);
    } else {
        echo.add("n", a.n);
    }
    write_snapshot_csv(a.out, snap, echo.lines);

    const double mass = detail::pairwise_sum(snap.f.values());
    print_line("wrote " + a.out);
    print_line("kind=" + a.kind +
               (a.kind == "poissonized" ? " t=" + format_g17(a.t)
                                        : " n=" + std::to_string(a.n)));
    print_line("window=[" + std::to_string(snap.f.lo()) + "," +
               std::to_string(snap.f.hi()) + "]");
    print_line("sum=" + format_g17(mass));
    print_line("max=" + format_g17(norm_linf(snap.f)));
    return kExitOk;
}

// -------------------------------------------------------------------- llt

struct LltArgs {
    std::string env_path;
    std::vector<long long> ns;
    std::vector<double> ts;
    std::string variant = "g";
    std::string interval = "-2,2";
    double tol = 1e-9;
    double mu_override = 0.0;
    bool variance_fit = false;
    std::string out;
    CLI::Option* mu_opt = nullptr;
};

GaussianRef gref_for_discrete(const Environment& env, long long n,
                              const LltArgs& a) {
    if (a.mu_opt->count() > 0) return GaussianRef::from_mu(a.mu_override);
    if (a.variance_fit) {
        const auto [mean, var] = pmf_mean_variance(forward_pmf(env, n));
        (void)mean;
        return GaussianRef::from_sigma2(var / static_cast<double>(n));
    }
    return GaussianRef::from_environment(env, n);
}

int run_llt(const LltArgs& a) {
    const Environment env = load_environment(a.env_path);
    const auto [ilo, ihi] = parse_double_pair(a.interval, "--interval");
    const Interval I{ilo, ihi};

    const bool continuous = a.variant == "continuous";
    if (continuous && !a.ns.empty()) {
        throw UsageError("llt: --variant continuous takes --t, not --n");
    }
    if (!continuous && !a.ts.empty()) {
        throw UsageError("llt: --variant " + a.variant + " takes --n, not --t");
    }
    if ((continuous && a.ts.empty()) || (!continuous && a.ns.empty())) {
        throw UsageError("llt: provide at least one --n (or --t for continuous)");
    }

    ConfigEcho echo;
    echo.add("command", "llt");
    echo.add_env(env, a.env_path);
    echo.add("variant", a.variant);
    echo.add("interval", a.interval);
    if (a.mu_opt->count() > 0) echo.add("mu", a.mu_override);
    if (a.variance_fit) echo.add("variance_fit", "true");
    if (continuous) echo.add("tol", a.tol);

    std::vector<double> xs, errs;
    if (continuous) {
        for (double t : a.ts) {
            if (!(t > 0.0)) throw UsageError("llt: --t values must be positive");
            const double root = std::sqrt(t);
            const GaussianRef ref =
                a.mu_opt->count() > 0
                    ? GaussianRef::from_mu(a.mu_override)
                    : GaussianRef::from_mu(estimate_mu(env, -root, root, root));
            xs.push_back(t);
            errs.push_back(llt_sup_error_continuous(env, t, I, ref, a.tol));
        }
    } else {
        const DiscreteVariant v =
            a.variant == "g" ? DiscreteVariant::G : DiscreteVariant::Pmf;
        for (long long n : a.ns) {
            const GaussianRef ref = gref_for_discrete(env, n, a);
            xs.push_back(static_cast<double>(n));
            errs.push_back(llt_sup_error_discrete(env, n, I, ref, v));
        }
    }

    const std::string x_name = continuous ? "t" : "n";
    print_line(x_name + ",sup_error");
    for (std::size_t i = 0; i < xs.size(); ++i) {
        print_line(format_g17(xs[i]) + "," + format_g17(errs[i]));
    }
    if (!a.out.empty()) {
        write_xy_csv(a.out, x_name, "sup_error", xs, errs, echo.lines);
        print_line("wrote " + a.out);
    }
    return kExitOk;
}

// --------------------------------------------------------------- diagnose

struct DiagnoseArgs {
    std::string env_path;
    long long horizon = 0;
    int jobs = 1;
    std::string out;
};

int run_diagnose(const DiagnoseArgs& a) {
    const Environment env = load_environment(a.env_path);
    DiagnosticsReport rep = run_all_diagnostics(env, a.horizon, a.jobs);
    rep.config["command"] = "diagnose";
    rep.config["env"] = a.env_path;
    rep.config["env_law"] = env.law().to_string();

    std::ofstream out(a.out);
    if (!out) throw IoError("cannot open '" + a.out + "' for writing");
    out << rep.to_json_string(2) << "\n";
    if (!out) throw IoError("failed while writing '" + a.out + "'");
    out.close();

    for (const CheckRecord& c : rep.checks) {
        const char* tag = !c.asserted ? "INFO" : (c.passed() ? "PASS" : "FAIL");
        print_line(std::string(tag) + " " + c.name +
                   " violation=" + format_g17(c.violation));
    }
    print_line(std::string("all_pass=") + (rep.all_pass() ? "true" : "false") +
               " worst_violation=" + format_g17(rep.worst_violation()));
    print_line("wrote " + a.out);
    return rep.all_pass() ? kExitOk : kExitCheckViolation;
}

// ---------------------------------------------------------------- figure1

struct Figure1Args {
    std::string env_path;
    long long n = 0;
    std::string out_prefix;
};

int run_figure1(const Figure1Args& a) {
    const Environment env = load_environment(a.env_path);
    ConfigEcho echo;
    echo.add("command", "figure1");
    echo.add_env(env, a.env_path);
    const Figure1Result res = figure1(env, a.n, a.out_prefix, echo.lines);
    print_line("wrote " + res.pmf_csv.string());
    print_line("wrote " + res.gauss_csv.string());
    print_line("wrote " + res.heat_csv.string());
    print_line("wrote " + res.svg.string());
    print_line("sigma2_hat=" + format_g17(res.sigma2_hat));
    print_line("mu_hat=" + format_g17(res.mu_hat));
    print_line("sup_distance=" + format_g17(res.sup_distance));
    print_line("gauss_peak=" + format_g17(res.gauss_peak));
    print_line("ratio=" + format_g17(res.sup_distance / res.gauss_peak));
    return kExitOk;
}

// ------------------------------------------------------------- montecarlo

struct MonteCarloArgs {
    std::string env_path;
    long long n = 0;
    long long count = 100000;
    std::uint64_t seed = 1;
    std::string out;
};

int run_montecarlo(const MonteCarloArgs& a) {
    const Environment env = load_environment(a.env_path);
    if (a.count < 1) throw UsageError("montecarlo: need --count >= 1");
    const KernelSnapshot exact = forward_pmf(env, a.n);
    const std::vector<Site> ends = sample_endpoints(env, a.n, a.count, a.seed);

    std::map<Site, long long> hist;
    for (Site k : ends) ++hist[k];

    // total-variation distance between empirical histogram and exact pmf
    const double inv_count = 1.0 / static_cast<double>(a.count);
    double tv = 0.0;
    for (Site k = exact.f.lo(); k <= exact.f.hi(); ++k) {
        const auto it = hist.find(k);
        const double emp = it == hist.end()
                               ? 0.0
                               : static_cast<double>(it->second) * inv_count;
        tv += std::fabs(exact.f.at(k) - emp);
    }
    for (const auto& [k, c] : hist) {
        if (!(k >= exact.f.lo() && k <= exact.f.hi())) {
            tv += static_cast<double>(c) * inv_count;
        }
    }
    tv *= 0.5;

    // Kolmogorov distance of X_n / sqrt(n) to Normal(0, sigma2_hat) with
    // sigma2_hat = Var(X_n)/n taken from the exact pmf, so the statistic
    // measures shape, not the (independently checked) variance relation
    const double root = std::sqrt(static_cast<double>(a.n));
    const auto [pmf_mean, pmf_var] = pmf_mean_variance(exact);
    (void)pmf_mean;
    const double sigma = std::sqrt(pmf_var / static_cast<double>(a.n));
    std::vector<double> scaled(ends.size());
    for (std::size_t i = 0; i < ends.size(); ++i) {
        scaled[i] = static_cast<double>(ends[i]) / root;
    }
    std::sort(scaled.begin(), scaled.end());
    double kolmogorov = 0.0;
    for (std::size_t i = 0; i < scaled.size(); ++i) {
        const double cdf =
            0.5 * std::erfc(-scaled[i] / (sigma * std::numbers::sqrt2));
        const double lo_step = static_cast<double>(i) * inv_count;
        const double hi_step = static_cast<double>(i + 1) * inv_count;
        kolmogorov = std::max({kolmogorov, std::fabs(cdf - lo_step),
                               std::fabs(cdf - hi_step)});
    }

    if (!a.out.empty()) {
        ConfigEcho echo;
        echo.add("command", "montecarlo");
        echo.add_env(env, a.env_path);
        echo.add("n", a.n);
        echo.add("count", a.count);
        echo.add("seed", std::to_string(a.seed));
        echo.add("generator", "splitmix64 per-trajectory streams");
        std::ofstream out(a.out);
        if (!out) throw IoError("cannot open '" + a.out + "' for writing");
        for (const std::string& line : echo.lines) out << "# " << line << "\n";
        out << "k,exact_pmf,empirical_freq\n";
        for (Site k = exact.f.lo(); k <= exact.f.hi(); ++k) {
            const auto it = hist.find(k);
            const double emp = it == hist.end()
                                   ? 0.0
                                   : static_cast<double>(it->second) * inv_count;
            out << k << "," << format_g17(exact.f.at(k)) << ","
                << format_g17(emp) << "\n";
        }
        if (!out) throw IoError("failed while writing '" + a.out + "'");
        print_line("wrote " + a.out);
    }

    print_line("count=" + std::to_string(a.count));
    print_line("tv_distance=" + format_g17(tv));
    print_line("kolmogorov=" + format_g17(kolmogorov));
    print_line("sigma2_hat=" + format_g17(sigma * sigma));
    return kExitOk;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "bllt: exact distribution evolution, heat-equation cross-checks and "
        "diffusive-limit diagnostics for balanced nearest-neighbour random "
        "walks in fixed site-dependent environments"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file; flags take precedence");
    app.allow_config_extras(false);

    GenEnvArgs ge;
    CLI::App* gen = app.add_subcommand(
        "gen-env", "Generate an environment file from a weight law");
    gen->add_option("--law", ge.law,
                    "constant:<w> | uniform:<a>,<b> | "
                    "discrete:<v1>@<p1>,... | periodic:<v1>,<v2>,...")
        ->required();
    gen->add_option("--window", ge.window, "site window '<lo>,<hi>'")->required();
    ge.seed_opt = gen->add_option("--seed", ge.seed, "seed for stochastic laws")
                      ->envname("BLLT_SEED");
    gen->add_option("--out", ge.out, "output environment file")->required();

    EvolveArgs ev;
    CLI::App* evo = app.add_subcommand(
        "evolve", "Evolve a kernel and write it as CSV");
    evo->add_option("--env", ev.env_path, "environment file")->required();
    evo->add_option("--kind", ev.kind, "forward | reversed_a | reversed_b | poissonized")
        ->check(CLI::IsMember({"forward", "reversed_a", "reversed_b", "poissonized"}));
    ev.n_opt = evo->add_option("--n", ev.n, "number of steps (discrete kinds)")
                   ->check(CLI::NonNegativeNumber);
    ev.t_opt = evo->add_option("--t", ev.t, "continuous time (poissonized)");
    evo->add_option("--tol", ev.tol, "poissonized truncation tolerance")
        ->capture_default_str();
    evo->add_option("--out", ev.out, "output CSV")->required();

    LltArgs ll;
    CLI::App* llt_cmd = app.add_subcommand(
        "llt", "Sup-distance of the rescaled modulated kernel from the Gaussian");
    llt_cmd->add_option("--env", ll.env_path, "environment file")->required();
    llt_cmd->add_option("--n", ll.ns, "discrete times (repeatable)");
    llt_cmd->add_option("--t", ll.ts, "continuous times (repeatable)");
    llt_cmd->add_option("--variant", ll.variant,
                        "g (parity-averaged) | a (single-time) | continuous")
        ->check(CLI::IsMember({"g", "a", "continuous"}))
        ->capture_default_str();
    llt_cmd->add_option("--interval", ll.interval, "scaled window '<lo>,<hi>'")
        ->capture_default_str();
    llt_cmd->add_option("--tol", ll.tol, "poissonized truncation tolerance")
        ->capture_default_str();
    ll.mu_opt = llt_cmd->add_option("--mu", ll.mu_override,
                                    "override the inverse-weight average");
    llt_cmd->add_flag("--variance-fit", ll.variance_fit,
                      "fit sigma^2 = Var(X_n)/n from the pmf instead of 2/mu");
    llt_cmd->add_option("--out", ll.out, "optional output CSV");

    DiagnoseArgs dg;
    CLI::App* diag = app.add_subcommand(
        "diagnose", "Run the full inequality/diagnostic battery");
    diag->add_option("--env", dg.env_path, "environment file")->required();
    diag->add_option("--horizon", dg.horizon, "time horizon N (>= 16)")->required();
    diag->add_option("--jobs", dg.jobs, "worker threads")->capture_default_str();
    diag->add_option("--out", dg.out, "output JSON report")->required();

    Figure1Args fg;
    CLI::App* fig = app.add_subcommand(
        "figure1", "Three-curve comparison: pmf, fitted Gaussian, scaled heat solution");
    fig->add_option("--env", fg.env_path, "environment file")->required();
    fig->add_option("--n", fg.n, "number of steps")->required();
    fig->add_option("--out", fg.out_prefix, "output path prefix")->required();

    MonteCarloArgs mc;
    CLI::App* mcc = app.add_subcommand(
        "montecarlo", "Sample endpoints and compare to the exact distribution");
    mcc->add_option("--env", mc.env_path, "environment file")->required();
    mcc->add_option("--n", mc.n, "number of steps")->required();
    mcc->add_option("--count", mc.count, "number of trajectories")
        ->capture_default_str();
    mcc->add_option("--seed", mc.seed, "sampling seed")
        ->envname("BLLT_SEED")
        ->capture_default_str();
    mcc->add_option("--out", mc.out, "optional output CSV");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (gen->parsed()) return run_gen_env(ge);
        if (evo->parsed()) return run_evolve(ev);
        if (llt_cmd->parsed()) return run_llt(ll);
        if (diag->parsed()) return run_diagnose(dg);
        if (fig->parsed()) return run_figure1(fg);
        if (mcc->parsed()) return run_montecarlo(mc);
        std::fputs("error: no subcommand\n", stderr);
        return kExitUsage;
    } catch (const IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const ParseError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const DomainError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const Error& e) {
        // usage, parameter, window and empty-sample errors
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    }
}
