// Acceptance battery for the library: eleven end-to-end criteria covering
// exact-oracle equivalence, independent-route agreement, inequality bounds,
// convergence behaviour and sampling cross-checks. Prints exactly one
// PASS/FAIL line per criterion (with the measured quantity and its bound)
// and exits nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <unistd.h>

#include "bllt/diagnostics.hpp"
#include "bllt/environment.hpp"
#include "bllt/evolution.hpp"
#include "bllt/llt.hpp"
#include "oracles.hpp"

namespace {

using namespace bllt;

int g_failures = 0;

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

template <typename Body>
void criterion(int id, const char* label, Body&& body) {
    bool pass = false;
    std::string detail;
    try {
        Outcome o = body();
        pass = o.pass;
        detail = std::move(o.detail);
    } catch (const std::exception& e) {
        detail = std::string("unexpected exception: ") + e.what();
    }
    std::printf("%s %2d  %s: %s\n", pass ? "PASS" : "FAIL", id, label, detail.c_str());
    std::fflush(stdout);
    if (!pass) ++g_failures;
}

Environment make_env(const std::string& law, Site half,
                     std::optional<std::uint64_t> seed) {
    return Environment::generate(LawDescriptor::parse(law), -half, half, seed);
}

} // namespace

int main() {
    // ---------------------------------------------------------- criterion 1
    criterion(1, "symmetric-walk pmf equals the binomial oracle for n <= 64", [] {
        const Environment env = make_env("constant:0.5", 70, {});
        EvolutionStream s(env, KernelKind::Forward);
        double worst = 0.0;
        for (long long n = 1; n <= 64; ++n) {
            s.advance();
            for (Site k = -n; k <= n; ++k) {
                worst = std::max(
                    worst, std::fabs(s.current().at(k) - oracles::binomial_pmf(n, k)));
            }
        }
        return Outcome{worst <= 1e-12, "max dev " + num(worst) + " (tol 1e-12)"};
    });

    // --------------------------------------------- criteria 2 and 3 (shared)
    // twenty seeded elliptic environments, evolved once and probed at three
    // checkpoints up to n = 4096
    std::vector<Environment> sweep;
    double worst_heat = std::numeric_limits<double>::infinity();
    double worst_rev = std::numeric_limits<double>::infinity();
    std::string sweep_error;
    try {
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            sweep.push_back(make_env("uniform:0.1,0.5", 4100, seed));
        }
        worst_heat = 0.0;
        worst_rev = 0.0;
        const std::vector<long long> checkpoints{16, 256, 4096};
        for (const Environment& env : sweep) {
            EvolutionStream fwd(env, KernelKind::Forward);
            EvolutionStream rev(env, KernelKind::ReversedA);
            const double w0 = env.omega(0);
            long long cur = 0;
            for (long long chk : checkpoints) {
                while (cur < chk) {
                    fwd.advance();
                    rev.advance();
                    ++cur;
                }
                const KernelSnapshot heat = reversed_a_heatstep(env, chk);
                for (Site k = -chk; k <= chk; ++k) {
                    worst_heat = std::max(
                        worst_heat, std::fabs(rev.current().at(k) - heat.f.at(k)));
                    worst_rev = std::max(
                        worst_rev, std::fabs(w0 * rev.current().at(k) -
                                             env.omega(k) * fwd.current().at(k)));
                }
            }
        }
    } catch (const std::exception& e) {
        sweep_error = e.what();
    }
    criterion(2, "operator and difference-scheme evolutions agree on 20 environments",
              [&] {
                  if (!sweep_error.empty()) throw std::runtime_error(sweep_error);
                  return Outcome{worst_heat <= 1e-13,
                                 "max pointwise gap " + num(worst_heat) +
                                     " (tol 1e-13, n <= 4096)"};
              });
    criterion(3, "time-reversal identity w0*a(n,k) = w_k*p_n(k) on the same sweep",
              [&] {
                  if (!sweep_error.empty()) throw std::runtime_error(sweep_error);
                  return Outcome{worst_rev <= 1e-12,
                                 "max identity gap " + num(worst_rev) +
                                     " (tol 1e-12, n <= 4096)"};
              });

    // ---------------------------------------------------------- criterion 4
    criterion(4, "gradient decay and tail-sum bounds on the same 20 environments",
              [&] {
                  if (!sweep_error.empty()) throw std::runtime_error(sweep_error);
                  const long long N = 4096;
                  bool all_pass = true;
                  double worst_mono = -std::numeric_limits<double>::infinity();
                  double worst_tail = -std::numeric_limits<double>::infinity();
                  for (const Environment& env : sweep) {
                      const CheckRecord g = gradient_monotonicity(env, N);
                      all_pass = all_pass && g.passed();
                      worst_mono = std::max(
                          {worst_mono, g.constants.at("max_step_increase_a"),
                           g.constants.at("max_step_increase_b")});
                      for (long long n : {1LL, 4LL, 16LL, 64LL}) {
                          const CheckRecord l = lemma_bound_b(env, n, N);
                          all_pass = all_pass && l.passed();
                          worst_tail = std::max(
                              worst_tail, l.statistic.back() - l.bound.front());
                      }
                  }
                  const bool ok = all_pass && worst_mono <= 1e-12 && worst_tail <= 1e-10;
                  return Outcome{ok, "max grad step increase " + num(worst_mono) +
                                         " (tol 1e-12), max tail-sum excess " +
                                         num(worst_tail) + " (tol 1e-10)"};
              });

    // ---------------------------------------------------------- criterion 5
    criterion(5, "poissonized kernel matches the Bessel series at t = 1, 10, 100", [] {
        const Environment env = make_env("constant:0.5", 400, {});
        double worst = 0.0;
        for (double t : {1.0, 10.0, 100.0}) {
            const KernelSnapshot snap = poissonized(env, t, 1e-12);
            const auto kmax = static_cast<Site>(3.0 * std::sqrt(t));
            for (Site k = -kmax; k <= kmax; ++k) {
                worst = std::max(worst, std::fabs(snap.f.at(k) -
                                                  oracles::continuous_ssrw_pmf(k, t)));
            }
        }
        return Outcome{worst <= 1e-10, "max dev " + num(worst) + " (tol 1e-10)"};
    });

    // ---------------------------------------------------------- criterion 6
    criterion(6, "lazy environments keep even/odd return differences nonpositive", [] {
        double worst = -std::numeric_limits<double>::infinity();
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const Environment env = make_env("uniform:0.05,0.25", 2052, seed);
            EvolutionStream s(env, KernelKind::ReversedA);
            std::vector<double> a0;
            a0.reserve(2 * 1024 + 3);
            a0.push_back(s.current().at(0));
            for (long long n = 1; n <= 2 * 1024 + 2; ++n) {
                s.advance();
                a0.push_back(s.current().at(0));
            }
            for (std::size_t m = 0; m <= 1024; ++m) {
                worst = std::max(worst, a0[2 * m + 2] - a0[2 * m + 1]);
            }
        }
        return Outcome{worst <= 1e-14,
                       "max a(2m+2,0)-a(2m+1,0) = " + num(worst) +
                           " (tol 1e-14, m <= 1024, 10 seeds)"};
    });

    // ---------------------------------------------------------- criterion 7
    criterion(7, "parity dichotomy: raw-pmf error stays large, averaged error halves",
              [] {
                  const Environment env = make_env("constant:0.5", 32770, {});
                  const Interval I{-2.0, 2.0};
                  double min_pmf = std::numeric_limits<double>::infinity();
                  for (int e = 10; e <= 15; ++e) {
                      const long long n = 1LL << e;
                      const GaussianRef ref = GaussianRef::from_environment(env, n);
                      min_pmf = std::min(min_pmf, llt_sup_error_discrete(
                                                      env, n, I, ref, DiscreteVariant::Pmf));
                  }
                  const double g10 = llt_sup_error_discrete(
                      env, 1LL << 10, I, GaussianRef::from_environment(env, 1LL << 10),
                      DiscreteVariant::G);
                  const double g15 = llt_sup_error_discrete(
                      env, 1LL << 15, I, GaussianRef::from_environment(env, 1LL << 15),
                      DiscreteVariant::G);
                  const bool ok = min_pmf > 0.15 && g15 <= 0.5 * g10;
                  return Outcome{ok, "min raw-pmf error " + num(min_pmf) +
                                         " (> 0.15), averaged error " + num(g15) +
                                         " at 2^15 vs " + num(g10) +
                                         " at 2^10 (need halving)"};
              });

    // ---------------------------------------------------------- criterion 8
    criterion(8, "random environment: averaged error halves and figure gap < 2%", [] {
        const Environment env = make_env("uniform:0.1,0.5", 32770, 7);
        const Interval I{-2.0, 2.0};
        const double e11 = llt_sup_error_discrete(
            env, 1LL << 11, I, GaussianRef::from_environment(env, 1LL << 11),
            DiscreteVariant::G);
        const double e15 = llt_sup_error_discrete(
            env, 1LL << 15, I, GaussianRef::from_environment(env, 1LL << 15),
            DiscreteVariant::G);

        namespace fs = std::filesystem;
        const fs::path prefix =
            fs::temp_directory_path() /
            ("bllt_acceptance_" + std::to_string(::getpid()));
        const Figure1Result res = figure1(env, 1LL << 15, prefix.string());
        const double ratio = res.sup_distance / res.gauss_peak;
        for (const fs::path& p : {res.pmf_csv, res.gauss_csv, res.heat_csv, res.svg}) {
            std::error_code ec;
            fs::remove(p, ec);
        }
        const bool ok = e15 <= 0.5 * e11 && ratio <= 0.02;
        return Outcome{ok, "error " + num(e15) + " at 2^15 vs " + num(e11) +
                               " at 2^11 (need halving), curve gap " +
                               num(100.0 * ratio) + "% of peak (tol 2%)"};
    });

    // ---------------------------------------------------------- criterion 9
    criterion(9, "periodic environment: variance per step approaches 2/mu", [] {
        const Environment env = make_env("periodic:0.25,0.5", 16390, {});
        const long long n = 1LL << 14;
        const GaussianRef ref = GaussianRef::from_environment(env, n);
        const auto [mean, var] = pmf_mean_variance(forward_pmf(env, n));
        (void)mean;
        const double target = ref.sigma2; // = 2/mu
        const double dev = std::fabs(var / static_cast<double>(n) - target);
        const bool ok = std::fabs(ref.mu - 3.0) <= 1e-12 && dev <= 0.02 * target;
        return Outcome{ok, "mu " + num(ref.mu) + " (expect 3), |Var/n - 2/mu| = " +
                               num(dev) + " (tol " + num(0.02 * target) + ")"};
    });

    // --------------------------------------------------------- criterion 10
    criterion(10, "heat-kernel constant: symmetric value and elliptic stabilization",
              [] {
                  const Environment ssrw = make_env("constant:0.5", 8200, {});
                  const CheckRecord s = a3_statistic(ssrw, 1LL << 12);
                  const double dev = std::fabs(s.constants.at("Dhat_N") -
                                               std::sqrt(2.0 / std::numbers::pi));
                  double worst_ratio = 0.0;
                  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
                      const Environment env =
                          make_env("discrete:0.2@0.5,0.45@0.5", 8200, seed);
                      const CheckRecord r = a3_statistic(env, 1LL << 12);
                      worst_ratio = std::max(worst_ratio,
                                             r.constants.at("Dhat_2N") /
                                                 r.constants.at("Dhat_N"));
                  }
                  const bool ok = dev <= 0.01 && worst_ratio <= 1.01;
                  return Outcome{ok, "|Dhat - sqrt(2/pi)| = " + num(dev) +
                                         " (tol 0.01), max growth ratio " +
                                         num(worst_ratio) + " (tol 1.01)"};
              });

    // --------------------------------------------------------- criterion 11
    criterion(11, "monte carlo endpoints match the exact law and its gaussian limit",
              [] {
                  const Environment env = make_env("uniform:0.08,0.12", 4100, 11);
                  const long long n = 4096, count = 100000;
                  const KernelSnapshot exact = forward_pmf(env, n);
                  const std::vector<Site> ends = sample_endpoints(env, n, count, 7);

                  std::map<Site, long long> hist;
                  for (Site k : ends) ++hist[k];
                  std::vector<std::pair<long, double>> exact_pairs, emp_pairs;
                  for (Site k = exact.f.lo(); k <= exact.f.hi(); ++k) {
                      exact_pairs.emplace_back(static_cast<long>(k), exact.f.at(k));
                  }
                  const double inv = 1.0 / static_cast<double>(count);
                  for (const auto& [k, c] : hist) {
                      emp_pairs.emplace_back(static_cast<long>(k),
                                             static_cast<double>(c) * inv);
                  }
                  const double tv = oracles::tv_distance(exact_pairs, emp_pairs);

                  const auto [mean, var] = pmf_mean_variance(exact);
                  (void)mean;
                  const double sigma2_hat = var / static_cast<double>(n);
                  const double root = std::sqrt(static_cast<double>(n));
                  std::vector<double> scaled(ends.size());
                  for (std::size_t i = 0; i < ends.size(); ++i) {
                      scaled[i] = static_cast<double>(ends[i]) / root;
                  }
                  std::sort(scaled.begin(), scaled.end());
                  const double kol = oracles::kolmogorov_to_normal(scaled, sigma2_hat);

                  const bool ok = tv <= 0.02 && kol <= 0.02;
                  return Outcome{ok, "tv " + num(tv) + " (tol 0.02), kolmogorov " +
                                         num(kol) + " (tol 0.02), 1e5 samples at n=4096"};
              });

    return g_failures == 0 ? 0 : 1;
}
