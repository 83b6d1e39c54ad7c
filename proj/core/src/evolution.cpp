#include "bllt/evolution.hpp"

#include <cmath>
#include <vector>

#include "bllt/errors.hpp"
#include "bllt/markov.hpp"
#include "bllt/rng.hpp"

namespace bllt {

EvolutionStream::EvolutionStream(const Environment& env, KernelKind kind)
    : env_(&env), kind_(kind), cur_(LatticeFunction::indicator(0)) {
    if (kind != KernelKind::Forward && kind != KernelKind::ReversedA) {
        throw UsageError("EvolutionStream: kind must be Forward or ReversedA");
    }
    env.require_window(0, 0);
}

void EvolutionStream::advance() {
    cur_ = kind_ == KernelKind::Forward ? apply_P_adjoint(*env_, cur_)
                                        : apply_P(*env_, cur_);
    ++n_;
}

KernelSnapshot EvolutionStream::snapshot() const {
    return {kind_, n_, 0.0, 0.0, cur_, env_->fingerprint()};
}

namespace {

KernelSnapshot evolve(const Environment& env, KernelKind kind, long long n) {
    if (n < 0) throw ParameterError("evolution: n must be >= 0");
    EvolutionStream s(env, kind);
    for (long long m = 0; m < n; ++m) s.advance();
    return s.snapshot();
}

} // namespace

KernelSnapshot forward_pmf(const Environment& env, long long n) {
    return evolve(env, KernelKind::Forward, n);
}

KernelSnapshot reversed_a(const Environment& env, long long n) {
    return evolve(env, KernelKind::ReversedA, n);
}

KernelSnapshot reversed_a_heatstep(const Environment& env, long long n) {
    if (n < 0) throw ParameterError("evolution: n must be >= 0");
    LatticeFunction a = LatticeFunction::indicator(0);
    for (long long m = 0; m < n; ++m) {
        // a <- a + omega * (lap a), the explicit difference scheme; this is
        // kept free of apply_P so the two routes check each other.
        const LatticeFunction lap = laplacian(a);
        env.require_window(lap.lo(), lap.hi());
        const double* om = env.omega_data_at(lap.lo());
        std::vector<double> next(lap.size());
        for (Site k = lap.lo(); k <= lap.hi(); ++k) {
            const std::size_t i = static_cast<std::size_t>(k - lap.lo());
            next[i] = a.at(k) + om[i] * lap.at(k);
        }
        a = LatticeFunction(lap.lo(), std::move(next));
    }
    return {KernelKind::ReversedA, n, 0.0, 0.0, std::move(a), env.fingerprint()};
}

KernelSnapshot reversed_b(const Environment& env, long long n) {
    if (n < 0) throw ParameterError("evolution: n must be >= 0");
    EvolutionStream s(env, KernelKind::ReversedA);
    for (long long m = 0; m < n; ++m) s.advance();
    const LatticeFunction at_n = s.current();
    s.advance();
    const LatticeFunction& at_np1 = s.current();
    std::vector<double> vals(at_np1.size());
    for (Site k = at_np1.lo(); k <= at_np1.hi(); ++k) {
        vals[static_cast<std::size_t>(k - at_np1.lo())] =
            0.5 * (at_np1.at(k) + at_n.at(k));
    }
    return {KernelKind::ReversedB, n, 0.0, 0.0,
            LatticeFunction(at_np1.lo(), std::move(vals)), env.fingerprint()};
}

KernelSnapshot poissonized(const Environment& env, double t, double tol) {
    if (!(tol > 0.0) || !(tol <= 1e-6)) {
        throw ParameterError("poissonized: tol must lie in (0, 1e-6]");
    }
    if (!std::isfinite(t) || t < 0.0) {
        throw ParameterError("poissonized: t must be finite and >= 0");
    }

    // Poisson(t) weights by upward/downward recursion anchored at the mode,
    // extended until the cumulative mass reaches 1 - tol.
    std::vector<double> w;
    if (t == 0.0) {
        w = {1.0};
    } else {
        const long long mode = static_cast<long long>(std::floor(t));
        w.assign(static_cast<std::size_t>(mode) + 1, 0.0);
        w[static_cast<std::size_t>(mode)] =
            std::exp(-t + static_cast<double>(mode) * std::log(t) -
                     std::lgamma(static_cast<double>(mode) + 1.0));
        for (long long m = mode; m > 0; --m) {
            w[static_cast<std::size_t>(m - 1)] =
                w[static_cast<std::size_t>(m)] * static_cast<double>(m) / t;
        }
        double cum = 0.0;
        for (double v : w) cum += v;
        // Hard cap far beyond any plausible tail, so rounding in `cum` can
        // never turn this loop infinite.
        const long long cap =
            mode + static_cast<long long>(20.0 * std::sqrt(t + 1.0)) + 64;
        while (cum < 1.0 - tol && static_cast<long long>(w.size()) <= cap) {
            const double next = w.back() * t / static_cast<double>(w.size());
            w.push_back(next);
            cum += next;
        }
    }

    const long long N = static_cast<long long>(w.size()) - 1;
    env.require_window(-N - 1, N + 1);

    LatticeFunction acc = LatticeFunction::zeros(-N, N);
    EvolutionStream s(env, KernelKind::ReversedA);
    for (long long m = 0; m <= N; ++m) {
        if (m > 0) s.advance();
        const LatticeFunction& a = s.current();
        const double wm = w[static_cast<std::size_t>(m)];
        double* out = acc.data();
        const Site off = a.lo() - acc.lo();
        for (std::size_t i = 0; i < a.size(); ++i) {
            out[static_cast<std::size_t>(off) + i] += wm * a.values()[i];
        }
    }
    return {KernelKind::Poissonized, N, t, tol, std::move(acc), env.fingerprint()};
}

std::vector<Site> sample_endpoints(const Environment& env, long long n,
                                   long long count, std::uint64_t seed) {
    if (n < 0) throw ParameterError("sample_endpoints: n must be >= 0");
    if (count < 1) throw ParameterError("sample_endpoints: count must be >= 1");
    env.require_window(-n, n);
    const double* om = env.omega_data_at(env.lo());
    const Site base = env.lo();
    std::vector<Site> out(static_cast<std::size_t>(count));
    for (long long i = 0; i < count; ++i) {
        SplitMix64 rng(derive_stream_seed(seed, static_cast<std::uint64_t>(i)));
        Site pos = 0;
        for (long long step = 0; step < n; ++step) {
            const double wk = om[pos - base];
            const double u = rng.next_unit();
            if (u < wk) {
                --pos;
            } else if (u < 2.0 * wk) {
                ++pos;
            } // else hold
        }
        out[static_cast<std::size_t>(i)] = pos;
    }
    return out;
}

std::pair<double, double> pmf_mean_variance(const KernelSnapshot& snap) {
    if (snap.kind != KernelKind::Forward) {
        throw UsageError("pmf_mean_variance: snapshot must be a Forward pmf");
    }
    const LatticeFunction& p = snap.f;
    std::vector<double> first(p.size()), second(p.size());
    for (Site k = p.lo(); k <= p.hi(); ++k) {
        const std::size_t i = static_cast<std::size_t>(k - p.lo());
        const double kk = static_cast<double>(k);
        first[i] = kk * p.at(k);
        second[i] = kk * kk * p.at(k);
    }
    const double mean = detail::pairwise_sum(first);
    const double var = detail::pairwise_sum(second) - mean * mean;
    return {mean, var};
}

} // namespace bllt
