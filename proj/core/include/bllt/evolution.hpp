#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bllt/environment.hpp"
#include "bllt/lattice_function.hpp"

namespace bllt {

enum class KernelKind {
    Forward,     ///< pmf of the walk at time n started from site 0
    ReversedA,   ///< a(n, .) = P^n applied to the indicator of 0
    ReversedB,   ///< b(n, .) = (a(n+1, .) + a(n, .)) / 2
    Poissonized, ///< continuous-time kernel at time t (truncated mixture)
};

/// One evolved kernel together with the bookkeeping needed to interpret and
/// reproduce it.
struct KernelSnapshot {
    KernelKind kind = KernelKind::Forward;
    long long n = 0;    ///< discrete time (Forward/ReversedA/ReversedB)
    double t = 0.0;     ///< continuous time (Poissonized)
    double tol = 0.0;   ///< truncation tolerance actually used (Poissonized)
    LatticeFunction f;
    std::uint64_t env_fingerprint = 0;
};

/// Streaming evolution: holds only the current function and yields each step
/// in turn, so an n-step sweep costs O(window) memory rather than O(n) copies.
/// current() is invalidated by advance(); callers who keep a step copy it.
class EvolutionStream {
public:
    /// kind must be Forward or ReversedA; both start from the indicator of 0.
    EvolutionStream(const Environment& env, KernelKind kind);

    long long n() const { return n_; }
    const LatticeFunction& current() const { return cur_; }
    void advance();
    KernelSnapshot snapshot() const;

private:
    const Environment* env_;
    KernelKind kind_;
    long long n_ = 0;
    LatticeFunction cur_;
};

/// Distribution of the walk at time n started from site 0 (n applications of
/// the adjoint). Environment must cover [-n-1, n+1].
KernelSnapshot forward_pmf(const Environment& env, long long n);

/// a(n, .) = P^n 1_0, via repeated operator application.
KernelSnapshot reversed_a(const Environment& env, long long n);

/// Same quantity advanced by the explicit difference scheme
/// a <- a + omega * (lap a); an independent code path kept for cross-checking
/// the operator route.
KernelSnapshot reversed_a_heatstep(const Environment& env, long long n);

/// b(n, .) = (a(n+1, .) + a(n, .)) / 2.
KernelSnapshot reversed_b(const Environment& env, long long n);

/// Continuous-time kernel at time t >= 0 via the truncated Poisson mixture
/// over P^n 1_0. The truncation order N is the smallest integer whose
/// cumulative Poisson(t) weight reaches 1 - tol (weights are computed by a
/// stable recursion anchored at the mode), so the sup-norm error is at most
/// tol. Requires tol in (0, 1e-6]; the environment must cover [-N-1, N+1].
KernelSnapshot poissonized(const Environment& env, double t, double tol);

/// Endpoints of `count` independent n-step trajectories started from 0.
/// Trajectory i runs on the splitmix64 stream derived from (seed, i); per
/// step one uniform U in [0,1) is drawn and the move is left on [0, w),
/// right on [w, 2w), hold on [2w, 1).
std::vector<Site> sample_endpoints(const Environment& env, long long n,
                                   long long count, std::uint64_t seed);

/// Mean and variance of a Forward snapshot, pairwise-summed.
std::pair<double, double> pmf_mean_variance(const KernelSnapshot& snap);

} // namespace bllt
