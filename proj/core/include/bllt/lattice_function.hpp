#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace bllt {

using Site = long long;

/// A real-valued function on a contiguous window [lo, hi] of the integer
/// lattice, identically zero outside the window. Value semantics: operators
/// never mutate their input, they materialize a new function (with a window
/// grown by one site where the stencil requires it).
class LatticeFunction {
public:
    LatticeFunction() = default;
    LatticeFunction(Site lo, std::vector<double> values);

    /// The indicator of a single site.
    static LatticeFunction indicator(Site site);
    /// Constant value c on [lo, hi].
    static LatticeFunction constant(Site lo, Site hi, double c);
    static LatticeFunction zeros(Site lo, Site hi);

    bool empty() const { return values_.empty(); }
    std::size_t size() const { return values_.size(); }
    Site lo() const { return lo_; }
    Site hi() const { return lo_ + static_cast<Site>(values_.size()) - 1; }

    /// Value at site k; zero outside the window.
    double at(Site k) const {
        const Site i = k - lo_;
        if (i < 0 || i >= static_cast<Site>(values_.size())) return 0.0;
        return values_[static_cast<std::size_t>(i)];
    }

    std::span<const double> values() const { return values_; }
    const double* data() const { return values_.data(); }
    double* data() { return values_.data(); }

    /// Same function shifted so that site k maps to k + shift.
    LatticeFunction translated(Site shift) const;

    /// Copy with window edges trimmed where |value| < threshold. This is the
    /// only place a window ever shrinks; no operation trims implicitly.
    LatticeFunction compacted(double threshold = 1e-300) const;

    bool all_finite() const;

private:
    Site lo_ = 0;
    std::vector<double> values_;
};

/// Forward difference (grad u)(k) = u(k+1) - u(k); window grows one site left.
LatticeFunction gradient(const LatticeFunction& u);

/// (lap u)(k) = u(k+1) - 2 u(k) + u(k-1); window grows one site each way.
LatticeFunction laplacian(const LatticeFunction& u);

/// Plain inner product sum_k u(k) v(k) over the window intersection.
double inner(const LatticeFunction& u, const LatticeFunction& v);

double norm_l1(const LatticeFunction& u);
double norm_l2(const LatticeFunction& u);
double norm_linf(const LatticeFunction& u);

namespace detail {
/// Deterministic pairwise (tree) summation; used by every inner product and
/// norm so large windows do not accumulate linear rounding error.
double pairwise_sum(std::span<const double> xs);
} // namespace detail

} // namespace bllt
