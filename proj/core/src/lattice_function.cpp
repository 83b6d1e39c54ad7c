#include "bllt/lattice_function.hpp"

#include <algorithm>
#include <cmath>

#include "bllt/errors.hpp"

namespace bllt {

LatticeFunction::LatticeFunction(Site lo, std::vector<double> values)
    : lo_(lo), values_(std::move(values)) {}

LatticeFunction LatticeFunction::indicator(Site site) {
    return {site, std::vector<double>{1.0}};
}

LatticeFunction LatticeFunction::constant(Site lo, Site hi, double c) {
    if (hi < lo) throw ParameterError("LatticeFunction::constant: hi < lo");
    return {lo, std::vector<double>(static_cast<std::size_t>(hi - lo + 1), c)};
}

LatticeFunction LatticeFunction::zeros(Site lo, Site hi) {
    return constant(lo, hi, 0.0);
}

LatticeFunction LatticeFunction::translated(Site shift) const {
    return {lo_ + shift, values_};
}

LatticeFunction LatticeFunction::compacted(double threshold) const {
    std::size_t first = 0, last = values_.size();
    while (first < last && std::fabs(values_[first]) < threshold) ++first;
    while (last > first && std::fabs(values_[last - 1]) < threshold) --last;
    return {lo_ + static_cast<Site>(first),
            std::vector<double>(values_.begin() + static_cast<std::ptrdiff_t>(first),
                                values_.begin() + static_cast<std::ptrdiff_t>(last))};
}

bool LatticeFunction::all_finite() const {
    return std::all_of(values_.begin(), values_.end(),
                       [](double v) { return std::isfinite(v); });
}

namespace detail {

double pairwise_sum(std::span<const double> xs) {
    if (xs.size() <= 32) {
        double s = 0.0;
        for (double v : xs) s += v;
        return s;
    }
    const std::size_t half = xs.size() / 2;
    return pairwise_sum(xs.first(half)) + pairwise_sum(xs.subspan(half));
}

} // namespace detail

LatticeFunction gradient(const LatticeFunction& u) {
    if (u.empty()) return u;
    // (grad u)(k) = u(k+1) - u(k) is supported on [lo-1, hi].
    const Site lo = u.lo() - 1;
    std::vector<double> out(u.size() + 1);
    for (Site k = lo; k <= u.hi(); ++k) {
        out[static_cast<std::size_t>(k - lo)] = u.at(k + 1) - u.at(k);
    }
    return {lo, std::move(out)};
}

LatticeFunction laplacian(const LatticeFunction& u) {
    if (u.empty()) return u;
    const Site lo = u.lo() - 1;
    std::vector<double> out(u.size() + 2);
    for (Site k = lo; k <= u.hi() + 1; ++k) {
        out[static_cast<std::size_t>(k - lo)] = u.at(k + 1) - 2.0 * u.at(k) + u.at(k - 1);
    }
    return {lo, std::move(out)};
}

double inner(const LatticeFunction& u, const LatticeFunction& v) {
    const Site lo = std::max(u.lo(), v.lo());
    const Site hi = std::min(u.hi(), v.hi());
    if (u.empty() || v.empty() || hi < lo) return 0.0;
    std::vector<double> terms(static_cast<std::size_t>(hi - lo + 1));
    for (Site k = lo; k <= hi; ++k) {
        terms[static_cast<std::size_t>(k - lo)] = u.at(k) * v.at(k);
    }
    return detail::pairwise_sum(terms);
}

double norm_l1(const LatticeFunction& u) {
    std::vector<double> terms(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) terms[i] = std::fabs(u.values()[i]);
    return detail::pairwise_sum(terms);
}

double norm_l2(const LatticeFunction& u) {
    std::vector<double> terms(u.size());
    for (std::size_t i = 0; i < u.size(); ++i) {
        terms[i] = u.values()[i] * u.values()[i];
    }
    return std::sqrt(detail::pairwise_sum(terms));
}

double norm_linf(const LatticeFunction& u) {
    double m = 0.0;
    for (double v : u.values()) m = std::max(m, std::fabs(v));
    return m;
}

} // namespace bllt
