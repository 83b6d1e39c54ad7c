#include "bllt/markov.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "bllt/errors.hpp"

namespace bllt {

namespace {

// Generic (branchy) stencil application, used for tiny windows.
template <typename Stencil>
LatticeFunction apply_small(Site lo, Site hi, Stencil f) {
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    for (Site k = lo; k <= hi; ++k) out[static_cast<std::size_t>(k - lo)] = f(k);
    return {lo, std::move(out)};
}

LatticeFunction pointwise_difference(const LatticeFunction& a, const LatticeFunction& b) {
    const Site lo = std::min(a.lo(), b.lo());
    const Site hi = std::max(a.hi(), b.hi());
    std::vector<double> out(static_cast<std::size_t>(hi - lo + 1));
    for (Site k = lo; k <= hi; ++k) {
        out[static_cast<std::size_t>(k - lo)] = a.at(k) - b.at(k);
    }
    return {lo, std::move(out)};
}

} // namespace

LatticeFunction apply_P(const Environment& env, const LatticeFunction& u) {
    if (u.empty()) throw ParameterError("apply_P: empty function");
    const Site ulo = u.lo(), uhi = u.hi();
    const Site lo = ulo - 1, hi = uhi + 1;
    env.require_window(lo, hi);
    const double* om = env.omega_data_at(lo); // om[i] = omega at site lo + i

    if (u.size() < 3) {
        return apply_small(lo, hi, [&](Site k) {
            const double w = om[k - lo];
            return w * u.at(k - 1) + (1.0 - 2.0 * w) * u.at(k) + w * u.at(k + 1);
        });
    }

    const std::size_t n = u.size() + 2;
    std::vector<double> out(n);
    const double* uv = u.data();
    out[0] = om[0] * uv[0];
    out[1] = (1.0 - 2.0 * om[1]) * uv[0] + om[1] * uv[1];
    for (std::size_t i = 2; i + 2 < n; ++i) {
        const double w = om[i];
        out[i] = w * uv[i - 2] + (1.0 - 2.0 * w) * uv[i - 1] + w * uv[i];
    }
    out[n - 2] = om[n - 2] * uv[u.size() - 2] + (1.0 - 2.0 * om[n - 2]) * uv[u.size() - 1];
    out[n - 1] = om[n - 1] * uv[u.size() - 1];
    return {lo, std::move(out)};
}

LatticeFunction apply_P_adjoint(const Environment& env, const LatticeFunction& u) {
    if (u.empty()) throw ParameterError("apply_P_adjoint: empty function");
    const Site ulo = u.lo(), uhi = u.hi();
    const Site lo = ulo - 1, hi = uhi + 1;
    env.require_window(lo, hi);
    const double* om = env.omega_data_at(lo);

    if (u.size() < 3) {
        return apply_small(lo, hi, [&](Site j) {
            double acc = (1.0 - 2.0 * om[j - lo]) * u.at(j);
            if (j - 1 >= ulo) acc += om[j - 1 - lo] * u.at(j - 1);
            if (j + 1 <= uhi) acc += om[j + 1 - lo] * u.at(j + 1);
            return acc;
        });
    }

    const std::size_t n = u.size() + 2;
    std::vector<double> out(n);
    const double* uv = u.data();
    out[0] = om[1] * uv[0];
    out[1] = (1.0 - 2.0 * om[1]) * uv[0] + om[2] * uv[1];
    for (std::size_t i = 2; i + 2 < n; ++i) {
        out[i] = om[i - 1] * uv[i - 2] + (1.0 - 2.0 * om[i]) * uv[i - 1] +
                 om[i + 1] * uv[i];
    }
    out[n - 2] = om[n - 3] * uv[u.size() - 2] + (1.0 - 2.0 * om[n - 2]) * uv[u.size() - 1];
    out[n - 1] = om[n - 2] * uv[u.size() - 1];
    return {lo, std::move(out)};
}

double inner_pi(const Environment& env, const LatticeFunction& u,
                const LatticeFunction& v) {
    const Site lo = std::max(u.lo(), v.lo());
    const Site hi = std::min(u.hi(), v.hi());
    if (u.empty() || v.empty() || hi < lo) return 0.0;
    env.require_window(lo, hi);
    std::vector<double> terms(static_cast<std::size_t>(hi - lo + 1));
    for (Site k = lo; k <= hi; ++k) {
        terms[static_cast<std::size_t>(k - lo)] = u.at(k) * v.at(k) / env.omega(k);
    }
    return detail::pairwise_sum(terms);
}

double norm_l1_pi(const Environment& env, const LatticeFunction& u) {
    if (u.empty()) return 0.0;
    env.require_window(u.lo(), u.hi());
    std::vector<double> terms(u.size());
    for (Site k = u.lo(); k <= u.hi(); ++k) {
        terms[static_cast<std::size_t>(k - u.lo())] = std::fabs(u.at(k)) / env.omega(k);
    }
    return detail::pairwise_sum(terms);
}

double norm_l2_pi(const Environment& env, const LatticeFunction& u) {
    if (u.empty()) return 0.0;
    env.require_window(u.lo(), u.hi());
    std::vector<double> terms(u.size());
    for (Site k = u.lo(); k <= u.hi(); ++k) {
        terms[static_cast<std::size_t>(k - u.lo())] = u.at(k) * u.at(k) / env.omega(k);
    }
    return std::sqrt(detail::pairwise_sum(terms));
}

double norm_linf_pi(const Environment&, const LatticeFunction& u) {
    return norm_linf(u);
}

double dirichlet_form(const LatticeFunction& u, const LatticeFunction& v) {
    return inner(gradient(u), gradient(v));
}

double dirichlet_form2(const Environment& env, const LatticeFunction& u,
                       const LatticeFunction& v) {
    const LatticeFunction p2v = apply_P(env, apply_P(env, v));
    return inner_pi(env, u, pointwise_difference(v, p2v));
}

} // namespace bllt
