#include "bllt/llt.hpp"

#include <cmath>
#include <numbers>

#include "bllt/errors.hpp"
#include "bllt/io_csv.hpp"
#include "bllt/markov.hpp"
#include "bllt/svg.hpp"

namespace bllt {

namespace {

void check_interval(Interval I) {
    if (!(I.lo < I.hi)) throw ParameterError("interval: need lo < hi");
}

void check_positive_time(double time) {
    if (!(time > 0.0)) throw ParameterError("profile: need time >= 1 step (t > 0)");
}

double modulated_target(const GaussianRef& ref, double x) {
    return phi(ref, x) / ref.mu;
}

} // namespace

GaussianRef GaussianRef::from_mu(double mu) {
    if (!(mu > 0.0) || !std::isfinite(mu)) {
        throw ParameterError("GaussianRef: mu must be positive and finite");
    }
    return {2.0 / mu, mu};
}

GaussianRef GaussianRef::from_sigma2(double sigma2) {
    if (!(sigma2 > 0.0) || !std::isfinite(sigma2)) {
        throw ParameterError("GaussianRef: sigma2 must be positive and finite");
    }
    return {sigma2, 2.0 / sigma2};
}

GaussianRef GaussianRef::from_environment(const Environment& env, long long n) {
    if (n < 1) throw ParameterError("GaussianRef::from_environment: need n >= 1");
    const double root = std::sqrt(static_cast<double>(n));
    return from_mu(average_inverse_omega(env, -root, root, root));
}

double phi(const GaussianRef& ref, double x) {
    if (!(ref.sigma2 > 0.0)) throw ParameterError("phi: sigma2 must be positive");
    return std::exp(-x * x / (2.0 * ref.sigma2)) /
           std::sqrt(2.0 * std::numbers::pi * ref.sigma2);
}

double ProfileCurve::scale() const { return std::sqrt(n_or_t); }

namespace {

ProfileCurve build_profile(const Environment& env, const LatticeFunction& f,
                           double time, Interval I, ProfileVariant variant,
                           const LatticeFunction* f_next) {
    check_interval(I);
    check_positive_time(time);
    const double scale = std::sqrt(time);
    const Site k_lo = static_cast<Site>(std::floor(scale * I.lo));
    const Site k_hi = static_cast<Site>(std::floor(scale * I.hi));
    env.require_window(k_lo, k_hi);

    ProfileCurve curve;
    curve.n_or_t = time;
    curve.variant = variant;
    curve.xs.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
    curve.values.reserve(static_cast<std::size_t>(k_hi - k_lo + 1));
    const double w0 = env.omega(0);
    for (Site k = k_lo; k <= k_hi; ++k) {
        curve.xs.push_back(static_cast<double>(k) / scale);
        double v = 0.0;
        switch (variant) {
            case ProfileVariant::FA:
            case ProfileVariant::FB:
                v = scale * f.at(k);
                break;
            case ProfileVariant::ModulatedA:
                v = env.omega(k) * scale * f.at(k);
                break;
            case ProfileVariant::ModulatedG:
                v = env.omega(k) * scale * 0.5 * (f.at(k) + f_next->at(k));
                break;
            case ProfileVariant::Continuous:
                // w_k * (forward kernel at k) equals w_0 * a(t, k).
                v = w0 * scale * f.at(k);
                break;
        }
        curve.values.push_back(v);
    }
    return curve;
}

} // namespace

ProfileCurve scaled_profile(const Environment& env, const KernelSnapshot& snap,
                            Interval I, ProfileVariant variant) {
    switch (variant) {
        case ProfileVariant::FA:
            if (snap.kind != KernelKind::ReversedA) {
                throw UsageError("scaled_profile: FA needs a ReversedA snapshot");
            }
            break;
        case ProfileVariant::FB:
            if (snap.kind != KernelKind::ReversedB) {
                throw UsageError("scaled_profile: FB needs a ReversedB snapshot");
            }
            break;
        case ProfileVariant::ModulatedA:
            if (snap.kind != KernelKind::Forward) {
                throw UsageError("scaled_profile: ModulatedA needs a Forward snapshot");
            }
            break;
        case ProfileVariant::ModulatedG:
            throw UsageError("scaled_profile: ModulatedG needs two snapshots; "
                             "use scaled_profile_g");
        case ProfileVariant::Continuous:
            if (snap.kind != KernelKind::Poissonized) {
                throw UsageError("scaled_profile: Continuous needs a Poissonized snapshot");
            }
            break;
    }
    const double time = snap.kind == KernelKind::Poissonized
                            ? snap.t
                            : static_cast<double>(snap.n);
    if (snap.kind != KernelKind::Poissonized && snap.n < 1) {
        throw ParameterError("scaled_profile: need n >= 1");
    }
    return build_profile(env, snap.f, time, I, variant, nullptr);
}

ProfileCurve scaled_profile_g(const Environment& env, const KernelSnapshot& at_n,
                              const KernelSnapshot& at_np1, Interval I) {
    if (at_n.kind != KernelKind::Forward || at_np1.kind != KernelKind::Forward) {
        throw UsageError("scaled_profile_g: needs Forward snapshots");
    }
    if (at_np1.n != at_n.n + 1) {
        throw UsageError("scaled_profile_g: snapshots must be at consecutive times");
    }
    if (at_n.n < 1) throw ParameterError("scaled_profile_g: need n >= 1");
    return build_profile(env, at_n.f, static_cast<double>(at_n.n), I,
                         ProfileVariant::ModulatedG, &at_np1.f);
}

double sup_error_vs_gaussian(const ProfileCurve& profile, const GaussianRef& ref,
                             Interval I) {
    check_interval(I);
    const double scale = profile.scale();
    double worst = 0.0;
    for (std::size_t i = 0; i < profile.xs.size(); ++i) {
        const Site k = static_cast<Site>(std::llround(profile.xs[i] * scale));
        const double cell_lo = std::max(I.lo, static_cast<double>(k) / scale);
        const double cell_hi = std::min(I.hi, static_cast<double>(k + 1) / scale);
        if (!(cell_hi >= cell_lo)) continue;
        const double v = profile.values[i];
        double err = std::max(std::fabs(v - modulated_target(ref, cell_lo)),
                              std::fabs(v - modulated_target(ref, cell_hi)));
        if (cell_lo < 0.0 && cell_hi > 0.0) {
            // phi peaks inside the cell; include it so the reported value
            // still upper-bounds the true supremum.
            err = std::max(err, std::fabs(v - modulated_target(ref, 0.0)));
        }
        worst = std::max(worst, err);
    }
    return worst;
}

double llt_sup_error_discrete(const Environment& env, long long n, Interval I,
                              const GaussianRef& ref, DiscreteVariant variant) {
    if (n < 1) throw ParameterError("llt_sup_error_discrete: need n >= 1");
    EvolutionStream s(env, KernelKind::Forward);
    for (long long m = 0; m < n; ++m) s.advance();
    if (variant == DiscreteVariant::Pmf) {
        const ProfileCurve prof =
            scaled_profile(env, s.snapshot(), I, ProfileVariant::ModulatedA);
        return sup_error_vs_gaussian(prof, ref, I);
    }
    const KernelSnapshot at_n = s.snapshot();
    s.advance();
    const ProfileCurve prof = scaled_profile_g(env, at_n, s.snapshot(), I);
    return sup_error_vs_gaussian(prof, ref, I);
}

double llt_sup_error_continuous(const Environment& env, double t, Interval I,
                                const GaussianRef& ref, double tol) {
    const KernelSnapshot snap = poissonized(env, t, tol);
    const ProfileCurve prof = scaled_profile(env, snap, I, ProfileVariant::Continuous);
    return sup_error_vs_gaussian(prof, ref, I);
}

std::vector<ConvergenceRow> convergence_curve(const Environment& env,
                                              const std::vector<long long>& ns,
                                              Interval I, const GaussianRef& ref,
                                              DiscreteVariant variant) {
    std::vector<ConvergenceRow> rows;
    rows.reserve(ns.size());
    for (long long n : ns) {
        rows.push_back({n, llt_sup_error_discrete(env, n, I, ref, variant)});
    }
    return rows;
}

Figure1Result figure1(const Environment& env, long long n,
                      const std::string& out_prefix,
                      std::span<const std::string> config_comments) {
    if (n < 1) throw ParameterError("figure1: need n >= 1");
    const KernelSnapshot pmf = forward_pmf(env, n);
    const KernelSnapshot heat = reversed_a(env, n);

    const auto [mean, var] = pmf_mean_variance(pmf);
    if (!(var > 0.0)) throw ParameterError("figure1: degenerate pmf variance");
    const double sigma2_hat = var / static_cast<double>(n);
    const double mu_hat = 2.0 / sigma2_hat;
    // mu_hat * w_0 * a(n, k) = mu_hat * w_k * p_n(k): the pmf with its
    // oscillating 1/w_k factor replaced by its mean, i.e. the smooth curve
    // the fitted Gaussian should trace.
    const double heat_const = mu_hat * env.omega(0);

    Figure1Result res;
    res.sigma2_hat = sigma2_hat;
    res.mu_hat = mu_hat;

    const LatticeFunction& p = pmf.f;
    std::vector<double> ks(p.size()), pmf_vals(p.size()), gauss_vals(p.size()),
        heat_vals(p.size());
    const double inv_norm = 1.0 / std::sqrt(2.0 * std::numbers::pi * var);
    double sup_dist = 0.0, peak = 0.0;
    for (Site k = p.lo(); k <= p.hi(); ++k) {
        const std::size_t i = static_cast<std::size_t>(k - p.lo());
        const double z = static_cast<double>(k) - mean;
        ks[i] = static_cast<double>(k);
        pmf_vals[i] = p.at(k);
        gauss_vals[i] = inv_norm * std::exp(-z * z / (2.0 * var));
        heat_vals[i] = heat_const * heat.f.at(k);
        sup_dist = std::max(sup_dist, std::fabs(heat_vals[i] - gauss_vals[i]));
        peak = std::max(peak, gauss_vals[i]);
    }
    res.sup_distance = sup_dist;
    res.gauss_peak = peak;

    std::vector<std::string> comments(config_comments.begin(), config_comments.end());
    comments.push_back("n=" + std::to_string(n));
    comments.push_back("env_fingerprint=" + env.fingerprint_hex());
    comments.push_back("sigma2_hat=" + format_g17(sigma2_hat));
    comments.push_back("mu_hat=" + format_g17(mu_hat));

    res.pmf_csv = out_prefix + "_pmf.csv";
    res.gauss_csv = out_prefix + "_gauss.csv";
    res.heat_csv = out_prefix + "_heat.csv";
    res.svg = out_prefix + ".svg";

    {
        std::vector<std::string> c = comments;
        c.insert(c.begin(), "curve=forward pmf");
        write_xy_csv(res.pmf_csv, "k", "value", ks, pmf_vals, c);
    }
    {
        std::vector<std::string> c = comments;
        c.insert(c.begin(), "curve=gaussian fitted to pmf variance");
        write_xy_csv(res.gauss_csv, "k", "value", ks, gauss_vals, c);
    }
    {
        std::vector<std::string> c = comments;
        c.insert(c.begin(), "curve=heat solution scaled by mu_hat*omega_0");
        write_xy_csv(res.heat_csv, "k", "value", ks, heat_vals, c);
    }

    // Plot the diffusive bulk only; the far tails are numerically zero.
    const double span = 4.5 * std::sqrt(var);
    const Site plot_lo = std::max(p.lo(), static_cast<Site>(std::floor(mean - span)));
    const Site plot_hi = std::min(p.hi(), static_cast<Site>(std::ceil(mean + span)));
    auto clip = [&](const std::vector<double>& vals) {
        SvgSeries s;
        for (Site k = plot_lo; k <= plot_hi; ++k) {
            const std::size_t i = static_cast<std::size_t>(k - p.lo());
            s.xs.push_back(ks[i]);
            s.ys.push_back(vals[i]);
        }
        return s;
    };
    SvgSeries black = clip(pmf_vals);
    black.color = "#000000";
    black.stroke_width = 0.8;
    SvgSeries green = clip(gauss_vals);
    green.color = "#2ca02c";
    green.stroke_width = 1.6;
    SvgSeries blue = clip(heat_vals);
    blue.color = "#1f77b4";
    blue.stroke_width = 1.6;
    write_svg_plot(res.svg, {black, green, blue},
                   "site occupation at n=" + std::to_string(n) +
                       " vs fitted gaussian and scaled heat solution");
    return res;
}

} // namespace bllt
