#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "bllt/environment.hpp"
#include "bllt/evolution.hpp"

namespace bllt {

/// A closed interval of scaled positions x = k / sqrt(n).
struct Interval {
    double lo = -2.0;
    double hi = 2.0;
};

/// The pair (sigma^2, mu) entering the Gaussian comparison: phi_{sigma^2} is
/// the density of the limit and 1/mu its height scaling. When both are
/// derived from one environment they are tied by sigma^2 * mu = 2.
struct GaussianRef {
    double sigma2 = 1.0;
    double mu = 2.0;

    static GaussianRef from_mu(double mu);
    static GaussianRef from_sigma2(double sigma2);
    /// mu = window average of 1/omega over the sites occupied after n steps
    /// (scale T = sqrt(n)); sigma^2 = 2 / mu.
    static GaussianRef from_environment(const Environment& env, long long n);
};

/// Centered Gaussian density with variance ref.sigma2 evaluated at x.
double phi(const GaussianRef& ref, double x);

enum class ProfileVariant {
    FB,          ///< sqrt(n) * b(n, k)             from a ReversedB snapshot
    FA,          ///< sqrt(n) * a(n, k)             from a ReversedA snapshot
    ModulatedG,  ///< w_k sqrt(n) (p_n(k)+p_{n+1}(k))/2  from two Forward snapshots
    ModulatedA,  ///< w_k sqrt(n) p_n(k)            from a Forward snapshot
    Continuous,  ///< w_k sqrt(t) (continuous kernel)    from a Poissonized snapshot
};

/// A kernel rescaled onto the diffusive grid: one point per lattice site k
/// covered by the interval, at x = k / sqrt(time).
struct ProfileCurve {
    std::vector<double> xs;
    std::vector<double> values;
    double n_or_t = 0.0;
    ProfileVariant variant = ProfileVariant::FB;

    /// sqrt(n) or sqrt(t): the cell width of the grid is 1/scale.
    double scale() const;
};

/// Build the profile of a snapshot over interval I. The snapshot kind must
/// match the variant (see ProfileVariant); ModulatedG needs the two-snapshot
/// overload below. Discrete snapshots require n >= 1, Poissonized t > 0.
ProfileCurve scaled_profile(const Environment& env, const KernelSnapshot& snap,
                            Interval I, ProfileVariant variant);

/// ModulatedG from Forward snapshots at consecutive times n and n+1.
ProfileCurve scaled_profile_g(const Environment& env, const KernelSnapshot& at_n,
                              const KernelSnapshot& at_np1, Interval I);

/// Supremum over I of |profile(x) - phi(x)/mu| for a modulated profile. The
/// profile is piecewise constant on lattice cells; phi is evaluated at both
/// cell endpoints (and at 0 when the cell straddles it) and the worse value
/// is taken, so the result upper-bounds the true supremum and is within the
/// cell oscillation of phi of it.
double sup_error_vs_gaussian(const ProfileCurve& profile, const GaussianRef& ref,
                             Interval I);

enum class DiscreteVariant {
    G,   ///< parity-averaged (p_n + p_{n+1})/2
    Pmf, ///< single-time p_n
};

/// Evolves to time n internally and reports the modulated sup-error over I.
double llt_sup_error_discrete(const Environment& env, long long n, Interval I,
                              const GaussianRef& ref, DiscreteVariant variant);

/// Continuous-time analogue at time t; the modulated profile
/// w_k sqrt(t) (kernel at k) is computed from the reversed quantity as
/// w_0 sqrt(t) a(t, k). Tolerance as in poissonized().
double llt_sup_error_continuous(const Environment& env, double t, Interval I,
                                const GaussianRef& ref, double tol);

struct ConvergenceRow {
    long long n = 0;
    double sup_error = 0.0;
};

/// sup-error as a function of n, one independent evolution per entry.
std::vector<ConvergenceRow> convergence_curve(const Environment& env,
                                              const std::vector<long long>& ns,
                                              Interval I, const GaussianRef& ref,
                                              DiscreteVariant variant);

/// The three-curve comparison figure: the time-n pmf, the Gaussian fitted to
/// the pmf's variance, and the rescaled heat-equation solution
/// mu_hat * w_0 * a(n, .), which the fitted Gaussian should trace.
struct Figure1Result {
    double sup_distance = 0.0;  ///< max_k |heat_curve(k) - gauss_curve(k)|
    double gauss_peak = 0.0;    ///< max_k gauss_curve(k)
    double sigma2_hat = 0.0;    ///< Var(X_n)/n from the pmf
    double mu_hat = 0.0;        ///< 2 / sigma2_hat
    std::filesystem::path pmf_csv, gauss_csv, heat_csv, svg;
};

/// Writes <prefix>_pmf.csv, <prefix>_gauss.csv, <prefix>_heat.csv and
/// <prefix>.svg; reruns with identical inputs produce identical bytes.
Figure1Result figure1(const Environment& env, long long n,
                      const std::string& out_prefix,
                      std::span<const std::string> config_comments = {});

} // namespace bllt
