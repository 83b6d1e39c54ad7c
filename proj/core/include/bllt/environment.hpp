#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "bllt/lattice_function.hpp"

namespace bllt {

/// How a family of site weights is produced. Laws are value types that can be
/// parsed from / rendered to a compact string form:
///
///   constant:<w>                      every site gets w
///   uniform:<a>,<b>                   i.i.d. uniform on the half-open (a, b]
///   discrete:<v1>@<p1>,<v2>@<p2>,...  i.i.d. on finitely many values
///   periodic:<v1>,<v2>,...            pattern repeated with site 0 at v1
struct LawDescriptor {
    enum class Kind { Constant, IidUniform, IidDiscrete, Periodic };

    Kind kind = Kind::Constant;
    double constant_value = 0.5;
    double uniform_a = 0.0, uniform_b = 0.5;
    std::vector<double> values;   // IidDiscrete support
    std::vector<double> probs;    // IidDiscrete probabilities
    std::vector<double> pattern;  // Periodic pattern, site 0 anchored at [0]

    static LawDescriptor parse(const std::string& text);
    std::string to_string() const;

    /// Constant and periodic laws need no seed.
    bool is_stochastic() const {
        return kind == Kind::IidUniform || kind == Kind::IidDiscrete;
    }

    /// Throws ParameterError unless all law parameters are admissible, i.e.
    /// every producible weight lies in (0, 1/2].
    void validate() const;
};

/// The per-site jump weights of one quenched environment: site k moves one
/// step left or right with probability omega_k each and holds with
/// probability 1 - 2 omega_k, where omega_k is in (0, 1/2].
class Environment {
public:
    Environment() = default;

    /// Direct construction from explicit weights (used by load()); validates
    /// that every weight lies in (0, 1/2].
    Environment(Site lo, std::vector<double> omegas, LawDescriptor law,
                std::optional<std::uint64_t> seed);

    /// Draw the environment on [lo, hi]. Deterministic given (law, window,
    /// seed); each site's draw depends only on (seed, site), so overlapping
    /// windows agree site by site. Stochastic laws require a seed.
    static Environment generate(const LawDescriptor& law, Site lo, Site hi,
                                std::optional<std::uint64_t> seed);

    Site lo() const { return lo_; }
    Site hi() const { return lo_ + static_cast<Site>(omegas_.size()) - 1; }
    std::size_t size() const { return omegas_.size(); }

    bool contains(Site k) const { return k >= lo() && k <= hi(); }
    /// Throws WindowError unless [lo, hi] is covered.
    void require_window(Site lo, Site hi) const;

    double omega(Site k) const;
    /// Reversible weight pi_k = 1/omega_k.
    double pi(Site k) const;
    /// One-step distribution at k: {left, hold, right} = {w, 1-2w, w}.
    std::array<double, 3> transition_triplet(Site k) const;

    /// Raw weight pointer for site `lo` (bounds must have been checked).
    const double* omega_data_at(Site lo) const {
        return omegas_.data() + (lo - lo_);
    }

    const LawDescriptor& law() const { return law_; }
    std::optional<std::uint64_t> seed() const { return seed_; }

    /// FNV-1a over the window origin and the bit patterns of all weights;
    /// stamped into snapshots and reports so artifacts are traceable to the
    /// exact environment that produced them.
    std::uint64_t fingerprint() const;
    std::string fingerprint_hex() const;

private:
    Site lo_ = 0;
    std::vector<double> omegas_;
    LawDescriptor law_;
    std::optional<std::uint64_t> seed_;
};

/// Average of 1/omega_{floor(T xi)} over xi in [x, y], computed by exact
/// decomposition of [x, y] into the cells on which floor(T xi) is constant
/// (no quadrature error beyond rounding). Requires x < y, T > 0, and the
/// window to cover floor(T xi) for all xi in [x, y].
double average_inverse_omega(const Environment& env, double x, double y, double T);

/// Line-oriented text format: `law=`, `seed=` (stochastic laws only), `lo=`
/// headers followed by one weight per line as a C hex-float, so save/load
/// round-trips bit-exactly. Lines starting with '#' are comments.
void save(const Environment& env, const std::filesystem::path& path,
          std::span<const std::string> comment_lines = {});
Environment load_environment(const std::filesystem::path& path);

} // namespace bllt
