#include "bllt/environment.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "bllt/errors.hpp"
#include "bllt/io_csv.hpp"
#include "bllt/rng.hpp"

namespace bllt {

namespace {

bool omega_admissible(double w) { return std::isfinite(w) && w > 0.0 && w <= 0.5; }

double parse_double_strict(const std::string& token, const std::string& context) {
    const char* begin = token.c_str();
    char* end = nullptr;
    const double v = std::strtod(begin, &end);
    if (end == begin || *end != '\0') {
        throw ParseError(context + ": cannot parse number '" + token + "'");
    }
    return v;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur.push_back(c);
        }
    }
    parts.push_back(cur);
    return parts;
}

} // namespace

LawDescriptor LawDescriptor::parse(const std::string& text) {
    const auto colon = text.find(':');
    if (colon == std::string::npos) {
        throw ParseError("law '" + text + "': expected <kind>:<params>");
    }
    const std::string kind = text.substr(0, colon);
    const std::string params = text.substr(colon + 1);
    LawDescriptor law;
    if (kind == "constant") {
        law.kind = Kind::Constant;
        law.constant_value = parse_double_strict(params, "law constant");
    } else if (kind == "uniform") {
        law.kind = Kind::IidUniform;
        const auto parts = split(params, ',');
        if (parts.size() != 2) {
            throw ParseError("law uniform: expected two comma-separated bounds");
        }
        law.uniform_a = parse_double_strict(parts[0], "law uniform lower bound");
        law.uniform_b = parse_double_strict(parts[1], "law uniform upper bound");
    } else if (kind == "discrete") {
        law.kind = Kind::IidDiscrete;
        for (const auto& pair : split(params, ',')) {
            const auto at = pair.find('@');
            if (at == std::string::npos) {
                throw ParseError("law discrete: expected <value>@<prob> entries");
            }
            law.values.push_back(
                parse_double_strict(pair.substr(0, at), "law discrete value"));
            law.probs.push_back(
                parse_double_strict(pair.substr(at + 1), "law discrete probability"));
        }
    } else if (kind == "periodic") {
        law.kind = Kind::Periodic;
        for (const auto& v : split(params, ',')) {
            law.pattern.push_back(parse_double_strict(v, "law periodic entry"));
        }
    } else {
        throw ParseError("unknown law kind '" + kind + "'");
    }
    law.validate();
    return law;
}

std::string LawDescriptor::to_string() const {
    std::ostringstream out;
    switch (kind) {
        case Kind::Constant:
            out << "constant:" << format_g17(constant_value);
            break;
        case Kind::IidUniform:
            out << "uniform:" << format_g17(uniform_a) << "," << format_g17(uniform_b);
            break;
        case Kind::IidDiscrete:
            out << "discrete:";
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (i) out << ",";
                out << format_g17(values[i]) << "@" << format_g17(probs[i]);
            }
            break;
        case Kind::Periodic:
            out << "periodic:";
            for (std::size_t i = 0; i < pattern.size(); ++i) {
                if (i) out << ",";
                out << format_g17(pattern[i]);
            }
            break;
    }
    return out.str();
}

void LawDescriptor::validate() const {
    switch (kind) {
        case Kind::Constant:
            if (!omega_admissible(constant_value)) {
                throw ParameterError("constant law: weight must lie in (0, 1/2]");
            }
            break;
        case Kind::IidUniform:
            if (!std::isfinite(uniform_a) || !std::isfinite(uniform_b) ||
                uniform_a < 0.0 || !(uniform_a < uniform_b) || uniform_b > 0.5) {
                throw ParameterError(
                    "uniform law: bounds must satisfy 0 <= a < b <= 1/2 "
                    "(values are drawn from (a, b])");
            }
            break;
        case Kind::IidDiscrete: {
            if (values.empty() || values.size() != probs.size()) {
                throw ParameterError("discrete law: need matching value/probability lists");
            }
            double total = 0.0;
            for (std::size_t i = 0; i < values.size(); ++i) {
                if (!omega_admissible(values[i])) {
                    throw ParameterError("discrete law: every value must lie in (0, 1/2]");
                }
                if (!(probs[i] >= 0.0) || !std::isfinite(probs[i])) {
                    throw ParameterError("discrete law: probabilities must be >= 0");
                }
                total += probs[i];
            }
            if (std::fabs(total - 1.0) > 1e-12) {
                throw ParameterError("discrete law: probabilities must sum to 1");
            }
            break;
        }
        case Kind::Periodic:
            if (pattern.empty()) {
                throw ParameterError("periodic law: pattern must be non-empty");
            }
            for (double v : pattern) {
                if (!omega_admissible(v)) {
                    throw ParameterError("periodic law: every entry must lie in (0, 1/2]");
                }
            }
            break;
    }
}

Environment::Environment(Site lo, std::vector<double> omegas, LawDescriptor law,
                         std::optional<std::uint64_t> seed)
    : lo_(lo), omegas_(std::move(omegas)), law_(std::move(law)), seed_(seed) {
    if (omegas_.empty()) throw ParameterError("environment: empty window");
    for (std::size_t i = 0; i < omegas_.size(); ++i) {
        if (!omega_admissible(omegas_[i])) {
            throw DomainError("environment: weight at site " +
                              std::to_string(lo_ + static_cast<Site>(i)) +
                              " lies outside (0, 1/2]");
        }
    }
}

Environment Environment::generate(const LawDescriptor& law, Site lo, Site hi,
                                  std::optional<std::uint64_t> seed) {
    law.validate();
    if (hi < lo) throw ParameterError("environment window: hi < lo");
    if (law.is_stochastic() && !seed.has_value()) {
        throw ParameterError("law '" + law.to_string() + "' needs a seed");
    }
    std::vector<double> omegas(static_cast<std::size_t>(hi - lo + 1));
    switch (law.kind) {
        case LawDescriptor::Kind::Constant:
            std::fill(omegas.begin(), omegas.end(), law.constant_value);
            break;
        case LawDescriptor::Kind::Periodic: {
            const Site L = static_cast<Site>(law.pattern.size());
            for (Site k = lo; k <= hi; ++k) {
                const Site idx = ((k % L) + L) % L;
                omegas[static_cast<std::size_t>(k - lo)] =
                    law.pattern[static_cast<std::size_t>(idx)];
            }
            break;
        }
        case LawDescriptor::Kind::IidUniform: {
            const double a = law.uniform_a, b = law.uniform_b;
            for (Site k = lo; k <= hi; ++k) {
                const double u = unit_from_bits(site_hash(*seed, k));
                // u in [0,1) maps onto the half-open interval (a, b].
                omegas[static_cast<std::size_t>(k - lo)] = b - (b - a) * u;
            }
            break;
        }
        case LawDescriptor::Kind::IidDiscrete: {
            for (Site k = lo; k <= hi; ++k) {
                const double u = unit_from_bits(site_hash(*seed, k));
                double cum = 0.0;
                std::size_t pick = law.values.size() - 1;
                for (std::size_t i = 0; i < law.values.size(); ++i) {
                    cum += law.probs[i];
                    if (u < cum) {
                        pick = i;
                        break;
                    }
                }
                omegas[static_cast<std::size_t>(k - lo)] = law.values[pick];
            }
            break;
        }
    }
    return Environment(lo, std::move(omegas), law, seed);
}

void Environment::require_window(Site lo, Site hi) const {
    if (omegas_.empty() || lo < this->lo() || hi > this->hi()) {
        std::ostringstream msg;
        msg << "environment window [" << this->lo() << ", " << this->hi()
            << "] does not cover required [" << lo << ", " << hi << "]";
        throw WindowError(msg.str());
    }
}

double Environment::omega(Site k) const {
    require_window(k, k);
    return omegas_[static_cast<std::size_t>(k - lo_)];
}

double Environment::pi(Site k) const { return 1.0 / omega(k); }

std::array<double, 3> Environment::transition_triplet(Site k) const {
    const double w = omega(k);
    return {w, 1.0 - 2.0 * w, w};
}

std::uint64_t Environment::fingerprint() const {
    std::uint64_t h = 14695981039346656037ULL; // FNV offset basis
    auto feed = [&h](const void* bytes, std::size_t count) {
        const auto* p = static_cast<const unsigned char*>(bytes);
        for (std::size_t i = 0; i < count; ++i) {
            h ^= p[i];
            h *= 1099511628211ULL; // FNV prime
        }
    };
    const std::int64_t lo64 = lo_;
    feed(&lo64, sizeof lo64);
    for (double w : omegas_) {
        std::uint64_t bits;
        std::memcpy(&bits, &w, sizeof bits);
        feed(&bits, sizeof bits);
    }
    return h;
}

std::string Environment::fingerprint_hex() const {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fingerprint()));
    return buf;
}

double average_inverse_omega(const Environment& env, double x, double y, double T) {
    if (!(x < y)) throw ParameterError("average_inverse_omega: need x < y");
    if (!(T > 0.0)) throw ParameterError("average_inverse_omega: need T > 0");
    const Site m_lo = static_cast<Site>(std::floor(T * x));
    const Site m_hi = static_cast<Site>(std::floor(T * y));
    env.require_window(m_lo, m_hi);
    // floor(T xi) is constant on each cell [m/T, (m+1)/T); summing cell
    // lengths exactly leaves only rounding error.
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(m_hi - m_lo + 1));
    for (Site m = m_lo; m <= m_hi; ++m) {
        const double left = std::max(x, static_cast<double>(m) / T);
        const double right = std::min(y, static_cast<double>(m + 1) / T);
        if (right > left) terms.push_back((right - left) / env.omega(m));
    }
    return detail::pairwise_sum(terms) / (y - x);
}

void save(const Environment& env, const std::filesystem::path& path,
          std::span<const std::string> comment_lines) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    for (const auto& c : comment_lines) out << "# " << c << "\n";
    out << "law=" << env.law().to_string() << "\n";
    if (env.seed().has_value()) out << "seed=" << *env.seed() << "\n";
    out << "lo=" << env.lo() << "\n";
    for (Site k = env.lo(); k <= env.hi(); ++k) {
        out << format_hex(env.omega(k)) << "\n";
    }
    if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

Environment load_environment(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");

    std::optional<LawDescriptor> law;
    std::optional<std::uint64_t> seed;
    std::optional<Site> lo;
    std::vector<double> omegas;

    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::string ctx = path.string() + ":" + std::to_string(line_no);
        try {
            if (line.rfind("law=", 0) == 0) {
                law = LawDescriptor::parse(line.substr(4));
            } else if (line.rfind("seed=", 0) == 0) {
                seed = static_cast<std::uint64_t>(
                    std::stoull(line.substr(5)));
            } else if (line.rfind("lo=", 0) == 0) {
                lo = static_cast<Site>(std::stoll(line.substr(3)));
            } else {
                const double w = parse_double_strict(line, ctx);
                if (!omega_admissible(w)) {
                    throw DomainError(ctx + ": weight " + line +
                                      " lies outside (0, 1/2]");
                }
                omegas.push_back(w);
            }
        } catch (const DomainError&) {
            throw;
        } catch (const ParseError&) {
            throw;
        } catch (const std::exception& e) {
            throw ParseError(ctx + ": " + e.what());
        }
    }
    if (!law) throw ParseError(path.string() + ": missing 'law=' header");
    if (!lo) throw ParseError(path.string() + ": missing 'lo=' header");
    if (omegas.empty()) throw ParseError(path.string() + ": no weight lines");
    return Environment(*lo, std::move(omegas), *law, seed);
}

} // namespace bllt
