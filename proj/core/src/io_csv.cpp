#include "bllt/io_csv.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bllt/errors.hpp"

namespace bllt {

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string format_hex(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%a", v);
    return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
    return out;
}

void write_comments(std::ofstream& out, std::span<const std::string> comment_lines) {
    for (const auto& c : comment_lines) out << "# " << c << "\n";
}

} // namespace

void write_lattice_csv(const std::filesystem::path& path, const LatticeFunction& f,
                       std::span<const std::string> comment_lines) {
    auto out = open_out(path);
    write_comments(out, comment_lines);
    out << "k,value\n";
    for (Site k = f.lo(); k <= f.hi(); ++k) {
        out << k << "," << format_g17(f.at(k)) << "\n";
    }
    if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

void write_snapshot_csv(const std::filesystem::path& path, const KernelSnapshot& snap,
                        std::span<const std::string> comment_lines) {
    std::vector<std::string> headers;
    switch (snap.kind) {
        case KernelKind::Forward: headers.push_back("kind=forward"); break;
        case KernelKind::ReversedA: headers.push_back("kind=reversed_a"); break;
        case KernelKind::ReversedB: headers.push_back("kind=reversed_b"); break;
        case KernelKind::Poissonized: headers.push_back("kind=poissonized"); break;
    }
    if (snap.kind == KernelKind::Poissonized) {
        headers.push_back("t=" + format_g17(snap.t));
        headers.push_back("tol=" + format_g17(snap.tol));
    } else {
        headers.push_back("n=" + std::to_string(snap.n));
    }
    {
        char buf[17];
        std::snprintf(buf, sizeof buf, "%016llx",
                      static_cast<unsigned long long>(snap.env_fingerprint));
        headers.push_back(std::string("env_fingerprint=") + buf);
    }
    for (const auto& c : comment_lines) headers.push_back(c);
    write_lattice_csv(path, snap.f, headers);
}

void write_xy_csv(const std::filesystem::path& path, const std::string& x_name,
                  const std::string& y_name, std::span<const double> xs,
                  std::span<const double> ys,
                  std::span<const std::string> comment_lines) {
    if (xs.size() != ys.size()) {
        throw ParameterError("write_xy_csv: column length mismatch");
    }
    auto out = open_out(path);
    write_comments(out, comment_lines);
    out << x_name << "," << y_name << "\n";
    for (std::size_t i = 0; i < xs.size(); ++i) {
        out << format_g17(xs[i]) << "," << format_g17(ys[i]) << "\n";
    }
    if (!out) throw IoError("failed while writing '" + path.string() + "'");
}

std::pair<std::vector<double>, std::vector<double>>
read_xy_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
    std::vector<double> xs, ys;
    std::string line;
    long line_no = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty() || line[0] == '#') continue;
        if (!header_seen) { // column-name row
            header_seen = true;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string::npos) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": expected two comma-separated columns");
        }
        try {
            xs.push_back(std::stod(line.substr(0, comma)));
            ys.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception&) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) +
                             ": cannot parse row '" + line + "'");
        }
    }
    return {std::move(xs), std::move(ys)};
}

} // namespace bllt
