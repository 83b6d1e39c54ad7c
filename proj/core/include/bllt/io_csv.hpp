#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "bllt/evolution.hpp"
#include "bllt/lattice_function.hpp"

namespace bllt {

/// Shortest exact decimal: 17 significant digits ("%.17g"). All numeric
/// artifact output goes through this so reruns are byte-identical.
std::string format_g17(double v);

/// C hex-float ("%a"): bit-exact round trip through strtod.
std::string format_hex(double v);

/// `# key` comment lines, a `k,value` header, then one row per site.
void write_lattice_csv(const std::filesystem::path& path, const LatticeFunction& f,
                       std::span<const std::string> comment_lines = {});

/// Lattice CSV with the snapshot header comments (kind, n or t,
/// env_fingerprint) prepended.
void write_snapshot_csv(const std::filesystem::path& path, const KernelSnapshot& snap,
                        std::span<const std::string> comment_lines = {});

/// Generic two-column CSV with caller-chosen column names.
void write_xy_csv(const std::filesystem::path& path, const std::string& x_name,
                  const std::string& y_name, std::span<const double> xs,
                  std::span<const double> ys,
                  std::span<const std::string> comment_lines = {});

/// Reads back a two-column CSV written by the functions above (comments and
/// header skipped); returns (first column, second column).
std::pair<std::vector<double>, std::vector<double>>
read_xy_csv(const std::filesystem::path& path);

} // namespace bllt
