#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "blowlab/monitor.hpp"
#include "blowlab/params.hpp"
#include "blowlab/solver.hpp"

namespace blowlab {

/// Per-command knobs beyond the model/run/shrink tuples.
struct CommandOptions {
    double s0 = 15.0;
    double window = 8.0;
    int depth = 12;
    double d0 = 0.0, d1 = 0.0;
    double s_end = 0.0;  // 0 -> s0 + window
    double x0 = 0.5;
    double K0 = 10.0;
    double alpha = 0.2;
    std::vector<double> eps_list = {1e-2, 1e-3, 1e-4};
    double s_ladder_lo = 50.0, s_ladder_hi = 800.0;
    int s_ladder_n = 9;
    double b_factor = 1.5;
    int threads = 8;
};

struct FullConfig {
    ModelParams params;
    RunConfig run;
    ShrinkParams shrink;
    CommandOptions opts;
    std::string canonical;  // sorted key=value dump of every effective value
    std::uint64_t hash = 0;  // FNV-1a of the canonical dump
};

/// Parses UTF-8 key=value lines ('#' comments). Unknown keys and malformed
/// lines raise ConfigError with the line number; constraint violations are
/// raised by the module constructors.
FullConfig parse_config(const std::string& text);

/// parse_config over a file, with BLOWLAB_<key> environment overrides applied
/// on top of the file values.
FullConfig load_config_file(const std::string& path, bool apply_env = true);

std::uint64_t fnv1a(const std::string& text);

/// manifest.json for an output directory: config hash, versions, every
/// parameter value, wall clock, and the file inventory.
void write_manifest(const std::string& out_dir, const std::string& command,
                    const FullConfig& cfg, const std::vector<std::string>& outputs,
                    double wall_seconds);

}  // namespace blowlab
