#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dwalk/digraph.hpp"

namespace dwalk {

enum class ExperimentKind { pi_convergence, cover_convergence, mixing_scan, z_ratio, contraction, connectivity_threshold };

ExperimentKind parse_experiment_kind(const std::string& name);
std::string to_string(ExperimentKind kind);

/// One sweep point. `d_is_log_n` selects np = (ln n)^2, i.e. d = ln n.
struct GridPoint {
    std::size_t n = 0;
    double d = 0.0;
    bool d_is_log_n = false;

    double effective_d() const;
    double p() const;
};

/// Declarative sweep. Text form: one `key = value` per line, `#` comments.
///
///   kind         pi-convergence | cover-convergence | mixing-scan | z-ratio |
///                contraction | connectivity-threshold           (required)
///   grid         comma-separated n:d entries; d may be `ln` for np = (ln n)^2;
///                connectivity-threshold accepts a bare n     (required)
///   runs         runs per point, >= 1                          (default 1)
///   master_seed  64-bit unsigned                               (default 0)
///   output       path prefix for <prefix>.csv, <prefix>.points.csv, <prefix>.json
///   method       naive | geometric-jump                        (default geometric-jump)
///   epsilon      slack in t0 = (1+eps) C and t1 = (1-eps) C    (default 0.1)
///   walks        cover walks per graph                         (default 1)
///   pairs        sampled pairs per graph (z-ratio, contraction) (default 20)
///   stationary_tol  power-iteration L1 tolerance               (default 1e-12)
///   mix_threshold   `auto` = min(n^-3, 1e-9), or a number      (default auto)
///   eta          upper-bound tree parameter, z-ratio only      (default 0.004)
///   z_mode       low | up                                      (default low)
///   window       connectivity: np = ln n +/- window ln ln n    (default 2)
///
/// Run r of point i uses seed derive_seed(master_seed, i, r).
struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::pi_convergence;
    std::vector<GridPoint> grid;
    std::size_t runs_per_point = 1;
    std::uint64_t master_seed = 0;
    std::string output;
    GenMethod method = GenMethod::geometric_jump;
    double epsilon = 0.1;
    std::size_t walks = 1;
    std::size_t pairs = 20;
    double stationary_tol = 1e-12;
    std::optional<double> mix_threshold;  // nullopt: auto
    double eta = 0.004;
    bool z_up = false;
    double window = 2.0;

    /// Canonical text with all defaults filled in; hashed for provenance.
    std::string canonical() const;
};

/// Parses the key=value text. Every diagnostic names the line and key;
/// unknown and duplicate keys are errors. Runs validate().
ExperimentSpec parse_spec(const std::string& text);

/// Throws ValidationError on the first problem found.
void validate(const ExperimentSpec& spec);

std::uint64_t run_seed(const ExperimentSpec& spec, std::size_t point_index, std::size_t run_index);

struct RunRow {
    std::size_t point_index = 0;
    std::size_t run_index = 0;
    std::uint64_t seed = 0;
    std::size_t n = 0;
    double d = 0.0;
    std::string status = "ok";  // "ok" or "error: <message>"
    std::vector<double> values; // one per ExperimentResult::columns entry
};

struct PointRow {
    std::size_t point_index = 0;
    std::size_t n = 0;
    double d = 0.0;
    std::size_t runs_ok = 0;
    std::size_t runs_failed = 0;
    std::vector<double> mean;   // per column, over ok runs
    std::vector<double> stderr_;
};

struct ExperimentResult {
    ExperimentSpec spec;
    std::string spec_hash;
    std::vector<std::string> columns;
    std::vector<RunRow> rows;  // ordered by (point_index, run_index)
    std::vector<PointRow> points;

    std::size_t column(const std::string& name) const;
    double value(const RunRow& row, const std::string& name) const { return row.values[column(name)]; }
    double point_mean(std::size_t point, const std::string& name) const { return points[point].mean[column(name)]; }

    std::string runs_csv() const;
    std::string points_csv() const;
    std::string sidecar_json() const;
    /// Writes the three files under spec.output (no-op when output is empty).
    void write_files() const;
};

/// Column names produced for a kind.
std::vector<std::string> experiment_columns(ExperimentKind kind);

/// Executes every (point, run) task, in parallel, assembled in order.
ExperimentResult run_experiment(const ExperimentSpec& spec);

/// Recomputes a single row.
RunRow run_single(const ExperimentSpec& spec, std::size_t point_index, std::size_t run_index);

/// CSV line (no newline) for a row, exactly as in runs_csv().
std::string csv_line(const RunRow& row);

} // namespace dwalk
