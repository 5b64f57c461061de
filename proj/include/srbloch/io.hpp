#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "srbloch/core.hpp"
#include "srbloch/dynamics.hpp"
#include "srbloch/sr_analysis.hpp"

namespace srbloch {

/// Parse a duration like "18ms", "2.5s", or a bare number of seconds.
double parse_time(const std::string& text);

/// Uniform grid spec "lo:hi:count" in the control's CLI units.
struct SweepSpec {
    SweepControl control = SweepControl::T12;
    double lo = 0.0;
    double hi = 0.0;
    std::size_t points = 0;

    std::vector<double> make_grid() const;
};

/// One experiment block of a manifest.
struct ExperimentSpec {
    std::string id;
    std::string kind;  ///< steady | sweep-t12 | sweep-omega1 | simulate |
                       ///< long-pulse | measure-t1 | measure-t2
    SystemParams params;
    std::optional<SweepSpec> sweep;
    std::string output;
    IntegratorConfig integrator;
    std::optional<std::uint64_t> noise_seed;
    double noise_sigma = 0.0;
    std::optional<double> label;  ///< curve label (e.g. CuSO4 mM for table1)
};

struct ExperimentManifest {
    std::vector<ExperimentSpec> experiments;
};

/// Parse and validate a manifest file ([experiment] sections, key = value
/// lines, '#' comments). Throws ConfigParse with line diagnostics or
/// ValidationFailed naming the offending fields.
ExperimentManifest load_manifest(const std::string& path);

/// Built-in manifests: "table1", "fig1", "fig2".
ExperimentManifest builtin_manifest(const std::string& name);

/// Serialize a sweep as CSV: header '# control,unit,response_eta_over_seq',
/// one row per grid point (>= 12 significant digits), trailing comment rows
/// with the extremum. Written atomically (temp file + rename).
/// Responses are emitted normalized as eta/s_eq.
void write_sweep_csv(const SweepResult& r, double s_eq, const std::string& path);

/// Generic two-column CSV (time, value) for trajectories and acquisitions.
void write_series_csv(const std::vector<double>& t, const std::vector<double>& v,
                      const std::string& t_name, const std::string& v_name,
                      const std::string& path);

}  // namespace srbloch
