#pragma once

#include "fanopair/entanglement.hpp"

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace fanopair {

// Figure presets. Parameter sets are kept as config maps holding the caption
// values as written, so that a config file or a sweep can override single keys.

enum class PresetKind {
    Marginal,         // I_a against (E_a - E_a0)/Gamma_a, one column per curve
    Joint,            // joint intensity on a display grid
    Sweep,            // observables along one parameter
    Lattice,          // observables on a two-parameter lattice
    FilteredMap,      // N_ab over (E_a, E_b)
    FilteredProfile,  // N_a over E_a
};

struct PresetCurve {
    std::string label;
    ConfigMap params;
};

struct SweepAxis {
    std::string param;
    std::vector<double> values;
};

struct CaptionCheck {
    std::string name;
    double expected = 0.0;
    double tolerance = 0.03;
};

struct FigurePreset {
    std::string id;
    std::string title;
    PresetKind kind = PresetKind::Marginal;
    std::vector<PresetCurve> curves;
    std::vector<SweepAxis> axes;
    std::vector<std::string> observables;
    GridSpec grid;
    double x_span = 6.0;  // display range in units of Gamma_a
    int x_points = 601;
    double window = 0.0;  // Delta E of the filtered negativities
    std::optional<CaptionCheck> check;
    // expected shape of the N column: "nondecreasing", "single-maximum" or empty
    std::string shape;
};

const std::vector<FigurePreset>& figure_presets();

/// UnknownPreset for ids outside the registry.
const FigurePreset& find_preset(std::string_view id);

/// `top` wins over `base` key by key; group names in `top` set both atoms.
ConfigMap merge_config(const ConfigMap& base, const ConfigMap& top);

/// Sets a parameter by name. Group names (gammabar, q, gamma, mu, mut, V, J,
/// E0, dE0) set both atoms. UnknownParameter when the name does not fit the
/// style of `params`.
ConfigMap with_parameter(const ConfigMap& params, const std::string& name, double value);

RawParams resolve_params(const ConfigMap& params);

// Sweeps

struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

/// Known observables: N, K, C, norm, norm_quad, peak_a, peak_b.
/// Peak positions are in units of Gamma of the atom, relative to E0.
std::vector<double> observe(const RawParams& raw, const std::vector<std::string>& observables,
                            const GridSpec& grid = {});

/// One row per value: the parameter followed by the observables, in input
/// order. Rows are computed in parallel.
Table sweep(const ConfigMap& base, const std::string& param, const std::vector<double>& values,
            const std::vector<std::string>& observables, const GridSpec& grid = {});

/// Rows over the outer product, first axis slowest.
Table sweep_lattice(const ConfigMap& base, const SweepAxis& first, const SweepAxis& second,
                    const std::vector<std::string>& observables, const GridSpec& grid = {});

void write_table_csv(std::ostream& out, const Table& table, const std::string& header);

/// Number of interior local maxima of a sampled curve. Steps smaller than
/// `noise` count as flat, so a plateau is one maximum at most.
int interior_maxima(const std::vector<double>& values, double noise = 1e-9);

// Figures

struct RunOptions {
    std::optional<int> grid_points;
    std::optional<double> grid_span;
    std::optional<GridKind> grid_kind;
    std::optional<double> tolerance;
    std::string out_dir = ".";
    bool plot = false;
    ConfigMap overrides;  // applied on top of every curve of the preset
};

struct FigureOutcome {
    std::vector<std::string> files;
    std::vector<std::string> checks;  // "name = value ± tol: PASS" lines
    bool passed = true;
};

/// Writes the preset's data (and a gnuplot script with `plot`) into
/// out_dir. Check lines are also written to `log`. ToleranceFail after the
/// files are written when a captioned value misses its tolerance.
FigureOutcome run_figure(std::string_view id, const RunOptions& opts, std::ostream& log);

// Diagnostics

/// Matrices, eigenvalues with sign checks, norms, factorization and balance
/// lines as plain text.
void emit_report(std::ostream& out, const RawParams& raw, const GridSpec& grid = {});

}  // namespace fanopair
