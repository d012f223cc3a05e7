#include "fanopair/presets.hpp"
#include "fanopair/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace fanopair {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fixed(double x, int digits) {
    char buf[64];
    if (std::abs(x) < 0.5 * std::pow(10.0, -digits)) x = 0.0;  // no "-0.0000"
    std::snprintf(buf, sizeof buf, "%.*f", digits, x);
    return buf;
}

std::vector<double> axis(double span, int n) {
    std::vector<double> x(n);
    for (int i = 0; i < n; ++i) x[i] = n == 1 ? 0.0 : -span + 2.0 * span * i / (n - 1);
    return x;
}

struct Writer {
    std::filesystem::path dir;
    FigureOutcome& outcome;

    std::ofstream open(const std::string& name) {
        std::filesystem::create_directories(dir);
        const auto path = dir / name;
        std::ofstream f(path);
        if (!f) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
        outcome.files.push_back(path.string());
        return f;
    }
};

std::string header(const FigurePreset& p, const GridSpec& g, const std::string& extra) {
    std::ostringstream h;
    h << "preset=" << p.id << " grid_points=" << g.points << " grid_span=" << num(g.span) << extra;
    return h.str();
}

double gamma_total(const RawParams& raw, Atom j) { return derive_fano(raw).Gamma(j); }

double global_negativity(const Model& model, const GridSpec& g) {
    return negativity_schmidt(schmidt(sample_joint(model, make_grid(model, g), {.normalize = true})));
}

void check_value(FigureOutcome& out, std::ostream& log, const CaptionCheck& c, double value,
                 std::optional<double> tolerance) {
    const double tol = tolerance.value_or(c.tolerance);
    const bool ok = std::abs(value - c.expected) <= tol;
    // two decimals for the caption value, four for the computed one
    const std::string line = c.name + " = " + fixed(c.expected, 2) + " ± " + fixed(tol, 2) + ": " +
                             (ok ? "PASS" : "FAIL") + " (computed " + fixed(value, 4) + ")";
    out.checks.push_back(line);
    out.passed = out.passed && ok;
    log << line << '\n';
}

void shape_line(FigureOutcome& out, std::ostream& log, const std::string& what, bool ok, const std::string& detail) {
    const std::string line = what + ": " + (ok ? "PASS" : "FAIL") + detail;
    out.checks.push_back(line);
    log << line << '\n';
}

bool nondecreasing(const std::vector<double>& v, double slack = 1e-9) {
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] < v[i - 1] - slack) return false;
    return true;
}

void plot_lines(std::ofstream& gp, const std::string& csv, const std::string& xlabel, const std::string& ylabel,
                const std::vector<std::string>& titles, int xcol = 1, bool logx = false) {
    gp << "set datafile separator ','\n"
       << "set xlabel '" << xlabel << "'\n"
       << "set ylabel '" << ylabel << "'\n";
    if (logx) gp << "set logscale x\n";
    gp << "plot ";
    for (std::size_t k = 0; k < titles.size(); ++k) {
        gp << (k ? ", \\\n     " : "") << "'" << csv << "' skip 2 using " << xcol << ':' << (xcol + 1 + k)
           << " with lines title '" << titles[k] << "'";
    }
    gp << '\n';
}

void plot_map(std::ofstream& gp, const std::string& csv, const std::string& zexpr, const std::string& title) {
    gp << "set datafile separator ','\n"
       << "set xlabel '(E_a-E_a0)/Gamma_a'\n"
       << "set ylabel '(E_b-E_b0)/Gamma_b'\n"
       << "set size square\n"
       << "plot '" << csv << "' skip 2 using 1:2:" << zexpr << " with image title '" << title << "'\n";
}

}  // namespace

FigureOutcome run_figure(std::string_view id, const RunOptions& opts, std::ostream& log) {
    const FigurePreset& p = find_preset(id);
    GridSpec g = p.grid;
    if (opts.grid_points) g.points = *opts.grid_points;
    if (opts.grid_span) g.span = *opts.grid_span;
    if (opts.grid_kind) g.kind = *opts.grid_kind;

    FigureOutcome out;
    Writer w{opts.out_dir, out};
    const std::string stem = p.id;
    log << p.id << ": " << p.title << '\n';

    std::vector<RawParams> raws;
    for (const auto& c : p.curves) raws.push_back(resolve_params(merge_config(c.params, opts.overrides)));

    switch (p.kind) {
    case PresetKind::Marginal: {
        const auto x = axis(p.x_span, p.x_points);
        std::vector<std::vector<double>> cols;
        std::vector<std::string> titles;
        for (std::size_t k = 0; k < raws.size(); ++k) {
            const Model m = make_model(raws[k]);
            const double G = gamma_total(raws[k], Atom::A);
            std::vector<double> E(x.size());
            for (std::size_t i = 0; i < x.size(); ++i) E[i] = raws[k].E_a0 + x[i] * G;
            cols.push_back(marginal_profile(m, Atom::A, E));
            titles.push_back(p.curves[k].label);
        }
        const std::string csv = stem + "_marginal_a.csv";
        {
            auto f = w.open(csv);
            f << "# " << header(p, g, " quantity=I_a x=(E_a-E_a0)/Gamma_a") << '\n' << 'x';
            for (const auto& t : titles) f << ',' << t;
            f << '\n';
            for (std::size_t i = 0; i < x.size(); ++i) {
                f << num(x[i]);
                for (const auto& c : cols) f << ',' << num(c[i]);
                f << '\n';
            }
        }
        if (opts.plot) {
            auto gp = w.open(stem + "_marginal_a.gp");
            plot_lines(gp, csv, "(E_a-E_a0)/Gamma_a", "I_a", titles);
        }
        break;
    }
    case PresetKind::Joint: {
        const RawParams& raw = raws.front();
        const Model m = make_model(raw);
        const double Ga = gamma_total(raw, Atom::A), Gb = gamma_total(raw, Atom::B);
        const int n = p.x_points;
        const EnergyGrid grid =
            grid_from_rules(uniform_rule(raw.E_a0 - p.x_span * Ga, raw.E_a0 + p.x_span * Ga, n),
                            uniform_rule(raw.E_b0 - p.x_span * Gb, raw.E_b0 + p.x_span * Gb, n), raw.E_L);
        const JointSpectrum js = sample_joint(m, grid, {.normalize = false, .check_tails = false});
        const std::string csv = stem + "_joint.csv";
        {
            auto f = w.open(csv);
            f << "# " << header(p, g, " quantity=I x=(E-E0)/Gamma") << '\n' << "x_a,x_b,intensity\n";
            for (int i = 0; i < n; ++i)
                for (int j = 0; j < n; ++j)
                    f << num((grid.axis_a[i] - raw.E_a0) / Ga) << ',' << num((grid.axis_b[j] - raw.E_b0) / Gb) << ','
                      << num(js.intensity(i, j)) << '\n';
        }
        if (opts.plot) {
            auto gp = w.open(stem + "_joint.gp");
            plot_map(gp, csv, "(log10($3+1e-300))", "log10 I");
        }
        log << "N = " << fixed(global_negativity(m, g), 4) << '\n';
        break;
    }
    case PresetKind::Sweep:
    case PresetKind::Lattice: {
        const ConfigMap base = merge_config(p.curves.front().params, opts.overrides);
        const Table t = p.kind == PresetKind::Sweep ? sweep(base, p.axes[0].param, p.axes[0].values, p.observables, g)
                                                    : sweep_lattice(base, p.axes[0], p.axes[1], p.observables, g);
        const std::string csv = stem + "_table.csv";
        {
            auto f = w.open(csv);
            write_table_csv(f, t, header(p, g, " quantity=observables"));
        }
        if (opts.plot) {
            auto gp = w.open(stem + "_table.gp");
            if (p.kind == PresetKind::Sweep) {
                const bool logx = p.axes[0].param == "alpha_L" || p.axes[0].param == "mut";
                plot_lines(gp, csv, p.axes[0].param, "N, C", p.observables, 1, logx);
            } else {
                gp << "set datafile separator ','\n"
                   << "set xlabel '" << p.axes[0].param << "'\nset ylabel '" << p.axes[1].param << "'\n"
                   << "plot '" << csv << "' skip 2 using 1:2:3 with image title 'N'\n";
            }
        }
        // shape of the N column
        const auto& cols = t.columns;
        const auto it = std::find(cols.begin(), cols.end(), "N");
        if (!p.shape.empty() && it != cols.end()) {
            const std::size_t c = it - cols.begin();
            if (p.kind == PresetKind::Sweep) {
                std::vector<double> N;
                for (const auto& row : t.rows) N.push_back(row[c]);
                if (p.shape == "nondecreasing") {
                    shape_line(out, log, "N nondecreasing in " + p.axes[0].param, nondecreasing(N), "");
                } else {
                    const int k = interior_maxima(N);
                    shape_line(out, log, "single interior maximum of N", k == 1,
                               " (" + std::to_string(k) + " local maxima)");
                }
            } else {
                const std::size_t n1 = p.axes[0].values.size(), n2 = p.axes[1].values.size();
                bool ok = true;
                for (std::size_t i = 0; i < n1; ++i)
                    for (std::size_t j = 0; j < n2; ++j) {
                        const double v = t.rows[i * n2 + j][c];
                        if (i + 1 < n1 && t.rows[(i + 1) * n2 + j][c] < v - 1e-9) ok = false;
                        if (j + 1 < n2 && t.rows[i * n2 + j + 1][c] < v - 1e-9) ok = false;
                    }
                shape_line(out, log, "N nondecreasing along both lattice axes", ok, "");
            }
        }
        break;
    }
    case PresetKind::FilteredMap: {
        const RawParams& raw = raws.front();
        const Model m = make_model(raw);
        const double Ga = gamma_total(raw, Atom::A), Gb = gamma_total(raw, Atom::B);
        const auto x = axis(p.x_span, p.x_points);
        const std::string csv = stem + "_filtered_ab.csv";
        {
            auto f = w.open(csv);
            f << "# " << header(p, g, " quantity=N_ab dE=" + num(p.window) + " x=(E-E0)/Gamma") << '\n'
              << "x_a,x_b,N_ab\n";
            for (double xa : x)
                for (double xb : x)
                    f << num(xa) << ',' << num(xb) << ','
                      << num(negativity_filtered_ab(m, raw.E_a0 + xa * Ga, raw.E_b0 + xb * Gb, p.window)) << '\n';
        }
        if (opts.plot) {
            auto gp = w.open(stem + "_filtered_ab.gp");
            plot_map(gp, csv, "3", "N_ab");
        }
        check_value(out, log, *p.check, global_negativity(m, g), opts.tolerance);
        break;
    }
    case PresetKind::FilteredProfile: {
        const RawParams& raw = raws.front();
        const Model m = make_model(raw);
        const double Ga = gamma_total(raw, Atom::A);
        const auto x = axis(p.x_span, p.x_points);
        const std::string csv = stem + "_filtered_a.csv";
        {
            auto f = w.open(csv);
            f << "# " << header(p, g, " quantity=N_a dE=" + num(p.window) + " x=(E_a-E_a0)/Gamma_a") << '\n'
              << "x,N_a\n";
            for (double xa : x)
                f << num(xa) << ',' << num(negativity_filtered_a(m, raw.E_a0 + xa * Ga, p.window, 32, g.points))
                  << '\n';
        }
        if (opts.plot) {
            auto gp = w.open(stem + "_filtered_a.gp");
            plot_lines(gp, csv, "(E_a-E_a0)/Gamma_a", "N_a", {"N_a"});
        }
        check_value(out, log, *p.check, global_negativity(m, g), opts.tolerance);
        break;
    }
    }

    for (const auto& f : out.files) log << "wrote " << f << '\n';
    if (!out.passed) throw Error(ErrorCode::ToleranceFail, p.id + ": captioned value outside tolerance");
    return out;
}

}  // namespace fanopair
