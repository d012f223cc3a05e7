// fanopair: figure presets, sweeps and diagnostics from the command line.

#include "fanopair/fano.hpp"
#include "fanopair/presets.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

using namespace fanopair;

namespace {

struct Common {
    std::string preset;
    int curve = 0;
    std::string config;
    std::vector<std::string> sets;
    std::optional<int> grid_points;
    std::optional<double> grid_span;
    std::string grid_kind;
    std::string out;
};

void add_grid_flags(CLI::App* app, Common& c) {
    app->add_option("--grid-points", c.grid_points, "quadrature points per axis");
    app->add_option("--grid-span", c.grid_span, "half-width of windowed grids, units of Gamma");
    app->add_option("--grid", c.grid_kind, "grid kind")->check(CLI::IsMember({"adapted", "uniform"}));
}

void add_param_flags(CLI::App* app, Common& c) {
    app->add_option("--preset", c.preset, "figure preset supplying the parameters");
    app->add_option("--curve", c.curve, "curve index within the preset");
    app->add_option("--config", c.config, "key = value parameter file");
    app->add_option("--set", c.sets, "key=value override, repeatable");
}

ConfigMap flag_overrides(const Common& c) {
    ConfigMap m;
    for (const auto& s : c.sets) {
        const auto eq = s.find('=');
        if (eq == std::string::npos) throw Error(ErrorCode::ConfigError, "--set expects key=value, got '" + s + "'");
        m[s.substr(0, eq)] = s.substr(eq + 1);
    }
    return m;
}

// flags > config file > preset
ConfigMap layered(const ConfigMap& preset, const Common& c) {
    ConfigMap m = preset;
    if (!c.config.empty()) m = merge_config(m, load_config_file(c.config));
    return merge_config(m, flag_overrides(c));
}

ConfigMap params_of(const Common& c) {
    ConfigMap base;
    if (!c.preset.empty() || c.config.empty()) {
        const FigurePreset& p = find_preset(c.preset.empty() ? "fig2a" : c.preset);
        if (c.curve < 0 || c.curve >= static_cast<int>(p.curves.size()))
            throw Error(ErrorCode::ConfigError, "preset " + p.id + " has " + std::to_string(p.curves.size()) + " curves");
        base = p.curves[c.curve].params;
    }
    return layered(base, c);
}

GridSpec grid_of(const Common& c) {
    GridSpec g;
    if (c.grid_points) g.points = *c.grid_points;
    if (c.grid_span) g.span = *c.grid_span;
    if (c.grid_kind == "uniform") g.kind = GridKind::Uniform;
    return g;
}

std::string default_out() {
    const char* env = std::getenv("FANOPAIR_OUT");
    return env && *env ? env : ".";
}

// stdout unless --out names a directory; then <dir>/<name>
template <class F>
void emit(const Common& c, const std::string& name, F&& body) {
    if (c.out.empty()) {
        body(std::cout);
        return;
    }
    std::filesystem::create_directories(c.out);
    const auto path = std::filesystem::path(c.out) / name;
    std::ofstream f(path);
    if (!f) throw Error(ErrorCode::ConfigError, "cannot write " + path.string());
    body(f);
    std::cerr << "wrote " << path.string() << '\n';
}

std::vector<double> parse_values(const std::string& list, const std::string& range, bool log10_range) {
    std::vector<double> v;
    if (!list.empty()) {
        std::stringstream ss(list);
        std::string item;
        while (std::getline(ss, item, ',')) v.push_back(std::stod(item));
        return v;
    }
    double lo = 0, hi = 0;
    int n = 0;
    if (std::sscanf(range.c_str(), "%lf:%lf:%d", &lo, &hi, &n) != 3 || n < 1)
        throw Error(ErrorCode::ConfigError, "--range expects lo:hi:n");
    for (int i = 0; i < n; ++i) {
        const double t = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
        v.push_back(log10_range ? std::pow(10.0, t) : t);
    }
    return v;
}

std::vector<std::string> split(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Two dipole-coupled auto-ionizing atoms: spectra, entanglement, figure presets"};
    app.require_subcommand(1);

    // figure
    Common fc;
    std::string figure_id;
    std::optional<double> tolerance;
    bool plot = false;
    auto* figure = app.add_subcommand("figure", "write the data of a figure preset");
    figure->add_option("id", figure_id, "preset id")->required();
    figure->add_option("--out", fc.out, "output directory (default $FANOPAIR_OUT or .)");
    figure->add_flag("--plot", plot, "also write a gnuplot script");
    figure->add_option("--tolerance", tolerance, "tolerance for captioned values");
    figure->add_option("--config", fc.config, "key = value overrides for every curve");
    figure->add_option("--set", fc.sets, "key=value override, repeatable");
    add_grid_flags(figure, fc);

    app.add_subcommand("list", "list figure presets");

    // sweep
    Common sc;
    std::string param, values, range, observables = "N";
    bool logrange = false;
    auto* sw = app.add_subcommand("sweep", "tabulate observables along one parameter");
    sw->add_option("--param", param, "parameter name (gammabar, J_ab, mut, alpha_L, ...)")->required();
    auto* vopt = sw->add_option("--values", values, "comma-separated values");
    sw->add_option("--range", range, "lo:hi:n")->excludes(vopt);
    sw->add_flag("--log", logrange, "range endpoints are log10 values");
    sw->add_option("--observables", observables, "comma-separated: N,K,C,norm,norm_quad,peak_a,peak_b");
    sw->add_option("--out", sc.out, "output directory");
    add_param_flags(sw, sc);
    add_grid_flags(sw, sc);

    // spectrum
    Common pc;
    std::string axis_name = "a";
    bool joint = false;
    double span = 6.0;
    int points = 601;
    auto* sp = app.add_subcommand("spectrum", "long-time marginal or joint spectrum");
    sp->add_option("--axis", axis_name, "marginal axis")->check(CLI::IsMember({"a", "b"}));
    sp->add_flag("--joint", joint, "joint intensity on a uniform display grid");
    sp->add_option("--span", span, "half-width in units of Gamma");
    sp->add_option("--points", points, "samples per axis");
    sp->add_option("--out", pc.out, "output directory");
    add_param_flags(sp, pc);

    // negativity
    Common nc;
    bool brute = false;
    std::optional<double> window;
    std::vector<double> at;
    auto* ng = app.add_subcommand("negativity", "quadratic negativity by all routes");
    ng->add_flag("--bruteforce", brute, "add the quadruple sum on a 32-point grid");
    ng->add_option("--window", window, "Delta E of the filtered negativities");
    ng->add_option("--at", at, "window centres E_a [E_b]")->expected(1, 2);
    add_param_flags(ng, nc);
    add_grid_flags(ng, nc);

    // balance
    Common bc;
    auto* bl = app.add_subcommand("balance", "Fano zeros and the balance condition");
    add_param_flags(bl, bc);

    // report
    Common rc;
    auto* rp = app.add_subcommand("report", "matrices, eigenvalues, norms and checks");
    rp->add_option("--out", rc.out, "output directory");
    add_param_flags(rp, rc);
    add_grid_flags(rp, rc);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*figure) {
            RunOptions o;
            o.grid_points = fc.grid_points;
            o.grid_span = fc.grid_span;
            if (fc.grid_kind == "uniform") o.grid_kind = GridKind::Uniform;
            o.tolerance = tolerance;
            o.out_dir = fc.out.empty() ? default_out() : fc.out;
            o.plot = plot;
            o.overrides = layered({}, fc);
            run_figure(figure_id, o, std::cout);
        } else if (app.got_subcommand("list")) {
            for (const auto& p : figure_presets()) std::cout << p.id << "  " << p.title << '\n';
        } else if (*sw) {
            const ConfigMap base = params_of(sc);
            const auto v = parse_values(values, range, logrange);
            const Table t = sweep(base, param, v, split(observables), grid_of(sc));
            const std::string head = "sweep param=" + param + (sc.preset.empty() ? "" : " preset=" + sc.preset);
            emit(sc, "sweep_" + param + ".csv", [&](std::ostream& out) { write_table_csv(out, t, head); });
        } else if (*sp) {
            const RawParams raw = resolve_params(params_of(pc));
            const Model m = make_model(raw);
            const FanoParams f = derive_fano(raw);
            const std::string head = pc.preset.empty() ? std::string("spectrum") : "spectrum preset=" + pc.preset;
            if (joint) {
                const double Ga = f.Gamma_a, Gb = f.Gamma_b;
                const EnergyGrid g = uniform_grid(raw.E_L, span * std::max(Ga, Gb), points);
                const JointSpectrum js = sample_joint(m, g, {.normalize = false, .check_tails = false});
                emit(pc, "joint.csv", [&](std::ostream& out) { write_joint_csv(out, js, head); });
            } else {
                const Atom j = axis_name == "a" ? Atom::A : Atom::B;
                MarginalSpectrum ms;
                for (int i = 0; i < points; ++i) {
                    const double x = points == 1 ? 0.0 : -span + 2.0 * span * i / (points - 1);
                    ms.energies.push_back(raw.E0(j) + x * f.Gamma(j));
                }
                ms.intensity = marginal_profile(m, j, ms.energies);
                emit(pc, std::string("marginal_") + atom_name(j) + ".csv",
                     [&](std::ostream& out) { write_marginal_csv(out, ms, head + " axis=" + atom_name(j)); });
            }
        } else if (*ng) {
            const RawParams raw = resolve_params(params_of(nc));
            const Model m = make_model(raw);
            const GridSpec g = grid_of(nc);
            const JointSpectrum js = sample_joint(m, make_grid(m, g), {.normalize = true});
            const NegativityReport r = negativity_report(js);
            std::cout << "N (Schmidt)   = " << num(r.N_schmidt) << '\n'
                      << "N (trace, a)  = " << num(r.N_trace_a) << '\n'
                      << "N (trace, b)  = " << num(r.N_trace_b) << '\n'
                      << "Schmidt number K = " << num(r.schmidt_number) << '\n'
                      << "points = " << r.points_a << " x " << r.points_b << '\n';
            if (brute) {
                const JointSpectrum small = sample_joint(m, make_grid(m, {g.kind, 32, g.span}), {.normalize = true});
                std::cout << "N (quadruple sum, G = 32) = " << num(negativity_bruteforce(small)) << '\n'
                          << "N (Schmidt, G = 32)       = " << num(negativity_schmidt(schmidt(small))) << '\n';
            }
            if (window) {
                const double Ea = at.empty() ? raw.E_a0 : at[0];
                const double Eb = at.size() > 1 ? at[1] : raw.E_b0;
                std::cout << "N_a (E_a = " << num(Ea) << ", dE = " << num(*window)
                          << ") = " << num(negativity_filtered_a(m, Ea, *window, 32, g.points)) << '\n'
                          << "N_ab (E_a = " << num(Ea) << ", E_b = " << num(Eb)
                          << ") = " << num(negativity_filtered_ab(m, Ea, Eb, *window)) << '\n';
            }
        } else if (*bl) {
            const RawParams raw = resolve_params(params_of(bc));
            const BalanceRecord b = balance_record(raw);
            std::cout << "E_F_a = " << num(b.E_F_a) << "\nE_F_b = " << num(b.E_F_b)
                      << "\nB9 residual = " << format_complex(b.residual) << " (|r| = " << num(std::abs(b.residual))
                      << ")\nbalanced J_a = " << format_complex(b.J_a) << "\nbalanced J_b = " << format_complex(b.J_b)
                      << "\n|dressed coupling at the zeros| = " << num(std::abs(b.coupling_at_zeros)) << '\n';
        } else if (*rp) {
            const RawParams raw = resolve_params(params_of(rc));
            emit(rc, "report.txt", [&](std::ostream& out) { emit_report(out, raw, grid_of(rc)); });
        }
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return e.code() == ErrorCode::ToleranceFail ? 3 : 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
