#include "fanopair/presets.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <map>
#include <ostream>
#include <set>
#include <thread>

namespace fanopair {

namespace {

std::string num(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
    return v;
}

// decades lo..hi with `per_decade` points each, exact powers of ten at the ends
std::vector<double> logspace(int lo, int hi, int per_decade) {
    std::vector<double> v;
    const int n = (hi - lo) * per_decade;
    for (int i = 0; i <= n; ++i) v.push_back(std::pow(10.0, lo + static_cast<double>(i) / per_decade));
    return v;
}

const ConfigMap kFig2Base = {{"E_L", "1"},  {"dE_a0", "0"}, {"dE_b0", "0"}, {"gamma_a", "1"},
                             {"gamma_b", "1"}, {"q_a", "1"},   {"q_b", "1"},   {"Omega", "1"},
                             {"m", "1"}};

const ConfigMap kFig5Base = merge_config(kFig2Base, {{"q_a", "100"}, {"q_b", "100"}, {"Omega", "3"}});

const ConfigMap kMolecular = {{"E_a0", "1"},    {"E_b0", "1"},    {"E_L", "1"},   {"mu_a", "0.001"},
                              {"mu_b", "0.001"}, {"V_a", "0.01"},  {"V_b", "0.01"}, {"alpha_L", "1"}};

ConfigMap with(const ConfigMap& base, std::initializer_list<std::pair<const std::string, std::string>> kv) {
    return merge_config(base, ConfigMap(kv));
}

PresetCurve curve(std::string label, ConfigMap params) { return {std::move(label), std::move(params)}; }

std::vector<FigurePreset> build_registry() {
    std::vector<FigurePreset> r;
    auto marginal = [&](std::string id, std::string title, std::vector<PresetCurve> curves) {
        FigurePreset p;
        p.id = std::move(id);
        p.title = std::move(title);
        p.kind = PresetKind::Marginal;
        p.curves = std::move(curves);
        r.push_back(std::move(p));
    };
    auto joint = [&](std::string id, std::string title, ConfigMap params) {
        FigurePreset p;
        p.id = std::move(id);
        p.title = std::move(title);
        p.kind = PresetKind::Joint;
        p.curves = {curve("joint", std::move(params))};
        p.x_span = 4.0;
        p.x_points = 161;
        r.push_back(std::move(p));
    };
    auto gb = [](const ConfigMap& base, const char* v) { return with(base, {{"gammabar_a", v}, {"gammabar_b", v}}); };

    marginal("fig2a", "I_a for gammabar = 0, 0.1, 1",
             {curve("gammabar=0", gb(kFig2Base, "0")), curve("gammabar=0.1", gb(kFig2Base, "0.1")),
              curve("gammabar=1", gb(kFig2Base, "1"))});
    marginal("fig2b", "I_a for J_ab = 0, 0.56, 1, 1.68",
             {curve("J_ab=0", with(kFig2Base, {{"J_ab", "0"}})), curve("J_ab=0.56", with(kFig2Base, {{"J_ab", "0.56"}})),
              curve("J_ab=1", with(kFig2Base, {{"J_ab", "1"}})), curve("J_ab=1.68", with(kFig2Base, {{"J_ab", "1.68"}}))});

    joint("fig3a", "joint intensity, independent atoms", kFig2Base);
    joint("fig3b", "joint intensity, gammabar = 1", gb(kFig2Base, "1"));
    joint("fig3c", "joint intensity, J_ab = 1.68", with(kFig2Base, {{"J_ab", "1.68"}}));

    const ConfigMap fig4a = gb(kFig2Base, "1");
    marginal("fig4a", "I_a for gammabar = 1, J_ab = 0.56, 2, 4, Omega = 1",
             {curve("J_ab=0.56", with(fig4a, {{"J_ab", "0.56"}})), curve("J_ab=2", with(fig4a, {{"J_ab", "2"}})),
              curve("J_ab=4", with(fig4a, {{"J_ab", "4"}}))});
    const ConfigMap fig4b = with(kFig2Base, {{"Omega", "5"}});
    marginal("fig4b", "I_a at Omega = 5",
             {curve("independent", fig4b), curve("gammabar=1", gb(fig4b, "1")),
              curve("gammabar=1,J_ab=2", with(gb(fig4b, "1"), {{"J_ab", "2"}}))});

    marginal("fig5", "I_a at q = 100, Omega = 3",
             {curve("independent", kFig5Base), curve("gammabar=1", gb(kFig5Base, "1")),
              curve("J_ab=0.56", with(kFig5Base, {{"J_ab", "0.56"}}))});

    joint("fig6a", "joint intensity at q = 100, Omega = 3, independent atoms", kFig5Base);
    joint("fig6b", "joint intensity at q = 100, Omega = 3, gammabar = 1", gb(kFig5Base, "1"));

    auto table = [&](std::string id, std::string title, ConfigMap base, SweepAxis axis,
                     std::vector<std::string> obs, std::string shape) {
        FigurePreset p;
        p.id = std::move(id);
        p.title = std::move(title);
        p.kind = PresetKind::Sweep;
        p.curves = {curve("base", std::move(base))};
        p.axes = {std::move(axis)};
        p.observables = std::move(obs);
        p.shape = std::move(shape);
        r.push_back(std::move(p));
    };
    table("fig7a", "N and C against gammabar", kFig2Base, {"gammabar", linspace(0.0, 2.0, 11)}, {"N", "C"},
          "nondecreasing");
    table("fig7b", "N and C against J_ab", kFig2Base, {"J_ab", linspace(0.0, 2.0, 11)}, {"N", "C"},
          "nondecreasing");
    {
        FigurePreset p;
        p.id = "fig8";
        p.title = "N on the gammabar x J_ab lattice";
        p.kind = PresetKind::Lattice;
        p.curves = {curve("base", kFig2Base)};
        p.axes = {{"gammabar", linspace(0.0, 2.0, 5)}, {"J_ab", linspace(0.0, 2.0, 5)}};
        p.observables = {"N"};
        p.shape = "nondecreasing";
        r.push_back(std::move(p));
    }

    auto filtered = [&](std::string id, std::string title, PresetKind kind, ConfigMap params, double window,
                        double expected) {
        FigurePreset p;
        p.id = std::move(id);
        p.title = std::move(title);
        p.kind = kind;
        p.curves = {curve("base", std::move(params))};
        p.window = window;
        p.check = CaptionCheck{"N", expected, 0.03};
        if (kind == PresetKind::FilteredMap) {
            p.x_span = 3.0;
            p.x_points = 61;
        } else {
            p.x_span = 4.0;
            p.x_points = 201;
        }
        r.push_back(std::move(p));
    };
    filtered("fig9a", "N_ab map, gammabar = 1, Delta E = 0.005", PresetKind::FilteredMap, gb(kFig2Base, "1"), 0.005,
             0.98);
    filtered("fig9b", "N_ab map, J_ab = 1.68, Delta E = 0.01", PresetKind::FilteredMap,
             with(kFig2Base, {{"J_ab", "1.68"}}), 0.01, 1.79);
    filtered("fig10", "N_a profile, J_ab = 1.68, Delta E = 0.01", PresetKind::FilteredProfile,
             with(kFig2Base, {{"J_ab", "1.68"}}), 0.01, 1.79);

    table("fig11a", "N and C against mut, J_a = J_b = 0.001",
          with(kMolecular, {{"J_a", "0.001"}, {"J_b", "0.001"}, {"J_ab", "0"}}), {"mut", logspace(-4, -1, 4)},
          {"N", "C"}, "");
    table("fig11b", "N and C against mut, J_ab = 0.001",
          with(kMolecular, {{"J_a", "0"}, {"J_b", "0"}, {"J_ab", "0.001"}}), {"mut", logspace(-4, -1, 4)},
          {"N", "C"}, "");
    table("fig12", "N and C against alpha_L",
          with(kMolecular, {{"mut_a", "0.02"}, {"mut_b", "0.02"}, {"J_a", "0"}, {"J_b", "0"}, {"J_ab", "2e-4"}}),
          {"alpha_L", logspace(-3, 3, 4)}, {"N", "C"}, "single-maximum");
    return r;
}

const std::set<std::string> kFanoKeys = {"gamma_a", "gamma_b", "gammabar_a", "gammabar_b", "q_a",  "q_b",
                                         "m",       "Omega",   "dE_a0",      "dE_b0",      "J_ab", "E_L",
                                         "alpha_L"};
const std::set<std::string> kRawKeys = {"E_a0", "E_b0", "E_L", "mu_a", "mu_b", "mut_a", "mut_b",
                                        "V_a",  "V_b",  "J_a", "J_b",  "J_ab", "alpha_L"};

const std::map<std::string, std::pair<std::string, std::string>> kGroups = {
    {"gamma", {"gamma_a", "gamma_b"}}, {"gammabar", {"gammabar_a", "gammabar_b"}}, {"q", {"q_a", "q_b"}},
    {"dE0", {"dE_a0", "dE_b0"}},       {"E0", {"E_a0", "E_b0"}},                   {"mu", {"mu_a", "mu_b"}},
    {"mut", {"mut_a", "mut_b"}},       {"V", {"V_a", "V_b"}},                      {"J", {"J_a", "J_b"}},
};

void check_observables(const std::vector<std::string>& observables) {
    static const std::set<std::string> known = {"N", "K", "C", "norm", "norm_quad", "peak_a", "peak_b"};
    for (const auto& o : observables)
        if (!known.count(o)) throw Error(ErrorCode::UnknownParameter, "unknown observable '" + o + "'");
}

template <class F>
void parallel_for(int n, F&& body) {
    const int workers = std::max(1, std::min<int>(n, static_cast<int>(std::thread::hardware_concurrency())));
    std::vector<std::exception_ptr> errors(n);
    auto run = [&](int w) {
        for (int i = w; i < n; i += workers) {
            try {
                body(i);
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    if (workers == 1) {
        run(0);
    } else {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(run, w);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);
}

}  // namespace

const std::vector<FigurePreset>& figure_presets() {
    static const std::vector<FigurePreset> registry = build_registry();
    return registry;
}

const FigurePreset& find_preset(std::string_view id) {
    for (const auto& p : figure_presets())
        if (p.id == id) return p;
    throw Error(ErrorCode::UnknownPreset, "no preset '" + std::string(id) + "'");
}

ConfigMap merge_config(const ConfigMap& base, const ConfigMap& top) {
    ConfigMap out = base;
    for (const auto& [k, v] : top) {
        if (auto g = kGroups.find(k); g != kGroups.end())
            out[g->second.first] = out[g->second.second] = v;
        else
            out[k] = v;
    }
    return out;
}

ConfigMap with_parameter(const ConfigMap& params, const std::string& name, double value) {
    const auto& keys = is_fano_config(params) ? kFanoKeys : kRawKeys;
    std::vector<std::string> targets;
    if (auto g = kGroups.find(name); g != kGroups.end())
        targets = {g->second.first, g->second.second};
    else
        targets = {name};
    ConfigMap out = params;
    for (const auto& key : targets) {
        if (!keys.count(key))
            throw Error(ErrorCode::UnknownParameter,
                        "'" + name + "' is not a " + (is_fano_config(params) ? "Fano-style" : "raw") + " parameter");
        out[key] = num(value);
    }
    return out;
}

RawParams resolve_params(const ConfigMap& params) { return params_from_config(params); }

std::vector<double> observe(const RawParams& raw, const std::vector<std::string>& observables, const GridSpec& grid) {
    check_observables(observables);
    const Model model = make_model(raw);
    std::optional<SchmidtSpectrum> s;
    auto schmidt_once = [&]() -> const SchmidtSpectrum& {
        if (!s) s = schmidt(sample_joint(model, make_grid(model, grid), {.normalize = true, .check_tails = true}));
        return *s;
    };
    auto peak = [&](Atom j) {
        const FanoParams f = derive_fano(raw);
        const double G = f.Gamma(j), E0 = raw.E0(j);
        const std::vector<double> x = linspace(-8.0, 8.0, 801);
        std::vector<double> E(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) E[i] = E0 + x[i] * G;
        const auto I = marginal_profile(model, j, E, 513);
        double best = -1.0, where = 0.0;
        for (const auto& ft : find_features(E, I))
            if (ft.kind == FeatureKind::Peak && ft.value > best) best = ft.value, where = ft.energy;
        if (best < 0.0) where = E[std::max_element(I.begin(), I.end()) - I.begin()];
        return (where - E0) / G;
    };

    std::vector<double> row;
    for (const auto& o : observables) {
        if (o == "N") row.push_back(negativity_schmidt(schmidt_once()));
        else if (o == "K") row.push_back(schmidt_once().schmidt_number);
        else if (o == "C") row.push_back(model_covariance(model, false, grid.points, grid.span));
        else if (o == "norm") row.push_back(norm_analytic(model));
        else if (o == "norm_quad") row.push_back(norm_quadrature(model, grid.points));
        else if (o == "peak_a") row.push_back(peak(Atom::A));
        else row.push_back(peak(Atom::B));
    }
    return row;
}

Table sweep(const ConfigMap& base, const std::string& param, const std::vector<double>& values,
            const std::vector<std::string>& observables, const GridSpec& grid) {
    Table t;
    t.columns.push_back(param);
    t.columns.insert(t.columns.end(), observables.begin(), observables.end());
    // resolve names before spending time on any row
    std::vector<ConfigMap> sets;
    for (double v : values) sets.push_back(with_parameter(base, param, v));
    check_observables(observables);
    t.rows.resize(values.size());
    parallel_for(static_cast<int>(values.size()), [&](int i) {
        std::vector<double> row{values[i]};
        const auto obs = observe(resolve_params(sets[i]), observables, grid);
        row.insert(row.end(), obs.begin(), obs.end());
        t.rows[i] = std::move(row);
    });
    return t;
}

Table sweep_lattice(const ConfigMap& base, const SweepAxis& first, const SweepAxis& second,
                    const std::vector<std::string>& observables, const GridSpec& grid) {
    Table t;
    t.columns = {first.param, second.param};
    t.columns.insert(t.columns.end(), observables.begin(), observables.end());
    check_observables(observables);
    std::vector<ConfigMap> sets;
    std::vector<std::pair<double, double>> at;
    for (double u : first.values)
        for (double v : second.values) {
            sets.push_back(with_parameter(with_parameter(base, first.param, u), second.param, v));
            at.emplace_back(u, v);
        }
    t.rows.resize(sets.size());
    parallel_for(static_cast<int>(sets.size()), [&](int i) {
        std::vector<double> row{at[i].first, at[i].second};
        const auto obs = observe(resolve_params(sets[i]), observables, grid);
        row.insert(row.end(), obs.begin(), obs.end());
        t.rows[i] = std::move(row);
    });
    return t;
}

void write_table_csv(std::ostream& out, const Table& table, const std::string& header) {
    out << "# " << header << '\n';
    for (std::size_t c = 0; c < table.columns.size(); ++c) out << (c ? "," : "") << table.columns[c];
    out << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) out << (c ? "," : "") << num(row[c]);
        out << '\n';
    }
}

int interior_maxima(const std::vector<double>& values, double noise) {
    // collapse runs that differ by less than the noise floor
    std::vector<double> v;
    for (double x : values)
        if (v.empty() || std::abs(x - v.back()) > noise) v.push_back(x);
    int count = 0;
    for (std::size_t i = 1; i + 1 < v.size(); ++i)
        if (v[i] > v[i - 1] && v[i] > v[i + 1]) ++count;
    return count;
}

}  // namespace fanopair
