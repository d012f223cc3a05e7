// One PASS/FAIL line per acceptance criterion. Tolerances are fixed here.
// Exits 0 once every criterion has been evaluated; a FAIL line is a result,
// not a crash. Lines are copied to $FANOPAIR_ACCEPTANCE_LOG when set.

#include "support.hpp"
#include "fanopair/fano.hpp"
#include "fanopair/oracle.hpp"
#include "fanopair/presets.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

using namespace fanopair;
using testing::fig2;

namespace {

constexpr double kCaptionTol = 0.03;
constexpr double kCaptionSeconds = 30.0;
constexpr double kNormAnalyticTol = 1e-6;
constexpr double kNormQuadTol = 1e-4;
constexpr double kProductTol = 1e-8;
constexpr double kProductN = 1e-6;
constexpr double kRouteTol = 1e-6;
constexpr double kFanoZero = 1e-6;
constexpr double kZeroGone = 1e-3;
constexpr double kBalanceResidual = 1e-12;
constexpr double kBalanceDepth = 0.02;
constexpr double kEigTol = 1e-10;
constexpr double kEigSign = 1e-12;
constexpr double kCrossterm = 1e-8;

std::string fmt(const char* f, auto... args) {
    char buf[2048];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

int failures = 0;
std::ofstream copy;

void emit(const std::string& text) {
    std::fputs(text.c_str(), stdout);
    std::fflush(stdout);
    if (copy) copy << text << std::flush;
}

void line(int id, bool pass, const std::string& detail) {
    emit(fmt("criterion %2d: %s  %s\n", id, pass ? "PASS" : "FAIL", detail.c_str()));
    if (!pass) ++failures;
}

void run(int id, const std::function<void()>& body) {
    try {
        body();
    } catch (const std::exception& e) {
        line(id, false, std::string("error: ") + e.what());
    }
}


RawParams preset_curve(const char* id, int k) { return resolve_params(find_preset(id).curves.at(k).params); }

std::vector<double> linspace(double lo, double hi, int n) {
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i) v[i] = lo + (hi - lo) * i / (n - 1);
    return v;
}

// marginal I_a on x = (E - E0)/Gamma_a
struct Profile {
    std::vector<double> x, I;
    double peak = 0.0;
};

Profile profile_a(const Model& m, double lo, double hi, int n) {
    const double G = derive_fano(m.raw).Gamma_a;
    Profile p;
    p.x = linspace(lo, hi, n);
    std::vector<double> E(n);
    for (int i = 0; i < n; ++i) E[i] = m.raw.E_a0 + p.x[i] * G;
    p.I = marginal_profile(m, Atom::A, E);
    p.peak = *std::max_element(p.I.begin(), p.I.end());
    return p;
}

// deepest interior local minimum, refined on a finer local grid
std::optional<std::pair<double, double>> deepest_dip(const Model& m, const Profile& p) {
    std::optional<std::pair<double, double>> best;
    const double G = derive_fano(m.raw).Gamma_a;
    for (const Feature& f : find_features(p.x, p.I))
        if (f.kind == FeatureKind::Dip && (!best || f.value < best->second)) best = std::pair{f.energy, f.value};
    if (!best) return best;
    const double h = p.x[1] - p.x[0];
    const auto xs = linspace(best->first - 2 * h, best->first + 2 * h, 201);
    std::vector<double> E(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) E[i] = m.raw.E_a0 + xs[i] * G;
    const auto I = marginal_profile(m, Atom::A, E);
    const auto it = std::min_element(I.begin(), I.end());
    return std::pair{xs[it - I.begin()], *it};
}

double negativity(const RawParams& r, const GridSpec& g = {}) {
    const Model m = make_model(r);
    return negativity_schmidt(schmidt(sample_joint(m, make_grid(m, g), {.normalize = true})));
}

void criterion_1() {
    bool ok = true;
    std::string detail;
    for (const char* id : {"fig9a", "fig9b"}) {
        const FigurePreset& p = find_preset(id);
        const auto t0 = std::chrono::steady_clock::now();
        const double N = negativity(resolve_params(p.curves[0].params), p.grid);
        const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool pass = std::abs(N - p.check->expected) <= kCaptionTol && s < kCaptionSeconds;
        ok = ok && pass;
        detail += fmt("%s N = %.4f (target %.2f ± %.2f, %.1f s); ", id, N, p.check->expected, kCaptionTol, s);
    }
    line(1, ok, detail);
}

// doubles G until two successive nested quadratures agree to 1e-5 (cap 2049);
// pole widths spread over many decades at the ends of the pump sweep
std::pair<double, int> converged_norm(const Model& m) {
    double prev = norm_quadrature(m, 513);
    int G = 513;
    while (G < 2049) {
        G = 2 * G - 1;
        const double next = norm_quadrature(m, G);
        const bool done = std::abs(next - prev) < 1e-5;
        prev = next;
        if (done) break;
    }
    return {prev, G};
}

void criterion_2() {
    double worst_a = 0.0, worst_q = 0.0;
    std::string where_a, where_q, trapped;
    int count = 0, refined = 0;
    auto probe = [&](const RawParams& r, const std::string& tag) {
        const Model m = make_model(r);
        const double na = norm_analytic(m);
        const auto [nq, G] = converged_norm(m);
        ++count;
        if (G > 1025) ++refined;
        if (std::abs(nq - na) > worst_q) worst_q = std::abs(nq - na), where_q = tag;
        // a non-decaying eigenvalue keeps population out of the continuum for good
        if (!trapped_states(m).empty()) {
            trapped += fmt(" %s (norm %.4f)", tag.c_str(), na);
            return;
        }
        if (std::abs(na - 1.0) > worst_a) worst_a = std::abs(na - 1.0), where_a = tag;
    };
    for (const FigurePreset& p : figure_presets()) {
        for (std::size_t k = 0; k < p.curves.size(); ++k)
            probe(resolve_params(p.curves[k].params), p.id + "/" + p.curves[k].label);
        // every point of one-parameter sweeps; lattice corners
        if (p.kind == PresetKind::Sweep)
            for (double v : p.axes[0].values)
                probe(resolve_params(with_parameter(p.curves[0].params, p.axes[0].param, v)),
                      p.id + "/" + p.axes[0].param + "=" + fmt("%g", v));
        if (p.kind == PresetKind::Lattice)
            for (double u : {p.axes[0].values.front(), p.axes[0].values.back()})
                for (double v : {p.axes[1].values.front(), p.axes[1].values.back()})
                    probe(resolve_params(with_parameter(with_parameter(p.curves[0].params, p.axes[0].param, u),
                                                        p.axes[1].param, v)),
                          p.id + fmt("/corner(%g,%g)", u, v));
    }
    line(2, worst_a <= kNormAnalyticTol && worst_q <= kNormQuadTol,
         fmt("%d parameter sets (%d needed G = 2049); max |norm - 1| = %.2e (%s), max |quad - analytic| = %.2e (%s); "
             "trapping sets, norm < 1 by construction:%s",
             count, refined, worst_a, where_a.c_str(), worst_q, where_q.c_str(), trapped.empty() ? " none" : trapped.c_str()));
}

void criterion_3() {
    double worst = 0.0, worst_N = 0.0;
    for (const RawParams& r : {preset_curve("fig2a", 0), preset_curve("fig5", 0), preset_curve("fig4b", 0)}) {
        const Model m = make_model(r);
        const EnergyGrid g = make_grid(m, {GridKind::Adapted, 64, 12.0});
        const JointSpectrum full = sample_joint(m, g);
        const JointSpectrum ref = product_reference(r, g);
        const double scale = full.amplitude.cwiseAbs().maxCoeff();
        worst = std::max(worst, (full.amplitude - ref.amplitude).cwiseAbs().maxCoeff() / scale);
        worst_N = std::max(worst_N, negativity(r));
    }
    line(3, worst <= kProductTol && worst_N < kProductN,
         fmt("3 uncoupled sets; max |d - d_a d_b| / max|d| = %.2e, max N = %.2e", worst, worst_N));
}

void criterion_4() {
    const std::vector<std::pair<const char*, int>> sets = {{"fig2a", 0}, {"fig2a", 1}, {"fig2a", 2}, {"fig2b", 1},
                                                           {"fig2b", 3}, {"fig4a", 1}, {"fig4a", 2}, {"fig4b", 2},
                                                           {"fig5", 1},  {"fig5", 2}};
    double worst = 0.0;
    for (const auto& [id, k] : sets) {
        const Model m = make_model(preset_curve(id, k));
        const JointSpectrum js = sample_joint(m, make_grid(m, {GridKind::Adapted, 32, 12.0}), {.normalize = true});
        worst = std::max(worst, negativity_report(js, true).max_delta());
    }
    line(4, worst <= kRouteTol, fmt("10 sets, G = 32; max spread of Schmidt/trace/brute force = %.2e", worst));
}

void criterion_5() {
    const Model free = make_model(preset_curve("fig2a", 0));
    const Profile p0 = profile_a(free, -10.0, 10.0, 2001);
    const double zero = marginal_profile(free, Atom::A, {free.raw.E_a0 - derive_fano(free.raw).Gamma_a})[0] / p0.peak;

    const Model dressed = make_model(preset_curve("fig2a", 2));
    const Profile p1 = profile_a(dressed, -10.0, 10.0, 2001);
    const auto dip = deepest_dip(dressed, p1);
    const double dip_rel = dip ? dip->second / p1.peak : 1.0;
    const double at_old_zero =
        marginal_profile(dressed, Atom::A, {dressed.raw.E_a0 - derive_fano(dressed.raw).Gamma_a})[0] / p1.peak;
    line(5, zero < kFanoZero && dip_rel > kZeroGone,
         fmt("uncoupled I(x=-1)/peak = %.2e; gammabar = 1: deepest interior minimum/peak = %s, I(x=-1)/peak = %.2e",
             zero, dip ? fmt("%.2e", dip_rel).c_str() : "none", at_old_zero));
}

void criterion_6() {
    const RawParams r = preset_curve("fig4a", 1);
    const double res = std::abs(balance_residual(r));
    const Model m = make_model(r);
    const Profile p = profile_a(m, -10.0, 10.0, 4001);
    const auto dip = deepest_dip(m, p);
    const double depth = dip ? dip->second / p.peak : 1.0;
    line(6, res < kBalanceResidual && depth < kBalanceDepth,
         fmt("B9 residual = %.1e; deepest minimum at x = %.4f is %.2f%% of the peak (needs < %.0f%%)", res,
             dip ? dip->first : 0.0, 100.0 * depth, 100.0 * kBalanceDepth));
}

void criterion_7() {
    auto examine = [](const RawParams& r) {
        const Model m = make_model(r);
        const Profile p = profile_a(m, -10.0, 10.0, 4001);
        int peaks = 0;
        double dip = p.peak;
        for (const Feature& f : find_features(p.x, p.I))
            if (f.kind == FeatureKind::Peak) ++peaks;
            else dip = std::min(dip, f.value);
        return std::pair{peaks, dip / p.peak};
    };
    const auto [n0, d0] = examine(preset_curve("fig5", 0));
    const auto [n1, d1] = examine(preset_curve("fig5", 1));
    line(7, n0 == 2 && d1 > d0,
         fmt("uncoupled: %d peaks, dip/peak = %.3f; gammabar = 1: %d peaks, dip/peak = %.3f", n0, d0, n1, d1));
}

void criterion_8() {
    const ConfigMap base = find_preset("fig2a").curves[0].params;
    const std::vector<double> gbs = {0.0, 0.25, 0.5, 1.0, 2.0}, jabs = {0.0, 0.5, 1.0, 1.68};
    const Table tg = sweep(base, "gammabar", gbs, {"N", "C"});
    const Table tj = sweep(base, "J_ab", jabs, {"N", "C"});
    bool mono_g = true, mono_j = true, neg_c = true;
    std::string ng, nj, cs;
    for (std::size_t i = 0; i < tg.rows.size(); ++i) {
        ng += fmt(" %.4f", std::max(tg.rows[i][1], 0.0));
        if (i && tg.rows[i][1] < tg.rows[i - 1][1]) mono_g = false;
        if (tg.rows[i][0] > 0.0) neg_c = neg_c && tg.rows[i][2] < 0.0, cs += fmt(" %.3f", tg.rows[i][2]);
    }
    for (std::size_t i = 0; i < tj.rows.size(); ++i) {
        nj += fmt(" %.4f", std::max(tj.rows[i][1], 0.0));
        if (i && tj.rows[i][1] < tj.rows[i - 1][1]) mono_j = false;
        if (tj.rows[i][0] > 0.0) neg_c = neg_c && tj.rows[i][2] < 0.0, cs += fmt(" %.3f", tj.rows[i][2]);
    }
    line(8, mono_g && mono_j && neg_c,
         fmt("N(gammabar):%s [%s]; N(J_ab):%s [%s]; C coupled:%s [%s]", ng.c_str(), mono_g ? "nondecreasing" : "not monotone",
             nj.c_str(), mono_j ? "nondecreasing" : "not monotone", cs.c_str(), neg_c ? "all < 0" : "sign change"));
}

void criterion_9() {
    const FigurePreset& p = find_preset("fig12");
    const Table t = sweep(p.curves[0].params, p.axes[0].param, p.axes[0].values, {"N"}, p.grid);
    std::vector<double> N;
    std::size_t top = 0;
    for (std::size_t i = 0; i < t.rows.size(); ++i) {
        N.push_back(t.rows[i][1]);
        if (N.back() > N[top]) top = i;
    }
    const int k = interior_maxima(N);
    line(9, k == 1,
         fmt("%zu log-spaced alpha_L in [%g, %g]: %d interior local maxima; largest N = %.4f at alpha_L = %.3g", N.size(),
             p.axes[0].values.front(), p.axes[0].values.back(), k, N[top], t.rows[top][0]));
}

void criterion_10() {
    std::mt19937_64 rng(20240601);
    double proj = 0.0, resid = 0.0, min_l = 1e300, max_L = -1e300;
    for (int n = 0; n < 1000; ++n) {
        const ModelMatrices m = build_structure(testing::random_raw(rng));
        for (Atom j : {Atom::A, Atom::B}) {
            const Eig2 e = eig_L(m.L(j));
            const Mat2 I2 = Mat2::Identity();
            proj = std::max({proj, testing::max_abs(e.L1 + e.L2 - I2), testing::max_abs(e.L1 * e.L1 - e.L1),
                             testing::max_abs(e.L2 * e.L2 - e.L2), testing::max_abs(e.L1 * e.L2),
                             testing::max_abs(e.L2 * e.L1)});
            resid = std::max(resid, testing::max_abs(e.lambda_1 * e.L1 + e.lambda_2 * e.L2 - m.L(j)));
            min_l = std::min({min_l, e.lambda_1.imag(), e.lambda_2.imag()});
        }
        const Eig4 e = eig_Abar(m.Abar);
        for (int k = 0; k < 4; ++k) {
            const Vec4 p = e.P.col(k);
            resid = std::max(resid, (m.Abar * p - e.Lambda[k] * p).norm() / p.norm());
            max_L = std::max(max_L, e.Lambda[k].imag());
        }
    }
    line(10, proj <= kEigTol && resid <= kEigTol && min_l >= -kEigSign && max_L <= kEigSign,
         fmt("1000 sets; projector defect %.1e, residual %.1e, min Im lambda %.2e, max Im Lambda %.2e", proj, resid,
             min_l, max_L));
}

void criterion_11() {
    const RawParams r = preset_curve("fig2a", 0);
    const auto samples = default_crossterm_samples(r);
    const double ca = crossterm_residual(r, samples, Atom::A), cb = crossterm_residual(r, samples, Atom::B);
    const Model m = make_model(r);
    std::vector<double> dev;
    std::string ds;
    for (int G : {16, 32, 64}) {
        const double W = 0.25 * (G - 1);  // spacing 0.5, same recurrence time for every G
        const PropagationResult p = propagate_full(r, G, W, 0.9 * recurrence_time(G, W), 0.5);
        dev.push_back(propagation_deviation(m, p));
        ds += fmt(" G=%d: %.4f", G, dev.back());
    }
    const bool mono = dev[1] < dev[0] && dev[2] < dev[1];
    line(11, std::max(ca, cb) < kCrossterm && mono,
         fmt("crossterm residual %.1e / %.1e; propagation deviation%s", ca, cb, ds.c_str()));
}

}  // namespace

int main() {
    if (const char* path = std::getenv("FANOPAIR_ACCEPTANCE_LOG")) copy.open(path);
    const auto t0 = std::chrono::steady_clock::now();
    run(1, criterion_1);
    run(2, criterion_2);
    run(3, criterion_3);
    run(4, criterion_4);
    run(5, criterion_5);
    run(6, criterion_6);
    run(7, criterion_7);
    run(8, criterion_8);
    run(9, criterion_9);
    run(10, criterion_10);
    run(11, criterion_11);
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    emit(fmt("summary: %d of 11 criteria pass (%.0f s)\n", 11 - failures, s));
    return 0;
}
