#include "fanopair/spectra.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace fanopair {

double reference_width(const Model& model) {
    const double ga = kPi * (std::norm(model.raw.V_a) + std::norm(model.raw.J_a));
    const double gb = kPi * (std::norm(model.raw.V_b) + std::norm(model.raw.J_b));
    const double g = std::max(ga, gb);
    return g > 0.0 ? g : model.scale();
}

EnergyGrid uniform_grid(double center, double half_width, int G) {
    const Rule r = uniform_rule(center - half_width, center + half_width, G);
    EnergyGrid g = grid_from_rules(r, r, center);
    g.half_width = half_width;
    g.kind = GridKind::Uniform;
    return g;
}

EnergyGrid grid_from_rules(const Rule& a, const Rule& b, double center) {
    EnergyGrid g;
    g.axis_a = a.nodes;
    g.weights_a = a.weights;
    g.axis_b = b.nodes;
    g.weights_b = b.weights;
    g.center = center;
    g.points = std::max(a.size(), b.size());
    g.kind = GridKind::Custom;
    return g;
}

EnergyGrid make_grid(const Model& model, const GridSpec& spec) {
    const double EL = model.raw.E_L;
    const double half = spec.span * reference_width(model);
    switch (spec.kind) {
        case GridKind::Uniform:
            return uniform_grid(EL, half, spec.points);
        case GridKind::AdaptedWindow: {
            EnergyGrid g = grid_from_rules(adapted_axis_rule(model, Atom::A, spec.points, EL - half, EL + half),
                                           adapted_axis_rule(model, Atom::B, spec.points, EL - half, EL + half), EL);
            g.half_width = half;
            g.kind = GridKind::AdaptedWindow;
            return g;
        }
        case GridKind::Adapted:
        case GridKind::Custom:
            break;
    }
    EnergyGrid g = grid_from_rules(adapted_axis_rule(model, Atom::A, spec.points),
                                   adapted_axis_rule(model, Atom::B, spec.points), EL);
    g.kind = GridKind::Adapted;
    return g;
}

JointSpectrum sample_joint(const Model& model, const EnergyGrid& grid, const SampleOptions& opts) {
    const int na = static_cast<int>(grid.axis_a.size());
    const int nb = static_cast<int>(grid.axis_b.size());
    if (na == 0 || nb == 0) throw Error(ErrorCode::InvalidParams, "empty energy grid");
    JointSpectrum js;
    js.grid = grid;
    js.amplitude.resize(na, nb);
    js.intensity.resize(na, nb);
    double norm = 0.0;
    for (int i = 0; i < na; ++i) {
        for (int j = 0; j < nb; ++j) {
            const Complex d = longtime_amplitude(model, grid.axis_a[i], grid.axis_b[j]);
            js.amplitude(i, j) = d;
            js.intensity(i, j) = std::norm(d);
            norm += grid.weights_a[i] * grid.weights_b[j] * js.intensity(i, j);
        }
    }
    js.raw_norm = norm;
    js.norm = norm;

    // a truncated uniform grid must still contain the tails
    if (opts.check_tails && grid.kind == GridKind::Uniform) {
        const double peak = js.intensity.maxCoeff();
        const double edge = std::max({js.intensity.row(0).maxCoeff(), js.intensity.row(na - 1).maxCoeff(),
                                      js.intensity.col(0).maxCoeff(), js.intensity.col(nb - 1).maxCoeff()});
        if (edge > 1e-6 * peak)
            throw Error(ErrorCode::GridTooNarrow, "boundary intensity " + std::to_string(edge / peak) +
                                                      " of the maximum; widen the grid");
    }
    if (opts.normalize) {
        if (!(norm > 0.0)) throw Error(ErrorCode::NotNormalized, "joint spectrum has zero norm");
        const double s = 1.0 / std::sqrt(norm);
        js.amplitude *= s;
        js.intensity *= s * s;
        js.norm = 1.0;
        js.normalized = true;
    }
    return js;
}

MarginalSpectrum marginal(const JointSpectrum& joint, Atom axis) {
    const auto& g = joint.grid;
    MarginalSpectrum m;
    if (axis == Atom::A) {
        m.energies = g.axis_a;
        m.weights = g.weights_a;
        m.intensity.assign(g.axis_a.size(), 0.0);
        for (std::size_t i = 0; i < g.axis_a.size(); ++i)
            for (std::size_t j = 0; j < g.axis_b.size(); ++j) m.intensity[i] += g.weights_b[j] * joint.intensity(i, j);
    } else {
        m.energies = g.axis_b;
        m.weights = g.weights_b;
        m.intensity.assign(g.axis_b.size(), 0.0);
        for (std::size_t i = 0; i < g.axis_a.size(); ++i)
            for (std::size_t j = 0; j < g.axis_b.size(); ++j) m.intensity[j] += g.weights_a[i] * joint.intensity(i, j);
    }
    return m;
}

std::vector<double> marginal_profile(const Model& model, Atom axis, const std::vector<double>& energies,
                                     int inner_points) {
    std::vector<double> out;
    out.reserve(energies.size());
    for (double E : energies) {
        const Rule r = adapted_partner_rule(model, axis, E, inner_points);
        double s = 0.0;
        for (int j = 0; j < r.size(); ++j) {
            const Complex d = axis == Atom::A ? longtime_amplitude(model, E, r.nodes[j])
                                              : longtime_amplitude(model, r.nodes[j], E);
            s += r.weights[j] * std::norm(d);
        }
        out.push_back(s);
    }
    return out;
}

namespace {

template <class F>
void for_each_node(const JointSpectrum& joint, double window, F&& f) {
    const auto& g = joint.grid;
    const double EL = g.center;
    for (std::size_t i = 0; i < g.axis_a.size(); ++i) {
        const double ea = g.axis_a[i] - EL;
        if (window > 0.0 && std::abs(ea) > window) continue;
        for (std::size_t j = 0; j < g.axis_b.size(); ++j) {
            const double eb = g.axis_b[j] - EL;
            if (window > 0.0 && std::abs(eb) > window) continue;
            f(ea, eb, g.weights_a[i] * g.weights_b[j] * joint.intensity(i, j));
        }
    }
}

}  // namespace

double moments(const JointSpectrum& joint, int k, int l, const MomentOptions& opts) {
    if (k < 0 || l < 0) throw Error(ErrorCode::InvalidParams, "moment orders must be nonnegative");
    double norm = 0.0, mean_a = 0.0, mean_b = 0.0;
    for_each_node(joint, opts.window, [&](double ea, double eb, double w) {
        norm += w;
        mean_a += w * ea;
        mean_b += w * eb;
    });
    if (!(norm > 0.0)) throw Error(ErrorCode::EmptyWindow, "no intensity inside the moment window");
    mean_a /= norm;
    mean_b /= norm;
    if (!opts.centered) mean_a = mean_b = 0.0;
    double s = 0.0;
    for_each_node(joint, opts.window, [&](double ea, double eb, double w) {
        s += w * std::pow(ea - mean_a, k) * std::pow(eb - mean_b, l);
    });
    return s / norm;
}

double covariance(const JointSpectrum& joint, const MomentOptions& opts) {
    const double saa = moments(joint, 2, 0, opts);
    const double sbb = moments(joint, 0, 2, opts);
    if (!(saa > 0.0) || !(sbb > 0.0)) throw Error(ErrorCode::ZeroSecondMoment, "second moment vanishes");
    return moments(joint, 1, 1, opts) / std::sqrt(saa * sbb);
}

EnergyGrid moment_grid(const Model& model, int points, double span) {
    return make_grid(model, GridSpec{GridKind::AdaptedWindow, points, span});
}

double model_covariance(const Model& model, bool centered, int points, double span) {
    const JointSpectrum js = sample_joint(model, moment_grid(model, points, span), {true, false});
    return covariance(js, MomentOptions{0.0, centered});
}

std::vector<Feature> find_features(const std::vector<double>& x, const std::vector<double>& v, double threshold) {
    std::vector<Feature> out;
    const std::size_t n = std::min(x.size(), v.size());
    if (n < 3) return out;
    const double gmax = *std::max_element(v.begin(), v.begin() + n);
    const double thr = threshold * std::abs(gmax);
    for (std::size_t i = 1; i + 1 < n; ++i) {
        // plateaus: compare with the next distinct value to the right
        std::size_t r = i + 1;
        while (r + 1 < n && v[r] == v[i]) ++r;
        const double left = v[i - 1], right = v[r];
        FeatureKind kind;
        if (v[i] > left && v[i] > right && v[i] - std::max(left, right) > thr) kind = FeatureKind::Peak;
        else if (v[i] < left && v[i] < right && std::min(left, right) - v[i] > thr) kind = FeatureKind::Dip;
        else continue;

        // parabola through the three nodes (nonuniform spacing allowed)
        const double x0 = x[i - 1], x1 = x[i], x2 = x[i + 1];
        const double y0 = v[i - 1], y1 = v[i], y2 = v[i + 1];
        const double d01 = (y1 - y0) / (x1 - x0), d12 = (y2 - y1) / (x2 - x1);
        const double a = (d12 - d01) / (x2 - x0);
        const double b = d01 - a * (x0 + x1);
        double xe = x1, ye = y1;
        if (a != 0.0) {
            const double xv = -b / (2.0 * a);
            if (xv > x0 && xv < x2) {
                xe = xv;
                ye = y0 + d01 * (xv - x0) + a * (xv - x0) * (xv - x1);
            }
        }
        const double norm = std::abs(gmax) > 0.0 ? std::abs(gmax) : 1.0;
        out.push_back({kind, xe, ye, std::abs(2.0 * a) / norm});
        i = r - 1;
    }
    return out;
}

std::vector<Feature> find_features(const MarginalSpectrum& m, double threshold) {
    return find_features(m.energies, m.intensity, threshold);
}

namespace {

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

}  // namespace

void write_joint_csv(std::ostream& out, const JointSpectrum& joint, const std::string& header) {
    out << "# " << header << '\n' << "E_a,E_b,intensity\n";
    const auto& g = joint.grid;
    for (std::size_t i = 0; i < g.axis_a.size(); ++i)
        for (std::size_t j = 0; j < g.axis_b.size(); ++j)
            out << fmt17(g.axis_a[i]) << ',' << fmt17(g.axis_b[j]) << ',' << fmt17(joint.intensity(i, j)) << '\n';
}

void write_marginal_csv(std::ostream& out, const MarginalSpectrum& m, const std::string& header) {
    out << "# " << header << '\n' << "E,intensity\n";
    for (std::size_t i = 0; i < m.energies.size(); ++i)
        out << fmt17(m.energies[i]) << ',' << fmt17(m.intensity[i]) << '\n';
}

}  // namespace fanopair
