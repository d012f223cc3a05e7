#include "fanopair/dynamics.hpp"

#include <algorithm>
#include <cmath>

namespace fanopair {

namespace {

Complex expm1c(Complex w) {
    const double a = w.real(), b = w.imag();
    const double sh = std::sin(0.5 * b);
    return {std::expm1(a) * std::cos(b) - 2.0 * sh * sh, std::exp(a) * std::sin(b)};
}

// (e^w - 1) / w
Complex phi1(Complex w) {
    if (std::abs(w) < 1e-5) return 1.0 + w * (0.5 + w * (1.0 / 6.0 + w / 24.0));
    return expm1c(w) / w;
}

double tiny(const Model& m) { return 1e-12 * m.scale(); }

}  // namespace

Complex divided_difference(Complex z0, Complex z1, double t) {
    const Complex s{0.0, -t};
    if (z1.imag() > z0.imag()) std::swap(z0, z1);
    return std::exp(s * z0) * s * phi1(s * (z1 - z0));
}

Complex divided_difference(Complex z0, Complex z1, Complex z2, double t) {
    const Complex s{0.0, -t};
    const Complex m = (z0 + z1 + z2) / 3.0;
    const Complex e0 = z0 - m, e1 = z1 - m, e2 = z2 - m;
    const double spread = t * std::max({std::abs(e0), std::abs(e1), std::abs(e2)});
    if (spread < 1e-4) {
        const Complex s2 = s * s;
        return std::exp(s * m) * s2 * (0.5 + s2 * (e0 * e0 + e1 * e1 + e2 * e2) / 48.0);
    }
    // outer denominator on the most separated pair
    const double d01 = std::abs(z0 - z1), d02 = std::abs(z0 - z2), d12 = std::abs(z1 - z2);
    Complex zi = z0, zk = z1, zj = z2;
    if (d01 >= d02 && d01 >= d12) {
        zi = z0; zj = z1; zk = z2;
    } else if (d12 >= d01 && d12 >= d02) {
        zi = z1; zj = z2; zk = z0;
    }
    return (divided_difference(zk, zj, t) - divided_difference(zi, zk, t)) / (zj - zi);
}

Vec4 ground_state() {
    Vec4 v = Vec4::Zero();
    v(0) = 1.0;
    return v;
}

double Model::scale() const {
    double s = 0.0;
    for (int j = 0; j < 2; ++j) s = std::max({s, std::abs(eig_a.lambda(j)), std::abs(eig_b.lambda(j))});
    for (Complex l : eig4.Lambda) s = std::max(s, std::abs(l));
    return s > 0.0 ? s : 1.0;
}

Model make_model(const RawParams& raw, const Vec4& c0) {
    if (std::abs(c0.norm() - 1.0) > 1e-12)
        throw Error(ErrorCode::InvalidParams, "initial discrete state must be normalized");
    Model m;
    m.raw = raw;
    m.c0 = c0;
    m.mats = build_structure(raw);
    m.eig_a = eig_L(m.mats.L_a);
    m.eig_b = eig_L(m.mats.L_b);
    m.eig4 = eig_Abar(m.mats.Abar);
    const Vec4 w = m.eig4.Pinv * c0;
    for (int k = 0; k < 4; ++k) m.w[k] = w(k);
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 4; ++k) {
            const Vec4 pw = m.eig4.P.col(k) * m.w[k];
            m.u_a[j][k] = m.eig_b.projector(j) * (m.mats.B_a.adjoint() * pw);
            m.u_b[j][k] = m.eig_a.projector(j) * (m.mats.B_b.adjoint() * pw);
            m.T_a[j][k] = m.mats.I_b.dot(m.u_a[j][k]);  // I_b^H u
            m.T_b[j][k] = m.mats.I_a.dot(m.u_b[j][k]);
        }
    }
    return m;
}

Vec4 coeffs_c(const Model& model, double t) {
    Vec4 c = Vec4::Zero();
    for (int k = 0; k < 4; ++k)
        c += model.eig4.P.col(k) * (model.w[k] * std::exp(Complex{0.0, -t} * model.eig4.Lambda[k]));
    return c;
}

Vec2 coeffs_d_atom(const Model& model, Atom atom, double E, double t) {
    // electron `atom` is free; the partner's damped matrix drives the rest
    const Eig2& partner_eig = model.eig(partner(atom));
    const auto& u = atom == Atom::A ? model.u_a : model.u_b;
    Vec2 d = Vec2::Zero();
    for (int j = 0; j < 2; ++j) {
        const Complex y = E - model.raw.E_L - partner_eig.lambda(j);
        for (int k = 0; k < 4; ++k) {
            if (u[j][k].isZero(0.0)) continue;
            d += u[j][k] * divided_difference(model.eig4.Lambda[k], y, t);
        }
    }
    return d;
}

Complex coeffs_d_joint(const Model& model, double E_a, double E_b, double t) {
    const double EL = model.raw.E_L;
    const Complex x = E_a + E_b - 2.0 * EL;
    Complex d{0.0};
    for (int j = 0; j < 2; ++j) {
        const Complex ya = E_a - EL - model.eig_b.lambda(j);
        const Complex yb = E_b - EL - model.eig_a.lambda(j);
        for (int k = 0; k < 4; ++k) {
            const Complex Lk = model.eig4.Lambda[k];
            if (model.T_a[j][k] != 0.0) d += model.T_a[j][k] * divided_difference(x, Lk, ya, t);
            if (model.T_b[j][k] != 0.0) d += model.T_b[j][k] * divided_difference(x, Lk, yb, t);
        }
    }
    return d;
}

Complex longtime_amplitude(const Model& model, double E_a, double E_b) {
    const double EL = model.raw.E_L;
    const double x = E_a + E_b - 2.0 * EL;
    const double eps = tiny(model);
    Complex d{0.0};
    for (int k = 0; k < 4; ++k) {
        const Complex dx = x - model.eig4.Lambda[k];
        Complex inner{0.0};
        for (int j = 0; j < 2; ++j) {
            const Complex db = E_b - EL + model.eig_b.lambda(j);
            const Complex da = E_a - EL + model.eig_a.lambda(j);
            // a vanishing denominator only occurs for undamped eigenvalues,
            // which carry no amplitude into the continuum
            if (std::abs(db) > eps) inner += model.T_a[j][k] / db;
            if (std::abs(da) > eps) inner += model.T_b[j][k] / da;
        }
        if (inner != 0.0 && std::abs(dx) > eps) d += inner / dx;
    }
    return d;
}

std::vector<std::string> trapped_states(const Model& model) {
    std::vector<std::string> out;
    const double floor = tiny(model);
    for (Atom j : {Atom::A, Atom::B})
        for (int k = 0; k < 2; ++k)
            if (model.eig(j).lambda(k).imag() <= floor)
                out.push_back(std::string("single-ionization block ") + atom_name(j) + " eigenvalue " +
                              std::to_string(k + 1) + " does not decay");
    for (int k = 0; k < 4; ++k)
        if (-model.eig4.Lambda[k].imag() <= floor)
            out.push_back("discrete block eigenvalue " + std::to_string(k + 1) + " does not decay");
    return out;
}

double norm_analytic(const Model& model) {
    const double eps = tiny(model);
    Complex total{0.0};
    for (int k = 0; k < 4; ++k) {
        for (int kp = 0; kp < 4; ++kp) {
            const Complex dL = std::conj(model.eig4.Lambda[k]) - model.eig4.Lambda[kp];
            Complex paths{0.0};
            for (int j = 0; j < 2; ++j) {
                for (int jp = 0; jp < 2; ++jp) {
                    const Complex num_a = std::conj(model.T_a[j][k]) * model.T_a[jp][kp];
                    const Complex num_b = std::conj(model.T_b[j][k]) * model.T_b[jp][kp];
                    const Complex den_a = std::conj(model.eig_b.lambda(j)) - model.eig_b.lambda(jp);
                    const Complex den_b = std::conj(model.eig_a.lambda(j)) - model.eig_a.lambda(jp);
                    for (auto [num, den] : {std::pair{num_a, den_a}, std::pair{num_b, den_b}}) {
                        if (num == 0.0) continue;
                        if (std::abs(den) < eps || std::abs(dL) < eps)
                            throw Error(ErrorCode::DegenerateEigenvalues,
                                        "norm denominator vanishes with nonzero numerator");
                        paths += num / den;
                    }
                }
            }
            if (paths != 0.0) total += paths / dL;
        }
    }
    return 4.0 * kPi * kPi * total.real();
}

namespace {

void add_component(std::vector<CauchyComponent>& out, double center, double width, double weight,
                   double floor) {
    if (!(width > floor)) return;
    out.push_back({center, width, weight});
}

}  // namespace

Rule adapted_axis_rule(const Model& model, Atom axis, int G, double lo, double hi) {
    const double EL = model.raw.E_L;
    const Eig2& own = model.eig(axis);
    const Eig2& other = model.eig(partner(axis));
    const double floor = tiny(model);
    std::vector<CauchyComponent> comp;
    comp.push_back({EL, model.scale(), 0.25});
    for (int j = 0; j < 2; ++j) add_component(comp, EL - own.lambda(j).real(), own.lambda(j).imag(), 1.0, floor);
    for (int k = 0; k < 4; ++k) {
        const Complex Lk = model.eig4.Lambda[k];
        for (int j = 0; j < 2; ++j)
            add_component(comp, EL + Lk.real() + other.lambda(j).real(),
                          std::abs(Lk.imag()) + other.lambda(j).imag(), 1.0, floor);
    }
    double narrow = 0.0;
    for (std::size_t i = 1; i < comp.size(); ++i) narrow += comp[i].weight;
    for (std::size_t i = 1; i < comp.size(); ++i) comp[i].weight *= 0.75 / narrow;
    return cauchy_mixture_rule(comp, G, lo, hi);
}

Rule adapted_partner_rule(const Model& model, Atom axis, double E_fixed, int G) {
    const double EL = model.raw.E_L;
    const Eig2& other = model.eig(partner(axis));
    const double floor = tiny(model);
    std::vector<CauchyComponent> comp;
    comp.push_back({EL, model.scale(), 0.25});
    for (int j = 0; j < 2; ++j)
        add_component(comp, EL - other.lambda(j).real(), other.lambda(j).imag(), 1.0, floor);
    for (int k = 0; k < 4; ++k) {
        const Complex Lk = model.eig4.Lambda[k];
        add_component(comp, 2.0 * EL + Lk.real() - E_fixed, std::abs(Lk.imag()), 1.0, floor);
    }
    double narrow = 0.0;
    for (std::size_t i = 1; i < comp.size(); ++i) narrow += comp[i].weight;
    for (std::size_t i = 1; i < comp.size(); ++i) comp[i].weight *= 0.75 / narrow;
    return cauchy_mixture_rule(comp, G);
}

double norm_quadrature(const Model& model, int G) {
    const Rule outer = adapted_axis_rule(model, Atom::A, G);
    double total = 0.0;
    for (int i = 0; i < outer.size(); ++i) {
        const double Ea = outer.nodes[i];
        const Rule inner = adapted_partner_rule(model, Atom::A, Ea, G);
        double row = 0.0;
        for (int j = 0; j < inner.size(); ++j)
            row += inner.weights[j] * std::norm(longtime_amplitude(model, Ea, inner.nodes[j]));
        total += outer.weights[i] * row;
    }
    return total;
}

double total_norm(const Model& model, double t, int G) {
    double total = coeffs_c(model, t).squaredNorm();
    for (Atom j : {Atom::A, Atom::B}) {
        const Rule r = adapted_axis_rule(model, j, G);
        for (int i = 0; i < r.size(); ++i)
            total += r.weights[i] * coeffs_d_atom(model, j, r.nodes[i], t).squaredNorm();
    }
    const Rule outer = adapted_axis_rule(model, Atom::A, G);
    for (int i = 0; i < outer.size(); ++i) {
        const double Ea = outer.nodes[i];
        const Rule inner = adapted_partner_rule(model, Atom::A, Ea, G);
        double row = 0.0;
        for (int j = 0; j < inner.size(); ++j)
            row += inner.weights[j] * std::norm(coeffs_d_joint(model, Ea, inner.nodes[j], t));
        total += outer.weights[i] * row;
    }
    return total;
}

}  // namespace fanopair
