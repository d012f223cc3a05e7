#include "fanopair/oracle.hpp"

#include <algorithm>
#include <cmath>

namespace fanopair {

Vec2 SingleAtom::c(double t) const {
    Vec2 out = Vec2::Zero();
    for (int k = 0; k < 2; ++k) out += std::exp(kI * eig.lambda(k) * t) * (eig.projector(k) * c0);
    return out;
}

Complex SingleAtom::d(double E, double t) const {
    const double eps = E - E_L;
    Complex out{0.0};
    for (int k = 0; k < 2; ++k)
        out += I.dot(eig.projector(k) * c0) * divided_difference(Complex{eps}, -eig.lambda(k), t);
    return out;
}

Complex SingleAtom::d_longtime(double E) const {
    const double eps = E - E_L;
    Complex out{0.0};
    for (int k = 0; k < 2; ++k) {
        const Complex a = I.dot(eig.projector(k) * c0);
        if (a != 0.0) out += a / (eps + eig.lambda(k));
    }
    return out;
}

double SingleAtom::longtime_norm() const {
    Complex total{0.0};
    for (int j = 0; j < 2; ++j)
        for (int k = 0; k < 2; ++k) {
            const Complex aj = I.dot(eig.projector(j) * c0), ak = I.dot(eig.projector(k) * c0);
            if (aj == 0.0 || ak == 0.0) continue;
            total += std::conj(aj) * ak * 2.0 * kPi * kI / (eig.lambda(k) - std::conj(eig.lambda(j)));
        }
    return total.real();
}

double SingleAtom::total_norm(double t, int G) const {
    std::vector<CauchyComponent> comp;
    double width = 0.0;
    for (int k = 0; k < 2; ++k) width = std::max(width, std::abs(eig.lambda(k)));
    comp.push_back({E_L, width > 0.0 ? width : 1.0, 0.25});
    for (int k = 0; k < 2; ++k)
        if (eig.lambda(k).imag() > 0.0) comp.push_back({E_L - eig.lambda(k).real(), eig.lambda(k).imag(), 0.375});
    const Rule r = cauchy_mixture_rule(comp, G);
    double s = c(t).squaredNorm();
    for (int i = 0; i < r.size(); ++i) s += r.weights[i] * std::norm(d(r.nodes[i], t));
    return s;
}

Vec2 SingleAtom::c_laplace(Complex eps) const {
    Vec2 out = Vec2::Zero();
    for (int k = 0; k < 2; ++k) out += eig.projector(k) * c0 / (eps + eig.lambda(k));
    return kI * out;
}

Complex SingleAtom::d_laplace(double E, Complex eps) const {
    return I.dot(c_laplace(eps)) / (eps - E + E_L);
}

SingleAtom single_atom(const RawParams& raw, Atom atom, const Vec2& c0) {
    const ModelMatrices m = build_structure(raw);
    SingleAtom s;
    s.atom = atom;
    s.E_L = raw.E_L;
    s.K = m.K(atom);
    s.I = m.I(atom);
    s.L = m.L(atom);
    s.eig = eig_L(s.L);
    s.c0 = c0;
    return s;
}

JointSpectrum product_reference(const RawParams& raw, const EnergyGrid& grid, bool normalize) {
    if (!raw.uncoupled())
        throw Error(ErrorCode::NonzeroCoupling, "product reference needs J_a = J_b = J_ab = 0");
    const SingleAtom sa = single_atom(raw, Atom::A), sb = single_atom(raw, Atom::B);
    std::vector<Complex> fa(grid.axis_a.size()), fb(grid.axis_b.size());
    for (std::size_t i = 0; i < fa.size(); ++i) fa[i] = sa.d_longtime(grid.axis_a[i]);
    for (std::size_t j = 0; j < fb.size(); ++j) fb[j] = sb.d_longtime(grid.axis_b[j]);
    JointSpectrum js;
    js.grid = grid;
    js.amplitude.resize(fa.size(), fb.size());
    double norm = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i)
        for (std::size_t j = 0; j < fb.size(); ++j) {
            js.amplitude(i, j) = fa[i] * fb[j];
            norm += grid.weights_a[i] * grid.weights_b[j] * std::norm(js.amplitude(i, j));
        }
    js.raw_norm = js.norm = norm;
    if (normalize && norm > 0.0) {
        js.amplitude /= std::sqrt(norm);
        js.norm = 1.0;
        js.normalized = true;
    }
    js.intensity = js.amplitude.cwiseAbs2();
    return js;
}

namespace {

double width_of(const RawParams& raw) {
    const double g = std::max(kPi * (std::norm(raw.V_a) + std::norm(raw.J_a)),
                              kPi * (std::norm(raw.V_b) + std::norm(raw.J_b)));
    return g > 0.0 ? g : 1.0;
}

RawParams independent(RawParams raw) {
    raw.J_a = raw.J_b = raw.J_ab = 0.0;
    return raw;
}

// Laplace image of the first-ionization amplitude of `first` for two independent
// atoms; components carry the state of the partner atom.
Vec2 first_ionization_laplace(const SingleAtom& first, const SingleAtom& other, double E, Complex eps) {
    const double x = E - first.E_L;
    Vec2 out = Vec2::Zero();
    for (int k = 0; k < 2; ++k) {
        const Complex a = first.I.dot(first.eig.projector(k) * first.c0);
        if (a == 0.0) continue;
        const Complex lk = first.eig.lambda(k);
        for (int kp = 0; kp < 2; ++kp) {
            const Complex lkp = other.eig.lambda(kp);
            const Vec2 v = other.eig.projector(kp) * other.c0;
            out += a * v / (x + lk) * (1.0 / (eps - x + lkp) - 1.0 / (eps + lk + lkp));
        }
    }
    return kI * out;
}

struct Sides {
    SingleAtom own, other;
};

Sides sides(const RawParams& raw, Atom side) {
    const RawParams ind = independent(raw);
    return {single_atom(ind, side), single_atom(ind, partner(side))};
}

Complex integral_term_scalar(const Sides& s, double E, Complex eps, int G) {
    // int dE' I_other^H... : the partner electron is integrated out
    const double EL = s.own.E_L;
    const Complex pole = eps - (E - EL) + EL;  // E' where eps - E - E' + 2E_L vanishes
    const double scale = std::max(eps.imag(), 1e-3 * std::abs(eps));
    const Rule r = tangent_rule(pole.real(), scale, G);
    Complex acc{0.0};
    for (int i = 0; i < r.size(); ++i) {
        const double Ep = r.nodes[i];
        const Vec2 dp = first_ionization_laplace(s.other, s.own, Ep, eps);
        acc += r.weights[i] * s.own.I.dot(dp) / (eps - (E - EL) - (Ep - EL));
    }
    return acc;
}

}  // namespace

std::vector<CrosstermSample> default_crossterm_samples(const RawParams& raw) {
    const double g = width_of(raw);
    std::vector<CrosstermSample> out;
    for (double e : {-1.5, -0.3, 0.0, 0.8, 2.0})
        for (double s : {-1.0, 0.0, 0.6}) out.push_back({raw.E_L + e * g, Complex{s * g, 0.5 * g}});
    return out;
}

double crossterm_integral(const RawParams& raw, const CrosstermSample& sample, Atom side, int quadrature_points) {
    const Sides s = sides(raw, side);
    const ModelMatrices full = build_structure(raw);
    const Vec4 c = kI * (sample.eps * Mat4::Identity() - full.Abar).partialPivLu().solve(Vec4(1.0, 0.0, 0.0, 0.0));
    const Vec2 rhs = full.B(side).adjoint() * c;
    const Complex integral = integral_term_scalar(s, sample.E, sample.eps, quadrature_points);
    return (s.other.I * integral).norm() / rhs.norm();
}

double crossterm_residual(const RawParams& raw, const std::vector<CrosstermSample>& samples, Atom side,
                          int quadrature_points) {
    const Sides s = sides(raw, side);
    const ModelMatrices full = build_structure(raw);
    const double EL = raw.E_L;
    double worst = 0.0;
    for (const auto& smp : samples) {
        const Vec4 c = kI * (smp.eps * Mat4::Identity() - full.Abar).partialPivLu().solve(Vec4(1.0, 0.0, 0.0, 0.0));
        const Vec2 rhs = full.B(side).adjoint() * c;
        const Vec2 d1 = first_ionization_laplace(s.own, s.other, smp.E, smp.eps);
        const Vec2 lhs = (smp.eps - smp.E + EL) * d1 + s.other.L * d1 -
                         s.other.I * integral_term_scalar(s, smp.E, smp.eps, quadrature_points);
        worst = std::max(worst, (lhs - rhs).norm() / rhs.norm());
    }
    return worst;
}

// ---------------------------------------------------------------------------
// pseudo-continuum propagation

double recurrence_time(int G, double half_width) {
    const double h = 2.0 * half_width / (G - 1);
    return 2.0 * kPi / h;
}

namespace {

struct Comb {
    int G;
    double h, sh;
    Eigen::VectorXd eps;
    ModelMatrices m;

    Eigen::Index size() const { return 4 + 4 * G + static_cast<Eigen::Index>(G) * G; }

    // state layout: c(4) | d_a (G x 2) | d_b (G x 2) | d (G x G), column major
    void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
        using MapC = Eigen::Map<const Eigen::MatrixXcd>;
        using Map = Eigen::Map<Eigen::MatrixXcd>;
        const Eigen::Map<const Vec4> c(x.data());
        const MapC da(x.data() + 4, G, 2), db(x.data() + 4 + 2 * G, G, 2), d(x.data() + 4 + 4 * G, G, G);
        Eigen::Map<Vec4> yc(y.data());
        Map ya(y.data() + 4, G, 2), yb(y.data() + 4 + 2 * G, G, 2), yd(y.data() + 4 + 4 * G, G, G);

        const Vec2 sa = da.colwise().sum().transpose(), sb = db.colwise().sum().transpose();
        yc = m.A * c + sh * (m.B_a * sa + m.B_b * sb);

        const Eigen::RowVector2cd ca = (m.B_a.adjoint() * c).transpose(), cb = (m.B_b.adjoint() * c).transpose();
        const Eigen::VectorXcd rows = d.rowwise().sum(), cols = d.colwise().sum().transpose();
        ya = sh * Eigen::VectorXcd::Ones(G) * ca + eps.asDiagonal() * da + da * m.K_b.transpose() +
             sh * rows * m.I_b.transpose();
        yb = sh * Eigen::VectorXcd::Ones(G) * cb + eps.asDiagonal() * db + db * m.K_a.transpose() +
             sh * cols * m.I_a.transpose();

        const Eigen::VectorXcd pa = da * m.I_b.conjugate(), pb = db * m.I_a.conjugate();
        for (int j = 0; j < G; ++j)
            for (int i = 0; i < G; ++i) yd(i, j) = (eps(i) + eps(j)) * d(i, j) + sh * (pa(i) + pb(j));
    }

    // Gershgorin interval of the Hermitian generator
    std::pair<double, double> bounds() const {
        double lo = 1e300, hi = -1e300;
        auto add = [&](double center, double radius) {
            lo = std::min(lo, center - radius);
            hi = std::max(hi, center + radius);
        };
        for (int k = 0; k < 4; ++k) {
            double r = 0.0;
            for (int l = 0; l < 4; ++l)
                if (l != k) r += std::abs(m.A(k, l));
            for (int q = 0; q < 2; ++q) r += sh * G * (std::abs(m.B_a(k, q)) + std::abs(m.B_b(k, q)));
            add(m.A(k, k).real(), r);
        }
        const double ia = std::abs(m.I_a(0)) + std::abs(m.I_a(1)), ib = std::abs(m.I_b(0)) + std::abs(m.I_b(1));
        for (int i = 0; i < G; ++i) {
            for (int q = 0; q < 2; ++q) {
                double ba = 0.0, bb = 0.0;
                for (int k = 0; k < 4; ++k) {
                    ba += std::abs(m.B_a(k, q));
                    bb += std::abs(m.B_b(k, q));
                }
                add(eps(i) + m.K_b(q, q).real(), std::abs(m.K_b(q, 1 - q)) + sh * ba + sh * G * std::abs(m.I_b(q)));
                add(eps(i) + m.K_a(q, q).real(), std::abs(m.K_a(q, 1 - q)) + sh * bb + sh * G * std::abs(m.I_a(q)));
            }
        }
        const double emax = eps.maxCoeff(), emin = eps.minCoeff();
        add(2.0 * emax, sh * (ia + ib));
        add(2.0 * emin, sh * (ia + ib));
        return {lo, hi};
    }
};

constexpr int kMaxChebyshevTerms = 512;

}  // namespace

PropagationResult propagate_full(const RawParams& raw, int G, double half_width, double t_final, double dt,
                                 const Vec4& c0) {
    if (G > 64) throw Error(ErrorCode::GridTooLarge, "pseudo-continuum propagation supports G <= 64");
    if (G < 2 || !(half_width > 0.0)) throw Error(ErrorCode::InvalidParams, "comb needs G >= 2 and a positive width");
    if (t_final < 0.0 || !(dt > 0.0)) throw Error(ErrorCode::InvalidParams, "need t_final >= 0 and dt > 0");
    if (t_final > recurrence_time(G, half_width))
        throw Error(ErrorCode::RecurrenceBound, "t_final beyond the comb recurrence time 2 pi / h");

    Comb comb;
    comb.G = G;
    comb.h = 2.0 * half_width / (G - 1);
    comb.sh = std::sqrt(comb.h);
    comb.eps.resize(G);
    for (int i = 0; i < G; ++i) comb.eps(i) = -half_width + i * comb.h;
    comb.m = build_structure(raw);

    const auto [lo, hi] = comb.bounds();
    const double center = 0.5 * (hi + lo);
    const double radius = 0.5 * (hi - lo) * 1.01 + 1e-12;

    Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(comb.size());
    psi.head<4>() = c0;

    PropagationResult res;
    res.h = comb.h;
    res.spectral_radius = radius;
    const int steps = t_final > 0.0 ? static_cast<int>(std::ceil(t_final / dt - 1e-12)) : 0;
    const double tau = steps > 0 ? t_final / steps : 0.0;

    if (steps > 0) {
        const double x = radius * tau;
        std::vector<Complex> coef;
        for (int k = 0; k < kMaxChebyshevTerms; ++k) {
            const double jk = std::cyl_bessel_j(static_cast<double>(k), x);
            coef.push_back((k == 0 ? 1.0 : 2.0) * std::pow(-kI, k) * jk);
            if (k > x && std::abs(jk) < 1e-17) break;
        }
        if (std::abs(coef.back()) > 1e-15)
            throw Error(ErrorCode::StepTooLarge, "Chebyshev series does not converge within the step; reduce dt");
        const Complex phase = std::exp(-kI * center * tau);

        Eigen::VectorXcd t0(comb.size()), t1(comb.size()), t2(comb.size()), hx(comb.size()), acc(comb.size());
        auto scaled = [&](const Eigen::VectorXcd& v, Eigen::VectorXcd& out) {
            comb.apply(v, hx);
            out = (hx - center * v) / radius;
        };
        for (int s = 0; s < steps; ++s) {
            const double before = psi.norm();
            t0 = psi;
            acc = coef[0] * t0;
            if (coef.size() > 1) {
                scaled(t0, t1);
                acc += coef[1] * t1;
            }
            for (std::size_t k = 2; k < coef.size(); ++k) {
                scaled(t1, t2);
                t2 = 2.0 * t2 - t0;
                acc += coef[k] * t2;
                std::swap(t0, t1);
                std::swap(t1, t2);
            }
            psi = phase * acc;
            const double drift = std::abs(psi.norm() - before);
            if (drift > 1e-10)
                throw Error(ErrorCode::StepTooLarge, "norm drift " + std::to_string(drift) + " in one step");
        }
    }

    res.t = t_final;
    res.steps = steps;
    res.norm = psi.squaredNorm();
    res.c = psi.head<4>();
    res.d_a = Eigen::Map<const Eigen::MatrixXcd>(psi.data() + 4, G, 2) / comb.sh;
    res.d_b = Eigen::Map<const Eigen::MatrixXcd>(psi.data() + 4 + 2 * G, G, 2) / comb.sh;
    res.d = Eigen::Map<const Eigen::MatrixXcd>(psi.data() + 4 + 4 * G, G, G) / comb.h;
    res.energies.resize(G);
    for (int i = 0; i < G; ++i) res.energies[i] = raw.E_L + comb.eps(i);
    return res;
}

double propagation_deviation(const Model& model, const PropagationResult& r, DeviationReference ref) {
    const int G = static_cast<int>(r.energies.size());
    Eigen::MatrixXd p = r.d.cwiseAbs2(), q(G, G);
    for (int i = 0; i < G; ++i)
        for (int j = 0; j < G; ++j) q(i, j) = std::norm(ref == DeviationReference::LongTime
                                    ? longtime_amplitude(model, r.energies[i], r.energies[j])
                                    : coeffs_d_joint(model, r.energies[i], r.energies[j], r.t));
    const double sp = p.sum(), sq = q.sum();
    if (!(sp > 0.0) || !(sq > 0.0)) throw Error(ErrorCode::NotNormalized, "empty spectrum in deviation");
    return 0.5 * (p / sp - q / sq).cwiseAbs().sum();
}

}  // namespace fanopair
