#include "fanopair/fano.hpp"
#include "fanopair/quadrature.hpp"

#include <cmath>

namespace fanopair {

double fano_gamma(const RawParams& raw, Atom atom) { return kPi * std::norm(raw.V(atom)); }

namespace {

double require_gamma(const RawParams& raw, Atom atom) {
    const double g = fano_gamma(raw, atom);
    if (!(g > 0.0))
        throw Error(ErrorCode::DivisionByZeroCoupling,
                    std::string("atom ") + atom_name(atom) + " has no configuration coupling V");
    return g;
}

// int_lo^hi dE' / (E - E' + i0) for lo < E < hi
Complex pole_integral(double E, double lo, double hi, int points) {
    const double r = std::min(E - lo, hi - E);
    // symmetric part: pairs E -+ s cancel node by node
    double pv = 0.0;
    const Rule sym = gauss_legendre(0.0, r, points);
    for (int i = 0; i < sym.size(); ++i) {
        const double s = sym.nodes[i];
        pv += sym.weights[i] * (1.0 / (E - (E - s)) + 1.0 / (E - (E + s)));
    }
    // leftover one-sided stretch, integrated in log distance
    const double far = std::max(E - lo, hi - E);
    if (far > r) {
        const double sign = (hi - E) > (E - lo) ? -1.0 : 1.0;  // 1/(E - E') < 0 above E
        const Rule u = gauss_legendre(std::log(r), std::log(far), points);
        for (int i = 0; i < u.size(); ++i) pv += sign * u.weights[i];  // dE'/|E-E'| = du
    }
    return Complex{pv, -kPi};
}

}  // namespace

Complex dressed_weight(const RawParams& raw, Atom atom, double E) {
    const double g = fano_gamma(raw, atom);
    return std::conj(raw.V(atom)) / (E - raw.E0(atom) + kI * g);
}

Complex dressed_dipole(const RawParams& raw, Atom atom, double E) {
    const double g = require_gamma(raw, atom);
    const double eps = (E - raw.E0(atom)) / g;
    // mut (eps + q) with q = mu / (pi mut V*), written without dividing by mut
    return (raw.mut(atom) * eps + raw.mu(atom) / (kPi * std::conj(raw.V(atom)))) / (eps - kI);
}

Complex dressed_coupling(const RawParams& raw, double E_a, double E_b) {
    const double ga = require_gamma(raw, Atom::A), gb = require_gamma(raw, Atom::B);
    const double ea = (E_a - raw.E_a0) / ga, eb = (E_b - raw.E_b0) / gb;
    const Complex Va = raw.V_a, Vb = raw.V_b;
    const Complex Ja_c = std::conj(raw.J_a);
    return Ja_c * Vb / (gb * (eb - kI)) + raw.J_b * std::conj(Va) / (ga * (ea + kI)) +
           (raw.J_ab * std::conj(Va) * Vb - kI * Ja_c * Vb * ga + kI * raw.J_b * std::conj(Va) * gb) /
               (ga * gb * (ea + kI) * (eb - kI));
}

Complex dressed_coupling_quadrature(const RawParams& raw, double E_a, double E_b, double band_half_width,
                                    int points) {
    const double lo = raw.E_L - band_half_width, hi = raw.E_L + band_half_width;
    if (!(E_a > lo && E_a < hi && E_b > lo && E_b < hi))
        throw Error(ErrorCode::InvalidParams, "evaluation energies must lie inside the continuum band");
    const Complex fa = dressed_weight(raw, Atom::A, E_a), fb = dressed_weight(raw, Atom::B, E_b);
    // int dE' g_j(E, E') = V_j f_j(E) int dE'/(E - E' + i0) + 1
    const Complex Ga = raw.V_a * fa * pole_integral(E_a, lo, hi, points) + 1.0;
    const Complex Gb = raw.V_b * fb * pole_integral(E_b, lo, hi, points) + 1.0;
    return raw.J_ab * fa * std::conj(fb) + std::conj(raw.J_a) * Ga * std::conj(fb) + raw.J_b * fa * std::conj(Gb);
}

double fano_zero(const RawParams& raw, Atom atom) {
    const double g = require_gamma(raw, atom);
    if (raw.mut(atom) == 0.0)
        throw Error(ErrorCode::DivisionByZeroCoupling, std::string("atom ") + atom_name(atom) + " has mut = 0");
    const Complex q = raw.mu(atom) / (kPi * raw.mut(atom) * std::conj(raw.V(atom)));
    if (std::abs(q.imag()) > 1e-12 * std::max(1.0, std::abs(q)))
        throw Error(ErrorCode::ComplexCoupling, "Fano parameter is complex; the zero leaves the real axis");
    return raw.E0(atom) - g * q.real();
}

Complex balance_residual(const RawParams& raw) {
    if (raw.mut_a == 0.0 || raw.mut_b == 0.0)
        throw Error(ErrorCode::DivisionByZeroCoupling, "balance residual needs nonzero mut_a, mut_b");
    return std::conj(raw.J_a) * std::conj(raw.mu_a) / std::conj(raw.mut_a) + raw.J_b * raw.mu_b / raw.mut_b -
           raw.J_ab;
}

RawParams balance_solve(const RawParams& raw) {
    if (raw.mu_a == 0.0 || raw.mu_b == 0.0)
        throw Error(ErrorCode::ZeroDipole, "balance needs nonzero direct dipoles mu_a, mu_b");
    RawParams out = raw;
    out.J_a = 0.5 * std::conj(raw.J_ab) * raw.mut_a / raw.mu_a;
    out.J_b = 0.5 * raw.J_ab * raw.mut_b / raw.mu_b;
    return out;
}

BalanceRecord balance_record(const RawParams& raw) {
    BalanceRecord r;
    r.E_F_a = fano_zero(raw, Atom::A);
    r.E_F_b = fano_zero(raw, Atom::B);
    r.residual = balance_residual(raw);
    const RawParams solved = balance_solve(raw);
    r.J_a = solved.J_a;
    r.J_b = solved.J_b;
    r.coupling_at_zeros = dressed_coupling(solved, r.E_F_a, r.E_F_b);
    return r;
}

}  // namespace fanopair
