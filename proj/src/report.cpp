#include "fanopair/fano.hpp"
#include "fanopair/oracle.hpp"
#include "fanopair/presets.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace fanopair {

namespace {

std::string sci(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6e", x);
    return buf;
}

std::string cplx(Complex z) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%+.10e %+.10ei", z.real(), z.imag());
    return buf;
}

const char* flag(bool ok) { return ok ? "ok" : "FLAG"; }

}  // namespace

void emit_report(std::ostream& out, const RawParams& raw, const GridSpec& grid) {
    out << "== parameters\n";
    write_config(out, raw);
    const auto issues = validate(raw);
    for (const auto& s : issues.issues) out << "issue: " << s << '\n';

    const Model m = make_model(raw);
    for (const auto& s : trapped_states(m)) out << "issue: trapped population: " << s << '\n';
    out << "\n== matrices\n";
    dump_matrices(out, m.mats, m.eig_a, m.eig_b, m.eig4);

    out << "\n== eigenvalue signs\n";
    for (Atom j : {Atom::A, Atom::B})
        for (int k = 0; k < 2; ++k) {
            const Complex l = m.eig(j).lambda(k);
            out << "L_" << atom_name(j) << " lambda_" << k + 1 << " = " << cplx(l) << "  Im >= 0: "
                << flag(l.imag() >= -1e-12) << '\n';
        }
    for (int k = 0; k < 4; ++k) {
        const Complex l = m.eig4.Lambda[k];
        out << "Abar Lambda_" << k + 1 << " = " << cplx(l) << "  Im <= 0: " << flag(l.imag() <= 1e-12) << '\n';
    }
    out << "cond(P) = " << sci(m.eig4.condition) << '\n';

    out << "\n== norms\n";
    const double na = norm_analytic(m);
    out << "analytic norm = " << sci(na) << "  |1 - n| <= 1e-6: " << flag(std::abs(na - 1.0) <= 1e-6) << '\n';
    const double nq = norm_quadrature(m, grid.points);
    out << "quadrature norm (G = " << grid.points << ") = " << sci(nq)
        << "  |n_q - n| <= 1e-4: " << flag(std::abs(nq - na) <= 1e-4) << '\n';

    out << "\n== factorization\n";
    if (raw.uncoupled()) {
        const EnergyGrid g = make_grid(m, {GridKind::Adapted, 64, grid.span});
        const JointSpectrum full = sample_joint(m, g);
        const JointSpectrum prod = product_reference(raw, g);
        const double scale = full.amplitude.cwiseAbs().maxCoeff();
        const double diff = (full.amplitude - prod.amplitude).cwiseAbs().maxCoeff() / scale;
        out << "max |d_full - d_a d_b| / max |d| = " << sci(diff) << "  " << (diff <= 1e-8 ? "PASS" : "FAIL") << '\n';
    } else {
        out << "skipped: dipole-dipole couplings present\n";
    }
    out << "cross-term residual (a) = " << sci(crossterm_residual(raw, default_crossterm_samples(raw))) << '\n';

    out << "\n== balance\n";
    try {
        out << "B9 residual |J_a* mu_a*/mut_a* + J_b mu_b/mut_b - J_ab| = " << sci(std::abs(balance_residual(raw)))
            << '\n';
        const BalanceRecord b = balance_record(raw);
        out << "Fano zeros E_F = " << sci(b.E_F_a) << ", " << sci(b.E_F_b) << '\n'
            << "balanced J_a = " << cplx(b.J_a) << ", J_b = " << cplx(b.J_b) << '\n'
            << "dressed coupling at the zeros after balancing = " << sci(std::abs(b.coupling_at_zeros)) << '\n';
    } catch (const Error& e) {
        out << "not available: " << e.what() << '\n';
    }
}

}  // namespace fanopair
