#pragma once

#include "fanopair/params.hpp"

namespace fanopair {

// Dressed (Fano-diagonalized) picture of each atom. The principal-value shift
// of the discrete level is zero for flat continua, so E~_j^0 = E_j^0.

double fano_gamma(const RawParams& raw, Atom atom);

/// Weight of the discrete level in the dressed continuum state |E).
Complex dressed_weight(const RawParams& raw, Atom atom, double E);

/// mut (eps + q) / (eps - i), eps = (E - E0)/gamma.
Complex dressed_dipole(const RawParams& raw, Atom atom, double E);

/// Coupling between dressed states |E_a) and |E_b), closed form.
Complex dressed_coupling(const RawParams& raw, double E_a, double E_b);

/// The same from the defining integrals over the undressed continua, on a
/// band E_L +- band_half_width. The simple pole is split into a symmetric
/// principal-value part and the -i pi semicircle term.
Complex dressed_coupling_quadrature(const RawParams& raw, double E_a, double E_b, double band_half_width = 1e6,
                                    int points = 64);

/// E0 - gamma q. ComplexCoupling when q is not real.
double fano_zero(const RawParams& raw, Atom atom);

/// J_a* mu_a*/mut_a* + J_b mu_b/mut_b - J_ab.
Complex balance_residual(const RawParams& raw);

/// Sets J_a = (J_ab*/2)(mut_a/mu_a), J_b = (J_ab/2)(mut_b/mu_b), which zeroes
/// the residual. ZeroDipole when mu_a or mu_b vanishes.
RawParams balance_solve(const RawParams& raw);

struct BalanceRecord {
    double E_F_a = 0.0, E_F_b = 0.0;
    Complex residual{0.0};
    Complex J_a{0.0}, J_b{0.0};        // solved values
    Complex coupling_at_zeros{0.0};    // dressed coupling at (E_F_a, E_F_b) after solving
};

BalanceRecord balance_record(const RawParams& raw);

}  // namespace fanopair
