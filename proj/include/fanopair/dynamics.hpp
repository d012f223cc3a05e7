#pragma once

#include "fanopair/matrices.hpp"
#include "fanopair/quadrature.hpp"

#include <array>
#include <limits>
#include <string>
#include <vector>

namespace fanopair {

// Everything the amplitude evaluators need, computed once per parameter set.
//
// Path "a" means electron a leaves first: c -> d_a -> d. Its coefficients
// use the eigen-system of L_b, since atom b still evolves while electron a
// is already free.
struct Model {
    RawParams raw;
    ModelMatrices mats;
    Eig2 eig_a, eig_b;
    Eig4 eig4;
    Vec4 c0;
    std::array<Complex, 4> w;                      // p_k^{-1} c0
    std::array<std::array<Vec2, 4>, 2> u_a, u_b;   // [j][k]: L_j B^H p_k w_k
    std::array<std::array<Complex, 4>, 2> T_a, T_b;  // I^H u of the second ionization

    const Eig2& eig(Atom j) const { return j == Atom::A ? eig_a : eig_b; }
    // frequency scale used for tolerances and default grids
    double scale() const;
};

Vec4 ground_state();

/// Builds matrices and eigen-systems. `c0` must be normalized.
Model make_model(const RawParams& raw, const Vec4& c0 = ground_state());

struct StateCoefficients {
    double t = 0.0;
    Vec4 c;
};

Vec4 coeffs_c(const Model& model, double t);
Vec2 coeffs_d_atom(const Model& model, Atom atom, double E, double t);
Complex coeffs_d_joint(const Model& model, double E_a, double E_b, double t);

/// Long-time joint amplitude without the phase exp[-i(E_a+E_b-2E_L)t].
Complex longtime_amplitude(const Model& model, double E_a, double E_b);

/// Closed-form integral of |d_inf|^2 over the plane.
double norm_analytic(const Model& model);

/// Eigenvalues with zero width (|Im| <= 1e-12 scale): population parked there
/// never reaches the two-electron continuum and the long-time norm drops below 1.
/// One line per trapping eigenvalue; empty when everything decays.
std::vector<std::string> trapped_states(const Model& model);

/// Pole-adapted one-dimensional rule on the E_a (or E_b) axis.
Rule adapted_axis_rule(const Model& model, Atom axis, int G,
                       double lo = -std::numeric_limits<double>::infinity(),
                       double hi = std::numeric_limits<double>::infinity());

/// Pole-adapted rule on the partner axis for a fixed energy of `axis`.
Rule adapted_partner_rule(const Model& model, Atom axis, double E_fixed, int G);

/// Nested quadrature of |d_inf|^2 with pole-adapted rules on both axes.
double norm_quadrature(const Model& model, int G = 513);

/// |c|^2 + sum_j int |d_j|^2 + int int |d|^2 at time t, by nested adapted quadrature.
double total_norm(const Model& model, double t, int G = 257);

// exposed for tests: divided differences of u -> exp(-i u t)
Complex divided_difference(Complex z0, Complex z1, double t);
Complex divided_difference(Complex z0, Complex z1, Complex z2, double t);

}  // namespace fanopair
