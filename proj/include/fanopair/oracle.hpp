#pragma once

#include "fanopair/spectra.hpp"

#include <vector>

namespace fanopair {

/// One atom on its own: discrete pair (ground, excited) coupled to its continuum.
/// Dipole-dipole constants play no role here.
struct SingleAtom {
    Atom atom = Atom::A;
    double E_L = 1.0;
    Mat2 K;
    Vec2 I;
    Mat2 L;
    Eig2 eig;
    Vec2 c0;

    Vec2 c(double t) const;
    Complex d(double E, double t) const;
    /// t -> infinity with the phase exp[-i(E - E_L)t] dropped.
    Complex d_longtime(double E) const;
    /// int |d_longtime|^2 dE in closed form.
    double longtime_norm() const;
    /// |c(t)|^2 + int |d(E, t)|^2 dE by quadrature.
    double total_norm(double t, int G = 2049) const;

    // Laplace images at complex epsilon (Im > 0)
    Vec2 c_laplace(Complex eps) const;
    Complex d_laplace(double E, Complex eps) const;
};

SingleAtom single_atom(const RawParams& raw, Atom atom, const Vec2& c0 = Vec2(1.0, 0.0));

/// d_a(E_a) d_b(E_b) from the isolated atoms. NonzeroCoupling unless all
/// dipole-dipole constants vanish.
JointSpectrum product_reference(const RawParams& raw, const EnergyGrid& grid, bool normalize = false);

struct CrosstermSample {
    double E;      // energy of the electron of `side`
    Complex eps;   // Laplace variable, Im > 0
};

/// Default sampling: a few energies around E_L and eps = s + 0.5i Gamma.
std::vector<CrosstermSample> default_crossterm_samples(const RawParams& raw);

/// Plugs the independent-atom Laplace solution into the first-ionization
/// equation of `side` (integral term included, evaluated by quadrature) and
/// compares with B^H c(eps) of the full model. Returns the largest relative
/// mismatch. Vanishes for uncoupled atoms.
double crossterm_residual(const RawParams& raw, const std::vector<CrosstermSample>& samples,
                          Atom side = Atom::A, int quadrature_points = 4097);

/// Only the integral term, relative to |B^H c|; zero for independent atoms.
double crossterm_integral(const RawParams& raw, const CrosstermSample& sample, Atom side = Atom::A,
                          int quadrature_points = 4097);

struct PropagationResult {
    double t = 0.0;
    std::vector<double> energies;  // comb E_L + eps_i, spacing h
    double h = 0.0;
    Vec4 c;
    Eigen::MatrixXcd d_a, d_b;     // G x 2, continuum normalization (divided by sqrt h)
    Eigen::MatrixXcd d;            // G x G, divided by h
    double norm = 1.0;             // discrete norm of the full state vector
    int steps = 0;
    double spectral_radius = 0.0;
};

/// Direct propagation of the full model with each continuum replaced by a
/// uniform comb of G states on E_L +- half_width. Chebyshev expansion of the
/// propagator per step.
/// GridTooLarge for G > 64, RecurrenceBound beyond 2 pi / h, StepTooLarge
/// when a step changes the norm by more than 1e-10.
PropagationResult propagate_full(const RawParams& raw, int G, double half_width, double t_final, double dt,
                                 const Vec4& c0 = Vec4(1.0, 0.0, 0.0, 0.0));

/// Recurrence time 2 pi / h of the comb.
double recurrence_time(int G, double half_width);

enum class DeviationReference {
    TimeResolved,  // pole-expansion |d(E_a, E_b, t)|^2 at the propagated time
    LongTime,      // |d_inf|^2
};

/// Total variation between the normalized comb spectrum |d_ij|^2 and the
/// normalized analytic spectrum on the same nodes.
double propagation_deviation(const Model& model, const PropagationResult& r,
                             DeviationReference ref = DeviationReference::TimeResolved);

}  // namespace fanopair
