#pragma once

#include "fanopair/spectra.hpp"

#include <functional>
#include <iosfwd>
#include <optional>
#include <vector>

namespace fanopair {

/// Wraps an arbitrary kernel d(i, j) with quadrature weights as a joint spectrum.
JointSpectrum joint_from_kernel(const Eigen::MatrixXcd& d, const std::vector<double>& weights_a,
                                const std::vector<double>& weights_b);

/// sqrt(w_a) d sqrt(w_b)
Eigen::MatrixXcd weighted_kernel(const JointSpectrum& joint);

struct SchmidtSpectrum {
    std::vector<double> lambdas;  // descending, sum of squares 1
    double schmidt_number = 1.0;  // 1 / sum lambda^4
};

/// Singular values of the weighted kernel. The joint must be normalized to 1e-6.
SchmidtSpectrum schmidt(const JointSpectrum& joint);
SchmidtSpectrum schmidt_from_kernel(const Eigen::MatrixXcd& weighted);

double negativity_schmidt(const SchmidtSpectrum& s);

/// 2 [1 - tr rho^2] with rho the reduced kernel of `side`.
double negativity_trace(const JointSpectrum& joint, Atom side = Atom::B);

/// Direct quadruple sum over the grid; O(G^4), G <= 64 on both axes.
double negativity_bruteforce(const JointSpectrum& joint);

struct DensityValue {
    double value = 0.0;
    bool vanishing = false;  // denominator underflowed; value set to 0
};

/// Joint negativity density at grid indices (i, i') on the a-axis and (j, j') on the b-axis.
DensityValue negativity_density(const JointSpectrum& joint, int i, int ip, int j, int jp);

/// Re-integration of the density weighted by rho_a rho_a' and the bracketed sums; G <= 64.
double negativity_density_integral(const JointSpectrum& joint);

/// Negativity of the state with E_a restricted to [E_a0 - dE, E_a0 + dE].
double negativity_filtered_a(const JointSpectrum& joint, double E_a0, double dE);
/// Both energies restricted.
double negativity_filtered_ab(const JointSpectrum& joint, double E_a0, double E_b0, double dE);

/// Same quantities on grids built for the windows: Gauss-Legendre nodes inside each
/// window, the pole-adapted rule on an unrestricted axis.
double negativity_filtered_a(const Model& model, double E_a0, double dE, int window_points = 32,
                             int other_points = 513);
double negativity_filtered_ab(const Model& model, double E_a0, double E_b0, double dE, int window_points = 32);

/// Negativity of the windowed state after renormalization, via Schmidt; for comparison.
double negativity_filtered_schmidt(const JointSpectrum& joint, double E_a0, double E_b0, double dE);

struct QubitContinuumResult {
    double N_q = 0.0;
    double N_q_density = 0.0;   // re-integrated density form
    Eigen::MatrixXd n_q;        // density on the grid nodes
};

/// Two-level system a entangled with continuum b: |0> d0(E) + |1> d1(E).
QubitContinuumResult negativity_qubit_continuum(const std::function<Complex(double)>& d0,
                                                const std::function<Complex(double)>& d1, const Rule& grid);

struct NegativityReport {
    double N_schmidt = 0.0;
    double N_trace_a = 0.0;
    double N_trace_b = 0.0;
    std::optional<double> N_bruteforce;
    double schmidt_number = 1.0;
    int points_a = 0, points_b = 0;

    double max_delta() const;
};

NegativityReport negativity_report(const JointSpectrum& joint, bool with_bruteforce = false);

void write_schmidt_csv(std::ostream& out, const SchmidtSpectrum& s, const std::string& header);

}  // namespace fanopair
