#pragma once

#include "fanopair/entanglement.hpp"

#include <random>

namespace fanopair::testing {

inline RawParams fig2(double gammabar = 0.0, double J_ab = 0.0, double q = 1.0, double Omega = 1.0) {
    FanoSpec s;
    s.gammabar_a = s.gammabar_b = gammabar;
    s.J_ab = J_ab;
    s.q_a = s.q_b = q;
    s.Omega = Omega;
    return realize_raw(s);
}

inline Complex random_complex(std::mt19937_64& rng, double scale) {
    std::uniform_real_distribution<double> mag(0.05, 1.0), ph(-kPi, kPi);
    return std::polar(scale * mag(rng), ph(rng));
}

/// Physical set with nonzero widths on both atoms; energies near E_L.
inline RawParams random_raw(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> det(-1.0, 1.0);
    RawParams r;
    r.E_L = 1.0;
    r.E_a0 = 1.0 + det(rng);
    r.E_b0 = 1.0 + det(rng);
    r.mu_a = random_complex(rng, 0.5);
    r.mu_b = random_complex(rng, 0.5);
    r.mut_a = random_complex(rng, 0.5);
    r.mut_b = random_complex(rng, 0.5);
    r.V_a = random_complex(rng, 0.8);
    r.V_b = random_complex(rng, 0.8);
    r.J_a = random_complex(rng, 0.4);
    r.J_b = random_complex(rng, 0.4);
    r.J_ab = random_complex(rng, 1.0);
    r.alpha_L = 1.0;
    return r;
}

inline double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace fanopair::testing
