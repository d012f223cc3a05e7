#pragma once

#include <limits>
#include <vector>

namespace fanopair {

struct Rule {
    std::vector<double> nodes;
    std::vector<double> weights;

    int size() const { return static_cast<int>(nodes.size()); }
    double sum_weights() const;
};

/// Trapezoid rule with G equally spaced nodes on [lo, hi].
Rule uniform_rule(double lo, double hi, int G);

/// Midpoint rule in theta for E = center + scale * tan(theta), theta in (-pi/2, pi/2).
/// Covers the whole real line; suited to integrands decaying like 1/E^2.
Rule tangent_rule(double center, double scale, int G);

/// Gauss-Legendre nodes and weights on [lo, hi] (Golub-Welsch).
Rule gauss_legendre(double lo, double hi, int n);

struct CauchyComponent {
    double center;
    double width;
    double weight;
};

/// Midpoint rule in the cumulative distribution of a mixture of Cauchy
/// densities. Nodes crowd where the components are narrow, so integrands
/// with Lorentzian features at the component centers are resolved with few
/// points. Without bounds the tails extend over the whole real line; with
/// bounds the rule covers [lo, hi] only.
Rule cauchy_mixture_rule(const std::vector<CauchyComponent>& components, int G,
                         double lo = -std::numeric_limits<double>::infinity(),
                         double hi = std::numeric_limits<double>::infinity());

}  // namespace fanopair
