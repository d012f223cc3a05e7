#include "fanopair/quadrature.hpp"

#include "fanopair/core.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <numeric>

namespace fanopair {

double Rule::sum_weights() const { return std::accumulate(weights.begin(), weights.end(), 0.0); }

Rule uniform_rule(double lo, double hi, int G) {
    if (G < 2 || !(hi > lo)) throw Error(ErrorCode::InvalidParams, "uniform rule needs G >= 2 and hi > lo");
    Rule r;
    r.nodes.resize(G);
    r.weights.assign(G, (hi - lo) / (G - 1));
    for (int i = 0; i < G; ++i) {
        // symmetric construction keeps the axis exactly symmetric about the center
        const double u = (2.0 * i - (G - 1)) / (G - 1);
        r.nodes[i] = 0.5 * (lo + hi) + 0.5 * (hi - lo) * u;
    }
    r.weights.front() *= 0.5;
    r.weights.back() *= 0.5;
    return r;
}

Rule tangent_rule(double center, double scale, int G) {
    if (G < 1 || !(scale > 0.0)) throw Error(ErrorCode::InvalidParams, "tangent rule needs G >= 1, scale > 0");
    Rule r;
    r.nodes.resize(G);
    r.weights.resize(G);
    const double h = kPi / G;
    for (int i = 0; i < G; ++i) {
        const double theta = -0.5 * kPi + (i + 0.5) * h;
        const double c = std::cos(theta);
        r.nodes[i] = center + scale * std::tan(theta);
        r.weights[i] = scale * h / (c * c);
    }
    return r;
}

Rule gauss_legendre(double lo, double hi, int n) {
    if (n < 1) throw Error(ErrorCode::InvalidParams, "Gauss-Legendre needs n >= 1");
    Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k < n; ++k) {
        const double b = k / std::sqrt(4.0 * k * k - 1.0);
        J(k, k - 1) = J(k - 1, k) = b;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
    Rule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int i = 0; i < n; ++i) {
        const double v0 = es.eigenvectors()(0, i);
        r.nodes[i] = mid + half * es.eigenvalues()(i);
        r.weights[i] = 2.0 * v0 * v0 * half;
    }
    return r;
}

Rule cauchy_mixture_rule(const std::vector<CauchyComponent>& components, int G, double lo_cut, double hi_cut) {
    if (!(hi_cut > lo_cut)) throw Error(ErrorCode::InvalidParams, "mixture rule needs lo < hi");
    if (G < 1 || components.empty()) throw Error(ErrorCode::InvalidParams, "mixture rule needs components");
    std::vector<CauchyComponent> comp;
    double total = 0.0;
    for (const auto& c : components) {
        if (!(c.width > 0.0) || !(c.weight > 0.0) || !std::isfinite(c.center)) continue;
        comp.push_back(c);
        total += c.weight;
    }
    if (comp.empty()) throw Error(ErrorCode::InvalidParams, "mixture rule has no usable component");
    for (auto& c : comp) c.weight /= total;

    auto cdf = [&](double E) {
        double s = 0.0;
        for (const auto& c : comp) s += c.weight * (0.5 + std::atan((E - c.center) / c.width) / kPi);
        return s;
    };
    auto pdf = [&](double E) {
        double s = 0.0;
        for (const auto& c : comp) {
            const double z = (E - c.center) / c.width;
            s += c.weight / (kPi * c.width * (1.0 + z * z));
        }
        return s;
    };
    // Bracket: every component places mass u within center +- width*tan(pi(u-1/2)).
    double lo_all = comp.front().center, hi_all = comp.front().center;
    for (const auto& c : comp) {
        lo_all = std::min(lo_all, c.center);
        hi_all = std::max(hi_all, c.center);
    }

    Rule r;
    r.nodes.resize(G);
    r.weights.resize(G);
    const double u_lo = std::isfinite(lo_cut) ? cdf(lo_cut) : 0.0;
    const double u_hi = std::isfinite(hi_cut) ? cdf(hi_cut) : 1.0;
    const double mass = u_hi - u_lo;
    if (!(mass > 0.0)) throw Error(ErrorCode::InvalidParams, "mixture rule interval carries no mass");
    for (int m = 0; m < G; ++m) {
        const double u = u_lo + (m + 0.5) / G * mass;
        const double t = std::tan(kPi * (u - 0.5));
        double lo = lo_all, hi = hi_all;
        for (const auto& c : comp) {
            lo = std::min(lo, c.center + c.width * t);
            hi = std::max(hi, c.center + c.width * t);
        }
        lo -= 1e-12 * (1.0 + std::abs(lo));
        hi += 1e-12 * (1.0 + std::abs(hi));
        lo = std::max(lo, lo_cut);
        hi = std::min(hi, hi_cut);
        // safeguarded Newton: bisect whenever the step leaves the bracket
        // or fails to halve the previous step
        double E = 0.5 * (lo + hi);
        double step_old = hi - lo;
        for (int it = 0; it < 200; ++it) {
            const double f = cdf(E) - u;
            if (f == 0.0) break;
            if (f > 0.0) hi = E;
            else lo = E;
            const double step = f / pdf(E);
            double next = E - step;
            if (!(next > lo && next < hi) || std::abs(2.0 * step) > std::abs(step_old)) {
                next = 0.5 * (lo + hi);
                step_old = 0.5 * (hi - lo);
            } else {
                step_old = std::abs(step);
            }
            const bool done = std::abs(next - E) <= 1e-15 * (1.0 + std::abs(E));
            E = next;
            if (done || hi - lo <= 1e-15 * (1.0 + std::abs(E))) break;
        }
        r.nodes[m] = E;
        r.weights[m] = mass / (G * pdf(E));
    }
    return r;
}

}  // namespace fanopair
