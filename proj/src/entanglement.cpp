#include "fanopair/entanglement.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace fanopair {

namespace {

constexpr int kBruteForceMax = 64;
constexpr double kNormTolerance = 1e-6;

double weighted_norm(const JointSpectrum& joint) {
    const auto& g = joint.grid;
    double s = 0.0;
    for (std::size_t i = 0; i < g.axis_a.size(); ++i)
        for (std::size_t j = 0; j < g.axis_b.size(); ++j) s += g.weights_a[i] * g.weights_b[j] * joint.intensity(i, j);
    return s;
}

void require_normalized(double norm) {
    if (std::abs(norm - 1.0) > kNormTolerance)
        throw Error(ErrorCode::NotNormalized, "state norm " + std::to_string(norm) + " differs from 1");
}

void require_small(const JointSpectrum& joint) {
    if (joint.grid.axis_a.size() > kBruteForceMax || joint.grid.axis_b.size() > kBruteForceMax)
        throw Error(ErrorCode::GridTooLarge, "quadruple sums need at most 64 points per axis");
}

std::vector<double> rho_a(const JointSpectrum& joint) {
    const auto& g = joint.grid;
    std::vector<double> r(g.axis_a.size(), 0.0);
    for (std::size_t i = 0; i < g.axis_a.size(); ++i)
        for (std::size_t j = 0; j < g.axis_b.size(); ++j) r[i] += g.weights_b[j] * joint.intensity(i, j);
    return r;
}

// 2 [1 - ||M_S M_S^H||_F^2 / N_S^2] for the rows and columns selected by the masks
double windowed_negativity(const JointSpectrum& joint, const std::vector<int>& rows, const std::vector<int>& cols) {
    const auto& g = joint.grid;
    Eigen::MatrixXcd M(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c)
            M(r, c) = joint.amplitude(rows[r], cols[c]) * std::sqrt(g.weights_a[rows[r]] * g.weights_b[cols[c]]);
    const double n = M.squaredNorm();
    if (!(n > 1e-12 * std::max(joint.norm, 1e-300)))
        throw Error(ErrorCode::EmptyWindow, "filtered state carries no intensity");
    const Eigen::MatrixXcd R = M * M.adjoint();
    return 2.0 * (1.0 - R.squaredNorm() / (n * n));
}

std::vector<int> indices_in(const std::vector<double>& axis, double center, double half) {
    std::vector<int> out;
    const double slack = 1e-12 * std::max(1.0, std::abs(center));
    for (std::size_t i = 0; i < axis.size(); ++i)
        if (std::abs(axis[i] - center) <= half + slack) out.push_back(static_cast<int>(i));
    return out;
}

std::vector<int> all_indices(std::size_t n) {
    std::vector<int> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = static_cast<int>(i);
    return out;
}

}  // namespace

JointSpectrum joint_from_kernel(const Eigen::MatrixXcd& d, const std::vector<double>& weights_a,
                                const std::vector<double>& weights_b) {
    if (static_cast<std::size_t>(d.rows()) != weights_a.size() || static_cast<std::size_t>(d.cols()) != weights_b.size())
        throw Error(ErrorCode::InvalidParams, "kernel and weight sizes differ");
    JointSpectrum js;
    for (std::size_t i = 0; i < weights_a.size(); ++i) js.grid.axis_a.push_back(static_cast<double>(i));
    for (std::size_t j = 0; j < weights_b.size(); ++j) js.grid.axis_b.push_back(static_cast<double>(j));
    js.grid.weights_a = weights_a;
    js.grid.weights_b = weights_b;
    js.grid.center = 0.0;
    js.grid.points = static_cast<int>(std::max(weights_a.size(), weights_b.size()));
    js.amplitude = d;
    js.intensity = d.cwiseAbs2();
    js.norm = js.raw_norm = weighted_norm(js);
    js.normalized = std::abs(js.norm - 1.0) < 1e-12;
    return js;
}

Eigen::MatrixXcd weighted_kernel(const JointSpectrum& joint) {
    const auto& g = joint.grid;
    Eigen::MatrixXcd M = joint.amplitude;
    for (Eigen::Index i = 0; i < M.rows(); ++i)
        for (Eigen::Index j = 0; j < M.cols(); ++j) M(i, j) *= std::sqrt(g.weights_a[i] * g.weights_b[j]);
    return M;
}

SchmidtSpectrum schmidt_from_kernel(const Eigen::MatrixXcd& weighted) {
    const double n = weighted.squaredNorm();
    require_normalized(n);
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(weighted);
    const Eigen::VectorXd sv = svd.singularValues() / std::sqrt(n);
    SchmidtSpectrum s;
    if (sv.size() == 0) return s;
    const double cut = 1e-12 * sv(0);
    double p4 = 0.0;
    for (Eigen::Index k = 0; k < sv.size(); ++k) {
        if (sv(k) < cut) break;
        s.lambdas.push_back(sv(k));
        p4 += std::pow(sv(k), 4);
    }
    s.schmidt_number = 1.0 / p4;
    return s;
}

SchmidtSpectrum schmidt(const JointSpectrum& joint) { return schmidt_from_kernel(weighted_kernel(joint)); }

double negativity_schmidt(const SchmidtSpectrum& s) {
    double p4 = 0.0;
    for (double l : s.lambdas) p4 += l * l * l * l;
    return 2.0 * (1.0 - p4);
}

double negativity_trace(const JointSpectrum& joint, Atom side) {
    const Eigen::MatrixXcd M = weighted_kernel(joint);
    const double n = M.squaredNorm();
    require_normalized(n);
    // rho_a = M M^H, rho_b = (M^H M)^T; both have the same purity
    const Eigen::MatrixXcd rho = side == Atom::A ? Eigen::MatrixXcd(M * M.adjoint())
                                                 : Eigen::MatrixXcd((M.adjoint() * M).transpose());
    return 2.0 * (1.0 - rho.squaredNorm() / (n * n));
}

double negativity_bruteforce(const JointSpectrum& joint) {
    require_small(joint);
    const auto& g = joint.grid;
    const auto& d = joint.amplitude;
    const int na = static_cast<int>(g.axis_a.size()), nb = static_cast<int>(g.axis_b.size());
    const double n = weighted_norm(joint);
    require_normalized(n);
    Complex q{0.0};
    for (int a = 0; a < na; ++a)
        for (int ap = 0; ap < na; ++ap) {
            const double waa = g.weights_a[a] * g.weights_a[ap];
            Complex inner{0.0};
            for (int b = 0; b < nb; ++b)
                for (int bp = 0; bp < nb; ++bp) {
                    const Complex term = std::norm(d(a, b)) * std::norm(d(ap, bp)) -
                                         std::conj(d(a, b)) * d(ap, b) * std::conj(d(ap, bp)) * d(a, bp);
                    inner += g.weights_b[b] * g.weights_b[bp] * term;
                }
            q += waa * inner;
        }
    return 2.0 * q.real() / (n * n);
}

DensityValue negativity_density(const JointSpectrum& joint, int i, int ip, int j, int jp) {
    const auto& g = joint.grid;
    const auto& d = joint.amplitude;
    const auto& I = joint.intensity;
    double ra = 0.0, rap = 0.0;
    for (std::size_t b = 0; b < g.axis_b.size(); ++b) {
        ra += g.weights_b[b] * I(i, b);
        rap += g.weights_b[b] * I(ip, b);
    }
    const double den = ra * rap * (I(i, j) + I(ip, j)) * (I(i, jp) + I(ip, jp));
    if (!(den > 1e-300)) return {0.0, true};
    const Complex num = I(i, j) * I(ip, jp) - std::conj(d(i, j)) * d(ip, j) * std::conj(d(ip, jp)) * d(i, jp);
    return {2.0 * num.real() / den, false};
}

double negativity_density_integral(const JointSpectrum& joint) {
    require_small(joint);
    const auto& g = joint.grid;
    const auto& I = joint.intensity;
    const int na = static_cast<int>(g.axis_a.size()), nb = static_cast<int>(g.axis_b.size());
    const double n = weighted_norm(joint);
    require_normalized(n);
    const std::vector<double> ra = rho_a(joint);
    double total = 0.0;
    for (int a = 0; a < na; ++a)
        for (int ap = 0; ap < na; ++ap) {
            double inner = 0.0;
            for (int b = 0; b < nb; ++b)
                for (int bp = 0; bp < nb; ++bp) {
                    const DensityValue v = negativity_density(joint, a, ap, b, bp);
                    if (v.vanishing) continue;
                    inner += g.weights_b[b] * g.weights_b[bp] * (I(a, b) + I(ap, b)) * (I(a, bp) + I(ap, bp)) * v.value;
                }
            total += g.weights_a[a] * g.weights_a[ap] * ra[a] * ra[ap] * inner;
        }
    return total / (n * n);
}

double negativity_filtered_a(const JointSpectrum& joint, double E_a0, double dE) {
    const auto rows = indices_in(joint.grid.axis_a, E_a0, dE);
    if (rows.empty()) throw Error(ErrorCode::EmptyWindow, "no grid node inside the window");
    return windowed_negativity(joint, rows, all_indices(joint.grid.axis_b.size()));
}

double negativity_filtered_ab(const JointSpectrum& joint, double E_a0, double E_b0, double dE) {
    const auto rows = indices_in(joint.grid.axis_a, E_a0, dE);
    const auto cols = indices_in(joint.grid.axis_b, E_b0, dE);
    if (rows.empty() || cols.empty()) throw Error(ErrorCode::EmptyWindow, "no grid node inside the window");
    return windowed_negativity(joint, rows, cols);
}

double negativity_filtered_schmidt(const JointSpectrum& joint, double E_a0, double E_b0, double dE) {
    const auto rows = indices_in(joint.grid.axis_a, E_a0, dE);
    const auto cols = indices_in(joint.grid.axis_b, E_b0, dE);
    if (rows.empty() || cols.empty()) throw Error(ErrorCode::EmptyWindow, "no grid node inside the window");
    const Eigen::MatrixXcd M = weighted_kernel(joint);
    Eigen::MatrixXcd W(rows.size(), cols.size());
    for (std::size_t r = 0; r < rows.size(); ++r)
        for (std::size_t c = 0; c < cols.size(); ++c) W(r, c) = M(rows[r], cols[c]);
    const double n = W.squaredNorm();
    if (!(n > 1e-12 * std::max(joint.norm, 1e-300)))
        throw Error(ErrorCode::EmptyWindow, "filtered state carries no intensity");
    return negativity_schmidt(schmidt_from_kernel(W / std::sqrt(n)));
}

double negativity_filtered_a(const Model& model, double E_a0, double dE, int window_points, int other_points) {
    const EnergyGrid grid = grid_from_rules(gauss_legendre(E_a0 - dE, E_a0 + dE, window_points),
                                            adapted_axis_rule(model, Atom::B, other_points), model.raw.E_L);
    const JointSpectrum js = sample_joint(model, grid);
    return windowed_negativity(js, all_indices(grid.axis_a.size()), all_indices(grid.axis_b.size()));
}

double negativity_filtered_ab(const Model& model, double E_a0, double E_b0, double dE, int window_points) {
    const EnergyGrid grid = grid_from_rules(gauss_legendre(E_a0 - dE, E_a0 + dE, window_points),
                                            gauss_legendre(E_b0 - dE, E_b0 + dE, window_points), model.raw.E_L);
    const JointSpectrum js = sample_joint(model, grid);
    return windowed_negativity(js, all_indices(grid.axis_a.size()), all_indices(grid.axis_b.size()));
}

QubitContinuumResult negativity_qubit_continuum(const std::function<Complex(double)>& d0,
                                                const std::function<Complex(double)>& d1, const Rule& grid) {
    const int G = grid.size();
    std::vector<Complex> a(G), b(G);
    std::vector<double> rho(G);
    double n = 0.0;
    for (int e = 0; e < G; ++e) {
        a[e] = d0(grid.nodes[e]);
        b[e] = d1(grid.nodes[e]);
        rho[e] = std::norm(a[e]) + std::norm(b[e]);
        n += grid.weights[e] * rho[e];
    }
    require_normalized(n);

    // overlaps S_jk = int d_j^* d_k
    Complex s00{0.0}, s01{0.0}, s11{0.0};
    for (int e = 0; e < G; ++e) {
        s00 += grid.weights[e] * std::conj(a[e]) * a[e];
        s01 += grid.weights[e] * std::conj(a[e]) * b[e];
        s11 += grid.weights[e] * std::conj(b[e]) * b[e];
    }
    QubitContinuumResult r;
    r.N_q = 2.0 * (1.0 - (std::norm(s00) + 2.0 * std::norm(s01) + std::norm(s11)) / (n * n));

    r.n_q = Eigen::MatrixXd::Zero(G, G);
    double dens = 0.0;
    for (int e = 0; e < G; ++e)
        for (int f = 0; f < G; ++f) {
            const double rr = rho[e] * rho[f];
            if (!(rr > 1e-300)) continue;
            const Complex ov = std::conj(a[e]) * a[f] + std::conj(b[e]) * b[f];
            r.n_q(e, f) = 1.0 - std::norm(ov) / rr;
            dens += grid.weights[e] * grid.weights[f] * rr * r.n_q(e, f);
        }
    r.N_q_density = 2.0 * dens / (n * n);
    return r;
}

double NegativityReport::max_delta() const {
    double d = std::max(std::abs(N_schmidt - N_trace_a), std::abs(N_schmidt - N_trace_b));
    if (N_bruteforce) d = std::max(d, std::abs(N_schmidt - *N_bruteforce));
    return d;
}

NegativityReport negativity_report(const JointSpectrum& joint, bool with_bruteforce) {
    NegativityReport r;
    const SchmidtSpectrum s = schmidt(joint);
    r.N_schmidt = negativity_schmidt(s);
    r.schmidt_number = s.schmidt_number;
    r.N_trace_a = negativity_trace(joint, Atom::A);
    r.N_trace_b = negativity_trace(joint, Atom::B);
    if (with_bruteforce) r.N_bruteforce = negativity_bruteforce(joint);
    r.points_a = static_cast<int>(joint.grid.axis_a.size());
    r.points_b = static_cast<int>(joint.grid.axis_b.size());
    return r;
}

void write_schmidt_csv(std::ostream& out, const SchmidtSpectrum& s, const std::string& header) {
    out << "# " << header << '\n' << "n,lambda\n";
    char buf[40];
    for (std::size_t k = 0; k < s.lambdas.size(); ++k) {
        std::snprintf(buf, sizeof buf, "%.17g", s.lambdas[k]);
        out << k << ',' << buf << '\n';
    }
}

}  // namespace fanopair
