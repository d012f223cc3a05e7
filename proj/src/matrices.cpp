#include "fanopair/matrices.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <vector>

namespace fanopair {

ModelMatrices build_structure(const RawParams& raw) {
    using std::conj;
    const Complex al = raw.alpha_L;
    const Complex pa = raw.mu_a * al, pb = raw.mu_b * al;     // mu_j alpha
    const Complex ta = raw.mut_a * al, tb = raw.mut_b * al;   // mut_j alpha
    const double ea = raw.dE_a0(), eb = raw.dE_b0();

    ModelMatrices m;
    m.A << 0.0, conj(pa), conj(pb), 0.0,
           pa, ea, conj(raw.J_ab), conj(pb),
           pb, raw.J_ab, eb, conj(pa),
           0.0, pb, pa, ea + eb;

    m.B_a << conj(ta), 0.0,
             conj(raw.V_a), 0.0,
             conj(raw.J_a), conj(ta),
             0.0, conj(raw.V_a);
    m.B_b << conj(tb), 0.0,
             conj(raw.J_b), conj(tb),
             conj(raw.V_b), 0.0,
             0.0, conj(raw.V_b);

    m.K_a << 0.0, conj(pa), pa, ea;
    m.K_b << 0.0, conj(pb), pb, eb;
    m.I_a << conj(ta), conj(raw.V_a);
    m.I_b << conj(tb), conj(raw.V_b);

    m.L_a = -m.K_a + kI * kPi * m.I_a * m.I_a.adjoint();
    m.L_b = -m.K_b + kI * kPi * m.I_b * m.I_b.adjoint();
    m.Abar = m.A - kI * kPi * (m.B_a * m.B_a.adjoint() + m.B_b * m.B_b.adjoint());
    return m;
}

Eig2 eig_L(const Mat2& L, double tol) {
    const Complex a1 = 0.5 * L.trace();
    const Complex a2 = L.determinant();
    const Complex root = std::sqrt(a1 * a1 - a2);
    Complex l1 = a1 + root, l2 = a1 - root;
    if (l2.imag() > l1.imag()) std::swap(l1, l2);

    Eig2 e;
    e.lambda_1 = l1;
    e.lambda_2 = l2;
    const double scale = std::max(std::abs(l1), std::abs(l2));
    if (std::abs(l1 - l2) <= tol * scale || scale == 0.0) {
        const double off = std::abs(L(0, 1)) + std::abs(L(1, 0)) + std::abs(L(0, 0) - L(1, 1));
        if (off > tol * std::max(scale, 1e-300) && scale > 0.0)
            throw Error(ErrorCode::DegenerateEigenvalues,
                        "2x2 damped matrix has coinciding eigenvalues; perturb the detunings");
        e.lambda_1 = L(0, 0);
        e.lambda_2 = L(1, 1);
        e.L1 << 1.0, 0.0, 0.0, 0.0;
        e.L2 << 0.0, 0.0, 0.0, 1.0;
        return e;
    }
    e.L1 = (L - l2 * Mat2::Identity()) / (l1 - l2);
    e.L2 = Mat2::Identity() - e.L1;
    return e;
}

namespace {

void hessenberg(Mat4& H) {
    for (int k = 0; k < 2; ++k) {
        Eigen::Matrix<Complex, Eigen::Dynamic, 1> x = H.block(k + 1, k, 3 - k, 1);
        const double xnorm = x.norm();
        if (xnorm == 0.0) continue;
        const Complex x0 = x(0);
        const Complex phase = std::abs(x0) > 0.0 ? x0 / std::abs(x0) : Complex{1.0};
        Eigen::Matrix<Complex, Eigen::Dynamic, 1> v = x;
        v(0) += phase * xnorm;
        const double vn = v.norm();
        if (vn == 0.0) continue;
        v /= vn;
        // H <- (1 - 2vv^H) H (1 - 2vv^H) on the trailing block
        auto rows = H.block(k + 1, 0, 3 - k, 4);
        rows -= 2.0 * v * (v.adjoint() * rows);
        auto cols = H.block(0, k + 1, 4, 3 - k);
        cols -= 2.0 * (cols * v) * v.adjoint();
    }
}

}  // namespace

std::array<Complex, 4> eigenvalues_qr(const Mat4& M) {
    Mat4 H = M;
    hessenberg(H);
    const double eps = std::numeric_limits<double>::epsilon();
    const double hnorm = std::max(H.norm(), std::numeric_limits<double>::min());

    int hi = 3;
    int iter = 0;
    int total = 0;
    while (hi > 0) {
        int l = hi;
        while (l > 0) {
            const double sub = std::abs(H(l, l - 1));
            double ref = std::abs(H(l, l)) + std::abs(H(l - 1, l - 1));
            if (ref == 0.0) ref = hnorm;
            if (sub <= eps * ref) {
                H(l, l - 1) = 0.0;
                break;
            }
            --l;
        }
        if (l == hi) {
            --hi;
            iter = 0;
            continue;
        }
        if (++total > 400)
            throw Error(ErrorCode::NearDefectiveMatrix, "QR iteration did not converge");
        ++iter;

        Complex mu;
        if (iter % 11 == 10) {
            mu = H(hi, hi) + 0.75 * std::abs(H(hi, hi - 1));
        } else {
            const Complex a = H(hi - 1, hi - 1), b = H(hi - 1, hi);
            const Complex c = H(hi, hi - 1), d = H(hi, hi);
            const Complex half = 0.5 * (a - d);
            const Complex disc = std::sqrt(half * half + b * c);
            const Complex m1 = 0.5 * (a + d) + disc, m2 = 0.5 * (a + d) - disc;
            mu = std::abs(m1 - d) < std::abs(m2 - d) ? m1 : m2;
        }

        for (int k = l; k <= hi; ++k) H(k, k) -= mu;
        std::array<double, 4> cs{};
        std::array<Complex, 4> sn{};
        for (int k = l; k < hi; ++k) {
            const Complex x = H(k, k), y = H(k + 1, k);
            const double r = std::hypot(std::abs(x), std::abs(y));
            double c;
            Complex s;
            if (r == 0.0) {
                c = 1.0;
                s = 0.0;
            } else if (std::abs(x) == 0.0) {
                c = 0.0;
                s = 1.0;
            } else {
                c = std::abs(x) / r;
                s = (x / std::abs(x)) * std::conj(y) / r;
            }
            cs[k] = c;
            sn[k] = s;
            for (int j = l; j <= hi; ++j) {
                const Complex h1 = H(k, j), h2 = H(k + 1, j);
                H(k, j) = c * h1 + s * h2;
                H(k + 1, j) = -std::conj(s) * h1 + c * h2;
            }
        }
        for (int k = l; k < hi; ++k) {
            const double c = cs[k];
            const Complex s = sn[k];
            for (int i = l; i <= hi; ++i) {
                const Complex h1 = H(i, k), h2 = H(i, k + 1);
                H(i, k) = h1 * c + h2 * std::conj(s);
                H(i, k + 1) = -h1 * s + h2 * c;
            }
        }
        for (int k = l; k <= hi; ++k) H(k, k) += mu;
    }
    return {H(0, 0), H(1, 1), H(2, 2), H(3, 3)};
}

Eig4 eig_Abar(const Mat4& Abar, double max_condition) {
    std::array<Complex, 4> lam = eigenvalues_qr(Abar);
    std::sort(lam.begin(), lam.end(), [](Complex x, Complex y) {
        return x.imag() != y.imag() ? x.imag() > y.imag() : x.real() < y.real();
    });
    const double scale = std::max(Abar.norm(), 1e-300);
    const double cluster_tol = 1e-9 * scale;

    Eig4 e;
    e.Lambda = lam;
    std::vector<bool> done(4, false);
    for (int k = 0; k < 4; ++k) {
        if (done[k]) continue;
        std::vector<int> members{k};
        for (int j = k + 1; j < 4; ++j)
            if (!done[j] && std::abs(lam[j] - lam[k]) < cluster_tol) members.push_back(j);
        Complex center{0.0};
        for (int j : members) center += lam[j];
        center /= static_cast<double>(members.size());

        Eigen::JacobiSVD<Mat4> svd(Abar - center * Mat4::Identity(), Eigen::ComputeFullV);
        const int m = static_cast<int>(members.size());
        const auto& sv = svd.singularValues();
        if (sv(4 - m) > 1e-7 * scale)
            throw Error(ErrorCode::NearDefectiveMatrix,
                        "repeated eigenvalue without a full eigenspace (defective matrix)");
        for (int i = 0; i < m; ++i) {
            e.P.col(members[i]) = svd.matrixV().col(3 - i);
            done[members[i]] = true;
        }
    }
    for (int k = 0; k < 4; ++k) e.P.col(k).normalize();

    Eigen::JacobiSVD<Mat4> psvd(e.P);
    const auto& ps = psvd.singularValues();
    e.condition = ps(3) > 0.0 ? ps(0) / ps(3) : std::numeric_limits<double>::infinity();
    if (!(e.condition <= max_condition))
        throw Error(ErrorCode::NearDefectiveMatrix,
                    "eigenvector matrix is ill-conditioned; apply a small symmetric detuning");
    e.Pinv = e.P.fullPivLu().inverse();
    return e;
}

namespace {

template <class M>
void print_matrix(std::ostream& out, const char* name, const M& m) {
    out << name << ":\n";
    for (int i = 0; i < m.rows(); ++i) {
        out << "  ";
        for (int j = 0; j < m.cols(); ++j)
            out << std::setw(26) << format_complex(m(i, j));
        out << '\n';
    }
}

}  // namespace

void dump_matrices(std::ostream& out, const ModelMatrices& m, const Eig2& eig_a, const Eig2& eig_b,
                   const Eig4& eig4) {
    print_matrix(out, "A", m.A);
    print_matrix(out, "B_a", m.B_a);
    print_matrix(out, "B_b", m.B_b);
    print_matrix(out, "K_a", m.K_a);
    print_matrix(out, "K_b", m.K_b);
    print_matrix(out, "I_a", m.I_a);
    print_matrix(out, "I_b", m.I_b);
    print_matrix(out, "L_a", m.L_a);
    print_matrix(out, "L_b", m.L_b);
    print_matrix(out, "Abar", m.Abar);
    for (const auto& [name, e] : {std::pair{"a", &eig_a}, std::pair{"b", &eig_b}}) {
        out << "lambda_" << name << " = " << format_complex(e->lambda_1) << "  "
            << format_complex(e->lambda_2) << '\n';
        print_matrix(out, "  projector 1", e->L1);
        print_matrix(out, "  projector 2", e->L2);
    }
    out << "Lambda =";
    for (Complex l : eig4.Lambda) out << "  " << format_complex(l);
    out << "\ncond(P) = " << eig4.condition << '\n';
    print_matrix(out, "P", eig4.P);
    print_matrix(out, "Pinv", eig4.Pinv);
}

}  // namespace fanopair
