#include "support.hpp"

#include <Eigen/Eigenvalues>
#include <doctest.h>

#include <algorithm>
#include <sstream>

using namespace fanopair;
using namespace fanopair::testing;

namespace {

// sorted by (Re, Im) for set comparison
std::vector<Complex> sorted(std::vector<Complex> v) {
    std::sort(v.begin(), v.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return v;
}

double set_distance(const std::vector<Complex>& a, const std::vector<Complex>& b) {
    // greedy matching is enough for well-separated spectra
    std::vector<bool> used(b.size(), false);
    double worst = 0.0;
    for (Complex x : a) {
        double best = 1e300;
        std::size_t at = 0;
        for (std::size_t j = 0; j < b.size(); ++j)
            if (!used[j] && std::abs(x - b[j]) < best) best = std::abs(x - b[j]), at = j;
        used[at] = true;
        worst = std::max(worst, best);
    }
    return worst;
}

}  // namespace

TEST_CASE("no pump, no dipole-dipole coupling: A is diagonal in the detunings") {
    RawParams r;
    r.E_a0 = 1.3;
    r.E_b0 = 0.6;
    r.V_a = 0.4;
    r.V_b = 0.5;
    r.mut_a = r.mut_b = 0.2;
    r.alpha_L = 0.0;
    const ModelMatrices m = build_structure(r);
    Mat4 expect = Mat4::Zero();
    expect.diagonal() << 0.0, 0.3, -0.4, -0.1;
    CHECK(max_abs(m.A - expect) < 1e-15);
    // B carries only V
    for (Atom j : {Atom::A, Atom::B})
        for (int i = 0; i < 4; ++i)
            for (int k = 0; k < 2; ++k) {
                const Complex b = m.B(j)(i, k);
                CHECK((b == 0.0 || std::abs(b - r.V(j)) < 1e-15));
            }
}

TEST_CASE("zero couplings: Abar = A and L = -K") {
    RawParams r;
    r.E_a0 = 1.2;
    const ModelMatrices m = build_structure(r);
    CHECK(max_abs(m.Abar - m.A) == 0.0);
    CHECK(max_abs(m.L_a + m.K_a) == 0.0);
    CHECK(max_abs(m.L_b + m.K_b) == 0.0);
}

TEST_CASE("exact identities L = -K + i pi I I^H, Abar = A - i pi sum B B^H") {
    std::mt19937_64 rng(11);
    for (int n = 0; n < 50; ++n) {
        const ModelMatrices m = build_structure(random_raw(rng));
        for (Atom j : {Atom::A, Atom::B})
            CHECK(max_abs(m.L(j) - (-m.K(j) + kI * kPi * m.I(j) * m.I(j).adjoint())) < 1e-15);
        CHECK(max_abs(m.Abar - (m.A - kI * kPi * (m.B_a * m.B_a.adjoint() + m.B_b * m.B_b.adjoint()))) < 1e-15);
        CHECK(max_abs(m.A - m.A.adjoint()) < 1e-15);
    }
}

TEST_CASE("eig_L: no pump gives {0, -dE0 + i pi |V|^2}") {
    RawParams r;
    r.E_a0 = 1.4;
    r.V_a = 0.5;
    r.V_b = 0.5;
    r.alpha_L = 0.0;
    const ModelMatrices m = build_structure(r);
    const Eig2 e = eig_L(m.L_a);
    const Complex nontrivial = -0.4 + kI * kPi * 0.25;
    CHECK(std::abs(e.lambda_1 - nontrivial) < 1e-14);
    CHECK(std::abs(e.lambda_2) < 1e-14);
}

TEST_CASE("eig_L degenerate non-scalar matrix is reported") {
    Mat2 J;
    J << 1.0, 1.0, 0.0, 1.0;  // Jordan block
    CHECK_THROWS_AS(eig_L(J), Error);
    const Eig2 s = eig_L(Mat2::Identity() * Complex(2.0, 0.5));
    CHECK(max_abs(s.L1 + s.L2 - Mat2::Identity()) == 0.0);
}

TEST_CASE("eig_Abar: diagonal and Hermitian inputs") {
    Mat4 D = Mat4::Zero();
    D.diagonal() << Complex(1, -1), Complex(2, -0.5), Complex(-1, -2), Complex(0.5, 0);
    const Eig4 e = eig_Abar(D);
    for (int k = 0; k < 4; ++k) {
        bool found = false;
        for (int i = 0; i < 4; ++i) found = found || std::abs(e.Lambda[k] - D(i, i)) < 1e-14;
        CHECK(found);
        CHECK(std::abs(std::abs(e.P.col(k).cwiseAbs().maxCoeff()) - 1.0) < 1e-14);
    }

    std::mt19937_64 rng(3);
    const ModelMatrices m = build_structure(random_raw(rng));
    const Eig4 h = eig_Abar(m.A);
    for (Complex l : h.Lambda) CHECK(std::abs(l.imag()) < 1e-12);
}

TEST_CASE("Fig. 2 set: Abar non-normal, all Im Lambda < 0") {
    const ModelMatrices m = build_structure(fig2());
    CHECK(max_abs(m.Abar * m.Abar.adjoint() - m.Abar.adjoint() * m.Abar) > 1e-3);
    const Eig4 e = eig_Abar(m.Abar);
    for (Complex l : e.Lambda) CHECK(l.imag() < 0.0);
}

TEST_CASE("random physical sets: projector algebra, signs, residuals, agreement with a generic solver") {
    std::mt19937_64 rng(2024);
    for (int n = 0; n < 1000; ++n) {
        const RawParams raw = random_raw(rng);
        const ModelMatrices m = build_structure(raw);
        for (Atom j : {Atom::A, Atom::B}) {
            const Eig2 e = eig_L(m.L(j));
            const Mat2 I2 = Mat2::Identity();
            CHECK(max_abs(e.L1 + e.L2 - I2) < 1e-10);
            CHECK(max_abs(e.L1 * e.L1 - e.L1) < 1e-10);
            CHECK(max_abs(e.L2 * e.L2 - e.L2) < 1e-10);
            CHECK(max_abs(e.L1 * e.L2) < 1e-10);
            CHECK(max_abs(e.lambda_1 * e.L1 + e.lambda_2 * e.L2 - m.L(j)) < 1e-10);
            CHECK(e.lambda_1.imag() >= -1e-12);
            CHECK(e.lambda_2.imag() >= -1e-12);
            CHECK(e.lambda_1.imag() >= e.lambda_2.imag());
            CHECK(std::abs(e.lambda_1 + e.lambda_2 - m.L(j).trace()) < 1e-10);

            Eigen::ComplexEigenSolver<Mat2> ref(m.L(j));
            CHECK(set_distance({e.lambda_1, e.lambda_2}, {ref.eigenvalues()(0), ref.eigenvalues()(1)}) < 1e-12);
        }
        const Eig4 e = eig_Abar(m.Abar);
        Complex tr{0.0};
        for (int k = 0; k < 4; ++k) {
            tr += e.Lambda[k];
            const Vec4 p = e.P.col(k);
            CHECK((m.Abar * p - e.Lambda[k] * p).norm() / p.norm() < 1e-10);
            CHECK(e.Lambda[k].imag() <= 1e-12);
        }
        CHECK(std::abs(tr - m.Abar.trace()) < 1e-10);
        CHECK(max_abs(e.P * e.Pinv - Mat4::Identity()) < 1e-10);

        Eigen::ComplexEigenSolver<Mat4> ref(m.Abar);
        std::vector<Complex> ours(e.Lambda.begin(), e.Lambda.end()), theirs;
        for (int k = 0; k < 4; ++k) theirs.push_back(ref.eigenvalues()(k));
        CHECK(set_distance(sorted(ours), sorted(theirs)) < 1e-9);
    }
}

TEST_CASE("dump_matrices writes every block") {
    const Model m = make_model(fig2(1.0, 0.5));
    std::ostringstream out;
    dump_matrices(out, m.mats, m.eig_a, m.eig_b, m.eig4);
    for (const char* key : {"A", "B_a", "B_b", "K_a", "L_b", "Abar"}) CHECK(out.str().find(key) != std::string::npos);
}
