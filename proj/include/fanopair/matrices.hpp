#pragma once

#include "fanopair/params.hpp"

#include <array>
#include <iosfwd>

namespace fanopair {

// Coefficient order of the discrete block: (c00, c10, c01, c11), first
// index atom a. The two components of d_a carry the state of atom b and
// vice versa.
struct ModelMatrices {
    Mat4 A;
    Mat42 B_a, B_b;
    Mat2 K_a, K_b;
    Vec2 I_a, I_b;
    Mat2 L_a, L_b;
    Mat4 Abar;

    const Mat42& B(Atom j) const { return j == Atom::A ? B_a : B_b; }
    const Mat2& K(Atom j) const { return j == Atom::A ? K_a : K_b; }
    const Vec2& I(Atom j) const { return j == Atom::A ? I_a : I_b; }
    const Mat2& L(Atom j) const { return j == Atom::A ? L_a : L_b; }
};

struct Eig2 {
    Complex lambda_1, lambda_2;  // Im lambda_1 >= Im lambda_2
    Mat2 L1, L2;

    Complex lambda(int k) const { return k == 0 ? lambda_1 : lambda_2; }
    const Mat2& projector(int k) const { return k == 0 ? L1 : L2; }
};

struct Eig4 {
    std::array<Complex, 4> Lambda;
    Mat4 P;     // unit-norm right eigenvectors as columns
    Mat4 Pinv;  // rows are the dual vectors
    double condition = 1.0;
};

ModelMatrices build_structure(const RawParams& raw);

/// Closed-form eigenvalues and spectral projectors of a 2x2 matrix.
///
/// A scalar matrix is split along the coordinate axes; any other matrix
/// with |lambda_1 - lambda_2| < tol * max|lambda| throws DegenerateEigenvalues.
Eig2 eig_L(const Mat2& L, double tol = 1e-10);

/// Eigenvalues of a 4x4 complex matrix by Hessenberg reduction and
/// Wilkinson-shifted QR sweeps.
std::array<Complex, 4> eigenvalues_qr(const Mat4& M);

/// Full eigen-system of Abar. Repeated eigenvalues are accepted when the
/// matrix stays diagonalizable; NearDefectiveMatrix when cond(P) > max_condition.
Eig4 eig_Abar(const Mat4& Abar, double max_condition = 1e8);

void dump_matrices(std::ostream& out, const ModelMatrices& m, const Eig2& eig_a, const Eig2& eig_b,
                   const Eig4& eig4);

}  // namespace fanopair
