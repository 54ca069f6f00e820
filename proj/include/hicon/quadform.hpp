#ifndef HICON_QUADFORM_HPP
#define HICON_QUADFORM_HPP

#include <functional>

#include "hicon/common.hpp"

namespace hicon {

// Quadratic form on 2x2 matrices, Q(G) = 1/2 sum_ijkl C_ijkl G_ij G_kl with a
// major-symmetric coefficient tensor (C_ijkl = C_klij).
struct QuadForm {
    double c[2][2][2][2] = {};

    double operator()(const Mat2& g) const {
        double s = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) s += c[i][j][k][l] * g(i, j) * g(k, l);
        return 0.5 * s;
    }

    // Bilinear form: B(E,F) = sum C_ijkl E_ij F_kl, so Q(G) = B(G,G)/2.
    double bilinear(const Mat2& e, const Mat2& f) const {
        double s = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) s += c[i][j][k][l] * e(i, j) * f(k, l);
        return s;
    }

    // Stress-like contraction: S_ij = sum_kl C_ijkl G_kl (the derivative of Q).
    Mat2 contract(const Mat2& g) const {
        Mat2 s;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) s(i, j) += c[i][j][k][l] * g(k, l);
        return s;
    }

    // Recovers C from an arbitrary quadratic function by polarization.
    static QuadForm from_function(const std::function<double(const Mat2&)>& q);

    // mu |sym G|^2 + lambda/2 (tr G)^2
    static QuadForm isotropic(double lambda, double mu);

    // |sym G|^2 (quadratic expansion of the squared distance to rotations)
    static QuadForm dist_squared() { return isotropic(0.0, 1.0); }

    // Conjugated form G -> Q(R^T G R).
    QuadForm rotated(const Mat2& r) const;

    // Smallest eigenvalue of the form restricted to symmetric matrices.
    double min_symmetric_eigenvalue() const;

    double max_abs_entry() const {
        double m = 0.0;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j)
                for (int k = 0; k < 2; ++k)
                    for (int l = 0; l < 2; ++l) {
                        const double a = c[i][j][k][l] < 0 ? -c[i][j][k][l] : c[i][j][k][l];
                        if (a > m) m = a;
                    }
        return m;
    }
};

// Eigenvalues of a symmetric n x n matrix (tiny dense Jacobi; n <= 4 here).
void symmetric_eigenvalues(double* a, int n, double* eigs);

} // namespace hicon

#endif
