#include "hicon/quadform.hpp"

#include <algorithm>
#include <cmath>

namespace hicon {

QuadForm QuadForm::from_function(const std::function<double(const Mat2&)>& q) {
    QuadForm out;
    Mat2 basis[2][2];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) basis[i][j](i, j) = 1.0;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    // C_ijkl = Q(E+F) - Q(E) - Q(F) for basis matrices E, F.
                    Mat2 s = basis[i][j] + basis[k][l];
                    out.c[i][j][k][l] = q(s) - q(basis[i][j]) - q(basis[k][l]);
                }
    return out;
}

QuadForm QuadForm::isotropic(double lambda, double mu) {
    QuadForm out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    double v = 0.0;
                    if (i == j && k == l) v += lambda;
                    if (i == k && j == l) v += mu;
                    if (i == l && j == k) v += mu;
                    out.c[i][j][k][l] = v;
                }
    return out;
}

QuadForm QuadForm::rotated(const Mat2& r) const {
    QuadForm out;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l) {
                    double s = 0.0;
                    for (int a = 0; a < 2; ++a)
                        for (int b = 0; b < 2; ++b)
                            for (int p = 0; p < 2; ++p)
                                for (int q = 0; q < 2; ++q)
                                    s += c[a][b][p][q] * r(a, i) * r(b, j) * r(p, k) * r(q, l);
                    out.c[i][j][k][l] = s;
                }
    return out;
}

void symmetric_eigenvalues(double* a, int n, double* eigs) {
    // Cyclic Jacobi on the packed row-major matrix.
    auto at = [&](int i, int j) -> double& { return a[i * n + j]; };
    for (int sweep = 0; sweep < 64; ++sweep) {
        double off = 0.0;
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) off += at(i, j) * at(i, j);
        if (off < 1e-30) break;
        for (int p = 0; p < n; ++p)
            for (int q = p + 1; q < n; ++q) {
                if (std::abs(at(p, q)) < 1e-300) continue;
                const double theta = (at(q, q) - at(p, p)) / (2.0 * at(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double cs = 1.0 / std::sqrt(t * t + 1.0);
                const double sn = t * cs;
                for (int k = 0; k < n; ++k) {
                    const double akp = at(k, p), akq = at(k, q);
                    at(k, p) = cs * akp - sn * akq;
                    at(k, q) = sn * akp + cs * akq;
                }
                for (int k = 0; k < n; ++k) {
                    const double apk = at(p, k), aqk = at(q, k);
                    at(p, k) = cs * apk - sn * aqk;
                    at(q, k) = sn * apk + cs * aqk;
                }
            }
    }
    for (int i = 0; i < n; ++i) eigs[i] = at(i, i);
    std::sort(eigs, eigs + n);
}

double QuadForm::min_symmetric_eigenvalue() const {
    // Basis of symmetric matrices: e11, e22, (e12 + e21)/sqrt(2).
    const double s = 1.0 / std::sqrt(2.0);
    Mat2 basis[3] = {Mat2(1, 0, 0, 0), Mat2(0, 0, 0, 1), Mat2(0, s, s, 0)};
    double m[9];
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m[i * 3 + j] = bilinear(basis[i], basis[j]);
    double eigs[3];
    symmetric_eigenvalues(m, 3, eigs);
    // bilinear(G,G) = 2 Q(G); report in units of Q.
    return 0.5 * eigs[0];
}

} // namespace hicon
