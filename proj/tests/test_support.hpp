#ifndef HICON_TEST_SUPPORT_HPP
#define HICON_TEST_SUPPORT_HPP

#include <cmath>
#include <vector>

#include "hicon/material.hpp"
#include "hicon/mesh.hpp"
#include "hicon/rng.hpp"

namespace hicon::testing {

// Independent oracles live here, not in the library.

// Brute-force distance to SO(2) over an angle grid.
inline double dist_to_rotations_grid(const Mat2& f, int grid = 1000000) {
    double best = 1e300;
    for (int k = 0; k < grid; ++k) {
        const double th = 2.0 * M_PI * k / grid;
        const Mat2 r = Mat2::rotation(th);
        best = std::min(best, ddot(f - r, f - r));
    }
    return std::sqrt(best);
}

// Plain loop-based element quadrature of a quadratic form energy.
inline double quadratic_energy_loop(const std::vector<Element>& elements, const QuadForm& q,
                                    const VectorField& f, ComponentTag region,
                                    bool all_regions) {
    double total = 0.0;
    for (const Element& e : elements) {
        if (!all_regions && e.tag != region) continue;
        Mat2 g;
        for (int a = 0; a < 3; ++a) g += Mat2::outer(f.get(e.n[a]), e.grad[a]);
        total += e.area * q(g);
    }
    return total;
}

// Dense Gaussian elimination with partial pivoting (solver oracle).
inline std::vector<double> dense_solve_oracle(std::vector<double> a, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    std::vector<int> piv(n);
    for (int i = 0; i < n; ++i) piv[i] = i;
    for (int col = 0; col < n; ++col) {
        int best = col;
        for (int r = col + 1; r < n; ++r)
            if (std::abs(a[r * n + col]) > std::abs(a[best * n + col])) best = r;
        if (best != col) {
            for (int c = 0; c < n; ++c) std::swap(a[col * n + c], a[best * n + c]);
            std::swap(b[col], b[best]);
        }
        for (int r = col + 1; r < n; ++r) {
            const double m = a[r * n + col] / a[col * n + col];
            for (int c = col; c < n; ++c) a[r * n + c] -= m * a[col * n + c];
            b[r] -= m * b[col];
        }
    }
    std::vector<double> x(n);
    for (int r = n - 1; r >= 0; --r) {
        double s = b[r];
        for (int c = r + 1; c < n; ++c) s -= a[r * n + c] * x[c];
        x[r] = s / a[r * n + r];
    }
    return x;
}

inline VectorField random_field(const MacroMesh& mesh, Rng& rng, double amp = 1.0,
                                bool clamp_gamma = false) {
    VectorField f(mesh.node_count());
    for (int id = 0; id < mesh.node_count(); ++id) {
        if (clamp_gamma && mesh.node_info()[id].on_gamma) continue;
        f.set(id, Vec2(amp * uniform(rng, -1.0, 1.0), amp * uniform(rng, -1.0, 1.0)));
    }
    return f;
}

inline VectorField interpolate(const MacroMesh& mesh, const std::function<Vec2(Vec2)>& fn) {
    VectorField f(mesh.node_count());
    for (int id = 0; id < mesh.node_count(); ++id) f.set(id, fn(mesh.node_coord(id)));
    return f;
}

} // namespace hicon::testing

#endif
