// Times the OpenMP kernels against the serial reference path and verifies
// that both produce bitwise-identical results (the blocked reductions share
// one summation tree).
#include <chrono>
#include <cstdio>
#include <string>
#include <vector>

#include "hicon/assemble.hpp"
#include "hicon/energy.hpp"
#include "hicon/material.hpp"
#include "hicon/mesh.hpp"
#include "hicon/parallel.hpp"
#include "hicon/rng.hpp"
#include "hicon/twoscale.hpp"

using namespace hicon;

namespace {

template <class F>
double time_best_of(int reps, F&& fn) {
    double best = 1e300;
    for (int r = 0; r < reps; ++r) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        const double dt =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        best = std::min(best, dt);
    }
    return best;
}

struct BenchRow {
    std::string name;
    double serial = 0.0, parallel = 0.0;
    bool identical = true;
};

} // namespace

int main(int argc, char** argv) {
    int n_cells = 16, m = 8, reps = 3;
    if (argc > 1) n_cells = std::atoi(argv[1]);
    if (argc > 2) m = std::atoi(argv[2]);
    if (argc > 3) reps = std::atoi(argv[3]);

    const CompositeGeometry geom = CompositeGeometry::unit_square(n_cells, 0.5, {});
    const MacroMesh mesh(geom, m);
    const Laws laws{builtin_dist_squared_law(), builtin_dist_squared_law()};

    Rng rng(7);
    VectorField phi(mesh.node_count());
    for (int id = 0; id < mesh.node_count(); ++id)
        if (!mesh.node_info()[id].on_gamma)
            phi.set(id, Vec2(0.01 * uniform(rng, -1, 1), 0.01 * uniform(rng, -1, 1)));

    std::printf("mesh: %d nodes, %zu elements, %d thread(s)\n", mesh.node_count(),
                mesh.elements().size(), par::thread_count());

    std::vector<BenchRow> rows;
    auto bench = [&](const std::string& name, auto&& fn) {
        BenchRow row;
        row.name = name;
        par::set_mode(par::Mode::Serial);
        auto a = fn();
        row.serial = time_best_of(reps, [&] { fn(); });
        par::set_mode(par::Mode::OpenMP);
        auto b = fn();
        row.parallel = time_best_of(reps, [&] { fn(); });
        row.identical = a == b;
        rows.push_back(row);
    };

    bench("elastic energy", [&] { return elastic_energy(mesh, laws, phi); });
    bench("stiffness assembly", [&] {
        return assemble_stiffness(mesh.elements(), mesh.node_count(), laws.w1.quad_form).val;
    });
    const CsrMatrix k = assemble_stiffness(mesh.elements(), mesh.node_count(), laws.w1.quad_form);
    bench("csr matvec x32", [&] {
        std::vector<double> y = phi.v;
        for (int i = 0; i < 32; ++i) y = k.multiply(y == phi.v ? phi.v : y);
        return y;
    });
    bench("gradient field", [&] { return gradient_at_quadrature(mesh.elements(), phi).size(); });
    bench("unfold isometry", [&] { return l2_norm(unfold(mesh, phi)); });
    bench("dist-to-rotations sweep", [&] {
        const auto grads = gradient_at_quadrature(mesh.elements(), phi);
        return par::reduce_sum(grads.size(), [&](std::size_t i) {
            return dist_to_rotations(Mat2::identity() + grads[i]).distance;
        });
    });

    std::printf("%-26s %12s %12s %9s %s\n", "kernel", "serial [s]", "openmp [s]", "speedup",
                "bitwise");
    for (const BenchRow& r : rows)
        std::printf("%-26s %12.6f %12.6f %8.2fx %s\n", r.name.c_str(), r.serial, r.parallel,
                    r.serial / r.parallel, r.identical ? "yes" : "NO");

    bool all_same = true;
    for (const BenchRow& r : rows) all_same = all_same && r.identical;
    return all_same ? 0 : 1;
}
