#include "hicon/twoscale.hpp"

#include <cmath>

#include "hicon/assemble.hpp"
#include "hicon/parallel.hpp"

namespace hicon {

namespace {

void check_aligned(const MacroMesh& mesh) {
    require(mesh.per_cell() % 2 == 0,
            "unfold: mesh must have an even element count per cell side");
}

// Local triangulation of one cell matches the macro union-jack split because
// the per-cell element count is even.
double local_area(int m) { return 1.0 / (2.0 * m * m); }

} // namespace

UnfoldedNodal unfold(const MacroMesh& mesh, const VectorField& f) {
    check_aligned(mesh);
    const CompositeGeometry& geom = mesh.geom();
    const int m = mesh.per_cell();
    UnfoldedNodal out;
    out.eps = geom.epsilon();
    out.m = m;
    out.cells = geom.covering_cells();
    out.values.assign(out.cells.size(), {});
    par::for_each(out.cells.size(), [&](std::size_t k) {
        const CellIndex c = out.cells[k];
        std::vector<double>& v = out.values[k];
        v.resize(2 * (m + 1) * (m + 1));
        for (int lj = 0; lj <= m; ++lj)
            for (int li = 0; li <= m; ++li) {
                const int id = mesh.node_id(c.i * m + li, c.j * m + lj);
                v[2 * (lj * (m + 1) + li)] = f.v[2 * id];
                v[2 * (lj * (m + 1) + li) + 1] = f.v[2 * id + 1];
            }
    });
    return out;
}

UnfoldedNodal unfold_product(const MacroMesh& mesh, const VectorField& f,
                             const VectorField& g) {
    UnfoldedNodal out = unfold(mesh, f);
    const UnfoldedNodal ug = unfold(mesh, g);
    for (std::size_t k = 0; k < out.values.size(); ++k)
        for (std::size_t i = 0; i < out.values[k].size(); ++i)
            out.values[k][i] *= ug.values[k][i];
    return out;
}

UnfoldedElems unfold_elementwise(const MacroMesh& mesh, const std::vector<Mat2>& per_element) {
    check_aligned(mesh);
    const CompositeGeometry& geom = mesh.geom();
    const int m = mesh.per_cell();
    const int nx_el = mesh.nodes_x() - 1;
    UnfoldedElems out;
    out.eps = geom.epsilon();
    out.m = m;
    out.cells = geom.covering_cells();
    out.values.assign(out.cells.size(), {});
    par::for_each(out.cells.size(), [&](std::size_t k) {
        const CellIndex c = out.cells[k];
        std::vector<Mat2>& v = out.values[k];
        v.resize(2 * m * m);
        for (int lj = 0; lj < m; ++lj)
            for (int li = 0; li < m; ++li)
                for (int t = 0; t < 2; ++t)
                    v[2 * (lj * m + li) + t] =
                        per_element[2 * ((c.j * m + lj) * nx_el + c.i * m + li) + t];
    });
    return out;
}

UnfoldedElems unfold_gradients(const MacroMesh& mesh, const VectorField& f) {
    return unfold_elementwise(mesh, gradient_at_quadrature(mesh.elements(), f));
}

double l2_norm(const UnfoldedNodal& u) {
    // mass integral on the local patch; triangle list mirrors the cell split
    const int m = u.m;
    const double area = local_area(m);
    const double e2 = u.eps * u.eps;
    const double total = par::reduce_sum(u.cells.size(), [&](std::size_t k) {
        double s = 0.0;
        for (int lj = 0; lj < m; ++lj)
            for (int li = 0; li < m; ++li) {
                int corner[4][2] = {{li, lj}, {li + 1, lj}, {li + 1, lj + 1}, {li, lj + 1}};
                static const int kEven[2][3] = {{0, 1, 2}, {0, 2, 3}};
                static const int kOdd[2][3] = {{0, 1, 3}, {1, 2, 3}};
                const bool even = (li + lj) % 2 == 0;
                for (int t = 0; t < 2; ++t) {
                    const int* idx = even ? kEven[t] : kOdd[t];
                    Vec2 sum;
                    double diag = 0.0;
                    for (int a = 0; a < 3; ++a) {
                        const Vec2 ua(u.get_comp(k, corner[idx[a]][0], corner[idx[a]][1], 0),
                                      u.get_comp(k, corner[idx[a]][0], corner[idx[a]][1], 1));
                        sum += ua;
                        diag += dot(ua, ua);
                    }
                    s += area / 12.0 * (dot(sum, sum) + diag);
                }
            }
        return e2 * s;
    });
    return std::sqrt(total);
}

double l2_norm(const UnfoldedElems& u) {
    const double area = local_area(u.m);
    const double e2 = u.eps * u.eps;
    const double total = par::reduce_sum(u.cells.size(), [&](std::size_t k) {
        double s = 0.0;
        for (const Mat2& g : u.values[k]) s += area * ddot(g, g);
        return e2 * s;
    });
    return std::sqrt(total);
}

TwoScaleDistances two_scale_distance(const MacroMesh& mesh, const Splitting& s,
                                     const SampledLimit& limit) {
    check_aligned(mesh);
    const CompositeGeometry& geom = mesh.geom();
    const int m = mesh.per_cell();
    require(limit.cell && limit.cell->resolution() == m,
            "two_scale_distance: incompatible cell resolution");
    const auto cells = geom.covering_cells();
    require(limit.g0.size() == cells.size() && limit.psi.size() == cells.size(),
            "two_scale_distance: limit sample does not match the cell tiling");

    const int nx_el = mesh.nodes_x() - 1;
    const double eps = geom.epsilon();
    const double area = local_area(m);
    const auto& cell_elems = limit.cell->elements();

    const std::vector<Mat2> grad_g0 = gradient_at_quadrature(mesh.elements(), s.g0);
    const std::vector<Mat2> grad_g1 = gradient_at_quadrature(mesh.elements(), s.g1);

    double d0sq = 0.0, dpsisq = 0.0;
    std::vector<double> d0_part(cells.size()), dpsi_part(cells.size());
    par::for_each(cells.size(), [&](std::size_t k) {
        const CellIndex c = cells[k];
        const std::vector<Mat2> gy0 = gradient_at_quadrature(cell_elems, limit.g0[k]);
        const std::vector<Mat2> gypsi = gradient_at_quadrature(cell_elems, limit.psi[k]);
        double a0 = 0.0, apsi = 0.0;
        for (int lj = 0; lj < m; ++lj)
            for (int li = 0; li < m; ++li)
                for (int t = 0; t < 2; ++t) {
                    const int macro_el = 2 * ((c.j * m + lj) * nx_el + c.i * m + li) + t;
                    const int local_el = 2 * (lj * m + li) + t;
                    const Mat2 da = eps * grad_g0[macro_el] - gy0[local_el];
                    a0 += area * ddot(da, da);
                    const Mat2 db =
                        grad_g1[macro_el] - (limit.grad_g1[k] + gypsi[local_el]);
                    apsi += area * ddot(db, db);
                }
        d0_part[k] = eps * eps * a0;
        dpsi_part[k] = eps * eps * apsi;
    });
    for (std::size_t k = 0; k < cells.size(); ++k) {
        d0sq += d0_part[k];
        dpsisq += dpsi_part[k];
    }

    TwoScaleDistances out;
    out.d0 = std::sqrt(d0sq);
    out.dpsi = std::sqrt(dpsisq);
    VectorField diff = s.g1;
    for (std::size_t i = 0; i < diff.v.size(); ++i) diff.v[i] -= limit.g1_nodal.v[i];
    out.d1 = std::sqrt(l2_norm_sq(mesh.elements(), diff));
    return out;
}

LoadLimitResiduals load_limit_check(const MacroMesh& mesh, const RealizedLoad& load,
                                    const LimitLoads& limit, const Splitting* splitting,
                                    const SampledLimit* sampled) {
    const CompositeGeometry& geom = mesh.geom();
    const double eps = geom.epsilon();
    const auto& elements = mesh.elements();

    LoadLimitResiduals out;

    // strong two-scale residual of the soft load, measured through unfolding
    double strong = 0.0;
    for (std::size_t t = 0; t < elements.size(); ++t) {
        const Element& e = elements[t];
        const CellIndex c = geom.cell_of(e.bary);
        const Vec2 y(e.bary.x / eps - c.i, e.bary.y / eps - c.j);
        const Vec2 d = load.l0[t] - limit.l0(e.bary, y);
        strong += e.area * dot(d, d);
    }
    out.strong_l0 = std::sqrt(strong);

    // weak proxy: a fixed battery of smooth test fields
    const std::vector<std::function<Vec2(Vec2)>> battery = {
        [](Vec2) { return Vec2(1.0, 0.0); },
        [](Vec2) { return Vec2(0.0, 1.0); },
        [](Vec2 x) { return Vec2(std::sin(M_PI * x.x) * std::sin(M_PI * x.y), 0.0); },
        [](Vec2 x) { return Vec2(0.0, x.x * (1.0 - x.x) * x.y * (1.0 - x.y)); },
        [](Vec2 x) { return Vec2(std::cos(M_PI * x.x), std::sin(M_PI * x.y)); }};
    for (const auto& w : battery) {
        double eps_side = 0.0, lim_side = 0.0;
        for (std::size_t t = 0; t < elements.size(); ++t) {
            const Element& e = elements[t];
            eps_side += e.area * dot(load.l1[t], w(e.bary));
            lim_side += e.area * dot(limit.l1(e.bary), w(e.bary));
        }
        out.weak_l1.push_back(std::abs(eps_side - lim_side));
    }

    if (splitting && sampled) {
        // L^eps against L^0 on the supplied splitting/limit pair
        double leps = 0.0;
        for (std::size_t t = 0; t < elements.size(); ++t) {
            const Element& e = elements[t];
            const Vec2 g1b =
                (1.0 / 3.0) *
                (splitting->g1.get(e.n[0]) + splitting->g1.get(e.n[1]) + splitting->g1.get(e.n[2]));
            leps += e.area * dot(load.l1[t], g1b);
            if (e.tag == ComponentTag::Soft) {
                const Vec2 g0b = (1.0 / 3.0) * (splitting->g0.get(e.n[0]) +
                                                splitting->g0.get(e.n[1]) +
                                                splitting->g0.get(e.n[2]));
                leps += e.area * dot(load.l0[t], g0b);
            }
        }
        double l0v = 0.0;
        const auto cells = geom.covering_cells();
        const auto& cell_elems = sampled->cell->elements();
        for (std::size_t k = 0; k < cells.size(); ++k) {
            const CellIndex c = cells[k];
            const Vec2 xc(eps * (c.i + 0.5), eps * (c.j + 0.5));
            double s = 0.0;
            for (const Element& e : cell_elems) {
                if (e.tag != ComponentTag::Soft) continue;
                const Vec2 gb = (1.0 / 3.0) *
                                (sampled->g0[k].get(e.n[0]) + sampled->g0[k].get(e.n[1]) +
                                 sampled->g0[k].get(e.n[2]));
                s += e.area * dot(limit.l0(xc, e.bary), gb);
            }
            l0v += eps * eps * s;
        }
        for (std::size_t t = 0; t < elements.size(); ++t) {
            const Element& e = elements[t];
            const Vec2 g1b = (1.0 / 3.0) *
                             (sampled->g1_nodal.get(e.n[0]) + sampled->g1_nodal.get(e.n[1]) +
                              sampled->g1_nodal.get(e.n[2]));
            l0v += e.area * dot(limit.l1(e.bary), g1b);
        }
        out.load_term = std::abs(leps - l0v);
    }
    return out;
}

} // namespace hicon
