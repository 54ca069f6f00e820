#include "hicon/homogenize.hpp"

#include <cmath>

#include "hicon/assemble.hpp"
#include "hicon/descent.hpp"
#include "hicon/parallel.hpp"
#include "hicon/rng.hpp"

namespace hicon {

namespace {

// Harmonic fill of the hole interior, componentwise, via the scalar Laplacian
// on the soft elements (band solve masked to the hole-interior nodes).
void harmonic_hole_fill(const CellMesh& cell, CellField& psi) {
    if (cell.hole_interior_nodes().empty()) return;
    const CsrMatrix lap =
        assemble_scalar_laplacian(cell.elements(), cell.node_count(), ComponentTag::Soft);
    std::vector<std::uint8_t> mask(cell.node_count(), 1);
    for (int id : cell.hole_interior_nodes()) mask[id] = 0;
    const BandCholesky chol(lap, mask);
    std::vector<double> g(cell.node_count()), rhs(cell.node_count()), sol;
    for (int comp = 0; comp < 2; ++comp) {
        for (int id = 0; id < cell.node_count(); ++id)
            g[id] = mask[id] ? psi.v[2 * id + comp] : 0.0;
        lap.multiply(g, rhs);
        for (int id = 0; id < cell.node_count(); ++id) rhs[id] = mask[id] ? 0.0 : -rhs[id];
        chol.solve(rhs, sol);
        for (int id : cell.hole_interior_nodes()) psi.v[2 * id + comp] = sol[id];
    }
}

void subtract_mass_mean(const CellMesh& cell, CellField& psi) {
    Vec2 mean;
    double area = 0.0;
    for (const Element& e : cell.elements()) {
        area += e.area;
        mean += (e.area / 3.0) * (psi.get(e.n[0]) + psi.get(e.n[1]) + psi.get(e.n[2]));
    }
    mean *= 1.0 / area;
    for (std::size_t id = 0; id < psi.node_count(); ++id) psi.set(id, psi.get(id) - mean);
}

struct CellWorkspace {
    const CellMesh* cell;
    QuadForm q1;
    CsrMatrix k;
    std::vector<std::vector<double>> kernel;

    CellWorkspace(const QuadForm& q, const CellMesh& c) : cell(&c), q1(q) {
        k = assemble_stiffness(c.elements(), c.node_count(), q1, ComponentTag::Stiff);
        for (int comp = 0; comp < 2; ++comp) {
            std::vector<double> v(2 * c.node_count(), 0.0);
            for (int id : c.stiff_nodes()) v[2 * id + comp] = 1.0;
            kernel.push_back(std::move(v));
        }
    }

    CellProblemResult solve(const Mat2& f, double tol) const {
        const Mat2 s = q1.contract(f);
        std::vector<double> rhs(2 * cell->node_count(), 0.0);
        for (const Element& e : cell->elements()) {
            if (e.tag != ComponentTag::Stiff) continue;
            for (int a = 0; a < 3; ++a)
                for (int i = 0; i < 2; ++i)
                    rhs[2 * e.n[a] + i] -=
                        e.area * (s(i, 0) * e.grad[a].x + s(i, 1) * e.grad[a].y);
        }
        PcgOptions opts;
        opts.tol = tol;
        CellProblemResult out;
        out.psi.v = solve_spd_projected(k, rhs, kernel, opts);
        harmonic_hole_fill(*cell, out.psi);
        subtract_mass_mean(*cell, out.psi);
        out.value = par::reduce_sum(cell->elements().size(), [&](std::size_t t) {
            const Element& e = cell->elements()[t];
            if (e.tag != ComponentTag::Stiff) return 0.0;
            Mat2 g = f;
            for (int a = 0; a < 3; ++a) g += Mat2::outer(out.psi.get(e.n[a]), e.grad[a]);
            return e.area * q1(g);
        });
        return out;
    }
};

} // namespace

CellProblemResult cell_problem(const QuadForm& q1, const Mat2& f, const CellMesh& cell,
                               double tol) {
    return CellWorkspace(q1, cell).solve(f, tol);
}

EffectiveForm effective_form(const QuadForm& q1, const CellMesh& cell) {
    const CellWorkspace ws(q1, cell);
    EffectiveForm out;
    out.cell = &cell;

    Mat2 basis[4];
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) basis[2 * i + j](i, j) = 1.0;
    for (int b = 0; b < 4; ++b) out.correctors[b] = ws.solve(basis[b], 1e-11).psi;

    // corrector linearity backs the tensor reconstruction
    double defect = 0.0;
    const Mat2 probes[2] = {basis[0] + basis[3], basis[1] + basis[2]};
    const int parts[2][2] = {{0, 3}, {1, 2}};
    for (int p = 0; p < 2; ++p) {
        const CellField direct = ws.solve(probes[p], 1e-11).psi;
        CellField sum = out.correctors[parts[p][0]];
        for (std::size_t i = 0; i < sum.v.size(); ++i)
            sum.v[i] += out.correctors[parts[p][1]].v[i];
        subtract_mass_mean(cell, sum);
        CellField diff = direct;
        for (std::size_t i = 0; i < diff.v.size(); ++i) diff.v[i] -= sum.v[i];
        const double rel = std::sqrt(l2_norm_sq(cell.elements(), diff)) /
                           (1.0 + std::sqrt(l2_norm_sq(cell.elements(), direct)));
        defect = std::max(defect, rel);
    }
    out.corrector_linearity_defect = defect;
    if (defect > 1e-8)
        throw std::runtime_error("effective_form: corrector linearity defect " +
                                 std::to_string(defect));

    // C_ijkl = sum_T |T| B1(E_ij + grad psi_ij, E_kl + grad psi_kl)
    std::vector<std::vector<Mat2>> fields(4);
    for (int b = 0; b < 4; ++b) {
        fields[b] = gradient_at_quadrature(cell.elements(), out.correctors[b]);
        for (std::size_t t = 0; t < fields[b].size(); ++t) fields[b][t] += basis[b];
    }
    for (int b1 = 0; b1 < 4; ++b1)
        for (int b2 = 0; b2 < 4; ++b2) {
            const double v = par::reduce_sum(cell.elements().size(), [&](std::size_t t) {
                const Element& e = cell.elements()[t];
                if (e.tag != ComponentTag::Stiff) return 0.0;
                return e.area * q1.bilinear(fields[b1][t], fields[b2][t]);
            });
            out.q.c[b1 / 2][b1 % 2][b2 / 2][b2 % 2] = v;
        }
    return out;
}

SoftCellSolver::SoftCellSolver(const CellMesh& cell, const QuadForm& q0)
    : cell_(&cell), q0_(q0) {
    k0_ = assemble_stiffness(cell.elements(), cell.node_count(), q0, ComponentTag::Soft);
    mask_.assign(2 * cell.node_count(), 1);
    for (int id : cell.hole_interior_nodes()) mask_[2 * id] = mask_[2 * id + 1] = 0;
    chol_ = std::make_unique<BandCholesky>(k0_, mask_);
}

namespace {

std::vector<double> soft_load_vector(const CellMesh& cell,
                                     const std::function<Vec2(Vec2)>& l0) {
    std::vector<double> b(2 * cell.node_count(), 0.0);
    for (const Element& e : cell.elements()) {
        if (e.tag != ComponentTag::Soft) continue;
        const Vec2 w = (e.area / 3.0) * l0(e.bary);
        for (int a = 0; a < 3; ++a) {
            b[2 * e.n[a]] += w.x;
            b[2 * e.n[a] + 1] += w.y;
        }
    }
    return b;
}

double soft_load_work(const CellMesh& cell, const std::function<Vec2(Vec2)>& l0,
                      const CellField& v) {
    double s = 0.0;
    for (const Element& e : cell.elements()) {
        if (e.tag != ComponentTag::Soft) continue;
        const Vec2 vb = (1.0 / 3.0) * (v.get(e.n[0]) + v.get(e.n[1]) + v.get(e.n[2]));
        s += e.area * dot(l0(e.bary), vb);
    }
    return s;
}

} // namespace

SoftCellSolver::Solution SoftCellSolver::solve_quadratic(
    const std::function<Vec2(Vec2)>& l0) const {
    std::vector<double> b = soft_load_vector(*cell_, l0);
    Solution out;
    chol_->solve(b, out.v.v);
    out.elastic = 0.5 * k0_.quadratic(out.v.v);
    out.load_work = soft_load_work(*cell_, l0, out.v);
    return out;
}

SoftCellSolver::Solution SoftCellSolver::solve_nonconvex(
    const MaterialLaw& w0, double lambda0, const std::function<Vec2(Vec2)>& l0,
    int multistart, std::uint64_t seed) const {
    const std::vector<double> b = soft_load_vector(*cell_, l0);
    const auto& elements = cell_->elements();
    const std::size_t n = 2 * cell_->node_count();

    auto elastic_of = [&](const CellField& v) {
        return par::reduce_sum(elements.size(), [&](std::size_t t) {
            const Element& e = elements[t];
            if (e.tag != ComponentTag::Soft) return 0.0;
            Mat2 g;
            for (int a = 0; a < 3; ++a) g += lambda0 * Mat2::outer(v.get(e.n[a]), e.grad[a]);
            const double w = w0.w_disp ? w0.w_disp(g) : w0.w(Mat2::identity() + g);
            return e.area * w / (lambda0 * lambda0);
        });
    };
    auto energy_fn = [&](const std::vector<double>& x) {
        CellField v;
        v.v = x;
        return elastic_of(v) -
               par::reduce_sum(n, [&](std::size_t i) { return b[i] * x[i]; });
    };
    auto grad_fn = [&](const std::vector<double>& x, std::vector<double>& g) {
        CellField v;
        v.v = x;
        g.assign(n, 0.0);
        for (const Element& e : elements) {
            if (e.tag != ComponentTag::Soft) continue;
            Mat2 f;
            for (int a = 0; a < 3; ++a) f += lambda0 * Mat2::outer(v.get(e.n[a]), e.grad[a]);
            const Mat2 p = w0.dw_disp ? w0.dw_disp(f) : w0.dw(Mat2::identity() + f);
            for (int a = 0; a < 3; ++a)
                for (int i = 0; i < 2; ++i)
                    g[2 * e.n[a] + i] +=
                        e.area / lambda0 * (p(i, 0) * e.grad[a].x + p(i, 1) * e.grad[a].y);
        }
        par::for_each(n, [&](std::size_t i) {
            g[i] -= b[i];
            if (mask_[i]) g[i] = 0.0;
        });
    };

    DescentOptions opts;
    opts.tol = 1e-9;
    opts.max_iters = 2000;
    opts.grad_scale = 1.0 + std::sqrt(par::reduce_sum(n, [&](std::size_t i) { return b[i] * b[i]; }));

    const double bump = 0.1 * std::sqrt(cell_->soft_area());
    std::vector<DescentResult> runs;
    runs.push_back(lbfgs_minimize(std::vector<double>(n, 0.0), energy_fn, grad_fn, *chol_,
                                  mask_, opts));
    for (int s = 1; s <= multistart; ++s) {
        Rng rng(sub_seed(seed, "soft-multistart", static_cast<std::uint64_t>(s)));
        std::vector<double> x0(n, 0.0);
        for (int id : cell_->hole_interior_nodes()) {
            x0[2 * id] = bump * uniform(rng, -1.0, 1.0);
            x0[2 * id + 1] = bump * uniform(rng, -1.0, 1.0);
        }
        runs.push_back(lbfgs_minimize(std::move(x0), energy_fn, grad_fn, *chol_, mask_, opts));
    }
    std::size_t best = 0;
    double lo = runs[0].value, hi = runs[0].value;
    for (std::size_t s = 1; s < runs.size(); ++s) {
        lo = std::min(lo, runs[s].value);
        hi = std::max(hi, runs[s].value);
        if (runs[s].value < runs[best].value) best = s;
    }
    Solution out;
    out.v.v = std::move(runs[best].x);
    out.elastic = elastic_of(out.v);
    out.load_work = soft_load_work(*cell_, l0, out.v);
    out.spread = hi - lo;
    out.converged = runs[best].converged;
    return out;
}

namespace {

struct MacroSolve {
    VectorField g1;
    double energy = 0.0;
    double load = 0.0;
};

MacroSolve solve_macro(const EffectiveForm& eff, const LimitLoads& loads,
                       const MacroMesh& macro) {
    const CsrMatrix k =
        assemble_stiffness(macro.elements(), macro.node_count(), eff.q);
    const std::vector<Vec2> l1 = sample_at_barycenters(macro.elements(), loads.l1);
    const std::vector<double> b = assemble_load(macro.elements(), macro.node_count(), l1);
    std::vector<std::uint8_t> mask(2 * macro.node_count(), 0);
    for (int id : macro.gamma_nodes()) mask[2 * id] = mask[2 * id + 1] = 1;
    MacroSolve out;
    out.g1.v = solve_spd(k, b, mask, PcgOptions{1e-11, 40000});
    out.energy = 0.5 * k.quadratic(out.g1.v);
    out.load = par::reduce_sum(b.size(), [&](std::size_t i) { return b[i] * out.g1.v[i]; });
    return out;
}

std::function<Vec2(Vec2)> freeze_x(const std::function<Vec2(Vec2, Vec2)>& l0, Vec2 x) {
    return [l0, x](Vec2 y) { return l0(x, y); };
}

} // namespace

LimitSolution limit_small_solve(const EffectiveForm& eff, const QuadForm& q0,
                                const LimitLoads& loads, const MacroMesh& macro,
                                const CompositeGeometry& sample_geom) {
    LimitSolution out;
    const MacroSolve ms = solve_macro(eff, loads, macro);
    out.stiff_energy = ms.energy;
    out.macro_load = ms.load;

    out.limit.cell = eff.cell;
    out.limit.macro = &macro;
    out.limit.g1 = ms.g1;
    out.limit.correctors = eff.correctors;

    if (loads.l0_zero) {
        out.limit.g0_zero = true;
        out.limit.g0_at = [nc = eff.cell->node_count()](Vec2) { return CellField(nc); };
    } else {
        auto solver = std::make_shared<SoftCellSolver>(*eff.cell, q0);
        const auto l0 = loads.l0;
        out.limit.g0_zero = false;
        out.limit.g0_at = [solver, l0](Vec2 x) {
            return solver->solve_quadratic(freeze_x(l0, x)).v;
        };
        const double eps = sample_geom.epsilon();
        const auto cells = sample_geom.covering_cells();
        std::vector<double> elastic(cells.size()), work(cells.size());
        par::for_each(cells.size(), [&](std::size_t k) {
            const Vec2 xc(eps * (cells[k].i + 0.5), eps * (cells[k].j + 0.5));
            const auto sol = solver->solve_quadratic(freeze_x(l0, xc));
            elastic[k] = sol.elastic;
            work[k] = sol.load_work;
        });
        for (std::size_t k = 0; k < cells.size(); ++k) {
            out.soft_energy += eps * eps * elastic[k];
            out.soft_load += eps * eps * work[k];
        }
    }
    out.m0 = out.reassembled();
    return out;
}

LimitSolution limit_large_solve(const EffectiveForm& eff, const SoftLaw& w0,
                                const LimitLoads& loads, const MacroMesh& macro,
                                const CompositeGeometry& sample_geom, int multistart,
                                std::uint64_t seed, double lambda0) {
    LimitSolution out;
    const MacroSolve ms = solve_macro(eff, loads, macro);
    out.stiff_energy = ms.energy;
    out.macro_load = ms.load;

    out.limit.cell = eff.cell;
    out.limit.macro = &macro;
    out.limit.g1 = ms.g1;
    out.limit.correctors = eff.correctors;

    if (loads.l0_zero) {
        // W0 >= 0 = W0(I), so the soft limit field vanishes with the load
        out.limit.g0_zero = true;
        out.limit.g0_at = [nc = eff.cell->node_count()](Vec2) { return CellField(nc); };
    } else {
        auto solver = std::make_shared<SoftCellSolver>(*eff.cell, w0.law.quad_form);
        const auto l0 = loads.l0;
        const MaterialLaw law = w0.law;
        out.limit.g0_zero = false;
        out.limit.g0_at = [solver, l0, law, lambda0, multistart, seed](Vec2 x) {
            return solver->solve_nonconvex(law, lambda0, freeze_x(l0, x), multistart, seed).v;
        };
        const double eps = sample_geom.epsilon();
        const auto cells = sample_geom.covering_cells();
        std::vector<double> elastic(cells.size()), work(cells.size()), spread(cells.size());
        par::for_each(cells.size(), [&](std::size_t k) {
            const Vec2 xc(eps * (cells[k].i + 0.5), eps * (cells[k].j + 0.5));
            const auto sol =
                solver->solve_nonconvex(law, lambda0, freeze_x(l0, xc), multistart, seed);
            elastic[k] = sol.elastic;
            work[k] = sol.load_work;
            spread[k] = sol.spread;
        });
        for (std::size_t k = 0; k < cells.size(); ++k) {
            out.soft_energy += eps * eps * elastic[k];
            out.soft_load += eps * eps * work[k];
            out.multistart_spread = std::max(out.multistart_spread, spread[k]);
        }
    }
    out.m0 = out.reassembled();
    return out;
}

SampledLimit sample_limit(const TwoScaleLimit& limit, const MacroMesh& eps_mesh) {
    const CompositeGeometry& geom = eps_mesh.geom();
    require(limit.cell->resolution() == eps_mesh.per_cell(),
            "sample_limit: cell resolution must match the per-cell mesh resolution");
    const double eps = geom.epsilon();
    const auto cells = geom.covering_cells();

    SampledLimit out;
    out.cell = limit.cell;
    out.g0.resize(cells.size());
    out.grad_g1.resize(cells.size());
    out.psi.resize(cells.size());
    for (std::size_t k = 0; k < cells.size(); ++k) {
        const Vec2 xc(eps * (cells[k].i + 0.5), eps * (cells[k].j + 0.5));
        out.grad_g1[k] = limit.macro->eval_gradient(limit.g1, xc);
        out.g0[k] = limit.g0_zero ? CellField(limit.cell->node_count()) : limit.g0_at(xc);
        CellField psi(limit.cell->node_count());
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) {
                const double c = out.grad_g1[k](i, j);
                const CellField& corr = limit.correctors[2 * i + j];
                for (std::size_t q = 0; q < psi.v.size(); ++q) psi.v[q] += c * corr.v[q];
            }
        out.psi[k] = std::move(psi);
    }
    out.g1_nodal = VectorField(eps_mesh.node_count());
    for (int id = 0; id < eps_mesh.node_count(); ++id)
        out.g1_nodal.set(id, limit.macro->eval(limit.g1, eps_mesh.node_coord(id)));
    return out;
}

VectorField recovery_profile(const TwoScaleLimit& limit, const SampledLimit& sampled,
                             const MacroMesh& eps_mesh) {
    const CompositeGeometry& geom = eps_mesh.geom();
    const double eps = geom.epsilon();
    const double eg = std::pow(eps, geom.gamma());
    const auto cells = geom.covering_cells();
    std::vector<int> cell_linear(geom.cells_x() * geom.cells_y());
    for (std::size_t k = 0; k < cells.size(); ++k)
        cell_linear[cells[k].i * geom.cells_y() + cells[k].j] = static_cast<int>(k);

    auto cutoff = [&](const Vec2& x) {
        double d;
        if (geom.gamma_boundary() == BoundarySelector::LeftEdge) {
            d = x.x;
        } else {
            d = std::min(std::min(x.x, geom.lx() - x.x), std::min(x.y, geom.ly() - x.y));
        }
        return std::min(1.0, d / eps);
    };

    VectorField phi(eps_mesh.node_count());
    for (int id = 0; id < eps_mesh.node_count(); ++id) {
        const Vec2 x = eps_mesh.node_coord(id);
        const CellIndex c = geom.cell_of(x);
        const std::size_t k = cell_linear[c.i * geom.cells_y() + c.j];
        const Vec2 y(x.x / eps - c.i, x.y / eps - c.j);

        Vec2 g0_term;
        if (!limit.g0_zero && geom.is_interior_cell(c))
            g0_term = limit.cell->eval(sampled.g0[k], y);
        const Vec2 g1_term = limit.macro->eval(limit.g1, x);
        const Vec2 psi_term = limit.cell->eval(sampled.psi[k], y);
        phi.set(id, eps * g0_term + eg * (g1_term + eps * cutoff(x) * psi_term));
    }
    for (int id : eps_mesh.gamma_nodes()) phi.set(id, Vec2());
    return phi;
}

} // namespace hicon
