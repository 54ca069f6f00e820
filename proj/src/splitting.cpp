#include "hicon/splitting.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <unordered_map>

#include "hicon/assemble.hpp"
#include "hicon/material.hpp"
#include "hicon/parallel.hpp"
#include "hicon/sparse.hpp"

namespace hicon {

namespace {

// All interior cells share one local patch; the Dirichlet block is factorized
// once and reused per inclusion and component.
struct InclusionPatch {
    std::vector<std::pair<int, int>> interior_offsets; // node offsets from the cell origin
    std::vector<std::pair<int, int>> boundary_offsets;
    std::vector<double> k_ib; // interior x boundary coupling
    std::unique_ptr<DenseCholesky> k_ii;

    InclusionPatch(const MacroMesh& mesh, int cell) {
        std::vector<double> kii = build(mesh, cell);
        k_ii = std::make_unique<DenseCholesky>(std::move(kii),
                                               static_cast<int>(interior_offsets.size()));
    }

private:
    std::vector<double> build(const MacroMesh& mesh, int cell) {
        const int m = mesh.per_cell();
        const CellIndex c = mesh.interior_cells()[cell];
        const int oi = c.i * m, oj = c.j * m;

        std::vector<int> nodes;
        for (int el : mesh.cell_soft_elements()[cell])
            for (int a = 0; a < 3; ++a) nodes.push_back(mesh.elements()[el].n[a]);
        std::sort(nodes.begin(), nodes.end());
        nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());

        std::unordered_map<int, int> local;
        std::vector<int> interior, boundary;
        for (int id : nodes) {
            const NodeInfo& info = mesh.node_info()[id];
            const bool inside =
                info.incl == InclusionNodeState::Interior && info.incl_cell == cell;
            (inside ? interior : boundary).push_back(id);
        }
        for (std::size_t k = 0; k < interior.size(); ++k) local[interior[k]] = static_cast<int>(k);
        for (std::size_t k = 0; k < boundary.size(); ++k)
            local[boundary[k]] = static_cast<int>(interior.size() + k);

        auto offset = [&](int id) {
            const int i = id % (mesh.nodes_x()), j = id / (mesh.nodes_x());
            return std::make_pair(i - oi, j - oj);
        };
        for (int id : interior) interior_offsets.push_back(offset(id));
        for (int id : boundary) boundary_offsets.push_back(offset(id));

        const std::size_t ni = interior.size(), nb = boundary.size();
        std::vector<double> kii(ni * ni, 0.0);
        k_ib.assign(ni * nb, 0.0);
        for (int el : mesh.cell_soft_elements()[cell]) {
            const Element& e = mesh.elements()[el];
            for (int a = 0; a < 3; ++a)
                for (int b = 0; b < 3; ++b) {
                    const double v = e.area * dot(e.grad[a], e.grad[b]);
                    const int la = local[e.n[a]], lb = local[e.n[b]];
                    if (la < static_cast<int>(ni) && lb < static_cast<int>(ni))
                        kii[la * ni + lb] += v;
                    else if (la < static_cast<int>(ni))
                        k_ib[la * nb + (lb - ni)] += v;
                }
        }
        return kii;
    }
};

} // namespace

VectorField harmonic_extension(const MacroMesh& mesh, const VectorField& g) {
    require(g.node_count() == static_cast<std::size_t>(mesh.node_count()),
            "harmonic_extension: field/mesh mismatch");
    VectorField out = g;
    const auto& cells = mesh.interior_cells();
    if (cells.empty()) return out;

    const InclusionPatch patch(mesh, 0);
    const int m = mesh.per_cell();
    const std::size_t ni = patch.interior_offsets.size();
    const std::size_t nb = patch.boundary_offsets.size();
    if (ni == 0) return out;

    par::for_each(cells.size(), [&](std::size_t k) {
        const int oi = cells[k].i * m, oj = cells[k].j * m;
        std::vector<double> ub(nb), rhs(ni), sol(ni);
        for (int comp = 0; comp < 2; ++comp) {
            for (std::size_t b = 0; b < nb; ++b) {
                const auto [di, dj] = patch.boundary_offsets[b];
                ub[b] = g.v[2 * mesh.node_id(oi + di, oj + dj) + comp];
            }
            for (std::size_t i = 0; i < ni; ++i) {
                double s = 0.0;
                for (std::size_t b = 0; b < nb; ++b) s += patch.k_ib[i * nb + b] * ub[b];
                rhs[i] = -s;
            }
            patch.k_ii->solve(rhs, sol);
            for (std::size_t i = 0; i < ni; ++i) {
                const auto [di, dj] = patch.interior_offsets[i];
                out.v[2 * mesh.node_id(oi + di, oj + dj) + comp] = sol[i];
            }
        }
    });
    return out;
}

Splitting split(const MacroMesh& mesh, const VectorField& phi) {
    double scale = 0.0;
    for (double v : phi.v) scale = std::max(scale, std::abs(v));
    require(mesh.field_zero_on_gamma(phi, 1e-12 * scale),
            "split: displacement must vanish on Gamma");

    const double eps = mesh.geom().epsilon();
    const double gamma = mesh.geom().gamma();
    const double eg = std::pow(eps, gamma);

    Splitting s;
    s.eps = eps;
    s.gamma = gamma;
    const VectorField ext = harmonic_extension(mesh, phi);
    s.g1.v.resize(phi.v.size());
    s.g0.v.assign(phi.v.size(), 0.0);
    par::for_each(phi.v.size(), [&](std::size_t i) { s.g1.v[i] = ext.v[i] / eg; });
    const auto& info = mesh.node_info();
    par::for_each(phi.node_count(), [&](std::size_t id) {
        if (info[id].incl != InclusionNodeState::Interior) return;
        for (int c = 0; c < 2; ++c)
            s.g0.v[2 * id + c] = (phi.v[2 * id + c] - eg * s.g1.v[2 * id + c]) / eps;
    });
    return s;
}

double apriori_ratio(const MacroMesh& mesh, const Laws& laws, const VectorField& phi) {
    const double elastic = elastic_energy(mesh, laws, phi);
    require(elastic > 0.0, "apriori_ratio: Lambda_eps(phi) must be positive");
    const Splitting s = split(mesh, phi);
    const double eps = s.eps;
    const auto& el = mesh.elements();
    const double num = l2_norm_sq(el, s.g0) + eps * eps * grad_l2_norm_sq(el, s.g0) +
                       l2_norm_sq(el, s.g1) + grad_l2_norm_sq(el, s.g1);
    return num / elastic;
}

double high_contrast_poincare_ratio(const MacroMesh& mesh, const VectorField& u) {
    require(mesh.field_zero_on_gamma(u, 0.0), "poincare: field must vanish on Gamma");
    const double eps = mesh.geom().epsilon();
    const auto& el = mesh.elements();
    const double stiff = std::sqrt(grad_l2_norm_sq(el, u, ComponentTag::Stiff));
    const double soft = std::sqrt(grad_l2_norm_sq(el, u, ComponentTag::Soft));
    const double denom = stiff + eps * soft;
    require(denom > 0.0, "poincare: gradient vanishes, field must be zero");
    return std::sqrt(l2_norm_sq(el, u)) / denom;
}

RigidityReport rigidity_report(const MacroMesh& mesh, const VectorField& v,
                               RigidityRegion region, RigidityBc bc) {
    const auto& el = mesh.elements();
    auto in_region = [&](const Element& e) {
        return region == RigidityRegion::All || e.tag == ComponentTag::Stiff;
    };

    double area = 0.0;
    Mat2 mean;
    const std::vector<Mat2> grads = gradient_at_quadrature(el, v);
    for (std::size_t k = 0; k < el.size(); ++k) {
        if (!in_region(el[k])) continue;
        area += el[k].area;
        mean += el[k].area * grads[k];
    }
    require(area > 0.0, "rigidity: region has zero measure");
    mean *= 1.0 / area;

    RigidityReport rep;
    rep.best_rotation = dist_to_rotations(mean).nearest;

    double dist2 = 0.0, dev_r = 0.0, dev_i = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < el.size(); ++k) {
        if (!in_region(el[k])) continue;
        const Mat2& g = grads[k];
        const double d = dist_to_rotations(g).distance;
        dist2 += el[k].area * d * d;
        const Mat2 dr = g - rep.best_rotation;
        dev_r += el[k].area * ddot(dr, dr);
        const Mat2 di = g - Mat2::identity();
        dev_i += el[k].area * ddot(di, di);
        scale += el[k].area * ddot(g, g);
    }
    // defects below the FP resolution of the distance count as exact rigidity
    if (dist2 <= 1e-13 * (scale + 1.0)) {
        rep.exact_rigidity = true;
        return rep;
    }
    rep.ratio_full = dev_r / dist2;
    rep.ratio_bc = bc == RigidityBc::IdentityOnGamma ? dev_i / dist2 : dev_r / dist2;
    return rep;
}

} // namespace hicon
