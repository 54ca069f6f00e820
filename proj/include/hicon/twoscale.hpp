#ifndef HICON_TWOSCALE_HPP
#define HICON_TWOSCALE_HPP

#include <optional>
#include <vector>

#include "hicon/loads.hpp"
#include "hicon/mesh.hpp"
#include "hicon/splitting.hpp"

namespace hicon {

// Re-indexing of a field on Omega into (cell, cell coordinate). The mesh is
// epsilon-aligned and Omega is tiled exactly, so the unfolding over all cells
// of the tiling preserves L2 norms and elementwise integrals exactly.
struct UnfoldedNodal {
    double eps = 0.0;
    int m = 0; // samples per cell side; (m+1)^2 local nodes
    std::vector<CellIndex> cells;
    std::vector<std::vector<double>> values; // per cell, 2 (m+1)^2 doubles

    double get_comp(std::size_t cell, int li, int lj, int comp) const {
        return values[cell][2 * (lj * (m + 1) + li) + comp];
    }
};

struct UnfoldedElems {
    double eps = 0.0;
    int m = 0; // 2 m^2 local elements per cell
    std::vector<CellIndex> cells;
    std::vector<std::vector<Mat2>> values;
};

UnfoldedNodal unfold(const MacroMesh& mesh, const VectorField& f);
UnfoldedElems unfold_gradients(const MacroMesh& mesh, const VectorField& f);
UnfoldedElems unfold_elementwise(const MacroMesh& mesh, const std::vector<Mat2>& per_element);

// L2 norms over R^d x Y (cells outside the support contribute zero).
double l2_norm(const UnfoldedNodal& u);
double l2_norm(const UnfoldedElems& u);

// Pointwise product of scalar unfoldings, for the product-rule identity.
UnfoldedNodal unfold_product(const MacroMesh& mesh, const VectorField& f, const VectorField& g);

// Two-scale limit triple sampled per covering cell of an epsilon-geometry.
// g0 and psi live on a periodic cell mesh whose resolution equals the number
// of macro elements per cell side.
struct SampledLimit {
    const CellMesh* cell = nullptr;
    std::vector<CellField> g0;   // per covering cell
    std::vector<Mat2> grad_g1;   // per covering cell, constant in the cell
    std::vector<CellField> psi;  // per covering cell
    VectorField g1_nodal;        // interpolated onto the epsilon mesh
};

struct TwoScaleDistances {
    double d0 = 0.0;   // || U(eps grad g0_eps) - grad_y g0 ||
    double d1 = 0.0;   // || g1_eps - g1 ||_{L2(Omega)}
    double dpsi = 0.0; // || U(grad g1_eps) - (grad g1 + grad_y psi) ||
};

TwoScaleDistances two_scale_distance(const MacroMesh& mesh, const Splitting& s,
                                     const SampledLimit& limit);

struct LoadLimitResiduals {
    double strong_l0 = 0.0;           // || U(l0_eps) - l0 ||_{L2}
    std::vector<double> weak_l1;      // |int l1_eps . w - int l1 . w| per test field
    std::optional<double> load_term;  // |L^eps(g0,g1) - L^0(g0,g1)|
};

LoadLimitResiduals load_limit_check(const MacroMesh& mesh, const RealizedLoad& load,
                                    const LimitLoads& limit, const Splitting* splitting,
                                    const SampledLimit* sampled);

} // namespace hicon

#endif
