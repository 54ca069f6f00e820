#ifndef HICON_HOMOGENIZE_HPP
#define HICON_HOMOGENIZE_HPP

#include <array>
#include <functional>
#include <memory>

#include "hicon/material.hpp"
#include "hicon/sparse.hpp"
#include "hicon/twoscale.hpp"

namespace hicon {

struct CellProblemResult {
    CellField psi;    // periodic corrector, zero mean, harmonic in the hole
    double value;     // int_{Y1} Q1(F + grad psi)
};

// min over periodic psi of int_{Y1} Q1(F + grad psi); the constant kernel is
// gauged out and the hole values are filled harmonically.
CellProblemResult cell_problem(const QuadForm& q1, const Mat2& f, const CellMesh& cell,
                               double tol = 1e-11);

struct EffectiveForm {
    QuadForm q; // homogenized quadratic form of the perforated stiff matrix
    std::array<CellField, 4> correctors; // basis e_i x e_j at index 2i + j
    const CellMesh* cell = nullptr;
    double corrector_linearity_defect = 0.0;

    const CellField& corrector(int i, int j) const { return correctors[2 * i + j]; }
};

EffectiveForm effective_form(const QuadForm& q1, const CellMesh& cell);

// Zero-trace problems on the hole, one per macro sample point.
class SoftCellSolver {
public:
    SoftCellSolver(const CellMesh& cell, const QuadForm& q0);

    struct Solution {
        CellField v;
        double elastic = 0.0;
        double load_work = 0.0;
        double spread = 0.0;
        bool converged = true;
    };

    // min int_{Y0} Q0(grad v) - int_{Y0} l0 . v
    Solution solve_quadratic(const std::function<Vec2(Vec2)>& l0) const;

    // min lambda0^-2 int_{Y0} W0(I + lambda0 grad v) - int_{Y0} l0 . v
    Solution solve_nonconvex(const MaterialLaw& w0, double lambda0,
                             const std::function<Vec2(Vec2)>& l0, int multistart,
                             std::uint64_t seed) const;

    const CellMesh& cell() const { return *cell_; }

private:
    const CellMesh* cell_;
    QuadForm q0_;
    CsrMatrix k0_;
    std::vector<std::uint8_t> mask_; // constrained = not strictly inside the hole
    std::unique_ptr<BandCholesky> chol_;
};

// Minimizer triple of the limit functional plus enough structure to sample it
// per epsilon-cell and to build recovery sequences.
struct TwoScaleLimit {
    const CellMesh* cell = nullptr;
    const MacroMesh* macro = nullptr;
    VectorField g1;
    std::array<CellField, 4> correctors;
    std::function<CellField(Vec2)> g0_at;
    bool g0_zero = true;
};

struct LimitSolution {
    TwoScaleLimit limit;
    double m0 = 0.0;
    double stiff_energy = 0.0, soft_energy = 0.0;
    double macro_load = 0.0, soft_load = 0.0;
    double multistart_spread = 0.0;

    double reassembled() const {
        return stiff_energy + soft_energy - macro_load - soft_load;
    }
};

// Decoupled limit problem with the quadratic soft law: macro elasticity with
// the effective tensor plus independent soft cell problems.
LimitSolution limit_small_solve(const EffectiveForm& eff, const QuadForm& q0,
                                const LimitLoads& loads, const MacroMesh& macro,
                                const CompositeGeometry& sample_geom);

// Same stiff part; the soft part keeps the nonlinear law (lambda0 is the limit
// of lambda_eps; the soft integrand is lambda0^-2 W0(I + lambda0 grad_y g0)).
LimitSolution limit_large_solve(const EffectiveForm& eff, const SoftLaw& w0,
                                const LimitLoads& loads, const MacroMesh& macro,
                                const CompositeGeometry& sample_geom, int multistart,
                                std::uint64_t seed, double lambda0 = 1.0);

// Limit fields sampled piecewise-constant per cell of the epsilon tiling.
SampledLimit sample_limit(const TwoScaleLimit& limit, const MacroMesh& eps_mesh);

// Nodal interpolant of eps g0(x, x/eps) + eps^gamma (g1(x) + eps psi(x, x/eps));
// the psi term is tapered to zero over one cell layer at Gamma so the clamp
// holds exactly. Returns the lambda-normalized displacement profile.
VectorField recovery_profile(const TwoScaleLimit& limit, const SampledLimit& sampled,
                             const MacroMesh& eps_mesh);

} // namespace hicon

#endif
