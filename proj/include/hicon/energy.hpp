#ifndef HICON_ENERGY_HPP
#define HICON_ENERGY_HPP

#include <cstdint>
#include <memory>
#include <vector>

#include "hicon/loads.hpp"
#include "hicon/material.hpp"
#include "hicon/mesh.hpp"

namespace hicon {

struct Laws {
    MaterialLaw w0; // soft
    MaterialLaw w1; // stiff
};

struct EnergyReport {
    double elastic_soft = 0.0;  // int_{soft} W0(I + grad phi)
    double elastic_stiff = 0.0; // eps^-2gamma int_{stiff} W1(I + grad phi)
    double load = 0.0;          // int l_eps . phi
    double lambda_eps = 0.0;
    double scaled_total = 0.0;  // lambda^-2 (Lambda - load)

    double elastic() const { return elastic_soft + elastic_stiff; }
};

// Componentwise elastic energy of a displacement; throws on non-finite W with
// the offending element id.
EnergyReport energy_report(const MacroMesh& mesh, const Laws& laws, const RealizedLoad& load,
                           const VectorField& phi);

// Elastic energy only (no load bookkeeping), same contrast weighting.
double elastic_energy(const MacroMesh& mesh, const Laws& laws, const VectorField& phi);

struct MinimizeOptions {
    double tol = 1e-8;  // on the projected gradient, relative to the load scale
    int max_iters = 5000;
    int lbfgs_memory = 10;
    int multistart = 3; // extra perturbed starts (finite-strain regime)
    std::uint64_t seed = 1;
};

struct MinimizeResult {
    VectorField phi;
    EnergyReport report;
    std::vector<double> trace; // accepted scaled totals, non-increasing
    bool converged = false;
    int iterations = 0;
    int starts = 1;
    double multistart_spread = 0.0; // max-min of scaled totals across starts
};

MinimizeResult minimize_total(const MacroMesh& mesh, const Laws& laws,
                              const RealizedLoad& load, LoadRegime regime,
                              const MinimizeOptions& opts = {},
                              const VectorField* init = nullptr);

} // namespace hicon

#endif
