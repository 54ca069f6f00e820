#ifndef HICON_SPLITTING_HPP
#define HICON_SPLITTING_HPP

#include "hicon/energy.hpp"
#include "hicon/mesh.hpp"

namespace hicon {

// phi = eps g0 + eps^gamma g1 with g0 supported strictly inside the inclusions
// and g1 componentwise harmonic there.
struct Splitting {
    VectorField g0, g1;
    double eps = 0.0, gamma = 0.0;
};

// Fills the inclusion interiors by solving the componentwise Laplace problem
// with the given trace; values elsewhere are passed through unchanged.
VectorField harmonic_extension(const MacroMesh& mesh, const VectorField& g);

Splitting split(const MacroMesh& mesh, const VectorField& phi);

// (||g0||^2 + ||eps grad g0||^2 + ||g1||^2_H1) / Lambda_eps(phi)
double apriori_ratio(const MacroMesh& mesh, const Laws& laws, const VectorField& phi);

// ||u|| / (||grad u||_{stiff} + eps ||grad u||_{soft}) for u vanishing on Gamma
double high_contrast_poincare_ratio(const MacroMesh& mesh, const VectorField& u);

enum class RigidityRegion { Stiff, All };
enum class RigidityBc { Free, IdentityOnGamma };

struct RigidityReport {
    Mat2 best_rotation;
    double ratio_full = 0.0; // ||grad v - R||^2 / ||dist(grad v, SO)||^2
    double ratio_bc = 0.0;   // same with R = I
    bool exact_rigidity = false;
};

// v is the deformation (not the displacement).
RigidityReport rigidity_report(const MacroMesh& mesh, const VectorField& v,
                               RigidityRegion region, RigidityBc bc);

} // namespace hicon

#endif
