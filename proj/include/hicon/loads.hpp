#ifndef HICON_LOADS_HPP
#define HICON_LOADS_HPP

#include <functional>
#include <string>
#include <vector>

#include "hicon/mesh.hpp"

namespace hicon {

enum class LoadRegime { SmallStrain, FiniteStrain };

// Load presets. Small strain realizes l_eps = f (+ an optional cell-oscillating
// soft term); finite strain realizes l_eps = eps^(-gamma) f and requires
// gamma < 1, which forces the two-scale limit of the soft load to vanish.
struct LoadSpec {
    LoadRegime regime = LoadRegime::SmallStrain;
    std::string profile = "sine";
    double amplitude = 1.0;
    std::string soft_profile = "none"; // h(x,y), only in the small-strain preset
    double soft_amplitude = 0.0;
};

std::function<Vec2(Vec2)> macro_profile(const std::string& name);
std::function<Vec2(Vec2, Vec2)> soft_profile(const std::string& name);

// lambda_eps = eps^gamma ||l||_{L2(Omega)} + eps ||l||_{L2(soft)}
double lambda_formula(double norm_omega, double norm_soft, double eps, double gamma);

struct RealizedLoad {
    std::vector<Vec2> l;        // per element, at barycenters
    std::vector<Vec2> l1;       // lambda^-1 eps^gamma l
    std::vector<Vec2> l0;       // lambda^-1 eps chi^0 l
    double lambda = 0.0;
    double norm_omega = 0.0, norm_soft = 0.0;
    std::vector<double> rhs;    // assembled load functional
};

RealizedLoad realize(const LoadSpec& spec, const MacroMesh& mesh);

// Limits of (l^0_eps, l^1_eps) and of the normalization lambda_eps.
struct LimitLoads {
    std::function<Vec2(Vec2)> l1;
    std::function<Vec2(Vec2, Vec2)> l0; // includes the chi_{Y0} factor
    bool l0_zero = true;
    double c0 = 0.0;      // limit of lambda_eps / eps^min(gamma,1)
    double lambda0 = 0.0; // limit of lambda_eps (0 in the small-strain regime)
};

LimitLoads limit_loads(const LoadSpec& spec, const CompositeGeometry& geom);

} // namespace hicon

#endif
