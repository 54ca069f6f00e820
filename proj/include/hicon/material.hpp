#ifndef HICON_MATERIAL_HPP
#define HICON_MATERIAL_HPP

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "hicon/common.hpp"
#include "hicon/quadform.hpp"

namespace hicon {

// Distance of F to the rotation group, with the nearest rotation. In 2-D
// dist^2(F, SO(2)) = |F|^2 + 2 - 2 sqrt((F11+F22)^2 + (F21-F12)^2), and the
// minimizer is the polar rotation with the determinant sign folded in.
struct RotationDistance {
    double distance;
    Mat2 nearest;
};
RotationDistance dist_to_rotations(const Mat2& f);

enum class LawKind { DistSquared, StVenant, Custom };

// Frame-indifferent stored-energy density with one well at SO(2), its
// gradient, and the quadratic expansion at the identity.
struct MaterialLaw {
    LawKind kind = LawKind::Custom;
    std::string name;
    std::function<double(const Mat2&)> w;
    std::function<Mat2(const Mat2&)> dw;
    // W(I+G) and DW(I+G) evaluated directly from the displacement gradient;
    // near the identity this avoids the cancellation of the deformation form
    // and keeps energies accurate relative to |G|^2.
    std::function<double(const Mat2&)> w_disp;
    std::function<Mat2(const Mat2&)> dw_disp;
    QuadForm quad_form;
    double theta = 0.0;

    double operator()(const Mat2& f) const { return w(f); }
};

// W(F) = dist^2(F, SO(2)); theta = 1, Q(G) = |sym G|^2.
MaterialLaw builtin_dist_squared_law();

// W(F) = 1/4 |F^T F - I|^2. Satisfies the class bounds on det F >= 0 (with
// theta = 1/4) but not on the orientation-reversing branch; intended for the
// stiff component only.
MaterialLaw builtin_st_venant_law();

MaterialLaw law_by_name(const std::string& name);

// Soft-component law with quadratic growth and Lipschitz constants.
struct SoftLaw {
    MaterialLaw law;
    double growth_Theta = 0.0;
};
SoftLaw builtin_soft_dist_squared_law();

struct PropertyCheck {
    std::string property;
    bool pass = true;
    double worst_margin = 0.0; // positive = slack, negative = violation
    std::string detail;
};

struct MembershipReport {
    std::vector<PropertyCheck> checks;
    bool all_pass() const {
        for (const auto& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// Randomized verification of the material class: frame-indifference, natural
// state, non-degeneracy and the quadratic expansion, with worst-case margins.
MembershipReport verify_class_membership(const MaterialLaw& law, int samples,
                                         std::uint64_t seed);

} // namespace hicon

#endif
