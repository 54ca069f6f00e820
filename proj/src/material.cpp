#include "hicon/material.hpp"

#include <cmath>

#include "hicon/rng.hpp"

namespace hicon {

RotationDistance dist_to_rotations(const Mat2& f) {
    const double s = f(0, 0) + f(1, 1);
    const double w = f(1, 0) - f(0, 1);
    const double t = std::sqrt(s * s + w * w);
    Mat2 r = Mat2::identity(); // tie (t = 0) resolves to I
    if (t > 0.0) r = Mat2(s / t, -w / t, w / t, s / t);
    const double d2 = ddot(f, f) + 2.0 - 2.0 * t;
    return {std::sqrt(d2 > 0.0 ? d2 : 0.0), r};
}

namespace {

Mat2 central_difference_gradient(const std::function<double(const Mat2&)>& w, const Mat2& f,
                                 double step) {
    Mat2 g;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j) {
            Mat2 fp = f, fm = f;
            fp(i, j) += step;
            fm(i, j) -= step;
            g(i, j) = (w(fp) - w(fm)) / (2.0 * step);
        }
    return g;
}

} // namespace

MaterialLaw builtin_dist_squared_law() {
    MaterialLaw law;
    law.kind = LawKind::DistSquared;
    law.name = "dist-squared";
    law.w = [](const Mat2& f) {
        const double s = f(0, 0) + f(1, 1);
        const double w = f(1, 0) - f(0, 1);
        const double d2 = ddot(f, f) + 2.0 - 2.0 * std::sqrt(s * s + w * w);
        return d2 > 0.0 ? d2 : 0.0;
    };
    law.dw = [law_w = law.w](const Mat2& f) {
        const double s = f(0, 0) + f(1, 1);
        const double w = f(1, 0) - f(0, 1);
        const double t = std::sqrt(s * s + w * w);
        if (t < 1e-12) return central_difference_gradient(law_w, f, 1e-6);
        // DW(F) = 2 (F - R*(F)) with R* the nearest rotation
        const Mat2 r(s / t, -w / t, w / t, s / t);
        return 2.0 * (f - r);
    };
    law.w_disp = [](const Mat2& g) {
        // dist^2(I+G, SO(2)) = |G|^2 + 2 (s - t) with s = 2 + tr G,
        // w = G21 - G12, t = sqrt(s^2 + w^2). For s >= 0 the difference
        // s - t = -w^2/(s + t) is cancellation-free and every term is
        // O(|G|^2); for s < 0 the direct difference has no cancellation.
        const double s = 2.0 + g(0, 0) + g(1, 1);
        const double w = g(1, 0) - g(0, 1);
        const double t = std::sqrt(s * s + w * w);
        const double s_minus_t = s >= 0.0 ? -w * w / (s + t) : s - t;
        return ddot(g, g) + 2.0 * s_minus_t;
    };
    law.dw_disp = [dw = law.dw](const Mat2& g) {
        const double s = 2.0 + g(0, 0) + g(1, 1);
        const double w = g(1, 0) - g(0, 1);
        const double t = std::sqrt(s * s + w * w);
        if (t < 1e-12) return dw(Mat2::identity() + g);
        const double u = s >= 0.0 ? w * w / (t + s) : t - s; // t - s, stable
        Mat2 r;
        r(0, 0) = 2.0 * (g(0, 0) + u / t);
        r(1, 1) = 2.0 * (g(1, 1) + u / t);
        r(0, 1) = 2.0 * (g(0, 1) + w / t);
        r(1, 0) = 2.0 * (g(1, 0) - w / t);
        return r;
    };
    law.quad_form = QuadForm::dist_squared();
    law.theta = 1.0;
    return law;
}

MaterialLaw builtin_st_venant_law() {
    MaterialLaw law;
    law.kind = LawKind::StVenant;
    law.name = "st-venant";
    law.w = [](const Mat2& f) {
        const Mat2 c = matmul(transpose(f), f) - Mat2::identity();
        return 0.25 * ddot(c, c);
    };
    law.dw = [](const Mat2& f) {
        const Mat2 c = matmul(transpose(f), f) - Mat2::identity();
        return matmul(f, c);
    };
    law.w_disp = [](const Mat2& g) {
        Mat2 c = g + transpose(g) + matmul(transpose(g), g);
        return 0.25 * ddot(c, c);
    };
    law.dw_disp = [](const Mat2& g) {
        const Mat2 c = g + transpose(g) + matmul(transpose(g), g);
        return matmul(Mat2::identity() + g, c);
    };
    law.quad_form = QuadForm::dist_squared();
    law.theta = 0.25;
    return law;
}

MaterialLaw law_by_name(const std::string& name) {
    if (name == "dist-squared") return builtin_dist_squared_law();
    if (name == "st-venant") return builtin_st_venant_law();
    throw std::invalid_argument("unknown material law: " + name);
}

SoftLaw builtin_soft_dist_squared_law() {
    // dist^2(F,SO(2)) <= |F - I|^2 <= 2(1+|F|^2) and the increment bound
    // follows from |dist(F+G) - dist(F)| <= |G| with dist(F) <= 1 + |F|.
    return SoftLaw{builtin_dist_squared_law(), 4.0};
}

MembershipReport verify_class_membership(const MaterialLaw& law, int samples,
                                         std::uint64_t seed) {
    require(samples >= 100, "verify_class_membership: need at least 100 samples");
    Rng rng(seed);
    MembershipReport report;

    PropertyCheck natural;
    natural.property = "natural-state W(I)=0";
    natural.worst_margin = 1e-14 - std::abs(law.w(Mat2::identity()));
    natural.pass = natural.worst_margin >= 0.0;
    report.checks.push_back(natural);

    PropertyCheck frame, nondeg, expansion, nonneg, dispform;
    frame.property = "frame-indifference";
    nondeg.property = "non-degeneracy";
    expansion.property = "quadratic-expansion";
    nonneg.property = "non-negativity";
    dispform.property = "displacement-form-consistency";
    frame.worst_margin = nondeg.worst_margin = expansion.worst_margin =
        nonneg.worst_margin = dispform.worst_margin = 1e300;

    for (int s = 0; s < samples; ++s) {
        Mat2 f;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) f(i, j) = uniform(rng, -2.0, 2.0);
        const double wf = law.w(f);
        nonneg.worst_margin = std::min(nonneg.worst_margin, wf);

        const Mat2 r = Mat2::rotation(uniform(rng, 0.0, 2.0 * M_PI));
        const double scale = std::max(1.0, std::abs(wf));
        frame.worst_margin = std::min(
            frame.worst_margin, 1e-10 - std::abs(law.w(matmul(r, f)) - wf) / scale);

        const double d = dist_to_rotations(f).distance;
        nondeg.worst_margin = std::min(nondeg.worst_margin, wf - law.theta * d * d);

        // |W(I+tG)/t^2 - Q(G)| <= c t with one constant across samples and both
        // step sizes; c = 5 (1+|G|)^3 covers the shipped laws with slack while
        // a wrong quadratic form leaves an O(1) defect
        Mat2 g;
        for (int i = 0; i < 2; ++i)
            for (int j = 0; j < 2; ++j) g(i, j) = uniform(rng, -1.0, 1.0);
        const double q = law.quad_form(g);
        const double gn = 1.0 + frob(g);
        for (double t : {1e-2, 1e-3}) {
            const double err = std::abs(law.w(Mat2::identity() + t * g) / (t * t) - q);
            expansion.worst_margin =
                std::min(expansion.worst_margin, 5.0 * t * gn * gn * gn - err);
        }
        if (law.w_disp) {
            const double direct = law.w_disp(g);
            const double via_f = law.w(Mat2::identity() + g);
            dispform.worst_margin = std::min(
                dispform.worst_margin,
                1e-10 * std::max(1.0, std::abs(via_f)) - std::abs(direct - via_f));
        }
    }
    if (law.theta <= 0.0) {
        nondeg.pass = false;
        nondeg.detail = "theta must be positive";
        nondeg.worst_margin = -1.0;
    }
    frame.pass = frame.worst_margin >= 0.0;
    nondeg.pass = nondeg.pass && nondeg.worst_margin >= -1e-12;
    expansion.pass = expansion.worst_margin >= 0.0;
    nonneg.pass = nonneg.worst_margin >= -1e-14;
    dispform.pass = dispform.worst_margin >= 0.0;
    report.checks.push_back(frame);
    report.checks.push_back(nonneg);
    report.checks.push_back(nondeg);
    report.checks.push_back(expansion);
    if (law.w_disp) report.checks.push_back(dispform);
    return report;
}

} // namespace hicon
