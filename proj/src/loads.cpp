#include "hicon/loads.hpp"

#include <cmath>

#include "hicon/assemble.hpp"
#include "hicon/parallel.hpp"

namespace hicon {

std::function<Vec2(Vec2)> macro_profile(const std::string& name) {
    if (name == "sine")
        return [](Vec2 x) { return Vec2(std::sin(M_PI * x.x) * std::sin(M_PI * x.y), 0.0); };
    if (name == "const") return [](Vec2) { return Vec2(1.0, 0.0); };
    if (name == "shear") return [](Vec2 x) { return Vec2(0.0, std::sin(M_PI * x.x)); };
    throw std::invalid_argument("unknown load profile: " + name);
}

std::function<Vec2(Vec2, Vec2)> soft_profile(const std::string& name) {
    if (name == "none") return [](Vec2, Vec2) { return Vec2(0.0, 0.0); };
    if (name == "cell-sine")
        return [](Vec2 x, Vec2 y) {
            return Vec2(std::sin(M_PI * x.x) * std::sin(2.0 * M_PI * y.x) *
                            std::sin(2.0 * M_PI * y.y),
                        0.0);
        };
    if (name == "cell-const") return [](Vec2, Vec2) { return Vec2(1.0, 0.0); };
    throw std::invalid_argument("unknown soft load profile: " + name);
}

double lambda_formula(double norm_omega, double norm_soft, double eps, double gamma) {
    return std::pow(eps, gamma) * norm_omega + eps * norm_soft;
}

RealizedLoad realize(const LoadSpec& spec, const MacroMesh& mesh) {
    const CompositeGeometry& geom = mesh.geom();
    const double eps = geom.epsilon();
    const double gamma = geom.gamma();
    require(spec.amplitude != 0.0 || spec.soft_amplitude != 0.0,
            "loads must be nonzero (L^2(Omega) \\ {0})");
    if (spec.regime == LoadRegime::FiniteStrain) {
        require(gamma < 1.0, "finite-strain preset requires gamma < 1");
        require(spec.soft_amplitude == 0.0,
                "finite-strain preset does not take a soft load term");
    }

    const auto f = macro_profile(spec.profile);
    const auto h = soft_profile(spec.soft_profile);
    const double scale =
        spec.regime == LoadRegime::FiniteStrain ? std::pow(eps, -gamma) : 1.0;

    RealizedLoad out;
    const auto& elements = mesh.elements();
    out.l.resize(elements.size());
    for (std::size_t t = 0; t < elements.size(); ++t) {
        const Vec2 x = elements[t].bary;
        const CellIndex c = geom.cell_of(x);
        const Vec2 y(x.x / eps - c.i, x.y / eps - c.j);
        out.l[t] = scale * (spec.amplitude * f(x) + spec.soft_amplitude * h(x, y));
    }

    double n2_omega = 0.0, n2_soft = 0.0;
    for (std::size_t t = 0; t < elements.size(); ++t) {
        const double w = elements[t].area * dot(out.l[t], out.l[t]);
        n2_omega += w;
        if (elements[t].tag == ComponentTag::Soft) n2_soft += w;
    }
    out.norm_omega = std::sqrt(n2_omega);
    out.norm_soft = std::sqrt(n2_soft);
    require(out.norm_omega > 0.0, "loads must be nonzero (L^2(Omega) \\ {0})");
    out.lambda = lambda_formula(out.norm_omega, out.norm_soft, eps, gamma);

    out.l1.resize(elements.size());
    out.l0.resize(elements.size());
    const double s1 = std::pow(eps, gamma) / out.lambda;
    const double s0 = eps / out.lambda;
    for (std::size_t t = 0; t < elements.size(); ++t) {
        out.l1[t] = s1 * out.l[t];
        out.l0[t] = elements[t].tag == ComponentTag::Soft ? s0 * out.l[t] : Vec2();
    }
    out.rhs = assemble_load(elements, mesh.node_count(), out.l);
    return out;
}

namespace {

// Midpoint quadrature of |g|^2 over Omega.
double macro_norm_sq(const CompositeGeometry& geom, const std::function<Vec2(Vec2)>& g, int n) {
    const double hx = geom.lx() / n, hy = geom.ly() / n;
    return par::reduce_sum(static_cast<std::size_t>(n) * n, [&](std::size_t k) {
        const int i = static_cast<int>(k % n), j = static_cast<int>(k / n);
        const Vec2 x((i + 0.5) * hx, (j + 0.5) * hy);
        const Vec2 v = g(x);
        return hx * hy * dot(v, v);
    });
}

} // namespace

LimitLoads limit_loads(const LoadSpec& spec, const CompositeGeometry& geom) {
    const auto f = macro_profile(spec.profile);
    const auto h = soft_profile(spec.soft_profile);
    const double af = spec.amplitude, ah = spec.soft_amplitude;
    const double gamma = geom.gamma();
    const InclusionShape incl = geom.inclusion();

    LimitLoads out;
    if (spec.regime == LoadRegime::FiniteStrain) {
        const double nf = std::sqrt(macro_norm_sq(geom, [&](Vec2 x) { return af * f(x); }, 512));
        out.c0 = nf;
        out.lambda0 = nf;
        out.l0_zero = true;
        out.l0 = [](Vec2, Vec2) { return Vec2(); };
        out.l1 = [f, af, nf](Vec2 x) { return (af / nf) * f(x); };
        return out;
    }

    // small strain: c0 = lim lambda_eps / eps^min(gamma,1)
    const int nq = 256, nc = 32;
    double ff2 = 0.0, ff2_soft = 0.0; // iint |F|^2 over Omega x Y and Omega x Y0
    {
        const double hx = geom.lx() / nq, hy = geom.ly() / nq, hc = 1.0 / nc;
        ff2 = par::reduce_sum(static_cast<std::size_t>(nq) * nq, [&](std::size_t k) {
            const int i = static_cast<int>(k % nq), j = static_cast<int>(k / nq);
            const Vec2 x((i + 0.5) * hx, (j + 0.5) * hy);
            double s = 0.0;
            for (int ci = 0; ci < nc; ++ci)
                for (int cj = 0; cj < nc; ++cj) {
                    const Vec2 y((ci + 0.5) * hc, (cj + 0.5) * hc);
                    const Vec2 v = af * f(x) + ah * h(x, y);
                    s += hc * hc * dot(v, v);
                }
            return hx * hy * s;
        });
        ff2_soft = par::reduce_sum(static_cast<std::size_t>(nq) * nq, [&](std::size_t k) {
            const int i = static_cast<int>(k % nq), j = static_cast<int>(k / nq);
            const Vec2 x((i + 0.5) * hx, (j + 0.5) * hy);
            double s = 0.0;
            for (int ci = 0; ci < nc; ++ci)
                for (int cj = 0; cj < nc; ++cj) {
                    const Vec2 y((ci + 0.5) * hc, (cj + 0.5) * hc);
                    if (!incl.contains(y)) continue;
                    const Vec2 v = af * f(x) + ah * h(x, y);
                    s += hc * hc * dot(v, v);
                }
            return hx * hy * s;
        });
    }

    out.lambda0 = 0.0;
    if (gamma >= 1.0) {
        out.c0 = std::sqrt(ff2) + std::sqrt(ff2_soft);
        out.l0_zero = ff2_soft == 0.0;
        const double c0 = out.c0;
        out.l0 = [f, h, af, ah, incl, c0](Vec2 x, Vec2 y) {
            if (!incl.contains(y)) return Vec2();
            return (1.0 / c0) * (af * f(x) + ah * h(x, y));
        };
        // weak limit of the oscillating part is the cell average
        out.l1 = [f, h, af, ah, c0, nc](Vec2 x) {
            Vec2 mean;
            if (ah != 0.0) {
                const double hc = 1.0 / nc;
                for (int ci = 0; ci < nc; ++ci)
                    for (int cj = 0; cj < nc; ++cj)
                        mean += (hc * hc) * h(x, Vec2((ci + 0.5) * hc, (cj + 0.5) * hc));
            }
            return (1.0 / c0) * (af * f(x) + ah * mean);
        };
    } else {
        out.c0 = std::sqrt(ff2);
        out.l0_zero = true;
        out.l0 = [](Vec2, Vec2) { return Vec2(); };
        const double c0 = out.c0;
        out.l1 = [f, h, af, ah, c0, nc](Vec2 x) {
            Vec2 mean;
            if (ah != 0.0) {
                const double hc = 1.0 / nc;
                for (int ci = 0; ci < nc; ++ci)
                    for (int cj = 0; cj < nc; ++cj)
                        mean += (hc * hc) * h(x, Vec2((ci + 0.5) * hc, (cj + 0.5) * hc));
            }
            return (1.0 / c0) * (af * f(x) + ah * mean);
        };
    }
    return out;
}

} // namespace hicon
