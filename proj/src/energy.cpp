#include "hicon/energy.hpp"

#include <cmath>

#include "hicon/assemble.hpp"
#include "hicon/descent.hpp"
#include "hicon/parallel.hpp"
#include "hicon/rng.hpp"
#include "hicon/sparse.hpp"

namespace hicon {

namespace {

struct ElasticParts {
    double soft = 0.0, stiff = 0.0;
};

ElasticParts elastic_parts(const std::vector<Element>& elements, const Laws& laws,
                           const VectorField& phi) {
    ElasticParts out;
    auto eval = [&](const MaterialLaw& law, const Mat2& g) {
        return law.w_disp ? law.w_disp(g) : law.w(Mat2::identity() + g);
    };
    out.soft = par::reduce_sum(elements.size(), [&](std::size_t k) {
        const Element& e = elements[k];
        if (e.tag != ComponentTag::Soft) return 0.0;
        Mat2 g;
        for (int a = 0; a < 3; ++a) g += Mat2::outer(phi.get(e.n[a]), e.grad[a]);
        return e.area * eval(laws.w0, g);
    });
    out.stiff = par::reduce_sum(elements.size(), [&](std::size_t k) {
        const Element& e = elements[k];
        if (e.tag != ComponentTag::Stiff) return 0.0;
        Mat2 g;
        for (int a = 0; a < 3; ++a) g += Mat2::outer(phi.get(e.n[a]), e.grad[a]);
        return e.area * eval(laws.w1, g);
    });
    if (!std::isfinite(out.soft) || !std::isfinite(out.stiff)) {
        for (std::size_t k = 0; k < elements.size(); ++k) {
            const Element& e = elements[k];
            Mat2 g;
            for (int a = 0; a < 3; ++a) g += Mat2::outer(phi.get(e.n[a]), e.grad[a]);
            const double w = eval(e.tag == ComponentTag::Soft ? laws.w0 : laws.w1, g);
            if (!std::isfinite(w))
                throw std::runtime_error("energy: non-finite stored energy at element " +
                                         std::to_string(k));
        }
    }
    return out;
}

// Gradient of the weighted elastic energy; per-element forces in parallel,
// serial scatter in element order.
void elastic_force(const std::vector<Element>& elements, const Laws& laws, double stiff_weight,
                   const VectorField& phi, std::vector<double>& out) {
    std::vector<double> local(elements.size() * 6);
    par::for_each(elements.size(), [&](std::size_t k) {
        const Element& e = elements[k];
        Mat2 g;
        for (int a = 0; a < 3; ++a) g += Mat2::outer(phi.get(e.n[a]), e.grad[a]);
        const MaterialLaw& law = e.tag == ComponentTag::Soft ? laws.w0 : laws.w1;
        const Mat2 p = law.dw_disp ? law.dw_disp(g) : law.dw(Mat2::identity() + g);
        const double w = (e.tag == ComponentTag::Soft ? 1.0 : stiff_weight) * e.area;
        for (int a = 0; a < 3; ++a)
            for (int i = 0; i < 2; ++i)
                local[6 * k + 2 * a + i] = w * (p(i, 0) * e.grad[a].x + p(i, 1) * e.grad[a].y);
    });
    std::fill(out.begin(), out.end(), 0.0);
    for (std::size_t k = 0; k < elements.size(); ++k) {
        const Element& e = elements[k];
        for (int a = 0; a < 3; ++a) {
            out[2 * e.n[a]] += local[6 * k + 2 * a];
            out[2 * e.n[a] + 1] += local[6 * k + 2 * a + 1];
        }
    }
}

} // namespace

EnergyReport energy_report(const MacroMesh& mesh, const Laws& laws, const RealizedLoad& load,
                           const VectorField& phi) {
    require(mesh.field_zero_on_gamma(phi, 0.0), "energy: displacement must vanish on Gamma");
    const double gamma = mesh.geom().gamma();
    const double contrast = std::pow(mesh.geom().epsilon(), -2.0 * gamma);
    const ElasticParts parts = elastic_parts(mesh.elements(), laws, phi);
    EnergyReport r;
    r.elastic_soft = parts.soft;
    r.elastic_stiff = contrast * parts.stiff;
    r.load = load_work(mesh.elements(), load.l, phi);
    r.lambda_eps = load.lambda;
    r.scaled_total = (r.elastic() - r.load) / (load.lambda * load.lambda);
    return r;
}

double elastic_energy(const MacroMesh& mesh, const Laws& laws, const VectorField& phi) {
    const double contrast = std::pow(mesh.geom().epsilon(), -2.0 * mesh.geom().gamma());
    const ElasticParts parts = elastic_parts(mesh.elements(), laws, phi);
    return parts.soft + contrast * parts.stiff;
}

MinimizeResult minimize_total(const MacroMesh& mesh, const Laws& laws, const RealizedLoad& load,
                              LoadRegime regime, const MinimizeOptions& opts,
                              const VectorField* init) {
    const auto& elements = mesh.elements();
    const int nodes = mesh.node_count();
    const std::size_t n = 2 * static_cast<std::size_t>(nodes);
    const double contrast = std::pow(mesh.geom().epsilon(), -2.0 * mesh.geom().gamma());

    std::vector<std::uint8_t> mask(n, 0);
    for (int id : mesh.gamma_nodes()) mask[2 * id] = mask[2 * id + 1] = 1;

    const CsrMatrix k_lin = assemble_contrast_stiffness(
        elements, nodes, laws.w0.quad_form, laws.w1.quad_form, contrast);
    const BandCholesky precond(k_lin, mask);

    // Work on the lambda-normalized profile psi = phi / lambda: the functional
    // lambda^-2 (Lambda(lambda psi) - int l . lambda psi) and its minimizer
    // are O(1) for every eps, which keeps the descent away from FP noise. The
    // Hessian in psi equals the contrast stiffness, so the preconditioner is
    // unchanged.
    const double lambda = load.lambda;
    auto energy_fn = [&](const std::vector<double>& x) {
        VectorField p;
        p.v.resize(n);
        par::for_each(n, [&](std::size_t i) { p.v[i] = lambda * x[i]; });
        const ElasticParts parts = elastic_parts(elements, laws, p);
        return (parts.soft + contrast * parts.stiff) / (lambda * lambda) -
               par::reduce_sum(n, [&](std::size_t i) { return load.rhs[i] * x[i]; }) / lambda;
    };
    auto grad_fn = [&](const std::vector<double>& x, std::vector<double>& g) {
        VectorField p;
        p.v.resize(n);
        par::for_each(n, [&](std::size_t i) { p.v[i] = lambda * x[i]; });
        g.resize(n);
        elastic_force(elements, laws, contrast, p, g);
        par::for_each(n, [&](std::size_t i) {
            g[i] = (g[i] - load.rhs[i]) / lambda;
            if (mask[i]) g[i] = 0.0;
        });
    };

    DescentOptions dopts;
    dopts.tol = opts.tol;
    dopts.max_iters = opts.max_iters;
    dopts.memory = opts.lbfgs_memory;
    // stationarity is measured in displacement variables: the psi-gradient is
    // the phi-gradient over lambda, so the threshold scales accordingly
    dopts.grad_scale = (1.0 + std::sqrt(par::reduce_sum(n, [&](std::size_t i) {
                            return load.rhs[i] * load.rhs[i];
                        }))) / lambda;

    VectorField start = init ? *init : VectorField(nodes);
    require(mesh.field_zero_on_gamma(start, 0.0), "minimize: init must respect Gamma");
    std::vector<double> start_psi(n);
    for (std::size_t i = 0; i < n; ++i) start_psi[i] = start.v[i] / lambda;

    const int extra = regime == LoadRegime::FiniteStrain ? opts.multistart : 0;
    std::vector<DescentResult> runs;
    runs.push_back(lbfgs_minimize(start_psi, energy_fn, grad_fn, precond, mask, dopts));

    // perturbed restarts: bumps inside the inclusions, where the energy is
    // non-convex; in profile variables the soft scale is eps
    const double bump = 0.1 * mesh.geom().epsilon();
    for (int s = 1; s <= extra; ++s) {
        Rng rng(sub_seed(opts.seed, "multistart", static_cast<std::uint64_t>(s)));
        std::vector<double> p = start_psi;
        for (int id = 0; id < nodes; ++id)
            if (mesh.node_info()[id].incl == InclusionNodeState::Interior) {
                p[2 * id] += bump * uniform(rng, -1.0, 1.0);
                p[2 * id + 1] += bump * uniform(rng, -1.0, 1.0);
            }
        runs.push_back(lbfgs_minimize(std::move(p), energy_fn, grad_fn, precond, mask, dopts));
    }

    std::size_t best = 0;
    double lo = runs[0].value, hi = runs[0].value;
    for (std::size_t s = 1; s < runs.size(); ++s) {
        lo = std::min(lo, runs[s].value);
        hi = std::max(hi, runs[s].value);
        if (runs[s].value < runs[best].value) best = s;
    }

    MinimizeResult out;
    out.phi.v.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.phi.v[i] = lambda * runs[best].x[i];
    out.trace = std::move(runs[best].trace);
    out.converged = runs[best].converged;
    out.iterations = runs[best].iterations;
    out.starts = static_cast<int>(runs.size());
    out.multistart_spread = hi - lo;
    out.report = energy_report(mesh, laws, load, out.phi);
    return out;
}

} // namespace hicon
