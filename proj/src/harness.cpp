#include "hicon/harness.hpp"

#include <chrono>
#include <cmath>
#include <ostream>

#include "hicon/rng.hpp"

namespace hicon {

namespace {

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

Laws laws_from(const ExperimentConfig& cfg) {
    return Laws{law_by_name(cfg.w0), law_by_name(cfg.w1)};
}

} // namespace

ConvergenceReport run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    const Laws laws = laws_from(cfg);
    const int m = cfg.mesh_per_cell;

    ConvergenceReport report;
    report.seed = cfg.seed;

    // Limit solution once: finest macro mesh, cell resolution matched to the
    // per-cell mesh so the discretization bias cancels from the gaps.
    const auto t_limit = std::chrono::steady_clock::now();
    const CompositeGeometry finest = cfg.geometry(cfg.eps_denominators.back());
    const CellMesh cell(m, cfg.inclusion);
    const MacroMesh limit_mesh(finest, m);
    const LimitLoads lim_loads = limit_loads(cfg.load, finest);
    const EffectiveForm eff = effective_form(laws.w1.quad_form, cell);

    LimitSolution limit;
    if (cfg.load.regime == LoadRegime::SmallStrain) {
        limit = limit_small_solve(eff, laws.w0.quad_form, lim_loads, limit_mesh, finest);
    } else {
        limit = limit_large_solve(eff, SoftLaw{laws.w0, 4.0}, lim_loads, limit_mesh, finest,
                                  cfg.multistart, sub_seed(cfg.seed, "limit-soft"),
                                  lim_loads.lambda0);
    }
    report.m0 = limit.m0;
    report.m0_reassembled = limit.reassembled();
    report.limit_multistart_spread = limit.multistart_spread;
    report.effective = eff.q;
    report.limit_walltime_s = seconds_since(t_limit);

    for (std::size_t row = 0; row < cfg.eps_denominators.size(); ++row) {
        const auto t_row = std::chrono::steady_clock::now();
        ReportRow r;
        const int n = cfg.eps_denominators[row];
        r.eps = 1.0 / n;
        try {
            const CompositeGeometry geom = cfg.geometry(n);
            const MacroMesh mesh(geom, m);
            const RealizedLoad load = realize(cfg.load, mesh);
            r.lambda_eps = load.lambda;

            MinimizeOptions mopts;
            mopts.tol = cfg.tol;
            mopts.max_iters = cfg.max_iters;
            mopts.multistart = cfg.multistart;
            mopts.seed = sub_seed(cfg.seed, "minimize", static_cast<std::uint64_t>(n));
            const MinimizeResult min = minimize_total(mesh, laws, load, cfg.load.regime, mopts);
            if (!min.converged) r.status = "non-converged";

            r.scaled_infimum = min.report.scaled_total;
            r.gap_to_limit = std::abs(r.scaled_infimum - report.m0);

            r.apriori_ratio = apriori_ratio(mesh, laws, min.phi);
            r.poincare_ratio = high_contrast_poincare_ratio(mesh, min.phi);

            VectorField v(mesh.node_count());
            for (int id = 0; id < mesh.node_count(); ++id)
                v.set(id, mesh.node_coord(id) + min.phi.get(id));
            const RigidityReport rig =
                rigidity_report(mesh, v, RigidityRegion::Stiff, RigidityBc::IdentityOnGamma);
            r.rigidity_ratio = rig.exact_rigidity ? 1.0 : rig.ratio_full;

            Splitting s = split(mesh, min.phi);
            const double inv_lambda = 1.0 / load.lambda;
            for (double& x : s.g0.v) x *= inv_lambda;
            for (double& x : s.g1.v) x *= inv_lambda;
            const SampledLimit sampled = sample_limit(limit.limit, mesh);
            const TwoScaleDistances d = two_scale_distance(mesh, s, sampled);
            r.d0 = d.d0;
            r.d1 = d.d1;
            r.dpsi = d.dpsi;
        } catch (const std::exception& e) {
            r.status = std::string("error: ") + e.what();
        }
        r.walltime_s = seconds_since(t_row);
        report.rows.push_back(r);
    }
    return report;
}

QuadForm run_cell(const ExperimentConfig& cfg) {
    const Laws laws = laws_from(cfg);
    const CellMesh cell(cfg.cell_resolution, cfg.inclusion);
    return effective_form(laws.w1.quad_form, cell).q;
}

int run_check_suite(const ExperimentConfig& cfg, std::ostream& os) {
    int failures = 0;
    auto check = [&](const std::string& name, bool ok, double margin) {
        os << (ok ? "[PASS] " : "[FAIL] ") << name << " (margin " << margin << ")\n";
        if (!ok) ++failures;
    };

    const Laws laws = laws_from(cfg);
    const int n = cfg.eps_denominators.front();
    const CompositeGeometry geom = cfg.geometry(n);
    const MacroMesh mesh(geom, cfg.mesh_per_cell);
    Rng rng(sub_seed(cfg.seed, "check"));

    // geometry: exact soft volume fraction
    {
        double soft = 0.0;
        for (const Element& e : mesh.elements())
            if (e.tag == ComponentTag::Soft) soft += e.area;
        const double err = std::abs(soft - geom.soft_area());
        const double tol = cfg.inclusion.kind == InclusionKind::CenteredSquare
                               ? 1e-12
                               : 4.0 * geom.epsilon() * mesh.h();
        check("geometry.soft-volume", err <= tol, tol - err);
    }

    // unfolding isometry on a random field
    {
        VectorField u(mesh.node_count());
        for (double& x : u.v) x = uniform(rng, -1.0, 1.0);
        const double a = l2_norm(unfold(mesh, u));
        const double b = std::sqrt(l2_norm_sq(mesh.elements(), u));
        const double err = std::abs(a - b) / b;
        check("unfolding.isometry", err <= 1e-12, 1e-12 - err);
    }

    // splitting reconstruction and idempotence on a random clamped field
    {
        VectorField phi(mesh.node_count());
        for (int id = 0; id < mesh.node_count(); ++id)
            if (!mesh.node_info()[id].on_gamma)
                phi.set(id, Vec2(uniform(rng, -1.0, 1.0), uniform(rng, -1.0, 1.0)));
        const Splitting s = split(mesh, phi);
        const double eg = std::pow(geom.epsilon(), geom.gamma());
        double worst = 0.0;
        for (std::size_t i = 0; i < phi.v.size(); ++i)
            worst = std::max(worst,
                             std::abs(geom.epsilon() * s.g0.v[i] + eg * s.g1.v[i] - phi.v[i]));
        check("splitting.reconstruction", worst <= 1e-12, 1e-12 - worst);

        VectorField rebuilt(mesh.node_count());
        for (std::size_t i = 0; i < phi.v.size(); ++i)
            rebuilt.v[i] = geom.epsilon() * s.g0.v[i] + eg * s.g1.v[i];
        const Splitting s2 = split(mesh, rebuilt);
        double worst2 = 0.0;
        for (std::size_t i = 0; i < phi.v.size(); ++i)
            worst2 = std::max({worst2, std::abs(s2.g0.v[i] - s.g0.v[i]),
                               std::abs(s2.g1.v[i] - s.g1.v[i])});
        check("splitting.idempotence", worst2 <= 1e-10, 1e-10 - worst2);
    }

    // material class membership
    {
        const MembershipReport mr =
            verify_class_membership(laws.w0, 1000, sub_seed(cfg.seed, "check-material"));
        for (const auto& c : mr.checks)
            check("material.w0." + c.property, c.pass, c.worst_margin);
    }

    // effective form sanity at the sweep resolution
    {
        const CellMesh cell(cfg.mesh_per_cell, cfg.inclusion);
        const EffectiveForm eff = effective_form(laws.w1.quad_form, cell);
        const Mat2 skew(0.0, 1.0, -1.0, 0.0);
        check("effective.skew-annihilation", std::abs(eff.q(skew)) <= 1e-12,
              1e-12 - std::abs(eff.q(skew)));
        const double mineig = eff.q.min_symmetric_eigenvalue();
        check("effective.sym-positive", mineig > 0.0, mineig);
    }

    return failures;
}

} // namespace hicon
