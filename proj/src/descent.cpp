#include "hicon/descent.hpp"

#include <cmath>
#include <deque>
#include <limits>

#include "hicon/parallel.hpp"

namespace hicon {

namespace {
double vdot(const std::vector<double>& a, const std::vector<double>& b) {
    return par::reduce_sum(a.size(), [&](std::size_t i) { return a[i] * b[i]; });
}
} // namespace

DescentResult lbfgs_minimize(
    std::vector<double> x0, const std::function<double(const std::vector<double>&)>& energy,
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& gradient,
    const BandCholesky& precond, const std::vector<std::uint8_t>& mask,
    const DescentOptions& opts) {
    const std::size_t n = x0.size();
    DescentResult out;
    std::vector<double> g(n), d(n), tmp(n);
    std::deque<std::pair<std::vector<double>, std::vector<double>>> history; // (s, y)

    std::vector<double> x = std::move(x0);
    int stalled = 0;
    double e = energy(x);
    out.trace.push_back(e);
    gradient(x, g);

    for (int it = 0; it < opts.max_iters; ++it) {
        if (std::sqrt(vdot(g, g)) <= opts.tol * opts.grad_scale) {
            out.converged = true;
            out.iterations = it;
            break;
        }
        d = g;
        std::vector<double> alpha(history.size());
        for (std::size_t h = history.size(); h-- > 0;) {
            const auto& [s, y] = history[h];
            const double a = vdot(s, d) / vdot(s, y);
            alpha[h] = a;
            par::for_each(n, [&](std::size_t i) { d[i] -= a * y[i]; });
        }
        precond.solve(d, tmp);
        d.swap(tmp);
        for (std::size_t h = 0; h < history.size(); ++h) {
            const auto& [s, y] = history[h];
            const double b = vdot(y, d) / vdot(s, y);
            par::for_each(n, [&](std::size_t i) { d[i] += (alpha[h] - b) * s[i]; });
        }
        par::for_each(n, [&](std::size_t i) { d[i] = mask[i] ? 0.0 : -d[i]; });

        double gd = vdot(g, d);
        if (gd >= 0.0) { // curvature went bad; restart from the quadratic model
            history.clear();
            precond.solve(g, d);
            par::for_each(n, [&](std::size_t i) { d[i] = mask[i] ? 0.0 : -d[i]; });
            gd = vdot(g, d);
            if (gd >= 0.0) {
                out.iterations = it;
                break;
            }
        }

        double step = 1.0;
        std::vector<double> trial(n);
        double e_trial = 0.0;
        bool accepted = false;
        for (int ls = 0; ls < 48; ++ls) {
            par::for_each(n, [&](std::size_t i) { trial[i] = x[i] + step * d[i]; });
            e_trial = energy(trial);
            // sufficient decrease with an allowance for roundoff in the
            // energy sums; without it the search stalls once the decrement
            // drops below the FP resolution of the energy
            const double noise =
                8.0 * std::numeric_limits<double>::epsilon() * (std::abs(e) + std::abs(e_trial));
            if (std::isfinite(e_trial) && e_trial <= e + 1e-4 * step * gd + noise) {
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if (!accepted) {
            out.iterations = it;
            break; // line-search failure: caller sees converged == false
        }

        const double decrement = e - e_trial;
        const double noise_floor =
            8.0 * std::numeric_limits<double>::epsilon() * (std::abs(e) + std::abs(e_trial));

        std::vector<double> g_new(n);
        gradient(trial, g_new);
        if (decrement > noise_floor) {
            stalled = 0;
            std::vector<double> s(n), y(n);
            par::for_each(n, [&](std::size_t i) {
                s[i] = trial[i] - x[i];
                y[i] = g_new[i] - g[i];
            });
            const double sy = vdot(s, y);
            if (sy > 1e-14 * std::sqrt(vdot(s, s)) * std::sqrt(vdot(y, y))) {
                history.emplace_back(std::move(s), std::move(y));
                if (static_cast<int>(history.size()) > opts.memory) history.pop_front();
            }
        } else if (++stalled >= 3) {
            // progress sits below the FP resolution of the energy
            x.swap(trial);
            e = e_trial;
            g.swap(g_new);
            out.trace.push_back(e);
            out.iterations = it + 1;
            break;
        }
        x.swap(trial);
        e = e_trial;
        g.swap(g_new);
        out.trace.push_back(e);
        out.iterations = it + 1;
    }
    out.x = std::move(x);
    out.value = e;
    return out;
}

} // namespace hicon
