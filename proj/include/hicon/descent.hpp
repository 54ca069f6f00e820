#ifndef HICON_DESCENT_HPP
#define HICON_DESCENT_HPP

#include <cstdint>
#include <functional>
#include <vector>

#include "hicon/sparse.hpp"

namespace hicon {

struct DescentOptions {
    double tol = 1e-8;      // on the gradient norm, relative to grad_scale
    double grad_scale = 1.0;
    int max_iters = 5000;
    int memory = 10;
};

struct DescentResult {
    std::vector<double> x;
    double value = 0.0;
    std::vector<double> trace; // accepted energies, non-increasing
    bool converged = false;
    int iterations = 0;
};

// Limited-memory quasi-Newton descent with Armijo backtracking. The initial
// Hessian approximation is the factorized quadratic model; constrained DOFs
// are held at zero through the mask.
DescentResult lbfgs_minimize(
    std::vector<double> x0, const std::function<double(const std::vector<double>&)>& energy,
    const std::function<void(const std::vector<double>&, std::vector<double>&)>& gradient,
    const BandCholesky& precond, const std::vector<std::uint8_t>& mask,
    const DescentOptions& opts);

} // namespace hicon

#endif
