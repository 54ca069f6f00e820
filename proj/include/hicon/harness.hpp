#ifndef HICON_HARNESS_HPP
#define HICON_HARNESS_HPP

#include <iosfwd>

#include "hicon/homogenize.hpp"
#include "hicon/report.hpp"

namespace hicon {

// Full sweep: for each eps build the composite, minimize the total energy,
// split the minimizer and measure every diagnostic against the limit solution
// (computed once on the finest mesh with matching cell resolution).
ConvergenceReport run_experiment(const ExperimentConfig& cfg);

// Effective tensor at the configured cell resolution.
QuadForm run_cell(const ExperimentConfig& cfg);

// Invariant battery (geometry, unfolding, splitting, material class); prints
// one line per check, returns the number of failures.
int run_check_suite(const ExperimentConfig& cfg, std::ostream& os);

} // namespace hicon

#endif
