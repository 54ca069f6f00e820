#ifndef HICON_CONFIG_HPP
#define HICON_CONFIG_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "hicon/geometry.hpp"
#include "hicon/loads.hpp"

namespace hicon {

// Flat key = value experiment configuration with block prefixes.
struct ExperimentConfig {
    // geometry
    std::vector<int> eps_denominators; // eps = 1/n, strictly increasing n
    double gamma = 1.0;
    InclusionShape inclusion;
    BoundarySelector gamma_boundary = BoundarySelector::FullBoundary;
    double lx = 1.0, ly = 1.0;
    int mesh_per_cell = 8;
    int cell_resolution = 64;

    // material
    std::string w0 = "dist-squared";
    std::string w1 = "dist-squared";

    // load
    LoadSpec load;

    // solver
    double tol = 1e-8;
    int max_iters = 5000;
    int multistart = 3;

    // output
    std::string out_dir = "out";
    std::string formats = "csv,svg";

    std::uint64_t seed = 12345;

    CompositeGeometry geometry(int n) const {
        return CompositeGeometry(lx, ly, n, gamma, inclusion, gamma_boundary);
    }

    // canonical key = value listing, echoed verbatim to config.echo
    std::vector<std::pair<std::string, std::string>> resolved() const;
};

ExperimentConfig parse_config_text(const std::string& text);
ExperimentConfig parse_config_file(const std::string& path);
void validate_config(const ExperimentConfig& cfg);

} // namespace hicon

#endif
