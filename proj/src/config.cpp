#include "hicon/config.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace hicon {

namespace {

std::string trim(const std::string& s) {
    std::size_t a = s.find_first_not_of(" \t\r");
    std::size_t b = s.find_last_not_of(" \t\r");
    if (a == std::string::npos) return "";
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(trim(item));
    return out;
}

int parse_unit_fraction(const std::string& s) {
    // accepts "1/n" or a plain integer n
    const auto slash = s.find('/');
    if (slash == std::string::npos) return std::stoi(s);
    require(trim(s.substr(0, slash)) == "1", "eps entries must be unit fractions 1/n");
    return std::stoi(trim(s.substr(slash + 1)));
}

std::string fmt_real(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

ExperimentConfig parse_config_text(const std::string& text) {
    ExperimentConfig cfg;
    std::stringstream ss(text);
    std::string line;
    int lineno = 0;
    while (std::getline(ss, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        require(eq != std::string::npos,
                "config line " + std::to_string(lineno) + ": expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string val = trim(line.substr(eq + 1));

        if (key == "geometry.eps_list") {
            cfg.eps_denominators.clear();
            for (const auto& item : split_list(val))
                cfg.eps_denominators.push_back(parse_unit_fraction(item));
        } else if (key == "geometry.gamma") {
            cfg.gamma = std::stod(val);
        } else if (key == "geometry.inclusion") {
            const auto colon = val.find(':');
            const std::string kind = colon == std::string::npos ? val : val.substr(0, colon);
            if (kind == "square")
                cfg.inclusion.kind = InclusionKind::CenteredSquare;
            else if (kind == "disk")
                cfg.inclusion.kind = InclusionKind::CenteredDisk;
            else
                throw std::invalid_argument("config: unknown inclusion kind " + kind);
            if (colon != std::string::npos)
                cfg.inclusion.half_width_or_radius = std::stod(val.substr(colon + 1));
        } else if (key == "geometry.gamma_boundary") {
            if (val == "full")
                cfg.gamma_boundary = BoundarySelector::FullBoundary;
            else if (val == "left-edge")
                cfg.gamma_boundary = BoundarySelector::LeftEdge;
            else
                throw std::invalid_argument("config: unknown gamma_boundary " + val);
        } else if (key == "geometry.lx") {
            cfg.lx = std::stod(val);
        } else if (key == "geometry.ly") {
            cfg.ly = std::stod(val);
        } else if (key == "geometry.mesh_per_cell") {
            cfg.mesh_per_cell = std::stoi(val);
        } else if (key == "geometry.cell_resolution") {
            cfg.cell_resolution = std::stoi(val);
        } else if (key == "material.w0") {
            cfg.w0 = val;
        } else if (key == "material.w1") {
            cfg.w1 = val;
        } else if (key == "load.regime") {
            if (val == "small-strain")
                cfg.load.regime = LoadRegime::SmallStrain;
            else if (val == "finite-strain")
                cfg.load.regime = LoadRegime::FiniteStrain;
            else
                throw std::invalid_argument("config: unknown load regime " + val);
        } else if (key == "load.profile") {
            cfg.load.profile = val;
        } else if (key == "load.amplitude") {
            cfg.load.amplitude = std::stod(val);
        } else if (key == "load.soft_profile") {
            cfg.load.soft_profile = val;
        } else if (key == "load.soft_amplitude") {
            cfg.load.soft_amplitude = std::stod(val);
        } else if (key == "solver.tol") {
            cfg.tol = std::stod(val);
        } else if (key == "solver.max_iters") {
            cfg.max_iters = std::stoi(val);
        } else if (key == "solver.multistart") {
            cfg.multistart = std::stoi(val);
        } else if (key == "output.dir") {
            cfg.out_dir = val;
        } else if (key == "output.formats") {
            cfg.formats = val;
        } else if (key == "seed") {
            cfg.seed = std::stoull(val);
        } else {
            throw std::invalid_argument("config: unknown key " + key);
        }
    }
    validate_config(cfg);
    return cfg;
}

ExperimentConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "config: cannot open " + path);
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

void validate_config(const ExperimentConfig& cfg) {
    require(!cfg.eps_denominators.empty(), "config: eps_list must be nonempty");
    for (std::size_t i = 0; i < cfg.eps_denominators.size(); ++i) {
        require(cfg.eps_denominators[i] >= 2, "config: eps must be 1/n with n >= 2");
        if (i > 0)
            require(cfg.eps_denominators[i] > cfg.eps_denominators[i - 1],
                    "config: eps_list must be strictly decreasing");
    }
    require(cfg.gamma > 0.0 && cfg.gamma <= 1.0, "config: gamma must lie in (0, 1]");
    if (cfg.load.regime == LoadRegime::FiniteStrain)
        require(cfg.gamma < 1.0, "config: finite-strain preset requires gamma < 1");
    require(cfg.load.amplitude != 0.0 || cfg.load.soft_amplitude != 0.0,
            "config: load amplitude must be nonzero");
    require(cfg.mesh_per_cell >= 4 && cfg.mesh_per_cell % 2 == 0,
            "config: mesh_per_cell must be even and >= 4");
    require(cfg.cell_resolution >= 4 && cfg.cell_resolution % 2 == 0,
            "config: cell_resolution must be even and >= 4");
    require(cfg.multistart >= 0, "config: multistart must be non-negative");
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::resolved() const {
    std::vector<std::pair<std::string, std::string>> kv;
    std::string eps;
    for (std::size_t i = 0; i < eps_denominators.size(); ++i) {
        if (i) eps += ",";
        eps += "1/" + std::to_string(eps_denominators[i]);
    }
    kv.emplace_back("geometry.eps_list", eps);
    kv.emplace_back("geometry.gamma", fmt_real(gamma));
    kv.emplace_back("geometry.inclusion",
                    std::string(inclusion.kind == InclusionKind::CenteredSquare ? "square"
                                                                                : "disk") +
                        ":" + fmt_real(inclusion.half_width_or_radius));
    kv.emplace_back("geometry.gamma_boundary",
                    gamma_boundary == BoundarySelector::FullBoundary ? "full" : "left-edge");
    kv.emplace_back("geometry.lx", fmt_real(lx));
    kv.emplace_back("geometry.ly", fmt_real(ly));
    kv.emplace_back("geometry.mesh_per_cell", std::to_string(mesh_per_cell));
    kv.emplace_back("geometry.cell_resolution", std::to_string(cell_resolution));
    kv.emplace_back("material.w0", w0);
    kv.emplace_back("material.w1", w1);
    kv.emplace_back("load.regime", load.regime == LoadRegime::SmallStrain ? "small-strain"
                                                                          : "finite-strain");
    kv.emplace_back("load.profile", load.profile);
    kv.emplace_back("load.amplitude", fmt_real(load.amplitude));
    kv.emplace_back("load.soft_profile", load.soft_profile);
    kv.emplace_back("load.soft_amplitude", fmt_real(load.soft_amplitude));
    kv.emplace_back("solver.tol", fmt_real(tol));
    kv.emplace_back("solver.max_iters", std::to_string(max_iters));
    kv.emplace_back("solver.multistart", std::to_string(multistart));
    kv.emplace_back("output.dir", out_dir);
    kv.emplace_back("output.formats", formats);
    kv.emplace_back("seed", std::to_string(seed));
    return kv;
}

} // namespace hicon
