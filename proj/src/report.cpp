#include "hicon/report.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "hicon/svg.hpp"

namespace hicon {

namespace {

std::string real17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

} // namespace

std::string format_report_csv(const ConvergenceReport& report) {
    std::string out =
        "eps,lambda_eps,scaled_infimum,gap_to_limit,apriori_ratio,poincare_ratio,"
        "rigidity_ratio,d0,d1,dpsi,walltime_s,status\n";
    for (const ReportRow& r : report.rows) {
        out += real17(r.eps);
        out += "," + real17(r.lambda_eps);
        out += "," + real17(r.scaled_infimum);
        out += "," + real17(r.gap_to_limit);
        out += "," + real17(r.apriori_ratio);
        out += "," + real17(r.poincare_ratio);
        out += "," + real17(r.rigidity_ratio);
        out += "," + real17(r.d0);
        out += "," + real17(r.d1);
        out += "," + real17(r.dpsi);
        out += "," + real17(r.walltime_s);
        out += "," + r.status + "\n";
    }
    out += "limit,," + real17(report.m0) + ",,,,,,,," + real17(report.limit_walltime_s) +
           ",ok\n";
    return out;
}

std::string format_tensor_csv(const QuadForm& q) {
    std::string out = "i,j,k,l,value\n";
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            for (int k = 0; k < 2; ++k)
                for (int l = 0; l < 2; ++l)
                    out += std::to_string(i + 1) + "," + std::to_string(j + 1) + "," +
                           std::to_string(k + 1) + "," + std::to_string(l + 1) + "," +
                           real17(q.c[i][j][k][l]) + "\n";
    return out;
}

std::string format_config_echo(const ExperimentConfig& cfg) {
    std::string out;
    for (const auto& [k, v] : cfg.resolved()) out += k + " = " + v + "\n";
    return out;
}

void emit_outputs(const ConvergenceReport& report, const ExperimentConfig& cfg,
                  const std::string& out_dir) {
    require(!report.rows.empty(), "emit_outputs: empty report");
    namespace fs = std::filesystem;
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    {
        // probe writability before any partial write
        const fs::path probe = fs::path(out_dir) / ".write_probe";
        std::ofstream p(probe, std::ios::binary);
        if (!p.good()) throw std::runtime_error("emit_outputs: cannot write to " + out_dir);
        p.close();
        fs::remove(probe, ec);
    }

    auto write = [&](const std::string& name, const std::string& content) {
        std::ofstream f(fs::path(out_dir) / name, std::ios::binary);
        if (!f.good()) throw std::runtime_error("emit_outputs: cannot open " + name);
        f.write(content.data(), static_cast<std::streamsize>(content.size()));
    };

    write("report.csv", format_report_csv(report));
    write("effective_tensor.csv", format_tensor_csv(report.effective));
    write("config.echo", format_config_echo(cfg));

    if (cfg.formats.find("svg") != std::string::npos) {
        std::vector<double> xs, ys;
        for (const ReportRow& r : report.rows) {
            xs.push_back(r.eps);
            ys.push_back(r.gap_to_limit);
        }
        write("convergence.svg",
              loglog_svg(xs, ys, "eps", "|m_eps - m0|", "convergence of scaled infima"));
    }
}

} // namespace hicon
