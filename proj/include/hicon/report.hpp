#ifndef HICON_REPORT_HPP
#define HICON_REPORT_HPP

#include <optional>
#include <string>
#include <vector>

#include "hicon/config.hpp"
#include "hicon/quadform.hpp"

namespace hicon {

struct ReportRow {
    double eps = 0.0;
    double lambda_eps = 0.0;
    double scaled_infimum = 0.0;
    double gap_to_limit = 0.0;
    double apriori_ratio = 0.0;
    double poincare_ratio = 0.0;
    double rigidity_ratio = 0.0;
    double d0 = 0.0, d1 = 0.0, dpsi = 0.0;
    double walltime_s = 0.0;
    std::string status = "ok";
};

struct ConvergenceReport {
    std::vector<ReportRow> rows; // one per eps, in sweep order
    double m0 = 0.0;
    double m0_reassembled = 0.0;
    double limit_walltime_s = 0.0;
    double limit_multistart_spread = 0.0;
    QuadForm effective;
    std::uint64_t seed = 0;
};

std::string format_report_csv(const ConvergenceReport& report);
std::string format_tensor_csv(const QuadForm& q);
std::string format_config_echo(const ExperimentConfig& cfg);

// Writes report.csv, effective_tensor.csv, convergence.svg and config.echo.
// Fails before any partial write when the directory cannot be created.
void emit_outputs(const ConvergenceReport& report, const ExperimentConfig& cfg,
                  const std::string& out_dir);

} // namespace hicon

#endif
