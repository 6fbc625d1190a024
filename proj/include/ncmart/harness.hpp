#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "ncmart/decomposition.hpp"
#include "ncmart/martingale.hpp"

#include "json.hpp"

namespace ncmart {

/// One ensemble experiment: dimensions, filtration, trial count, seeds,
/// sweep grid, and the replay parameters. Same config (incl. seed) must
/// produce byte-identical CSV output.
struct ExperimentConfig {
    int dim = 16;
    int depth = 4;
    std::string kind = "tensor";  // tensor | dyadic_diagonal | conjugated
    int trials = 200;
    std::uint64_t seed = 271828;
    std::vector<double> p_grid = {1.05, 1.1, 1.2, 1.5, 2.0, 3.0};
    double alpha = 0.5;
    double beta = 0.5;
    double spiky_fraction = 0.3;
    Tolerances tol;
    std::string out_dir = ".";

    static ExperimentConfig from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    void validate() const;
};

struct ReportRow {
    int trial = 0;
    std::string check;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
    bool pass = false;
};

struct CheckSummary {
    double max_ratio = 0.0;
    int pass_count = 0;
    int total = 0;
};

struct ExperimentReport {
    std::vector<ReportRow> rows;
    double wall_seconds = 0.0;

    void add(int trial, const std::string& check, double lhs, double rhs,
             bool pass);

    /// Order-independent fold of the rows.
    std::map<std::string, CheckSummary> summarize() const;

    bool all_pass() const;
    double max_ratio(const std::string& check) const;

    std::string to_csv() const;  // header: trial,check,lhs,rhs,ratio,pass
    nlohmann::json summary_json() const;
    void write(const std::string& out_dir) const;  // report.csv + summary.json
};

/// Runs every inequality check on a seeded ensemble: the splitting lemma,
/// the truncation identities and weak-type bound, the Cuculescu and dyadic
/// family invariants, the two-martingale decomposition conclusions, and the
/// proof-replay estimates.
ExperimentReport run_verification_suite(const ExperimentConfig& config);

/// Burkholder-Gundy constant sweep over p_grid: Hardy value vs L^p norm per
/// trial, exact (max form) for p >= 2, a candidate upper bound for p < 2.
ExperimentReport bg_constant_sweep(const ExperimentConfig& config);

/// H^1 upper bound vs 1 + LlogL norm of the final term.
ExperimentReport llogl_check(const ExperimentConfig& config);

/// Deterministic per-trial martingale draw shared by the experiment drivers:
/// Wishart-smooth by default, heavy-tailed spiky for the configured fraction.
MartingaleSequence draw_trial_martingale(const ExperimentConfig& config,
                                         const Filtration& f, int trial);

Filtration config_filtration(const ExperimentConfig& config);

/// Operator JSON: {"n": N, "re": [[..]], "im": [[..]]}.
nlohmann::json operator_to_json(const Operator& x);
Operator operator_from_json(const nlohmann::json& j);

/// Calibration baselines for constants the theory leaves unspecified.
/// Frozen by `ncmart calibrate`, enforced afterwards with 10% slack.
struct CalibrationBaseline {
    std::uint64_t seed = 0;
    double khat = 0.0;
    double llogl_ratio = 0.0;
    std::map<std::string, double> alpha_products;  // p -> max alpha_p * (p-1)

    static CalibrationBaseline from_json(const nlohmann::json& j);
    nlohmann::json to_json() const;
    static CalibrationBaseline load(const std::string& path);
    void save(const std::string& path) const;
};

/// Computes baseline values from the three experiment reports.
CalibrationBaseline calibrate(const ExperimentConfig& config);

}  // namespace ncmart
