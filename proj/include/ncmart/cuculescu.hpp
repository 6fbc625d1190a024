#pragma once

#include <string>
#include <vector>

#include "ncmart/martingale.hpp"
#include "ncmart/truncation.hpp"

namespace ncmart {

/// Cuculescu's maximal-inequality projections at threshold lambda:
/// q_0 = 1, q_n = q_{n-1} - chi_{(lambda,inf)}(q_{n-1} x_n q_{n-1}).
struct CuculescuResult {
    double lambda = 0.0;
    std::vector<Operator> q_levels;  // q_1..q_T
    Operator q_final;                // = q_T (the sequence is decreasing)

    const Operator& q(int n) const { return q_levels.at(n - 1); }  // 1-based
};

CuculescuResult cuculescu_projections(const MartingaleSequence& x, double lambda,
                                      const Tolerances& tol = default_tol());

/// Smallest k with 2^k >= max_n ||x_n||_inf; beyond this scale every
/// Cuculescu projection is the identity and the dyadic meets stabilize.
int scale_cutoff(const MartingaleSequence& x);

/// The dyadic disjoint families carved from meets of Cuculescu projections
/// across thresholds 2^k, truncated at scale_cutoff with an explicit
/// remainder cell so each family sums to the identity exactly.
struct DyadicFamilies {
    int k_max = 0;
    double martingale_l1 = 0.0;
    // cells[n-1][i] = p_{i,n} for i = 0..k_max, plus the remainder cell at
    // index k_max+1; global[i] = p_i likewise.
    std::vector<std::vector<Operator>> cells;
    std::vector<Operator> global;
    std::vector<CuculescuResult> runs;  // runs[k] at lambda = 2^k

    ProjectionFamily level_family(int n, const Tolerances& tol = default_tol()) const;
    ProjectionFamily global_family(const Tolerances& tol = default_tol()) const;
};

DyadicFamilies dyadic_families(const MartingaleSequence& x,
                               const Tolerances& tol = default_tol());

/// Same, with the meet truncation forced to a given scale (>= scale_cutoff
/// gives identical families; exposed for the stabilization check).
DyadicFamilies dyadic_families_at(const MartingaleSequence& x, int k_max,
                                  const Tolerances& tol = default_tol());

/// w_{n0} = sum_{i<=n0} p_i, cross-checked against the meet form
/// big-wedge_{k=n0..k_max} q^(2^k).
Operator w_projection(const DyadicFamilies& fam, int n0,
                      const Tolerances& tol = default_tol());

/// One inequality of a proof-replay report.
struct InequalityRecord {
    std::string name;
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // rhs - lhs
    bool pass = false;
};

struct ProofReplayReport {
    double normalization = 1.0;  // factor 1/||x||_1 applied to the input
    int n0 = 0;
    double alpha = 0.5;
    double beta = 0.5;
    std::vector<InequalityRecord> records;

    bool all_pass() const;
    const InequalityRecord& record(const std::string& name) const;
};

/// Replays the chain of estimates behind the weak-type bound for a positive
/// martingale (rescaled internally to ||x||_1 = 1): the tail reduction with
/// the truncated square function, the gamma split, the supermartingale
/// square-function bound, and the L2 budget 2^{n0+1}.
ProofReplayReport proof_replay(const MartingaleSequence& x, int n0,
                               double alpha = 0.5, double beta = 0.5,
                               const Tolerances& tol = default_tol());

/// K1(alpha, beta) from the supermartingale estimate.
double k1_constant(double alpha, double beta);

struct C0Result {
    double c0 = 0.0;
    double alpha = 0.0;
    double beta = 0.0;
};

/// Minimizes 4 a^-2 b^-2 + a^-1 K1(a,b) + 2 (1-a)^-1 over (0,1)^2 by coarse
/// grid search plus local refinement. grid_step controls the coarse pass.
C0Result theoretical_constant_c0(double grid_step = 1e-3);

}  // namespace ncmart
