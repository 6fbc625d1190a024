#pragma once

#include <vector>

#include "ncmart/operator.hpp"

namespace ncmart {

/// Real interval with open/closed endpoints; use +-infinity for rays.
struct Interval {
    double lo;
    double hi;
    bool lo_open = true;
    bool hi_open = true;

    static Interval open_ray(double lo) {
        return {lo, std::numeric_limits<double>::infinity(), true, true};
    }
    static Interval left_open(double lo, double hi) {  // (lo, hi]
        return {lo, hi, true, false};
    }
};

/// Hermitian spectral decomposition with eigenvalues merged into clusters
/// at resolution cluster_tol * (1 + ||x||_inf).
struct SpectralDecomposition {
    std::vector<double> eigenvalues;     // distinct cluster values, descending
    std::vector<Operator> projections;   // one per cluster
    std::vector<int> multiplicities;

    Operator apply(const std::vector<double>& values) const;  // sum v_k P_k
};

SpectralDecomposition spectral_decomposition(const Operator& x,
                                             const Tolerances& tol = default_tol());

/// chi_B(x) for Hermitian x: sum of eigenprojections with eigenvalue in B,
/// re-snapped to an exact projection. Endpoint comparisons at cluster_tol.
Operator spectral_projection(const Operator& x, const Interval& interval,
                             const Tolerances& tol = default_tol());

/// Hermitian PSD square root; eigenvalues in [-psd_tol, 0) are clamped to 0.
Operator psd_sqrt(const Operator& x, const Tolerances& tol = default_tol());

/// |x| = (x* x)^{1/2}.
Operator abs_op(const Operator& x, const Tolerances& tol = default_tol());

/// Eigenvalue rounding to {0,1}; used to stop idempotency drift on
/// projections produced by meets and subtractions.
Operator snap_projection(const Operator& p, const Tolerances& tol = default_tol());

/// mu(x): right-continuous non-increasing step function on [0,1) with
/// breakpoints k/N; mu_t = s_{floor(tN)+1} where s are singular values.
struct SingularValueFunction {
    int dim = 0;
    std::vector<double> values;  // s_1 >= ... >= s_N

    double at(double t) const;   // mu_t for t in [0,1)
};

SingularValueFunction singular_value_function(const Operator& x);

/// lambda_s(x) = tau(chi_{(s,inf)}(|x|)): fraction of singular values > s.
double distribution(const Operator& x, double s);
double distribution(const SingularValueFunction& mu, double s);

/// ||x||_p = (tau(|x|^p))^{1/p}; p = infinity gives the operator norm.
double lp_norm(const Operator& x, double p);

/// ||x||_{1,inf} = sup_t t mu_t(x); evaluated as max_k (k/N) s_k and
/// cross-checked against sup_s s * lambda_s(x) over the breakpoints.
double weak_l1_norm(const Operator& x);

/// int_0^1 mu_t(x) log(1/t) dt, exact on the step function.
double llogl_norm(const Operator& x);

/// Projection onto the intersection of ranges: spectral projection of
/// sum(p_i) at the eigenvalue cluster within meet_tol of the count.
Operator projection_meet(const std::vector<Operator>& ps,
                         const Tolerances& tol = default_tol());

/// Distribution splitting inequality: for all operators a, b and
/// lambda > 0, alpha, beta in (0,1),
///   lambda_{lambda}(a+b) <= alpha^{-1} lambda_{beta lambda}(a)
///                          + (1-alpha)^{-1} lambda_{(1-beta) lambda}(b).
struct SplittingReport {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

SplittingReport splitting_inequality_check(const Operator& a, const Operator& b,
                                           double lambda, double alpha, double beta);

}  // namespace ncmart
