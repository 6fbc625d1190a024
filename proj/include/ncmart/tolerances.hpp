#pragma once

namespace ncmart {

/// Global tolerance policy threaded through every predicate.
/// psd_tol and cluster_tol are scaled by (1 + ||x||_inf) at the use site.
struct Tolerances {
    double hermiticity_tol = 1e-9;
    double psd_tol = 1e-9;
    double projection_tol = 1e-8;
    double span_residual_tol = 1e-9;
    double cluster_tol = 1e-8;
    // Intersection eigenvalues of exact (snapped) projections are clean to
    // rounding error, so the meet threshold is far below cluster_tol.
    double meet_tol = 1e-10;
};

inline const Tolerances& default_tol() {
    static const Tolerances t{};
    return t;
}

}  // namespace ncmart
