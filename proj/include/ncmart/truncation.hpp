#pragma once

#include <vector>

#include "ncmart/operator.hpp"

namespace ncmart {

/// Ordered family p_1..p_M of mutually orthogonal projections; the index
/// order is what "triangular" refers to.
class ProjectionFamily {
public:
    ProjectionFamily(TracialContext ctx, std::vector<Operator> projections,
                     const Tolerances& tol = default_tol());

    const TracialContext& context() const { return ctx_; }
    int size() const { return static_cast<int>(ps_.size()); }
    const Operator& at(int i) const { return ps_.at(i); }
    const std::vector<Operator>& projections() const { return ps_; }

    /// sum p_i = identity (within tol).
    bool complete() const { return complete_; }

private:
    TracialContext ctx_;
    std::vector<Operator> ps_;
    bool complete_;
};

/// T x = sum_{i<=j} p_i x p_j, evaluated with prefix sums (O(M) products).
Operator triangular_truncate(const ProjectionFamily& P, const Operator& x);

/// D x = sum_i p_i x p_i.
Operator diagonal_part(const ProjectionFamily& P, const Operator& x);

/// Strict parts: sum_{i<j} p_i x p_j and sum_{i>j} p_i x p_j.
Operator strict_upper(const ProjectionFamily& P, const Operator& x);
Operator strict_lower(const ProjectionFamily& P, const Operator& x);

/// H x = -i (strict_upper(x) - strict_lower(x)). Hermitian-preserving and
/// diagonal-free; for Hermitian x: x + iH(x) = 2T(x) - D(x).
Operator hilbert_op(const ProjectionFamily& P, const Operator& x);

/// Weak-type bound for l2-sums of triangular truncations of positive
/// operators: || (sum |T_n x_n|^2)^{1/2} ||_{1,inf} <= 5 sqrt(2) sum ||x_n||_1.
struct WeakTruncationReport {
    double weak_norm = 0.0;
    double bound = 0.0;    // 5 sqrt(2) sum ||x_n||_1
    double ratio = 0.0;
    bool pass = false;
};

WeakTruncationReport prop13_weak_bound(const std::vector<Operator>& xs,
                                       const std::vector<ProjectionFamily>& Ps,
                                       const Tolerances& tol = default_tol());

}  // namespace ncmart
