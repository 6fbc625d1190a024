#include "ncmart/truncation.hpp"

#include <cmath>
#include <stdexcept>

#include "ncmart/spectral.hpp"

namespace ncmart {

ProjectionFamily::ProjectionFamily(TracialContext ctx, std::vector<Operator> ps,
                                   const Tolerances& tol)
    : ctx_(ctx), ps_(std::move(ps)) {
    if (ps_.empty()) throw std::invalid_argument("ProjectionFamily: empty");
    Matrix sum = Matrix::Zero(ctx_.dim, ctx_.dim);
    for (const auto& p : ps_) {
        if (!(p.context() == ctx_))
            throw std::invalid_argument("ProjectionFamily: context mismatch");
        if (!p.is_projection(tol))
            throw std::invalid_argument("ProjectionFamily: member is not a projection");
        sum += p.mat();
    }
    for (size_t i = 0; i < ps_.size(); ++i)
        for (size_t j = i + 1; j < ps_.size(); ++j)
            if ((ps_[i].mat() * ps_[j].mat()).cwiseAbs().maxCoeff() > tol.projection_tol)
                throw std::invalid_argument("ProjectionFamily: members not mutually orthogonal");
    complete_ = (sum - Matrix::Identity(ctx_.dim, ctx_.dim)).cwiseAbs().maxCoeff() <=
                tol.projection_tol;
}

Operator triangular_truncate(const ProjectionFamily& P, const Operator& x) {
    if (!(x.context() == P.context()))
        throw std::invalid_argument("triangular_truncate: context mismatch");
    const int n = x.dim();
    Matrix prefix = Matrix::Zero(n, n);
    Matrix acc = Matrix::Zero(n, n);
    for (int j = 0; j < P.size(); ++j) {
        prefix += P.at(j).mat();
        acc += prefix * x.mat() * P.at(j).mat();
    }
    return Operator(x.context(), std::move(acc));
}

Operator diagonal_part(const ProjectionFamily& P, const Operator& x) {
    if (!(x.context() == P.context()))
        throw std::invalid_argument("diagonal_part: context mismatch");
    const int n = x.dim();
    Matrix acc = Matrix::Zero(n, n);
    for (int i = 0; i < P.size(); ++i)
        acc += P.at(i).mat() * x.mat() * P.at(i).mat();
    return Operator(x.context(), std::move(acc));
}

Operator strict_upper(const ProjectionFamily& P, const Operator& x) {
    return triangular_truncate(P, x) - diagonal_part(P, x);
}

Operator strict_lower(const ProjectionFamily& P, const Operator& x) {
    if (!(x.context() == P.context()))
        throw std::invalid_argument("strict_lower: context mismatch");
    const int n = x.dim();
    Matrix suffix = Matrix::Zero(n, n);
    for (int i = 0; i < P.size(); ++i) suffix += P.at(i).mat();
    Matrix acc = Matrix::Zero(n, n);
    for (int j = 0; j < P.size(); ++j) {
        suffix -= P.at(j).mat();  // now sum_{i>j} p_i
        acc += suffix * x.mat() * P.at(j).mat();
    }
    return Operator(x.context(), std::move(acc));
}

Operator hilbert_op(const ProjectionFamily& P, const Operator& x) {
    Operator u = strict_upper(P, x);
    Operator l = strict_lower(P, x);
    return Complex(0.0, -1.0) * (u - l);
}

WeakTruncationReport prop13_weak_bound(const std::vector<Operator>& xs,
                                       const std::vector<ProjectionFamily>& Ps,
                                       const Tolerances& tol) {
    if (xs.size() != Ps.size() || xs.empty())
        throw std::invalid_argument("prop13_weak_bound: list size mismatch");
    double bound = 0.0;
    Operator sum_sq = Operator::zero(xs.front().context());
    for (size_t n = 0; n < xs.size(); ++n) {
        if (!xs[n].is_positive(tol))
            throw std::invalid_argument("prop13_weak_bound: input is not PSD");
        Operator t = triangular_truncate(Ps[n], xs[n]);
        sum_sq = sum_sq + t.adjoint() * t;
        bound += lp_norm(xs[n], 1.0);
    }
    WeakTruncationReport r;
    r.weak_norm = weak_l1_norm(psd_sqrt(sum_sq, tol));
    r.bound = 5.0 * std::sqrt(2.0) * bound;
    r.ratio = r.bound > 0.0 ? r.weak_norm / r.bound : 0.0;
    r.pass = r.ratio <= 1.0 + 1e-9;
    return r;
}

}  // namespace ncmart
