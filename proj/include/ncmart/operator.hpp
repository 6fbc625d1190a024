#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

#include "ncmart/rng.hpp"
#include "ncmart/tolerances.hpp"

namespace ncmart {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// The ambient algebra M_N with normalized trace tau = (1/N) Tr.
struct TracialContext {
    int dim = 0;

    bool operator==(const TracialContext&) const = default;
};

/// An N x N complex matrix bound to a tracial context. Immutable value type;
/// all arithmetic checks context compatibility.
class Operator {
public:
    Operator() = default;
    Operator(TracialContext ctx, Matrix m) : ctx_(ctx), mat_(std::move(m)) {
        if (mat_.rows() != ctx_.dim || mat_.cols() != ctx_.dim)
            throw std::invalid_argument("Operator: matrix shape does not match context dimension");
    }

    static Operator identity(TracialContext ctx) {
        return Operator(ctx, Matrix::Identity(ctx.dim, ctx.dim));
    }
    static Operator zero(TracialContext ctx) {
        return Operator(ctx, Matrix::Zero(ctx.dim, ctx.dim));
    }
    static Operator matrix_unit(TracialContext ctx, int i, int j) {
        Matrix m = Matrix::Zero(ctx.dim, ctx.dim);
        m(i, j) = 1.0;
        return Operator(ctx, std::move(m));
    }

    const TracialContext& context() const { return ctx_; }
    int dim() const { return ctx_.dim; }
    const Matrix& mat() const { return mat_; }

    Operator adjoint() const { return Operator(ctx_, mat_.adjoint()); }

    Operator operator+(const Operator& o) const {
        check_context(o);
        return Operator(ctx_, mat_ + o.mat_);
    }
    Operator operator-(const Operator& o) const {
        check_context(o);
        return Operator(ctx_, mat_ - o.mat_);
    }
    Operator operator*(const Operator& o) const {
        check_context(o);
        return Operator(ctx_, mat_ * o.mat_);
    }
    Operator operator-() const { return Operator(ctx_, -mat_); }

    friend Operator operator*(Complex c, const Operator& x) {
        return Operator(x.ctx_, c * x.mat_);
    }
    friend Operator operator*(double c, const Operator& x) {
        return Operator(x.ctx_, c * x.mat_);
    }

    /// Normalized trace (1/N) Tr.
    Complex trace() const { return mat_.trace() / static_cast<double>(ctx_.dim); }

    /// Trace inner product <a,b> = tau(a* b).
    Complex inner(const Operator& b) const {
        check_context(b);
        return (mat_.adjoint() * b.mat_).trace() / static_cast<double>(ctx_.dim);
    }

    double op_norm() const;  // largest singular value, see spectral.cpp

    double max_abs() const { return mat_.cwiseAbs().maxCoeff(); }

    bool is_hermitian(const Tolerances& tol = default_tol()) const {
        return (mat_ - mat_.adjoint()).cwiseAbs().maxCoeff() <=
               tol.hermiticity_tol * (1.0 + max_abs());
    }
    bool is_positive(const Tolerances& tol = default_tol()) const;
    bool is_projection(const Tolerances& tol = default_tol()) const;

    void check_context(const Operator& o) const {
        if (!(ctx_ == o.ctx_))
            throw std::invalid_argument("Operator: context mismatch (dims " +
                                        std::to_string(ctx_.dim) + " vs " +
                                        std::to_string(o.ctx_.dim) + ")");
    }

private:
    TracialContext ctx_;
    Matrix mat_;
};

/// Random matrix with iid standard complex Gaussian entries.
Operator ginibre(TracialContext ctx, Rng& rng);

/// Haar-distributed unitary (QR of a Ginibre matrix, phases fixed).
Operator haar_unitary(TracialContext ctx, Rng& rng);

/// Random Hermitian with entries of unit scale.
Operator random_hermitian(TracialContext ctx, Rng& rng);

}  // namespace ncmart
