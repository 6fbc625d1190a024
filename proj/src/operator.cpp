#include "ncmart/operator.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

namespace ncmart {

double Operator::op_norm() const {
    if (ctx_.dim == 0) return 0.0;
    Eigen::JacobiSVD<Matrix> svd(mat_);
    return svd.singularValues()(0);
}

bool Operator::is_positive(const Tolerances& tol) const {
    if (!is_hermitian(tol)) return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(mat_, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -tol.psd_tol * (1.0 + max_abs());
}

bool Operator::is_projection(const Tolerances& tol) const {
    if (!is_hermitian(tol)) return false;
    return (mat_ * mat_ - mat_).cwiseAbs().maxCoeff() <= tol.projection_tol;
}

Operator ginibre(TracialContext ctx, Rng& rng) {
    Matrix m(ctx.dim, ctx.dim);
    for (int i = 0; i < ctx.dim; ++i)
        for (int j = 0; j < ctx.dim; ++j)
            m(i, j) = Complex(rng.normal(), rng.normal()) * M_SQRT1_2;
    return Operator(ctx, std::move(m));
}

Operator haar_unitary(TracialContext ctx, Rng& rng) {
    Matrix g = ginibre(ctx, rng).mat();
    Eigen::HouseholderQR<Matrix> qr(g);
    Matrix q = qr.householderQ();
    Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
    for (int j = 0; j < ctx.dim; ++j) {
        Complex d = r(j, j);
        double a = std::abs(d);
        q.col(j) *= (a > 0 ? d / a : Complex(1.0, 0.0));
    }
    return Operator(ctx, std::move(q));
}

Operator random_hermitian(TracialContext ctx, Rng& rng) {
    Matrix g = ginibre(ctx, rng).mat();
    return Operator(ctx, Matrix((g + g.adjoint()) * 0.5));
}

}  // namespace ncmart
