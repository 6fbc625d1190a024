#include "ncmart/algebra.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace ncmart {

namespace {

Eigen::VectorXcd vectorize(const Operator& x) {
    return Eigen::Map<const Eigen::VectorXcd>(x.mat().data(), x.mat().size());
}

Operator devectorize(TracialContext ctx, const Eigen::VectorXcd& v) {
    Matrix m = Eigen::Map<const Matrix>(v.data(), ctx.dim, ctx.dim);
    return Operator(ctx, std::move(m));
}

// Orthonormal basis (trace inner product) of the span of the given operators.
// SVD rank truncation at a relative tolerance.
std::vector<Operator> orthonormalize(TracialContext ctx,
                                     const std::vector<Operator>& ops) {
    const int nsq = ctx.dim * ctx.dim;
    Eigen::MatrixXcd stacked(nsq, static_cast<int>(ops.size()));
    for (int j = 0; j < static_cast<int>(ops.size()); ++j)
        stacked.col(j) = vectorize(ops[j]);
    // JacobiSVD rather than BDCSVD: the latter deflates inaccurately on the
    // degenerate spectra common here, and these matrices are desk-sized.
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(stacked, Eigen::ComputeThinU);
    const auto& sv = svd.singularValues();
    const double cutoff = 1e-10 * std::max(1.0, sv.size() ? sv(0) : 0.0);
    std::vector<Operator> out;
    const double scale = std::sqrt(static_cast<double>(ctx.dim));
    for (int j = 0; j < sv.size(); ++j) {
        if (sv(j) <= cutoff) break;
        // Euclidean-orthonormal columns rescale by sqrt(N) for tau-orthonormality.
        out.push_back(devectorize(ctx, scale * svd.matrixU().col(j)));
    }
    return out;
}

}  // namespace

Subalgebra::Subalgebra(TracialContext ctx, std::vector<Operator> basis)
    : ctx_(ctx), basis_(std::move(basis)) {
    for (const auto& b : basis_)
        if (!(b.context() == ctx_))
            throw std::invalid_argument("Subalgebra: basis context mismatch");
}

Operator Subalgebra::expect(const Operator& x) const {
    if (!(x.context() == ctx_))
        throw std::invalid_argument("Subalgebra::expect: context mismatch");
    Matrix acc = Matrix::Zero(ctx_.dim, ctx_.dim);
    for (const auto& b : basis_) acc += b.inner(x) * b.mat();
    return Operator(ctx_, std::move(acc));
}

double Subalgebra::span_residual(const Operator& x) const {
    Operator r = x - expect(x);
    double hs = std::sqrt(std::abs(r.inner(r)));
    return hs / (1.0 + x.max_abs());
}

Subalgebra subalgebra_from_generators(TracialContext ctx,
                                      const std::vector<Operator>& generators) {
    if (generators.empty())
        throw std::invalid_argument("subalgebra_from_generators: no generators");
    for (const auto& g : generators)
        if (!(g.context() == ctx))
            throw std::invalid_argument("subalgebra_from_generators: context mismatch");

    std::vector<Operator> pool = generators;
    pool.push_back(Operator::identity(ctx));
    std::vector<Operator> basis = orthonormalize(ctx, pool);

    const int max_iter = ctx.dim * ctx.dim;
    for (int iter = 0; iter < max_iter; ++iter) {
        std::vector<Operator> grown = basis;
        for (const auto& b : basis) grown.push_back(b.adjoint());
        for (const auto& a : basis)
            for (const auto& b : basis) grown.push_back(a * b);
        std::vector<Operator> next = orthonormalize(ctx, grown);
        if (static_cast<int>(next.size()) == static_cast<int>(basis.size()))
            return Subalgebra(ctx, std::move(next));
        basis = std::move(next);
    }
    throw std::runtime_error("subalgebra_from_generators: closure failed to stabilize");
}

Filtration::Filtration(TracialContext ctx, std::vector<Subalgebra> levels)
    : ctx_(ctx), levels_(std::move(levels)) {
    if (levels_.empty())
        throw std::invalid_argument("Filtration: needs at least one level");
    for (const auto& s : levels_)
        if (!(s.context() == ctx_))
            throw std::invalid_argument("Filtration: level context mismatch");
    for (size_t k = 0; k + 1 < levels_.size(); ++k)
        if (levels_[k].dim() > levels_[k + 1].dim())
            throw std::invalid_argument("Filtration: levels must be increasing");
}

bool Filtration::terminal() const {
    return levels_.back().dim() == ctx_.dim * ctx_.dim;
}

Filtration tensor_filtration(int depth) {
    if (depth < 1) throw std::invalid_argument("tensor_filtration: depth >= 1");
    const int n = 1 << depth;
    TracialContext ctx{n};
    std::vector<Subalgebra> levels;
    for (int k = 1; k <= depth; ++k) {
        const int d = 1 << k;        // factor dimension
        const int m = n / d;         // identity block size
        const double scale = std::sqrt(static_cast<double>(d));
        std::vector<Operator> basis;
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                Matrix e = Matrix::Zero(n, n);
                for (int r = 0; r < m; ++r) e(a * m + r, b * m + r) = scale;
                basis.emplace_back(ctx, std::move(e));
            }
        levels.emplace_back(ctx, std::move(basis));
    }
    return Filtration(ctx, std::move(levels));
}

Filtration dyadic_diagonal_filtration(int dim, int depth) {
    if (depth < 1 || dim < 1 || dim % (1 << depth) != 0)
        throw std::invalid_argument("dyadic_diagonal_filtration: dim must be divisible by 2^depth");
    TracialContext ctx{dim};
    std::vector<Subalgebra> levels;
    for (int k = 1; k <= depth; ++k) {
        const int blocks = 1 << k;
        const int bs = dim / blocks;
        const double scale = std::sqrt(static_cast<double>(blocks));
        std::vector<Operator> basis;
        for (int b = 0; b < blocks; ++b) {
            Matrix e = Matrix::Zero(dim, dim);
            for (int r = 0; r < bs; ++r) e(b * bs + r, b * bs + r) = scale;
            basis.emplace_back(ctx, std::move(e));
        }
        levels.emplace_back(ctx, std::move(basis));
    }
    return Filtration(ctx, std::move(levels));
}

Filtration conjugate_filtration(const Filtration& f, const Operator& u) {
    const TracialContext ctx = f.context();
    if (!(u.context() == ctx))
        throw std::invalid_argument("conjugate_filtration: context mismatch");
    std::vector<Subalgebra> levels;
    for (const auto& s : f.levels()) {
        std::vector<Operator> basis;
        for (const auto& b : s.basis())
            basis.emplace_back(ctx, Matrix(u.mat() * b.mat() * u.mat().adjoint()));
        levels.emplace_back(ctx, std::move(basis));
    }
    return Filtration(ctx, std::move(levels));
}

Filtration build_filtration(const FiltrationDescriptor& d) {
    if (d.kind == "tensor") return tensor_filtration(d.depth);
    if (d.kind == "dyadic_diagonal") return dyadic_diagonal_filtration(d.dim, d.depth);
    if (d.kind == "conjugated") {
        FiltrationDescriptor inner = d;
        inner.kind = d.inner_kind.empty() ? "tensor" : d.inner_kind;
        Filtration base = build_filtration(inner);
        Rng rng(d.seed);
        return conjugate_filtration(base, haar_unitary(base.context(), rng));
    }
    throw std::invalid_argument("build_filtration: unknown kind '" + d.kind + "'");
}

}  // namespace ncmart
