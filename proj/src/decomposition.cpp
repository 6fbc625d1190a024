#include "ncmart/decomposition.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ncmart/spectral.hpp"

namespace ncmart {

namespace {

PositivePartDecomposition decompose_positive(const MartingaleSequence& x,
                                             Complex coeff,
                                             const Tolerances& tol) {
    PositivePartDecomposition p;
    p.coefficient = coeff;
    p.part = x;
    p.families = dyadic_families(x, tol);
    DifferenceSequence dx = differences(x);
    p.dy.filtration = x.filtration;
    p.dz.filtration = x.filtration;
    for (int n = 1; n <= x.length(); ++n) {
        // Level-(n-1) family; the level-1 family for n = 1.
        ProjectionFamily P = p.families.level_family(std::max(n - 1, 1), tol);
        Operator up = triangular_truncate(P, dx.diff(n));
        p.dy.diffs.push_back(up);
        p.dz.diffs.push_back(dx.diff(n) - up);
    }
    return p;
}

}  // namespace

DecompositionResult decompose(const MartingaleSequence& x, const Tolerances& tol) {
    if (x.length() < 1) throw std::invalid_argument("decompose: empty martingale");
    const TracialContext ctx = x.terms.front().context();
    DecompositionResult res;

    const Operator& xf = x.final();
    Operator h = 0.5 * (xf + xf.adjoint());
    Operator k = Complex(0.0, -0.5) * (xf - xf.adjoint());

    // Positive/negative spectral parts of the Hermitian components; parts
    // with zero trace contribute nothing and are skipped.
    struct Piece {
        Operator op;
        Complex coeff;
    };
    std::vector<Piece> pieces;
    for (const auto& [herm, unit] : {std::pair{h, Complex(1.0, 0.0)},
                                     std::pair{k, Complex(0.0, 1.0)}}) {
        SpectralDecomposition sd = spectral_decomposition(herm, tol);
        Operator pos = Operator::zero(ctx);
        Operator neg = Operator::zero(ctx);
        for (size_t c = 0; c < sd.eigenvalues.size(); ++c) {
            if (sd.eigenvalues[c] > 0.0)
                pos = pos + sd.eigenvalues[c] * sd.projections[c];
            else
                neg = neg - sd.eigenvalues[c] * sd.projections[c];
        }
        pieces.push_back({pos, unit});
        pieces.push_back({neg, -unit});
    }

    DifferenceSequence dy, dz;
    dy.filtration = x.filtration;
    dz.filtration = x.filtration;
    for (int n = 1; n <= x.length(); ++n) {
        dy.diffs.push_back(Operator::zero(ctx));
        dz.diffs.push_back(Operator::zero(ctx));
    }
    for (const auto& piece : pieces) {
        if (std::real(piece.op.trace()) <= tol.psd_tol) continue;
        MartingaleSequence part = from_final(*x.filtration, piece.op);
        PositivePartDecomposition pd = decompose_positive(part, piece.coeff, tol);
        for (int n = 1; n <= x.length(); ++n) {
            dy.diffs[n - 1] = dy.diffs[n - 1] + piece.coeff * pd.dy.diff(n);
            dz.diffs[n - 1] = dz.diffs[n - 1] + piece.coeff * pd.dz.diff(n);
        }
        res.parts.push_back(std::move(pd));
    }

    res.dy = dy;
    res.dz = dz;
    res.y = accumulate(dy);
    res.y.filtration = x.filtration;
    res.z = accumulate(dz);
    res.z.filtration = x.filtration;
    return res;
}

namespace {

// Lemma-style expansion of |dy_n|^2 through the cells of the level family:
// sum_{l,j} sum_{i <= min(l,j)} p_l dx p_i dx p_j (dx Hermitian here).
double lemma34_residual_for(const PositivePartDecomposition& pd,
                            const Tolerances& tol) {
    DifferenceSequence dx = differences(pd.part);
    double worst = 0.0;
    for (int n = 1; n <= pd.part.length(); ++n) {
        const auto& cells = pd.families.cells[std::max(n - 1, 1) - 1];
        const int m = static_cast<int>(cells.size());
        const Matrix& d = dx.diff(n).mat();
        const int N = d.rows();
        // Precompute p_i dx p_j blocks.
        std::vector<std::vector<Matrix>> blk(m, std::vector<Matrix>(m));
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < m; ++j)
                blk[i][j] = cells[i].mat() * d * cells[j].mat();
        Matrix expansion = Matrix::Zero(N, N);
        for (int l = 0; l < m; ++l)
            for (int j = 0; j < m; ++j)
                for (int i = 0; i <= std::min(l, j); ++i)
                    expansion += cells[l].mat() * d * blk[i][j];
        const Matrix& t = pd.dy.diff(n).mat();
        Matrix direct = t.adjoint() * t;
        worst = std::max(worst,
                         Operator(pd.part.terms.front().context(),
                                  Matrix(direct - expansion))
                             .op_norm());
    }
    (void)tol;
    return worst;
}

}  // namespace

TheoremReport verify_theorem31(const DecompositionResult& result,
                               const MartingaleSequence& x,
                               const Tolerances& tol) {
    TheoremReport rep;
    rep.diff_residual = std::max(result.dy.difference_residual(),
                                 result.dz.difference_residual());
    for (int n = 1; n <= x.length(); ++n)
        rep.reconstruction =
            std::max(rep.reconstruction,
                     (x.term(n) - result.y.term(n) - result.z.term(n)).op_norm());

    rep.l2_value = sequence_norm(result.dy, Side::Column, 2.0) +
                   sequence_norm(result.dz, Side::Row, 2.0);
    rep.l2_bound = 2.0 * lp_norm(x.final(), 2.0);
    rep.l2_ratio = rep.l2_bound > 0.0 ? rep.l2_value / rep.l2_bound : 0.0;

    rep.weak_value = sequence_norm(result.dy, Side::Column, weak_l1_marker) +
                     sequence_norm(result.dz, Side::Row, weak_l1_marker);
    rep.weak_bound = x.l1_norm();
    rep.weak_ratio = rep.weak_bound > 0.0 ? rep.weak_value / rep.weak_bound : 0.0;

    for (const auto& pd : result.parts)
        rep.lemma34_residual =
            std::max(rep.lemma34_residual, lemma34_residual_for(pd, tol));
    return rep;
}

}  // namespace ncmart
