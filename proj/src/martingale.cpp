#include "ncmart/martingale.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ncmart/spectral.hpp"

namespace ncmart {

double MartingaleSequence::martingale_residual() const {
    double res = 0.0;
    for (int n = 1; n <= length(); ++n) {
        res = std::max(res, (filtration->expect(n, term(n)) - term(n)).op_norm());
        if (n < length())
            res = std::max(res, (filtration->expect(n, term(n + 1)) - term(n)).op_norm());
    }
    return res;
}

double MartingaleSequence::l1_norm() const {
    double v = 0.0;
    for (const auto& t : terms) v = std::max(v, lp_norm(t, 1.0));
    return v;
}

MartingaleSequence MartingaleSequence::scaled(Complex c) const {
    MartingaleSequence out;
    out.filtration = filtration;
    for (const auto& t : terms) out.terms.push_back(c * t);
    return out;
}

double DifferenceSequence::difference_residual() const {
    double res = 0.0;
    for (int n = 1; n <= length(); ++n) {
        res = std::max(res, (filtration->expect(n, diff(n)) - diff(n)).op_norm());
        if (n >= 2)
            res = std::max(res, filtration->expect(n - 1, diff(n)).op_norm());
    }
    return res;
}

MartingaleSequence from_final(const Filtration& f, const Operator& x_inf) {
    if (!(x_inf.context() == f.context()))
        throw std::invalid_argument("from_final: context mismatch");
    MartingaleSequence x;
    x.filtration = &f;
    for (int n = 1; n <= f.depth(); ++n) x.terms.push_back(f.expect(n, x_inf));
    return x;
}

DifferenceSequence differences(const MartingaleSequence& x) {
    DifferenceSequence dx;
    dx.filtration = x.filtration;
    for (int n = 1; n <= x.length(); ++n)
        dx.diffs.push_back(n == 1 ? x.term(1) : x.term(n) - x.term(n - 1));
    return dx;
}

MartingaleSequence accumulate(const DifferenceSequence& dx) {
    MartingaleSequence x;
    x.filtration = dx.filtration;
    Operator acc = Operator::zero(dx.diffs.front().context());
    for (const auto& d : dx.diffs) {
        acc = acc + d;
        x.terms.push_back(acc);
    }
    return x;
}

Operator square_function(const DifferenceSequence& dx, Side side, int upto) {
    if (upto < 1 || upto > dx.length())
        throw std::invalid_argument("square_function: upto out of range");
    Operator acc = Operator::zero(dx.diffs.front().context());
    for (int k = 1; k <= upto; ++k) {
        const Operator& d = dx.diff(k);
        acc = acc + (side == Side::Column ? d.adjoint() * d : d * d.adjoint());
    }
    return psd_sqrt(acc);
}

double sequence_norm(const DifferenceSequence& dx, Side side, double p) {
    Operator s = square_function(dx, side, dx.length());
    if (p == weak_l1_marker) return weak_l1_norm(s);
    return lp_norm(s, p);
}

HardyValue hardy_norm(const MartingaleSequence& x, double p,
                      const std::vector<Decomposition>& candidates) {
    if (p < 1.0) throw std::invalid_argument("hardy_norm: p must be >= 1");
    DifferenceSequence dx = differences(x);
    HardyValue out;
    if (p >= 2.0) {
        out.value = std::max(sequence_norm(dx, Side::Column, p),
                             sequence_norm(dx, Side::Row, p));
        out.exact = true;
        return out;
    }
    const double col_all = sequence_norm(dx, Side::Column, p);
    const double row_all = sequence_norm(dx, Side::Row, p);
    out.value = std::min(col_all, row_all);
    out.attaining_candidate = col_all <= row_all ? -2 : -1;  // (x,0) / (0,x)
    for (size_t c = 0; c < candidates.size(); ++c) {
        const auto& [y, z] = candidates[c];
        if (y.length() != x.length() || z.length() != x.length())
            throw std::invalid_argument("hardy_norm: candidate length mismatch");
        for (int n = 1; n <= x.length(); ++n) {
            double res = (y.term(n) + z.term(n) - x.term(n)).op_norm();
            if (res > 1e-8 * (1.0 + x.term(n).max_abs()))
                throw std::invalid_argument("hardy_norm: candidate is not a decomposition of x");
        }
        double v = sequence_norm(differences(y), Side::Column, p) +
                   sequence_norm(differences(z), Side::Row, p);
        if (v < out.value) {
            out.value = v;
            out.attaining_candidate = static_cast<int>(c);
        }
    }
    return out;
}

bool is_supermartingale(const MartingaleSequence& x, const Tolerances& tol) {
    double scale = 0.0;
    for (const auto& t : x.terms) {
        if (!t.is_hermitian(tol))
            throw std::invalid_argument("is_supermartingale: terms must be Hermitian");
        scale = std::max(scale, t.max_abs());
    }
    for (int n = 1; n < x.length(); ++n) {
        Operator gap = x.term(n) - x.filtration->expect(n, x.term(n + 1));
        SpectralDecomposition sd = spectral_decomposition(gap, tol);
        double min_ev = sd.eigenvalues.empty() ? 0.0 : sd.eigenvalues.back();
        if (min_ev < -tol.psd_tol * (1.0 + scale)) return false;
    }
    return true;
}

namespace {

MartingaleSequence from_scaled_positive(const Filtration& f, Operator x_inf,
                                        double norm1) {
    double t = std::real(x_inf.trace());
    if (t <= 0.0) throw std::runtime_error("positive martingale generator: zero trace");
    return from_final(f, (norm1 / t) * x_inf);
}

}  // namespace

MartingaleSequence random_positive_martingale(const Filtration& f,
                                              std::uint64_t seed, double norm1) {
    if (norm1 <= 0.0)
        throw std::invalid_argument("random_positive_martingale: norm1 must be > 0");
    Rng rng(seed);
    Operator g = ginibre(f.context(), rng);
    return from_scaled_positive(f, g.adjoint() * g, norm1);
}

MartingaleSequence random_spiky_martingale(const Filtration& f,
                                           std::uint64_t seed, double norm1) {
    if (norm1 <= 0.0)
        throw std::invalid_argument("random_spiky_martingale: norm1 must be > 0");
    Rng rng(seed);
    const int n = f.context().dim;
    Matrix d = Matrix::Zero(n, n);
    for (int i = 0; i < n; ++i) d(i, i) = 0.01 + 0.02 * rng.uniform();
    const int spikes = 1 + static_cast<int>(rng.uniform() * std::min(3, n));
    for (int s = 0; s < spikes; ++s) {
        int i = static_cast<int>(rng.uniform() * n);
        d(i, i) = 1.0 + 20.0 * rng.uniform();
    }
    Operator u = haar_unitary(f.context(), rng);
    Operator x_inf(f.context(), Matrix(u.mat() * d * u.mat().adjoint()));
    return from_scaled_positive(f, x_inf, norm1);
}

}  // namespace ncmart
