#include "ncmart/cuculescu.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ncmart/spectral.hpp"

namespace ncmart {

CuculescuResult cuculescu_projections(const MartingaleSequence& x, double lambda,
                                      const Tolerances& tol) {
    if (lambda <= 0.0)
        throw std::invalid_argument("cuculescu_projections: lambda must be > 0");
    CuculescuResult res;
    res.lambda = lambda;
    Operator q = Operator::identity(x.terms.front().context());
    for (int n = 1; n <= x.length(); ++n) {
        if (!x.term(n).is_positive(tol))
            throw std::invalid_argument("cuculescu_projections: martingale is not positive");
        Operator compressed = q * x.term(n) * q;
        Operator above = spectral_projection(compressed, Interval::open_ray(lambda), tol);
        q = snap_projection(q - above, tol);
        res.q_levels.push_back(q);
    }
    res.q_final = res.q_levels.back();
    return res;
}

int scale_cutoff(const MartingaleSequence& x) {
    double m = 0.0;
    for (const auto& t : x.terms) m = std::max(m, lp_norm(t, std::numeric_limits<double>::infinity()));
    int k = 0;
    while (std::pow(2.0, k) < m) ++k;
    return k;
}

namespace {

// Meets A_i = big-wedge_{k=i..k_max} q^(2^k) computed top-down, then the
// disjoint cells p_0 = A_0, p_i = A_i - A_{i-1}, remainder = 1 - A_{k_max}.
// The cells are carved against one incrementally grown orthonormal basis
// rather than by subtracting independently computed meets: the subtraction
// route leaves ~1e-8 overlaps between adjacent cells (eigenvector error
// across near-degenerate directions), which breaks family validation.
std::vector<Operator> carve_cells(const std::vector<Operator>& qs,
                                  const Tolerances& tol) {
    const int k_max = static_cast<int>(qs.size()) - 1;
    const TracialContext ctx = qs.front().context();
    const int dim = ctx.dim;
    // Each meet is taken jointly over its whole tail: iterating pairwise
    // meets compounds eigenvector error across stages and can drop a
    // direction that lies exactly in the joint intersection.
    std::vector<Operator> meets(qs.size(), qs.back());
    for (int i = k_max - 1; i >= 0; --i)
        meets[i] = projection_meet(
            std::vector<Operator>(qs.begin() + i, qs.end()), tol);

    Matrix basis(dim, 0);
    std::vector<Operator> cells;
    for (int i = 0; i <= k_max; ++i) {
        const int rank =
            static_cast<int>(std::llround(std::real(meets[i].trace()) * dim));
        const int fresh = rank - static_cast<int>(basis.cols());
        if (fresh < 0)
            throw std::runtime_error("carve_cells: meets are not nested");
        // New directions: top eigenvectors of the meet compressed to the
        // orthogonal complement of everything already carved.
        Matrix compl_p = Matrix::Identity(dim, dim) - basis * basis.adjoint();
        Eigen::SelfAdjointEigenSolver<Matrix> es(
            Matrix(compl_p * meets[i].mat() * compl_p));
        Matrix w(dim, fresh);
        for (int c = 0; c < fresh; ++c) {
            if (es.eigenvalues()(dim - 1 - c) < 0.5)
                throw std::runtime_error("carve_cells: degenerate meet direction");
            w.col(c) = es.eigenvectors().col(dim - 1 - c);
        }
        cells.push_back(Operator(ctx, Matrix(w * w.adjoint())));
        Matrix grown(dim, basis.cols() + fresh);
        grown << basis, w;
        basis = std::move(grown);
    }
    cells.push_back(Operator(
        ctx, Matrix(Matrix::Identity(dim, dim) - basis * basis.adjoint())));
    return cells;
}

}  // namespace

ProjectionFamily DyadicFamilies::level_family(int n, const Tolerances& tol) const {
    return ProjectionFamily(cells.front().front().context(), cells.at(n - 1), tol);
}

ProjectionFamily DyadicFamilies::global_family(const Tolerances& tol) const {
    return ProjectionFamily(global.front().context(), global, tol);
}

DyadicFamilies dyadic_families_at(const MartingaleSequence& x, int k_max,
                                  const Tolerances& tol) {
    if (k_max < 0) throw std::invalid_argument("dyadic_families_at: k_max must be >= 0");
    DyadicFamilies fam;
    fam.k_max = k_max;
    fam.martingale_l1 = x.l1_norm();
    for (int k = 0; k <= k_max; ++k)
        fam.runs.push_back(cuculescu_projections(x, std::pow(2.0, k), tol));
    for (int n = 1; n <= x.length(); ++n) {
        std::vector<Operator> qs;
        for (int k = 0; k <= k_max; ++k) qs.push_back(fam.runs[k].q(n));
        fam.cells.push_back(carve_cells(qs, tol));
    }
    std::vector<Operator> qg;
    for (int k = 0; k <= k_max; ++k) qg.push_back(fam.runs[k].q_final);
    fam.global = carve_cells(qg, tol);
    return fam;
}

DyadicFamilies dyadic_families(const MartingaleSequence& x, const Tolerances& tol) {
    return dyadic_families_at(x, scale_cutoff(x), tol);
}

Operator w_projection(const DyadicFamilies& fam, int n0, const Tolerances& tol) {
    if (n0 < 0 || n0 > fam.k_max)
        throw std::invalid_argument("w_projection: n0 out of range");
    Operator sum_form = Operator::zero(fam.global.front().context());
    for (int i = 0; i <= n0; ++i) sum_form = sum_form + fam.global[i];
    std::vector<Operator> qs;
    for (int k = n0; k <= fam.k_max; ++k) qs.push_back(fam.runs[k].q_final);
    Operator meet_form = projection_meet(qs, tol);
    // Dimensions must match exactly; the subspaces themselves only to the
    // eigenvector conditioning (gap between a near-intersection direction and
    // the true one can be ~1e-8, limiting the vectors to ~1e-8 accuracy).
    if (std::abs(std::real((sum_form - meet_form).trace())) > 1e-9 ||
        (sum_form - meet_form).op_norm() > 1e-4)
        throw std::runtime_error("w_projection: sum and meet forms disagree");
    return snap_projection(sum_form, tol);
}

double k1_constant(double a, double b) {
    return 4.0 / (a * (1.0 - a) * (1.0 - b) * b * b) +
           10.0 * std::sqrt(2.0) / ((1.0 - a) * (1.0 - a) * (1.0 - b) * std::sqrt(b));
}

bool ProofReplayReport::all_pass() const {
    for (const auto& r : records)
        if (!r.pass) return false;
    return true;
}

const InequalityRecord& ProofReplayReport::record(const std::string& name) const {
    for (const auto& r : records)
        if (r.name == name) return r;
    throw std::out_of_range("ProofReplayReport: no record named " + name);
}

namespace {

// Truncation restricted to the first n0+1 cells of an ordered family:
// sum_{j<=n0} sum_{i<=j} p_i x p_j.
Operator partial_truncate(const std::vector<Operator>& cells, int n0,
                          const Operator& x) {
    Matrix prefix = Matrix::Zero(x.dim(), x.dim());
    Matrix acc = Matrix::Zero(x.dim(), x.dim());
    for (int j = 0; j <= n0; ++j) {
        prefix += cells[j].mat();
        acc += prefix * x.mat() * cells[j].mat();
    }
    return Operator(x.context(), std::move(acc));
}

Operator mod_square(const Operator& a) { return a.adjoint() * a; }

void add_record(ProofReplayReport& rep, const std::string& name, double lhs,
                double rhs, double slack) {
    rep.records.push_back({name, lhs, rhs, rhs - lhs, lhs <= rhs + slack});
}

}  // namespace

ProofReplayReport proof_replay(const MartingaleSequence& x, int n0, double alpha,
                               double beta, const Tolerances& tol) {
    if (alpha <= 0.0 || alpha >= 1.0 || beta <= 0.0 || beta >= 1.0)
        throw std::invalid_argument("proof_replay: alpha, beta must be in (0,1)");

    ProofReplayReport rep;
    rep.n0 = n0;
    rep.alpha = alpha;
    rep.beta = beta;

    const double l1 = x.l1_norm();
    if (l1 <= 0.0) throw std::invalid_argument("proof_replay: zero martingale");
    rep.normalization = 1.0 / l1;
    MartingaleSequence xn = x.scaled(rep.normalization);

    DyadicFamilies fam = dyadic_families(xn, tol);
    if (n0 > fam.k_max)
        throw std::invalid_argument("proof_replay: n0 exceeds scale cutoff");
    DifferenceSequence dx = differences(xn);
    const int T = xn.length();

    // dy_n = T^(P^(n-1)) dx_n (level-1 family for n = 1).
    DifferenceSequence dy;
    dy.filtration = xn.filtration;
    for (int n = 1; n <= T; ++n) {
        const auto& cells = fam.cells[std::max(n - 1, 1) - 1];
        ProjectionFamily P(xn.terms.front().context(), cells, tol);
        dy.diffs.push_back(triangular_truncate(P, dx.diff(n)));
    }
    Operator s_cn = square_function(dy, Side::Column);

    const double thr = std::pow(2.0, n0);

    // gamma: truncations cut at the first n0+1 cells.
    Operator gamma = mod_square(partial_truncate(fam.cells[0], n0, dx.diff(1)));
    for (int n = 2; n <= T; ++n)
        gamma = gamma + mod_square(partial_truncate(fam.cells[n - 2], n0, dx.diff(n)));

    CuculescuResult cu = cuculescu_projections(xn, thr, tol);

    // Tail of the w projection: tau(1 - w_{n0}) <= 2 * 2^{-n0}.
    Operator w = w_projection(fam, n0, tol);
    add_record(rep, "w_tail",
               1.0 - std::real(w.trace()), 2.0 * std::pow(2.0, -n0), 1e-9);

    // Reduction to gamma.
    add_record(rep, "prop_a", distribution(s_cn, thr),
               distribution(gamma, beta * thr * thr) / alpha +
                   2.0 * std::pow(2.0, -n0) / (1.0 - alpha),
               1e-9);

    // gamma split pieces.
    auto q_at = [&](int n) {  // q_n with q_0 = 1
        return n == 0 ? Operator::identity(xn.terms.front().context()) : cu.q(n);
    };
    Operator gamma1 = mod_square(partial_truncate(fam.cells[0], n0, dx.diff(1)));
    Operator gamma2 = Operator::zero(gamma.context());
    Operator gamma3 = Operator::zero(gamma.context());
    for (int n = 2; n <= T; ++n) {
        const auto& cells = fam.cells[n - 2];
        Operator qn = q_at(n);
        Operator drop = q_at(n - 1) - qn;
        gamma1 = gamma1 +
                 2.0 * mod_square(partial_truncate(cells, n0, dx.diff(n) * qn));
        gamma2 = gamma2 +
                 4.0 * mod_square(partial_truncate(cells, n0, qn * dx.diff(n) * drop));
        gamma3 = gamma3 +
                 4.0 * mod_square(partial_truncate(cells, n0, drop * dx.diff(n) * drop));
    }
    {
        SpectralDecomposition sd =
            spectral_decomposition(gamma1 + gamma2 + gamma3 - gamma, tol);
        double min_ev = sd.eigenvalues.empty() ? 0.0 : sd.eigenvalues.back();
        double scale = 1.0 + gamma.max_abs();
        // rhs carries the scaled slack so the reported ratio stays finite.
        add_record(rep, "gamma_split", -min_ev, 1e-7 * scale, 0.0);
    }

    // Supermartingale square-function budget V.
    std::vector<Operator> comp;
    for (int n = 1; n <= T; ++n) comp.push_back(cu.q(n) * xn.term(n) * cu.q(n));
    double v = lp_norm(comp[0], 2.0);
    v *= v;
    for (int n = 2; n <= T; ++n) {
        double d = lp_norm(comp[n - 1] - comp[n - 2], 2.0);
        v += d * d;
    }

    add_record(rep, "prop_b", distribution(gamma, beta * thr * thr),
               2.0 * v / (alpha * beta * beta * thr * thr) +
                   k1_constant(alpha, beta) * std::pow(2.0, -n0),
               1e-9);

    add_record(rep, "prop_d", v, 2.0 * thr, 1e-8);

    MartingaleSequence compressed;
    compressed.filtration = xn.filtration;
    compressed.terms = comp;
    bool super = is_supermartingale(compressed, tol);
    add_record(rep, "supermartingale", super ? 0.0 : 1.0, 0.0, 0.5);

    return rep;
}

C0Result theoretical_constant_c0(double grid_step) {
    auto objective = [](double a, double b) {
        return 4.0 / (a * a * b * b) + k1_constant(a, b) / a + 2.0 / (1.0 - a);
    };
    C0Result best{std::numeric_limits<double>::infinity(), 0.5, 0.5};
    for (double a = grid_step; a < 1.0; a += grid_step)
        for (double b = grid_step; b < 1.0; b += grid_step) {
            double v = objective(a, b);
            if (v < best.c0) best = {v, a, b};
        }
    // Local refinement: shrink a centered grid until 1e-8 resolution.
    double range = grid_step;
    while (range > 1e-8) {
        C0Result cur = best;
        const int steps = 10;
        for (int i = -steps; i <= steps; ++i)
            for (int j = -steps; j <= steps; ++j) {
                double a = best.alpha + range * i / steps;
                double b = best.beta + range * j / steps;
                if (a <= 0.0 || a >= 1.0 || b <= 0.0 || b >= 1.0) continue;
                double v = objective(a, b);
                if (v < cur.c0) cur = {v, a, b};
            }
        best = cur;
        range *= 0.5;
    }
    return best;
}

}  // namespace ncmart
