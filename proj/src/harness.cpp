#include "ncmart/harness.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <stdexcept>

#include "ncmart/spectral.hpp"
#include "ncmart/truncation.hpp"

namespace ncmart {

using nlohmann::json;

namespace {

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string fmt_p(double p) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", p);
    return buf;
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
    static const std::vector<std::string> known = {
        "dimension", "depth", "kind", "trials", "seed", "p_grid", "alpha",
        "beta", "spiky_fraction", "out", "hermiticity_tol", "psd_tol",
        "projection_tol", "span_residual_tol"};
    for (auto it = j.begin(); it != j.end(); ++it)
        if (std::find(known.begin(), known.end(), it.key()) == known.end())
            throw std::invalid_argument("config: unknown key '" + it.key() + "'");
    ExperimentConfig c;
    if (j.contains("dimension")) c.dim = j["dimension"].get<int>();
    if (j.contains("depth")) c.depth = j["depth"].get<int>();
    if (j.contains("kind")) c.kind = j["kind"].get<std::string>();
    if (j.contains("trials")) c.trials = j["trials"].get<int>();
    if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
    if (j.contains("p_grid")) c.p_grid = j["p_grid"].get<std::vector<double>>();
    if (j.contains("alpha")) c.alpha = j["alpha"].get<double>();
    if (j.contains("beta")) c.beta = j["beta"].get<double>();
    if (j.contains("spiky_fraction")) c.spiky_fraction = j["spiky_fraction"].get<double>();
    if (j.contains("out")) c.out_dir = j["out"].get<std::string>();
    if (j.contains("hermiticity_tol")) c.tol.hermiticity_tol = j["hermiticity_tol"].get<double>();
    if (j.contains("psd_tol")) c.tol.psd_tol = j["psd_tol"].get<double>();
    if (j.contains("projection_tol")) c.tol.projection_tol = j["projection_tol"].get<double>();
    if (j.contains("span_residual_tol")) c.tol.span_residual_tol = j["span_residual_tol"].get<double>();
    c.validate();
    return c;
}

json ExperimentConfig::to_json() const {
    return json{{"dimension", dim},   {"depth", depth},
                {"kind", kind},       {"trials", trials},
                {"seed", seed},       {"p_grid", p_grid},
                {"alpha", alpha},     {"beta", beta},
                {"spiky_fraction", spiky_fraction}, {"out", out_dir}};
}

void ExperimentConfig::validate() const {
    if (dim < 1 || depth < 1 || trials < 0)
        throw std::invalid_argument("config: dimension, depth, trials invalid");
    if (alpha <= 0.0 || alpha >= 1.0 || beta <= 0.0 || beta >= 1.0)
        throw std::invalid_argument("config: alpha, beta must be in (0,1)");
    if (spiky_fraction < 0.0 || spiky_fraction > 1.0)
        throw std::invalid_argument("config: spiky_fraction must be in [0,1]");
    for (double p : p_grid)
        if (p <= 1.0)
            throw std::invalid_argument("config: p_grid entries must be > 1");
    if (kind != "tensor" && kind != "dyadic_diagonal" && kind != "conjugated")
        throw std::invalid_argument("config: unknown filtration kind '" + kind + "'");
}

void ExperimentReport::add(int trial, const std::string& check, double lhs,
                           double rhs, bool pass) {
    double ratio = rhs != 0.0 ? lhs / rhs : (lhs == 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    rows.push_back({trial, check, lhs, rhs, ratio, pass});
}

std::map<std::string, CheckSummary> ExperimentReport::summarize() const {
    std::map<std::string, CheckSummary> s;
    for (const auto& r : rows) {
        auto& c = s[r.check];
        c.max_ratio = std::max(c.max_ratio, r.ratio);
        c.pass_count += r.pass ? 1 : 0;
        c.total += 1;
    }
    return s;
}

bool ExperimentReport::all_pass() const {
    for (const auto& r : rows)
        if (!r.pass) return false;
    return true;
}

double ExperimentReport::max_ratio(const std::string& check) const {
    double m = 0.0;
    for (const auto& r : rows)
        if (r.check == check) m = std::max(m, r.ratio);
    return m;
}

std::string ExperimentReport::to_csv() const {
    std::string out = "trial,check,lhs,rhs,ratio,pass\n";
    for (const auto& r : rows) {
        out += std::to_string(r.trial) + "," + r.check + "," + fmt_double(r.lhs) +
               "," + fmt_double(r.rhs) + "," + fmt_double(r.ratio) + "," +
               (r.pass ? "1" : "0") + "\n";
    }
    return out;
}

json ExperimentReport::summary_json() const {
    json checks = json::object();
    for (const auto& [name, c] : summarize())
        checks[name] = {{"max_ratio", c.max_ratio},
                        {"pass_count", c.pass_count},
                        {"total", c.total}};
    return json{{"checks", checks},
                {"all_pass", all_pass()},
                {"wall_seconds", wall_seconds}};
}

void ExperimentReport::write(const std::string& out_dir) const {
    {
        std::ofstream f(out_dir + "/report.csv", std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + out_dir + "/report.csv");
        f << to_csv();
    }
    {
        std::ofstream f(out_dir + "/summary.json", std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + out_dir + "/summary.json");
        f << summary_json().dump(2) << "\n";
    }
}

Filtration config_filtration(const ExperimentConfig& c) {
    FiltrationDescriptor d;
    d.kind = c.kind;
    d.dim = c.dim;
    d.depth = c.depth;
    d.seed = c.seed;
    if (c.kind == "tensor" && c.dim != (1 << c.depth))
        throw std::invalid_argument("config: tensor filtration requires dimension 2^depth");
    return build_filtration(d);
}

MartingaleSequence draw_trial_martingale(const ExperimentConfig& c,
                                         const Filtration& f, int trial) {
    std::uint64_t s = Rng::subseed(c.seed, static_cast<std::uint64_t>(trial));
    Rng chooser(s);
    bool spiky = chooser.uniform() < c.spiky_fraction;
    std::uint64_t gen_seed = Rng::subseed(s, 1);
    return spiky ? random_spiky_martingale(f, gen_seed, 1.0)
                 : random_positive_martingale(f, gen_seed, 1.0);
}

namespace {

double theoretical_k() {
    // K = 8 K0, K0 = 2 C1, C1 = 2 C0.
    static const double k = 32.0 * theoretical_constant_c0(1e-2).c0;
    return k;
}

// Spectral family of a random Hermitian operator: one cell per eigenvalue
// cluster, grouped down to at most max_cells ordered blocks.
ProjectionFamily random_complete_family(TracialContext ctx, Rng& rng,
                                        int max_cells, const Tolerances& tol) {
    SpectralDecomposition sd = spectral_decomposition(random_hermitian(ctx, rng), tol);
    const int m = static_cast<int>(sd.projections.size());
    const int cells = std::min(max_cells, m);
    std::vector<Operator> ps;
    for (int c = 0; c < cells; ++c) {
        int lo = c * m / cells, hi = (c + 1) * m / cells;
        Operator acc = Operator::zero(ctx);
        for (int k = lo; k < hi; ++k) acc = acc + sd.projections[k];
        ps.push_back(snap_projection(acc, tol));
    }
    return ProjectionFamily(ctx, std::move(ps), tol);
}

void check_lemma11(ExperimentReport& rep, int trial, TracialContext ctx, Rng& rng) {
    double worst_lhs = 0.0, worst_rhs = 1.0, worst_margin = 1e300;
    bool pass = true;
    for (int s = 0; s < 5; ++s) {
        Operator a = random_hermitian(ctx, rng);
        Operator b = random_hermitian(ctx, rng);
        double lambda = 0.2 + 2.8 * rng.uniform();
        double alpha = 0.05 + 0.9 * rng.uniform();
        double beta = 0.05 + 0.9 * rng.uniform();
        SplittingReport r = splitting_inequality_check(a, b, lambda, alpha, beta);
        pass = pass && r.pass;
        if (r.rhs - r.lhs < worst_margin) {
            worst_margin = r.rhs - r.lhs;
            worst_lhs = r.lhs;
            worst_rhs = r.rhs;
        }
    }
    rep.add(trial, "lemma11", worst_lhs, worst_rhs, pass);
}

void check_lemma12(ExperimentReport& rep, int trial, TracialContext ctx, Rng& rng,
                   const Tolerances& tol) {
    ProjectionFamily P = random_complete_family(ctx, rng, 4, tol);
    Operator x = ginibre(ctx, rng);
    Operator y = ginibre(ctx, rng);
    const double slack = 1e-9;

    // (ii) DT = TD = D
    double r_ii = std::max(
        (diagonal_part(P, triangular_truncate(P, x)) - diagonal_part(P, x)).op_norm(),
        (triangular_truncate(P, diagonal_part(P, x)) - diagonal_part(P, x)).op_norm());
    rep.add(trial, "lemma12_ii", r_ii, slack, r_ii <= slack);

    // (iii) D(ab) = D(a)D(b) for a, b in the range of T
    Operator a = triangular_truncate(P, x);
    Operator b = triangular_truncate(P, y);
    double r_iii =
        (diagonal_part(P, a * b) - diagonal_part(P, a) * diagonal_part(P, b)).op_norm();
    rep.add(trial, "lemma12_iii", r_iii, slack, r_iii <= slack);

    // (iv) invertible upper-triangular with Hermitian diagonal
    Operator h = random_hermitian(ctx, rng);
    Operator upper = strict_upper(P, x) + diagonal_part(P, h) +
                     (4.0 + h.op_norm()) * Operator::identity(ctx);
    Operator inv(ctx, Matrix(upper.mat().inverse()));
    Operator d_inv(ctx, Matrix(diagonal_part(P, upper).mat().inverse()));
    double r_iv = (d_inv - diagonal_part(P, inv)).op_norm();
    rep.add(trial, "lemma12_iv", r_iv, slack, r_iv <= slack);

    // corrected (v): x + iH(x) = 2T(x) - D(x) for Hermitian x
    Operator hx = hilbert_op(P, h);
    double r_v = (h + Complex(0.0, 1.0) * hx + diagonal_part(P, h) -
                  2.0 * triangular_truncate(P, h))
                     .op_norm();
    rep.add(trial, "lemma12_v", r_v, slack, r_v <= slack);

    // literal (v) diagnostic: H as printed vanishes on Hermitian x, so the
    // printed identity x + iH = 2T fails whenever T(x) != x/2. Reported,
    // not asserted.
    Operator literal_h = Complex(0.0, -1.0) *
                         (triangular_truncate(P, h) - triangular_truncate(P, h.adjoint()));
    double literal_gap =
        (h + Complex(0.0, 1.0) * literal_h - 2.0 * triangular_truncate(P, h)).op_norm();
    rep.add(trial, "lemma12_v_literal_gap", literal_gap, slack, true);

    // (vi) tau(Dx) = tau(x) for complete P
    double r_vi = std::abs(diagonal_part(P, x).trace() - x.trace());
    rep.add(trial, "lemma12_vi", r_vi, slack, r_vi <= slack);

    // (i) || (1 + x + iH(x))^{-1} || <= 1 for PSD x, lambda = 1
    Operator g = ginibre(ctx, rng);
    Operator psd = g.adjoint() * g;
    Operator m = Operator::identity(ctx) + psd + Complex(0.0, 1.0) * hilbert_op(P, psd);
    double r_i = Operator(ctx, Matrix(m.mat().inverse())).op_norm();
    rep.add(trial, "lemma12_i", r_i, 1.0, r_i <= 1.0 + slack);
}

void check_cuculescu(ExperimentReport& rep, int trial, const MartingaleSequence& x,
                     const DyadicFamilies& fam, const Tolerances& tol) {
    const TracialContext ctx = x.terms.front().context();
    const double l1 = x.l1_norm();
    for (int k = 0; k <= fam.k_max; ++k) {
        const CuculescuResult& cu = fam.runs[k];
        double r_a = 0.0, r_b = 0.0, c_excess = 0.0, dec_excess = 0.0;
        Operator q_prev = Operator::identity(ctx);
        for (int n = 1; n <= x.length(); ++n) {
            const Operator& q = cu.q(n);
            r_a = std::max(r_a, (x.filtration->expect(n, q) - q).op_norm());
            Operator comp = q_prev * x.term(n) * q_prev;
            r_b = std::max(r_b, (q * comp - comp * q).op_norm());
            SpectralDecomposition sd = spectral_decomposition(
                q * x.term(n) * q - cu.lambda * q, tol);
            if (!sd.eigenvalues.empty())
                c_excess = std::max(c_excess, sd.eigenvalues.front());
            SpectralDecomposition dd = spectral_decomposition(q_prev - q, tol);
            if (!dd.eigenvalues.empty())
                dec_excess = std::max(dec_excess, -dd.eigenvalues.back());
            q_prev = q;
        }
        double psd_slack = tol.psd_tol * (1.0 + lp_norm(x.final(), std::numeric_limits<double>::infinity()));
        rep.add(trial, "prop32_a", r_a, tol.projection_tol, r_a <= tol.projection_tol);
        rep.add(trial, "prop32_b", r_b, tol.projection_tol, r_b <= tol.projection_tol);
        rep.add(trial, "prop32_c", c_excess, psd_slack, c_excess <= psd_slack);
        rep.add(trial, "prop32_dec", dec_excess, tol.projection_tol,
                dec_excess <= tol.projection_tol);
        double tail = 1.0 - std::real(cu.q_final.trace());
        double bound = l1 / cu.lambda;
        rep.add(trial, "prop32_d", tail, bound, tail <= bound + 1e-9);
    }
}

void check_dyadic(ExperimentReport& rep, int trial, const MartingaleSequence& x,
                  const DyadicFamilies& fam, const Tolerances& tol) {
    const TracialContext ctx = x.terms.front().context();
    double r_a = 0.0, r_b = 0.0, c_excess = 0.0;
    for (int n = 1; n <= x.length(); ++n) {
        const auto& cells = fam.cells[n - 1];
        Operator sum = Operator::zero(ctx);
        for (const auto& p : cells) {
            r_a = std::max(r_a, (x.filtration->expect(n, p) - p).op_norm());
            sum = sum + p;
        }
        r_b = std::max(r_b, (sum - Operator::identity(ctx)).op_norm());
        Operator partial = Operator::zero(ctx);
        for (int n0 = 0; n0 <= fam.k_max; ++n0) {
            partial = partial + cells[n0];
            SpectralDecomposition sd =
                spectral_decomposition(fam.runs[n0].q(n) - partial, tol);
            if (!sd.eigenvalues.empty())
                c_excess = std::max(c_excess, -sd.eigenvalues.back());
        }
    }
    rep.add(trial, "prop33_a", r_a, tol.projection_tol, r_a <= tol.projection_tol);
    rep.add(trial, "prop33_b", r_b, tol.projection_tol, r_b <= tol.projection_tol);
    rep.add(trial, "prop33_c", c_excess, tol.projection_tol,
            c_excess <= tol.projection_tol);
}

void check_replay(ExperimentReport& rep, int trial, const MartingaleSequence& x,
                  int k_max, double alpha, double beta, const Tolerances& tol) {
    std::map<std::string, InequalityRecord> worst;
    for (int n0 = 0; n0 <= k_max; ++n0) {
        ProofReplayReport r = proof_replay(x, n0, alpha, beta, tol);
        for (const auto& rec : r.records) {
            auto it = worst.find(rec.name);
            if (it == worst.end() || rec.margin < it->second.margin)
                worst[rec.name] = rec;
        }
    }
    for (const auto& [name, rec] : worst)
        rep.add(trial, "replay_" + name, rec.lhs, rec.rhs, rec.pass);
}

}  // namespace

ExperimentReport run_verification_suite(const ExperimentConfig& config) {
    config.validate();
    auto t0 = std::chrono::steady_clock::now();
    ExperimentReport rep;
    Filtration f = config_filtration(config);
    const TracialContext ctx = f.context();
    const double k_theory = theoretical_k();

    for (int trial = 0; trial < config.trials; ++trial) {
        MartingaleSequence x = draw_trial_martingale(config, f, trial);
        Rng aux(Rng::subseed(config.seed, 0x10000u + trial));

        check_lemma11(rep, trial, ctx, aux);
        check_lemma12(rep, trial, ctx, aux, config.tol);

        DecompositionResult res = decompose(x, config.tol);
        TheoremReport tr = verify_theorem31(res, x, config.tol);
        rep.add(trial, "thm31_i", tr.diff_residual, 1e-10, tr.diff_residual <= 1e-10);
        rep.add(trial, "thm31_ii", tr.reconstruction, 1e-10, tr.reconstruction <= 1e-10);
        rep.add(trial, "thm31_iii", tr.l2_value, tr.l2_bound,
                tr.l2_value <= tr.l2_bound + 1e-9);
        rep.add(trial, "thm31_iv", tr.weak_value, tr.weak_bound,
                tr.weak_ratio <= k_theory);
        rep.add(trial, "lemma34", tr.lemma34_residual, 1e-9,
                tr.lemma34_residual <= 1e-9);

        // Positive draws decompose through a single positive part.
        const DyadicFamilies& fam = res.parts.front().families;
        check_cuculescu(rep, trial, x, fam, config.tol);
        check_dyadic(rep, trial, x, fam, config.tol);

        {
            std::vector<Operator> xs;
            std::vector<ProjectionFamily> Ps;
            for (int n = 1; n <= x.length(); ++n) {
                xs.push_back(x.term(n));
                Ps.push_back(fam.level_family(n, config.tol));
            }
            WeakTruncationReport wr = prop13_weak_bound(xs, Ps, config.tol);
            rep.add(trial, "prop13", wr.weak_norm, wr.bound, wr.pass);
        }

        check_replay(rep, trial, x, fam.k_max, config.alpha, config.beta, config.tol);
    }

    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

ExperimentReport bg_constant_sweep(const ExperimentConfig& config) {
    config.validate();
    auto t0 = std::chrono::steady_clock::now();
    ExperimentReport rep;
    Filtration f = config_filtration(config);
    for (int trial = 0; trial < config.trials; ++trial) {
        MartingaleSequence x = draw_trial_martingale(config, f, trial);
        DecompositionResult res = decompose(x, config.tol);
        std::vector<Decomposition> candidates = {{res.y, res.z}};
        for (double p : config.p_grid) {
            double lp = lp_norm(x.final(), p);
            HardyValue hv = hardy_norm(x, p, candidates);
            bool pass = true;
            if (p == 2.0) pass = std::abs(hv.value / lp - 1.0) <= 1e-8;
            rep.add(trial, "bg_p=" + fmt_p(p), hv.value, lp, pass);
        }
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

ExperimentReport llogl_check(const ExperimentConfig& config) {
    config.validate();
    auto t0 = std::chrono::steady_clock::now();
    ExperimentReport rep;
    Filtration f = config_filtration(config);
    for (int trial = 0; trial < config.trials; ++trial) {
        MartingaleSequence x = draw_trial_martingale(config, f, trial);
        DecompositionResult res = decompose(x, config.tol);
        std::vector<Decomposition> candidates = {{res.y, res.z}};
        HardyValue h1 = hardy_norm(x, 1.0, candidates);
        double bound = 1.0 + llogl_norm(x.final());
        rep.add(trial, "llogl", h1.value, bound, true);
    }
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;
}

json operator_to_json(const Operator& x) {
    const int n = x.dim();
    std::vector<std::vector<double>> re(n, std::vector<double>(n));
    std::vector<std::vector<double>> im(n, std::vector<double>(n));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) {
            re[i][j] = x.mat()(i, j).real();
            im[i][j] = x.mat()(i, j).imag();
        }
    return json{{"n", n}, {"re", re}, {"im", im}};
}

Operator operator_from_json(const json& j) {
    const int n = j.at("n").get<int>();
    auto re = j.at("re").get<std::vector<std::vector<double>>>();
    auto im = j.at("im").get<std::vector<std::vector<double>>>();
    Matrix m(n, n);
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) m(i, k) = Complex(re.at(i).at(k), im.at(i).at(k));
    return Operator(TracialContext{n}, std::move(m));
}

CalibrationBaseline CalibrationBaseline::from_json(const json& j) {
    CalibrationBaseline b;
    b.seed = j.at("seed").get<std::uint64_t>();
    b.khat = j.at("khat").get<double>();
    b.llogl_ratio = j.at("llogl_ratio").get<double>();
    for (auto it = j.at("alpha_products").begin(); it != j.at("alpha_products").end(); ++it)
        b.alpha_products[it.key()] = it.value().get<double>();
    return b;
}

json CalibrationBaseline::to_json() const {
    json ap = json::object();
    for (const auto& [k, v] : alpha_products) ap[k] = v;
    return json{{"seed", seed},
                {"khat", khat},
                {"llogl_ratio", llogl_ratio},
                {"alpha_products", ap}};
}

CalibrationBaseline CalibrationBaseline::load(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot read baseline file " + path);
    json j;
    f >> j;
    return from_json(j);
}

void CalibrationBaseline::save(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write baseline file " + path);
    f << to_json().dump(2) << "\n";
}

CalibrationBaseline calibrate(const ExperimentConfig& config) {
    CalibrationBaseline b;
    b.seed = config.seed;
    ExperimentReport verify = run_verification_suite(config);
    b.khat = verify.max_ratio("thm31_iv");
    b.llogl_ratio = llogl_check(config).max_ratio("llogl");
    ExperimentReport sweep = bg_constant_sweep(config);
    for (double p : config.p_grid)
        if (p < 2.0)
            b.alpha_products[fmt_p(p)] =
                sweep.max_ratio("bg_p=" + fmt_p(p)) * (p - 1.0);
    return b;
}

}  // namespace ncmart
