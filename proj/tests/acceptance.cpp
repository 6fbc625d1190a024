// Acceptance gate: runs the twelve release criteria end to end and prints one
// PASS/FAIL line per criterion. Usage:
//   acceptance <calibration.json> <path-to-ncmart-cli>
// Exit status is the number of failed criteria.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "ncmart/harness.hpp"
#include "ncmart/spectral.hpp"
#include "ncmart/truncation.hpp"

using namespace ncmart;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void report(int idx, const std::string& name, bool pass, const std::string& detail) {
    std::printf("[%2d] %-42s %s  (%s)\n", idx, name.c_str(),
                pass ? "PASS" : "FAIL", detail.c_str());
    std::fflush(stdout);
    if (!pass) ++failures;
}

double elapsed(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

// ---- criterion 1: conditional-expectation axioms + tower --------------------

void criterion1() {
    auto t0 = std::chrono::steady_clock::now();
    std::vector<Filtration> filtrations;
    filtrations.push_back(tensor_filtration(4));
    filtrations.push_back(dyadic_diagonal_filtration(16, 4));
    {
        FiltrationDescriptor d;
        d.kind = "conjugated";
        d.dim = 16;
        d.depth = 4;
        d.seed = 5150;
        filtrations.push_back(build_filtration(d));
    }
    double worst = 0.0;
    bool pass = true;
    Rng rng(777);
    for (const Filtration& f : filtrations) {
        const TracialContext ctx = f.context();
        for (int probe = 0; probe < 100; ++probe) {
            Operator x = ginibre(ctx, rng);
            double budget = 1e-9 * (1.0 + x.op_norm());
            int n = 1 + static_cast<int>(rng.uniform() * f.depth());
            if (n > f.depth()) n = f.depth();
            const Subalgebra& s = f.level(n);
            Operator ex = s.expect(x);
            double r = 0.0;
            // unital, idempotent, trace-preserving, *-compatible
            r = std::max(r, (s.expect(Operator::identity(ctx)) -
                             Operator::identity(ctx)).op_norm());
            r = std::max(r, (s.expect(ex) - ex).op_norm());
            r = std::max(r, std::abs(ex.trace() - x.trace()));
            r = std::max(r, (s.expect(x.adjoint()) - ex.adjoint()).op_norm());
            // bimodule property over a random basis element
            const Operator& a =
                s.basis()[static_cast<size_t>(rng.uniform() * s.dim()) % s.basis().size()];
            r = std::max(r, (s.expect(a * x) - a * ex).op_norm());
            r = std::max(r, (s.expect(x * a) - ex * a).op_norm());
            // positivity
            Operator p = s.expect(x.adjoint() * x);
            SpectralDecomposition sd = spectral_decomposition(p);
            if (!sd.eigenvalues.empty())
                r = std::max(r, std::max(0.0, -sd.eigenvalues.back()));
            // tower: E_m E_n = E_m for m <= n
            int m = 1 + static_cast<int>(rng.uniform() * n);
            if (m > n) m = n;
            r = std::max(r, (f.expect(m, ex) - f.expect(m, x)).op_norm());
            worst = std::max(worst, r);
            pass = pass && r <= budget;
        }
    }
    double dt = elapsed(t0);
    pass = pass && dt < 5.0;
    report(1, "conditional-expectation axioms", pass,
           "max residual " + fmt(worst) + ", " + fmt(dt) + "s");
}

// ---- criteria 2/3/4/7/8/10: the default 200-trial verification run ----------

bool rows_pass(const ExperimentReport& rep, const std::string& check,
               double* worst_lhs = nullptr) {
    bool pass = true;
    double w = 0.0;
    for (const auto& r : rep.rows)
        if (r.check == check) {
            pass = pass && r.pass;
            w = std::max(w, r.lhs);
        }
    if (worst_lhs) *worst_lhs = w;
    return pass;
}

void verification_criteria(const CalibrationBaseline& baseline) {
    ExperimentConfig cfg;  // defaults: N = 16, T = 4, 200 trials, seed 271828
    auto t0 = std::chrono::steady_clock::now();
    ExperimentReport rep = run_verification_suite(cfg);
    double dt = elapsed(t0);

    double w_i = 0.0, w_ii = 0.0;
    bool c2 = rows_pass(rep, "thm31_i", &w_i) && rows_pass(rep, "thm31_ii", &w_ii) &&
              dt < 120.0;
    report(2, "decomposition reconstruction + differences", c2,
           "max residuals " + fmt(w_i) + "/" + fmt(w_ii) + ", " + fmt(dt) + "s");

    bool c3 = true;
    double worst_ratio = 0.0;
    for (const auto& r : rep.rows)
        if (r.check == "thm31_iii") {
            c3 = c3 && r.lhs <= r.rhs + 1e-9;
            worst_ratio = std::max(worst_ratio, r.ratio);
        }
    report(3, "square-function L2 bound, constant 2", c3,
           "max ratio " + fmt(worst_ratio));

    bool c4 = true;
    for (const char* name : {"prop32_a", "prop32_b", "prop32_c", "prop32_dec",
                             "prop32_d"})
        c4 = c4 && rows_pass(rep, name);
    report(4, "threshold-projection invariants (a)-(d)", c4,
           "tail-bound max ratio " + fmt(rep.max_ratio("prop32_d")));

    bool c7 = rows_pass(rep, "replay_prop_d") &&
              rows_pass(rep, "replay_supermartingale");
    report(7, "L2 budget + supermartingale compressions", c7,
           "budget max ratio " + fmt(rep.max_ratio("replay_prop_d")));

    double w34 = 0.0;
    bool c8 = rows_pass(rep, "lemma34", &w34);
    report(8, "square-of-truncation expansion identity", c8,
           "max residual " + fmt(w34));

    double khat = rep.max_ratio("thm31_iv");
    double k_theory = 32.0 * theoretical_constant_c0(1e-2).c0;
    bool c10 = std::isfinite(khat) && khat <= k_theory &&
               khat <= baseline.khat * 1.10;
    report(10, "weak-type constant regression bound", c10,
           "khat " + fmt(khat) + " vs theory " + fmt(k_theory) + ", baseline " +
               fmt(baseline.khat));
}

// ---- criterion 5: weak-type truncation bound on a mixed ensemble ------------

void criterion5() {
    auto t0 = std::chrono::steady_clock::now();
    Rng rng(424242);
    bool pass = true;
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
        int n = 4 + static_cast<int>(rng.uniform() * 29);  // N <= 32
        TracialContext ctx{n};
        int count = 1 + static_cast<int>(rng.uniform() * 4);
        if (count > 4) count = 4;
        std::vector<Operator> xs;
        std::vector<ProjectionFamily> Ps;
        for (int i = 0; i < count; ++i) {
            Operator g = ginibre(ctx, rng);
            xs.push_back(g.adjoint() * g);
            SpectralDecomposition sd = spectral_decomposition(random_hermitian(ctx, rng));
            const int m = static_cast<int>(sd.projections.size());
            const int cells = std::min(2 + static_cast<int>(rng.uniform() * 7), m);
            std::vector<Operator> ps;
            for (int c = 0; c < cells; ++c) {
                Operator acc = Operator::zero(ctx);
                for (int k = c * m / cells; k < (c + 1) * m / cells; ++k)
                    acc = acc + sd.projections[k];
                ps.push_back(snap_projection(acc));
            }
            Ps.emplace_back(ctx, std::move(ps));
        }
        WeakTruncationReport r = prop13_weak_bound(xs, Ps);
        pass = pass && r.pass;
        worst = std::max(worst, r.ratio);
    }
    double dt = elapsed(t0);
    pass = pass && dt < 120.0;
    report(5, "truncation weak-L1 bound, constant 5*sqrt(2)", pass,
           "max ratio " + fmt(worst) + ", " + fmt(dt) + "s");
}

// ---- criterion 6: splitting inequality + truncation identities --------------

void criterion6() {
    Rng rng(90210);
    bool pass = true;
    for (int s = 0; s < 1000; ++s) {
        int n = 2 + static_cast<int>(rng.uniform() * 15);
        TracialContext ctx{n};
        Operator a = random_hermitian(ctx, rng);
        Operator b = random_hermitian(ctx, rng);
        double lambda = 0.05 + 3.0 * rng.uniform();
        double alpha = 0.02 + 0.96 * rng.uniform();
        double beta = 0.02 + 0.96 * rng.uniform();
        pass = pass && splitting_inequality_check(a, b, lambda, alpha, beta).pass;
    }
    double worst = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        TracialContext ctx{8};
        SpectralDecomposition sd = spectral_decomposition(random_hermitian(ctx, rng));
        const int m = static_cast<int>(sd.projections.size());
        const int cells = std::min(4, m);
        std::vector<Operator> ps;
        for (int c = 0; c < cells; ++c) {
            Operator acc = Operator::zero(ctx);
            for (int k = c * m / cells; k < (c + 1) * m / cells; ++k)
                acc = acc + sd.projections[k];
            ps.push_back(snap_projection(acc));
        }
        ProjectionFamily P(ctx, std::move(ps));
        Operator x = ginibre(ctx, rng);
        Operator y = ginibre(ctx, rng);
        Operator h = random_hermitian(ctx, rng);

        Operator d = diagonal_part(P, x);
        worst = std::max(worst,
                         (diagonal_part(P, triangular_truncate(P, x)) - d).op_norm());
        worst = std::max(worst, (triangular_truncate(P, d) - d).op_norm());
        Operator ta = triangular_truncate(P, x);
        Operator tb = triangular_truncate(P, y);
        worst = std::max(worst, (diagonal_part(P, ta * tb) -
                                 diagonal_part(P, ta) * diagonal_part(P, tb)).op_norm());
        worst = std::max(worst, std::abs(diagonal_part(P, x).trace() - x.trace()));
        Operator hx = hilbert_op(P, h);
        worst = std::max(worst, (h + Complex(0, 1) * hx + diagonal_part(P, h) -
                                 2.0 * triangular_truncate(P, h)).op_norm());
        Operator u = strict_upper(P, x) + diagonal_part(P, h) +
                     (4.0 + h.op_norm()) * Operator::identity(ctx);
        Operator inv(ctx, Matrix(u.mat().inverse()));
        Operator dinv(ctx, Matrix(diagonal_part(P, u).mat().inverse()));
        worst = std::max(worst, (dinv - diagonal_part(P, inv)).op_norm());
        Operator g = ginibre(ctx, rng);
        Operator psd = g.adjoint() * g;
        Operator mat = Operator::identity(ctx) + psd +
                       Complex(0, 1) * hilbert_op(P, psd);
        worst = std::max(worst,
                         Operator(ctx, Matrix(mat.mat().inverse())).op_norm() - 1.0);
    }
    pass = pass && worst <= 1e-9;
    report(6, "distribution splitting + truncation algebra", pass,
           "worst identity residual " + fmt(worst));
}

// ---- criterion 9: theoretical constant ---------------------------------------

void criterion9() {
    auto t0 = std::chrono::steady_clock::now();
    C0Result coarse = theoretical_constant_c0(1e-2);
    C0Result fine = theoretical_constant_c0(2e-3);
    double dt = elapsed(t0);
    bool pass = coarse.c0 <= 900.0 && fine.c0 <= 900.0 &&
                std::abs(coarse.c0 - fine.c0) < 1e-6 && dt < 10.0;
    report(9, "optimized constant <= 900 witness", pass,
           "c0 " + fmt(coarse.c0) + ", drift " + fmt(std::abs(coarse.c0 - fine.c0)) +
               ", " + fmt(dt) + "s");
}

// ---- criterion 11: Burkholder-Gundy sweep ------------------------------------

void criterion11(const CalibrationBaseline& baseline) {
    ExperimentConfig cfg;  // default p_grid {1.05, 1.1, 1.2, 1.5, 2, 3}
    ExperimentReport rep = bg_constant_sweep(cfg);
    bool pass = true;
    double p2_dev = 0.0;
    for (const auto& r : rep.rows)
        if (r.check == "bg_p=2") p2_dev = std::max(p2_dev, std::abs(r.ratio - 1.0));
    pass = pass && p2_dev <= 1e-8;
    std::string detail = "p=2 dev " + fmt(p2_dev);
    for (double p : {1.05, 1.1, 1.2, 1.5}) {
        char key[32];
        std::snprintf(key, sizeof(key), "bg_p=%g", p);
        double product = rep.max_ratio(key) * (p - 1.0);
        char bkey[16];
        std::snprintf(bkey, sizeof(bkey), "%g", p);
        auto it = baseline.alpha_products.find(bkey);
        bool ok = it != baseline.alpha_products.end() &&
                  product <= it->second * 1.10;
        pass = pass && ok;
        detail += ", a(" + std::string(bkey) + ")*(p-1)=" + fmt(product);
    }
    report(11, "constant-growth sweep vs baseline", pass, detail);
}

// ---- criterion 12: CLI byte-level determinism --------------------------------

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

void criterion12(const std::string& cli) {
    fs::path root = fs::temp_directory_path() / "ncmart_accept";
    fs::remove_all(root);
    fs::create_directories(root / "a");
    fs::create_directories(root / "b");
    fs::path cfg = root / "config.json";
    {
        std::ofstream f(cfg);
        f << R"({"dimension": 8, "depth": 3, "trials": 10, "seed": 4711})" << "\n";
    }
    bool pass = true;
    std::string detail;
    for (const char* sub : {"a", "b"}) {
        std::string cmd = "\"" + cli + "\" verify --config \"" + cfg.string() +
                          "\" --out \"" + (root / sub).string() +
                          "\" > /dev/null 2>&1";
        int rc = std::system(cmd.c_str());
        if (rc != 0) {
            pass = false;
            detail = "cli exit status " + std::to_string(rc);
        }
    }
    if (pass) {
        std::string a = slurp(root / "a" / "report.csv");
        std::string b = slurp(root / "b" / "report.csv");
        pass = !a.empty() && a == b;
        detail = pass ? std::to_string(a.size()) + " identical bytes"
                      : "report.csv differs between runs";
    }
    report(12, "repeat-run byte determinism", pass, detail);
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 3) {
        std::fprintf(stderr, "usage: acceptance <calibration.json> <ncmart-cli>\n");
        return 64;
    }
    CalibrationBaseline baseline;
    try {
        baseline = CalibrationBaseline::load(argv[1]);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "cannot load baseline: %s\n", e.what());
        return 65;
    }

    criterion1();
    verification_criteria(baseline);  // criteria 2, 3, 4, 7, 8, 10
    criterion5();
    criterion6();
    criterion9();
    criterion11(baseline);
    criterion12(argv[2]);

    std::printf("%s\n", failures == 0 ? "all criteria passed"
                                      : "criteria failed");
    return failures;
}
