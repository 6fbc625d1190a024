#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "ncmart/spectral.hpp"

using namespace ncmart;

namespace {

Operator diag2(double a, double b) {
    Matrix m = Matrix::Zero(2, 2);
    m(0, 0) = a;
    m(1, 1) = b;
    return Operator(TracialContext{2}, m);
}

}  // namespace

TEST_CASE("spectral projection on diagonal operators") {
    Operator x = diag2(2.0, 0.0);
    Operator e11 = Operator::matrix_unit(TracialContext{2}, 0, 0);
    CHECK((spectral_projection(x, Interval::open_ray(1.0)) - e11).max_abs() < 1e-12);
    CHECK(spectral_projection(x, Interval::open_ray(3.0)).max_abs() < 1e-12);

    Operator id = Operator::identity(TracialContext{2});
    CHECK((spectral_projection(id, Interval{0.5, 2.0}) - id).max_abs() < 1e-12);
    CHECK_THROWS_AS(
        spectral_projection(Operator::matrix_unit(TracialContext{2}, 0, 1),
                            Interval::open_ray(0.0)),
        std::invalid_argument);
}

TEST_CASE("eigendecomposition reconstructs random Hermitian operators") {
    for (int n : {8, 32, 128}) {
        TracialContext ctx{n};
        Rng rng(1000 + n);
        Operator x = random_hermitian(ctx, rng);
        SpectralDecomposition sd = spectral_decomposition(x);
        Operator rebuilt = sd.apply(sd.eigenvalues);
        CHECK((rebuilt - x).op_norm() <= 1e-8 * (1.0 + x.max_abs()));
        // partition of unity, mutual orthogonality
        Operator sum = Operator::zero(ctx);
        for (const auto& p : sd.projections) sum = sum + p;
        CHECK((sum - Operator::identity(ctx)).op_norm() < 1e-10);
    }
}

TEST_CASE("singular value function") {
    SingularValueFunction mu = singular_value_function(diag2(3.0, 1.0));
    CHECK(mu.at(0.0) == 3.0);
    CHECK(mu.at(0.49) == 3.0);
    CHECK(mu.at(0.5) == 1.0);
    CHECK(singular_value_function(Operator::identity(TracialContext{2})).at(0.7) == 1.0);
    CHECK(singular_value_function(Operator::zero(TracialContext{2})).at(0.2) == 0.0);
}

TEST_CASE("distribution function") {
    Operator x = diag2(3.0, 1.0);
    CHECK(distribution(x, 2.0) == 0.5);
    CHECK(distribution(x, 3.0) == 0.0);
    CHECK(distribution(Operator::identity(TracialContext{2}), 0.5) == 1.0);
    CHECK_THROWS_AS(distribution(x, -1.0), std::invalid_argument);
}

TEST_CASE("mu and lambda are dual on the computed step functions") {
    TracialContext ctx{7};
    Rng rng(5);
    Operator x = ginibre(ctx, rng);
    SingularValueFunction mu = singular_value_function(x);
    for (int k = 0; k < ctx.dim; ++k) {
        double t = static_cast<double>(k) / ctx.dim;
        // mu_t = inf { s : lambda_s <= t }
        double inf_s = 0.0;
        bool found = false;
        for (double s : mu.values)
            if (distribution(mu, s) <= t) {
                inf_s = s;  // values descend, last hit is the infimum
                found = true;
            }
        CHECK(found);
        CHECK(mu.at(t) == doctest::Approx(inf_s).epsilon(1e-12));
    }
}

TEST_CASE("lp norms") {
    Operator x = diag2(3.0, 1.0);
    CHECK(lp_norm(x, 1.0) == doctest::Approx(2.0));
    CHECK(lp_norm(x, std::numeric_limits<double>::infinity()) == doctest::Approx(3.0));
    TracialContext ctx{4};
    Rng rng(2);
    Operator u = haar_unitary(ctx, rng);
    for (double p : {1.0, 2.0, 3.5})
        CHECK(lp_norm(u, p) == doctest::Approx(1.0));
    CHECK_THROWS_AS(lp_norm(x, 0.5), std::invalid_argument);
}

TEST_CASE("weak L1 quasi-norm") {
    CHECK(weak_l1_norm(diag2(3.0, 1.0)) == doctest::Approx(1.5));
    CHECK(weak_l1_norm(Operator::identity(TracialContext{2})) == doctest::Approx(1.0));
    // projection of trace t0
    Matrix m = Matrix::Zero(4, 4);
    m(0, 0) = 1.0;
    CHECK(weak_l1_norm(Operator(TracialContext{4}, m)) == doctest::Approx(0.25));
}

TEST_CASE("weak L1 below L1 on random operators") {
    Rng rng(77);
    for (int i = 0; i < 500; ++i) {
        TracialContext ctx{2 + static_cast<int>(rng.uniform() * 7)};
        Operator x = ginibre(ctx, rng);
        CHECK(weak_l1_norm(x) <= lp_norm(x, 1.0) + 1e-12);
    }
}

TEST_CASE("LlogL norm") {
    CHECK(llogl_norm(Operator::identity(TracialContext{2})) == doctest::Approx(1.0));
    CHECK(llogl_norm(Operator::zero(TracialContext{2})) == 0.0);
    auto G = [](double t) { return t - t * std::log(t); };
    double expected = 3.0 * G(0.5) + (1.0 - G(0.5));
    CHECK(llogl_norm(diag2(3.0, 1.0)) == doctest::Approx(expected));
    CHECK(expected == doctest::Approx(2.6931).epsilon(1e-4));
}

TEST_CASE("projection meet") {
    TracialContext m3{3};
    Matrix a = Matrix::Zero(3, 3), b = Matrix::Zero(3, 3);
    a(0, 0) = a(1, 1) = 1.0;
    b(1, 1) = b(2, 2) = 1.0;
    Operator pa(m3, a), pb(m3, b);
    Operator meet = projection_meet({pa, pb});
    CHECK((meet - Operator::matrix_unit(m3, 1, 1)).max_abs() < 1e-9);
    CHECK((projection_meet({pa, pa}) - pa).max_abs() < 1e-9);

    TracialContext m2{2};
    Operator meet0 = projection_meet(
        {Operator::matrix_unit(m2, 0, 0), Operator::matrix_unit(m2, 1, 1)});
    CHECK(meet0.max_abs() < 1e-9);

    CHECK_THROWS_AS(projection_meet({Operator::matrix_unit(m2, 0, 1)}),
                    std::invalid_argument);
}

TEST_CASE("projection meet vs product and PSD order, random commuting families") {
    Rng rng(8);
    for (int trial = 0; trial < 30; ++trial) {
        TracialContext ctx{6};
        // commuting diagonal projections
        Matrix a = Matrix::Zero(6, 6), b = Matrix::Zero(6, 6);
        for (int i = 0; i < 6; ++i) {
            if (rng.uniform() < 0.5) a(i, i) = 1.0;
            if (rng.uniform() < 0.5) b(i, i) = 1.0;
        }
        Operator pa(ctx, a), pb(ctx, b);
        Operator meet = projection_meet({pa, pb});
        CHECK((meet - pa * pb).max_abs() < 1e-9);
        for (const Operator& p : {pa, pb}) {
            SpectralDecomposition sd = spectral_decomposition(p - meet);
            CHECK(sd.eigenvalues.back() >= -1e-9);
        }
    }
}

TEST_CASE("splitting inequality examples") {
    Operator a = diag2(2.0, 0.0);
    SUBCASE("hand example") {
        SplittingReport r = splitting_inequality_check(a, a, 3.0, 0.5, 0.5);
        CHECK(r.lhs == doctest::Approx(0.5));
        CHECK(r.rhs == doctest::Approx(2.0));
        CHECK(r.pass);
    }
    SUBCASE("zero b always passes") {
        Operator z = Operator::zero(TracialContext{2});
        SplittingReport r = splitting_inequality_check(a, z, 1.0, 0.5, 0.5);
        CHECK(r.pass);
    }
    SUBCASE("parameter validation") {
        CHECK_THROWS_AS(splitting_inequality_check(a, a, -1.0, 0.5, 0.5),
                        std::invalid_argument);
        CHECK_THROWS_AS(splitting_inequality_check(a, a, 1.0, 1.5, 0.5),
                        std::invalid_argument);
    }
}

TEST_CASE("splitting inequality on a random ensemble") {
    Rng rng(2024);
    int checked = 0;
    for (int trial = 0; trial < 40; ++trial) {
        TracialContext ctx{5};
        Operator a = random_hermitian(ctx, rng);
        Operator b = random_hermitian(ctx, rng);
        for (int i = 1; i <= 5; ++i)
            for (int j = 1; j <= 5; ++j) {
                double alpha = i / 6.0, beta = j / 6.0;
                double lambda = 0.1 + 2.0 * rng.uniform();
                CHECK(splitting_inequality_check(a, b, lambda, alpha, beta).pass);
                ++checked;
            }
    }
    CHECK(checked == 1000);
}
