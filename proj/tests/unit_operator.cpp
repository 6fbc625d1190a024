#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "ncmart/operator.hpp"

using namespace ncmart;

TEST_CASE("normalized trace") {
    TracialContext m4{4};
    CHECK(Operator::identity(m4).trace() == Complex(1.0, 0.0));

    TracialContext m2{2};
    CHECK(Operator::matrix_unit(m2, 0, 0).trace() == Complex(0.5, 0.0));

    Matrix x(2, 2);
    x << 1, 2, 3, 4;
    CHECK(Operator(m2, x).trace() == Complex(2.5, 0.0));
}

TEST_CASE("trace is positive and faithful") {
    TracialContext ctx{5};
    Rng rng(3);
    for (int i = 0; i < 20; ++i) {
        Operator g = ginibre(ctx, rng);
        double v = std::real((g.adjoint() * g).trace());
        CHECK(v >= 0.0);
        CHECK(std::abs(std::imag((g.adjoint() * g).trace())) < 1e-14);
    }
    Operator z = Operator::zero(ctx);
    CHECK(std::abs((z.adjoint() * z).trace()) == 0.0);
}

TEST_CASE("context mismatch rejected") {
    Operator a = Operator::identity(TracialContext{2});
    Operator b = Operator::identity(TracialContext{3});
    CHECK_THROWS_AS(a + b, std::invalid_argument);
    CHECK_THROWS_AS(a * b, std::invalid_argument);
    CHECK_THROWS_AS(a.inner(b), std::invalid_argument);
}

TEST_CASE("predicates") {
    TracialContext m2{2};
    CHECK(Operator::identity(m2).is_projection());
    CHECK(Operator::matrix_unit(m2, 0, 0).is_projection());
    CHECK_FALSE(Operator::matrix_unit(m2, 0, 1).is_hermitian());

    Rng rng(11);
    Operator g = ginibre(m2, rng);
    CHECK((g.adjoint() * g).is_positive());
}

TEST_CASE("haar unitary is unitary and deterministic") {
    TracialContext ctx{6};
    Rng a(42), b(42);
    Operator u = haar_unitary(ctx, a);
    Operator v = haar_unitary(ctx, b);
    CHECK((u - v).max_abs() == 0.0);
    CHECK((u * u.adjoint() - Operator::identity(ctx)).max_abs() < 1e-12);
}
