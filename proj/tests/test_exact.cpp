#include <catch2/catch_amalgamated.hpp>
#include <bessellab/rational.hpp>
#include <bessellab/polynomial.hpp>
#include <bessellab/linalg.hpp>

using namespace bessellab;

TEST_CASE("make_rational canonicalizes") {
    CHECK(make_rational(2, 4) == make_rational(1, 2));
    CHECK(make_rational(-3, -6) == make_rational(1, 2));
    CHECK(make_rational(3, -6) == make_rational(-1, 2));
    CHECK(make_rational(0, 7) == 0);
    CHECK(make_rational(BigInt(10), BigInt(-15)) == make_rational(-2, 3));
}

TEST_CASE("factorial binomial and integer powers") {
    CHECK(factorial(0) == 1);
    CHECK(factorial(10) == 3628800);
    CHECK(binomial(10, 3) == 120);
    CHECK(binomial(10, 0) == 1);
    CHECK(binomial(5, 7) == 0);
    CHECK(pow_int(BigInt(2), 20) == 1048576);
    CHECK(pow_int(BigInt(-3), 3) == -27);
}

TEST_CASE("bernoulli numbers") {
    CHECK(bernoulli(0) == 1);
    CHECK(bernoulli(1) == make_rational(-1, 2));
    CHECK(bernoulli(2) == make_rational(1, 6));
    CHECK(bernoulli(3) == 0);
    CHECK(bernoulli(4) == make_rational(-1, 30));
    CHECK(bernoulli(12) == make_rational(-691, 2730));
    CHECK(bernoulli(20) == make_rational(-174611, 330));
    CHECK(bernoulli(21) == 0);
}

TEST_CASE("integer polynomial arithmetic") {
    IntPoly p{1, 0, 3};  // 3k^2 + 1
    IntPoly q{0, -2};    // -2k
    CHECK(p.degree() == 2);
    CHECK((p + q)(BigInt(5)) == 76 - 10);
    CHECK((p * q).degree() == 3);
    CHECK((p * q)(BigInt(2)) == 13 * (-4));
    CHECK((p - p).is_zero());
    CHECK((p - p).degree() == -1);
    CHECK(p.to_string() == "3*k^2 + 1");
    CHECK(q.to_string() == "-2*k");
    CHECK(IntPoly{}.to_string() == "0");
    CHECK(IntPoly::monomial(BigInt(7), 4)(BigInt(2)) == 112);
}

TEST_CASE("rational polynomial division and gcd") {
    PolyQ k = PolyQ::variable();
    PolyQ a = k * k - PolyQ(BigRational(1));            // k^2 - 1
    PolyQ b = k - PolyQ(BigRational(1));                // k - 1
    CHECK(div_exact(a, b) == k + PolyQ(BigRational(1)));
    CHECK_THROWS_AS(div_exact(a, k - PolyQ(BigRational(2))), StructuralError);

    PolyQ c = (k - PolyQ(BigRational(1))) * (k - PolyQ(BigRational(1)));
    CHECK(gcd(a, c) == b); // monic
    CHECK(gcd(a, k + PolyQ(BigRational(2))).degree() == 0);

    PolyQ shifted = (k * k).shifted(1);
    CHECK(shifted(BigRational(4)) == 25);
}

TEST_CASE("primitive integer form") {
    PolyQ k = PolyQ::variable();
    PolyQ p = make_rational(3, 2) * k + PolyQ(make_rational(9, 4));
    IntPoly ip = p.primitive_integer_form();
    CHECK(ip == IntPoly{3, 2});
    PolyQ m = make_rational(-1, 3) * k * k + PolyQ(make_rational(1, 6));
    CHECK(m.primitive_integer_form() == IntPoly{-1, 0, 2});
}

TEST_CASE("rational function reduction") {
    RatFunc k = RatFunc::variable();
    RatFunc one(BigRational(1));
    RatFunc r = (k * k - one) / (k - one);
    CHECK(r.den().degree() == 0);
    CHECK(r(BigRational(7)) == 8);

    RatFunc s = one / k + one / (k + one);
    CHECK(s(BigRational(1)) == make_rational(3, 2));
    CHECK_THROWS_AS(s(BigRational(0)), DomainError);
    CHECK((s - s).is_zero());

    RatFunc sh = (one / k).shifted(2);
    CHECK(sh(BigRational(1)) == make_rational(1, 3));
}

TEST_CASE("exact determinants") {
    MatQ h(4, 4);
    for (size_t i = 0; i < 4; ++i)
        for (size_t j = 0; j < 4; ++j)
            h(i, j) = make_rational(1, static_cast<long>(i + j + 1));
    CHECK(det(h) == make_rational(1, 6048000)); // Hilbert matrix

    MatQ s(2, 2);
    s(0, 0) = 1; s(0, 1) = 2; s(1, 0) = 2; s(1, 1) = 4;
    CHECK(det(s) == 0);
    CHECK(det(MatQ::identity(5)) == 1);
}

TEST_CASE("exact solve and inverse") {
    MatQ a(3, 3);
    long av[3][3] = {{2, 1, -1}, {-3, -1, 2}, {-2, 1, 2}};
    for (size_t i = 0; i < 3; ++i)
        for (size_t j = 0; j < 3; ++j) a(i, j) = av[i][j];
    MatQ b(3, 1);
    b(0, 0) = 8; b(1, 0) = -11; b(2, 0) = -3;
    MatQ x = solve(a, b);
    CHECK(x(0, 0) == 2);
    CHECK(x(1, 0) == 3);
    CHECK(x(2, 0) == -1);

    MatQ ainv = inverse(a);
    CHECK(a * ainv == MatQ::identity(3));

    MatQ sing(2, 2);
    sing(0, 0) = 1; sing(0, 1) = 2; sing(1, 0) = 2; sing(1, 1) = 4;
    CHECK_THROWS_AS(solve(sing, MatQ::identity(2)), StructuralError);
}

TEST_CASE("overdetermined consistent solve") {
    // third row = row0 + row1, so the system is consistent by construction
    MatQ a(3, 2);
    a(0, 0) = 1; a(0, 1) = 2;
    a(1, 0) = 3; a(1, 1) = make_rational(1, 2);
    a(2, 0) = 4; a(2, 1) = make_rational(5, 2);
    MatQ b(3, 1);
    b(0, 0) = 5;  // x = 1, y = 2
    b(1, 0) = 4;
    b(2, 0) = 9;
    MatQ x = solve_overdetermined_consistent(a, b);
    CHECK(x(0, 0) == 1);
    CHECK(x(1, 0) == 2);

    MatQ bad = b;
    bad(2, 0) = 10;
    CHECK_THROWS_AS(solve_overdetermined_consistent(a, bad), StructuralError);

    MatQ thin(3, 2);
    thin(0, 0) = 1; thin(0, 1) = 2;
    thin(1, 0) = 2; thin(1, 1) = 4;
    thin(2, 0) = 3; thin(2, 1) = 6;
    MatQ rhs(3, 1);
    rhs(0, 0) = 1; rhs(1, 0) = 2; rhs(2, 0) = 3;
    CHECK_THROWS_AS(solve_overdetermined_consistent(thin, rhs), StructuralError);
}

TEST_CASE("matrix apply and shape checks") {
    MatQ a(2, 3);
    a(0, 0) = 1; a(0, 1) = 2; a(0, 2) = 3;
    a(1, 0) = 0; a(1, 1) = 1; a(1, 2) = -1;
    std::vector<BigRational> v{BigRational(1), BigRational(1), BigRational(1)};
    auto y = a.apply(v);
    CHECK(y[0] == 6);
    CHECK(y[1] == 0);
    CHECK_THROWS_AS(det(a), StructuralError);
}
