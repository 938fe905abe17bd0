#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qmirror/periods.hpp"

using namespace qm;

namespace {

QLaurent laurent(std::initializer_list<std::pair<int, QRat>> terms) {
    QLaurent p;
    for (auto& [j, v] : terms) p.add_to(j, v);
    return p;
}

struct Surface {
    PolygonData p;
    ClassLattice c;
    Potential f;
    Surface(const std::string& name, int N)
        : p(polygon_preset(name)), c(build_classes(p)), f(build_potential(p, c, N)) {}
};

}  // namespace

TEST_CASE("P2 quantum A-period anchors (constant-term algorithm)") {
    Surface s("P2", 9);
    GradedSeries a = a_period_const(s.f, 9);
    MultiDegree H = s.c.basis_class(0), H2{2}, H3{3};

    CHECK(a.coeff(H) == laurent({{1, -1}, {-1, -1}}));
    CHECK(a.coeff(H2) ==
          laurent({{4, -1}, {2, QRat(-7, 2)}, {0, -6}, {-2, QRat(-7, 2)}, {-4, -1}}));
    CHECK(a.coeff(H3) == laurent({{9, -1},
                                  {7, -3},
                                  {5, -12},
                                  {3, QRat(-88, 3)},
                                  {1, -48},
                                  {-1, -48},
                                  {-3, QRat(-88, 3)},
                                  {-5, -12},
                                  {-7, -3},
                                  {-9, -1}}));
    // q = 1 specialization: -2z - 15z^2 - ...
    CHECK(a.coeff(H).at_q1() == -2);
    CHECK(a.coeff(H2).at_q1() == -15);
    for (auto& [cls, v] : a.terms) CHECK(v.is_palindromic());
}

TEST_CASE("P2 curve solution Y(X)") {
    Surface s("P2", 9);
    XLaurentSeries Y = solve_Y(s.f, 9);
    MultiDegree zero = s.c.zero(), H = s.c.basis_class(0), H2{2};

    SUBCASE("order 0: Y_0 = 1 - X") {
        auto m = Y.class_part(zero);
        REQUIRE(m.size() == 2);
        CHECK(m.at(0) == QLaurent(1));
        CHECK(m.at(1) == QLaurent(-1));
    }
    SUBCASE("order 1: q^(1/2) Y_1 with Y_1 = -1/(X(1-q^(-1)X))") {
        // Coefficient of X^e is -q^(1/2) q^(-(e+1)).
        for (int e = -1; e <= 5; ++e)
            CHECK(Y.coeff(H, e) == QLaurent::q_half(-1 - 2 * e, -1));
        CHECK(Y.coeff(H, -2).is_zero());
    }
    SUBCASE("order 2: q Y_2 with Y_2 = -1/(X^2 q^(-1) (1-q^(-1)X)^2 (1-q^(-2)X))") {
        // -q^2 X^(-2) (1-q^(-1)X)^(-2) (1-q^(-2)X)^(-1)
        for (int e = -2; e <= 4; ++e) {
            QLaurent want;
            for (int i = 0; i <= e + 2; ++i) {
                int j = e + 2 - i;
                // (i+1) q^(-i) from the square, q^(-2j) from the last factor
                want += QLaurent::q_half(-2 * i - 4 * j, QRat(-(i + 1)));
            }
            CHECK(Y.coeff(H2, e) == want.shifted(4));
        }
        CHECK(Y.coeff(H2, -3).is_zero());
    }
    SUBCASE("Y solves the period equation") {
        CHECK(period_equation_residual(s.f, Y).is_zero());
    }
}

TEST_CASE("wavefunction algorithm reproduces the paper coefficients") {
    Surface s("P2", 9);
    GradedSeries a = a_period_wavefunction(s.f, 9);
    CHECK(a.coeff(s.c.basis_class(0)) == laurent({{1, -1}, {-1, -1}}));
    CHECK(a.coeff(MultiDegree{2}) ==
          laurent({{4, -1}, {2, QRat(-7, 2)}, {0, -6}, {-2, QRat(-7, 2)}, {-4, -1}}));
    CHECK(a.coeff(MultiDegree{3}).coeff(3) == QRat(-88, 3));
    CHECK(a.coeff(MultiDegree{3}).coeff(1) == QRat(-48));
}

TEST_CASE("dual-algorithm equality") {
    SUBCASE("P2 through degree 9") {
        Surface s("P2", 9);
        CHECK(a_period_const(s.f, 9) == a_period_wavefunction(s.f, 9));
    }
    SUBCASE("P1xP1 through degree 6") {
        Surface s("P1xP1", 6);
        GradedSeries a = a_period_const(s.f, 6);
        CHECK(a == a_period_wavefunction(s.f, 6));
        CHECK_FALSE(a.is_zero());
        for (auto& [cls, v] : a.terms) CHECK(v.is_palindromic());
    }
    SUBCASE("F2 through degree 6") {
        Surface s("F2", 6);
        CHECK(a_period_const(s.f, 6) == a_period_wavefunction(s.f, 6));
    }
    SUBCASE("X6a through degree 4 (a ray with Y-power -3)") {
        Surface s("X6a", 4);
        GradedSeries a = a_period_const(s.f, 4);
        CHECK(a == a_period_wavefunction(s.f, 4));
        CHECK_FALSE(a.is_zero());
    }
}

TEST_CASE("classical period") {
    Surface s("P2", 12);
    GradedSeries pi = classical_period(s.f, 12);
    SUBCASE("degree 1 and 2 coefficients") {
        CHECK(pi.coeff(s.c.basis_class(0)) == laurent({{1, 3}, {-1, 3}}));
        CHECK(pi.coeff(MultiDegree{2}) ==
              laurent({{4, 6}, {2, 21}, {0, 36}, {-2, 21}, {-4, 6}}));
    }
    SUBCASE("q = 1 gives (3d)!/(d!)^3") {
        long want[] = {6, 90, 1680, 34650};
        for (int d = 1; d <= 4; ++d)
            CHECK(pi.coeff(MultiDegree{d}).at_q1() == QRat(want[d - 1]));
    }
    SUBCASE("agrees with -Da") {
        GradedSeries a = a_period_const(s.f, 12);
        CHECK(pi == apply_D(a) * QLaurent(-1));
    }
}

TEST_CASE("descendant extraction") {
    Surface s("P2", 6);
    GradedSeries pi = classical_period(s.f, 6);
    DescendantTable t = descendants_extract(pi, 2);
    SUBCASE("genus-0 values 1 and 1/8") {
        CHECK(t.at({0, MultiDegree{1}}) == QRat(1));
        CHECK(t.at({0, MultiDegree{2}}) == QRat(1, 8));
    }
    SUBCASE("genus-1 value at H") {
        // (3q^(1/2)+3q^(-1/2)) = 6cos(hbar/2) = 6 - (3/4)hbar^2 + ...; /3!
        CHECK(t.at({1, MultiDegree{1}}) == QRat(-1, 8));
    }
    SUBCASE("no zero-class entry") {
        for (auto& [key, v] : t) CHECK(key.second != s.c.zero());
    }
    SUBCASE("non-palindromic input is rejected") {
        GradedSeries bad(s.c, 6);
        bad.add_term(s.c.basis_class(0), QLaurent::q_half(1));
        CHECK_THROWS_AS(descendants_extract(bad, 1), NonPalindromic);
    }
}

TEST_CASE("X-window") {
    Surface s("P2", 3);
    SUBCASE("class-0 exponents below 0 overflow") {
        XLaurentSeries x(s.c, 3);
        CHECK_THROWS_AS(x.add_term(s.c.zero(), -1, QLaurent(1)), XWindowOverflow);
    }
    SUBCASE("inverse is two-sided within the truncation") {
        XLaurentSeries S = xls_one(s.c, 3);
        S.add_term(s.c.zero(), 1, QLaurent(-1));
        S.add_term(s.c.basis_class(0), -1, QLaurent::q_half(1));
        XLaurentSeries inv = xls_inverse(S);
        CHECK(S * inv == xls_one(s.c, 3));
        CHECK(inv * S == xls_one(s.c, 3));
    }
}

TEST_CASE("convention violations are rejected") {
    // A smooth boundary containing (1,2): second coordinate above 1.
    PolygonData p = make_polygon(
        "bad", {{1, 0}, {1, 1}, {1, 2}, {0, 1}, {-1, 0}, {0, -1}});
    ClassLattice c = build_classes(p);
    Potential f;
    f.polygon = &p;
    f.classes = &c;
    f.N = 3;
    f.element = QTorusElement(c, 3);
    CHECK_THROWS_AS(solve_Y(f, 3), ConventionViolated);
}
